// Shared kappa-Poincare deck fixture for integration tests.

use qdual_core::bialgebra::{cocommutator_from_r, LieAlgebraData, LieBialgebra, RMatrix};
use qdual_core::{Context, ParamId, Scalar};

// generator order: p0, p1, p2, p3, k1, k2, k3, j1, j2, j3
pub const P0: usize = 0;
pub const P: [usize; 3] = [1, 2, 3];
pub const K: [usize; 3] = [4, 5, 6];
pub const J: [usize; 3] = [7, 8, 9];

pub fn eps(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (2, 1, 0) | (1, 0, 2) | (0, 2, 1) => -1,
        _ => 0,
    }
}

pub fn ctx() -> Context {
    Context::new(
        &["z"],
        &["P0", "P1", "P2", "P3", "K1", "K2", "K3", "J1", "J2", "J3"],
    )
    .unwrap()
}

pub fn poincare_algebra() -> LieAlgebraData {
    let mut g = LieAlgebraData::new(10);
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for k in 0..3 {
                let e = eps(i, j, k);
                if e == 0 {
                    continue;
                }
                let s = Scalar::from_int(e);
                // [j_i, j_j] = eps j_k ; [j_i, p_j] = eps p_k ; [j_i, k_j] = eps k_k
                if i < j {
                    g.set_bracket(J[i], J[j], J[k], s.clone());
                }
                g.set_bracket(J[i], P[j], P[k], s.clone());
                g.set_bracket(J[i], K[j], K[k], s.clone());
                // [k_i, k_j] = -eps j_k
                if i < j {
                    g.set_bracket(K[i], K[j], J[k], s.neg());
                }
            }
        }
    }
    for i in 0..3 {
        // [p_i, k_j] = -delta_ij p0 ; [p0, k_i] = -p_i
        g.set_bracket(P[i], K[i], P0, Scalar::from_int(-1));
        g.set_bracket(P0, K[i], P[i], Scalar::from_int(-1));
    }
    g
}

pub fn kappa_bialgebra() -> LieBialgebra {
    let g = poincare_algebra();
    let mut r = RMatrix {
        dim: 10,
        comp: vec![vec![Scalar::zero(); 10]; 10],
    };
    let z = Scalar::param(ParamId(0));
    for i in 0..3 {
        r.comp[K[i]][P[i]] = z.clone();
        r.comp[P[i]][K[i]] = z.neg();
    }
    let f = cocommutator_from_r(&g, &r);
    LieBialgebra {
        algebra: g,
        cocommutator: f,
    }
}

