//! End-to-end derivation of the quantum sl(2,R) data through the book group:
//! dualization, group element, coproducts, the 45-unknown beta system, the
//! 5-parameter family, the unique Poisson-Lie bracket, the primed coordinates,
//! and the truncated quantum checks.

use std::collections::HashMap;

use qdual_core::bialgebra::{
    cocommutator_from_r, coboundary_solve, dualize, validate, CoboundaryResult, LieAlgebraData,
    LieBialgebra, RMatrix,
};
use qdual_core::coproduct::{derive_coproduct, find_recipes};
use qdual_core::expr::{Expr, LinForm};
use qdual_core::grouprep::{build_group_element, GroupElement, Representation};
use qdual_core::ncquant::{check_quantum_coassoc, check_quantum_hom, quantize};
use qdual_core::plsolver::{
    build_function_set, check_classical_limit, check_jacobi, impose_homomorphism,
    impose_linearization, verify_hom_identity, BracketTable,
};
use qdual_core::transform::{ambiguity_certificate, check_flip_symmetry, transport, CoordinateChange};
use qdual_core::{Context, CoordId, ParamId, Scalar};

fn z() -> Scalar {
    Scalar::param(ParamId(0))
}

fn ctx() -> Context {
    Context::new(&["z"], &["Jp", "Jm", "J3"]).unwrap()
}

fn sl2_bialgebra() -> LieBialgebra {
    let mut g = LieAlgebraData::new(3);
    g.set_bracket(2, 0, 0, Scalar::from_int(2));
    g.set_bracket(2, 1, 1, Scalar::from_int(-2));
    g.set_bracket(0, 1, 2, Scalar::from_int(1));
    let mut r = RMatrix {
        dim: 3,
        comp: vec![vec![Scalar::zero(); 3]; 3],
    };
    r.comp[0][1] = z();
    r.comp[1][0] = z().neg();
    let f = cocommutator_from_r(&g, &r);
    LieBialgebra {
        algebra: g,
        cocommutator: f,
    }
}

fn book_rep() -> Representation {
    let mut jp = vec![vec![Scalar::zero(); 3]; 3];
    jp[0][2] = Scalar::one();
    let mut jm = vec![vec![Scalar::zero(); 3]; 3];
    jm[1][2] = Scalar::one();
    let mut j3 = vec![vec![Scalar::zero(); 3]; 3];
    j3[0][0] = z().neg();
    j3[1][1] = z().neg();
    Representation {
        dim: 3,
        mats: vec![jp, jm, j3],
    }
}

fn book_group(coords: &[CoordId]) -> GroupElement {
    build_group_element(&book_rep(), &[0, 1, 2], coords, &[ParamId(0)]).unwrap()
}

#[test]
fn full_book_pipeline() {
    let _ctx = ctx();
    let coords = vec![CoordId(0), CoordId(1), CoordId(2)];
    let b = sl2_bialgebra();
    assert!(validate(&b).is_valid());

    // dual bialgebra and coboundary verdicts
    let dual = dualize(&b).unwrap();
    assert!(matches!(
        coboundary_solve(&b),
        CoboundaryResult::Coboundary { .. }
    ));
    assert!(matches!(
        coboundary_solve(&dual),
        CoboundaryResult::NotCoboundary
    ));

    // representation must satisfy the dual algebra brackets
    let rep = book_rep();
    rep.check_homomorphism(&dual.algebra.c).unwrap();
    assert!(rep.is_faithful());

    let g = book_group(&coords);
    let recipes = find_recipes(&g, &coords).unwrap();
    let map = derive_coproduct(&g, &recipes, &coords).unwrap();
    assert!(map.check_counit().is_empty());
    assert!(map.check_coassociativity().unwrap().is_empty());

    // function set {1, Jp, Jm, J3, e^{-zJ3}}: s = 5
    let fset = build_function_set(&g, &map, &coords);
    assert_eq!(fset.size(), 5);

    // beta system: 45 unknowns, solved to the six-parameter family of the
    // paper's general solution (beta_{1,2,5,5}, beta_{2,3,1,3}, beta_{2,3,1,5},
    // beta_{2,3,1,4}, beta_{1,3,1,4}, beta_{1,3,1,5})
    let sys = impose_homomorphism(&fset, &map, &coords).unwrap();
    assert_eq!(sys.indexer.unknown_count(), 45);
    assert_eq!(sys.family.dimension(), 6);

    // linearization picks the unique solution
    let solved = impose_linearization(&sys, &b.algebra.c, &coords).unwrap();
    let (table, beta) = (solved.table, solved.beta);

    // {J3, J+-} = +-2 J+-
    assert_eq!(
        table.get(2, 0),
        &Expr::coord(CoordId(0)).scalar_mul(&Scalar::from_int(2))
    );
    assert_eq!(
        table.get(2, 1),
        &Expr::coord(CoordId(1)).scalar_mul(&Scalar::from_int(-2))
    );
    // {J+, J-} = (1 - e^{-2zJ3})/(2z) + 2z Jp Jm
    let two_z = z().mul(&Scalar::from_int(2));
    let expected = Expr::one()
        .sub(&Expr::exp(LinForm::term(CoordId(2), two_z.neg())))
        .scalar_mul(&two_z.inv())
        .add(
            &Expr::coord(CoordId(0))
                .mul(&Expr::coord(CoordId(1)))
                .scalar_mul(&two_z),
        );
    assert_eq!(table.get(0, 1), &expected);

    // the two named beta values: pair (Jm, J3) on product 1*Jm is 2;
    // pair (Jp, Jm) on product e^{-zJ3} e^{-zJ3} is -1/(2z)
    let f_one = fset
        .funcs
        .iter()
        .position(|f| f.is_one())
        .unwrap();
    let f_jm = fset
        .funcs
        .iter()
        .position(|f| *f == Expr::coord(CoordId(1)))
        .unwrap();
    let f_exp = fset
        .funcs
        .iter()
        .position(|f| *f == Expr::exp(LinForm::term(CoordId(2), z().neg())))
        .unwrap();
    let ix = sys.indexer;
    let beta_2314 = beta
        .get(&ix.flat(
            ix.pair_index(1, 2),
            ix.product_index(f_one.min(f_jm), f_one.max(f_jm)),
        ))
        .cloned()
        .unwrap_or_else(Scalar::zero);
    assert_eq!(beta_2314, Scalar::from_int(2));
    let beta_1255 = beta
        .get(&ix.flat(ix.pair_index(0, 1), ix.product_index(f_exp, f_exp)))
        .cloned()
        .unwrap_or_else(Scalar::zero);
    assert_eq!(beta_1255, Scalar::from_frac(-1, 2).div(&z()));

    // solved table passes all checks
    assert!(check_jacobi(&table, &coords).is_empty());
    assert!(check_classical_limit(&table, &b.algebra.c, &coords).unwrap());
    assert!(verify_hom_identity(&table, &map, &coords).unwrap().is_empty());
    // the unprimed table is ordering-ambiguous (Jp Jm product)
    assert!(ambiguity_certificate(&table, &coords).is_err());

    // a pre-linearization family member (beta_{1,3,1,5} = 1, rest 0):
    // Q12 = z Jm, Q13 = e^{-zJ3} - 1, Q23 = 0 satisfies the homomorphism
    // identity (it lies in the general solution) and, on this group, also
    // Jacobi: the whole family happens to be Poisson.
    let mut member = BracketTable::zero(3);
    member.set(0, 1, Expr::coord(CoordId(1)).scalar_mul(&z()));
    member.set(
        0,
        2,
        Expr::exp(LinForm::term(CoordId(2), z().neg())).sub(&Expr::one()),
    );
    assert!(verify_hom_identity(&member, &map, &coords)
        .unwrap()
        .is_empty());
    assert!(check_jacobi(&member, &coords).is_empty());
    // but a bracket outside the family is caught by the cyclic-sum oracle:
    // {J3,Jp} = 3Jp, {J3,Jm} = -2Jm, {Jp,Jm} = J3 violates Jacobi
    let mut non_jacobi = BracketTable::zero(3);
    non_jacobi.set(2, 0, Expr::coord(CoordId(0)).scalar_mul(&Scalar::from_int(3)));
    non_jacobi.set(2, 1, Expr::coord(CoordId(1)).scalar_mul(&Scalar::from_int(-2)));
    non_jacobi.set(0, 1, Expr::coord(CoordId(2)));
    assert!(!check_jacobi(&non_jacobi, &coords).is_empty());

    // primed coordinates J+-' = e^{z/2 J3} J+-
    let half_z = z().mul(&Scalar::from_frac(1, 2));
    let e_pos = Expr::exp(LinForm::term(CoordId(2), half_z.clone()));
    let e_neg = Expr::exp(LinForm::term(CoordId(2), half_z.neg()));
    let mut forward = HashMap::new();
    forward.insert(CoordId(0), e_pos.mul(&Expr::coord(CoordId(0))));
    forward.insert(CoordId(1), e_pos.mul(&Expr::coord(CoordId(1))));
    let mut inverse = HashMap::new();
    inverse.insert(CoordId(0), e_neg.mul(&Expr::coord(CoordId(0))));
    inverse.insert(CoordId(1), e_neg.mul(&Expr::coord(CoordId(1))));
    let change = CoordinateChange { forward, inverse };
    let (qp, mp) = transport(&table, &map, &change, &coords).unwrap();

    // {J+', J-'} = sinh(zJ3)/z
    let l = LinForm::term(CoordId(2), z());
    let sinh = Expr::exp(l.clone())
        .sub(&Expr::exp(l.neg()))
        .scalar_mul(&Scalar::from_frac(1, 2));
    assert_eq!(qp.get(0, 1), &sinh.scalar_mul(&z().inv()));
    assert_eq!(
        qp.get(2, 0),
        &Expr::coord(CoordId(0)).scalar_mul(&Scalar::from_int(2))
    );
    // Delta(J+') = J+' (x) e^{z/2 J3} + e^{-z/2 J3} (x) J+'
    let expected_dp = qdual_core::tensor::tensor(&Expr::coord(CoordId(0)), &e_pos)
        .add(&qdual_core::tensor::tensor(&e_neg, &Expr::coord(CoordId(0))));
    assert_eq!(mp.delta(CoordId(0)), &expected_dp);

    // transported objects re-pass every check
    assert!(check_jacobi(&qp, &coords).is_empty());
    assert!(check_classical_limit(&qp, &b.algebra.c, &coords).unwrap());
    assert!(mp.check_counit().is_empty());
    assert!(mp.check_coassociativity().unwrap().is_empty());
    assert!(ambiguity_certificate(&qp, &coords).is_ok());

    // flip/(z -> -z) symmetry: holds on all primed coproducts, fails on the
    // unprimed Delta(J+)
    let primed_sym = check_flip_symmetry(&mp, &[ParamId(0)]).unwrap();
    assert!(primed_sym.iter().all(|(_, ok)| *ok));
    let unprimed_sym = check_flip_symmetry(&map, &[ParamId(0)]).unwrap();
    assert!(!unprimed_sym.iter().all(|(_, ok)| *ok));

    // quantization checks to order 4 (and 5)
    let p = quantize(&qp, &mp, &coords, 5, false).unwrap();
    assert!(check_quantum_hom(&p).unwrap().iter().all(|c| c.ok));
    assert!(check_quantum_coassoc(&p).unwrap().iter().all(|c| c.ok));
}
