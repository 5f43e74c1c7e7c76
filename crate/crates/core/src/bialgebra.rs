//! Lie bialgebras as paired structure tensors, their validation, the
//! dualization that swaps the tensors, and the coboundary r-matrix decision
//! procedure.

use crate::context::CoordId;
use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::scalar::Scalar;

/// Structure constants c_{ij}^k of a Lie algebra; dense storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub dim: usize,
    /// c[i][j][k] is the coefficient of x_k in [x_i, x_j].
    pub c: Vec<Vec<Vec<Scalar>>>,
}

/// Cocommutator tensor f_i^{jk}: delta(x_i) = sum_{j<k} f_i^{jk} x_j ^ x_k,
/// stored antisymmetrically in (j, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocommutator {
    pub dim: usize,
    /// f[i][j][k], antisymmetric in the last two indices.
    pub f: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieBialgebra {
    pub algebra: LieAlgebraData,
    pub cocommutator: Cocommutator,
}

/// Classical r-matrix, skew part only: r = sum_{j<k} r^{jk} x_j ^ x_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    pub dim: usize,
    /// comp[j][k], antisymmetric.
    pub comp: Vec<Vec<Scalar>>,
}

fn zero_tensor3(d: usize) -> Vec<Vec<Vec<Scalar>>> {
    vec![vec![vec![Scalar::zero(); d]; d]; d]
}

impl LieAlgebraData {
    pub fn new(dim: usize) -> Self {
        LieAlgebraData {
            dim,
            c: zero_tensor3(dim),
        }
    }

    /// Set [x_i, x_j] coefficient of x_k, maintaining antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.c[i][j][k] = v.clone();
        self.c[j][i][k] = v.neg();
    }

    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[i][j][k]
    }
}

impl Cocommutator {
    pub fn new(dim: usize) -> Self {
        Cocommutator {
            dim,
            f: zero_tensor3(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim)
    }

    /// Set the coefficient of x_j ^ x_k (j != k) in delta(x_i).
    pub fn set_wedge(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.f[i][j][k] = v.clone();
        self.f[i][k][j] = v.neg();
    }

    pub fn add_wedge(&mut self, i: usize, j: usize, k: usize, v: &Scalar) {
        self.f[i][j][k] = self.f[i][j][k].add(v);
        self.f[i][k][j] = self.f[i][k][j].sub(v);
    }

    pub fn is_zero(&self) -> bool {
        self.f
            .iter()
            .all(|p| p.iter().all(|q| q.iter().all(|s| s.is_zero())))
    }
}

/// One violated identity, with the indices that witnessed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    CAntisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, l: usize },
    FAntisymmetry { i: usize, j: usize, k: usize },
    CoJacobi { i: usize, j: usize, k: usize, l: usize },
    Cocycle { i: usize, j: usize, a: usize, b: usize },
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_antisymmetry(t: &[Vec<Vec<Scalar>>], d: usize, f_side: bool, out: &mut Vec<Violation>) {
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (a, b) = if f_side {
                    (&t[i][j][k], &t[i][k][j])
                } else {
                    (&t[i][j][k], &t[j][i][k])
                };
                if !a.add(b).is_zero() {
                    if f_side {
                        out.push(Violation::FAntisymmetry { i, j, k });
                    } else {
                        out.push(Violation::CAntisymmetry { i, j, k });
                    }
                    return; // one witness per identity class is enough noise
                }
            }
        }
    }
}

fn jacobi_violations(c: &[Vec<Vec<Scalar>>], d: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                for l in 0..d {
                    let mut s = Scalar::zero();
                    for m in 0..d {
                        s = s.add(&c[i][j][m].mul(&c[m][k][l]));
                        s = s.add(&c[j][k][m].mul(&c[m][i][l]));
                        s = s.add(&c[k][i][m].mul(&c[m][j][l]));
                    }
                    if !s.is_zero() {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
    }
    out
}

/// Full validation report: antisymmetries, Jacobi, co-Jacobi, 1-cocycle.
pub fn validate(b: &LieBialgebra) -> ValidationReport {
    let d = b.algebra.dim;
    let mut violations = Vec::new();
    check_antisymmetry(&b.algebra.c, d, false, &mut violations);
    check_antisymmetry(&b.cocommutator.f, d, true, &mut violations);
    for (i, j, k, l) in jacobi_violations(&b.algebra.c, d) {
        violations.push(Violation::Jacobi { i, j, k, l });
    }
    // co-Jacobi is the Jacobi identity of the dual algebra
    let dual_c = dual_algebra_tensor(&b.cocommutator);
    for (i, j, k, l) in jacobi_violations(&dual_c, d) {
        violations.push(Violation::CoJacobi { i, j, k, l });
    }
    // 1-cocycle: delta([x_i,x_j]) = x_i . delta(x_j) - x_j . delta(x_i)
    let c = &b.algebra.c;
    let f = &b.cocommutator.f;
    for i in 0..d {
        for j in (i + 1)..d {
            for a in 0..d {
                for bb in (a + 1)..d {
                    // lhs coefficient of x_a (x) x_b in delta([x_i, x_j])
                    let mut lhs = Scalar::zero();
                    for k in 0..d {
                        lhs = lhs.add(&c[i][j][k].mul(&f[k][a][bb]));
                    }
                    // rhs: ad-action on the wedge components
                    let mut rhs = Scalar::zero();
                    for m in 0..d {
                        // x_i . (x_m (x) x_b): c_{im}^a term, and x_a (x) x_m: c_{im}^b
                        rhs = rhs.add(&f[j][m][bb].mul(&c[i][m][a]));
                        rhs = rhs.add(&f[j][a][m].mul(&c[i][m][bb]));
                        rhs = rhs.sub(&f[i][m][bb].mul(&c[j][m][a]));
                        rhs = rhs.sub(&f[i][a][m].mul(&c[j][m][bb]));
                    }
                    if !lhs.sub(&rhs).is_zero() {
                        violations.push(Violation::Cocycle { i, j, a, b: bb });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

fn dual_algebra_tensor(f: &Cocommutator) -> Vec<Vec<Vec<Scalar>>> {
    let d = f.dim;
    let mut c = zero_tensor3(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                // [x^j, x^k] = f_i^{jk} x^i
                c[j][k][i] = f.f[i][j][k].clone();
            }
        }
    }
    c
}

/// Interchange the structure tensors: the dual bialgebra.
pub fn dualize(b: &LieBialgebra) -> Result<LieBialgebra> {
    let report = validate(b);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "cannot dualize an invalid bialgebra ({} violations)",
            report.violations.len()
        )));
    }
    let d = b.algebra.dim;
    let c = dual_algebra_tensor(&b.cocommutator);
    let mut f = zero_tensor3(d);
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                // delta*(x^k) = c_{ij}^k x^i ^ x^j
                f[k][i][j] = b.algebra.c[i][j][k].clone();
            }
        }
    }
    Ok(LieBialgebra {
        algebra: LieAlgebraData { dim: d, c },
        cocommutator: Cocommutator { dim: d, f },
    })
}

#[derive(Debug, Clone)]
pub enum CoboundaryResult {
    /// A particular r-matrix plus the dimension of the homogeneous solution
    /// space (ad-invariant skew tensors).
    Coboundary { r: RMatrix, nullity: usize },
    NotCoboundary,
}

/// Cocommutator generated by an r-matrix via delta(x) = [x (x) 1 + 1 (x) x, r].
pub fn cocommutator_from_r(algebra: &LieAlgebraData, r: &RMatrix) -> Cocommutator {
    let d = algebra.dim;
    let c = &algebra.c;
    let mut f = Cocommutator::new(d);
    for i in 0..d {
        for j in 0..d {
            for k in (j + 1)..d {
                let rjk = &r.comp[j][k];
                if rjk.is_zero() {
                    continue;
                }
                // [x_i (x) 1 + 1 (x) x_i, x_j (x) x_k - x_k (x) x_j]
                for m in 0..d {
                    // [x_i,x_j] (x) x_k - [x_i,x_k] (x) x_j  (+ sym in second leg)
                    let cij = &c[i][j][m];
                    if !cij.is_zero() {
                        let v = cij.mul(rjk);
                        if m < k {
                            f.add_wedge(i, m, k, &v);
                        } else if m > k {
                            f.add_wedge(i, k, m, &v.neg());
                        }
                    }
                    let cik = &c[i][k][m];
                    if !cik.is_zero() {
                        let v = cik.mul(rjk);
                        if j < m {
                            f.add_wedge(i, j, m, &v);
                        } else if j > m {
                            f.add_wedge(i, m, j, &v.neg());
                        }
                    }
                }
            }
        }
    }
    f
}

/// Decide whether delta is generated by an r-matrix; linear equation only,
/// exactly as the dual-book check in the source derivation.
pub fn coboundary_solve(b: &LieBialgebra) -> CoboundaryResult {
    let d = b.algebra.dim;
    // unknowns: r^{jk} for j < k
    let mut unknowns = Vec::new();
    for j in 0..d {
        for k in (j + 1)..d {
            unknowns.push((j, k));
        }
    }
    // equations: coefficient of x_a (x) x_b (a < b) in delta(x_i)
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..d {
        for a in 0..d {
            for bb in (a + 1)..d {
                let mut row = vec![Scalar::zero(); unknowns.len()];
                for (u, &(j, k)) in unknowns.iter().enumerate() {
                    // contribution of r^{jk} (x_j ^ x_k) to wedge (a, b)
                    let mut coef = Scalar::zero();
                    let c = &b.algebra.c;
                    // delta(x_i) = sum_m ( c_{ij}^m (x_m ^ x_k) + c_{ik}^m (x_j ^ x_m) )
                    for m in 0..d {
                        let cij = &c[i][j][m];
                        if !cij.is_zero() {
                            if m == a && k == bb {
                                coef = coef.add(cij);
                            }
                            if m == bb && k == a {
                                coef = coef.sub(cij);
                            }
                        }
                        let cik = &c[i][k][m];
                        if !cik.is_zero() {
                            if j == a && m == bb {
                                coef = coef.add(cik);
                            }
                            if j == bb && m == a {
                                coef = coef.sub(cik);
                            }
                        }
                    }
                    row[u] = coef;
                }
                rows.push(row);
                rhs.push(b.cocommutator.f[i][a][bb].clone());
            }
        }
    }
    match solve_dense(&rows, &rhs) {
        None => CoboundaryResult::NotCoboundary,
        Some((x, null)) => {
            let mut r = RMatrix {
                dim: d,
                comp: vec![vec![Scalar::zero(); d]; d],
            };
            for (u, &(j, k)) in unknowns.iter().enumerate() {
                r.comp[j][k] = x[u].clone();
                r.comp[k][j] = x[u].neg();
            }
            CoboundaryResult::Coboundary {
                r,
                nullity: null.len(),
            }
        }
    }
}

/// Re-substitution check: the r-matrix reproduces delta exactly.
pub fn verify_r_matrix(b: &LieBialgebra, r: &RMatrix) -> bool {
    let f = cocommutator_from_r(&b.algebra, r);
    f.f == b.cocommutator.f
}

/// Names of generators index the tensors through the context coordinates by
/// convention; useful when printing.
pub fn coord_of_index(i: usize) -> CoordId {
    CoordId(i as u16)
}
