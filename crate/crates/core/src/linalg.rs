//! Exact dense linear algebra over the scalar field, plus expression-matrix
//! helpers (products, determinants by minor expansion, unit-pivot inverses).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Scalar;

/// Solve A x = b exactly. Returns a particular solution together with a basis
/// of the homogeneous solution space, or `None` when inconsistent.
pub fn solve_dense(
    a: &[Vec<Scalar>],
    b: &[Scalar],
) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b.iter())
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let mut piv = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..=cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let sub = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&sub);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency
    for row in m.iter().skip(r) {
        if row[..cols].iter().all(|x| x.is_zero()) && !row[cols].is_zero() {
            return None;
        }
    }
    // wait: rows below r may still be nonzero in columns beyond the last pivot;
    // the loop above exhausted all columns, so they are all-zero in A part.
    let mut particular = vec![Scalar::zero(); cols];
    for (ri, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = m[ri][cols].clone();
    }
    let mut null = Vec::new();
    for c in 0..cols {
        if pivot_cols.contains(&c) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[c] = Scalar::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = m[ri][c].neg();
        }
        null.push(v);
    }
    Some((particular, null))
}

pub fn rank(a: &[Vec<Scalar>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let zeros = vec![Scalar::zero(); rows];
    match solve_dense(a, &zeros) {
        Some((_, null)) => cols - null.len(),
        None => unreachable!("homogeneous system is always consistent"),
    }
}

/// Square matrices of expressions.
pub type MatExpr = Vec<Vec<Expr>>;
pub type MatScalar = Vec<Vec<Scalar>>;

pub fn mat_identity(n: usize) -> MatExpr {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &MatExpr, b: &MatExpr) -> MatExpr {
    let n = a.len();
    let mut out = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&aik.mul(&b[k][j]));
            }
        }
    }
    out
}

pub fn mat_is_identity(a: &MatExpr) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
    })
}

/// Determinant of the submatrix using `rows` (bitmask) and the last
/// popcount(rows) columns... Instead: full determinant via expansion along
/// columns with memoization on the surviving row set.
fn minor_det(m: &MatExpr, rows: u32, col: usize, memo: &mut HashMap<(u32, usize), Expr>) -> Expr {
    let n = m.len();
    if col == n {
        return Expr::one();
    }
    if let Some(e) = memo.get(&(rows, col)) {
        return e.clone();
    }
    let mut acc = Expr::zero();
    let mut sign = false;
    for i in 0..n {
        if rows & (1 << i) == 0 {
            continue;
        }
        if !m[i][col].is_zero() {
            let sub = minor_det(m, rows & !(1 << i), col + 1, memo);
            let term = m[i][col].mul(&sub);
            acc = if sign { acc.sub(&term) } else { acc.add(&term) };
        }
        sign = !sign;
    }
    memo.insert((rows, col), acc.clone());
    acc
}

pub fn mat_det(m: &MatExpr) -> Expr {
    let n = m.len();
    assert!(n <= 16, "determinant expansion limited to small matrices");
    let mut memo = HashMap::new();
    minor_det(m, (1u32 << n) - 1, 0, &mut memo)
}

/// Inverse of a matrix whose determinant is a unit of the algebra.
pub fn mat_inverse(m: &MatExpr) -> Result<MatExpr> {
    let n = m.len();
    let det = mat_det(m);
    let det_inv = match det.unit_inv() {
        Some(inv) => inv,
        None => return Err(Error::NonInvertibleElement),
    };
    let mut out = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // cofactor C_ji for the (i,j) entry of the inverse
            let mut sub = Vec::with_capacity(n - 1);
            for (r, row) in m.iter().enumerate() {
                if r == j {
                    continue;
                }
                let mut nr = Vec::with_capacity(n - 1);
                for (c, e) in row.iter().enumerate() {
                    if c == i {
                        continue;
                    }
                    nr.push(e.clone());
                }
                sub.push(nr);
            }
            let mut local: HashMap<(u32, usize), Expr> = HashMap::new();
            let d = if n == 1 {
                Expr::one()
            } else {
                minor_det(&sub, (1u32 << (n - 1)) - 1, 0, &mut local)
            };
            let cof = if (i + j) % 2 == 0 { d } else { d.neg() };
            out[i][j] = cof.mul(&det_inv);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{Context, CoordId, ParamId};
    use crate::expr::LinForm;

    #[test]
    fn dense_solve_unique() {
        let z = Scalar::param(ParamId(0));
        let a = vec![
            vec![Scalar::from_int(1), z.clone()],
            vec![Scalar::zero(), Scalar::from_int(2)],
        ];
        let b = vec![Scalar::from_int(3), z.clone()];
        let (x, null) = solve_dense(&a, &b).unwrap();
        assert!(null.is_empty());
        // x1 = 3 - z^2/2, x2 = z/2
        assert_eq!(x[1], z.mul(&Scalar::from_frac(1, 2)));
        assert_eq!(
            x[0],
            Scalar::from_int(3).sub(&z.mul(&z).mul(&Scalar::from_frac(1, 2)))
        );
    }

    #[test]
    fn dense_solve_inconsistent_and_null() {
        let a = vec![vec![Scalar::from_int(1), Scalar::from_int(1)]];
        let b = vec![Scalar::from_int(1)];
        let (_, null) = solve_dense(&a, &b).unwrap();
        assert_eq!(null.len(), 1);
        let a2 = vec![
            vec![Scalar::from_int(1), Scalar::from_int(1)],
            vec![Scalar::from_int(2), Scalar::from_int(2)],
        ];
        let b2 = vec![Scalar::from_int(1), Scalar::from_int(3)];
        assert!(solve_dense(&a2, &b2).is_none());
    }

    #[test]
    fn book_matrix_inverse() {
        let _ctx = Context::new(&["z"], &["Jp", "Jm", "J3"]).unwrap();
        let z = Scalar::param(ParamId(0));
        let e = Expr::exp(LinForm::term(CoordId(2), z.neg()));
        let jp = Expr::coord(CoordId(0));
        let jm = Expr::coord(CoordId(1));
        let g = vec![
            vec![e.clone(), Expr::zero(), jp.clone()],
            vec![Expr::zero(), e.clone(), jm.clone()],
            vec![Expr::zero(), Expr::zero(), Expr::one()],
        ];
        let inv = mat_inverse(&g).unwrap();
        assert!(mat_is_identity(&mat_mul(&g, &inv)));
        assert!(mat_is_identity(&mat_mul(&inv, &g)));
        // top-right entry is -e^{zJ3} Jp
        let epos = Expr::exp(LinForm::term(CoordId(2), z.clone()));
        assert_eq!(inv[0][2], epos.mul(&jp).neg());
    }
}
