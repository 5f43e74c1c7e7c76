//! Faithful representations of the dual Lie algebra and closed-form symbolic
//! exponentiation into the dual group element.
//!
//! Exponentials are computed by Hermite interpolation on the spectrum of each
//! generator matrix; the admissible spectra are parameter-affine roots over
//! Q(i), which keeps every entry inside the expression algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::context::{CoordId, ParamId};
use crate::error::{Error, Result};
use crate::expr::{Expr, LinForm, Monomial, TermKey};
use crate::linalg::{mat_identity, mat_mul, rank, solve_dense, MatExpr, MatScalar};
use crate::scalar::{GaussRat, Scalar};

/// A matrix representation of a Lie algebra, one matrix per generator.
#[derive(Debug, Clone)]
pub struct Representation {
    pub dim: usize,
    pub mats: Vec<MatScalar>,
}

impl Representation {
    /// Entrywise check of [rho(x_j), rho(x_k)] = c_{jk}^i rho(x_i).
    pub fn check_homomorphism(&self, c: &[Vec<Vec<Scalar>>]) -> Result<()> {
        let d = self.mats.len();
        let n = self.dim;
        for j in 0..d {
            for k in (j + 1)..d {
                for r in 0..n {
                    for s in 0..n {
                        let mut lhs = Scalar::zero();
                        for m in 0..n {
                            lhs = lhs.add(&self.mats[j][r][m].mul(&self.mats[k][m][s]));
                            lhs = lhs.sub(&self.mats[k][r][m].mul(&self.mats[j][m][s]));
                        }
                        let mut rhs = Scalar::zero();
                        for i in 0..d {
                            if !c[j][k][i].is_zero() {
                                rhs = rhs.add(&c[j][k][i].mul(&self.mats[i][r][s]));
                            }
                        }
                        if !lhs.sub(&rhs).is_zero() {
                            return Err(Error::InvalidInput(format!(
                                "representation violates the bracket of generators {j} and {k} at entry ({r},{s})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Linear independence of the generator matrices over the scalar field.
    pub fn is_faithful(&self) -> bool {
        let n2 = self.dim * self.dim;
        let rows: Vec<Vec<Scalar>> = self
            .mats
            .iter()
            .map(|m| {
                let mut v = Vec::with_capacity(n2);
                for row in m {
                    v.extend(row.iter().cloned());
                }
                v
            })
            .collect();
        rank(&rows) == self.mats.len()
    }
}

/// Adjoint representation built from the structure constants; errors when the
/// center is nontrivial (the caller must then supply a representation).
pub fn adjoint_rep(c: &[Vec<Vec<Scalar>>]) -> Result<Representation> {
    let d = c.len();
    let mut mats = Vec::with_capacity(d);
    for i in 0..d {
        let mut m = vec![vec![Scalar::zero(); d]; d];
        for j in 0..d {
            for (k, row) in m.iter_mut().enumerate() {
                row[j] = c[i][j][k].clone();
            }
        }
        mats.push(m);
    }
    let rep = Representation { dim: d, mats };
    if !rep.is_faithful() {
        return Err(Error::NotFaithful(
            "adjoint representation has a kernel (nontrivial center)".into(),
        ));
    }
    Ok(rep)
}

/// Monic minimal polynomial of `m`, lowest degree first:
/// mu(x) = coeffs[0] + coeffs[1] x + ... + x^deg.
pub fn minimal_polynomial(m: &MatScalar) -> Vec<Scalar> {
    let n = m.len();
    let n2 = n * n;
    let mut powers: Vec<Vec<Scalar>> = Vec::new();
    let mut cur = mat_identity_scalar(n);
    loop {
        let flat: Vec<Scalar> = cur.iter().flat_map(|r| r.iter().cloned()).collect();
        // try to write flat as a combination of earlier powers
        if !powers.is_empty() {
            let cols = powers.len();
            let a: Vec<Vec<Scalar>> = (0..n2)
                .map(|e| (0..cols).map(|p| powers[p][e].clone()).collect())
                .collect();
            if let Some((x, _)) = solve_dense(&a, &flat) {
                // mu = x^k - sum x_i x^i
                let mut coeffs: Vec<Scalar> = x.iter().map(|c| c.neg()).collect();
                coeffs.push(Scalar::one());
                return coeffs;
            }
        }
        powers.push(flat);
        cur = mat_mul_scalar(&cur, m);
        assert!(
            powers.len() <= n + 1,
            "minimal polynomial search exceeded the matrix dimension"
        );
    }
}

fn mat_identity_scalar(n: usize) -> MatScalar {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul_scalar(a: &MatScalar, b: &MatScalar) -> MatScalar {
    let n = a.len();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

/// Evaluate a polynomial (lowest degree first) at a scalar.
fn poly_eval(coeffs: &[Scalar], at: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(at).add(c);
    }
    acc
}

/// Exact synthetic division by (x - root); `None` if the remainder is nonzero.
fn poly_deflate(coeffs: &[Scalar], root: &Scalar) -> Option<Vec<Scalar>> {
    let n = coeffs.len();
    if n < 2 {
        return None;
    }
    let mut q = vec![Scalar::zero(); n - 1];
    let mut carry = Scalar::zero();
    for k in (0..n - 1).rev() {
        carry = coeffs[k + 1].add(&carry.mul(root));
        q[k] = carry.clone();
    }
    let rem = coeffs[0].add(&carry.mul(root));
    if rem.is_zero() {
        Some(q)
    } else {
        None
    }
}

/// Snap a float to a rational with a small denominator; exactness is enforced
/// later by polynomial division, so this only has to be a good guess.
fn snap_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let mut best: Option<BigRational> = None;
    for den in 1..=64u32 {
        let num = (x * den as f64).round();
        if num.abs() > 1e15 {
            continue;
        }
        let cand = BigRational::new(BigInt::from(num as i64), BigInt::from(den));
        let err = (cand.to_f64().unwrap() - x).abs();
        if err < 1e-9 {
            best = Some(cand);
            break;
        }
    }
    best
}

/// Gaussian-rational roots of a univariate polynomial over Q(i), found by
/// Durand-Kerner iteration plus rational snapping, each verified exactly.
fn gauss_roots(coeffs: &[GaussRat]) -> Vec<GaussRat> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let to_c = |g: &GaussRat| Complex64::new(g.re.to_f64().unwrap_or(0.0), g.im.to_f64().unwrap_or(0.0));
    let cf: Vec<Complex64> = coeffs.iter().map(to_c).collect();
    let lead = cf[deg];
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in cf.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..300 {
        let mut next = roots.clone();
        for (i, item) in next.iter_mut().enumerate() {
            let mut denom = lead;
            for (j, r) in roots.iter().enumerate() {
                if i != j {
                    denom *= roots[i] - r;
                }
            }
            if denom.norm() > 1e-300 {
                *item = roots[i] - eval(roots[i]) / denom;
            }
        }
        roots = next;
    }
    let scalar_coeffs: Vec<Scalar> = coeffs
        .iter()
        .map(|g| Scalar::from_gauss(g.clone()))
        .collect();
    let mut out: Vec<GaussRat> = Vec::new();
    for r in roots {
        let (Some(re), Some(im)) = (snap_rational(r.re), snap_rational(r.im)) else {
            continue;
        };
        let cand = GaussRat { re, im };
        if out.contains(&cand) {
            continue;
        }
        if poly_eval(&scalar_coeffs, &Scalar::from_gauss(cand.clone())).is_zero() {
            out.push(cand);
        }
    }
    out.sort();
    out
}

/// Full factorization of the minimal polynomial into parameter-affine roots,
/// returned with multiplicities; `NonClosedFormSpectrum` when that fails.
pub fn spectrum(minpoly: &[Scalar], params: &[ParamId]) -> Result<Vec<(Scalar, usize)>> {
    // specialize the coefficients at rational parameter points
    let specialize = |coeffs: &[Scalar], at: &dyn Fn(ParamId) -> Scalar| -> Option<Vec<GaussRat>> {
        coeffs
            .iter()
            .map(|c| c.subst_params(at).and_then(|s| s.as_gauss()))
            .collect()
    };
    let at_zero = specialize(minpoly, &|_| Scalar::zero())
        .ok_or(Error::NonClosedFormSpectrum)?;
    let base_roots = gauss_roots(&at_zero);
    // candidate slopes per parameter from unit evaluations
    let mut slope_sets: Vec<(ParamId, Vec<GaussRat>)> = Vec::new();
    for &p in params {
        let at_one = specialize(minpoly, &|q| {
            if q == p {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .ok_or(Error::NonClosedFormSpectrum)?;
        let roots_one = gauss_roots(&at_one);
        let mut slopes: Vec<GaussRat> = Vec::new();
        for r in &roots_one {
            for b in &base_roots {
                let s = r.sub(b);
                if !slopes.contains(&s) {
                    slopes.push(s);
                }
            }
        }
        slopes.sort();
        slope_sets.push((p, slopes));
    }
    // enumerate affine candidates and verify by exact deflation
    let mut candidates: Vec<Scalar> = Vec::new();
    let mut stack: Vec<(usize, Scalar)> = base_roots
        .iter()
        .map(|g| (0usize, Scalar::from_gauss(g.clone())))
        .collect();
    while let Some((level, acc)) = stack.pop() {
        if level == slope_sets.len() {
            if !candidates.contains(&acc) {
                candidates.push(acc);
            }
            continue;
        }
        let (p, slopes) = &slope_sets[level];
        for s in slopes {
            let term = Scalar::from_gauss(s.clone()).mul(&Scalar::param(*p));
            stack.push((level + 1, acc.add(&term)));
        }
    }
    candidates.sort();
    let mut rest = minpoly.to_vec();
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    for cand in &candidates {
        let mut mult = 0usize;
        while rest.len() > 1 {
            match poly_deflate(&rest, cand) {
                Some(q) => {
                    rest = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            roots.push((cand.clone(), mult));
        }
        if rest.len() == 1 {
            break;
        }
    }
    if rest.len() != 1 {
        return Err(Error::NonClosedFormSpectrum);
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

/// exp(t M) by Hermite interpolation on the spectrum of M: the result is a
/// polynomial in M with coefficients that are polynomial-in-t times e^{mu t}.
pub fn matrix_exp(m: &MatScalar, t: CoordId, params: &[ParamId]) -> Result<MatExpr> {
    let mu = minimal_polynomial(m);
    let deg = mu.len() - 1;
    let roots = spectrum(&mu, params)?;
    // Hermite conditions: for each root (mu_j, mult m_j) and k < m_j:
    //   p^{(k)}(mu_j) = t^k e^{mu_j t}
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Expr> = Vec::new();
    for (root, mult) in &roots {
        for k in 0..*mult {
            let mut row = vec![Scalar::zero(); deg];
            for (n, slot) in row.iter_mut().enumerate() {
                if n >= k {
                    // n!/(n-k)! root^{n-k}
                    let mut fall = Scalar::one();
                    for step in 0..k {
                        fall = fall.mul(&Scalar::from_int((n - step) as i64));
                    }
                    *slot = fall.mul(&root.pow((n - k) as i64));
                }
            }
            rows.push(row);
            let mono = Monomial(if k == 0 {
                BTreeMap::new()
            } else {
                BTreeMap::from([(t, k as u32)])
            });
            let exp = if root.is_zero() {
                LinForm::zero()
            } else {
                LinForm::term(t, root.clone())
            };
            let mut e = Expr::zero();
            e.insert_term(TermKey { mono, exp }, Scalar::one());
            rhs.push(e);
        }
    }
    let coeffs = solve_scalar_system_expr_rhs(&rows, &rhs)?;
    // assemble sum_n coeffs[n] * M^n
    let n = m.len();
    let mut out = vec![vec![Expr::zero(); n]; n];
    let mut mp = mat_identity_scalar(n);
    for c in coeffs.iter().take(deg) {
        for i in 0..n {
            for j in 0..n {
                if !mp[i][j].is_zero() {
                    out[i][j] = out[i][j].add(&c.scalar_mul(&mp[i][j]));
                }
            }
        }
        mp = mat_mul_scalar(&mp, m);
    }
    Ok(out)
}

/// Solve a square scalar system with expression right-hand sides.
fn solve_scalar_system_expr_rhs(a: &[Vec<Scalar>], b: &[Expr]) -> Result<Vec<Expr>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a.to_vec();
    let mut rhs: Vec<Expr> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for c in 0..n {
        let piv = (c..n)
            .find(|&r| !m[r][c].is_zero())
            .ok_or_else(|| Error::InvalidInput("singular interpolation system".into()))?;
        m.swap(c, piv);
        rhs.swap(c, piv);
        perm.swap(c, piv);
        let inv = m[c][c].inv();
        for j in c..n {
            m[c][j] = m[c][j].mul(&inv);
        }
        rhs[c] = rhs[c].scalar_mul(&inv);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..n {
                    let s = m[c][j].mul(&f);
                    m[r][j] = m[r][j].sub(&s);
                }
                let s = rhs[c].scalar_mul(&f);
                rhs[r] = rhs[r].sub(&s);
            }
        }
    }
    Ok(rhs)
}

/// The dual group element: an N x N matrix of expressions, together with the
/// exponential ordering that produced it.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub dim: usize,
    pub entries: MatExpr,
    /// generator indices in the order their exponentials were multiplied
    pub exp_order: Vec<usize>,
}

impl GroupElement {
    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i][j]
    }

    /// The matrix at X = 0 (must be the identity).
    pub fn at_zero_is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                let v = e.eval_at_zero();
                if i == j {
                    v.is_one() && e.terms.iter().all(|(k, _)| k.mono.is_one() || true)
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

/// Ordered product of one-parameter exponentials; coordinate i pairs with
/// generator i of the represented algebra.
pub fn build_group_element(
    rep: &Representation,
    exp_order: &[usize],
    coords: &[CoordId],
    params: &[ParamId],
) -> Result<GroupElement> {
    let n = rep.dim;
    let mut acc = mat_identity(n);
    for &g in exp_order {
        let e = matrix_exp(&rep.mats[g], coords[g], params)?;
        acc = mat_mul(&acc, &e);
    }
    Ok(GroupElement {
        dim: n,
        entries: acc,
        exp_order: exp_order.to_vec(),
    })
}
