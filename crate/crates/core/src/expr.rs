//! Canonical commutative expressions: finite sums of
//! scalar * coordinate-monomial * exp(linear form) terms.
//!
//! Distinct (monomial, exponent) keys are linearly independent functions, so
//! syntactic equality of canonical forms is semantic equality in the algebra.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::context::{CoordId, ParamId};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coordinate monomial with graded-lex order on the declared coordinate order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub BTreeMap<CoordId, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn coord(x: CoordId) -> Self {
        Monomial(BTreeMap::from([(x, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, x: CoordId) -> u32 {
        self.0.get(&x).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&x, &e) in &other.0 {
            *m.entry(x).or_insert(0) += e;
        }
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(&xa, &ea)), Some(&(&xb, &eb))) => {
                    if xa == xb {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        }
                    } else if xa < xb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Linear form in the coordinates with scalar coefficients; exponent argument
/// of a formal exponential. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinForm(pub BTreeMap<CoordId, Scalar>);

impl LinForm {
    pub fn zero() -> Self {
        LinForm(BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn term(x: CoordId, c: Scalar) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(x, c);
        }
        LinForm(m)
    }

    pub fn coeff(&self, x: CoordId) -> Scalar {
        self.0.get(&x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&x, c) in &other.0 {
            let s = m.get(&x).cloned().unwrap_or_else(Scalar::zero).add(c);
            if s.is_zero() {
                m.remove(&x);
            } else {
                m.insert(x, s);
            }
        }
        LinForm(m)
    }

    pub fn neg(&self) -> Self {
        LinForm(self.0.iter().map(|(&x, c)| (x, c.neg())).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return LinForm::zero();
        }
        LinForm(self.0.iter().map(|(&x, c)| (x, c.mul(s))).collect())
    }

    pub fn coords(&self) -> impl Iterator<Item = CoordId> + '_ {
        self.0.keys().copied()
    }
}

/// Canonical term key: coordinate monomial times exp of a linear form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TermKey {
    pub mono: Monomial,
    pub exp: LinForm,
}

impl TermKey {
    pub fn one() -> Self {
        TermKey::default()
    }

    pub fn mul(&self, other: &Self) -> Self {
        TermKey {
            mono: self.mono.mul(&other.mono),
            exp: self.exp.add(&other.exp),
        }
    }
}

/// Canonical element of the commutative function algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Expr {
    pub terms: BTreeMap<TermKey, Scalar>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::from_scalar(Scalar::one())
    }

    pub fn from_scalar(s: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(TermKey::one(), s);
        }
        Expr { terms }
    }

    pub fn coord(x: CoordId) -> Self {
        Expr {
            terms: BTreeMap::from([(
                TermKey {
                    mono: Monomial::coord(x),
                    exp: LinForm::zero(),
                },
                Scalar::one(),
            )]),
        }
    }

    pub fn exp(l: LinForm) -> Self {
        Expr {
            terms: BTreeMap::from([(
                TermKey {
                    mono: Monomial::one(),
                    exp: l,
                },
                Scalar::one(),
            )]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&TermKey::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&TermKey::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn insert_term(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Expr::zero();
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.insert_term(ka.mul(kb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.mul(s)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Expr::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Single-term expression `s * exp(l)` with empty monomial; such terms are
    /// the invertible elements of the algebra.
    pub fn as_unit(&self) -> Option<(Scalar, LinForm)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if !k.mono.is_one() {
            return None;
        }
        Some((c.clone(), k.exp.clone()))
    }

    /// Multiplicative inverse of a unit term.
    pub fn unit_inv(&self) -> Option<Expr> {
        let (s, l) = self.as_unit()?;
        if s.is_zero() {
            return None;
        }
        Some(Expr {
            terms: BTreeMap::from([(
                TermKey {
                    mono: Monomial::one(),
                    exp: l.neg(),
                },
                s.inv(),
            )]),
        })
    }

    /// Divide by a unit (single invertible term); error otherwise.
    pub fn div_unit(&self, other: &Expr) -> Result<Expr> {
        match other.unit_inv() {
            Some(inv) => Ok(self.mul(&inv)),
            None => Err(Error::DomainError(
                "division by a non-invertible expression".into(),
            )),
        }
    }

    pub fn coords_used(&self) -> Vec<CoordId> {
        let mut out = Vec::new();
        for k in self.terms.keys() {
            for (&x, _) in &k.mono.0 {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            for x in k.exp.coords() {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out
    }

    /// Partial derivative with respect to coordinate `x`.
    pub fn diff(&self, x: CoordId) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            // monomial part, Leibniz
            let e = k.mono.exponent(x);
            if e > 0 {
                let mut m = k.mono.0.clone();
                if e == 1 {
                    m.remove(&x);
                } else {
                    m.insert(x, e - 1);
                }
                out.insert_term(
                    TermKey {
                        mono: Monomial(m),
                        exp: k.exp.clone(),
                    },
                    c.mul(&Scalar::from_int(e as i64)),
                );
            }
            // exponential part: d/dx exp(L) = L_x exp(L)
            let lx = k.exp.coeff(x);
            if !lx.is_zero() {
                out.insert_term(k.clone(), c.mul(&lx));
            }
        }
        out
    }

    /// Set every coordinate to zero; total by construction.
    pub fn eval_at_zero(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, c) in &self.terms {
            if k.mono.is_one() {
                acc = acc.add(c);
            }
        }
        acc
    }

    /// Recognize an affine expression `s0 + sum s_x * x` (no exponentials, no
    /// higher monomials); returns the constant and linear parts.
    pub fn as_affine(&self) -> Option<(Scalar, LinForm)> {
        let mut constant = Scalar::zero();
        let mut lin = BTreeMap::new();
        for (k, c) in &self.terms {
            if !k.exp.is_zero() {
                return None;
            }
            match k.mono.total_degree() {
                0 => constant = c.clone(),
                1 => {
                    let (&x, _) = k.mono.0.iter().next().unwrap();
                    lin.insert(x, c.clone());
                }
                _ => return None,
            }
        }
        Some((constant, LinForm(lin)))
    }

    /// Exponential of an affine expression with zero constant part.
    pub fn exp_of_affine(e: &Expr) -> Result<Expr> {
        let (c0, lin) = e.as_affine().ok_or(Error::NonLinearExponentSubstitution)?;
        if !c0.is_zero() {
            return Err(Error::NonLinearExponentSubstitution);
        }
        Ok(Expr::exp(lin))
    }

    /// Substitute coordinates by expressions. Unmapped coordinates map to
    /// themselves. Coordinates occurring inside an exponent must have
    /// affine-linear images with zero constant term.
    pub fn substitute(&self, map: &HashMap<CoordId, Expr>) -> Result<Expr> {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            let mut t = Expr::from_scalar(c.clone());
            for (&x, &e) in &k.mono.0 {
                let img = match map.get(&x) {
                    Some(img) => img.clone(),
                    None => Expr::coord(x),
                };
                t = t.mul(&img.pow(e));
            }
            if !k.exp.is_zero() {
                let mut arg = Expr::zero();
                for (&x, s) in &k.exp.0 {
                    let img = match map.get(&x) {
                        Some(img) => img.clone(),
                        None => Expr::coord(x),
                    };
                    arg = arg.add(&img.scalar_mul(s));
                }
                t = t.mul(&Expr::exp_of_affine(&arg)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitute parameters throughout the expression (coefficients and
    /// exponent coefficients); fails if a scalar denominator vanishes.
    pub fn subst_params(&self, map: &dyn Fn(ParamId) -> Scalar) -> Result<Expr> {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            let nc = c
                .subst_params(map)
                .ok_or_else(|| Error::InvalidInput("parameter substitution hit a pole".into()))?;
            let mut nexp = LinForm::zero();
            for (&x, s) in &k.exp.0 {
                let ns = s.subst_params(map).ok_or_else(|| {
                    Error::InvalidInput("parameter substitution hit a pole".into())
                })?;
                nexp = nexp.add(&LinForm::term(x, ns));
            }
            out.insert_term(
                TermKey {
                    mono: k.mono.clone(),
                    exp: nexp,
                },
                nc,
            );
        }
        Ok(out)
    }

    /// Leading term (maximal key) coefficient.
    pub fn leading_coeff(&self) -> Option<Scalar> {
        self.terms.values().next_back().cloned()
    }

    /// Expression scaled so the leading coefficient is 1; zero stays zero.
    pub fn normalized(&self) -> Expr {
        match self.leading_coeff() {
            Some(c) => self.scalar_mul(&c.inv()),
            None => Expr::zero(),
        }
    }

    /// If `self == s * other` for a scalar `s`, return it.
    pub fn scalar_ratio(&self, other: &Expr) -> Option<Scalar> {
        if other.is_zero() {
            return if self.is_zero() {
                Some(Scalar::one())
            } else {
                None
            };
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Scalar> = None;
        for ((ka, ca), (kb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ka != kb {
                return None;
            }
            let r = ca.div(cb);
            match &ratio {
                None => ratio = Some(r),
                Some(prev) => {
                    if *prev != r {
                        return None;
                    }
                }
            }
        }
        ratio
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Context;

    fn ctx() -> Context {
        Context::new(&["z"], &["Jp", "Jm", "J3"]).unwrap()
    }

    fn z() -> Scalar {
        Scalar::param(ParamId(0))
    }

    fn j3() -> CoordId {
        CoordId(2)
    }

    #[test]
    fn inverse_exponentials_cancel() {
        let _ = ctx();
        let a = Expr::exp(LinForm::term(j3(), z().neg()));
        let b = Expr::exp(LinForm::term(j3(), z()));
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn cosh_sinh_product_is_one() {
        // (cosh + sinh)(z J3/2) * (cosh + sinh)(-z J3/2) = 1
        let half = Scalar::from_frac(1, 2);
        let l = LinForm::term(j3(), z().mul(&half));
        let cp = Expr::exp(l.clone());
        let cm = Expr::exp(l.neg());
        let cosh = cp.add(&cm).scalar_mul(&half);
        let sinh = cp.sub(&cm).scalar_mul(&half);
        let s = cosh.add(&sinh);
        let s_neg = s
            .subst_params(&|_| Scalar::param(ParamId(0)).neg())
            .unwrap();
        assert!(s.mul(&s_neg).is_one());
    }

    #[test]
    fn diff_exponential_and_monomial() {
        let _ = ctx();
        let jp = Expr::coord(CoordId(0));
        let e = Expr::exp(LinForm::term(j3(), z().neg()));
        let f = jp.mul(&e);
        // d/dJ3 (Jp e^{-zJ3}) = -z Jp e^{-zJ3}
        assert_eq!(f.diff(j3()), f.scalar_mul(&z().neg()));
        // d/dJp Jp^2 = 2 Jp
        let jp2 = jp.pow(2);
        assert_eq!(jp2.diff(CoordId(0)), jp.scalar_mul(&Scalar::from_int(2)));
    }

    #[test]
    fn diff_of_solved_book_bracket() {
        // d/dJ3 [ (1 - e^{-2zJ3})/(2z) + 2z Jp Jm ] = e^{-2zJ3}
        let _ = ctx();
        let two_z = z().mul(&Scalar::from_int(2));
        let e = Expr::exp(LinForm::term(j3(), two_z.neg()));
        let q = Expr::one()
            .sub(&e)
            .scalar_mul(&two_z.inv())
            .add(&Expr::coord(CoordId(0)).mul(&Expr::coord(CoordId(1))).scalar_mul(&two_z));
        assert_eq!(q.diff(j3()), e);
    }

    #[test]
    fn substitution_examples() {
        let _ = ctx();
        // Jp -> e^{-z/2 J3} Jp' (reuse Jp as the primed coordinate name)
        let half_z = z().mul(&Scalar::from_frac(1, 2));
        let img = Expr::exp(LinForm::term(j3(), half_z.neg())).mul(&Expr::coord(CoordId(0)));
        let mut map = HashMap::new();
        map.insert(CoordId(0), img.clone());
        assert_eq!(Expr::coord(CoordId(0)).substitute(&map).unwrap(), img);

        // identity map on an exponential
        let e = Expr::exp(LinForm::term(j3(), z().neg()));
        let mut id = HashMap::new();
        id.insert(j3(), Expr::coord(j3()));
        assert_eq!(e.substitute(&id).unwrap(), e);

        // nonlinear image inside an exponent errors
        let mut bad = HashMap::new();
        bad.insert(j3(), Expr::coord(CoordId(0)).mul(&Expr::coord(CoordId(1))));
        assert_eq!(
            e.substitute(&bad).unwrap_err(),
            Error::NonLinearExponentSubstitution
        );
    }

    #[test]
    fn ratio_and_normalization() {
        let _ = ctx();
        let f = Expr::coord(CoordId(0)).scalar_mul(&z());
        let g = Expr::coord(CoordId(0));
        assert_eq!(f.scalar_ratio(&g), Some(z()));
        assert_eq!(f.normalized(), g);
        assert_eq!(f.scalar_ratio(&Expr::coord(CoordId(1))), None);
    }
}
