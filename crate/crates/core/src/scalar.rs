//! Exact coefficient arithmetic: Gaussian rationals, multivariate polynomials
//! in the deformation parameters, and reduced rational functions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::context::ParamId;

/// An element of Q(i): `re + im * i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0);
        GaussRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GaussRat {
            re: r,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus, a rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let n = self.norm();
        GaussRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return GaussRat::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            if self.im.is_one() {
                write!(f, "i")
            } else if self.im == -BigRational::one() {
                write!(f, "-i")
            } else {
                write!(f, "{}*i", self.im)
            }
        } else if self.im.is_positive() {
            if self.im.is_one() {
                write!(f, "{}+i", self.re)
            } else {
                write!(f, "{}+{}*i", self.re, self.im)
            }
        } else if self.im == -BigRational::one() {
            write!(f, "{}-i", self.re)
        } else {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        }
    }
}

/// A parameter monomial: sorted, nonzero exponents only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PMono(pub Vec<(ParamId, u32)>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn param(p: ParamId) -> Self {
        PMono(vec![(p, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, p: ParamId) -> u32 {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<ParamId, u32> = BTreeMap::new();
        for &(p, e) in self.0.iter().chain(other.0.iter()) {
            *m.entry(p).or_insert(0) += e;
        }
        PMono(m.into_iter().collect())
    }

    /// Exact monomial quotient; `None` if any exponent would go negative.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut m: BTreeMap<ParamId, i64> = BTreeMap::new();
        for &(p, e) in &self.0 {
            *m.entry(p).or_insert(0) += e as i64;
        }
        for &(p, e) in &other.0 {
            *m.entry(p).or_insert(0) -= e as i64;
        }
        let mut out = Vec::new();
        for (p, e) in m {
            if e < 0 {
                return None;
            }
            if e > 0 {
                out.push((p, e as u32));
            }
        }
        Some(PMono(out))
    }
}

/// Graded lexicographic order: total degree first, then exponentwise by
/// ascending parameter id with the larger exponent ranked higher.
impl Ord for PMono {
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
                (Some(&&(pa, ea)), Some(&&(pb, eb))) => {
                    if pa == pb {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        }
                    } else if pa < pb {
                        // self has a positive exponent on an earlier variable
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in the parameters over Q(i), canonical by
/// construction (sorted terms, no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    pub terms: BTreeMap<PMono, GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(PMono::one(), c);
        }
        Poly { terms }
    }

    pub fn param(p: ParamId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PMono::param(p), GaussRat::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&PMono::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&PMono::one()))
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.is_constant() {
            return self.terms.get(&PMono::one()).cloned();
        }
        None
    }

    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&PMono::one())
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    fn insert_term(&mut self, m: PMono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Minimum total degree over all terms (valuation at the origin).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).min()
    }

    /// Leading (maximal in graded-lex order) term.
    pub fn leading(&self) -> Option<(&PMono, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussRat {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussRat::zero)
    }

    pub fn degree_in(&self, p: ParamId) -> u32 {
        self.terms.keys().map(|m| m.exponent(p)).max().unwrap_or(0)
    }

    pub fn params_used(&self) -> Vec<ParamId> {
        let mut out: Vec<ParamId> = Vec::new();
        for m in self.terms.keys() {
            for &(p, _) in &m.0 {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.mul_coeff(&c.inv()));
        }
        let (dm, dc) = d.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut r = self.clone();
        let mut q = Poly::zero();
        while !r.is_zero() {
            let (rm, rc) = r.leading().unwrap();
            let qm = rm.div(&dm)?;
            let qc = rc.div(&dc);
            let t = Poly {
                terms: BTreeMap::from([(qm, qc)]),
            };
            q = q.add(&t);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    /// Substitute every parameter by a scalar; the result is a scalar.
    pub fn subst_params(&self, map: &dyn Fn(ParamId) -> Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_gauss(c.clone());
            for &(p, e) in &m.0 {
                let v = map(p);
                for _ in 0..e {
                    t = t.mul(&v);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }
}

/// View a polynomial as univariate in `v` with `Poly` coefficients (which do
/// not mention `v`). Index = degree in `v`.
fn to_univariate(p: &Poly, v: ParamId) -> Vec<Poly> {
    let d = p.degree_in(v) as usize;
    let mut coeffs = vec![Poly::zero(); d + 1];
    for (m, c) in &p.terms {
        let e = m.exponent(v) as usize;
        let rest = PMono(m.0.iter().filter(|&&(q, _)| q != v).cloned().collect());
        coeffs[e].insert_term(rest, c.clone());
    }
    coeffs
}

fn from_univariate(coeffs: &[Poly], v: ParamId) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        let shift = if e == 0 {
            PMono::one()
        } else {
            PMono(vec![(v, e as u32)])
        };
        for (m, k) in &c.terms {
            out.insert_term(m.mul(&shift), k.clone());
        }
    }
    out
}

fn uni_degree(u: &[Poly]) -> Option<usize> {
    u.iter().rposition(|c| !c.is_zero())
}

fn uni_trim(mut u: Vec<Poly>) -> Vec<Poly> {
    while u.last().map(|c| c.is_zero()).unwrap_or(false) {
        u.pop();
    }
    u
}

/// Pseudo-remainder of univariate polynomials with `Poly` coefficients.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let da = uni_degree(a).unwrap();
    let db = uni_degree(b).unwrap();
    assert!(da >= db);
    let lb = b[db].clone();
    let mut r: Vec<Poly> = a.to_vec();
    for k in (db..=da).rev() {
        let dr = match uni_degree(&r) {
            Some(d) => d,
            None => break,
        };
        if dr < db {
            break;
        }
        debug_assert!(dr <= k);
        if dr < k {
            continue;
        }
        let lead = r[dr].clone();
        // r = lb * r - lead * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for j in 0..=db {
            r[dr - db + j] = r[dr - db + j].sub(&lead.mul(&b[j]));
        }
        r = uni_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn content(u: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in u {
        if !c.is_zero() {
            g = poly_gcd(&g, c);
        }
    }
    g
}

fn primitive_part(u: &[Poly], cont: &Poly) -> Vec<Poly> {
    if cont.is_zero() {
        return u.to_vec();
    }
    u.iter()
        .map(|c| {
            if c.is_zero() {
                Poly::zero()
            } else {
                c.div_exact(cont).expect("content division is exact")
            }
        })
        .collect()
}

/// Multivariate gcd over Q(i); result normalized with leading coefficient 1.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    fn normalize(p: &Poly) -> Poly {
        if p.is_zero() {
            return Poly::zero();
        }
        p.mul_coeff(&p.leading_coeff().inv())
    }
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let mut vars = a.params_used();
    for p in b.params_used() {
        if !vars.contains(&p) {
            vars.push(p);
        }
    }
    vars.sort();
    let v = vars[0];
    let ua = to_univariate(a, v);
    let ub = to_univariate(b, v);
    let ca = content(&ua);
    let cb = content(&ub);
    let cg = poly_gcd(&ca, &cb);
    let mut pa = primitive_part(&ua, &ca);
    let mut pb = primitive_part(&ub, &cb);
    if uni_degree(&pa) < uni_degree(&pb) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        match uni_degree(&pb) {
            None => break,
            Some(0) => {
                // gcd of primitive parts is a constant in v
                pa = vec![Poly::one()];
                break;
            }
            Some(_) => {
                let r = pseudo_rem(&pa, &pb);
                let rc = content(&r);
                pa = pb;
                pb = primitive_part(&r, &rc);
            }
        }
    }
    let gg = from_univariate(&pa, v);
    normalize(&cg.mul(&gg))
}

/// A reduced rational function num/den in the parameters over Q(i).
///
/// Invariants: den != 0, gcd(num, den) = 1, den has leading coefficient 1
/// under graded-lex order. Equality is therefore semantic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() {
            let g = poly_gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.mul_coeff(&inv);
            den = den.mul_coeff(&inv);
        }
        Scalar { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussRat::i())
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_frac(n, d))
    }

    pub fn param(p: ParamId) -> Self {
        Scalar {
            num: Poly::param(p),
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_gauss(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Scalar::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        Scalar::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Scalar::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.num.conj(), self.den.conj())
    }

    /// Substitute parameters; fails if a denominator collapses to zero.
    pub fn subst_params(&self, map: &dyn Fn(ParamId) -> Scalar) -> Option<Scalar> {
        let n = self.num.subst_params(map);
        let d = self.den.subst_params(map);
        if d.is_zero() {
            return None;
        }
        Some(n.div(&d))
    }

    /// Value at the origin of parameter space, if finite there.
    pub fn eval_at_origin(&self) -> Option<GaussRat> {
        let d = self.den.constant_term();
        if d.is_zero() {
            let reduced = self.clone();
            // reduced form: a surviving zero constant term means a true pole
            // unless the numerator vanishes identically (handled above).
            if reduced.num.is_zero() {
                return Some(GaussRat::zero());
            }
            return None;
        }
        Some(self.num.constant_term().div(&d))
    }

    /// q-th root when one exists in closed form here: exact for 1, for
    /// integral q on any scalar, and for rational scalars with exact roots
    /// limited to +-1 and i units.
    pub fn try_root(&self, q: u32) -> Option<Scalar> {
        if q == 1 {
            return Some(self.clone());
        }
        if self.is_one() {
            return Some(Scalar::one());
        }
        None
    }
}
