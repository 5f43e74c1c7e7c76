//! Deterministic canonical text output. Golden tests diff this verbatim, so
//! every choice here (term order, spacing, parenthesization) is part of the
//! observable contract.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::context::Context;
use crate::coproduct::Body;
use crate::expr::{Expr, LinForm, Monomial, TermKey};
use crate::scalar::{GaussRat, PMono, Poly, Scalar};
use crate::tensor::{Tensor2, Tensor3};

pub struct Printer<'a> {
    pub ctx: &'a Context,
    pub fold_trig: bool,
}

fn gauss_str(c: &GaussRat) -> String {
    format!("{c}")
}

/// True when the coefficient can prefix a product without parentheses.
fn gauss_atomic(c: &GaussRat) -> bool {
    if c.im.is_zero() {
        true
    } else {
        c.re.is_zero() && (c.im.is_one() || c.im == -BigRational::one())
    }
}

impl<'a> Printer<'a> {
    pub fn new(ctx: &'a Context) -> Self {
        Printer {
            ctx,
            fold_trig: false,
        }
    }

    pub fn with_fold(ctx: &'a Context, fold_trig: bool) -> Self {
        Printer { ctx, fold_trig }
    }

    pub fn pmono(&self, m: &PMono) -> String {
        m.0.iter()
            .map(|&(p, e)| {
                let name = self.ctx.param_name(p);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // descending graded-lex
        for (i, (m, c)) in p.terms.iter().rev().enumerate() {
            let cs = gauss_str(c);
            let neg = cs.starts_with('-') && gauss_atomic(c);
            let body = if m.is_one() {
                if gauss_atomic(c) {
                    cs.trim_start_matches('-').to_string()
                } else {
                    format!("({cs})")
                }
            } else {
                let ms = self.pmono(m);
                if c.is_one() {
                    ms
                } else if *c == GaussRat::from_int(-1) {
                    // handled through neg flag
                    ms
                } else if gauss_atomic(c) {
                    format!("{}*{}", cs.trim_start_matches('-'), ms)
                } else {
                    format!("({cs})*{ms}")
                }
            };
            let neg = neg || (*c == GaussRat::from_int(-1) && !m.is_one());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }

    /// Render a scalar as a quotient of integer-content polynomials.
    pub fn scalar(&self, s: &Scalar) -> String {
        if s.is_polynomial() {
            return self.poly(s.num());
        }
        // scale num and den by the lcm of all rational denominators so the
        // display shows integer coefficients, e.g. -1/(2*z)
        let mut lcm = BigInt::one();
        for c in s.num().terms.values().chain(s.den().terms.values()) {
            lcm = num_integer::lcm(lcm.clone(), c.re.denom().clone());
            lcm = num_integer::lcm(lcm, c.im.denom().clone());
        }
        let f = GaussRat::from_rational(BigRational::from_integer(lcm));
        let n = s.num().mul_coeff(&f);
        let d = s.den().mul_coeff(&f);
        let ns = self.poly(&n);
        let ds = self.poly(&d);
        let np = if n.terms.len() > 1 {
            format!("({ns})")
        } else {
            ns
        };
        let dp = if d.terms.len() > 1 || d.leading().map(|(m, c)| !m.is_one() && !c.is_one()).unwrap_or(false)
        {
            format!("({ds})")
        } else {
            ds
        };
        format!("{np}/{dp}")
    }

    fn scalar_is_atomic(&self, s: &Scalar) -> bool {
        s.is_polynomial()
            && s.num().terms.len() == 1
            && s.num().terms.values().all(gauss_atomic)
    }

    pub fn linform(&self, l: &LinForm) -> String {
        if l.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&x, c)) in l.0.iter().enumerate() {
            let name = self.ctx.coord_name(x);
            let cs = self.scalar(c);
            let (neg, body) = if c.is_one() {
                (false, name.to_string())
            } else if *c == Scalar::from_int(-1) {
                (true, name.to_string())
            } else if self.scalar_is_atomic(c) {
                (
                    cs.starts_with('-'),
                    format!("{}*{}", cs.trim_start_matches('-'), name),
                )
            } else {
                (false, format!("({cs})*{name}"))
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }

    fn mono_factors(&self, m: &Monomial) -> Vec<String> {
        m.0.iter()
            .map(|(&x, &e)| {
                let name = self.ctx.coord_name(x);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect()
    }

    /// One displayed product: signed coefficient and factor list.
    fn term_string(&self, c: &Scalar, factors: &[String]) -> (bool, String) {
        if factors.is_empty() {
            let cs = self.scalar(c);
            if self.scalar_is_atomic(c) || (c.is_polynomial() && c.num().terms.len() == 1) {
                return (cs.starts_with('-'), cs.trim_start_matches('-').to_string());
            }
            return (false, format!("({cs})"));
        }
        let body = factors.join("*");
        if c.is_one() {
            (false, body)
        } else if *c == Scalar::from_int(-1) {
            (true, body)
        } else {
            let cs = self.scalar(c);
            if self.scalar_is_atomic(c) {
                (
                    cs.starts_with('-'),
                    format!("{}*{}", cs.trim_start_matches('-'), body),
                )
            } else {
                (false, format!("({cs})*{body}"))
            }
        }
    }

    fn join_terms(&self, terms: Vec<(bool, String)>) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (neg, body)) in terms.into_iter().enumerate() {
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }

    pub fn expr(&self, e: &Expr) -> String {
        if self.fold_trig {
            self.expr_folded(e)
        } else {
            let terms = e
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut factors = self.mono_factors(&k.mono);
                    if !k.exp.is_zero() {
                        factors.push(format!("exp({})", self.linform(&k.exp)));
                    }
                    self.term_string(c, &factors)
                })
                .collect();
            self.join_terms(terms)
        }
    }

    fn expr_folded(&self, e: &Expr) -> String {
        let display = fold_terms(e);
        let terms = display
            .into_iter()
            .map(|t| {
                let mut factors = self.mono_factors(&t.mono);
                if !t.exp.is_zero() {
                    factors.push(format!("exp({})", self.linform(&t.exp)));
                }
                match &t.trig {
                    TrigPart::None => {}
                    TrigPart::Cos(l) => factors.push(format!("cos({})", self.linform(l))),
                    TrigPart::Sin(l) => factors.push(format!("sin({})", self.linform(l))),
                }
                match &t.hyp {
                    HypPart::None => {}
                    HypPart::Cosh(l) => factors.push(format!("cosh({})", self.linform(l))),
                    HypPart::Sinh(l) => factors.push(format!("sinh({})", self.linform(l))),
                }
                self.term_string(&t.coeff, &factors)
            })
            .collect();
        self.join_terms(terms)
    }

    pub fn tensor2(&self, t: &Tensor2) -> String {
        if t.terms.is_empty() {
            return "0".into();
        }
        // group by leg-2 key for readable factored output, preserving order
        let terms: Vec<(bool, String)> = t
            .terms
            .iter()
            .map(|(k, c)| {
                let l1 = self.leg_string(&k.l1);
                let l2 = self.leg_string(&k.l2);
                let (neg, cs) = self.term_string(c, &[]);
                let body = if cs == "1" {
                    format!("{l1} (x) {l2}")
                } else {
                    format!("{cs}*{l1} (x) {l2}")
                };
                (neg, body)
            })
            .collect();
        self.join_terms(terms)
    }

    /// Folded rank-2 rendering: each leg printed as a folded expression, with
    /// conjugate exponential pairs inside each leg-grouping collapsed.
    pub fn tensor2_folded(&self, t: &Tensor2) -> String {
        if !self.fold_trig {
            return self.tensor2(t);
        }
        if t.terms.is_empty() {
            return "0".into();
        }
        // Group terms by leg-2 key, fold the leg-1 cofactor expression.
        let mut groups: BTreeMap<TermKey, Expr> = BTreeMap::new();
        for (k, c) in &t.terms {
            groups
                .entry(k.l2.clone())
                .or_default()
                .insert_term(k.l1.clone(), c.clone());
        }
        let mut parts = Vec::new();
        for (l2, cof) in &groups {
            let cs = self.expr_folded(cof);
            let l2s = self.leg_string(l2);
            let wrapped = if cof.terms.len() > 1 || cs.contains(" + ") || cs.contains(" - ") {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(format!("{wrapped} (x) {l2s}"));
        }
        parts.join(" + ")
    }

    fn leg_string(&self, k: &TermKey) -> String {
        let mut factors = self.mono_factors(&k.mono);
        if !k.exp.is_zero() {
            factors.push(format!("exp({})", self.linform(&k.exp)));
        }
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }

    /// Recipe bodies, parenthesized by precedence; round-trips through the
    /// recipe parser.
    pub fn body(&self, b: &Body) -> String {
        self.body_prec(b, 0)
    }

    fn body_prec(&self, b: &Body, prec: u8) -> String {
        let (s, my_prec) = match b {
            Body::Entry(i, j) => (format!("E[{},{}]", i + 1, j + 1), 3),
            Body::Const(c) => {
                let cs = self.scalar(c);
                if self.scalar_is_atomic(c) && !cs.starts_with('-') {
                    (cs, 3)
                } else {
                    (format!("({cs})"), 3)
                }
            }
            Body::Coord(x) => (self.ctx.coord_name(*x).to_string(), 3),
            Body::Add(a, b) => (
                format!("{} + {}", self.body_prec(a, 1), self.body_prec(b, 1)),
                1,
            ),
            Body::Sub(a, b) => (
                format!("{} - {}", self.body_prec(a, 1), self.body_prec(b, 2)),
                1,
            ),
            Body::Mul(a, b) => (
                format!("{}*{}", self.body_prec(a, 2), self.body_prec(b, 2)),
                2,
            ),
            Body::Div(a, b) => (
                format!("{}/{}", self.body_prec(a, 2), self.body_prec(b, 3)),
                2,
            ),
            Body::Neg(a) => (format!("-{}", self.body_prec(a, 2)), 1),
            Body::Log(a) => (format!("log({})", self.body_prec(a, 0)), 3),
            Body::Pow(a, r) => (
                format!("{}^({})", self.body_prec(a, 3), r),
                2,
            ),
            Body::Exp(l) => (format!("exp({})", self.linform(l)), 3),
        };
        if my_prec < prec {
            format!("({s})")
        } else {
            s
        }
    }

    pub fn tensor3(&self, t: &Tensor3) -> String {
        if t.terms.is_empty() {
            return "0".into();
        }
        let terms: Vec<(bool, String)> = t
            .terms
            .iter()
            .map(|(k, c)| {
                let body = format!(
                    "{} (x) {} (x) {}",
                    self.leg_string(&k.l1),
                    self.leg_string(&k.l2),
                    self.leg_string(&k.l3)
                );
                let (neg, cs) = self.term_string(c, &[]);
                let body = if cs == "1" {
                    body
                } else {
                    format!("{cs}*{body}")
                };
                (neg, body)
            })
            .collect();
        self.join_terms(terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum TrigPart {
    None,
    Cos(LinForm),
    Sin(LinForm),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum HypPart {
    None,
    Cosh(LinForm),
    Sinh(LinForm),
}

#[derive(Debug, Clone)]
struct DisplayTerm {
    mono: Monomial,
    exp: LinForm,
    trig: TrigPart,
    hyp: HypPart,
    coeff: Scalar,
}

fn linform_real_imag(l: &LinForm) -> (LinForm, LinForm) {
    let half = Scalar::from_frac(1, 2);
    let half_i_inv = Scalar::i().inv().mul(&half); // 1/(2i)
    let mut re = LinForm::zero();
    let mut im = LinForm::zero();
    for (&x, s) in &l.0 {
        let c = s.conj();
        let r = s.add(&c).mul(&half);
        let i = s.sub(&c).mul(&half_i_inv);
        re = re.add(&LinForm::term(x, r));
        im = im.add(&LinForm::term(x, i));
    }
    (re, im)
}

fn linform_sign_normalized(l: &LinForm) -> (LinForm, bool) {
    let n = l.neg();
    if *l < n {
        (n, true)
    } else {
        (l.clone(), false)
    }
}

/// Fold conjugate exponential pairs into trig/hyperbolic display terms.
fn fold_terms(e: &Expr) -> Vec<DisplayTerm> {
    // stage A: split each exponent into real and imaginary parts; pair +-I
    // within the same (mono, R) group into cos/sin.
    let mut grouped: BTreeMap<(Monomial, LinForm), Vec<(LinForm, Scalar)>> = BTreeMap::new();
    for (k, c) in &e.terms {
        let (re, im) = linform_real_imag(&k.exp);
        grouped
            .entry((k.mono.clone(), re))
            .or_default()
            .push((im, c.clone()));
    }
    let mut stage_a: Vec<DisplayTerm> = Vec::new();
    for ((mono, re), entries) in grouped {
        let mut used = vec![false; entries.len()];
        for i in 0..entries.len() {
            if used[i] {
                continue;
            }
            let (im_i, c_i) = &entries[i];
            if im_i.is_zero() {
                used[i] = true;
                stage_a.push(DisplayTerm {
                    mono: mono.clone(),
                    exp: re.clone(),
                    trig: TrigPart::None,
                    hyp: HypPart::None,
                    coeff: c_i.clone(),
                });
                continue;
            }
            let neg = im_i.neg();
            let partner = (i + 1..entries.len()).find(|&j| !used[j] && entries[j].0 == neg);
            match partner {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                    let c_j = entries[j].1.clone();
                    let (iarg, flipped) = linform_sign_normalized(im_i);
                    let (ci, cj) = if flipped {
                        (c_j.clone(), c_i.clone())
                    } else {
                        (c_i.clone(), c_j)
                    };
                    let cos_c = ci.add(&cj);
                    let sin_c = ci.sub(&cj).mul(&Scalar::i());
                    if !cos_c.is_zero() {
                        stage_a.push(DisplayTerm {
                            mono: mono.clone(),
                            exp: re.clone(),
                            trig: TrigPart::Cos(iarg.clone()),
                            hyp: HypPart::None,
                            coeff: cos_c,
                        });
                    }
                    if !sin_c.is_zero() {
                        stage_a.push(DisplayTerm {
                            mono: mono.clone(),
                            exp: re.clone(),
                            trig: TrigPart::Sin(iarg),
                            hyp: HypPart::None,
                            coeff: sin_c,
                        });
                    }
                }
                None => {
                    used[i] = true;
                    // leave as a raw complex exponential
                    let full = re.add(&im_i.scale(&Scalar::i()));
                    stage_a.push(DisplayTerm {
                        mono: mono.clone(),
                        exp: full,
                        trig: TrigPart::None,
                        hyp: HypPart::None,
                        coeff: c_i.clone(),
                    });
                }
            }
        }
    }
    // stage B: pair real exponents R1, R2 with matching coefficients (same
    // trig part) into exp(midpoint)*cosh/sinh(half difference).
    let mut out: Vec<DisplayTerm> = Vec::new();
    let mut used = vec![false; stage_a.len()];
    for i in 0..stage_a.len() {
        if used[i] {
            continue;
        }
        let t_i = stage_a[i].clone();
        used[i] = true;
        if t_i.exp.is_zero() {
            out.push(t_i);
            continue;
        }
        let mut folded = None;
        for (j, t_j) in stage_a.iter().enumerate().skip(i + 1) {
            if used[j] || t_j.mono != t_i.mono || t_j.trig != t_i.trig || t_j.exp == t_i.exp {
                continue;
            }
            let sum = t_i.exp.add(&t_j.exp);
            let half = Scalar::from_frac(1, 2);
            let mid = sum.scale(&half);
            let diff = t_i.exp.add(&t_j.exp.neg()).scale(&half);
            if t_j.coeff == t_i.coeff {
                let (d, _) = linform_sign_normalized(&diff);
                folded = Some((
                    j,
                    DisplayTerm {
                        mono: t_i.mono.clone(),
                        exp: mid,
                        trig: t_i.trig.clone(),
                        hyp: HypPart::Cosh(d),
                        coeff: t_i.coeff.mul(&Scalar::from_int(2)),
                    },
                ));
                break;
            } else if t_j.coeff == t_i.coeff.neg() {
                let (d, flipped) = linform_sign_normalized(&diff);
                let c = if flipped {
                    t_i.coeff.neg()
                } else {
                    t_i.coeff.clone()
                };
                folded = Some((
                    j,
                    DisplayTerm {
                        mono: t_i.mono.clone(),
                        exp: mid,
                        trig: t_i.trig.clone(),
                        hyp: HypPart::Sinh(d),
                        coeff: c.mul(&Scalar::from_int(2)),
                    },
                ));
                break;
            }
        }
        match folded {
            Some((j, t)) => {
                used[j] = true;
                out.push(t);
            }
            None => out.push(t_i),
        }
    }
    out.sort_by(|a, b| {
        (&a.mono, &a.exp, &a.trig, &a.hyp).cmp(&(&b.mono, &b.exp, &b.trig, &b.hyp))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{CoordId, ParamId};

    fn ctx() -> Context {
        Context::new(&["z", "eta"], &["Jp", "Jm", "J3", "P0"]).unwrap()
    }

    fn z() -> Scalar {
        Scalar::param(ParamId(0))
    }

    fn eta() -> Scalar {
        Scalar::param(ParamId(1))
    }

    #[test]
    fn scalar_displays() {
        let c = ctx();
        let p = Printer::new(&c);
        assert_eq!(p.scalar(&Scalar::from_frac(-1, 2).div(&z())), "-1/(2*z)");
        assert_eq!(p.scalar(&z().mul(&Scalar::from_frac(1, 2))), "1/2*z");
        assert_eq!(p.scalar(&Scalar::from_int(0)), "0");
        assert_eq!(p.scalar(&Scalar::i().neg()), "-i");
        let s = Scalar::one().div(&z().mul(&z()).add(&eta()));
        assert_eq!(p.scalar(&s), "1/(z^2 + eta)");
    }

    #[test]
    fn expr_display_and_cosh_fold() {
        let c = ctx();
        let plain = Printer::new(&c);
        let folded = Printer::with_fold(&c, true);
        let l = LinForm::term(CoordId(2), z());
        let half = Scalar::from_frac(1, 2);
        let cosh = Expr::exp(l.clone())
            .add(&Expr::exp(l.neg()))
            .scalar_mul(&half);
        assert_eq!(plain.expr(&cosh), "1/2*exp(-z*J3) + 1/2*exp(z*J3)");
        assert_eq!(folded.expr(&cosh), "cosh(z*J3)");
        let sinh = Expr::exp(l.clone())
            .sub(&Expr::exp(l.neg()))
            .scalar_mul(&half);
        assert_eq!(folded.expr(&sinh), "sinh(z*J3)");
    }

    #[test]
    fn trig_fold_with_real_factor() {
        let c = ctx();
        let folded = Printer::with_fold(&c, true);
        // e^{-z P0} cos(eta P0)
        let p0 = CoordId(3);
        let rz = LinForm::term(p0, z().neg());
        let ie = LinForm::term(p0, eta().mul(&Scalar::i()));
        let half = Scalar::from_frac(1, 2);
        let e = Expr::exp(rz.add(&ie))
            .add(&Expr::exp(rz.add(&ie.neg())))
            .scalar_mul(&half);
        assert_eq!(folded.expr(&e), "exp(-z*P0)*cos(eta*P0)");
        // sin with a coordinate factor
        let i2 = Scalar::i().mul(&Scalar::from_int(2)).inv();
        let s = Expr::exp(ie.clone())
            .sub(&Expr::exp(ie.neg()))
            .scalar_mul(&i2)
            .mul(&Expr::coord(CoordId(0)));
        assert_eq!(folded.expr(&s), "Jp*sin(eta*P0)");
    }
}
