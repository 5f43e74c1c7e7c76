//! Taylor expansion around the origin of parameter space.
//!
//! Individual terms may carry monomial poles (like 1/(2z)); they are expanded
//! as Laurent series and must cancel in the sum, as in (1 - e^{-2zJ3})/(2z).

use std::collections::BTreeMap;

use crate::context::ParamId;
use crate::error::{Error, Result};
use crate::expr::{Expr, LinForm, Monomial, TermKey};
use crate::scalar::{GaussRat, PMono, Poly, Scalar};

/// Parameter exponent vector allowing negative entries during expansion.
type LaurentMono = BTreeMap<ParamId, i32>;

/// Coordinate polynomial: coefficient of one parameter monomial.
type CoordPoly = BTreeMap<Monomial, GaussRat>;

#[derive(Default)]
struct LaurentAcc {
    terms: BTreeMap<LaurentMono, CoordPoly>,
}

impl LaurentAcc {
    fn insert(&mut self, pm: LaurentMono, mono: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(pm).or_default();
        let v = entry
            .get(&mono)
            .cloned()
            .unwrap_or_else(GaussRat::zero)
            .add(&c);
        if v.is_zero() {
            entry.remove(&mono);
        } else {
            entry.insert(mono, v);
        }
    }
}

fn laurent_degree(m: &LaurentMono) -> i64 {
    m.values().map(|&e| e as i64).sum()
}

/// A polynomial-with-shift view of a scalar: `s = shift * unit_series` where
/// `shift` has only negative exponents and the unit part is finite at 0.
struct ScalarSeries {
    /// Exponent shift (all entries <= 0).
    shift: LaurentMono,
    /// Series coefficients by parameter monomial, valid up to `order`.
    series: BTreeMap<PMono, GaussRat>,
}

/// Expand a scalar as a Laurent series; the series part is computed up to
/// total degree `order` (post-shift degrees range over [-|shift|, order-|shift|]).
fn scalar_series(s: &Scalar, order: u32) -> Result<ScalarSeries> {
    if s.is_zero() {
        return Ok(ScalarSeries {
            shift: BTreeMap::new(),
            series: BTreeMap::new(),
        });
    }
    let den = s.den();
    // peel off the largest parameter monomial dividing the denominator
    let mut min_exp: BTreeMap<ParamId, u32> = BTreeMap::new();
    let mut first = true;
    for m in den.terms.keys() {
        if first {
            for &(p, e) in &m.0 {
                min_exp.insert(p, e);
            }
            first = false;
        } else {
            let keys: Vec<ParamId> = min_exp.keys().copied().collect();
            for p in keys {
                let e = m.exponent(p);
                if e == 0 {
                    min_exp.remove(&p);
                } else if e < min_exp[&p] {
                    min_exp.insert(p, e);
                }
            }
        }
    }
    let shift_mono = PMono(min_exp.iter().map(|(&p, &e)| (p, e)).collect());
    let den2 = den
        .div_exact(&Poly {
            terms: BTreeMap::from([(shift_mono.clone(), GaussRat::one())]),
        })
        .expect("monomial divides denominator");
    let d0 = den2.constant_term();
    if d0.is_zero() {
        // non-monomial denominator vanishing at the origin: a true pole
        return Err(Error::PoleAtOrigin);
    }
    // den2 = d0 (1 - r) with val(r) >= 1; invert by geometric series
    let r = Poly::constant(d0.clone())
        .sub(&den2)
        .mul_coeff(&d0.inv());
    let mut inv = Poly::one();
    let mut rk = Poly::one();
    for _ in 0..order {
        rk = truncate_poly(&rk.mul(&r), order);
        if rk.is_zero() {
            break;
        }
        inv = inv.add(&rk);
    }
    inv = inv.mul_coeff(&d0.inv());
    let series_poly = truncate_poly(&s.num().mul(&inv), order);
    Ok(ScalarSeries {
        shift: min_exp.iter().map(|(&p, &e)| (p, -(e as i32))).collect(),
        series: series_poly.terms,
    })
}

fn truncate_poly(p: &Poly, order: u32) -> Poly {
    Poly {
        terms: p
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() <= order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    }
}

/// Series of exp(L) up to parameter order `order` as a map
/// param-monomial -> coordinate polynomial. Every exponent coefficient must
/// vanish at the parameter origin.
fn exp_series(l: &LinForm, order: u32) -> Result<BTreeMap<PMono, CoordPoly>> {
    let mut acc: BTreeMap<PMono, CoordPoly> = BTreeMap::new();
    acc.insert(PMono::one(), BTreeMap::from([(Monomial::one(), GaussRat::one())]));
    for (&x, s) in &l.0 {
        let ss = scalar_series(s, order).map_err(|_| Error::NonTruncatableExponent)?;
        if !ss.shift.is_empty() {
            return Err(Error::NonTruncatableExponent);
        }
        if ss
            .series
            .get(&PMono::one())
            .map(|c| !c.is_zero())
            .unwrap_or(false)
        {
            return Err(Error::NonTruncatableExponent);
        }
        // factor = sum_k (s*x)^k / k!
        let mut factor: BTreeMap<PMono, CoordPoly> = BTreeMap::new();
        factor.insert(PMono::one(), BTreeMap::from([(Monomial::one(), GaussRat::one())]));
        let mut pow: BTreeMap<PMono, GaussRat> =
            BTreeMap::from([(PMono::one(), GaussRat::one())]); // s^k truncated
        let mut kfact = GaussRat::one();
        for k in 1..=order {
            // pow *= s (truncated)
            let mut next: BTreeMap<PMono, GaussRat> = BTreeMap::new();
            for (ma, ca) in &pow {
                for (mb, cb) in &ss.series {
                    let m = ma.mul(mb);
                    if m.total_degree() > order {
                        continue;
                    }
                    let c = ca.mul(cb);
                    let v = next.get(&m).cloned().unwrap_or_else(GaussRat::zero).add(&c);
                    if v.is_zero() {
                        next.remove(&m);
                    } else {
                        next.insert(m, v);
                    }
                }
            }
            pow = next;
            if pow.is_empty() {
                break;
            }
            kfact = kfact.mul(&GaussRat::from_int(k as i64));
            let inv_kfact = kfact.inv();
            let mono = Monomial(BTreeMap::from([(x, k)]));
            for (m, c) in &pow {
                let entry = factor.entry(m.clone()).or_default();
                let v = entry
                    .get(&mono)
                    .cloned()
                    .unwrap_or_else(GaussRat::zero)
                    .add(&c.mul(&inv_kfact));
                if v.is_zero() {
                    entry.remove(&mono);
                } else {
                    entry.insert(mono.clone(), v);
                }
            }
        }
        acc = mul_series_maps(&acc, &factor, order);
    }
    Ok(acc)
}

fn mul_series_maps(
    a: &BTreeMap<PMono, CoordPoly>,
    b: &BTreeMap<PMono, CoordPoly>,
    order: u32,
) -> BTreeMap<PMono, CoordPoly> {
    let mut out: BTreeMap<PMono, CoordPoly> = BTreeMap::new();
    for (ma, pa) in a {
        for (mb, pb) in b {
            let m = ma.mul(mb);
            if m.total_degree() > order {
                continue;
            }
            let entry = out.entry(m).or_default();
            for (xa, ca) in pa {
                for (xb, cb) in pb {
                    let x = xa.mul(xb);
                    let c = ca.mul(cb);
                    let v = entry.get(&x).cloned().unwrap_or_else(GaussRat::zero).add(&c);
                    if v.is_zero() {
                        entry.remove(&x);
                    } else {
                        entry.insert(x, v);
                    }
                }
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// Taylor-expand `a` around all parameters = 0, truncated at total parameter
/// degree `order`. The result is exponential-free with polynomial scalars.
pub fn series_in_params(a: &Expr, order: u32) -> Result<Expr> {
    let mut acc = LaurentAcc::default();
    for (key, coeff) in &a.terms {
        let ss = scalar_series(coeff, order + max_negdeg_bound(coeff))?;
        let negdeg: i64 = -laurent_degree(&ss.shift);
        // terms whose scalar valuation already exceeds the order die here,
        // before the exponential is expanded (its exponent may not truncate)
        let val = ss
            .series
            .keys()
            .map(|m| m.total_degree() as i64)
            .min()
            .unwrap_or(i64::MAX);
        if val - negdeg > order as i64 {
            continue;
        }
        let need = (order as i64 + negdeg) as u32;
        let exp_part = if key.exp.is_zero() {
            BTreeMap::from([(
                PMono::one(),
                BTreeMap::from([(Monomial::one(), GaussRat::one())]),
            )])
        } else {
            exp_series(&key.exp, need)?
        };
        for (ms, cs) in &ss.series {
            for (me, pe) in &exp_part {
                let deg = ms.total_degree() as i64 + me.total_degree() as i64 - negdeg;
                if deg > order as i64 {
                    continue;
                }
                let mut pm: LaurentMono = ss.shift.clone();
                for &(p, e) in ms.mul(me).0.iter() {
                    *pm.entry(p).or_insert(0) += e as i32;
                }
                pm.retain(|_, &mut e| e != 0);
                for (xm, xc) in pe {
                    acc.insert(pm.clone(), key.mono.mul(xm), cs.mul(xc));
                }
            }
        }
    }
    // assemble; any surviving negative exponent is a pole
    let mut out = Expr::zero();
    for (pm, cp) in &acc.terms {
        if cp.is_empty() {
            continue;
        }
        if pm.values().any(|&e| e < 0) {
            return Err(Error::PoleAtOrigin);
        }
        let pmono = PMono(pm.iter().map(|(&p, &e)| (p, e as u32)).collect());
        for (mono, c) in cp {
            let s = Scalar::new(
                Poly {
                    terms: BTreeMap::from([(pmono.clone(), c.clone())]),
                },
                Poly::one(),
            );
            out.insert_term(
                TermKey {
                    mono: mono.clone(),
                    exp: LinForm::zero(),
                },
                s,
            );
        }
    }
    Ok(out)
}

/// Upper bound on the pole order of a scalar (total degree of the monomial
/// part of its denominator).
fn max_negdeg_bound(s: &Scalar) -> u32 {
    s.den()
        .terms
        .keys()
        .map(|m| m.total_degree())
        .min()
        .unwrap_or(0)
}
