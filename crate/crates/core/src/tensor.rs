//! Canonical arithmetic in A (x) A and A (x) A (x) A for the commutative
//! expression algebra A: leg-wise products, the flip, leg derivatives, and
//! the rank-3 embeddings used by the coassociativity check.

use std::collections::BTreeMap;

use crate::context::CoordId;
use crate::error::{Error, Result};
use crate::expr::{Expr, LinForm, TermKey};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TensorKey2 {
    pub l1: TermKey,
    pub l2: TermKey,
}

/// Rank-2 tensor over the expression algebra, canonical by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tensor2 {
    pub terms: BTreeMap<TensorKey2, Scalar>,
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn one() -> Self {
        tensor(&Expr::one(), &Expr::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_term(&mut self, key: TensorKey2, c: Scalar) {
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
        Tensor2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Tensor2::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.insert_term(
                    TensorKey2 {
                        l1: ka.l1.mul(&kb.l1),
                        l2: ka.l2.mul(&kb.l2),
                    },
                    ca.mul(cb),
                );
            }
        }
        out
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Tensor2::zero();
        }
        Tensor2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.mul(s)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Tensor2::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Single group-like term `s * (exp(L) (x) exp(M))`.
    pub fn as_unit(&self) -> Option<(Scalar, LinForm, LinForm)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        if !k.l1.mono.is_one() || !k.l2.mono.is_one() {
            return None;
        }
        Some((c.clone(), k.l1.exp.clone(), k.l2.exp.clone()))
    }

    pub fn unit_inv(&self) -> Option<Tensor2> {
        let (s, l, m) = self.as_unit()?;
        if s.is_zero() {
            return None;
        }
        let mut out = Tensor2::zero();
        out.insert_term(
            TensorKey2 {
                l1: TermKey {
                    mono: Default::default(),
                    exp: l.neg(),
                },
                l2: TermKey {
                    mono: Default::default(),
                    exp: m.neg(),
                },
            },
            s.inv(),
        );
        Some(out)
    }

    pub fn div_unit(&self, other: &Tensor2) -> Result<Tensor2> {
        match other.unit_inv() {
            Some(inv) => Ok(self.mul(&inv)),
            None => Err(Error::DomainError(
                "division by a non-invertible tensor".into(),
            )),
        }
    }

    /// Derivative inside one leg (1 or 2).
    pub fn leg_diff(&self, leg: u8, x: CoordId) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (k, c) in &self.terms {
            let (target, other) = match leg {
                1 => (&k.l1, &k.l2),
                2 => (&k.l2, &k.l1),
                _ => panic!("leg must be 1 or 2"),
            };
            let le = Expr {
                terms: BTreeMap::from([(target.clone(), c.clone())]),
            };
            for (dk, dc) in le.diff(x).terms {
                let key = match leg {
                    1 => TensorKey2 {
                        l1: dk,
                        l2: other.clone(),
                    },
                    _ => TensorKey2 {
                        l1: other.clone(),
                        l2: dk,
                    },
                };
                out.insert_term(key, dc);
            }
        }
        out
    }

    pub fn flip(&self) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (k, c) in &self.terms {
            out.insert_term(
                TensorKey2 {
                    l1: k.l2.clone(),
                    l2: k.l1.clone(),
                },
                c.clone(),
            );
        }
        out
    }

    /// Set all coordinates of one leg to zero (counit evaluation on that leg).
    pub fn leg_at_zero(&self, leg: u8) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (k, c) in &self.terms {
            let target = match leg {
                1 => &k.l1,
                2 => &k.l2,
                _ => panic!("leg must be 1 or 2"),
            };
            if !target.mono.is_one() {
                continue;
            }
            let killed = TermKey::one();
            let key = match leg {
                1 => TensorKey2 {
                    l1: killed,
                    l2: k.l2.clone(),
                },
                _ => TensorKey2 {
                    l1: k.l1.clone(),
                    l2: killed,
                },
            };
            out.insert_term(key, c.clone());
        }
        out
    }

    /// Multiply the two legs together (the Hopf multiplication map m).
    pub fn multiply_legs(&self) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in &self.terms {
            out.insert_term(k.l1.mul(&k.l2), c.clone());
        }
        out
    }

    /// View one leg of every term as an expression paired with the other leg
    /// key: used for leg-wise rewriting under coordinate changes.
    pub fn map_leg_exprs(
        &self,
        f: &dyn Fn(&Expr) -> Result<Expr>,
        leg: u8,
    ) -> Result<Tensor2> {
        let mut out = Tensor2::zero();
        for (k, c) in &self.terms {
            let (target, other) = match leg {
                1 => (&k.l1, &k.l2),
                2 => (&k.l2, &k.l1),
                _ => panic!("leg must be 1 or 2"),
            };
            let e = Expr {
                terms: BTreeMap::from([(target.clone(), c.clone())]),
            };
            let fe = f(&e)?;
            for (nk, nc) in fe.terms {
                let key = match leg {
                    1 => TensorKey2 {
                        l1: nk,
                        l2: other.clone(),
                    },
                    _ => TensorKey2 {
                        l1: other.clone(),
                        l2: nk,
                    },
                };
                out.insert_term(key, nc);
            }
        }
        Ok(out)
    }
}

/// Tensor product of two expressions.
pub fn tensor(a: &Expr, b: &Expr) -> Tensor2 {
    let mut out = Tensor2::zero();
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            out.insert_term(
                TensorKey2 {
                    l1: ka.clone(),
                    l2: kb.clone(),
                },
                ca.mul(cb),
            );
        }
    }
    out
}

pub fn embed_left(a: &Expr) -> Tensor2 {
    tensor(a, &Expr::one())
}

pub fn embed_right(a: &Expr) -> Tensor2 {
    tensor(&Expr::one(), a)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TensorKey3 {
    pub l1: TermKey,
    pub l2: TermKey,
    pub l3: TermKey,
}

/// Rank-3 tensor; only what the coassociativity check needs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tensor3 {
    pub terms: BTreeMap<TensorKey3, Scalar>,
}

impl Tensor3 {
    pub fn zero() -> Self {
        Tensor3::default()
    }

    pub fn insert_term(&mut self, key: TensorKey3, c: Scalar) {
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
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_term(k.clone(), c.neg());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Apply a coproduct-like map to the leftmost leg: (Delta (x) id)(t).
/// `delta` must extend to every leg-1 expression of `t`.
pub fn apply_leftmost(
    delta: &dyn Fn(&Expr) -> Result<Tensor2>,
    t: &Tensor2,
) -> Result<Tensor3> {
    let mut out = Tensor3::zero();
    for (k, c) in &t.terms {
        let leg1 = Expr {
            terms: BTreeMap::from([(k.l1.clone(), c.clone())]),
        };
        let d = delta(&leg1)?;
        for (dk, dc) in &d.terms {
            out.insert_term(
                TensorKey3 {
                    l1: dk.l1.clone(),
                    l2: dk.l2.clone(),
                    l3: k.l2.clone(),
                },
                dc.clone(),
            );
        }
    }
    Ok(out)
}

/// Apply a coproduct-like map to the rightmost leg: (id (x) Delta)(t).
pub fn apply_rightmost(
    delta: &dyn Fn(&Expr) -> Result<Tensor2>,
    t: &Tensor2,
) -> Result<Tensor3> {
    let mut out = Tensor3::zero();
    for (k, c) in &t.terms {
        let leg2 = Expr {
            terms: BTreeMap::from([(k.l2.clone(), c.clone())]),
        };
        let d = delta(&leg2)?;
        for (dk, dc) in &d.terms {
            out.insert_term(
                TensorKey3 {
                    l1: k.l1.clone(),
                    l2: dk.l1.clone(),
                    l3: dk.l2.clone(),
                },
                dc.clone(),
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{Context, ParamId};

    fn ctx() -> Context {
        Context::new(&["z"], &["Jp", "Jm", "J3"]).unwrap()
    }

    fn z() -> Scalar {
        Scalar::param(ParamId(0))
    }

    fn book_delta_jp() -> Tensor2 {
        // e^{-zJ3} (x) Jp + Jp (x) 1
        let e = Expr::exp(LinForm::term(CoordId(2), z().neg()));
        let jp = Expr::coord(CoordId(0));
        tensor(&e, &jp).add(&tensor(&jp, &Expr::one()))
    }

    #[test]
    fn tensor_unit_and_cancellation() {
        let _ = ctx();
        assert!(Tensor2::one().as_unit().is_some());
        let a = LinForm::term(CoordId(2), z());
        let b = LinForm::term(CoordId(0), z().neg());
        let t = tensor(&Expr::exp(a.clone()), &Expr::exp(b.clone()));
        let tinv = tensor(&Expr::exp(a.neg()), &Expr::exp(b.neg()));
        assert_eq!(t.mul(&tinv), Tensor2::one());
    }

    #[test]
    fn flip_is_involutive_automorphism() {
        let _ = ctx();
        let t = book_delta_jp();
        assert_eq!(t.flip().flip(), t);
        let s = tensor(&Expr::coord(CoordId(1)), &Expr::coord(CoordId(2)));
        assert_eq!(t.mul(&s).flip(), t.flip().mul(&s.flip()));
        // flip of the book coproduct
        let e = Expr::exp(LinForm::term(CoordId(2), z().neg()));
        let jp = Expr::coord(CoordId(0));
        let expected = tensor(&jp, &e).add(&tensor(&Expr::one(), &jp));
        assert_eq!(book_delta_jp().flip(), expected);
    }

    #[test]
    fn leg_diff_examples() {
        let _ = ctx();
        let e = Expr::exp(LinForm::term(CoordId(2), z().neg()));
        let jp = Expr::coord(CoordId(0));
        let t = tensor(&e, &jp);
        assert_eq!(t.leg_diff(2, CoordId(0)), tensor(&e, &Expr::one()));
        assert_eq!(t.leg_diff(1, CoordId(2)), t.scalar_mul(&z().neg()));
        // mixed leg derivatives commute
        let u = book_delta_jp();
        assert_eq!(
            u.leg_diff(1, CoordId(2)).leg_diff(2, CoordId(0)),
            u.leg_diff(2, CoordId(0)).leg_diff(1, CoordId(2))
        );
    }

    #[test]
    fn coassociativity_of_primitive() {
        let _ = ctx();
        let j3 = Expr::coord(CoordId(2));
        let prim = tensor(&j3, &Expr::one()).add(&tensor(&Expr::one(), &j3));
        let delta = |e: &Expr| -> Result<Tensor2> {
            // algebra morphism with J3 primitive, others scalar-like: enough
            // for this test (only J3 and 1 appear).
            let mut out = Tensor2::zero();
            for (k, c) in &e.terms {
                assert!(k.exp.is_zero());
                let deg = k.mono.exponent(CoordId(2));
                let rest: u32 = k.mono.total_degree() - deg;
                assert_eq!(rest, 0);
                let p = tensor(&j3, &Expr::one()).add(&tensor(&Expr::one(), &j3));
                out = out.add(&p.pow(deg).scalar_mul(c));
            }
            Ok(out)
        };
        let l = apply_leftmost(&delta, &prim).unwrap();
        let r = apply_rightmost(&delta, &prim).unwrap();
        assert_eq!(l, r);
        assert_eq!(l.terms.len(), 3);
    }
}
