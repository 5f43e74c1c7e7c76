//! Invertible coordinate changes on the dual group, transport of brackets and
//! coproducts, the flip/(z -> -z) symmetry test, and the syntactic
//! ordering-ambiguity certificate.

use std::collections::HashMap;

use crate::context::{CoordId, ParamId};
use crate::coproduct::CoproductMap;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::plsolver::BracketTable;
use crate::scalar::Scalar;
use crate::tensor::{tensor, Tensor2};

/// Forward: new coordinate values as functions of the old ones.
/// Inverse: old coordinate values as functions of the new ones.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    pub forward: HashMap<CoordId, Expr>,
    pub inverse: HashMap<CoordId, Expr>,
}

impl CoordinateChange {
    pub fn identity() -> Self {
        CoordinateChange {
            forward: HashMap::new(),
            inverse: HashMap::new(),
        }
    }

    pub fn forward_of(&self, x: CoordId) -> Expr {
        self.forward.get(&x).cloned().unwrap_or_else(|| Expr::coord(x))
    }

    /// Both compositions must be the identity on every coordinate.
    pub fn validate(&self, coords: &[CoordId]) -> Result<()> {
        for &x in coords {
            let fw = self.forward_of(x);
            let round = fw.substitute(&self.inverse)?;
            if round != Expr::coord(x) {
                return Err(Error::InvalidInput(format!(
                    "coordinate change: forward then inverse is not the identity on coordinate {}",
                    x.0
                )));
            }
            let inv = self
                .inverse
                .get(&x)
                .cloned()
                .unwrap_or_else(|| Expr::coord(x));
            let round = inv.substitute(&self.forward)?;
            if round != Expr::coord(x) {
                return Err(Error::InvalidInput(format!(
                    "coordinate change: inverse then forward is not the identity on coordinate {}",
                    x.0
                )));
            }
        }
        Ok(())
    }
}

/// Transport a bracket table and coproduct map through a coordinate change.
/// The new objects are expressed in the same coordinate names, now meaning
/// the primed functions.
pub fn transport(
    q: &BracketTable,
    map: &CoproductMap,
    change: &CoordinateChange,
    coords: &[CoordId],
) -> Result<(BracketTable, CoproductMap)> {
    change.validate(coords)?;
    let d = coords.len();
    let mut new_q = BracketTable::zero(d);
    for i in 0..d {
        for j in (i + 1)..d {
            let fi = change.forward_of(coords[i]);
            let fj = change.forward_of(coords[j]);
            let br = q.bracket(&fi, &fj, coords);
            new_q.set(i, j, br.substitute(&change.inverse)?);
        }
    }
    let rewrite = |e: &Expr| e.substitute(&change.inverse);
    let mut deltas = Vec::with_capacity(d);
    let mut primitive = Vec::with_capacity(d);
    for (i, &x) in coords.iter().enumerate() {
        let _ = i;
        let fw = change.forward_of(x);
        let d_new = map
            .delta_of_expr(&fw)?
            .map_leg_exprs(&rewrite, 1)?
            .map_leg_exprs(&rewrite, 2)?;
        let prim = d_new
            == tensor(&Expr::coord(x), &Expr::one()).add(&tensor(&Expr::one(), &Expr::coord(x)));
        deltas.push(d_new);
        primitive.push(prim);
    }
    Ok((
        new_q,
        CoproductMap {
            deltas,
            coords: coords.to_vec(),
            primitive,
        },
    ))
}

/// Substitute parameters throughout a rank-2 tensor.
pub fn tensor_subst_params(t: &Tensor2, map: &dyn Fn(ParamId) -> Scalar) -> Result<Tensor2> {
    let mut out = Tensor2::zero();
    for (k, c) in &t.terms {
        let leg = |tk: &crate::expr::TermKey| -> Result<crate::expr::TermKey> {
            let mut exp = crate::expr::LinForm::zero();
            for (&x, s) in &tk.exp.0 {
                let ns = s.subst_params(map).ok_or_else(|| {
                    Error::InvalidInput("parameter substitution hit a pole".into())
                })?;
                exp = exp.add(&crate::expr::LinForm::term(x, ns));
            }
            Ok(crate::expr::TermKey {
                mono: tk.mono.clone(),
                exp,
            })
        };
        let nc = c
            .subst_params(map)
            .ok_or_else(|| Error::InvalidInput("parameter substitution hit a pole".into()))?;
        out.insert_term(
            crate::tensor::TensorKey2 {
                l1: leg(&k.l1)?,
                l2: leg(&k.l2)?,
            },
            nc,
        );
    }
    Ok(out)
}

/// Per coordinate: does flip(Delta(X)) with the listed parameters negated
/// equal Delta(X)?
pub fn check_flip_symmetry(
    map: &CoproductMap,
    negate: &[ParamId],
) -> Result<Vec<(CoordId, bool)>> {
    let subst = |p: ParamId| {
        if negate.contains(&p) {
            Scalar::param(p).neg()
        } else {
            Scalar::param(p)
        }
    };
    let mut out = Vec::new();
    for (i, &x) in map.coords.iter().enumerate() {
        let flipped = tensor_subst_params(&map.deltas[i].flip(), &subst)?;
        out.push((x, flipped == map.deltas[i]));
    }
    Ok(out)
}

/// Specialize parameters in every coproduct (e.g. eta -> 0).
pub fn specialize_map(map: &CoproductMap, subst: &dyn Fn(ParamId) -> Scalar) -> Result<CoproductMap> {
    let mut deltas = Vec::with_capacity(map.deltas.len());
    for d in &map.deltas {
        deltas.push(tensor_subst_params(d, subst)?);
    }
    Ok(CoproductMap {
        deltas,
        coords: map.coords.clone(),
        primitive: map.primitive.clone(),
    })
}

/// The ordering-ambiguity certificate: no term of any bracket may contain a
/// product of two coordinate functions whose mutual bracket is nonzero.
/// Coordinates inside exponentials count as factors of the term.
pub fn ambiguity_certificate(
    q: &BracketTable,
    coords: &[CoordId],
) -> std::result::Result<(), (usize, usize, Vec<(CoordId, CoordId)>)> {
    let d = q.dim;
    let coord_index: HashMap<CoordId, usize> =
        coords.iter().enumerate().map(|(n, &c)| (c, n)).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            for key in q.q[i][j].terms.keys() {
                let mut present: Vec<CoordId> = key.mono.0.keys().copied().collect();
                for x in key.exp.coords() {
                    if !present.contains(&x) {
                        present.push(x);
                    }
                }
                let mut bad = Vec::new();
                for (a_pos, &a) in present.iter().enumerate() {
                    for &b in present.iter().skip(a_pos + 1) {
                        let (ia, ib) = (coord_index[&a], coord_index[&b]);
                        if !q.q[ia][ib].is_zero() {
                            bad.push((a, b));
                        }
                    }
                }
                if !bad.is_empty() {
                    return Err((i, j, bad));
                }
            }
        }
    }
    Ok(())
}

/// Same certificate applied to the legs of every coproduct term.
pub fn leg_ambiguity_certificate(
    map: &CoproductMap,
    q: &BracketTable,
    coords: &[CoordId],
) -> std::result::Result<(), (CoordId, Vec<(CoordId, CoordId)>)> {
    let coord_index: HashMap<CoordId, usize> =
        coords.iter().enumerate().map(|(n, &c)| (c, n)).collect();
    for (i, &x) in map.coords.iter().enumerate() {
        for key in map.deltas[i].terms.keys() {
            for leg in [&key.l1, &key.l2] {
                let mut present: Vec<CoordId> = leg.mono.0.keys().copied().collect();
                for c in leg.exp.coords() {
                    if !present.contains(&c) {
                        present.push(c);
                    }
                }
                let mut bad = Vec::new();
                for (a_pos, &a) in present.iter().enumerate() {
                    for &b in present.iter().skip(a_pos + 1) {
                        let (ia, ib) = (coord_index[&a], coord_index[&b]);
                        if !q.q[ia][ib].is_zero() {
                            bad.push((a, b));
                        }
                    }
                }
                if !bad.is_empty() {
                    return Err((x, bad));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Context;
    use crate::expr::LinForm;

    fn ctx() -> Context {
        Context::new(&["z"], &["Jp", "Jm", "J3"]).unwrap()
    }

    fn z() -> Scalar {
        Scalar::param(ParamId(0))
    }

    fn book_primed_change() -> CoordinateChange {
        // Jp' = e^{z/2 J3} Jp, Jm' = e^{z/2 J3} Jm
        let half_z = z().mul(&Scalar::from_frac(1, 2));
        let e_pos = Expr::exp(LinForm::term(CoordId(2), half_z.clone()));
        let e_neg = Expr::exp(LinForm::term(CoordId(2), half_z.neg()));
        let mut forward = HashMap::new();
        forward.insert(CoordId(0), e_pos.mul(&Expr::coord(CoordId(0))));
        forward.insert(CoordId(1), e_pos.mul(&Expr::coord(CoordId(1))));
        let mut inverse = HashMap::new();
        inverse.insert(CoordId(0), e_neg.mul(&Expr::coord(CoordId(0))));
        inverse.insert(CoordId(1), e_neg.mul(&Expr::coord(CoordId(1))));
        CoordinateChange { forward, inverse }
    }

    #[test]
    fn roundtrip_validation() {
        let _ = ctx();
        let coords = [CoordId(0), CoordId(1), CoordId(2)];
        let change = book_primed_change();
        change.validate(&coords).unwrap();
        let mut broken = change.clone();
        broken
            .inverse
            .insert(CoordId(0), Expr::coord(CoordId(0)));
        assert!(broken.validate(&coords).is_err());
    }

    #[test]
    fn certificate_flags_noncommuting_products() {
        let _ = ctx();
        let coords = [CoordId(0), CoordId(1), CoordId(2)];
        // book bracket: {Jp, Jm} contains Jp*Jm whose factors do not commute
        // with each other? {Jp, Jm} != 0 so the pair (Jp, Jm) in a term fails.
        let mut q = BracketTable::zero(3);
        let two_z = z().mul(&Scalar::from_int(2));
        let e = Expr::exp(LinForm::term(CoordId(2), two_z.neg()));
        q.set(
            0,
            1,
            Expr::one()
                .sub(&e)
                .scalar_mul(&two_z.inv())
                .add(
                    &Expr::coord(CoordId(0))
                        .mul(&Expr::coord(CoordId(1)))
                        .scalar_mul(&two_z),
                ),
        );
        q.set(0, 2, Expr::coord(CoordId(0)).scalar_mul(&Scalar::from_int(-2)));
        q.set(1, 2, Expr::coord(CoordId(1)).scalar_mul(&Scalar::from_int(2)));
        let err = ambiguity_certificate(&q, &coords).unwrap_err();
        assert_eq!(err.0, 0);
        assert_eq!(err.1, 1);
        // primed bracket sinh(zJ3)/z has only J3 exponentials: certificate holds
        let mut qp = BracketTable::zero(3);
        let l = LinForm::term(CoordId(2), z());
        let sinh = Expr::exp(l.clone())
            .sub(&Expr::exp(l.neg()))
            .scalar_mul(&Scalar::from_frac(1, 2));
        qp.set(0, 1, sinh.scalar_mul(&z().inv()));
        qp.set(0, 2, Expr::coord(CoordId(0)).scalar_mul(&Scalar::from_int(-2)));
        qp.set(1, 2, Expr::coord(CoordId(1)).scalar_mul(&Scalar::from_int(2)));
        assert!(ambiguity_certificate(&qp, &coords).is_ok());
    }
}
