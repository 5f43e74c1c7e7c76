//! Coordinate-extraction recipes and derivation of the coproduct from the
//! tensorized group law Delta(E_ij) = sum_l E_il (x) E_lj.
//!
//! A recipe is an expression tree over entry symbols that evaluates on the
//! group element to exactly one coordinate. Recipes are data: found by a
//! staged search (units and logs first, then affine extraction with unit
//! determinants) or supplied by the deck, and always verified.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::context::CoordId;
use crate::error::{Error, Result};
use crate::expr::{Expr, LinForm, TermKey};
use crate::grouprep::GroupElement;
use crate::linalg::{mat_inverse, solve_dense, MatExpr};
use crate::scalar::Scalar;
use crate::tensor::{apply_leftmost, apply_rightmost, tensor, Tensor2, TensorKey2};

/// Recipe body: an expression tree over entry symbols. `Coord` refers to a
/// previously recovered coordinate and `Exp` to an exponential of such
/// coordinates; both are resolved through the evaluation context.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Entry(usize, usize),
    Const(Scalar),
    Coord(CoordId),
    Add(Box<Body>, Box<Body>),
    Sub(Box<Body>, Box<Body>),
    Mul(Box<Body>, Box<Body>),
    Div(Box<Body>, Box<Body>),
    Neg(Box<Body>),
    Log(Box<Body>),
    Pow(Box<Body>, BigRational),
    Exp(LinForm),
}

#[derive(Debug, Clone)]
pub struct Recipe {
    pub target: CoordId,
    pub body: Body,
}

fn rational_scalar(r: &BigRational) -> Scalar {
    Scalar::from_gauss(crate::scalar::GaussRat::from_rational(r.clone()))
}

/// Evaluate a body on expression entries. `resolved` supplies values for
/// `Coord`/`Exp` nodes (previously recovered coordinates), in recipe order.
pub fn eval_body_expr(
    body: &Body,
    entry: &dyn Fn(usize, usize) -> Result<Expr>,
    resolved: &HashMap<CoordId, Expr>,
) -> Result<Expr> {
    match body {
        Body::Entry(i, j) => entry(*i, *j),
        Body::Const(s) => Ok(Expr::from_scalar(s.clone())),
        Body::Coord(x) => resolved
            .get(x)
            .cloned()
            .ok_or_else(|| Error::DomainError("recipe references an unresolved coordinate".into())),
        Body::Add(a, b) => Ok(eval_body_expr(a, entry, resolved)?
            .add(&eval_body_expr(b, entry, resolved)?)),
        Body::Sub(a, b) => Ok(eval_body_expr(a, entry, resolved)?
            .sub(&eval_body_expr(b, entry, resolved)?)),
        Body::Mul(a, b) => Ok(eval_body_expr(a, entry, resolved)?
            .mul(&eval_body_expr(b, entry, resolved)?)),
        Body::Div(a, b) => eval_body_expr(a, entry, resolved)?
            .div_unit(&eval_body_expr(b, entry, resolved)?),
        Body::Neg(a) => Ok(eval_body_expr(a, entry, resolved)?.neg()),
        Body::Log(a) => {
            let v = eval_body_expr(a, entry, resolved)?;
            let (s, l) = v
                .as_unit()
                .ok_or_else(|| Error::DomainError("log of a non-unit".into()))?;
            if !s.is_one() {
                return Err(Error::DomainError("log of a scaled exponential".into()));
            }
            let mut out = Expr::zero();
            for (&x, c) in &l.0 {
                out = out.add(&Expr::coord(x).scalar_mul(c));
            }
            Ok(out)
        }
        Body::Pow(a, r) => {
            let v = eval_body_expr(a, entry, resolved)?;
            expr_pow_rational(&v, r)
        }
        Body::Exp(l) => {
            let mut arg = Expr::zero();
            for (&x, c) in &l.0 {
                let img = resolved.get(&x).cloned().ok_or_else(|| {
                    Error::DomainError("exp references an unresolved coordinate".into())
                })?;
                arg = arg.add(&img.scalar_mul(c));
            }
            Expr::exp_of_affine(&arg)
        }
    }
}

fn expr_pow_rational(v: &Expr, r: &BigRational) -> Result<Expr> {
    if r.is_integer() {
        let p = r
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::DomainError("power too large".into()))?;
        if p >= 0 {
            return Ok(v.pow(p as u32));
        }
        let inv = v
            .unit_inv()
            .ok_or_else(|| Error::DomainError("negative power of a non-unit".into()))?;
        return Ok(inv.pow((-p) as u32));
    }
    let (s, l) = v
        .as_unit()
        .ok_or_else(|| Error::DomainError("rational power of a non-unit".into()))?;
    let q = r
        .denom()
        .to_u32()
        .ok_or_else(|| Error::DomainError("power denominator too large".into()))?;
    let p = r
        .numer()
        .to_i64()
        .ok_or_else(|| Error::DomainError("power numerator too large".into()))?;
    let root = s
        .try_root(q)
        .ok_or_else(|| Error::DomainError("scalar has no exact root".into()))?;
    Ok(Expr {
        terms: BTreeMap::from([(
            TermKey {
                mono: Default::default(),
                exp: l.scale(&rational_scalar(r)),
            },
            root.pow(p),
        )]),
    })
}

/// Evaluate a body in the rank-2 tensor algebra, with entries mapping to the
/// tensorized group law and recovered coordinates to their coproducts.
pub fn eval_body_tensor(
    body: &Body,
    entry_delta: &dyn Fn(usize, usize) -> Result<Tensor2>,
    resolved: &HashMap<CoordId, Tensor2>,
    primitive: &dyn Fn(CoordId) -> bool,
) -> Result<Tensor2> {
    match body {
        Body::Entry(i, j) => entry_delta(*i, *j),
        Body::Const(s) => Ok(Tensor2::one().scalar_mul(s)),
        Body::Coord(x) => resolved
            .get(x)
            .cloned()
            .ok_or_else(|| Error::DomainError("recipe references an unresolved coordinate".into())),
        Body::Add(a, b) => Ok(eval_body_tensor(a, entry_delta, resolved, primitive)?
            .add(&eval_body_tensor(b, entry_delta, resolved, primitive)?)),
        Body::Sub(a, b) => Ok(eval_body_tensor(a, entry_delta, resolved, primitive)?
            .sub(&eval_body_tensor(b, entry_delta, resolved, primitive)?)),
        Body::Mul(a, b) => Ok(eval_body_tensor(a, entry_delta, resolved, primitive)?
            .mul(&eval_body_tensor(b, entry_delta, resolved, primitive)?)),
        Body::Div(a, b) => eval_body_tensor(a, entry_delta, resolved, primitive)?
            .div_unit(&eval_body_tensor(b, entry_delta, resolved, primitive)?),
        Body::Neg(a) => Ok(eval_body_tensor(a, entry_delta, resolved, primitive)?.neg()),
        Body::Log(a) => {
            let v = eval_body_tensor(a, entry_delta, resolved, primitive)?;
            let (s, l, m) = v.as_unit().ok_or(Error::NonGroupLikeLog)?;
            if !s.is_one() {
                return Err(Error::NonGroupLikeLog);
            }
            // log(e^L (x) e^M) = L (x) 1 + 1 (x) M
            let mut out = Tensor2::zero();
            for (&x, c) in &l.0 {
                out = out.add(&tensor(&Expr::coord(x), &Expr::one()).scalar_mul(c));
            }
            for (&x, c) in &m.0 {
                out = out.add(&tensor(&Expr::one(), &Expr::coord(x)).scalar_mul(c));
            }
            Ok(out)
        }
        Body::Pow(a, r) => {
            let v = eval_body_tensor(a, entry_delta, resolved, primitive)?;
            tensor_pow_rational(&v, r)
        }
        Body::Exp(l) => {
            for x in l.coords() {
                if !primitive(x) {
                    return Err(Error::NonGroupLikeExponent);
                }
            }
            let e = Expr::exp(l.clone());
            Ok(tensor(&e, &e))
        }
    }
}

fn tensor_pow_rational(v: &Tensor2, r: &BigRational) -> Result<Tensor2> {
    if r.is_integer() {
        let p = r
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::DomainError("power too large".into()))?;
        if p >= 0 {
            return Ok(v.pow(p as u32));
        }
        let inv = v
            .unit_inv()
            .ok_or_else(|| Error::DomainError("negative power of a non-unit".into()))?;
        return Ok(inv.pow((-p) as u32));
    }
    let (s, l, m) = v
        .as_unit()
        .ok_or_else(|| Error::DomainError("rational power of a non-unit".into()))?;
    let q = r
        .denom()
        .to_u32()
        .ok_or_else(|| Error::DomainError("power denominator too large".into()))?;
    let p = r
        .numer()
        .to_i64()
        .ok_or_else(|| Error::DomainError("power numerator too large".into()))?;
    let root = s
        .try_root(q)
        .ok_or_else(|| Error::DomainError("scalar has no exact root".into()))?;
    let rs = rational_scalar(r);
    let mut out = Tensor2::zero();
    out.insert_term(
        TensorKey2 {
            l1: TermKey {
                mono: Default::default(),
                exp: l.scale(&rs),
            },
            l2: TermKey {
                mono: Default::default(),
                exp: m.scale(&rs),
            },
        },
        root.pow(p),
    );
    Ok(out)
}

/// The derived coproduct on every coordinate, with primitivity flags.
#[derive(Debug, Clone)]
pub struct CoproductMap {
    /// coordinate index (deck order) -> Delta(X_i)
    pub deltas: Vec<Tensor2>,
    pub coords: Vec<CoordId>,
    pub primitive: Vec<bool>,
}

impl CoproductMap {
    pub fn delta(&self, x: CoordId) -> &Tensor2 {
        let idx = self
            .coords
            .iter()
            .position(|&c| c == x)
            .expect("coordinate not in coproduct map");
        &self.deltas[idx]
    }

    pub fn is_primitive(&self, x: CoordId) -> bool {
        let idx = self
            .coords
            .iter()
            .position(|&c| c == x)
            .expect("coordinate not in coproduct map");
        self.primitive[idx]
    }

    /// Extend Delta as an algebra morphism to an arbitrary expression.
    /// Exponent coordinates must be primitive (group-like exponentials).
    pub fn delta_of_expr(&self, e: &Expr) -> Result<Tensor2> {
        let mut out = Tensor2::zero();
        for (k, c) in &e.terms {
            let mut t = Tensor2::one().scalar_mul(c);
            for (&x, &deg) in &k.mono.0 {
                t = t.mul(&self.delta(x).pow(deg));
            }
            if !k.exp.is_zero() {
                for x in k.exp.coords() {
                    if !self.is_primitive(x) {
                        return Err(Error::NonGroupLikeExponent);
                    }
                }
                let ex = Expr::exp(k.exp.clone());
                t = t.mul(&tensor(&ex, &ex));
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Counit axiom: killing the second leg of Delta(X) leaves X (x) 1.
    pub fn check_counit(&self) -> Vec<CoordId> {
        let mut failures = Vec::new();
        for (idx, &x) in self.coords.iter().enumerate() {
            let left = self.deltas[idx].leg_at_zero(2);
            let expected = tensor(&Expr::coord(x), &Expr::one());
            if left != expected {
                failures.push(x);
            }
        }
        failures
    }

    /// Exact coassociativity of every coordinate coproduct.
    pub fn check_coassociativity(&self) -> Result<Vec<CoordId>> {
        let delta = |e: &Expr| self.delta_of_expr(e);
        let mut failures = Vec::new();
        for (idx, &x) in self.coords.iter().enumerate() {
            let l = apply_leftmost(&delta, &self.deltas[idx])?;
            let r = apply_rightmost(&delta, &self.deltas[idx])?;
            if l != r {
                failures.push(x);
            }
        }
        Ok(failures)
    }

    /// Group a coproduct into (left cofactor, right single-term leg) pairs
    /// by the distinct canonical right legs.
    pub fn leg_factors(t: &Tensor2) -> Vec<(Expr, Expr)> {
        let mut groups: BTreeMap<TermKey, Expr> = BTreeMap::new();
        for (k, c) in &t.terms {
            groups
                .entry(k.l2.clone())
                .or_default()
                .insert_term(k.l1.clone(), c.clone());
        }
        groups
            .into_iter()
            .map(|(l2, cof)| {
                let right = Expr {
                    terms: BTreeMap::from([(l2, Scalar::one())]),
                };
                (cof, right)
            })
            .collect()
    }
}

/// Delta on the matrix entries: the tensorized group law.
pub fn entry_deltas(g: &GroupElement) -> Vec<Vec<Tensor2>> {
    let n = g.dim;
    let mut out = vec![vec![Tensor2::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut t = Tensor2::zero();
            for l in 0..n {
                if g.entries[i][l].is_zero() || g.entries[l][j].is_zero() {
                    continue;
                }
                t = t.add(&tensor(&g.entries[i][l], &g.entries[l][j]));
            }
            out[i][j] = t;
        }
    }
    out
}

/// Evaluate a verified recipe set on arbitrary entries, in order.
pub fn resolve_recipes_on(
    recipes: &[Recipe],
    entries: &MatExpr,
) -> Result<HashMap<CoordId, Expr>> {
    let mut resolved: HashMap<CoordId, Expr> = HashMap::new();
    for r in recipes {
        let entry = |i: usize, j: usize| -> Result<Expr> {
            entries
                .get(i)
                .and_then(|row| row.get(j))
                .cloned()
                .ok_or_else(|| Error::DomainError("entry index out of range".into()))
        };
        let v = eval_body_expr(&r.body, &entry, &resolved)?;
        resolved.insert(r.target, v);
    }
    Ok(resolved)
}

/// True iff the body evaluated on the group element equals the target.
pub fn verify_recipe(r: &Recipe, g: &GroupElement) -> Result<bool> {
    // resolve by substituting the coordinates themselves for earlier targets:
    // sound because verification proceeds in recovery order.
    let mut resolved = HashMap::new();
    for x in body_coord_refs(&r.body) {
        resolved.insert(x, Expr::coord(x));
    }
    let entry = |i: usize, j: usize| -> Result<Expr> {
        g.entries
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .ok_or_else(|| Error::DomainError("entry index out of range".into()))
    };
    let v = eval_body_expr(&r.body, &entry, &resolved)?;
    Ok(v == Expr::coord(r.target))
}

fn body_coord_refs(b: &Body) -> Vec<CoordId> {
    let mut out = Vec::new();
    fn walk(b: &Body, out: &mut Vec<CoordId>) {
        match b {
            Body::Coord(x) => {
                if !out.contains(x) {
                    out.push(*x);
                }
            }
            Body::Exp(l) => {
                for x in l.coords() {
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
            Body::Add(a, b) | Body::Sub(a, b) | Body::Mul(a, b) | Body::Div(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Body::Neg(a) | Body::Log(a) | Body::Pow(a, _) => walk(a, out),
            Body::Entry(..) | Body::Const(..) => {}
        }
    }
    walk(b, &mut out);
    out
}

/// Embed an expression over recovered coordinates as a recipe subtree.
fn embed_expr(e: &Expr) -> Body {
    let mut acc: Option<Body> = None;
    for (k, c) in &e.terms {
        let mut t = Body::Const(c.clone());
        for (&x, &deg) in &k.mono.0 {
            let factor = if deg == 1 {
                Body::Coord(x)
            } else {
                Body::Pow(
                    Box::new(Body::Coord(x)),
                    BigRational::from_integer(BigInt::from(deg)),
                )
            };
            t = Body::Mul(Box::new(t), Box::new(factor));
        }
        if !k.exp.is_zero() {
            t = Body::Mul(Box::new(t), Box::new(Body::Exp(k.exp.clone())));
        }
        acc = Some(match acc {
            None => t,
            Some(prev) => Body::Add(Box::new(prev), Box::new(t)),
        });
    }
    acc.unwrap_or(Body::Const(Scalar::zero()))
}

struct UnitCandidate {
    lin: LinForm,
    scale: Scalar,
    body: Body,
}

/// Staged search for one verified recipe per coordinate.
pub fn find_recipes(g: &GroupElement, coords: &[CoordId]) -> Result<Vec<Recipe>> {
    let n = g.dim;
    // distinct nonzero, non-constant entries in row-major order
    let mut entries: Vec<(usize, usize, Expr)> = Vec::new();
    let mut seen: Vec<Expr> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let e = &g.entries[i][j];
            if e.is_zero() || e.as_scalar().is_some() {
                continue;
            }
            if seen.contains(e) {
                continue;
            }
            seen.push(e.clone());
            entries.push((i, j, e.clone()));
        }
    }

    let mut recovered: Vec<CoordId> = Vec::new();
    let mut recipes: Vec<Recipe> = Vec::new();

    let push_recipe = |recipes: &mut Vec<Recipe>,
                       recovered: &mut Vec<CoordId>,
                       target: CoordId,
                       body: Body|
     -> Result<()> {
        let r = Recipe { target, body };
        if !verify_recipe(&r, g)? {
            return Err(Error::RecipeSearchFailed(format!(
                "candidate recipe for coordinate {} failed verification",
                target.0
            )));
        }
        recovered.push(target);
        recipes.push(r);
        Ok(())
    };

    loop {
        let unrecovered: Vec<CoordId> = coords
            .iter()
            .copied()
            .filter(|x| !recovered.contains(x))
            .collect();
        if unrecovered.is_empty() {
            break;
        }
        let mut progress = false;

        // stage 1: single-term units from entries and +-/i-combinations;
        // coordinates linear in the unit exponent lattice come out by logs.
        let mut units: Vec<UnitCandidate> = Vec::new();
        let add_unit = |value: &Expr, body: Body, units: &mut Vec<UnitCandidate>| {
            if let Some((s, l)) = value.as_unit() {
                if !l.is_zero() && !units.iter().any(|u| u.lin == l) {
                    units.push(UnitCandidate {
                        lin: l,
                        scale: s,
                        body,
                    });
                }
            }
        };
        for (i, j, e) in &entries {
            add_unit(e, Body::Entry(*i, *j), &mut units);
        }
        for (ai, aj, a) in &entries {
            for (bi, bj, b) in &entries {
                if (ai, aj) >= (bi, bj) {
                    continue;
                }
                let ea = Body::Entry(*ai, *aj);
                let eb = Body::Entry(*bi, *bj);
                let ib = Body::Mul(Box::new(Body::Const(Scalar::i())), Box::new(eb.clone()));
                add_unit(
                    &a.add(b),
                    Body::Add(Box::new(ea.clone()), Box::new(eb.clone())),
                    &mut units,
                );
                add_unit(
                    &a.sub(b),
                    Body::Sub(Box::new(ea.clone()), Box::new(eb.clone())),
                    &mut units,
                );
                let bi_val = b.scalar_mul(&Scalar::i());
                add_unit(
                    &a.add(&bi_val),
                    Body::Add(Box::new(ea.clone()), Box::new(ib.clone())),
                    &mut units,
                );
                add_unit(
                    &a.sub(&bi_val),
                    Body::Sub(Box::new(ea), Box::new(ib)),
                    &mut units,
                );
            }
        }
        if !units.is_empty() {
            // solve sum_b alpha_b L_b = x for each unrecovered coordinate
            let rows: Vec<Vec<Scalar>> = coords
                .iter()
                .map(|&c| units.iter().map(|u| u.lin.coeff(c)).collect())
                .collect();
            for &x in &unrecovered {
                let rhs: Vec<Scalar> = coords
                    .iter()
                    .map(|&c| {
                        if c == x {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect();
                if let Some((alpha, _)) = solve_dense(&rows, &rhs) {
                    let mut body: Option<Body> = None;
                    for (u, a) in units.iter().zip(alpha.iter()) {
                        if a.is_zero() {
                            continue;
                        }
                        let arg = if u.scale.is_one() {
                            u.body.clone()
                        } else {
                            Body::Mul(
                                Box::new(Body::Const(u.scale.inv())),
                                Box::new(u.body.clone()),
                            )
                        };
                        let t = Body::Mul(
                            Box::new(Body::Const(a.clone())),
                            Box::new(Body::Log(Box::new(arg))),
                        );
                        body = Some(match body {
                            None => t,
                            Some(prev) => Body::Add(Box::new(prev), Box::new(t)),
                        });
                    }
                    if let Some(b) = body {
                        push_recipe(&mut recipes, &mut recovered, x, b)?;
                        progress = true;
                    }
                }
            }
        }
        if progress {
            continue;
        }

        // stage 2: affine extraction. Decompose usable entries as
        //   E = sum_m kappa_m X_m + kappa_0
        // over the recovered subalgebra and solve for 1 or 2 unknowns.
        struct AffineEntry {
            i: usize,
            j: usize,
            support: Vec<CoordId>,
            coeffs: HashMap<CoordId, Expr>,
            constant: Expr,
        }
        let mut affine: Vec<AffineEntry> = Vec::new();
        'entry: for (i, j, e) in &entries {
            let mut coeffs: HashMap<CoordId, Expr> = HashMap::new();
            let mut constant = Expr::zero();
            for (k, c) in &e.terms {
                if k.exp.coords().any(|x| !recovered.contains(&x)) {
                    continue 'entry;
                }
                let unknowns: Vec<(CoordId, u32)> = k
                    .mono
                    .0
                    .iter()
                    .filter(|(x, _)| !recovered.contains(x))
                    .map(|(&x, &d)| (x, d))
                    .collect();
                match unknowns.as_slice() {
                    [] => {
                        constant.insert_term(k.clone(), c.clone());
                    }
                    [(x, 1)] => {
                        let mut rest = k.clone();
                        rest.mono.0.remove(x);
                        coeffs
                            .entry(*x)
                            .or_insert_with(Expr::zero)
                            .insert_term(rest, c.clone());
                    }
                    _ => continue 'entry,
                }
            }
            let mut support: Vec<CoordId> = coeffs.keys().copied().collect();
            support.sort();
            if support.is_empty() {
                continue;
            }
            affine.push(AffineEntry {
                i: *i,
                j: *j,
                support,
                coeffs,
                constant,
            });
        }
        // single unknown with a unit coefficient
        for a in &affine {
            if a.support.len() != 1 {
                continue;
            }
            let x = a.support[0];
            if recovered.contains(&x) {
                continue;
            }
            let kappa = &a.coeffs[&x];
            if kappa.as_unit().is_none() {
                continue;
            }
            let mut body = Body::Entry(a.i, a.j);
            if !a.constant.is_zero() {
                body = Body::Sub(Box::new(body), Box::new(embed_expr(&a.constant)));
            }
            if !kappa.is_one() {
                body = Body::Div(Box::new(body), Box::new(embed_expr(kappa)));
            }
            push_recipe(&mut recipes, &mut recovered, x, body)?;
            progress = true;
        }
        if progress {
            continue;
        }
        // two unknowns: pairs of entries with the same support, unit determinant
        'pair_search: for a in &affine {
            if a.support.len() != 2 {
                continue;
            }
            let (x, y) = (a.support[0], a.support[1]);
            if recovered.contains(&x) || recovered.contains(&y) {
                continue;
            }
            for b in &affine {
                if (b.i, b.j) == (a.i, a.j) || b.support != a.support {
                    continue;
                }
                let (a11, a12) = (&a.coeffs[&x], &a.coeffs[&y]);
                let (a21, a22) = (&b.coeffs[&x], &b.coeffs[&y]);
                let det = a11.mul(a22).sub(&a12.mul(a21));
                if det.as_unit().is_none() || det.is_zero() {
                    continue;
                }
                let e1 = Body::Sub(
                    Box::new(Body::Entry(a.i, a.j)),
                    Box::new(embed_expr(&a.constant)),
                );
                let e2 = Body::Sub(
                    Box::new(Body::Entry(b.i, b.j)),
                    Box::new(embed_expr(&b.constant)),
                );
                let det_b = embed_expr(&det);
                // x = (a22 e1 - a12 e2)/det ; y = (a11 e2 - a21 e1)/det
                let xb = Body::Div(
                    Box::new(Body::Sub(
                        Box::new(Body::Mul(Box::new(embed_expr(a22)), Box::new(e1.clone()))),
                        Box::new(Body::Mul(Box::new(embed_expr(a12)), Box::new(e2.clone()))),
                    )),
                    Box::new(det_b.clone()),
                );
                let yb = Body::Div(
                    Box::new(Body::Sub(
                        Box::new(Body::Mul(Box::new(embed_expr(a11)), Box::new(e2))),
                        Box::new(Body::Mul(Box::new(embed_expr(a21)), Box::new(e1))),
                    )),
                    Box::new(det_b),
                );
                push_recipe(&mut recipes, &mut recovered, x, xb)?;
                push_recipe(&mut recipes, &mut recovered, y, yb)?;
                progress = true;
                break 'pair_search;
            }
        }
        if !progress {
            return Err(Error::RecipeSearchFailed(format!(
                "{} coordinates remain unrecovered",
                unrecovered.len()
            )));
        }
    }
    Ok(recipes)
}

/// Derive the full coproduct map from a verified recipe set.
pub fn derive_coproduct(
    g: &GroupElement,
    recipes: &[Recipe],
    coords: &[CoordId],
) -> Result<CoproductMap> {
    let deltas_e = entry_deltas(g);
    let entry_delta = |i: usize, j: usize| -> Result<Tensor2> {
        deltas_e
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .ok_or_else(|| Error::DomainError("entry index out of range".into()))
    };
    let mut resolved: HashMap<CoordId, Tensor2> = HashMap::new();
    let mut prim_flags: HashMap<CoordId, bool> = HashMap::new();
    for r in recipes {
        let primitive = |x: CoordId| prim_flags.get(&x).copied().unwrap_or(false);
        let d = eval_body_tensor(&r.body, &entry_delta, &resolved, &primitive)?;
        let prim = d
            == tensor(&Expr::coord(r.target), &Expr::one())
                .add(&tensor(&Expr::one(), &Expr::coord(r.target)));
        resolved.insert(r.target, d);
        prim_flags.insert(r.target, prim);
    }
    let mut deltas = Vec::with_capacity(coords.len());
    let mut primitive = Vec::with_capacity(coords.len());
    for &x in coords {
        let d = resolved
            .remove(&x)
            .ok_or_else(|| Error::RecipeSearchFailed(format!("no recipe for coordinate {}", x.0)))?;
        primitive.push(prim_flags[&x]);
        deltas.push(d);
    }
    Ok(CoproductMap {
        deltas,
        coords: coords.to_vec(),
        primitive,
    })
}

/// Counit values (all zero on coordinates) and the antipode map, from the
/// matrix inverse of the group element; verified against the Hopf axiom.
pub fn derive_counit_antipode(
    g: &GroupElement,
    recipes: &[Recipe],
    map: &CoproductMap,
) -> Result<(Vec<Scalar>, Vec<Expr>)> {
    let inv = mat_inverse(&g.entries)?;
    let resolved = resolve_recipes_on(recipes, &inv)?;
    let mut antipode = Vec::with_capacity(map.coords.len());
    for &x in &map.coords {
        let s = resolved
            .get(&x)
            .cloned()
            .ok_or_else(|| Error::RecipeSearchFailed(format!("no recipe for coordinate {}", x.0)))?;
        antipode.push(s);
    }
    // verify m . (S (x) id) . Delta = eta . eps on every coordinate
    let mut smap: HashMap<CoordId, Expr> = HashMap::new();
    for (idx, &x) in map.coords.iter().enumerate() {
        smap.insert(x, antipode[idx].clone());
    }
    for (idx, &x) in map.coords.iter().enumerate() {
        let d = &map.deltas[idx];
        let applied = d.map_leg_exprs(&|e: &Expr| e.substitute(&smap), 1)?;
        let folded = applied.multiply_legs();
        if !folded.is_zero() {
            return Err(Error::DomainError(format!(
                "antipode verification failed for coordinate {}",
                x.0
            )));
        }
    }
    let counit = vec![Scalar::zero(); map.coords.len()];
    Ok((counit, antipode))
}
