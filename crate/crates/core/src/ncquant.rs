//! Order-truncated noncommutative verification of the quantization step:
//! brackets become commutators, coordinates become noncommuting symbols in a
//! fixed generator order, and the Hopf axioms are checked to a chosen total
//! degree in the deformation parameters.

use std::collections::BTreeMap;

use crate::context::CoordId;
use crate::coproduct::CoproductMap;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::plsolver::BracketTable;
use crate::scalar::{GaussRat, PMono, Scalar};
use crate::series::series_in_params;
use crate::transform::{ambiguity_certificate, leg_ambiguity_certificate};

/// A word in the generator alphabet; normal form is ascending indices.
pub type Word = Vec<u16>;

fn is_normal(w: &Word) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

/// Truncated noncommutative series: (parameter monomial, word) -> coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    pub terms: BTreeMap<(PMono, Word), GaussRat>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        let mut t = BTreeMap::new();
        t.insert((PMono::one(), Vec::new()), GaussRat::one());
        NCPoly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, pm: PMono, w: Word, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((pm, w)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((pm, w), c) in &other.terms {
            out.insert(pm.clone(), w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(pm, _)| pm.total_degree()).min()
    }
}

/// Convert an exponential-free expression (series output) into normal-ordered
/// noncommutative form. `commutes` reports whether two distinct coordinates
/// have vanishing bracket; terms with noncommuting factors either error or
/// expand as fully symmetrized words.
fn nc_from_expr(
    e: &Expr,
    coords: &[CoordId],
    commutes: &dyn Fn(usize, usize) -> bool,
    symmetrize: bool,
) -> Result<NCPoly> {
    let index_of = |x: CoordId| -> usize {
        coords
            .iter()
            .position(|&c| c == x)
            .expect("expression uses a coordinate outside the generator list")
    };
    let mut out = NCPoly::zero();
    for (key, c) in &e.terms {
        assert!(key.exp.is_zero(), "series output must be exponential-free");
        let mut letters: Vec<u16> = Vec::new();
        for (&x, &deg) in &key.mono.0 {
            for _ in 0..deg {
                letters.push(index_of(x) as u16);
            }
        }
        letters.sort();
        let mut ambiguous = false;
        for a in 0..letters.len() {
            for b in (a + 1)..letters.len() {
                if letters[a] != letters[b] && !commutes(letters[a] as usize, letters[b] as usize)
                {
                    ambiguous = true;
                }
            }
        }
        let words: Vec<(Word, GaussRat)> = if !ambiguous {
            vec![(letters.clone(), GaussRat::one())]
        } else if symmetrize {
            let perms = multiset_permutations(&letters);
            let n = perms.len() as i64;
            let w = GaussRat::from_frac(1, n);
            perms.into_iter().map(|p| (p, w.clone())).collect()
        } else {
            return Err(Error::AmbiguousOrdering(
                format!("term with factors {letters:?}"),
                "coordinates do not pairwise commute".into(),
            ));
        };
        assert!(c.is_polynomial(), "series output has polynomial scalars");
        for (pm, g) in &c.num().terms {
            for (w, weight) in &words {
                out.insert(pm.clone(), w.clone(), g.mul(weight));
            }
        }
    }
    Ok(out)
}

fn multiset_permutations(letters: &[u16]) -> Vec<Word> {
    let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
    for &l in letters {
        *counts.entry(l).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(letters.len());
    fn rec(
        counts: &mut BTreeMap<u16, usize>,
        cur: &mut Word,
        len: usize,
        out: &mut Vec<Word>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let keys: Vec<u16> = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, _)| k)
            .collect();
        for k in keys {
            *counts.get_mut(&k).unwrap() -= 1;
            cur.push(k);
            rec(counts, cur, len, out);
            cur.pop();
            *counts.get_mut(&k).unwrap() += 1;
        }
    }
    rec(&mut counts, &mut cur, letters.len(), &mut out);
    out
}

/// Relations and coproducts of the truncated quantum presentation.
#[derive(Debug, Clone)]
pub struct QuantumPresentation {
    pub order: u32,
    pub coords: Vec<CoordId>,
    /// relations[a][b] = [X_a, X_b] as a normal-ordered series
    pub relations: Vec<Vec<NCPoly>>,
    pub coproducts: Vec<NCTensor2>,
}

const DEFAULT_FUEL: u64 = 50_000_000;

/// Rewrite one tagged word into normal order under the relations.
fn normal_order_word(
    pm: &PMono,
    w: &Word,
    c: &GaussRat,
    relations: &[Vec<NCPoly>],
    order: u32,
    fuel: &mut u64,
) -> Result<NCPoly> {
    let mut out = NCPoly::zero();
    let mut work: BTreeMap<(PMono, Word), GaussRat> = BTreeMap::new();
    if pm.total_degree() <= order {
        work.insert((pm.clone(), w.clone()), c.clone());
    }
    while let Some(((pm, w), c)) = work.pop_first() {
        if *fuel == 0 {
            return Err(Error::FuelExhausted);
        }
        *fuel -= 1;
        if c.is_zero() {
            continue;
        }
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => out.insert(pm, w, c),
            Some(i) => {
                let a = w[i];
                let b = w[i + 1];
                // swap term
                let mut sw = w.clone();
                sw.swap(i, i + 1);
                merge(&mut work, pm.clone(), sw, c.clone());
                // commutator term: [X_a, X_b] = -relations[b][a]
                let rel = &relations[b as usize][a as usize];
                for ((rpm, rw), rc) in &rel.terms {
                    let npm = pm.mul(rpm);
                    if npm.total_degree() > order {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(w.len() - 2 + rw.len());
                    nw.extend_from_slice(&w[..i]);
                    nw.extend_from_slice(rw);
                    nw.extend_from_slice(&w[i + 2..]);
                    merge(&mut work, npm, nw, c.mul(&rc.neg()));
                }
            }
        }
    }
    Ok(out)
}

fn merge(work: &mut BTreeMap<(PMono, Word), GaussRat>, pm: PMono, w: Word, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    match work.entry((pm, w)) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get().add(&c);
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// Normal-order an entire series.
pub fn normal_order(
    p: &NCPoly,
    relations: &[Vec<NCPoly>],
    order: u32,
    fuel: &mut u64,
) -> Result<NCPoly> {
    let mut out = NCPoly::zero();
    for ((pm, w), c) in &p.terms {
        if is_normal(w) {
            out.insert(pm.clone(), w.clone(), c.clone());
        } else {
            out = out.add(&normal_order_word(pm, w, c, relations, order, fuel)?);
        }
    }
    Ok(out)
}

pub fn nc_mul(
    a: &NCPoly,
    b: &NCPoly,
    relations: &[Vec<NCPoly>],
    order: u32,
    fuel: &mut u64,
) -> Result<NCPoly> {
    let mut raw = NCPoly::zero();
    for ((pa, wa), ca) in &a.terms {
        for ((pb, wb), cb) in &b.terms {
            let pm = pa.mul(pb);
            if pm.total_degree() > order {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            raw.insert(pm, w, ca.mul(cb));
        }
    }
    normal_order(&raw, relations, order, fuel)
}

/// Rank-2 tensor of noncommutative series; legs are independent algebras.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCTensor2 {
    pub terms: BTreeMap<(PMono, Word, Word), GaussRat>,
}

impl NCTensor2 {
    pub fn zero() -> Self {
        NCTensor2::default()
    }

    pub fn one() -> Self {
        let mut t = BTreeMap::new();
        t.insert((PMono::one(), Vec::new(), Vec::new()), GaussRat::one());
        NCTensor2 { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, pm: PMono, w1: Word, w2: Word, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((pm, w1, w2)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((pm, w1, w2), c) in &other.terms {
            out.insert(pm.clone(), w1.clone(), w2.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCTensor2 {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(pm, _, _)| pm.total_degree()).min()
    }
}

pub fn nct2_mul(
    a: &NCTensor2,
    b: &NCTensor2,
    relations: &[Vec<NCPoly>],
    order: u32,
    fuel: &mut u64,
) -> Result<NCTensor2> {
    let mut out = NCTensor2::zero();
    for ((pa, a1, a2), ca) in &a.terms {
        for ((pb, b1, b2), cb) in &b.terms {
            let pm = pa.mul(pb);
            if pm.total_degree() > order {
                continue;
            }
            let mut w1 = a1.clone();
            w1.extend_from_slice(b1);
            let mut w2 = a2.clone();
            w2.extend_from_slice(b2);
            // leg-wise normal ordering; parameter budget is shared
            let leg1 = normal_order_word(&pm, &w1, &ca.mul(cb), relations, order, fuel)?;
            for ((pm1, nw1), c1) in &leg1.terms {
                let leg2 = normal_order_word(pm1, &w2, c1, relations, order, fuel)?;
                for ((pm2, nw2), c2) in &leg2.terms {
                    out.insert(pm2.clone(), nw1.clone(), nw2.clone(), c2.clone());
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCTensor3 {
    pub terms: BTreeMap<(PMono, Word, Word, Word), GaussRat>,
}

impl NCTensor3 {
    pub fn insert(&mut self, pm: PMono, w1: Word, w2: Word, w3: Word, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((pm, w1, w2, w3)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let (pm, w1, w2, w3) = k.clone();
            out.insert(pm, w1, w2, w3, c.neg());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(pm, ..)| pm.total_degree()).min()
    }
}

/// Quantize a solved bracket table and coproduct map at truncation order N.
pub fn quantize(
    q: &BracketTable,
    map: &CoproductMap,
    coords: &[CoordId],
    order: u32,
    symmetrize: bool,
) -> Result<QuantumPresentation> {
    if !symmetrize {
        if let Err((i, j, pairs)) = ambiguity_certificate(q, coords) {
            return Err(Error::AmbiguousOrdering(
                format!("bracket ({i},{j})"),
                format!("{} noncommuting factor pairs", pairs.len()),
            ));
        }
        if let Err((x, pairs)) = leg_ambiguity_certificate(map, q, coords) {
            return Err(Error::AmbiguousOrdering(
                format!("coproduct of coordinate {}", x.0),
                format!("{} noncommuting factor pairs", pairs.len()),
            ));
        }
    }
    let d = coords.len();
    let commutes = |a: usize, b: usize| q.q[a][b].is_zero();
    let mut relations = vec![vec![NCPoly::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            if i == j || q.q[i][j].is_zero() {
                continue;
            }
            let series = series_in_params(&q.q[i][j], order)?;
            relations[i][j] = nc_from_expr(&series, coords, &commutes, symmetrize)?;
        }
    }
    let mut coproducts = Vec::with_capacity(d);
    for i in 0..d {
        let mut t = NCTensor2::zero();
        for (key, c) in &map.deltas[i].terms {
            let e1 = {
                let mut e = Expr::zero();
                e.insert_term(key.l1.clone(), c.clone());
                e
            };
            let e2 = {
                let mut e = Expr::zero();
                e.insert_term(key.l2.clone(), Scalar::one());
                e
            };
            let s1 = nc_from_expr(&series_in_params(&e1, order)?, coords, &commutes, symmetrize)?;
            let s2 = nc_from_expr(&series_in_params(&e2, order)?, coords, &commutes, symmetrize)?;
            for ((p1, w1), c1) in &s1.terms {
                for ((p2, w2), c2) in &s2.terms {
                    let pm = p1.mul(p2);
                    if pm.total_degree() > order {
                        continue;
                    }
                    t.insert(pm, w1.clone(), w2.clone(), c1.mul(c2));
                }
            }
        }
        coproducts.push(t);
    }
    Ok(QuantumPresentation {
        order,
        coords: coords.to_vec(),
        relations,
        coproducts,
    })
}

impl QuantumPresentation {
    /// Extend the coproduct as an algebra morphism to a series.
    fn delta_of_series(&self, p: &NCPoly, fuel: &mut u64) -> Result<NCTensor2> {
        let mut out = NCTensor2::zero();
        for ((pm, w), c) in &p.terms {
            let mut t = NCTensor2::one();
            for &g in w {
                t = nct2_mul(&t, &self.coproducts[g as usize], &self.relations, self.order, fuel)?;
            }
            for ((tp, w1, w2), tc) in &t.terms {
                let npm = pm.mul(tp);
                if npm.total_degree() > self.order {
                    continue;
                }
                out.insert(npm, w1.clone(), w2.clone(), tc.mul(c));
            }
        }
        Ok(out)
    }
}

/// One verified generator pair in a quantum check report.
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub ok: bool,
    pub first_failing_order: Option<u32>,
}

/// [Delta(X_i), Delta(X_j)] = Delta([X_i, X_j]) to the truncation order.
pub fn check_quantum_hom(p: &QuantumPresentation) -> Result<Vec<PairCheck>> {
    let d = p.coords.len();
    let mut fuel = DEFAULT_FUEL;
    let mut out = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let di = &p.coproducts[i];
            let dj = &p.coproducts[j];
            let ab = nct2_mul(di, dj, &p.relations, p.order, &mut fuel)?;
            let ba = nct2_mul(dj, di, &p.relations, p.order, &mut fuel)?;
            let lhs = ab.sub(&ba);
            let rhs = p.delta_of_series(&p.relations[i][j], &mut fuel)?;
            let res = lhs.sub(&rhs);
            out.push(PairCheck {
                i,
                j,
                ok: res.is_zero(),
                first_failing_order: res.min_param_degree(),
            });
        }
    }
    Ok(out)
}

/// Coassociativity of the truncated coproducts, leg-wise normal ordered.
pub fn check_quantum_coassoc(p: &QuantumPresentation) -> Result<Vec<PairCheck>> {
    let d = p.coords.len();
    let mut fuel = DEFAULT_FUEL;
    let mut out = Vec::new();
    for i in 0..d {
        let di = &p.coproducts[i];
        let mut left = NCTensor3::default();
        let mut right = NCTensor3::default();
        for ((pm, w1, w2), c) in &di.terms {
            // (Delta (x) id)
            let leg = NCPoly {
                terms: BTreeMap::from([((pm.clone(), w1.clone()), c.clone())]),
            };
            let dleg = p.delta_of_series(&leg, &mut fuel)?;
            for ((np, u1, u2), nc) in &dleg.terms {
                left.insert(np.clone(), u1.clone(), u2.clone(), w2.clone(), nc.clone());
            }
            // (id (x) Delta)
            let leg = NCPoly {
                terms: BTreeMap::from([((pm.clone(), w2.clone()), c.clone())]),
            };
            let dleg = p.delta_of_series(&leg, &mut fuel)?;
            for ((np, u1, u2), nc) in &dleg.terms {
                right.insert(np.clone(), w1.clone(), u1.clone(), u2.clone(), nc.clone());
            }
        }
        let res = left.sub(&right);
        out.push(PairCheck {
            i,
            j: i,
            ok: res.is_zero(),
            first_failing_order: res.min_param_degree(),
        });
    }
    Ok(out)
}
