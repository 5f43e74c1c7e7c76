//! Incremental sparse exact Gaussian elimination over the scalar field.
//!
//! Rows arrive one at a time (hash-deduplicated), are reduced against the
//! current pivot set, and install a new pivot on their sparsest column. A
//! final back-substitution pass expresses every pivot unknown in the free
//! unknowns. Exact arithmetic throughout; pivot choice minimizes fill by
//! column occupancy.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::scalar::Scalar;

pub type SparseRow = Vec<(u32, Scalar)>;

#[derive(Debug, Default, Clone)]
pub struct SolveStats {
    pub rows_seen: usize,
    pub rows_duplicate: usize,
    pub rows_dependent: usize,
    pub pivots: usize,
}

#[derive(Clone)]
pub struct SparseEliminator {
    /// pivot column -> normalized row (pivot coefficient 1, sorted by column)
    pivots: HashMap<u32, SparseRow>,
    install_order: Vec<u32>,
    /// how many pivot-row supports contain a column (fill heuristic)
    occupancy: HashMap<u32, usize>,
    seen_hashes: HashSet<u64>,
    /// a column that may never become a pivot (the affine right-hand side);
    /// a row supported only there marks the system inconsistent
    pub never_pivot: Option<u32>,
    pub inconsistent: bool,
    pub stats: SolveStats,
}

fn row_hash(row: &SparseRow) -> u64 {
    let mut h = DefaultHasher::new();
    for (c, s) in row {
        c.hash(&mut h);
        s.hash(&mut h);
    }
    h.finish()
}

fn normalize(mut row: SparseRow) -> SparseRow {
    if let Some((_, lead)) = row.first() {
        let inv = lead.inv();
        for (_, s) in row.iter_mut() {
            *s = s.mul(&inv);
        }
    }
    row
}

impl Default for SparseEliminator {
    fn default() -> Self {
        Self::new()
    }
}

impl SparseEliminator {
    pub fn new() -> Self {
        SparseEliminator {
            pivots: HashMap::new(),
            install_order: Vec::new(),
            occupancy: HashMap::new(),
            seen_hashes: HashSet::new(),
            never_pivot: None,
            inconsistent: false,
            stats: SolveStats::default(),
        }
    }

    pub fn n_pivots(&self) -> usize {
        self.install_order.len()
    }

    /// Reduce a row against the pivot set without installing it.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut work: BTreeMap<u32, Scalar> = row.iter().cloned().collect();
        loop {
            let mut hit = None;
            for (&c, _) in &work {
                if self.pivots.contains_key(&c) {
                    hit = Some(c);
                    break;
                }
            }
            let Some(c) = hit else { break };
            let factor = work.remove(&c).unwrap();
            let prow = &self.pivots[&c];
            for (pc, ps) in prow {
                if *pc == c {
                    continue;
                }
                let delta = ps.mul(&factor);
                match work.entry(*pc) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(delta.neg());
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = e.get().sub(&delta);
                        if v.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                }
            }
        }
        work.into_iter().collect()
    }

    /// Add one homogeneous equation (a linear functional that must vanish).
    pub fn add_row(&mut self, row: SparseRow) {
        self.stats.rows_seen += 1;
        if row.is_empty() {
            return;
        }
        let row = normalize(row);
        let h = row_hash(&row);
        if !self.seen_hashes.insert(h) {
            self.stats.rows_duplicate += 1;
            return;
        }
        let reduced = self.reduce(&row);
        if reduced.is_empty() {
            self.stats.rows_dependent += 1;
            return;
        }
        // pivot on the support column with the fewest pivot-row occurrences
        let pivot_col = match reduced
            .iter()
            .map(|(c, _)| *c)
            .filter(|c| Some(*c) != self.never_pivot)
            .min_by_key(|c| (self.occupancy.get(c).copied().unwrap_or(0), *c))
        {
            Some(c) => c,
            None => {
                // the row is supported only on the affine column: 0 = rhs
                self.inconsistent = true;
                return;
            }
        };
        let coeff = reduced
            .iter()
            .find(|(c, _)| *c == pivot_col)
            .unwrap()
            .1
            .clone();
        let inv = coeff.inv();
        let prow: SparseRow = reduced
            .into_iter()
            .map(|(c, s)| (c, s.mul(&inv)))
            .collect();
        for (c, _) in &prow {
            *self.occupancy.entry(*c).or_insert(0) += 1;
        }
        self.pivots.insert(pivot_col, prow);
        self.install_order.push(pivot_col);
        self.stats.pivots += 1;
    }

    /// Non-destructive snapshot of the current solution family.
    pub fn family_snapshot(&self, ncols: u32) -> LinearFamily {
        self.clone().into_family(ncols)
    }

    /// Finish elimination: full reduced row-echelon form, pivots expanded in
    /// the free unknowns.
    pub fn into_family(mut self, ncols: u32) -> LinearFamily {
        // later-installed pivots never appear in later rows' reductions of
        // earlier rows, so a reverse-order sweep closes the system.
        let order = self.install_order.clone();
        for idx in (0..order.len()).rev() {
            let pc = order[idx];
            let mut row = self.pivots.remove(&pc).unwrap();
            loop {
                let mut hit = None;
                for (c, _) in &row {
                    if *c != pc && self.pivots.contains_key(c) {
                        hit = Some(*c);
                        break;
                    }
                }
                let Some(c) = hit else { break };
                let factor = row.iter().find(|(cc, _)| *cc == c).unwrap().1.clone();
                let prow = self.pivots[&c].clone();
                let mut work: BTreeMap<u32, Scalar> = row.into_iter().collect();
                work.remove(&c);
                for (rc, rs) in &prow {
                    if *rc == c {
                        continue;
                    }
                    let delta = rs.mul(&factor);
                    match work.entry(*rc) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(delta.neg());
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let v = e.get().sub(&delta);
                            if v.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = v;
                            }
                        }
                    }
                }
                row = work.into_iter().collect();
            }
            self.pivots.insert(pc, row);
        }
        let mut pivot_expansion: HashMap<u32, Vec<(u32, Scalar)>> = HashMap::new();
        for (pc, row) in self.pivots {
            let expansion: Vec<(u32, Scalar)> = row
                .into_iter()
                .filter(|(c, _)| *c != pc)
                .map(|(c, s)| (c, s.neg()))
                .collect();
            pivot_expansion.insert(pc, expansion);
        }
        let free: Vec<u32> = (0..ncols)
            .filter(|c| !pivot_expansion.contains_key(c))
            .collect();
        LinearFamily {
            ncols,
            free,
            pivot_expansion,
            stats: self.stats,
        }
    }
}

/// Solution space of a homogeneous sparse system: pivots expanded over the
/// free unknowns.
#[derive(Debug, Clone)]
pub struct LinearFamily {
    pub ncols: u32,
    pub free: Vec<u32>,
    pub pivot_expansion: HashMap<u32, Vec<(u32, Scalar)>>,
    pub stats: SolveStats,
}

impl LinearFamily {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Rewrite a linear functional over all columns into free coordinates.
    pub fn substitute(&self, row: &[(u32, Scalar)]) -> BTreeMap<u32, Scalar> {
        let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
        let add = |c: u32, s: &Scalar, out: &mut BTreeMap<u32, Scalar>| {
            let v = out.get(&c).cloned().unwrap_or_else(Scalar::zero).add(s);
            if v.is_zero() {
                out.remove(&c);
            } else {
                out.insert(c, v);
            }
        };
        for (c, s) in row {
            match self.pivot_expansion.get(c) {
                None => add(*c, s, &mut out),
                Some(exp) => {
                    for (fc, fs) in exp {
                        add(*fc, &fs.mul(s), &mut out);
                    }
                }
            }
        }
        out
    }

    /// Full column vector from an assignment of the free unknowns.
    pub fn evaluate(&self, free_values: &HashMap<u32, Scalar>) -> HashMap<u32, Scalar> {
        let mut out: HashMap<u32, Scalar> = HashMap::new();
        for (&c, v) in free_values {
            if !v.is_zero() {
                out.insert(c, v.clone());
            }
        }
        for (&p, exp) in &self.pivot_expansion {
            let mut acc = Scalar::zero();
            for (fc, fs) in exp {
                if let Some(v) = free_values.get(fc) {
                    acc = acc.add(&fs.mul(v));
                }
            }
            if !acc.is_zero() {
                out.insert(p, acc);
            }
        }
        out
    }

    /// Does a full assignment satisfy every pivot relation?
    pub fn contains(&self, assignment: &HashMap<u32, Scalar>) -> bool {
        let get = |c: u32| assignment.get(&c).cloned().unwrap_or_else(Scalar::zero);
        for (&p, exp) in &self.pivot_expansion {
            let mut acc = Scalar::zero();
            for (fc, fs) in exp {
                acc = acc.add(&fs.mul(&get(*fc)));
            }
            if acc.sub(&get(p)).is_zero() {
                continue;
            }
            return false;
        }
        true
    }
}


impl SparseEliminator {
    /// Total stored coefficient entries across pivot rows (memory proxy).
    pub fn entries_stored(&self) -> usize {
        self.pivots.values().map(|r| r.len()).sum()
    }
}
