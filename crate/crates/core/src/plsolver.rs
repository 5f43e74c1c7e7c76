//! The quadratic Poisson-Lie ansatz: brackets {X_i, X_j} = sum beta F_k F_l
//! over the function set built from group entries and coproduct leg factors.
//! The coproduct homomorphism condition gives a homogeneous sparse linear
//! system for the beta coefficients; the linearization condition then picks
//! the unique Poisson-Lie solution. The Sklyanin bracket provides the
//! independent construction for coboundary duals.

use std::collections::{BTreeMap, HashMap};

use crate::context::{CoordId, ParamId};
use crate::coproduct::{resolve_recipes_on, CoproductMap, Recipe};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grouprep::{matrix_exp, GroupElement, Representation};
use crate::linalg::{mat_mul, solve_dense};
use crate::scalar::Scalar;
use crate::series::series_in_params;
use crate::sparse::{LinearFamily, SolveStats, SparseEliminator, SparseRow};
use crate::tensor::{embed_left, embed_right, Tensor2};

/// Deduplicated, deterministically ordered list of ansatz functions.
#[derive(Debug, Clone)]
pub struct FunctionSet {
    pub funcs: Vec<Expr>,
}

impl FunctionSet {
    pub fn size(&self) -> usize {
        self.funcs.len()
    }
}

/// F = {1, coordinates} + {normalized entries} + {normalized coproduct leg
/// factors}; a function equal to a scalar multiple of an earlier one is
/// dropped.
pub fn build_function_set(
    g: &GroupElement,
    map: &CoproductMap,
    coords: &[CoordId],
) -> FunctionSet {
    let mut funcs: Vec<Expr> = Vec::new();
    let push = |e: &Expr, funcs: &mut Vec<Expr>| {
        if e.is_zero() {
            return;
        }
        let n = e.normalized();
        if !funcs.iter().any(|f| f.scalar_ratio(&n).is_some()) {
            funcs.push(n);
        }
    };
    push(&Expr::one(), &mut funcs);
    for &x in coords {
        push(&Expr::coord(x), &mut funcs);
    }
    for row in &g.entries {
        for e in row {
            push(e, &mut funcs);
        }
    }
    for d in &map.deltas {
        for (g_ik, h_ik) in CoproductMap::leg_factors(d) {
            push(&g_ik, &mut funcs);
            push(&h_ik, &mut funcs);
        }
    }
    FunctionSet { funcs }
}

/// Index bookkeeping for the beta unknowns: (coordinate pair i<j, unordered
/// function product k<=l) -> flat column.
#[derive(Debug, Clone, Copy)]
pub struct BetaIndexer {
    pub dim: usize,
    pub set_size: usize,
}

impl BetaIndexer {
    pub fn n_pairs(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    pub fn n_products(&self) -> usize {
        self.set_size * (self.set_size + 1) / 2
    }

    pub fn unknown_count(&self) -> usize {
        self.n_pairs() * self.n_products()
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        // pairs in lexicographic order (0,1), (0,2), ..., (d-2,d-1)
        i * self.dim - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn pair_of_index(&self, p: usize) -> (usize, usize) {
        let mut i = 0;
        let mut acc = 0;
        loop {
            let row = self.dim - i - 1;
            if acc + row > p {
                return (i, i + 1 + (p - acc));
            }
            acc += row;
            i += 1;
        }
    }

    pub fn product_index(&self, k: usize, l: usize) -> usize {
        debug_assert!(k <= l && l < self.set_size);
        k * (2 * self.set_size - k + 1) / 2 + (l - k)
    }

    pub fn product_of_index(&self, q: usize) -> (usize, usize) {
        let mut k = 0;
        let mut acc = 0;
        loop {
            let row = self.set_size - k;
            if acc + row > q {
                return (k, k + (q - acc));
            }
            acc += row;
            k += 1;
        }
    }

    pub fn flat(&self, pair: usize, prod: usize) -> u32 {
        (pair * self.n_products() + prod) as u32
    }
}

/// The solved (or parametric) homomorphism system. The eliminator is kept so
/// the linearization condition can extend it in place.
pub struct BetaSystem {
    pub indexer: BetaIndexer,
    pub family: LinearFamily,
    pub products: Vec<Expr>,
    pub stats: SolveStats,
    elim: SparseEliminator,
}

/// Antisymmetric table of solved brackets, Q[i][j] = {X_i, X_j}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTable {
    pub dim: usize,
    pub q: Vec<Vec<Expr>>,
}

impl BracketTable {
    pub fn zero(dim: usize) -> Self {
        BracketTable {
            dim,
            q: vec![vec![Expr::zero(); dim]; dim],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expr) {
        self.q[j][i] = e.neg();
        self.q[i][j] = e;
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.q[i][j]
    }

    /// Poisson bracket of two functions via the chain rule over this table.
    pub fn bracket(&self, f: &Expr, g: &Expr, coords: &[CoordId]) -> Expr {
        let d = self.dim;
        let df: Vec<Expr> = (0..d).map(|k| f.diff(coords[k])).collect();
        let dg: Vec<Expr> = (0..d).map(|k| g.diff(coords[k])).collect();
        let mut out = Expr::zero();
        for i in 0..d {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if i == j || self.q[i][j].is_zero() || dg[j].is_zero() {
                    continue;
                }
                out = out.add(&self.q[i][j].mul(&df[i]).mul(&dg[j]));
            }
        }
        out
    }
}

/// Partial derivatives of every coordinate coproduct: A[i][k] = d Delta(X_i) /
/// d(X_k (x) 1), B likewise for the second leg; only nonzero ones stored.
struct DeltaDerivatives {
    a: Vec<HashMap<usize, Tensor2>>,
    b: Vec<HashMap<usize, Tensor2>>,
}

fn delta_derivatives(map: &CoproductMap, coords: &[CoordId]) -> DeltaDerivatives {
    let d = coords.len();
    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    for i in 0..d {
        let mut ai = HashMap::new();
        let mut bi = HashMap::new();
        for (k, &xk) in coords.iter().enumerate() {
            let da = map.deltas[i].leg_diff(1, xk);
            if !da.is_zero() {
                ai.insert(k, da);
            }
            let db = map.deltas[i].leg_diff(2, xk);
            if !db.is_zero() {
                bi.insert(k, db);
            }
        }
        a.push(ai);
        b.push(bi);
    }
    DeltaDerivatives { a, b }
}

/// Build and eliminate the homomorphism system for the beta unknowns.
pub fn impose_homomorphism(
    fset: &FunctionSet,
    map: &CoproductMap,
    coords: &[CoordId],
) -> Result<BetaSystem> {
    let d = coords.len();
    let s = fset.size();
    let indexer = BetaIndexer {
        dim: d,
        set_size: s,
    };
    // all unordered products F_k F_l and their coproducts
    let mut products = Vec::with_capacity(indexer.n_products());
    let mut delta_products = Vec::with_capacity(indexer.n_products());
    let delta_f: Vec<Tensor2> = fset
        .funcs
        .iter()
        .map(|f| map.delta_of_expr(f))
        .collect::<Result<_>>()?;
    for k in 0..s {
        for l in k..s {
            products.push(fset.funcs[k].mul(&fset.funcs[l]));
            delta_products.push(delta_f[k].mul(&delta_f[l]));
        }
    }
    let derivs = delta_derivatives(map, coords);
    let mut elim = SparseEliminator::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let target_pair = indexer.pair_index(i, j);
            // rows keyed by the canonical tensor basis element
            let mut rowmap: BTreeMap<crate::tensor::TensorKey2, BTreeMap<u32, Scalar>> =
                BTreeMap::new();
            let add = |t: &Tensor2, col: u32, rowmap: &mut BTreeMap<_, BTreeMap<u32, Scalar>>| {
                for (key, c) in &t.terms {
                    let row = rowmap.entry(key.clone()).or_default();
                    let v = row.get(&col).cloned().unwrap_or_else(Scalar::zero).add(c);
                    if v.is_zero() {
                        row.remove(&col);
                    } else {
                        row.insert(col, v);
                    }
                }
            };
            for k in 0..d {
                for l in (k + 1)..d {
                    let p = indexer.pair_index(k, l);
                    // U_p = A_ik A_jl - A_il A_jk ; W_p likewise on leg 2
                    let mut u = Tensor2::zero();
                    if let (Some(aik), Some(ajl)) = (derivs.a[i].get(&k), derivs.a[j].get(&l)) {
                        u = u.add(&aik.mul(ajl));
                    }
                    if let (Some(ail), Some(ajk)) = (derivs.a[i].get(&l), derivs.a[j].get(&k)) {
                        u = u.sub(&ail.mul(ajk));
                    }
                    let mut w = Tensor2::zero();
                    if let (Some(bik), Some(bjl)) = (derivs.b[i].get(&k), derivs.b[j].get(&l)) {
                        w = w.add(&bik.mul(bjl));
                    }
                    if let (Some(bil), Some(bjk)) = (derivs.b[i].get(&l), derivs.b[j].get(&k)) {
                        w = w.sub(&bil.mul(bjk));
                    }
                    if u.is_zero() && w.is_zero() {
                        continue;
                    }
                    for (q, fprod) in products.iter().enumerate() {
                        let col = indexer.flat(p, q);
                        if !u.is_zero() {
                            add(&embed_left(fprod).mul(&u), col, &mut rowmap);
                        }
                        if !w.is_zero() {
                            add(&embed_right(fprod).mul(&w), col, &mut rowmap);
                        }
                    }
                }
            }
            // subtract Delta(Q_ij)
            for (q, dp) in delta_products.iter().enumerate() {
                let col = indexer.flat(target_pair, q);
                add(&dp.neg(), col, &mut rowmap);
            }
            let n_rows = rowmap.len();
            for (_, row) in rowmap {
                let sparse: SparseRow = row.into_iter().collect();
                elim.add_row(sparse);
            }
            if std::env::var_os("QDUAL_TRACE").is_some() {
                eprintln!(
                    "pair ({i},{j}): {n_rows} rows; pivots {} stored {} seen {}",
                    elim.n_pivots(),
                    elim.entries_stored(),
                    elim.stats.rows_seen
                );
            }
        }
    }
    let stats = elim.stats.clone();
    let family = elim.family_snapshot(indexer.unknown_count() as u32);
    Ok(BetaSystem {
        indexer,
        family,
        products,
        stats,
        elim,
    })
}

/// The solved bracket table with its beta assignment. `gauge_dim` counts
/// residual beta directions that do not change the bracket (linear
/// dependencies among the products F_k F_l); the table itself is unique.
pub struct Linearized {
    pub table: BracketTable,
    pub beta: HashMap<u32, Scalar>,
    pub gauge_dim: usize,
}

/// Impose the linearization condition on the parametric family and return the
/// unique solved bracket table. Runs through the sparse eliminator with an
/// extra affine column carrying the right-hand side.
pub fn impose_linearization(
    sys: &BetaSystem,
    c: &[Vec<Vec<Scalar>>],
    coords: &[CoordId],
) -> Result<Linearized> {
    let d = sys.indexer.dim;
    let rhs_col = sys.indexer.unknown_count() as u32;
    // derivative of each product at the origin, per coordinate
    let lin: Vec<Vec<Scalar>> = sys
        .products
        .iter()
        .map(|p| {
            coords
                .iter()
                .map(|&x| p.diff(x).eval_at_zero())
                .collect::<Vec<Scalar>>()
        })
        .collect();
    let mut elim = sys.elim.clone();
    elim.never_pivot = Some(rhs_col);
    for i in 0..d {
        for j in (i + 1)..d {
            let p = sys.indexer.pair_index(i, j);
            for (k, _) in coords.iter().enumerate() {
                let mut row: SparseRow = Vec::new();
                for q in 0..sys.products.len() {
                    if !lin[q][k].is_zero() {
                        row.push((sys.indexer.flat(p, q), lin[q][k].clone()));
                    }
                }
                if !c[i][j][k].is_zero() {
                    row.push((rhs_col, c[i][j][k].neg()));
                }
                elim.add_row(row);
            }
        }
    }
    if elim.inconsistent {
        return Err(Error::NoSolution);
    }
    let fam = elim.into_family(rhs_col + 1);
    // particular solution: affine column = 1, all other frees = 0
    let particular_map = fam.evaluate(&HashMap::from([(rhs_col, Scalar::one())]));
    let mut beta: HashMap<u32, Scalar> = particular_map;
    beta.remove(&rhs_col);
    let table = bracket_table_from_beta(sys, &beta, d);
    // residual directions must be pure gauge: they may not change any bracket
    let mut gauge_dim = 0usize;
    for &f in &fam.free {
        if f == rhs_col {
            continue;
        }
        gauge_dim += 1;
        let dir = fam.evaluate(&HashMap::from([(f, Scalar::one())]));
        let delta_table = bracket_table_from_beta(sys, &dir, d);
        let changes = delta_table
            .q
            .iter()
            .any(|row| row.iter().any(|e| !e.is_zero()));
        if changes {
            return Err(Error::NonUniqueSolution(gauge_dim));
        }
    }
    Ok(Linearized {
        table,
        beta,
        gauge_dim,
    })
}

pub fn bracket_table_from_beta(
    sys: &BetaSystem,
    beta: &HashMap<u32, Scalar>,
    d: usize,
) -> BracketTable {
    // iterate the sparse assignment; insertion order cannot matter because
    // expression addition is exact and canonical
    let nprod = sys.indexer.n_products();
    let mut acc: HashMap<usize, Expr> = HashMap::new();
    for (&col, b) in beta {
        if b.is_zero() {
            continue;
        }
        let pair = col as usize / nprod;
        let q = col as usize % nprod;
        let entry = acc.entry(pair).or_insert_with(Expr::zero);
        *entry = entry.add(&sys.products[q].scalar_mul(b));
    }
    let mut table = BracketTable::zero(d);
    for (pair, e) in acc {
        let (i, j) = sys.indexer.pair_of_index(pair);
        table.set(i, j, e);
    }
    table
}

/// Cyclic Jacobi residuals; empty report means the identity holds exactly.
pub fn check_jacobi(q: &BracketTable, coords: &[CoordId]) -> Vec<(usize, usize, usize)> {
    let d = q.dim;
    let mut failures = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                let xi = Expr::coord(coords[i]);
                let xj = Expr::coord(coords[j]);
                let xk = Expr::coord(coords[k]);
                let mut acc = q.bracket(&xi, &q.bracket(&xj, &xk, coords), coords);
                acc = acc.add(&q.bracket(&xj, &q.bracket(&xk, &xi, coords), coords));
                acc = acc.add(&q.bracket(&xk, &q.bracket(&xi, &xj, coords), coords));
                if !acc.is_zero() {
                    failures.push((i, j, k));
                }
            }
        }
    }
    failures
}

/// Order-zero expansion of every bracket equals the linear c-bracket.
pub fn check_classical_limit(
    q: &BracketTable,
    c: &[Vec<Vec<Scalar>>],
    coords: &[CoordId],
) -> Result<bool> {
    let d = q.dim;
    for i in 0..d {
        for j in (i + 1)..d {
            let lhs = series_in_params(&q.q[i][j], 0)?;
            let mut rhs = Expr::zero();
            for (k, &x) in coords.iter().enumerate() {
                rhs = rhs.add(&Expr::coord(x).scalar_mul(&c[i][j][k]));
            }
            let rhs = series_in_params(&rhs, 0)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact re-verification of the Poisson-morphism property on the solved table:
/// {Delta X_i, Delta X_j} = Delta(Q_ij).
pub fn verify_hom_identity(
    q: &BracketTable,
    map: &CoproductMap,
    coords: &[CoordId],
) -> Result<Vec<(usize, usize)>> {
    let d = q.dim;
    let derivs = delta_derivatives(map, coords);
    let mut failures = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut lhs = Tensor2::zero();
            for k in 0..d {
                for l in (k + 1)..d {
                    if q.q[k][l].is_zero() {
                        continue;
                    }
                    let mut u = Tensor2::zero();
                    if let (Some(aik), Some(ajl)) = (derivs.a[i].get(&k), derivs.a[j].get(&l)) {
                        u = u.add(&aik.mul(ajl));
                    }
                    if let (Some(ail), Some(ajk)) = (derivs.a[i].get(&l), derivs.a[j].get(&k)) {
                        u = u.sub(&ail.mul(ajk));
                    }
                    if !u.is_zero() {
                        lhs = lhs.add(&embed_left(&q.q[k][l]).mul(&u));
                    }
                    let mut w = Tensor2::zero();
                    if let (Some(bik), Some(bjl)) = (derivs.b[i].get(&k), derivs.b[j].get(&l)) {
                        w = w.add(&bik.mul(bjl));
                    }
                    if let (Some(bil), Some(bjk)) = (derivs.b[i].get(&l), derivs.b[j].get(&k)) {
                        w = w.sub(&bil.mul(bjk));
                    }
                    if !w.is_zero() {
                        lhs = lhs.add(&embed_right(&q.q[k][l]).mul(&w));
                    }
                }
            }
            let rhs = map.delta_of_expr(&q.q[i][j])?;
            if lhs != rhs {
                failures.push((i, j));
            }
        }
    }
    Ok(failures)
}

/// Sklyanin bracket for a coboundary dual: left/right invariant vector fields
/// evaluated by differentiating the coordinate recipes along translated group
/// elements, contracted with the r-matrix.
pub fn sklyanin_bracket(
    g: &GroupElement,
    rep: &Representation,
    r: &[Vec<Scalar>],
    recipes: &[Recipe],
    coords: &[CoordId],
    aux_t: CoordId,
    params: &[ParamId],
) -> Result<BracketTable> {
    let d = coords.len();
    let mut left = vec![vec![Expr::zero(); d]; d]; // left[i][m] = X^L_i(X_m)
    let mut right = vec![vec![Expr::zero(); d]; d];
    let kill_t: HashMap<CoordId, Expr> = HashMap::from([(aux_t, Expr::zero())]);
    for i in 0..d {
        let flow = matrix_exp(&rep.mats[i], aux_t, params)?;
        for (side, mat) in [
            (&mut left, mat_mul(&g.entries, &flow)),
            (&mut right, mat_mul(&flow, &g.entries)),
        ] {
            let resolved = resolve_recipes_on(recipes, &mat)?;
            for (m, &x) in coords.iter().enumerate() {
                let v = resolved.get(&x).cloned().ok_or_else(|| {
                    Error::RecipeSearchFailed(format!("no recipe for coordinate {}", x.0))
                })?;
                side[i][m] = v.diff(aux_t).substitute(&kill_t)?;
            }
        }
    }
    let mut table = BracketTable::zero(d);
    for m in 0..d {
        for n in (m + 1)..d {
            let mut acc = Expr::zero();
            for i in 0..d {
                for j in (i + 1)..d {
                    if r[i][j].is_zero() {
                        continue;
                    }
                    let l_term = left[i][m].mul(&left[j][n]).sub(&left[j][m].mul(&left[i][n]));
                    let r_term = right[i][m]
                        .mul(&right[j][n])
                        .sub(&right[j][m].mul(&right[i][n]));
                    acc = acc.add(&l_term.sub(&r_term).scalar_mul(&r[i][j]));
                }
            }
            table.set(m, n, acc);
        }
    }
    Ok(table)
}
