//! Search kernels shared by `cochain`, `covering` and `cheeger`.
//!
//! Small symmetric groups (degree at most [`TABLE_MAX_DEGREE`]) are handled
//! through a multiplication table so that exhaustive searches work on
//! `u16` element indices.

use std::collections::HashMap;

use pathfinding::matrix::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complex::{Complex, VertexId};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub(crate) const TABLE_MAX_DEGREE: usize = 6;

/// Multiplication table of `Sym(n)`. Elements are listed in lexicographic
/// order of their image tables, so index 0 is the identity.
pub(crate) struct SymTable {
    pub n: usize,
    pub elems: Vec<Permutation>,
    index: HashMap<Vec<u16>, u16>,
    mul: Vec<u16>,
    pub inv: Vec<u16>,
    pub fix: Vec<u8>,
}

impl SymTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_DEGREE {
            return Err(Error::guard(format!("exhaustive search over Sym({n})"), factorial(n), factorial(TABLE_MAX_DEGREE)));
        }
        let mut elems = Vec::new();
        let mut cur: Vec<u16> = (0..n as u16).collect();
        loop {
            elems.push(Permutation::from_u16_unchecked(cur.clone()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let size = elems.len();
        let index: HashMap<Vec<u16>, u16> =
            elems.iter().enumerate().map(|(i, p)| (p.raw().to_vec(), i as u16)).collect();
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                mul[a * size + b] = index[elems[a].compose_unchecked(&elems[b]).raw()];
            }
        }
        let inv = elems.iter().map(|p| index[p.inverse().raw()]).collect();
        let fix = elems.iter().map(|p| p.fixed_points() as u8).collect();
        Ok(SymTable { n, elems, index, mul, inv, fix })
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.elems.len() + b as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> u16 {
        self.index[p.raw()]
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: u16, g: u16) -> u16 {
        self.mul(self.mul(self.inv[g as usize], x), g)
    }
}

fn next_permutation(v: &mut [u16]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Vertex order for assignment searches: BFS order of each component, with
/// the component root first.
pub(crate) fn forest_order(x: &Complex) -> (Vec<VertexId>, Vec<bool>) {
    let mut order = Vec::with_capacity(x.n_vertices());
    let mut is_root = vec![false; x.n_vertices()];
    for tree in x.spanning_forest() {
        is_root[tree.root.0] = true;
        order.extend(tree.order);
    }
    (order, is_root)
}

/// Minimize `sum_e w_e * (n - agree(left_e, b(x)^-1 right_e b(y)))` over
/// 0-cochains `b`. With `left = id` this is the coboundary distance of
/// `right`; in general it is the distance from `left` to the orbit of
/// `right`.
pub(crate) struct OrbitProblem<'a> {
    pub complex: &'a Complex,
    pub n: usize,
    pub left: Vec<Permutation>,
    pub right: Vec<Permutation>,
    /// Whether `b` may be fixed to the identity at each component root.
    /// Valid exactly when `left` is conjugation invariant (all identity).
    pub fix_roots: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct OrbitSolution {
    /// `sum_e w_e * disagreements`, over the denominator `W1 * n`.
    pub cost: u128,
    pub beta: Vec<Permutation>,
}

impl OrbitProblem<'_> {
    pub fn denominator(&self) -> u128 {
        self.complex.measures().mu1.total() as u128 * self.n as u128
    }

    pub fn evaluate(&self, beta: &[Permutation]) -> u128 {
        let w = self.complex.measures().mu1.weights();
        self.complex
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let m = beta[e.src.0].inverse().compose_unchecked(&self.right[i]).compose_unchecked(&beta[e.dst.0]);
                w[i] as u128 * (self.n - self.left[i].agreements(&m)) as u128
            })
            .sum()
    }

    /// Number of assignments the exhaustive search ranges over.
    pub fn exact_candidates(&self) -> f64 {
        let free = if self.fix_roots {
            self.complex.n_vertices() - self.complex.n_components()
        } else {
            self.complex.n_vertices()
        };
        factorial(self.n).powi(free as i32)
    }

    /// Coordinate descent from 32 starts (identity first, then seeded random).
    pub fn local_search(&self, restarts: usize, seed: u64) -> OrbitSolution {
        let nv = self.complex.n_vertices();
        let starts: Vec<Vec<Permutation>> = (0..restarts.max(1))
            .map(|r| {
                if r == 0 {
                    vec![Permutation::identity(self.n); nv]
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                    (0..nv).map(|_| random_permutation(self.n, &mut rng)).collect()
                }
            })
            .collect();
        let results: Vec<OrbitSolution> = starts.into_par_iter().map(|s| self.descend(s)).collect();
        results
            .into_iter()
            .reduce(|best, s| if s.cost < best.cost { s } else { best })
            .expect("at least one start")
    }

    fn descend(&self, mut beta: Vec<Permutation>) -> OrbitSolution {
        let x = self.complex;
        let w = x.measures().mu1.weights();
        let n = self.n;
        let mut cost = self.evaluate(&beta);
        let brute = factorial(n) <= 720.0;
        let all: Vec<Permutation> = if brute { all_permutations(n) } else { Vec::new() };
        loop {
            let mut improved = false;
            for v in 0..x.n_vertices() {
                // local cost as a function of g = beta(v)
                let local = |g: &Permutation, beta: &[Permutation]| -> u128 {
                    let mut c = 0u128;
                    for o in x.outgoing(VertexId(v)) {
                        if o.reversed && x.edge(o.edge).is_loop() {
                            continue; // loops are listed twice
                        }
                        let i = o.edge.0;
                        let e = x.edge(o.edge);
                        let bx = if e.src.0 == v { g } else { &beta[e.src.0] };
                        let by = if e.dst.0 == v { g } else { &beta[e.dst.0] };
                        let m = bx.inverse().compose_unchecked(&self.right[i]).compose_unchecked(by);
                        c += w[i] as u128 * (n - self.left[i].agreements(&m)) as u128;
                    }
                    c
                };
                let current = local(&beta[v], &beta);
                let candidate = if brute {
                    all.iter().min_by_key(|g| local(g, &beta)).cloned().expect("nonempty group")
                } else {
                    self.assignment_step(v, &beta)
                };
                let new = local(&candidate, &beta);
                if new < current {
                    beta[v] = candidate;
                    cost = cost - current + new;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        debug_assert_eq!(cost, self.evaluate(&beta));
        OrbitSolution { cost, beta }
    }

    /// Best `g = beta(v)` for the non-loop edges at `v` as an assignment
    /// problem: each edge votes, with its weight, for pairs `g(j) = k`.
    fn assignment_step(&self, v: usize, beta: &[Permutation]) -> Permutation {
        let x = self.complex;
        let n = self.n;
        let w = x.measures().mu1.weights();
        let mut score = vec![0i64; n * n];
        for o in x.outgoing(VertexId(v)) {
            let e = x.edge(o.edge);
            if e.is_loop() {
                continue;
            }
            let i = o.edge.0;
            let wt = w[i] as i64;
            if e.src.0 == v {
                // agree(L, g^-1 R b(y)): g(L(t)) = (R b(y))(t)
                let m = self.right[i].compose_unchecked(&beta[e.dst.0]);
                for t in 0..n {
                    score[self.left[i].apply(t) * n + m.apply(t)] += wt;
                }
            } else {
                // agree(L, b(x)^-1 R g): g(t) = (R^-1 b(x) L)(t)
                let m = self.right[i].inverse().compose_unchecked(&beta[e.src.0]).compose_unchecked(&self.left[i]);
                for t in 0..n {
                    score[t * n + m.apply(t)] += wt;
                }
            }
        }
        let weights = Matrix::from_vec(n, n, score).expect("square score matrix");
        let (_, assignment) = pathfinding::kuhn_munkres::kuhn_munkres(&weights);
        Permutation::from_images(assignment).expect("assignment is a bijection")
    }

    /// Exhaustive branch and bound. `bound` is an achieved solution used
    /// for pruning; it is returned unchanged when nothing beats it.
    pub fn exact(&self, bound: OrbitSolution, limit: f64) -> Result<OrbitSolution> {
        let candidates = self.exact_candidates();
        if candidates > limit {
            return Err(Error::guard("exhaustive 0-cochain search", candidates, limit));
        }
        let table = SymTable::new(self.n)?;
        let x = self.complex;
        let (order, is_root) = forest_order(x);
        let mut pos = vec![0usize; x.n_vertices()];
        for (k, v) in order.iter().enumerate() {
            pos[v.0] = k;
        }
        // edges grouped by the position of their later endpoint
        let mut at: Vec<Vec<(u16, u16, u64, usize, usize)>> = vec![Vec::new(); order.len()];
        let w = x.measures().mu1.weights();
        for (i, e) in x.edges().iter().enumerate() {
            let (ps, pd) = (pos[e.src.0], pos[e.dst.0]);
            at[ps.max(pd)].push((
                table.inv[table.index_of(&self.left[i]) as usize],
                table.index_of(&self.right[i]),
                w[i],
                ps,
                pd,
            ));
        }
        let fixed: Vec<bool> = order.iter().map(|v| self.fix_roots && is_root[v.0]).collect();
        let ctx = BranchCtx { table: &table, at: &at, fixed: &fixed, n: self.n as u128 };

        let best_cost = bound.cost;
        let first_free = fixed.iter().position(|f| !f);
        let found: Option<(u128, Vec<u16>)> = match first_free {
            None => {
                let assign = vec![0u16; order.len()];
                let c = ctx.full_cost(&assign);
                (c < best_cost).then_some((c, assign))
            }
            Some(k0) => {
                let branches: Vec<Option<(u128, Vec<u16>)>> = (0..table.size() as u16)
                    .into_par_iter()
                    .map(|g| {
                        let mut assign = vec![0u16; order.len()];
                        let mut partial = 0u128;
                        for k in 0..k0 {
                            partial += ctx.step_cost(k, &assign);
                        }
                        assign[k0] = g;
                        partial += ctx.step_cost(k0, &assign);
                        let mut best = (best_cost, None);
                        if partial < best.0 {
                            ctx.dfs(k0 + 1, partial, &mut assign, &mut best);
                        }
                        best.1.map(|a| (best.0, a))
                    })
                    .collect();
                branches.into_iter().flatten().reduce(|a, b| if b.0 < a.0 { b } else { a })
            }
        };
        Ok(match found {
            None => bound,
            Some((cost, assign)) => {
                let mut beta = vec![Permutation::identity(self.n); x.n_vertices()];
                for (k, v) in order.iter().enumerate() {
                    beta[v.0] = table.elems[assign[k] as usize].clone();
                }
                debug_assert_eq!(cost, self.evaluate(&beta));
                OrbitSolution { cost, beta }
            }
        })
    }

    /// Exact when feasible, otherwise the local-search upper bound.
    pub fn solve(&self, exact: bool, limit: f64, seed: u64) -> Result<(OrbitSolution, bool)> {
        let heuristic = self.local_search(32, seed);
        if !exact {
            return Ok((heuristic, false));
        }
        Ok((self.exact(heuristic, limit)?, true))
    }
}

struct BranchCtx<'a> {
    table: &'a SymTable,
    at: &'a [Vec<(u16, u16, u64, usize, usize)>],
    fixed: &'a [bool],
    n: u128,
}

impl BranchCtx<'_> {
    #[inline]
    fn step_cost(&self, k: usize, assign: &[u16]) -> u128 {
        let t = self.table;
        let mut c = 0u128;
        for &(linv, r, w, ps, pd) in &self.at[k] {
            let m = t.mul(t.mul(t.inv[assign[ps] as usize], r), assign[pd]);
            c += w as u128 * (self.n - t.fix[t.mul(linv, m) as usize] as u128);
        }
        c
    }

    fn full_cost(&self, assign: &[u16]) -> u128 {
        (0..assign.len()).map(|k| self.step_cost(k, assign)).sum()
    }

    fn dfs(&self, k: usize, partial: u128, assign: &mut Vec<u16>, best: &mut (u128, Option<Vec<u16>>)) {
        if k == assign.len() {
            if partial < best.0 {
                *best = (partial, Some(assign.clone()));
            }
            return;
        }
        let choices = if self.fixed[k] { 0..1 } else { 0..self.table.size() as u16 };
        for g in choices {
            assign[k] = g;
            let c = partial + self.step_cost(k, assign);
            if c < best.0 {
                self.dfs(k + 1, c, assign, best);
            }
        }
        assign[k] = 0;
    }
}

pub(crate) fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<u16> = (0..n as u16).collect();
    loop {
        out.push(Permutation::from_u16_unchecked(cur.clone()));
        if !next_permutation(&mut cur) {
            break;
        }
    }
    out
}

pub(crate) fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<u16> = (0..n as u16).collect();
    images.shuffle(rng);
    Permutation::from_u16_unchecked(images)
}

/// Tree-normal cocycles of a connected complex: identity on the tree,
/// arbitrary on the remaining edges subject to every polygon relation.
pub(crate) struct CocycleEnumerator<'a> {
    pub complex: &'a Complex,
    pub table: SymTable,
    /// Non-tree edges in increasing id order.
    pub free: Vec<usize>,
    /// Polygons (as perimeter edge codes) checked once free slot `k` is set.
    checks: Vec<Vec<usize>>,
}

impl<'a> CocycleEnumerator<'a> {
    pub fn new(x: &'a Complex, n: usize, limit: f64) -> Result<Self> {
        if !x.is_connected() {
            return Err(Error::Disconnected { components: x.n_components() });
        }
        let tree = x.spanning_tree(VertexId(0))?;
        let free: Vec<usize> = (0..x.n_edges()).filter(|&e| !tree.in_tree[e]).collect();
        let candidates = factorial(n).powi(free.len() as i32);
        if candidates > limit {
            return Err(Error::guard(
                format!("cocycle enumeration at degree {n} ({} non-tree edges)", free.len()),
                candidates,
                limit,
            ));
        }
        let table = SymTable::new(n)?;
        let mut slot = vec![usize::MAX; x.n_edges()];
        for (k, &e) in free.iter().enumerate() {
            slot[e] = k;
        }
        let mut checks = vec![Vec::new(); free.len().max(1)];
        for (pid, per) in x.perimeters().iter().enumerate() {
            let last = per.iter().filter_map(|o| (slot[o.edge.0] != usize::MAX).then_some(slot[o.edge.0])).max();
            checks[last.unwrap_or(0)].push(pid);
        }
        Ok(CocycleEnumerator { complex: x, table, free, checks })
    }

    fn polygon_ok(&self, pid: usize, values: &[u16]) -> bool {
        let t = &self.table;
        let mut acc = 0u16;
        for o in &self.complex.perimeters()[pid] {
            let v = values[o.edge.0];
            let v = if o.reversed { t.inv[v as usize] } else { v };
            acc = t.mul(acc, v);
        }
        acc == 0
    }

    /// Every tree-normal cocycle (as edge-indexed element indices), in
    /// lexicographic order of the free values. When `reps_only`, keeps only
    /// the lexicographically least member of each conjugation class.
    pub fn run(&self, reps_only: bool) -> Vec<Vec<u16>> {
        let mut values = vec![0u16; self.complex.n_edges()];
        let mut out = Vec::new();
        if self.free.is_empty() {
            if self.checks[0].iter().all(|&p| self.polygon_ok(p, &values)) {
                out.push(values);
            }
            return out;
        }
        self.dfs(0, &mut values, &mut out, reps_only);
        out
    }

    fn dfs(&self, k: usize, values: &mut Vec<u16>, out: &mut Vec<Vec<u16>>, reps_only: bool) {
        if k == self.free.len() {
            if !reps_only || self.is_canonical(values) {
                out.push(values.clone());
            }
            return;
        }
        for g in 0..self.table.size() as u16 {
            values[self.free[k]] = g;
            if self.checks[k].iter().all(|&p| self.polygon_ok(p, values)) {
                self.dfs(k + 1, values, out, reps_only);
            }
        }
        values[self.free[k]] = 0;
    }

    fn is_canonical(&self, values: &[u16]) -> bool {
        let t = &self.table;
        for g in 1..t.size() as u16 {
            for &e in &self.free {
                let c = t.conj(values[e], g);
                if c != values[e] {
                    if c < values[e] {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }

    pub fn to_perms(&self, values: &[u16]) -> Vec<Permutation> {
        values.iter().map(|&v| self.table.elems[v as usize].clone()).collect()
    }
}
