//! 0-, 1- and 2-cochains with `Sym(n)` coefficients.
//!
//! A 1-cochain stores one value per edge in the edge's stored direction;
//! the reversed edge carries the inverse. Coboundaries:
//! `delta0(b)(x -> y) = b(x)^-1 b(y)` and `delta1(a)(pi) = a(e_1) .. a(e_l)`.
//! The action of 0-cochains is `(b.a)(x -> y) = b(x)^-1 a(e) b(y)`.
//!
//! Norms and distances are expectations of the normalized Hamming distance
//! under the complex's measures. Exact values are [`Rational`].

pub mod f2;
mod io;

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::complex::{Complex, OrientedEdge, OrientedPolygon, PolygonId, SpanningTree, VertexId};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::search::{random_permutation, CocycleEnumerator, OrbitProblem};
use crate::{Rational, EXACT_LIMIT};

pub use io::{load_cochain, save_cochain, CochainFile, Coefficient};

/// Seed for local-search restarts.
pub const LOCAL_SEARCH_SEED: u64 = 0xC0B0;

fn same_complex(a: &Arc<Complex>, b: &Arc<Complex>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::ComplexMismatch)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain0 {
    complex: Arc<Complex>,
    degree: usize,
    values: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    complex: Arc<Complex>,
    degree: usize,
    values: Vec<Permutation>,
}

/// Values at the canonical orientation of each polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    complex: Arc<Complex>,
    degree: usize,
    values: Vec<Permutation>,
}

fn check_values(values: &[Permutation], len: usize, what: &str) -> Result<usize> {
    if values.len() != len {
        return Err(Error::InvalidArgument(format!("{what} needs {len} values, got {}", values.len())));
    }
    let degree = values.first().map(|p| p.degree()).unwrap_or(1);
    if let Some(p) = values.iter().find(|p| p.degree() != degree) {
        return Err(Error::DegreeMismatch(degree, p.degree()));
    }
    Ok(degree)
}

/// Exact expectation of `d_h(x_i, y_i)` under integer weights.
fn expectation(weights: &[u64], total: u64, xs: &[Permutation], ys: &[Permutation]) -> Rational {
    if total == 0 {
        return Rational::from_integer(0);
    }
    xs.iter()
        .zip(ys)
        .zip(weights)
        .map(|((x, y), &w)| x.hamming_exact(y) * Rational::new(w as i128, total as i128))
        .sum()
}

fn cost_ratio(cost: u128, denominator: u128) -> Rational {
    if denominator == 0 {
        return Rational::from_integer(0);
    }
    Rational::new(cost as i128, denominator as i128)
}

fn norm_of(weights: &[u64], total: u64, xs: &[Permutation]) -> Rational {
    if total == 0 || xs.is_empty() {
        return Rational::from_integer(0);
    }
    let n = xs[0].degree();
    let num: u128 = weights.iter().zip(xs).map(|(&w, x)| w as u128 * (n - x.fixed_points()) as u128).sum();
    Rational::new(num as i128, total as i128 * n as i128)
}

impl Cochain0 {
    pub fn new(complex: Arc<Complex>, values: Vec<Permutation>) -> Result<Self> {
        let degree = check_values(&values, complex.n_vertices(), "0-cochain")?;
        Ok(Cochain0 { complex, degree, values })
    }

    pub fn identity(complex: Arc<Complex>, n: usize) -> Self {
        let values = vec![Permutation::identity(n); complex.n_vertices()];
        Cochain0 { complex, degree: n, values }
    }

    pub fn constant(complex: Arc<Complex>, g: Permutation) -> Self {
        let values = vec![g.clone(); complex.n_vertices()];
        Cochain0 { complex, degree: g.degree(), values }
    }

    pub fn random(complex: Arc<Complex>, n: usize, rng: &mut impl Rng) -> Self {
        let values = (0..complex.n_vertices()).map(|_| random_permutation(n, rng)).collect();
        Cochain0 { complex, degree: n, values }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Permutation] {
        &self.values
    }

    pub fn value(&self, v: VertexId) -> &Permutation {
        &self.values[v.0]
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Cochain0 {
        Cochain0 { values: self.values.iter().map(Permutation::inverse).collect(), ..self.clone() }
    }

    /// Pointwise product `x -> self(x) other(x)`.
    pub fn pointwise(&self, other: &Cochain0) -> Result<Cochain0> {
        same_complex(&self.complex, &other.complex)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.compose(b)).collect::<Result<_>>()?;
        Ok(Cochain0 { values, ..self.clone() })
    }

    /// `delta0(b)(x -> y) = b(x)^-1 b(y)`.
    pub fn delta(&self) -> Cochain1 {
        let values = self
            .complex
            .edges()
            .iter()
            .map(|e| self.values[e.src.0].inverse().compose_unchecked(&self.values[e.dst.0]))
            .collect();
        Cochain1 { complex: self.complex.clone(), degree: self.degree, values }
    }

    pub fn norm_exact(&self) -> Rational {
        let m = &self.complex.measures().mu0;
        norm_of(m.weights(), m.total(), &self.values)
    }

    pub fn norm(&self) -> f64 {
        crate::to_f64(&self.norm_exact())
    }
}

/// Result of a distance minimization over an orbit or a set of cocycles.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    /// Distance achieved by `nearest`.
    pub distance: Rational,
    /// Whether `distance` is the exact minimum (otherwise an upper bound).
    pub exact: bool,
    /// The 0-cochain realizing `nearest` from the orbit representative.
    pub beta: Cochain0,
    pub nearest: Cochain1,
}

impl DistanceResult {
    pub fn value(&self) -> f64 {
        crate::to_f64(&self.distance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exact,
    /// Coordinate descent; the result is an upper bound.
    LocalSearch,
}

impl Cochain1 {
    pub fn new(complex: Arc<Complex>, values: Vec<Permutation>) -> Result<Self> {
        let degree = check_values(&values, complex.n_edges(), "1-cochain")?;
        Ok(Cochain1 { complex, degree, values })
    }

    /// Values on edges, with the degree given explicitly (for edgeless complexes).
    pub fn with_degree(complex: Arc<Complex>, n: usize, values: Vec<Permutation>) -> Result<Self> {
        if values.is_empty() && complex.n_edges() == 0 {
            return Ok(Cochain1 { complex, degree: n, values });
        }
        let c = Self::new(complex, values)?;
        if c.degree != n {
            return Err(Error::DegreeMismatch(n, c.degree));
        }
        Ok(c)
    }

    pub fn identity(complex: Arc<Complex>, n: usize) -> Self {
        let values = vec![Permutation::identity(n); complex.n_edges()];
        Cochain1 { complex, degree: n, values }
    }

    pub fn random(complex: Arc<Complex>, n: usize, rng: &mut impl Rng) -> Self {
        let values = (0..complex.n_edges()).map(|_| random_permutation(n, rng)).collect();
        Cochain1 { complex, degree: n, values }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Permutation] {
        &self.values
    }

    pub fn value(&self, e: crate::complex::EdgeId) -> &Permutation {
        &self.values[e.0]
    }

    pub fn with_value(&self, e: crate::complex::EdgeId, p: Permutation) -> Result<Cochain1> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, p.degree()));
        }
        let mut c = self.clone();
        c.values[e.0] = p;
        Ok(c)
    }

    /// Value on an oriented edge: the inverse when traversed backwards.
    pub fn on(&self, o: OrientedEdge) -> Permutation {
        let v = &self.values[o.edge.0];
        if o.reversed { v.inverse() } else { v.clone() }
    }

    /// Ordered product along a path; the empty path gives the identity.
    pub fn evaluate_path(&self, path: &[OrientedEdge]) -> Result<Permutation> {
        for w in path.windows(2) {
            if w[0].dst != w[1].src {
                return Err(Error::InvalidArgument(format!(
                    "path steps {:?} and {:?} are not consecutive",
                    w[0].edge, w[1].edge
                )));
            }
        }
        Ok(self.eval_unchecked(path))
    }

    pub(crate) fn eval_unchecked(&self, path: &[OrientedEdge]) -> Permutation {
        path.iter()
            .fold(Permutation::identity(self.degree), |acc, &o| acc.compose_unchecked(&self.on(o)))
    }

    pub fn evaluate_polygon(&self, p: &OrientedPolygon) -> Permutation {
        self.eval_unchecked(&p.perimeter)
    }

    /// `delta1(a)(pi) = a(e_1) .. a(e_l)` at each canonical perimeter.
    pub fn delta(&self) -> Cochain2 {
        let values = self.complex.perimeters().iter().map(|per| self.eval_unchecked(per)).collect();
        Cochain2 { complex: self.complex.clone(), degree: self.degree, values }
    }

    pub fn norm_exact(&self) -> Rational {
        let m = &self.complex.measures().mu1;
        norm_of(m.weights(), m.total(), &self.values)
    }

    pub fn norm(&self) -> f64 {
        crate::to_f64(&self.norm_exact())
    }

    /// Expected normalized Hamming distance; cross-degree values use the
    /// larger degree as denominator.
    pub fn distance_exact(&self, other: &Cochain1) -> Result<Rational> {
        same_complex(&self.complex, &other.complex)?;
        let m = &self.complex.measures().mu1;
        Ok(expectation(m.weights(), m.total(), &self.values, &other.values))
    }

    pub fn distance(&self, other: &Cochain1) -> Result<f64> {
        Ok(crate::to_f64(&self.distance_exact(other)?))
    }

    /// `(b.a)(x -> y) = b(x)^-1 a(e) b(y)`.
    pub fn act(&self, b: &Cochain0) -> Result<Cochain1> {
        same_complex(&self.complex, &b.complex)?;
        if b.degree != self.degree {
            return Err(Error::DegreeMismatch(b.degree, self.degree));
        }
        let values = self
            .complex
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(e, a)| b.values[e.src.0].inverse().compose_unchecked(a).compose_unchecked(&b.values[e.dst.0]))
            .collect();
        Ok(Cochain1 { complex: self.complex.clone(), degree: self.degree, values })
    }

    pub fn is_cocycle(&self) -> bool {
        self.complex.perimeters().iter().all(|per| self.eval_unchecked(per).is_identity())
    }

    /// Lemma-style normalization: `b(x)` is the value of the tree path from
    /// `x` to the root, so `b.a` is the identity on every tree edge.
    pub fn tree_normalize(&self, tree: &SpanningTree) -> Result<(Cochain0, Cochain1)> {
        let x = &self.complex;
        if tree.up.len() != x.n_vertices()
            || tree.in_tree.len() != x.n_edges()
            || (0..x.n_vertices()).any(|v| v != tree.root.0 && tree.up[v].is_none())
        {
            return Err(Error::InvalidArgument("tree does not span the complex".into()));
        }
        Ok(self.forest_normalize(std::slice::from_ref(tree)))
    }

    pub(crate) fn forest_normalize(&self, forest: &[SpanningTree]) -> (Cochain0, Cochain1) {
        let mut beta = vec![Permutation::identity(self.degree); self.complex.n_vertices()];
        for tree in forest {
            for &v in &tree.order {
                if let Some(up) = tree.up[v.0] {
                    beta[v.0] = self.on(up).compose_unchecked(&beta[up.dst.0]);
                }
            }
        }
        let b = Cochain0 { complex: self.complex.clone(), degree: self.degree, values: beta };
        let normal = self.act(&b).expect("same complex and degree");
        (b, normal)
    }

    /// Whether `a = delta0(b)` for some `b`: the tree-normal form is the
    /// identity cochain.
    pub fn is_coboundary_exact(&self) -> bool {
        let (_, normal) = self.forest_normalize(&self.complex.spanning_forest());
        normal.values.iter().all(Permutation::is_identity)
    }

    /// Whether the degree-`n` cover of the 1-skeleton defined by `a` is connected.
    pub fn is_connected_cochain(&self) -> bool {
        let x = &self.complex;
        let n = self.degree;
        let total = x.n_vertices() * n;
        if total == 0 {
            return false;
        }
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = queue.pop_front() {
            let (v, i) = (c / n, c % n);
            for &o in x.outgoing(VertexId(v)) {
                // lifts of e: x -> y join (x, a(e).i) and (y, i)
                let a = &self.values[o.edge.0];
                let j = if o.reversed { a.apply(i) } else { a.inverse().apply(i) };
                let next = o.dst.0 * n + j;
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    queue.push_back(next);
                }
            }
        }
        count == total
    }

    /// `d(a, B^1) = min_b ||b.a||`. `beta` is the minimizing `b` and
    /// `nearest = delta0(b^-1)`.
    pub fn dist_to_coboundaries(&self, mode: SearchMode) -> Result<DistanceResult> {
        self.dist_to_coboundaries_with(mode, EXACT_LIMIT)
    }

    pub fn dist_to_coboundaries_with(&self, mode: SearchMode, limit: f64) -> Result<DistanceResult> {
        let problem = OrbitProblem {
            complex: &self.complex,
            n: self.degree,
            left: vec![Permutation::identity(self.degree); self.complex.n_edges()],
            right: self.values.clone(),
            fix_roots: true,
        };
        let (sol, exact) = problem.solve(mode == SearchMode::Exact, limit, LOCAL_SEARCH_SEED)?;
        let beta = Cochain0 { complex: self.complex.clone(), degree: self.degree, values: sol.beta };
        let nearest = beta.inverse().delta();
        let distance = cost_ratio(sol.cost, problem.denominator());
        debug_assert_eq!(Some(distance), self.distance_exact(&nearest).ok());
        Ok(DistanceResult { distance, exact, beta, nearest })
    }

    /// `min_b d(self, b.z)`: distance to the orbit of `z`.
    pub fn dist_to_orbit(&self, z: &Cochain1, mode: SearchMode, limit: f64) -> Result<DistanceResult> {
        same_complex(&self.complex, &z.complex)?;
        if z.degree != self.degree {
            return Err(Error::DegreeMismatch(self.degree, z.degree));
        }
        let problem = OrbitProblem {
            complex: &self.complex,
            n: self.degree,
            left: self.values.clone(),
            right: z.values.clone(),
            fix_roots: false,
        };
        let (sol, exact) = problem.solve(mode == SearchMode::Exact, limit, LOCAL_SEARCH_SEED)?;
        let beta = Cochain0 { complex: self.complex.clone(), degree: self.degree, values: sol.beta };
        let nearest = z.act(&beta)?;
        let distance = cost_ratio(sol.cost, problem.denominator());
        debug_assert_eq!(Some(distance), self.distance_exact(&nearest).ok());
        Ok(DistanceResult { distance, exact, beta, nearest })
    }

    /// `d(a, Z^1)` within the fixed degree of `a`. Exact mode enumerates
    /// cocycle classes and minimizes over each orbit; local-search mode
    /// returns an upper bound from the same candidates (or from `B^1` alone
    /// when enumeration is too large).
    pub fn dist_to_cocycles(&self, mode: SearchMode) -> Result<DistanceResult> {
        self.dist_to_cocycles_with(mode, EXACT_LIMIT)
    }

    pub fn dist_to_cocycles_with(&self, mode: SearchMode, limit: f64) -> Result<DistanceResult> {
        if self.is_cocycle() {
            let beta = Cochain0::identity(self.complex.clone(), self.degree);
            return Ok(DistanceResult { distance: Rational::from_integer(0), exact: true, beta, nearest: self.clone() });
        }
        let reps = match CocycleEnumerator::new(&self.complex, self.degree, limit) {
            Ok(en) => Some(en.run(true).iter().map(|v| en.to_perms(v)).collect::<Vec<_>>()),
            Err(e) if mode == SearchMode::Exact => return Err(e),
            Err(_) => None,
        };
        let Some(reps) = reps else {
            let mut r = self.dist_to_coboundaries(SearchMode::LocalSearch)?;
            r.exact = false;
            return Ok(r);
        };
        let mut best: Option<DistanceResult> = None;
        for values in reps {
            let z = Cochain1 { complex: self.complex.clone(), degree: self.degree, values };
            let r = self.dist_to_orbit(&z, mode, limit)?;
            if best.as_ref().is_none_or(|b| r.distance < b.distance) {
                best = Some(r);
            }
        }
        let mut best = best.expect("the identity cocycle is always enumerated");
        best.exact = mode == SearchMode::Exact;
        Ok(best)
    }

    /// Whether `other = b.self` for some 0-cochain `b`; returns such a `b`.
    pub fn same_orbit(&self, other: &Cochain1) -> Result<Option<Cochain0>> {
        same_complex(&self.complex, &other.complex)?;
        if self.degree != other.degree {
            return Ok(None);
        }
        let forest = self.complex.spanning_forest();
        let (ba, za) = self.forest_normalize(&forest);
        let (bb, zb) = other.forest_normalize(&forest);
        // the stabilizer of tree-normal form is one constant per component
        let n = self.degree;
        if crate::search::factorial(n) > 1e6 {
            return Err(Error::guard("orbit comparison", crate::search::factorial(n), 1e6));
        }
        let group = crate::search::all_permutations(n);
        let x = &self.complex;
        let mut g_of = Vec::with_capacity(forest.len());
        for tree in &forest {
            let comp = x.component_of(tree.root);
            let edges: Vec<usize> = (0..x.n_edges()).filter(|&e| x.component_of(x.edge(crate::complex::EdgeId(e)).src) == comp).collect();
            let found = group.iter().find(|g| {
                let gi = g.inverse();
                edges.iter().all(|&e| gi.compose_unchecked(&za.values[e]).compose_unchecked(g) == zb.values[e])
            });
            match found {
                Some(g) => g_of.push(g.clone()),
                None => return Ok(None),
            }
        }
        let values = (0..x.n_vertices())
            .map(|v| {
                let g = &g_of[x.component_of(VertexId(v))];
                ba.values[v].compose_unchecked(g).compose_unchecked(&bb.values[v].inverse())
            })
            .collect();
        let beta = Cochain0 { complex: self.complex.clone(), degree: n, values };
        debug_assert_eq!(&self.act(&beta)?, other);
        Ok(Some(beta))
    }
}

impl Cochain2 {
    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Permutation] {
        &self.values
    }

    pub fn value(&self, p: PolygonId) -> &Permutation {
        &self.values[p.0]
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(Permutation::is_identity)
    }

    pub fn norm_exact(&self) -> Rational {
        let m = &self.complex.measures().mu2;
        norm_of(m.weights(), m.total(), &self.values)
    }

    pub fn norm(&self) -> f64 {
        crate::to_f64(&self.norm_exact())
    }
}

#[cfg(test)]
mod tests;
