//! Cheeger constants and cosystoles.
//!
//! `h_i = inf ||delta a|| / d(a, Z^i)` over non-cocycles and
//! `hB_i = inf ||delta a|| / d(a, B^i)` over non-coboundaries. F2 values
//! are exact over bit masks; `Sym(n)` values are exact per degree and
//! reported as the minimum over the tested degrees (truncated at `n_max`).
//! Ratios are compared by integer cross-multiplication.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::{Cochain1, CochainFile, Coefficient, SearchMode};
use crate::complex::Complex;
use crate::covering::{covering_from_cochain, enumerate_cocycles, enumerate_cocycles_with, h1_vanishes_at_level};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::report::{Exact, Value};
use crate::search::{factorial, random_permutation, SymTable};
use crate::{Rational, EXACT_LIMIT};

/// Largest vertex or edge count for bit-mask enumeration.
pub const MASK_LIMIT: usize = 24;

/// Sampled cochains per degree when exhaustive enumeration is too large.
pub const SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantKind {
    #[serde(rename = "h0")]
    H0,
    #[serde(rename = "h1")]
    H1,
    #[serde(rename = "hB0")]
    HB0,
    #[serde(rename = "hB1")]
    HB1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum H0Mode {
    Exact,
    Sweep,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeEntry {
    pub degree: usize,
    pub value: Value,
    /// Whether `value` is the exact degree-`n` constant (otherwise a witnessed upper bound).
    pub exact: bool,
    pub evaluated: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedDegree {
    pub degree: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    /// Cochains (or cosets) whose ratio was evaluated.
    pub evaluated: u64,
    /// Cochains skipped because the ratio is undefined there.
    pub excluded: u64,
}

/// The cochain realizing a reported ratio.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Indicator of a vertex set (F2 0-cochain).
    Vertices(Vec<bool>),
    Edges(Cochain1),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerReport {
    pub kind: ConstantKind,
    pub coefficient: String,
    pub n_max: Option<usize>,
    pub value: Value,
    /// Set for `Sym` coefficients: the infimum ranges over tested degrees only.
    pub truncated: bool,
    pub per_degree: Vec<DegreeEntry>,
    pub skipped: Vec<SkippedDegree>,
    pub witness: Option<CochainFile>,
    pub witness_ratio: Option<Exact>,
    /// For hB: whether `h = hB` is implied by vanishing cohomology at all tested degrees.
    pub equals_cocycle_constant: Option<bool>,
    pub stats: SearchStats,
    #[serde(skip)]
    pub witness_cochain: Option<Witness>,
    #[serde(skip)]
    pub exact_value: Option<Rational>,
}

impl CheegerReport {
    fn new(kind: ConstantKind, coefficient: &str, n_max: Option<usize>) -> Self {
        CheegerReport {
            kind,
            coefficient: coefficient.into(),
            n_max,
            value: Value::Infinite,
            truncated: n_max.is_some(),
            per_degree: Vec::new(),
            skipped: Vec::new(),
            witness: None,
            witness_ratio: None,
            equals_cocycle_constant: None,
            stats: SearchStats::default(),
            witness_cochain: None,
            exact_value: None,
        }
    }

    fn set_witness(&mut self, ratio: Rational, w: Witness) {
        self.witness_ratio = Some(ratio.into());
        self.witness = Some(match &w {
            Witness::Vertices(bits) => CochainFile {
                coefficient: Coefficient::F2,
                values: bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i.to_string(), 1.into())).collect(),
            },
            Witness::Edges(a) => {
                let c = if self.coefficient == "f2" { Coefficient::F2 } else { Coefficient::Sym(a.degree()) };
                CochainFile::from_cochain1(a, c)
            }
        });
        self.witness_cochain = Some(w);
    }
}

fn ratio(num: u128, num_total: u64, den: u128, den_total: u64) -> Rational {
    Rational::new((num * den_total as u128) as i128, (den * num_total as u128) as i128)
}

/// `a / b < c / d` for positive denominators.
fn less(a: u128, b: u128, c: u128, d: u128) -> bool {
    a * d < c * b
}

fn gray_flip(i: u64) -> usize {
    i.trailing_zeros() as usize
}

// ---------------------------------------------------------------- h0

/// `min_B ||delta 1_B|| / min(mu0(B), 1 - mu0(B))` over nonempty proper `B`.
pub fn h0_f2(x: &Complex, mode: H0Mode) -> Result<CheegerReport> {
    let mut rep = CheegerReport::new(ConstantKind::H0, "f2", None);
    let nv = x.n_vertices();
    if nv < 2 {
        return Ok(rep);
    }
    if !x.is_connected() {
        let comp: Vec<bool> = (0..nv).map(|v| x.component_of(crate::complex::VertexId(v)) == 0).collect();
        rep.value = Value::exact(Rational::from_integer(0));
        rep.exact_value = Some(Rational::from_integer(0));
        rep.set_witness(Rational::from_integer(0), Witness::Vertices(comp));
        return Ok(rep);
    }
    match mode {
        H0Mode::Exact => h0_exact(x, &mut rep)?,
        H0Mode::Sweep => h0_sweep(x, &mut rep)?,
    }
    Ok(rep)
}

fn h0_exact(x: &Complex, rep: &mut CheegerReport) -> Result<()> {
    let nv = x.n_vertices();
    if nv > MASK_LIMIT {
        return Err(Error::guard(format!("exact h0 over {nv} vertices"), 2f64.powi(nv as i32 - 1), 2f64.powi(MASK_LIMIT as i32 - 1)));
    }
    let m = x.measures();
    let (w0, w1) = (m.mu0.weights(), m.mu1.weights());
    let t0 = m.mu0.total();
    let mut incident: Vec<Vec<(usize, u64)>> = vec![Vec::new(); nv];
    for (e, edge) in x.edges().iter().enumerate() {
        if !edge.is_loop() {
            incident[edge.src.0].push((edge.dst.0, w1[e]));
            incident[edge.dst.0].push((edge.src.0, w1[e]));
        }
    }
    // subsets of {1..nv-1}; B and its complement give the same ratio
    let mut in_b = vec![false; nv];
    let (mut cut, mut mass) = (0u128, 0u128);
    let mut best: Option<(u128, u128, Vec<bool>)> = None;
    let mut evaluated = 0u64;
    let mut excluded = 0u64;
    for i in 1u64..1 << (nv - 1) {
        let v = gray_flip(i) + 1;
        for &(u, w) in &incident[v] {
            if in_b[u] == in_b[v] {
                cut += w as u128;
            } else {
                cut -= w as u128;
            }
        }
        in_b[v] = !in_b[v];
        if in_b[v] {
            mass += w0[v] as u128;
        } else {
            mass -= w0[v] as u128;
        }
        let den = mass.min(t0 as u128 - mass);
        if den == 0 {
            excluded += 1;
            continue;
        }
        evaluated += 1;
        if best.as_ref().is_none_or(|(c, d, _)| less(cut, den, *c, *d)) {
            best = Some((cut, den, in_b.clone()));
        }
    }
    rep.stats = SearchStats { evaluated, excluded };
    if let Some((c, d, b)) = best {
        let r = ratio(c, m.mu1.total(), d, t0);
        rep.value = Value::exact(r);
        rep.exact_value = Some(r);
        rep.set_witness(r, Witness::Vertices(b));
    }
    Ok(())
}

/// Exact `h0` ratio of one vertex set; `None` when the denominator vanishes.
pub fn h0_ratio(x: &Complex, set: &[bool]) -> Option<Rational> {
    let m = x.measures();
    let cut: u128 = x
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| set[e.src.0] != set[e.dst.0])
        .map(|(i, _)| m.mu1.weights()[i] as u128)
        .sum();
    let mass: u128 = (0..x.n_vertices()).filter(|&v| set[v]).map(|v| m.mu0.weights()[v] as u128).sum();
    let den = mass.min(m.mu0.total() as u128 - mass);
    (den > 0).then(|| ratio(cut, m.mu1.total(), den, m.mu0.total()))
}

fn h0_sweep(x: &Complex, rep: &mut CheegerReport) -> Result<()> {
    let nv = x.n_vertices();
    let spec = crate::spectral::graph_spectrum(x)?;
    let f: Vec<f64> = (0..nv).map(|v| spec.vectors[1][v] / spec.degree_weights[v].sqrt()).collect();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let mut set = vec![false; nv];
    let mut best: Option<(Rational, Vec<bool>)> = None;
    for &v in &order[..nv - 1] {
        set[v] = true;
        rep.stats.evaluated += 1;
        if let Some(r) = h0_ratio(x, &set) {
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, set.clone()));
            }
        }
    }
    let lower = x.is_descending(0).then(|| 1.0 - spec.eigenvalues[1]);
    let upper = best.as_ref().map(|(r, _)| crate::to_f64(r));
    rep.value = Value::Interval { lower, upper };
    if let Some((r, s)) = best {
        rep.set_witness(r, Witness::Vertices(s));
    }
    Ok(())
}

// ---------------------------------------------------------------- F2, dimension 1

struct F2Masks {
    /// Edge mask of each polygon boundary (edges used an odd number of times).
    polygons: Vec<u64>,
    w1: Vec<u64>,
    w2: Vec<u64>,
    t1: u64,
    t2: u64,
}

impl F2Masks {
    fn new(x: &Complex) -> Result<Self> {
        let ne = x.n_edges();
        if ne > MASK_LIMIT {
            return Err(Error::guard(format!("F2 search over {ne} edges"), 2f64.powi(ne as i32), 2f64.powi(MASK_LIMIT as i32)));
        }
        let polygons = x.perimeters().iter().map(|per| per.iter().fold(0u64, |m, o| m ^ 1 << o.edge.0)).collect();
        let m = x.measures();
        Ok(F2Masks {
            polygons,
            w1: m.mu1.weights().to_vec(),
            w2: m.mu2.weights().to_vec(),
            t1: m.mu1.total(),
            t2: m.mu2.total(),
        })
    }

    fn edge_weight(&self, a: u64) -> u128 {
        (0..self.w1.len()).filter(|&e| a >> e & 1 == 1).map(|e| self.w1[e] as u128).sum()
    }

    fn defect(&self, a: u64) -> u128 {
        self.polygons
            .iter()
            .zip(&self.w2)
            .filter(|(p, _)| (*p & a).count_ones() % 2 == 1)
            .map(|(_, &w)| w as u128)
            .sum()
    }
}

/// Reduced echelon basis (as masks) of the span of `rows`, with pivots.
fn mask_basis(rows: &[u64], ncols: usize) -> (Vec<u64>, Vec<usize>) {
    let words: Vec<Vec<u64>> = rows.iter().map(|&r| vec![r]).collect();
    let (red, pivots) = crate::f2::rref(words, ncols.max(1));
    (red.into_iter().map(|w| w[0]).collect(), pivots)
}

/// For each coset of `span(basis)`: the rep supported off the pivots and
/// the least weight in the coset, over all `2^ncols` vectors.
fn coset_min_weights(m: &F2Masks, basis: &[u64], pivots: &[usize], ncols: usize) -> Vec<(u64, u128)> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let n_cosets = 1u64 << free.len();
    (0..n_cosets)
        .into_par_iter()
        .map(|code| {
            let rep = free.iter().enumerate().filter(|(k, _)| code >> k & 1 == 1).fold(0u64, |a, (_, &c)| a | 1 << c);
            let mut v = rep;
            let mut best = m.edge_weight(v);
            for i in 1u64..1 << basis.len() {
                v ^= basis[gray_flip(i)];
                best = best.min(m.edge_weight(v));
            }
            (rep, best)
        })
        .collect()
}

fn f2_search(x: &Arc<Complex>, kind: ConstantKind, subspace: &[u64]) -> Result<CheegerReport> {
    let m = F2Masks::new(x)?;
    let ne = x.n_edges();
    let (basis, pivots) = mask_basis(subspace, ne);
    let cosets = coset_min_weights(&m, &basis, &pivots, ne);
    let mut rep = CheegerReport::new(kind, "f2", None);
    let mut best: Option<(u128, u128, u64)> = None;
    for &(a, den) in &cosets {
        if den == 0 {
            rep.stats.excluded += 1;
            continue;
        }
        rep.stats.evaluated += 1;
        let num = m.defect(a);
        if best.is_none_or(|(bn, bd, _)| less(num, den, bn, bd)) {
            best = Some((num, den, a));
        }
    }
    if let Some((num, den, a)) = best {
        let r = ratio(num, m.t2, den, m.t1);
        rep.value = Value::exact(r);
        rep.exact_value = Some(r);
        let bits: Vec<bool> = (0..ne).map(|e| a >> e & 1 == 1).collect();
        let w = crate::cochain::f2::F2Cochain::from_bits(x.clone(), 1, &bits)?.to_sym1()?;
        rep.set_witness(r, Witness::Edges(w));
    }
    Ok(rep)
}

/// `h1(X, F2)`: cosets of `Z^1 = ker delta1`, each with its least weight.
pub fn h1_f2_exact(x: &Arc<Complex>) -> Result<CheegerReport> {
    let m = F2Masks::new(x)?;
    let ne = x.n_edges();
    let rows: Vec<Vec<u64>> = m.polygons.iter().map(|&p| vec![p]).collect();
    let z1: Vec<u64> = crate::f2::kernel_basis(rows, ne.max(1)).into_iter().map(|b| b.words()[0]).collect();
    f2_search(x, ConstantKind::H1, &z1)
}

fn coboundary_rows(x: &Complex) -> Vec<u64> {
    (0..x.n_vertices())
        .map(|v| {
            x.edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_loop() && (e.src.0 == v || e.dst.0 == v))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

// ---------------------------------------------------------------- Sym(n), dimension 1

/// Tree-normal 1-cochains of one degree, one per simultaneous-conjugation
/// class: every cochain is in the 0-cochain orbit of one of them.
struct NormalForms {
    table: SymTable,
    free: Vec<usize>,
    n_edges: usize,
}

impl NormalForms {
    fn new(x: &Complex, n: usize) -> Result<Self> {
        let tree = x.spanning_tree(crate::complex::VertexId(0))?;
        let free = (0..x.n_edges()).filter(|&e| !tree.in_tree[e]).collect();
        Ok(NormalForms { table: SymTable::new(n)?, free, n_edges: x.n_edges() })
    }

    fn count(&self) -> f64 {
        (self.table.size() as f64).powi(self.free.len() as i32)
    }

    fn decode(&self, mut code: u64) -> Vec<u16> {
        let s = self.table.size() as u64;
        self.free
            .iter()
            .map(|_| {
                let v = (code % s) as u16;
                code /= s;
                v
            })
            .collect()
    }

    fn is_canonical(&self, vals: &[u16]) -> bool {
        let t = &self.table;
        (1..t.size() as u16).all(|g| {
            for &v in vals {
                let c = t.conj(v, g);
                if c != v {
                    return c > v;
                }
            }
            true
        })
    }

    fn cochain(&self, x: &Arc<Complex>, vals: &[u16]) -> Result<Cochain1> {
        let n = self.table.n;
        let mut values = vec![Permutation::identity(n); self.n_edges];
        for (&e, &v) in self.free.iter().zip(vals) {
            values[e] = self.table.elems[v as usize].clone();
        }
        Cochain1::with_degree(x.clone(), n, values)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Cocycles,
    Coboundaries,
}

/// Exact ratio `||delta a|| / d(a, target)`, `None` when undefined.
fn sym_ratio(a: &Cochain1, target: Target, reps: &[Cochain1]) -> Result<Option<Rational>> {
    let num = a.delta().norm_exact();
    let den = match target {
        Target::Cocycles => {
            if a.is_cocycle() {
                return Ok(None);
            }
            let mut best: Option<Rational> = None;
            for z in reps {
                let d = a.dist_to_orbit(z, SearchMode::Exact, EXACT_LIMIT)?.distance;
                best = Some(best.map_or(d, |b| b.min(d)));
            }
            best.expect("the identity cocycle is a representative")
        }
        Target::Coboundaries => a.dist_to_coboundaries(SearchMode::Exact)?.distance,
    };
    Ok((den != Rational::from_integer(0)).then(|| num / den))
}

struct DegreeResult {
    entry: DegreeEntry,
    best: Option<(Rational, Cochain1)>,
}

fn sym_degree(x: &Arc<Complex>, n: usize, target: Target, seed: u64) -> Result<DegreeResult> {
    let forms = NormalForms::new(x, n)?;
    let reps = match target {
        Target::Cocycles => enumerate_cocycles(x, n)?,
        Target::Coboundaries => Vec::new(),
    };
    let exhaustive = forms.count() <= EXACT_LIMIT;
    let candidates: Vec<Cochain1> = if exhaustive {
        (0..forms.count() as u64)
            .map(|c| forms.decode(c))
            .filter(|v| forms.is_canonical(v))
            .map(|v| forms.cochain(x, &v))
            .collect::<Result<_>>()?
    } else {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        (0..SAMPLES)
            .map(|_| {
                let values = (0..x.n_edges()).map(|_| random_permutation(n, &mut rng)).collect();
                Cochain1::with_degree(x.clone(), n, values)
            })
            .collect::<Result<_>>()?
    };
    let ratios: Vec<Option<Rational>> =
        candidates.par_iter().map(|a| sym_ratio(a, target, &reps)).collect::<Result<_>>()?;
    let mut best: Option<(Rational, usize)> = None;
    let mut evaluated = 0;
    for (i, r) in ratios.iter().enumerate() {
        if let Some(r) = r {
            evaluated += 1;
            if best.is_none_or(|(b, _)| *r < b) {
                best = Some((*r, i));
            }
        }
    }
    let value = match (best, exhaustive) {
        (Some((r, _)), true) => Value::exact(r),
        (Some((r, _)), false) => Value::Interval { lower: None, upper: Some(crate::to_f64(&r)) },
        (None, _) => Value::Infinite,
    };
    Ok(DegreeResult {
        entry: DegreeEntry { degree: n, value, exact: exhaustive, evaluated },
        best: best.map(|(r, i)| (r, candidates[i].clone())),
    })
}

fn sym_search(x: &Arc<Complex>, kind: ConstantKind, target: Target, n_max: usize, seed: u64) -> Result<CheegerReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    if !x.is_connected() {
        return Err(Error::Disconnected { components: x.n_components() });
    }
    let mut rep = CheegerReport::new(kind, "sym", Some(n_max));
    let mut best: Option<(Rational, Cochain1, bool)> = None;
    for n in 2..=n_max {
        match sym_degree(x, n, target, seed) {
            Ok(d) => {
                rep.stats.evaluated += d.entry.evaluated;
                if let Some((r, a)) = d.best {
                    if best.as_ref().is_none_or(|(b, _, _)| r < *b) {
                        best = Some((r, a, d.entry.exact));
                    }
                }
                rep.per_degree.push(d.entry);
            }
            Err(Error::SizeGuard { what, required, limit }) => rep.skipped.push(SkippedDegree {
                degree: n,
                reason: format!("{what} needs {required:.3e} candidates (limit {limit:.0e})"),
            }),
            Err(e) => return Err(e),
        }
    }
    let all_exact = rep.skipped.is_empty() && rep.per_degree.iter().all(|d| d.exact);
    if let Some((r, a, _)) = best {
        rep.value = if all_exact {
            rep.exact_value = Some(r);
            Value::exact(r)
        } else {
            Value::Interval { lower: None, upper: Some(crate::to_f64(&r)) }
        };
        rep.set_witness(r, Witness::Edges(a));
    } else if !all_exact {
        rep.value = Value::Interval { lower: None, upper: None };
    }
    Ok(rep)
}

/// `min_{2 <= n <= n_max} h1(X, Sym(n))`, each degree exact when the
/// tree-normal search fits the limit and witness-only (sampled) otherwise.
pub fn h1_sym_truncated(x: &Arc<Complex>, n_max: usize, seed: u64) -> Result<CheegerReport> {
    sym_search(x, ConstantKind::H1, Target::Cocycles, n_max, seed)
}

/// Coefficients for [`hb_variants`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheegerCoefficient {
    F2,
    Sym { n_max: usize },
}

/// Coboundary Cheeger constant in dimension 1. A non-coboundary cocycle
/// has ratio 0, so `hB = 0` whenever cohomology survives; when it vanishes
/// at every tested degree, `hB = h`.
pub fn hb_variants(x: &Arc<Complex>, coefficient: CheegerCoefficient, seed: u64) -> Result<CheegerReport> {
    match coefficient {
        CheegerCoefficient::F2 => {
            let mut rep = f2_search(x, ConstantKind::HB1, &coboundary_rows(x))?;
            rep.equals_cocycle_constant = Some(x.betti1_f2() == 0);
            Ok(rep)
        }
        CheegerCoefficient::Sym { n_max } => {
            let mut rep = sym_search(x, ConstantKind::HB1, Target::Coboundaries, n_max, seed)?;
            let mut vanish = true;
            for n in 2..=n_max {
                vanish &= h1_vanishes_at_level(x, n).map(|l| l.vanishes).unwrap_or(false);
            }
            rep.equals_cocycle_constant = Some(vanish);
            Ok(rep)
        }
    }
}

/// `hB0` over F2: the same as `h0` with `B^0 = {0}`, i.e. `||delta a|| / ||a||`.
pub fn hb0_f2(x: &Complex) -> Result<CheegerReport> {
    let nv = x.n_vertices();
    if nv > MASK_LIMIT {
        return Err(Error::guard(format!("exact hB0 over {nv} vertices"), 2f64.powi(nv as i32), 2f64.powi(MASK_LIMIT as i32)));
    }
    let m = x.measures();
    let mut rep = CheegerReport::new(ConstantKind::HB0, "f2", None);
    let mut best: Option<(Rational, Vec<bool>)> = None;
    for mask in 1u64..1 << nv {
        let set: Vec<bool> = (0..nv).map(|v| mask >> v & 1 == 1).collect();
        let cut: u128 = x
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| set[e.src.0] != set[e.dst.0])
            .map(|(i, _)| m.mu1.weights()[i] as u128)
            .sum();
        let mass: u128 = (0..nv).filter(|&v| set[v]).map(|v| m.mu0.weights()[v] as u128).sum();
        if mass == 0 {
            rep.stats.excluded += 1;
            continue;
        }
        rep.stats.evaluated += 1;
        let r = ratio(cut, m.mu1.total(), mass, m.mu0.total());
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, set));
        }
    }
    if let Some((r, s)) = best {
        rep.value = Value::exact(r);
        rep.exact_value = Some(r);
        rep.set_witness(r, Witness::Vertices(s));
    }
    Ok(rep)
}

// ---------------------------------------------------------------- cosystoles

#[derive(Clone, Debug, Serialize)]
pub struct CosystoleDegree {
    pub degree: usize,
    pub classes: usize,
    pub connected_non_coboundary: usize,
    pub min_norm: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosystoleReport {
    pub n_max: usize,
    pub value: Value,
    pub witness: Option<CochainFile>,
    pub per_degree: Vec<CosystoleDegree>,
    #[serde(skip)]
    pub witness_cochain: Option<Cochain1>,
    #[serde(skip)]
    pub exact_value: Option<Rational>,
}

/// `min ||a||` over connected non-coboundary cocycles of degree `2..=n_max`.
/// Each class contributes the least norm in its orbit, `d(z, B^1)`.
pub fn cosystole_sym(x: &Arc<Complex>, n_max: usize) -> Result<CosystoleReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    let mut per_degree = Vec::new();
    let mut best: Option<(Rational, Cochain1)> = None;
    for n in 2..=n_max {
        let reps = enumerate_cocycles(x, n)?;
        let useful: Vec<&Cochain1> =
            reps.iter().filter(|z| z.is_connected_cochain() && !z.is_coboundary_exact()).collect();
        let found: Vec<(Rational, Cochain1)> = useful
            .par_iter()
            .map(|z| {
                let r = z.dist_to_coboundaries(SearchMode::Exact)?;
                Ok((r.distance, z.act(&r.beta)?))
            })
            .collect::<Result<_>>()?;
        let local = found.iter().min_by(|a, b| a.0.cmp(&b.0)).cloned();
        per_degree.push(CosystoleDegree {
            degree: n,
            classes: reps.len(),
            connected_non_coboundary: useful.len(),
            min_norm: local.as_ref().map_or(Value::Infinite, |(r, _)| Value::exact(*r)),
        });
        if let Some((r, a)) = local {
            debug_assert_eq!(a.norm_exact(), r);
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, a));
            }
        }
    }
    Ok(CosystoleReport {
        n_max,
        value: best.as_ref().map_or(Value::Infinite, |(r, _)| Value::exact(*r)),
        witness: best.as_ref().map(|(_, a)| CochainFile::from_cochain1(a, Coefficient::Sym(a.degree()))),
        per_degree,
        exact_value: best.as_ref().map(|(r, _)| *r),
        witness_cochain: best.map(|(_, a)| a),
    })
}

/// `||a||` against `h0` of the cover of `a`, for a connected cocycle `a`.
#[derive(Clone, Debug, Serialize)]
pub struct CoverExpansionCheck {
    pub norm: Exact,
    pub h0_of_cover: Value,
    pub holds: bool,
    #[serde(skip)]
    pub norm_exact: Rational,
    #[serde(skip)]
    pub h0_exact: Option<Rational>,
}

pub fn verify_cover_expansion(a: &Cochain1) -> Result<CoverExpansionCheck> {
    if !a.is_cocycle() {
        return Err(Error::Precondition("the cochain is not a cocycle".into()));
    }
    if !a.is_connected_cochain() {
        return Err(Error::Precondition("the cochain is not connected".into()));
    }
    let y = covering_from_cochain(a).to_complex()?;
    let h0 = h0_f2(&y, H0Mode::Exact)?;
    let norm = a.norm_exact();
    let holds = match h0.exact_value {
        Some(h) => norm >= h / Rational::from_integer(2),
        None => true,
    };
    Ok(CoverExpansionCheck {
        norm: norm.into(),
        h0_of_cover: h0.value,
        holds,
        norm_exact: norm,
        h0_exact: h0.exact_value,
    })
}

/// Connected cocycle classes of degree `n` with their instance checks.
pub fn verify_cover_expansion_all(x: &Arc<Complex>, n: usize) -> Result<Vec<(Cochain1, CoverExpansionCheck)>> {
    enumerate_cocycles_with(x, n, EXACT_LIMIT)?
        .into_iter()
        .filter(|z| z.is_connected_cochain() && !z.is_coboundary_exact())
        .map(|z| {
            let c = verify_cover_expansion(&z)?;
            Ok((z, c))
        })
        .collect()
}

/// Edge-count guard for the full `Sym(n)` cochain space, `(n!)^|E|`.
pub fn full_search_size(x: &Complex, n: usize) -> f64 {
    factorial(n).powi(x.n_edges() as i32)
}
