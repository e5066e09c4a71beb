//! The dictionary between 1-cochains and covers of the 1-skeleton.
//!
//! The cover of `a: E -> Sym(n)` has vertices `(x, i)` and, for every edge
//! `e: x -> y` and level `i`, an edge `(e, i)` from `(x, a(e).i)` to
//! `(y, i)`. Cover vertex `(x, i)` has id `x * n + i` and cover edge
//! `(e, i)` has id `e * n + i`.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cochain::{Cochain0, Cochain1};
use crate::complex::{Complex, ComplexBuilder, ComplexFile, EdgeId, MeasureSpec, PolygonId, VertexId};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::search::CocycleEnumerator;
use crate::{Rational, EXACT_LIMIT};

/// One lift of a base polygon: the cover edges traversed from a start vertex
/// over the start of the canonical perimeter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonLift {
    pub polygon: PolygonId,
    pub start: usize,
    /// `(cover edge, reversed)` steps.
    pub steps: Vec<(usize, bool)>,
    pub closed: bool,
}

/// A finite cover of the 1-skeleton of a base complex.
#[derive(Clone, Debug)]
pub struct Covering {
    base: Arc<Complex>,
    degree: usize,
    vertex_proj: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    edge_proj: Vec<EdgeId>,
    lifts: Vec<PolygonLift>,
    component: Vec<usize>,
    n_components: usize,
}

/// Levels of a cover: `labels[v]` is the sheet of cover vertex `v`. Each
/// fiber must be labeled bijectively by `0..n`.
pub type FiberLabeling = Vec<usize>;

impl Covering {
    /// A cover given as an explicit graph over `base`. Validates the fibers
    /// and that every base edge lifts to a bijection between fibers.
    pub fn new(
        base: Arc<Complex>,
        vertex_proj: Vec<VertexId>,
        edges: Vec<(usize, usize)>,
        edge_proj: Vec<EdgeId>,
    ) -> Result<Self> {
        let nb = base.n_vertices();
        if nb == 0 || vertex_proj.len() % nb != 0 {
            return Err(Error::InvalidArgument(format!(
                "{} cover vertices do not form fibers over {nb} base vertices",
                vertex_proj.len()
            )));
        }
        let n = vertex_proj.len() / nb;
        let mut fiber_size = vec![0usize; nb];
        for &v in &vertex_proj {
            if v.0 >= nb {
                return Err(Error::InvalidArgument(format!("projection to missing vertex {}", v.0)));
            }
            fiber_size[v.0] += 1;
        }
        if let Some(x) = fiber_size.iter().position(|&s| s != n) {
            return Err(Error::InvalidArgument(format!(
                "fiber over vertex {x} has {} points, expected {n}",
                fiber_size[x]
            )));
        }
        if edges.len() != edge_proj.len() || edges.len() != n * base.n_edges() {
            return Err(Error::InvalidArgument(format!(
                "expected {} cover edges, got {}",
                n * base.n_edges(),
                edges.len()
            )));
        }
        let mut out_count = vec![vec![0usize; base.n_edges()]; vertex_proj.len()];
        let mut in_count = vec![vec![0usize; base.n_edges()]; vertex_proj.len()];
        for (&(s, d), &e) in edges.iter().zip(&edge_proj) {
            let be = base.edge(e);
            if s >= vertex_proj.len() || d >= vertex_proj.len() || vertex_proj[s] != be.src || vertex_proj[d] != be.dst {
                return Err(Error::InvalidArgument(format!(
                    "a lift of edge {} does not join the fibers over its endpoints",
                    e.0
                )));
            }
            out_count[s][e.0] += 1;
            in_count[d][e.0] += 1;
        }
        for (v, &x) in vertex_proj.iter().enumerate() {
            for (e, be) in base.edges().iter().enumerate() {
                let bad = (be.src == x && out_count[v][e] != 1) || (be.dst == x && in_count[v][e] != 1);
                if bad {
                    return Err(Error::InvalidArgument(format!(
                        "fiber over vertex {}: edge {e} does not lift to a bijection",
                        x.0
                    )));
                }
            }
        }
        let (component, n_components) = components(vertex_proj.len(), &edges);
        let mut c = Covering { base, degree: n, vertex_proj, edges, edge_proj, lifts: Vec::new(), component, n_components };
        c.lifts = c.compute_lifts();
        Ok(c)
    }

    fn compute_lifts(&self) -> Vec<PolygonLift> {
        let x = &self.base;
        // cover edges leaving / entering each cover vertex, by base edge
        let mut by_src = BTreeMap::new();
        let mut by_dst = BTreeMap::new();
        for (i, (&(s, d), &e)) in self.edges.iter().zip(&self.edge_proj).enumerate() {
            by_src.insert((s, e.0), i);
            by_dst.insert((d, e.0), i);
        }
        let mut lifts = Vec::new();
        for (pid, per) in x.perimeters().iter().enumerate() {
            let x0 = per[0].src;
            for start in self.fiber(x0) {
                let mut v = start;
                let mut steps = Vec::with_capacity(per.len());
                for o in per {
                    if o.reversed {
                        let i = by_dst[&(v, o.edge.0)];
                        steps.push((i, true));
                        v = self.edges[i].0;
                    } else {
                        let i = by_src[&(v, o.edge.0)];
                        steps.push((i, false));
                        v = self.edges[i].1;
                    }
                }
                lifts.push(PolygonLift { polygon: PolygonId(pid), start, steps, closed: v == start });
            }
        }
        lifts
    }

    pub fn base(&self) -> &Arc<Complex> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_proj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// `(src, dst)` of each cover edge.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_projection(&self) -> &[VertexId] {
        &self.vertex_proj
    }

    pub fn edge_projection(&self) -> &[EdgeId] {
        &self.edge_proj
    }

    pub fn lifts(&self) -> &[PolygonLift] {
        &self.lifts
    }

    /// Cover vertices over `x`, in increasing id order.
    pub fn fiber(&self, x: VertexId) -> Vec<usize> {
        (0..self.vertex_proj.len()).filter(|&v| self.vertex_proj[v] == x).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n_components <= 1
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    /// Whether every base polygon lifts to closed paths.
    pub fn polygons_close(&self) -> bool {
        self.lifts.iter().all(|l| l.closed)
    }

    /// The labeling that numbers each fiber in increasing id order.
    pub fn natural_labeling(&self) -> FiberLabeling {
        let mut next = vec![0usize; self.base.n_vertices()];
        self.vertex_proj
            .iter()
            .map(|x| {
                next[x.0] += 1;
                next[x.0] - 1
            })
            .collect()
    }

    /// `level[i]`: the cover vertices labeled `i`, indexed by base vertex.
    pub fn levels(&self, labels: &FiberLabeling) -> Result<Vec<Vec<usize>>> {
        self.check_labeling(labels)?;
        let mut levels = vec![vec![usize::MAX; self.base.n_vertices()]; self.degree];
        for (v, &i) in labels.iter().enumerate() {
            levels[i][self.vertex_proj[v].0] = v;
        }
        Ok(levels)
    }

    fn check_labeling(&self, labels: &FiberLabeling) -> Result<()> {
        if labels.len() != self.n_vertices() {
            return Err(Error::InvalidArgument(format!(
                "labeling has {} entries for {} cover vertices",
                labels.len(),
                self.n_vertices()
            )));
        }
        let mut seen = vec![vec![false; self.degree]; self.base.n_vertices()];
        for (v, &i) in labels.iter().enumerate() {
            let x = self.vertex_proj[v].0;
            if i >= self.degree || std::mem::replace(&mut seen[x][i], true) {
                return Err(Error::InvalidArgument(format!("fiber over vertex {x} is not labeled bijectively")));
            }
        }
        Ok(())
    }

    /// The same cover with vertex ids permuted: `(x, i)` becomes `(x, g(i))`
    /// on the fiber over `x`. Used to produce differently labeled copies.
    pub fn relabel_fiber(&self, x: VertexId, g: &Permutation) -> Result<Covering> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, g.degree()));
        }
        let fiber = self.fiber(x);
        let mut map: Vec<usize> = (0..self.n_vertices()).collect();
        for (i, &v) in fiber.iter().enumerate() {
            map[v] = fiber[g.apply(i)];
        }
        let edges = self.edges.iter().map(|&(s, d)| (map[s], map[d])).collect();
        Covering::new(self.base.clone(), self.vertex_proj.clone(), edges, self.edge_proj.clone())
    }

    /// The cochain read off the cover with the given labels: `a(e).i` is the
    /// label of the source of the lift of `e` ending at label `i`.
    pub fn to_cochain(&self, labels: &FiberLabeling) -> Result<Cochain1> {
        self.check_labeling(labels)?;
        let n = self.degree;
        let mut images = vec![vec![usize::MAX; n]; self.base.n_edges()];
        for (&(s, d), &e) in self.edges.iter().zip(&self.edge_proj) {
            images[e.0][labels[d]] = labels[s];
        }
        let values = images
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>>>()?;
        Cochain1::with_degree(self.base.clone(), n, values)
    }

    /// Probability that a `mu1`-random edge lifted at a uniform level joins
    /// two different levels.
    pub fn level_crossing_exact(&self, labels: &FiberLabeling) -> Result<Rational> {
        self.check_labeling(labels)?;
        let m = &self.base.measures().mu1;
        if m.total() == 0 {
            return Ok(Rational::from_integer(0));
        }
        let crossing: u128 = self
            .edges
            .iter()
            .zip(&self.edge_proj)
            .filter(|((s, d), _)| labels[*s] != labels[*d])
            .map(|(_, e)| m.weights()[e.0] as u128)
            .sum();
        Ok(Rational::new(crossing as i128, m.total() as i128 * self.degree as i128))
    }

    /// Whether two covers of the same base are isomorphic over it.
    pub fn is_isomorphic(&self, other: &Covering) -> Result<bool> {
        let a = self.to_cochain(&self.natural_labeling())?;
        let b = other.to_cochain(&other.natural_labeling())?;
        Ok(a.same_orbit(&b)?.is_some())
    }

    /// The cover as a polygonal complex with lifted cells and weights
    /// (each cell over `sigma` gets the weight of `sigma`). Needs closed lifts.
    pub fn to_complex(&self) -> Result<Complex> {
        if !self.polygons_close() {
            return Err(Error::Precondition("polygon lifts are not closed: the cochain is not a cocycle".into()));
        }
        let mut b = ComplexBuilder::new(self.n_vertices());
        for &(s, d) in &self.edges {
            b.edge(s, d);
        }
        for lift in &self.lifts {
            b.polygon(lift.steps.iter().map(|&(e, r)| (EdgeId(e), r)).collect());
        }
        let m = self.base.measures();
        let lift_weights = |w: &[u64], proj: &dyn Fn(usize) -> usize, len: usize| -> Vec<u64> {
            (0..len).map(|c| w[proj(c)]).collect()
        };
        let mu0 = lift_weights(m.mu0.weights(), &|v| self.vertex_proj[v].0, self.n_vertices());
        let mu1 = lift_weights(m.mu1.weights(), &|e| self.edge_proj[e].0, self.n_edges());
        let mu2 = lift_weights(m.mu2.weights(), &|p| self.lifts[p].polygon.0, self.lifts.len());
        let y = b.build_with([MeasureSpec::Weights(mu0), MeasureSpec::Weights(mu1), MeasureSpec::Weights(mu2)])?;
        debug_assert_eq!(y.euler_characteristic(), self.degree as i64 * self.base.euler_characteristic());
        Ok(y)
    }

    /// Export with projections; polygons are included only when they close.
    pub fn to_file(&self, base_path: &str) -> Result<CoveringFile> {
        let (complex, polygons) = if self.polygons_close() {
            let y = self.to_complex()?;
            (ComplexFile::from_complex(&y), self.lifts.iter().map(|l| l.polygon.0).collect())
        } else {
            let mut b = ComplexBuilder::new(self.n_vertices());
            for &(s, d) in &self.edges {
                b.edge(s, d);
            }
            let m = self.base.measures();
            let mu0 = self.vertex_proj.iter().map(|v| m.mu0.weights()[v.0]).collect();
            let mu1 = self.edge_proj.iter().map(|e| m.mu1.weights()[e.0]).collect();
            let y = b.build_with([MeasureSpec::Weights(mu0), MeasureSpec::Weights(mu1), MeasureSpec::Uniform])?;
            (ComplexFile::from_complex(&y), Vec::new())
        };
        Ok(CoveringFile {
            complex,
            base: base_path.to_string(),
            degree: self.degree,
            projection: Projection {
                vertices: self.vertex_proj.iter().map(|v| v.0).collect(),
                edges: self.edge_proj.iter().map(|e| e.0).collect(),
                polygons,
            },
        })
    }
}

fn components(n: usize, edges: &[(usize, usize)]) -> (Vec<usize>, usize) {
    let mut adj = vec![Vec::new(); n];
    for &(s, d) in edges {
        adj[s].push(d);
        adj[d].push(s);
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Cell-by-cell projection of an exported cover, indexed by cover cell id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Projection {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub polygons: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringFile {
    #[serde(flatten)]
    pub complex: ComplexFile,
    pub base: String,
    pub degree: usize,
    pub projection: Projection,
}

pub fn save_covering(c: &Covering, base_path: &str, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&c.to_file(base_path)?)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// The cover of the 1-skeleton defined by `a`.
pub fn covering_from_cochain(a: &Cochain1) -> Covering {
    let x = a.complex();
    let n = a.degree();
    let vertex_proj = (0..x.n_vertices() * n).map(|v| VertexId(v / n)).collect();
    let mut edges = Vec::with_capacity(x.n_edges() * n);
    let mut edge_proj = Vec::with_capacity(x.n_edges() * n);
    for (e, be) in x.edges().iter().enumerate() {
        let p = a.value(EdgeId(e));
        for i in 0..n {
            edges.push((be.src.0 * n + p.apply(i), be.dst.0 * n + i));
            edge_proj.push(EdgeId(e));
        }
    }
    Covering::new(x.clone(), vertex_proj, edges, edge_proj).expect("a cochain always defines a cover")
}

/// The cochain of `c` under `labels`.
pub fn cochain_from_covering(c: &Covering, labels: &FiberLabeling) -> Result<Cochain1> {
    c.to_cochain(labels)
}

/// `E_{e ~ mu1, i}[a(e).i != i]`, computed on the levels of the cover.
/// Defined for cocycles.
pub fn level_crossing_norm(a: &Cochain1) -> Result<Rational> {
    if !a.is_cocycle() {
        return Err(Error::Precondition("level crossing is defined for cocycles".into()));
    }
    let c = covering_from_cochain(a);
    c.level_crossing_exact(&c.natural_labeling())
}

/// One representative per class of degree-`n` cocycles: identity on the BFS
/// tree from vertex 0, then reduced under simultaneous conjugation.
pub fn enumerate_cocycles(x: &Arc<Complex>, n: usize) -> Result<Vec<Cochain1>> {
    enumerate_cocycles_with(x, n, EXACT_LIMIT)
}

pub fn enumerate_cocycles_with(x: &Arc<Complex>, n: usize, limit: f64) -> Result<Vec<Cochain1>> {
    let en = CocycleEnumerator::new(x, n, limit)?;
    en.run(true)
        .iter()
        .map(|v| {
            let a = Cochain1::with_degree(x.clone(), n, en.to_perms(v))?;
            debug_assert!(a.is_cocycle());
            Ok(a)
        })
        .collect()
}

/// Whether every degree-`n` cocycle is a coboundary.
#[derive(Clone, Debug)]
pub struct H1Level {
    pub degree: usize,
    pub classes: usize,
    pub vanishes: bool,
    pub witness: Option<Cochain1>,
}

pub fn h1_vanishes_at_level(x: &Arc<Complex>, n: usize) -> Result<H1Level> {
    let reps = enumerate_cocycles(x, n)?;
    let classes = reps.len();
    let witness = reps.into_iter().find(|a| !a.is_coboundary_exact());
    Ok(H1Level { degree: n, classes, vanishes: witness.is_none(), witness })
}

/// A 0-cochain that is `g` at `x` and the identity elsewhere.
pub fn point_cochain(x: &Arc<Complex>, v: VertexId, g: Permutation) -> Cochain0 {
    let n = g.degree();
    let mut values = vec![Permutation::identity(n); x.n_vertices()];
    values[v.0] = g;
    Cochain0::new(x.clone(), values).expect("values match the vertex count")
}
