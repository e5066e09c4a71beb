//! Measured polygonal 2-complexes.
//!
//! A [`Complex`] stores one canonical perimeter per polygon (the
//! lexicographically least of its `2l` rotations and reversals). Other
//! orientations are derived through [`Complex::orientation`].
//!
//! Measures are kept as non-negative integer weights per cell, so every
//! probability is an exact rational `w / total`.

mod generators;
mod io;
mod presentation;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

pub use generators::{complete_complex, cyclic_cover_complex, random_complex, spherical_building};
pub use io::{load_complex, save_complex, ComplexFile};
pub use presentation::{
    contracted_complete_presentation, free_product_presentation, presentation_complex, Letter,
    Presentation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolygonId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// An edge traversed in one of its two directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub reversed: bool,
    pub src: VertexId,
    pub dst: VertexId,
}

impl OrientedEdge {
    pub fn reverse(self) -> Self {
        OrientedEdge { edge: self.edge, reversed: !self.reversed, src: self.dst, dst: self.src }
    }

    /// `2 * edge + reversed`; reversal flips the low bit.
    #[inline]
    pub fn code(self) -> u32 {
        (self.edge.0 as u32) << 1 | self.reversed as u32
    }
}

/// A polygon read from a chosen starting edge in a chosen direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedPolygon {
    pub polygon: PolygonId,
    pub perimeter: Vec<OrientedEdge>,
    pub rotation: usize,
    pub reversed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Uniform,
    Descending,
    Custom,
}

/// A probability measure on the cells of one dimension, as integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMeasure {
    kind: MeasureKind,
    weights: Vec<u64>,
    total: u64,
}

impl CellMeasure {
    fn new(kind: MeasureKind, weights: Vec<u64>) -> Result<Self> {
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::InvalidArgument("measure weights overflow".into()))?;
        if total == 0 && !weights.is_empty() {
            return Err(Error::InvalidArgument("measure has zero total mass".into()));
        }
        let g = weights.iter().fold(0u64, |g, &w| num_integer::gcd(g, w));
        let (weights, total) = if g > 1 {
            (weights.iter().map(|w| w / g).collect(), total / g)
        } else {
            (weights, total)
        };
        Ok(CellMeasure { kind, weights, total })
    }

    fn uniform(len: usize) -> Self {
        CellMeasure { kind: MeasureKind::Uniform, weights: vec![1; len], total: len as u64 }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Integer weights, reduced by their gcd.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.weights[i] as f64 / self.total as f64
    }

    pub fn prob_exact(&self, i: usize) -> Rational {
        Rational::new(self.weights[i] as i128, self.total as i128)
    }

    pub fn probs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.prob(i)).collect()
    }

    pub fn is_fully_supported(&self) -> bool {
        self.weights.iter().all(|&w| w > 0)
    }
}

/// How a builder should choose the measure of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureSpec {
    Uniform,
    /// Proportional to the total weight of cofaces, counted with multiplicity.
    Descending,
    Weights(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measures {
    pub mu0: CellMeasure,
    pub mu1: CellMeasure,
    pub mu2: CellMeasure,
}

impl Measures {
    pub fn get(&self, dim: usize) -> &CellMeasure {
        match dim {
            0 => &self.mu0,
            1 => &self.mu1,
            2 => &self.mu2,
            _ => panic!("no measure in dimension {dim}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    n_vertices: usize,
    edges: Vec<Edge>,
    polygons: Vec<Vec<OrientedEdge>>,
    measures: Measures,
    outgoing: Vec<Vec<OrientedEdge>>,
    edge_polygons: Vec<Vec<PolygonId>>,
    component: Vec<usize>,
    n_components: usize,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices
            && self.edges == other.edges
            && self.polygons == other.polygons
            && self.measures.mu0.weights == other.measures.mu0.weights
            && self.measures.mu1.weights == other.measures.mu1.weights
            && self.measures.mu2.weights == other.measures.mu2.weights
    }
}

impl Eq for Complex {}

/// Incremental construction of a [`Complex`].
#[derive(Clone, Debug, Default)]
pub struct ComplexBuilder {
    n_vertices: usize,
    edges: Vec<Edge>,
    polygons: Vec<Vec<(EdgeId, bool)>>,
}

impl ComplexBuilder {
    pub fn new(n_vertices: usize) -> Self {
        ComplexBuilder { n_vertices, ..Default::default() }
    }

    pub fn edge(&mut self, src: usize, dst: usize) -> EdgeId {
        self.edges.push(Edge { src: VertexId(src), dst: VertexId(dst) });
        EdgeId(self.edges.len() - 1)
    }

    /// Adds a polygon given as `(edge, reversed)` steps.
    pub fn polygon(&mut self, steps: Vec<(EdgeId, bool)>) -> PolygonId {
        self.polygons.push(steps);
        PolygonId(self.polygons.len() - 1)
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Builds with the default measures: uniform on the top dimension that
    /// has cells, descending below it.
    pub fn build(self) -> Result<Complex> {
        let specs = if !self.polygons.is_empty() {
            [MeasureSpec::Descending, MeasureSpec::Descending, MeasureSpec::Uniform]
        } else if !self.edges.is_empty() {
            [MeasureSpec::Descending, MeasureSpec::Uniform, MeasureSpec::Uniform]
        } else {
            [MeasureSpec::Uniform, MeasureSpec::Uniform, MeasureSpec::Uniform]
        };
        self.build_with(specs)
    }

    pub fn build_with(self, specs: [MeasureSpec; 3]) -> Result<Complex> {
        let n = self.n_vertices;
        for (i, e) in self.edges.iter().enumerate() {
            if e.src.0 >= n || e.dst.0 >= n {
                return Err(Error::schema(format!("edge {i}"), "endpoint is not a vertex"));
            }
        }
        let orient = |e: EdgeId, reversed: bool| -> Result<OrientedEdge> {
            let edge = self
                .edges
                .get(e.0)
                .ok_or_else(|| Error::schema(format!("edge {}", e.0), "unknown edge id"))?;
            let (src, dst) = if reversed { (edge.dst, edge.src) } else { (edge.src, edge.dst) };
            Ok(OrientedEdge { edge: e, reversed, src, dst })
        };
        let mut polygons = Vec::with_capacity(self.polygons.len());
        for (pid, steps) in self.polygons.iter().enumerate() {
            let loc = || format!("polygon {pid}");
            if steps.is_empty() {
                return Err(Error::schema(loc(), "empty perimeter"));
            }
            let per = steps.iter().map(|&(e, r)| orient(e, r)).collect::<Result<Vec<_>>>()?;
            let l = per.len();
            for k in 0..l {
                let (a, b) = (per[k], per[(k + 1) % l]);
                if a.dst != b.src {
                    return Err(Error::schema(loc(), format!("perimeter is not closed at step {k}")));
                }
                if l > 1 && b == a.reverse() {
                    return Err(Error::schema(
                        loc(),
                        format!("perimeter is not cyclically reduced at step {k}"),
                    ));
                }
            }
            polygons.push(canonical_perimeter(&per));
        }

        let mut outgoing = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            let fwd = OrientedEdge { edge: EdgeId(i), reversed: false, src: e.src, dst: e.dst };
            outgoing[e.src.0].push(fwd);
            outgoing[e.dst.0].push(fwd.reverse());
        }
        for out in &mut outgoing {
            out.sort_by_key(|o| o.code());
        }
        let mut edge_polygons = vec![Vec::new(); self.edges.len()];
        for (pid, per) in polygons.iter().enumerate() {
            for o in per {
                let list: &mut Vec<PolygonId> = &mut edge_polygons[o.edge.0];
                if list.last() != Some(&PolygonId(pid)) {
                    list.push(PolygonId(pid));
                }
            }
        }
        for list in &mut edge_polygons {
            list.dedup();
        }

        let (component, n_components) = components(n, &self.edges);
        let mu2 = measure_from_spec(&specs[2], polygons.len(), 2, || unreachable!())?;
        let mu1 = measure_from_spec(&specs[1], self.edges.len(), 1, || {
            let mut w = vec![0u64; self.edges.len()];
            for (pid, per) in polygons.iter().enumerate() {
                for o in per {
                    w[o.edge.0] += mu2.weights[pid];
                }
            }
            w
        })?;
        let mu0 = measure_from_spec(&specs[0], n, 0, || {
            let mut w = vec![0u64; n];
            for (i, e) in self.edges.iter().enumerate() {
                w[e.src.0] += mu1.weights[i];
                w[e.dst.0] += mu1.weights[i];
            }
            w
        })?;

        Ok(Complex {
            n_vertices: n,
            edges: self.edges,
            polygons,
            measures: Measures { mu0, mu1, mu2 },
            outgoing,
            edge_polygons,
            component,
            n_components,
        })
    }
}

fn measure_from_spec(
    spec: &MeasureSpec,
    len: usize,
    dim: usize,
    descend: impl FnOnce() -> Vec<u64>,
) -> Result<CellMeasure> {
    match spec {
        MeasureSpec::Uniform => Ok(CellMeasure::uniform(len)),
        MeasureSpec::Weights(w) => {
            if w.len() != len {
                return Err(Error::schema(
                    format!("mu{dim}"),
                    format!("expected {len} weights, got {}", w.len()),
                ));
            }
            CellMeasure::new(MeasureKind::Custom, w.clone())
                .map_err(|e| Error::schema(format!("mu{dim}"), e.to_string()))
        }
        MeasureSpec::Descending => {
            if dim == 2 {
                return Err(Error::schema("mu2", "the top dimension cannot be descending"));
            }
            let w = descend();
            if w.iter().all(|&x| x == 0) {
                // nothing above to descend from: fall back to uniform
                return Ok(CellMeasure::uniform(len));
            }
            CellMeasure::new(MeasureKind::Descending, w)
        }
    }
}

fn components(n: usize, edges: &[Edge]) -> (Vec<usize>, usize) {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.src.0].push(e.dst.0);
        adj[e.dst.0].push(e.src.0);
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

/// All `2l` orientations of a perimeter as `(rotation, reversed, steps)`.
fn orientations(per: &[OrientedEdge]) -> Vec<(usize, bool, Vec<OrientedEdge>)> {
    let l = per.len();
    let rev: Vec<OrientedEdge> = per.iter().rev().map(|o| o.reverse()).collect();
    let mut out = Vec::with_capacity(2 * l);
    for (reversed, base) in [(false, per), (true, &rev[..])] {
        for r in 0..l {
            let rotated = base[r..].iter().chain(&base[..r]).copied().collect();
            out.push((r, reversed, rotated));
        }
    }
    out
}

fn canonical_perimeter(per: &[OrientedEdge]) -> Vec<OrientedEdge> {
    orientations(per)
        .into_iter()
        .map(|(_, _, p)| p)
        .min_by_key(|p| p.iter().map(|o| o.code()).collect::<Vec<_>>())
        .expect("non-empty perimeter")
}

/// A BFS spanning tree of a connected complex.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub root: VertexId,
    /// For each vertex other than the root, the tree edge oriented towards the root.
    pub up: Vec<Option<OrientedEdge>>,
    pub depth: Vec<usize>,
    pub in_tree: Vec<bool>,
    /// Vertices in BFS order.
    pub order: Vec<VertexId>,
}

impl SpanningTree {
    pub fn edges(&self) -> Vec<EdgeId> {
        self.in_tree.iter().enumerate().filter(|(_, &t)| t).map(|(i, _)| EdgeId(i)).collect()
    }

    /// Tree path from `x` up to the root.
    pub fn path_to_root(&self, x: VertexId) -> Vec<OrientedEdge> {
        let mut path = Vec::new();
        let mut v = x;
        while let Some(o) = self.up[v.0] {
            path.push(o);
            v = o.dst;
        }
        path
    }

    /// Tree path from the root down to `x`.
    pub fn path_from_root(&self, x: VertexId) -> Vec<OrientedEdge> {
        self.path_to_root(x).into_iter().rev().map(|o| o.reverse()).collect()
    }

    pub fn radius(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}

impl Complex {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    pub fn oriented(&self, e: EdgeId, reversed: bool) -> OrientedEdge {
        let edge = self.edges[e.0];
        let (src, dst) = if reversed { (edge.dst, edge.src) } else { (edge.src, edge.dst) };
        OrientedEdge { edge: e, reversed, src, dst }
    }

    /// Decodes [`OrientedEdge::code`].
    pub fn from_code(&self, code: u32) -> OrientedEdge {
        self.oriented(EdgeId((code >> 1) as usize), code & 1 == 1)
    }

    /// Canonical perimeter of a polygon.
    pub fn perimeter(&self, p: PolygonId) -> &[OrientedEdge] {
        &self.polygons[p.0]
    }

    pub fn perimeters(&self) -> &[Vec<OrientedEdge>] {
        &self.polygons
    }

    /// The orientation starting at step `rotation` of the canonical
    /// perimeter (of its reversal when `reversed`).
    pub fn orientation(&self, p: PolygonId, rotation: usize, reversed: bool) -> OrientedPolygon {
        let per = &self.polygons[p.0];
        let base: Vec<OrientedEdge> = if reversed {
            per.iter().rev().map(|o| o.reverse()).collect()
        } else {
            per.clone()
        };
        let r = rotation % per.len();
        OrientedPolygon {
            polygon: p,
            perimeter: base[r..].iter().chain(&base[..r]).copied().collect(),
            rotation: r,
            reversed,
        }
    }

    /// All `2l` orientations of a polygon.
    pub fn all_orientations(&self, p: PolygonId) -> Vec<OrientedPolygon> {
        orientations(&self.polygons[p.0])
            .into_iter()
            .map(|(rotation, reversed, perimeter)| OrientedPolygon { polygon: p, perimeter, rotation, reversed })
            .collect()
    }

    pub fn measures(&self) -> &Measures {
        &self.measures
    }

    /// Oriented edges leaving `v`, sorted by edge id. Loops appear twice.
    pub fn outgoing(&self, v: VertexId) -> &[OrientedEdge] {
        &self.outgoing[v.0]
    }

    pub fn polygons_on_edge(&self, e: EdgeId) -> &[PolygonId] {
        &self.edge_polygons[e.0]
    }

    pub fn is_connected(&self) -> bool {
        self.n_components <= 1
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Component index of every vertex, numbered by least vertex.
    pub fn component_of(&self, v: VertexId) -> usize {
        self.component[v.0]
    }

    /// Least vertex of each component.
    pub fn component_roots(&self) -> Vec<VertexId> {
        let mut roots = vec![None; self.n_components];
        for v in 0..self.n_vertices {
            roots[self.component[v]].get_or_insert(VertexId(v));
        }
        roots.into_iter().map(|r| r.expect("every component has a vertex")).collect()
    }

    /// Every polygon is a triangle on three distinct vertices, there are no
    /// loops or parallel edges, and no two triangles share a vertex set.
    pub fn is_simplicial(&self) -> bool {
        let mut pairs = std::collections::HashSet::new();
        for e in &self.edges {
            if e.is_loop() || !pairs.insert((e.src.min(e.dst), e.src.max(e.dst))) {
                return false;
            }
        }
        let mut triples = std::collections::HashSet::new();
        for per in &self.polygons {
            if per.len() != 3 {
                return false;
            }
            let mut vs = [per[0].src, per[1].src, per[2].src];
            vs.sort();
            if vs[0] == vs[1] || vs[1] == vs[2] || !triples.insert(vs) {
                return false;
            }
        }
        true
    }

    /// Every vertex lies on an edge and every edge on a polygon (vacuous in
    /// the top dimension present). Returns the first orphaned cell otherwise.
    pub fn orphan(&self) -> Option<String> {
        if self.n_edges() > 0 {
            for v in 0..self.n_vertices {
                if self.outgoing[v].is_empty() {
                    return Some(format!("vertex {v}"));
                }
            }
        }
        if self.n_polygons() > 0 {
            for e in 0..self.n_edges() {
                if self.edge_polygons[e].is_empty() {
                    return Some(format!("edge {e}"));
                }
            }
        }
        None
    }

    /// Whether `mu_dim` is proportional to the coface weights of `mu_{dim+1}`
    /// (exactly, via integer cross-multiplication).
    pub fn is_descending(&self, dim: usize) -> bool {
        let (lower, upper_weights) = match dim {
            0 => {
                let mut w = vec![0u128; self.n_vertices];
                for (i, e) in self.edges.iter().enumerate() {
                    w[e.src.0] += self.measures.mu1.weights[i] as u128;
                    w[e.dst.0] += self.measures.mu1.weights[i] as u128;
                }
                (&self.measures.mu0, w)
            }
            1 => {
                let mut w = vec![0u128; self.n_edges()];
                for (pid, per) in self.polygons.iter().enumerate() {
                    for o in per {
                        w[o.edge.0] += self.measures.mu2.weights[pid] as u128;
                    }
                }
                (&self.measures.mu1, w)
            }
            _ => return false,
        };
        let up_total: u128 = upper_weights.iter().sum();
        if up_total == 0 {
            return false;
        }
        let low_total = lower.total as u128;
        lower
            .weights
            .iter()
            .zip(&upper_weights)
            .all(|(&l, &u)| l as u128 * up_total == u * low_total)
    }

    /// Replaces the measures, re-validating lengths.
    pub fn with_measures(&self, specs: [MeasureSpec; 3]) -> Result<Complex> {
        let mut b = ComplexBuilder::new(self.n_vertices);
        b.edges = self.edges.clone();
        b.polygons = self
            .polygons
            .iter()
            .map(|per| per.iter().map(|o| (o.edge, o.reversed)).collect())
            .collect();
        b.build_with(specs)
    }

    /// BFS tree from `root`, exploring edges in increasing id order.
    pub fn spanning_tree(&self, root: VertexId) -> Result<SpanningTree> {
        if root.0 >= self.n_vertices {
            return Err(Error::InvalidArgument(format!("vertex {} does not exist", root.0)));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected { components: self.n_components });
        }
        Ok(self.bfs_tree(root))
    }

    /// BFS tree of the component containing `root`.
    pub(crate) fn bfs_tree(&self, root: VertexId) -> SpanningTree {
        let n = self.n_vertices;
        let mut up = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut in_tree = vec![false; self.n_edges()];
        let mut order = vec![root];
        depth[root.0] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &o in &self.outgoing[v.0] {
                if depth[o.dst.0] == usize::MAX {
                    depth[o.dst.0] = depth[v.0] + 1;
                    up[o.dst.0] = Some(o.reverse());
                    in_tree[o.edge.0] = true;
                    order.push(o.dst);
                }
            }
        }
        for d in &mut depth {
            if *d == usize::MAX {
                *d = 0;
            }
        }
        SpanningTree { root, up, depth, in_tree, order }
    }

    /// BFS trees of every component, rooted at each component's least vertex.
    pub(crate) fn spanning_forest(&self) -> Vec<SpanningTree> {
        self.component_roots().into_iter().map(|r| self.bfs_tree(r)).collect()
    }

    /// Graph distance between vertices of the 1-skeleton, `None` across components.
    pub fn distances_from(&self, v: VertexId) -> Vec<Option<usize>> {
        let tree = self.bfs_tree(v);
        (0..self.n_vertices)
            .map(|u| if self.component[u] == self.component[v.0] { Some(tree.depth[u]) } else { None })
            .collect()
    }

    /// Largest graph distance within a component.
    pub fn diameter(&self) -> usize {
        (0..self.n_vertices)
            .map(|v| self.bfs_tree(VertexId(v)).radius())
            .max()
            .unwrap_or(0)
    }

    /// `|V| - |E| + |P|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges() as i64 + self.n_polygons() as i64
    }

    /// Dimension of `H^1(X, F2)`.
    pub fn betti1_f2(&self) -> usize {
        let rows: Vec<Vec<u64>> = self
            .polygons
            .iter()
            .map(|per| {
                let mut row = crate::f2::BitVec::zeros(self.n_edges());
                for o in per {
                    row.flip(o.edge.0);
                }
                row.into_words()
            })
            .collect();
        let rank_d1 = crate::f2::rank(rows, self.n_edges());
        let dim_z1 = self.n_edges() - rank_d1;
        let dim_b1 = self.n_vertices - self.n_components;
        dim_z1 - dim_b1
    }

    /// The link of `v` in a simplicial complex: a graph on the neighbours of
    /// `v` with one edge per triangle through `v`, weighted by that
    /// triangle's mass, and the descending vertex measure.
    pub fn link(&self, v: VertexId) -> Result<Link> {
        if !self.is_simplicial() {
            return Err(Error::Precondition("links are only defined for simplicial complexes".into()));
        }
        let mut nbrs: Vec<VertexId> = self.outgoing[v.0].iter().map(|o| o.dst).collect();
        nbrs.sort();
        nbrs.dedup();
        let index = |u: VertexId| nbrs.binary_search(&u).expect("neighbour");
        let mut b = ComplexBuilder::new(nbrs.len());
        let mut weights = Vec::new();
        for (pid, per) in self.polygons.iter().enumerate() {
            let vs = [per[0].src, per[1].src, per[2].src];
            if let Some(k) = vs.iter().position(|&x| x == v) {
                let (a, c) = (vs[(k + 1) % 3], vs[(k + 2) % 3]);
                let (a, c) = (index(a.min(c)), index(a.max(c)));
                b.edge(a, c);
                weights.push(self.measures.mu2.weights[pid]);
            }
        }
        let complex = if weights.is_empty() {
            b.build_with([MeasureSpec::Uniform, MeasureSpec::Uniform, MeasureSpec::Uniform])?
        } else {
            b.build_with([MeasureSpec::Descending, MeasureSpec::Weights(weights), MeasureSpec::Uniform])?
        };
        Ok(Link { center: v, vertices: nbrs, complex })
    }
}

/// A vertex link together with the map from link vertices back to `X`.
#[derive(Clone, Debug)]
pub struct Link {
    pub center: VertexId,
    pub vertices: Vec<VertexId>,
    pub complex: Complex,
}
