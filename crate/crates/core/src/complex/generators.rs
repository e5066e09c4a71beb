use std::collections::HashMap;

use super::{Complex, ComplexBuilder, EdgeId, MeasureSpec};
use crate::error::{Error, Result};

/// The full 2-skeleton of the simplex on `d + 1` vertices, uniform measures.
///
/// Edges are the pairs `i < j` in lexicographic order; triangle `i < j < k`
/// has perimeter `i -> j -> k -> i`.
pub fn complete_complex(d: usize) -> Result<Complex> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("complete complex needs d >= 2, got {d}")));
    }
    let n = d + 1;
    let mut b = ComplexBuilder::new(n);
    let mut id = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            id.insert((i, j), b.edge(i, j));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                b.polygon(vec![(id[&(i, j)], false), (id[&(j, k)], false), (id[&(i, k)], true)]);
            }
        }
    }
    b.build_with([MeasureSpec::Uniform, MeasureSpec::Uniform, MeasureSpec::Uniform])
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|p| p * p <= q).all(|p| q % p != 0)
}

/// Vectors of `F_q^4` are encoded as base-`q` integers.
struct Field4 {
    q: usize,
}

impl Field4 {
    fn encode(&self, v: &[usize; 4]) -> usize {
        v.iter().rev().fold(0, |acc, &x| acc * self.q + x)
    }

    /// All vectors in the span of `basis`, sorted.
    fn span(&self, basis: &[[usize; 4]]) -> Vec<usize> {
        let k = basis.len();
        let mut out = Vec::with_capacity(self.q.pow(k as u32));
        let mut coeffs = vec![0usize; k];
        loop {
            let mut v = [0usize; 4];
            for (c, b) in coeffs.iter().zip(basis) {
                for i in 0..4 {
                    v[i] = (v[i] + c * b[i]) % self.q;
                }
            }
            out.push(self.encode(&v));
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if coeffs[i] < self.q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out.sort_unstable();
        out
    }

    /// Bases in reduced row echelon form of every `k`-dimensional subspace.
    fn subspaces(&self, k: usize) -> Vec<Vec<[usize; 4]>> {
        let mut out = Vec::new();
        for mask in 0u32..16 {
            if mask.count_ones() as usize != k {
                continue;
            }
            let pivots: Vec<usize> = (0..4).filter(|&c| mask >> c & 1 == 1).collect();
            // free slots: (row, col) with col > pivot of row and col not a pivot
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &p)| (p + 1..4).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = self.q.pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![[0usize; 4]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = 1;
                }
                let mut c = code;
                for &(r, col) in &free {
                    rows[r][col] = c % self.q;
                    c /= self.q;
                }
                out.push(rows);
            }
        }
        out
    }
}

/// Flag complex of proper nonzero subspaces of `F_q^4`, for prime `q`.
///
/// Vertices are listed by dimension (1, 2, 3). Edges join `U < W` and are
/// oriented from the smaller subspace; triangles are full flags. The top
/// measure is uniform, lower measures descend from it.
pub fn spherical_building(q: usize) -> Result<Complex> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("q = {q} is not prime")));
    }
    let field = Field4 { q };
    let mut dims = Vec::new();
    let mut spans: Vec<Vec<usize>> = Vec::new();
    let mut bases: Vec<Vec<[usize; 4]>> = Vec::new();
    for k in 1..=3 {
        for basis in field.subspaces(k) {
            spans.push(field.span(&basis));
            bases.push(basis);
            dims.push(k);
        }
    }
    let n = spans.len();
    let contains = |big: usize, small: usize| {
        bases[small].iter().all(|v| spans[big].binary_search(&field.encode(v)).is_ok())
    };
    let mut b = ComplexBuilder::new(n);
    let mut edge_of: HashMap<(usize, usize), EdgeId> = HashMap::new();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n {
        for w in 0..n {
            if dims[u] < dims[w] && contains(w, u) {
                edge_of.insert((u, w), b.edge(u, w));
                up[u].push(w);
            }
        }
    }
    for a in 0..n {
        if dims[a] != 1 {
            continue;
        }
        for &m in &up[a] {
            if dims[m] != 2 {
                continue;
            }
            for &c in &up[m] {
                b.polygon(vec![(edge_of[&(a, m)], false), (edge_of[&(m, c)], false), (edge_of[&(a, c)], true)]);
            }
        }
    }
    b.build()
}

/// The `m`-fold cyclic cover of the presentation complex of `<a, b | b>`.
///
/// Edge `i < m` is `a_i: i -> i+1 (mod m)`, edge `m + i` is the loop `b_i`
/// at `i`, and polygon `i` is the length-one polygon on `b_i`. Edges and
/// polygons carry uniform measures.
pub fn cyclic_cover_complex(m: usize) -> Result<Complex> {
    if m < 1 {
        return Err(Error::InvalidArgument("cyclic cover needs m >= 1".into()));
    }
    let mut b = ComplexBuilder::new(m);
    for i in 0..m {
        b.edge(i, (i + 1) % m);
    }
    let loops: Vec<EdgeId> = (0..m).map(|i| b.edge(i, i)).collect();
    for e in loops {
        b.polygon(vec![(e, false)]);
    }
    b.build_with([MeasureSpec::Descending, MeasureSpec::Uniform, MeasureSpec::Uniform])
}

/// A random connected complex: a random spanning tree plus `extra_edges`
/// further edges (loops allowed), and `polygons` polygons traced by closed
/// walks that are cyclically reduced and of length 1 to 6. Measures are
/// the defaults.
pub fn random_complex(
    n_vertices: usize,
    extra_edges: usize,
    polygons: usize,
    rng: &mut impl rand::Rng,
) -> Result<Complex> {
    if n_vertices == 0 {
        return Err(Error::InvalidArgument("need at least one vertex".into()));
    }
    let mut b = ComplexBuilder::new(n_vertices);
    for v in 1..n_vertices {
        b.edge(rng.random_range(0..v), v);
    }
    for _ in 0..extra_edges {
        b.edge(rng.random_range(0..n_vertices), rng.random_range(0..n_vertices));
    }
    let probe = b.clone().build()?;
    let mut made = 0;
    let mut attempts = 0;
    while made < polygons && attempts < 1000 * (polygons + 1) {
        attempts += 1;
        if let Some(walk) = random_closed_walk(&probe, rng) {
            b.polygon(walk.iter().map(|o| (o.edge, o.reversed)).collect());
            made += 1;
        }
    }
    b.build()
}

/// A closed walk from a random vertex: a few random steps, then the tree
/// path back, cyclically reduced. `None` when it reduces to nothing or is
/// longer than six steps.
fn random_closed_walk(x: &Complex, rng: &mut impl rand::Rng) -> Option<Vec<super::OrientedEdge>> {
    let start = super::VertexId(rng.random_range(0..x.n_vertices()));
    let tree = x.bfs_tree(start);
    let mut walk = Vec::new();
    let mut v = start;
    for _ in 0..rng.random_range(1..=4) {
        let out = x.outgoing(v);
        if out.is_empty() {
            return None;
        }
        let o = out[rng.random_range(0..out.len())];
        walk.push(o);
        v = o.dst;
    }
    walk.extend(tree.path_to_root(v));
    let reduced = crate::correction::cyclic_reduce(&walk);
    (!reduced.is_empty() && reduced.len() <= 6).then_some(reduced)
}
