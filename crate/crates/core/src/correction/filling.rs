//! Fillings of closed paths by polygons.
//!
//! A filling of `w` is a list of cells `(sigma_i, pi_i)` with
//! `w = sigma_1 pi_1 sigma_1^-1 ... sigma_k pi_k sigma_k^-1` in the free
//! group on the edges. The search keeps `w = P . g u g^-1` where `P` is the
//! product of cells recorded so far and `u` is cyclically reduced; a move
//! replaces a prefix `A` of some rotation of `u` by the complementary arc of
//! a polygon orientation `A C`, recording the cell `(g a, A C)`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::complex::{Complex, OrientedEdge, OrientedPolygon, PolygonId};
use crate::error::{Error, Result};

/// Cancels adjacent pairs `e e^-1`.
pub fn free_reduce(path: &[OrientedEdge]) -> Vec<OrientedEdge> {
    let mut out: Vec<OrientedEdge> = Vec::with_capacity(path.len());
    for &o in path {
        if out.last() == Some(&o.reverse()) {
            out.pop();
        } else {
            out.push(o);
        }
    }
    out
}

/// Free reduction followed by stripping `e .. e^-1` from the two ends.
pub fn cyclic_reduce(path: &[OrientedEdge]) -> Vec<OrientedEdge> {
    let mut w = free_reduce(path);
    let k = strip_ends(&w);
    w.drain(..k);
    w.truncate(w.len() - k);
    w
}

/// How many letters cancel between the two ends of a freely reduced word.
fn strip_ends(w: &[OrientedEdge]) -> usize {
    let mut k = 0;
    while w.len() >= 2 * k + 2 && w[k] == w[w.len() - 1 - k].reverse() {
        k += 1;
    }
    k
}

fn inverse(path: &[OrientedEdge]) -> Vec<OrientedEdge> {
    path.iter().rev().map(|o| o.reverse()).collect()
}

fn is_closed(path: &[OrientedEdge]) -> bool {
    path.windows(2).all(|w| w[0].dst == w[1].src)
        && path.first().zip(path.last()).is_none_or(|(a, b)| a.src == b.dst)
}

/// One conjugated polygon `sigma pi sigma^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingCell {
    pub conjugator: Vec<OrientedEdge>,
    pub polygon: OrientedPolygon,
}

#[derive(Clone, Debug)]
pub struct Filling {
    pub target: Vec<OrientedEdge>,
    pub cells: Vec<FillingCell>,
}

impl Filling {
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// The freely reduced product of the conjugated cells.
    pub fn replay(&self) -> Vec<OrientedEdge> {
        let mut word = Vec::new();
        for c in &self.cells {
            word.extend_from_slice(&c.conjugator);
            word.extend_from_slice(&c.polygon.perimeter);
            word.extend(inverse(&c.conjugator));
        }
        free_reduce(&word)
    }

    /// Checks that every cell is a genuine polygon orientation based at the
    /// target's start and that the product reduces to the target.
    pub fn verify(&self, x: &Complex) -> Result<()> {
        let base = self.target.first().map(|o| o.src);
        for (i, c) in self.cells.iter().enumerate() {
            let pid = c.polygon.polygon;
            if pid.0 >= x.n_polygons() || x.orientation(pid, c.polygon.rotation, c.polygon.reversed) != c.polygon {
                return Err(Error::InvalidArgument(format!("filling cell {i} is not a polygon orientation")));
            }
            let start = c.conjugator.first().map(|o| o.src).unwrap_or(c.polygon.perimeter[0].src);
            let end = c.conjugator.last().map(|o| o.dst).unwrap_or(start);
            let path_ok = c.conjugator.windows(2).all(|w| w[0].dst == w[1].src);
            if !path_ok || end != c.polygon.perimeter[0].src || base.is_some_and(|b| b != start) {
                return Err(Error::InvalidArgument(format!("filling cell {i} is not conjugated from the base point")));
            }
        }
        if self.replay() != free_reduce(&self.target) {
            return Err(Error::InvalidArgument("filling does not reproduce its target".into()));
        }
        Ok(())
    }
}

/// Search limits.
#[derive(Clone, Copy, Debug)]
pub struct FillingBudget {
    /// Node expansions allowed per search pass.
    pub nodes: usize,
    /// Extra word length allowed above the starting length.
    pub slack: usize,
}

impl Default for FillingBudget {
    fn default() -> Self {
        FillingBudget { nodes: 200_000, slack: 6 }
    }
}

struct Node {
    word: Vec<OrientedEdge>,
    gamma: Vec<OrientedEdge>,
    parent: usize,
    cell: Option<FillingCell>,
    cost: usize,
}

/// Reusable search over one complex: polygon orientations indexed by their
/// first step.
pub struct FillingSearch<'a> {
    complex: &'a Complex,
    starting: Vec<Vec<OrientedPolygon>>,
    longest: usize,
    pub budget: FillingBudget,
}

impl<'a> FillingSearch<'a> {
    pub fn new(x: &'a Complex) -> Self {
        let mut starting = vec![Vec::new(); 2 * x.n_edges()];
        let mut longest = 1;
        for p in 0..x.n_polygons() {
            let mut seen: Vec<Vec<OrientedEdge>> = Vec::new();
            for o in x.all_orientations(PolygonId(p)) {
                if seen.contains(&o.perimeter) {
                    continue;
                }
                seen.push(o.perimeter.clone());
                longest = longest.max(o.perimeter.len());
                starting[o.perimeter[0].code() as usize].push(o);
            }
        }
        FillingSearch { complex: x, starting, longest, budget: FillingBudget::default() }
    }

    pub fn complex(&self) -> &Complex {
        self.complex
    }

    /// A filling of `target` with at most `max_cells` cells. Best-first on
    /// cells used plus an estimate of cells still needed, retried greedier
    /// when a pass runs out of nodes.
    pub fn fill(&self, target: &[OrientedEdge], max_cells: usize) -> Result<Filling> {
        if max_cells > 64 {
            return Err(Error::InvalidArgument(format!("max_cells {max_cells} exceeds 64")));
        }
        if !is_closed(target) {
            return Err(Error::InvalidArgument("filling target is not a closed path".into()));
        }
        let mut last = None;
        for weight in [1, 2, 4] {
            match self.pass(target, max_cells, weight) {
                Ok(f) => {
                    debug_assert!(f.verify(self.complex).is_ok());
                    return Ok(f);
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one pass ran"))
    }

    fn pass(&self, target: &[OrientedEdge], max_cells: usize, weight: usize) -> Result<Filling> {
        let reduced = free_reduce(target);
        let k = strip_ends(&reduced);
        let start = Node {
            word: reduced[k..reduced.len() - k].to_vec(),
            gamma: reduced[..k].to_vec(),
            parent: usize::MAX,
            cell: None,
            cost: 0,
        };
        let max_len = start.word.len() + self.budget.slack.max(self.longest);
        let h = |len: usize| self.estimate(len);
        let mut nodes = vec![start];
        let mut best: HashMap<Vec<u32>, usize> = HashMap::new();
        best.insert(canonical(&nodes[0].word), 0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((weight * h(nodes[0].word.len()), nodes[0].word.len(), 0usize)));
        let mut expanded = 0;
        let mut shortest = nodes[0].word.len();
        while let Some(Reverse((_, _, id))) = heap.pop() {
            if nodes[id].word.is_empty() {
                return Ok(self.transcript(target, &nodes, id));
            }
            if best.get(&canonical(&nodes[id].word)).is_some_and(|&c| c < nodes[id].cost) {
                continue;
            }
            expanded += 1;
            if expanded > self.budget.nodes {
                break;
            }
            for child in self.moves(&nodes[id], id) {
                if child.cost + usize::from(!child.word.is_empty()) > max_cells || child.word.len() > max_len {
                    continue;
                }
                let key = canonical(&child.word);
                if best.get(&key).is_some_and(|&c| c <= child.cost) {
                    continue;
                }
                best.insert(key, child.cost);
                shortest = shortest.min(child.word.len());
                let f = child.cost + weight * h(child.word.len());
                let len = child.word.len();
                nodes.push(child);
                heap.push(Reverse((f, len, nodes.len() - 1)));
            }
        }
        Err(Error::FillingFailed { expanded: expanded.min(self.budget.nodes), frontier: heap.len(), shortest })
    }

    /// Cells needed for a word of length `len` if every cell but the last
    /// shortens it by `l - 2` (the last removes `l`). For triangulated discs
    /// with no interior vertices this is exact.
    fn estimate(&self, len: usize) -> usize {
        let l = self.longest;
        match len {
            0 => 0,
            _ if l <= 2 => len.div_ceil(l),
            _ => 1 + len.saturating_sub(l).div_ceil(l - 2),
        }
    }

    fn moves(&self, node: &Node, id: usize) -> Vec<Node> {
        let u = &node.word;
        let l = u.len();
        let mut out = Vec::new();
        for r in 0..l {
            for pol in &self.starting[u[r].code() as usize] {
                let per = &pol.perimeter;
                let mut m = 0;
                while m < per.len() && m < l && per[m] == u[(r + m) % l] {
                    m += 1;
                }
                for k in 1..=m {
                    let mut sigma = node.gamma.clone();
                    sigma.extend_from_slice(&u[..r]);
                    let mut next = inverse(&per[k..]);
                    next.extend((k..l).map(|i| u[(r + i) % l]));
                    let next = free_reduce(&next);
                    let s = strip_ends(&next);
                    let mut gamma = sigma.clone();
                    gamma.extend_from_slice(&next[..s]);
                    out.push(Node {
                        word: next[s..next.len() - s].to_vec(),
                        gamma: free_reduce(&gamma),
                        parent: id,
                        cell: Some(FillingCell { conjugator: free_reduce(&sigma), polygon: pol.clone() }),
                        cost: node.cost + 1,
                    });
                }
            }
        }
        out
    }

    fn transcript(&self, target: &[OrientedEdge], nodes: &[Node], mut id: usize) -> Filling {
        let mut cells = Vec::new();
        while id != usize::MAX {
            if let Some(c) = &nodes[id].cell {
                cells.push(c.clone());
            }
            id = nodes[id].parent;
        }
        cells.reverse();
        Filling { target: target.to_vec(), cells }
    }
}

/// Least rotation of the edge codes, so rotated words share a key.
fn canonical(word: &[OrientedEdge]) -> Vec<u32> {
    let codes: Vec<u32> = word.iter().map(|o| o.code()).collect();
    (0..codes.len().max(1))
        .map(|r| codes[r.min(codes.len())..].iter().chain(&codes[..r.min(codes.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// One-off [`FillingSearch::fill`] with the default budget.
pub fn filling_search(x: &Complex, target: &[OrientedEdge], max_cells: usize) -> Result<Filling> {
    FillingSearch::new(x).fill(target, max_cells)
}
