use std::sync::Arc;

use rayon::prelude::*;

use super::filling::{Filling, FillingSearch};
use super::{CorrectionCertificate, Detail};
use crate::cochain::Cochain1;
use crate::complex::{Complex, EdgeId, SpanningTree, VertexId};
use crate::error::{Error, Result};
use crate::report::Exact;
use crate::Rational;

/// Fillings of the tree loops of a rooted BFS tree, computed once per
/// complex and reused for every cochain.
///
/// For a non-tree edge `e: x -> y` the loop is `root ~> x -> y ~> root`.
/// After tree normalization `a'(e) = a(loop)`, so a filling of the loop by
/// cells `F_e` gives `||a'(e)|| <= sum_{P in F_e} ||delta a(P)||`.
pub struct ConeFillings {
    complex: Arc<Complex>,
    tree: SpanningTree,
    fill_budget: usize,
    fillings: Vec<(EdgeId, std::result::Result<Filling, String>)>,
    kappa: Option<Rational>,
}

impl ConeFillings {
    pub fn new(x: Arc<Complex>, root: VertexId, radius_budget: usize, fill_budget: usize) -> Result<Self> {
        let tree = x.spanning_tree(root)?;
        if tree.radius() > radius_budget {
            return Err(Error::Precondition(format!(
                "BFS tree at vertex {} has radius {} > budget {radius_budget}",
                root.0,
                tree.radius()
            )));
        }
        let search = FillingSearch::new(&x);
        let loops: Vec<(EdgeId, Vec<_>)> = (0..x.n_edges())
            .filter(|&e| !tree.in_tree[e])
            .map(|e| {
                let o = x.oriented(EdgeId(e), false);
                let mut path = tree.path_from_root(o.src);
                path.push(o);
                path.extend(tree.path_to_root(o.dst));
                (EdgeId(e), path)
            })
            .collect();
        let fillings: Vec<_> = loops
            .par_iter()
            .map(|(e, path)| (*e, search.fill(path, fill_budget).map_err(|err| err.to_string())))
            .collect();
        let kappa = load_factor(&x, &fillings);
        Ok(ConeFillings { complex: x, tree, fill_budget, fillings, kappa })
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn fillings(&self) -> &[(EdgeId, std::result::Result<Filling, String>)] {
        &self.fillings
    }

    pub fn all_filled(&self) -> bool {
        self.fillings.iter().all(|(_, f)| f.is_ok())
    }

    pub fn largest_filling(&self) -> Option<usize> {
        self.fillings.iter().filter_map(|(_, f)| f.as_ref().ok().map(Filling::size)).max()
    }

    /// `max_P sum_e mu1(e) mult_e(P) / mu2(P)`; the cone bound gives
    /// `d(a, Z^1) <= kappa ||delta a||`. `None` if a filling failed or uses a
    /// polygon of zero mass.
    pub fn kappa(&self) -> Option<Rational> {
        self.kappa
    }

    pub fn correct(&self, a: &Cochain1) -> Result<CorrectionCertificate> {
        if **a.complex() != *self.complex {
            return Err(Error::ComplexMismatch);
        }
        let (beta, normal) = a.tree_normalize(&self.tree)?;
        let output = beta.inverse().delta();
        let distance = a.distance_exact(&output)?;
        debug_assert_eq!(distance, normal.norm_exact());
        let delta = a.delta();
        let defect = delta.norm_exact();
        let mu1 = &self.complex.measures().mu1;
        let failed = self.fillings.iter().filter(|(_, f)| f.is_err()).count();
        let instance_bound = (failed == 0).then(|| {
            self.fillings
                .iter()
                .map(|(e, f)| {
                    let f = f.as_ref().expect("no failures");
                    let sum: Rational = f.cells.iter().map(|c| delta.value(c.polygon.polygon).norm_exact()).sum();
                    mu1.prob_exact(e.0) * sum
                })
                .sum::<Rational>()
        });
        Ok(CorrectionCertificate {
            input: a.clone(),
            output,
            distance,
            defect,
            claimed_factor: (failed == 0).then(|| Rational::from_integer(self.fill_budget as i128)),
            instance_bound,
            detail: Detail::Cone {
                root: self.tree.root.0,
                radius: self.tree.radius(),
                loops: self.fillings.len(),
                failed_fillings: failed,
                largest_filling: self.largest_filling(),
                kappa: self.kappa.map(Exact::from),
            },
        })
    }
}

fn load_factor(x: &Complex, fillings: &[(EdgeId, std::result::Result<Filling, String>)]) -> Option<Rational> {
    let mu1 = &x.measures().mu1;
    let mu2 = &x.measures().mu2;
    let mut load = vec![Rational::from_integer(0); x.n_polygons()];
    for (e, f) in fillings {
        for c in &f.as_ref().ok()?.cells {
            load[c.polygon.polygon.0] += mu1.prob_exact(e.0);
        }
    }
    let mut worst = Rational::from_integer(0);
    for (p, l) in load.iter().enumerate() {
        if *l == Rational::from_integer(0) {
            continue;
        }
        if mu2.weights()[p] == 0 {
            return None;
        }
        worst = worst.max(l / mu2.prob_exact(p));
    }
    Some(worst)
}

/// Cone correction with a fresh [`ConeFillings`]; reuse the fillings
/// directly when correcting many cochains on one complex.
pub fn correct_cone(a: &Cochain1, root: VertexId, radius_budget: usize, fill_budget: usize) -> Result<CorrectionCertificate> {
    ConeFillings::new(a.complex().clone(), root, radius_budget, fill_budget)?.correct(a)
}
