//! The weighted adjacency operator `A f(v) = E_{u ~ mu_{v,0}} f(u)` of the
//! 1-skeleton, its spectrum, link spectra and the bounds built on them.
//!
//! `A` is diagonalized through its symmetrization
//! `S(v, u) = W(v, u) / sqrt(W(v) W(u))`, where `W(v, u)` is the mass of
//! oriented edges from `v` to `u` (a loop counts in both directions) and
//! `W(v)` its row sum. `S` and `A` share eigenvalues; eigenvectors of `A`
//! are `f = g / sqrt(W)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cheeger::{cosystole_sym, h0_f2, H0Mode};
use crate::complex::{Complex, VertexId};
use crate::covering::{covering_from_cochain, enumerate_cocycles};
use crate::error::{Error, Result};
use crate::report::{Tolerances, Value};

/// Eigenvalues in decreasing order with unit eigenvectors of `S`.
#[derive(Clone, Debug)]
pub struct GraphSpectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `W(v)`, in units of half an edge weight.
    pub degree_weights: Vec<f64>,
    /// The symmetrized matrix itself.
    pub matrix: Vec<Vec<f64>>,
}

fn weight_matrix(g: &Complex) -> Vec<Vec<f64>> {
    let n = g.n_vertices();
    let w1 = g.measures().mu1.weights();
    let mut w = vec![vec![0.0; n]; n];
    for (e, edge) in g.edges().iter().enumerate() {
        let x = w1[e] as f64;
        w[edge.src.0][edge.dst.0] += x;
        w[edge.dst.0][edge.src.0] += x;
    }
    w
}

/// Spectrum of the symmetrized operator. Every vertex needs positive weight.
pub fn graph_spectrum(g: &Complex) -> Result<GraphSpectrum> {
    graph_spectrum_with(g, Tolerances::default().jacobi)
}

pub fn graph_spectrum_with(g: &Complex, tol: f64) -> Result<GraphSpectrum> {
    let n = g.n_vertices();
    let w = weight_matrix(g);
    let deg: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    if let Some(v) = deg.iter().position(|&d| d <= 0.0) {
        return Err(Error::Precondition(format!("vertex {v} carries no edge weight")));
    }
    let matrix: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| w[i][j] / (deg[i] * deg[j]).sqrt()).collect()).collect();
    let (eigenvalues, vectors) = jacobi_eigen(matrix.clone(), tol);
    Ok(GraphSpectrum { eigenvalues, vectors, degree_weights: deg, matrix })
}

/// Cyclic Jacobi on a symmetric matrix until the off-diagonal Frobenius
/// norm drops below `tol`. Returns eigenvalues in decreasing order and the
/// matching unit eigenvectors.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>, tol: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let off = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..100 {
        if off(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondEigenvalue {
    pub lambda2: f64,
    pub eigenvalues: Vec<f64>,
    pub connected: bool,
    /// Vertices of one component when disconnected.
    pub component: Option<Vec<usize>>,
    /// `max_v |A 1 - 1|`.
    pub constant_residual: f64,
}

/// `lambda2` of `A` under the `mu0` inner product; `mu0` must descend from `mu1`.
pub fn second_eigenvalue(g: &Complex) -> Result<SecondEigenvalue> {
    if g.n_vertices() < 2 {
        return Err(Error::Precondition("second eigenvalue needs at least two vertices".into()));
    }
    if !g.is_descending(0) {
        return Err(Error::Precondition("vertex measure does not descend from the edge measure".into()));
    }
    if !g.is_connected() {
        let component = (0..g.n_vertices()).filter(|&v| g.component_of(VertexId(v)) == 0).collect();
        return Ok(SecondEigenvalue {
            lambda2: 1.0,
            eigenvalues: Vec::new(),
            connected: false,
            component: Some(component),
            constant_residual: 0.0,
        });
    }
    let spec = graph_spectrum(g)?;
    let sq: Vec<f64> = spec.degree_weights.iter().map(|d| d.sqrt()).collect();
    let constant_residual = (0..g.n_vertices())
        .map(|i| ((0..g.n_vertices()).map(|j| spec.matrix[i][j] * sq[j]).sum::<f64>() / sq[i] - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(SecondEigenvalue {
        lambda2: spec.eigenvalues[1],
        eigenvalues: spec.eigenvalues,
        connected: true,
        component: None,
        constant_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkEntry {
    pub vertex: usize,
    pub size: usize,
    pub lambda2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSpectrum {
    pub links: Vec<LinkEntry>,
    pub local_lambda: f64,
}

/// Checks that `x` is pure and simplicial with descending measures.
fn check_local(x: &Complex) -> Result<()> {
    if !x.is_simplicial() {
        return Err(Error::Precondition("links need a simplicial complex".into()));
    }
    if let Some(cell) = x.orphan() {
        return Err(Error::Precondition(format!("complex is not pure: {cell} has no coface")));
    }
    if x.n_polygons() == 0 {
        return Err(Error::Precondition("complex has no triangles".into()));
    }
    if !x.is_descending(0) || !x.is_descending(1) {
        return Err(Error::Precondition("measures are not descending".into()));
    }
    Ok(())
}

/// `lambda2` of every vertex link and their maximum.
pub fn local_lambda(x: &Complex) -> Result<LocalSpectrum> {
    check_local(x)?;
    let links: Vec<LinkEntry> = (0..x.n_vertices())
        .into_par_iter()
        .map(|v| {
            let l = x.link(VertexId(v))?;
            let s = second_eigenvalue(&l.complex)?;
            Ok(LinkEntry { vertex: v, size: l.complex.n_vertices(), lambda2: s.lambda2 })
        })
        .collect::<Result<_>>()?;
    let local_lambda = links.iter().map(|l| l.lambda2).fold(f64::NEG_INFINITY, f64::max);
    Ok(LocalSpectrum { links, local_lambda })
}

#[derive(Clone, Debug, Serialize)]
pub struct TricklingCheck {
    pub local_lambda: Option<f64>,
    pub global_lambda2: Option<f64>,
    /// `lambda / (1 - lambda)`.
    pub bound: Option<f64>,
    pub holds: Option<bool>,
    /// Why the check was skipped.
    pub skipped: Option<String>,
    pub tolerances: Tolerances,
}

/// Global `lambda2 <= lambda / (1 - lambda)` for local `lambda < 1/2`.
/// Failed preconditions skip the check rather than falsify it.
pub fn trickling_check(x: &Complex, tol: Tolerances) -> Result<TricklingCheck> {
    let mut out = TricklingCheck {
        local_lambda: None,
        global_lambda2: None,
        bound: None,
        holds: None,
        skipped: None,
        tolerances: tol,
    };
    let skip = |mut out: TricklingCheck, why: String| {
        out.skipped = Some(why);
        Ok(out)
    };
    if !x.is_connected() {
        return skip(out, "complex is disconnected".into());
    }
    if [&x.measures().mu0, &x.measures().mu1, &x.measures().mu2].iter().any(|m| !m.is_fully_supported()) {
        return skip(out, "measures are not fully supported".into());
    }
    let local = match local_lambda(x) {
        Ok(l) => l.local_lambda,
        Err(Error::Precondition(why)) => return skip(out, why),
        Err(e) => return Err(e),
    };
    out.local_lambda = Some(local);
    if local >= 0.5 {
        return skip(out, format!("local lambda {local} is not below 1/2"));
    }
    let global = second_eigenvalue(x)?.lambda2;
    let bound = local / (1.0 - local);
    out.global_lambda2 = Some(global);
    out.bound = Some(bound);
    out.holds = Some(global <= bound + tol.inequality);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerLowerCheck {
    pub lambda2: f64,
    /// `1 - lambda2`.
    pub lower: f64,
    pub h0: Option<Value>,
    pub holds: Option<bool>,
}

/// `h0(G, F2) >= 1 - lambda2`, checked against exact `h0` when `|V| <= 24`.
pub fn weighted_cheeger_lower(g: &Complex, tol: Tolerances) -> Result<CheegerLowerCheck> {
    let s = second_eigenvalue(g)?;
    let lower = 1.0 - s.lambda2;
    let exact = (g.n_vertices() <= crate::cheeger::MASK_LIMIT).then(|| h0_f2(g, H0Mode::Exact)).transpose()?;
    let holds = exact.as_ref().and_then(|r| r.value.upper()).map(|h| h >= lower - tol.inequality);
    Ok(CheegerLowerCheck { lambda2: s.lambda2, lower, h0: exact.map(|r| r.value), holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverBound {
    pub local_lambda: f64,
    /// `(1 - 2 lambda) / (2 - 2 lambda)`, absent when vacuous.
    pub bound: Option<f64>,
    pub vacuous: bool,
}

/// Lower bound on the cosystole of every connected cover of a complex with
/// local spectral expansion `lambda`.
pub fn cover_cosystole_bound(lambda: f64) -> CoverBound {
    let vacuous = lambda >= 0.5;
    CoverBound {
        local_lambda: lambda,
        bound: (!vacuous).then(|| (1.0 - 2.0 * lambda) / (2.0 - 2.0 * lambda)),
        vacuous,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverLinkCheck {
    pub degree: usize,
    pub cover_vertices: usize,
    pub local_lambda: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverBoundCheck {
    pub bound: CoverBound,
    /// Cosystole of `x` over the tested degrees.
    pub cosystole: Value,
    /// Connected covers built from cocycles, with their link spectra.
    pub covers: Vec<CoverLinkCheck>,
    pub holds: bool,
    pub tolerances: Tolerances,
}

/// Evaluates the bound on `x` and checks it against the cosystole of `x`
/// and the local spectra of its connected covers up to degree `n_max`.
pub fn cover_bound_experiment(x: &Arc<Complex>, n_max: usize, tol: Tolerances) -> Result<CoverBoundCheck> {
    let local = local_lambda(x)?.local_lambda;
    let bound = cover_cosystole_bound(local);
    let cosystole = cosystole_sym(x, n_max)?;
    let mut holds = match (&bound.bound, cosystole.value.upper()) {
        (Some(b), Some(c)) => c >= b - tol.inequality,
        _ => true,
    };
    let mut covers = Vec::new();
    for n in 2..=n_max {
        for z in enumerate_cocycles(x, n)? {
            if !z.is_connected_cochain() {
                continue;
            }
            let y = covering_from_cochain(&z).to_complex()?;
            let l = local_lambda(&y)?.local_lambda;
            holds &= l <= local + tol.eigenvalue;
            covers.push(CoverLinkCheck { degree: n, cover_vertices: y.n_vertices(), local_lambda: l });
        }
    }
    Ok(CoverBoundCheck { bound, cosystole: cosystole.value, covers, holds, tolerances: tol })
}

#[cfg(test)]
mod tests;
