//! Correction of near-cocycles: fillings, the apex argument on complete
//! complexes, cone correction on bounded-radius complexes, the small-ratio
//! witnesses on contracted presentations, and stability experiments.
//!
//! Every corrector returns a [`CorrectionCertificate`] whose numbers can be
//! re-derived from the input and output cochains alone.

mod cone;
mod experiment;
mod filling;
mod presentations;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cochain::{Cochain0, Cochain1, CochainFile, Coefficient, SearchMode};
use crate::complex::{complete_complex, VertexId};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::report::Exact;
use crate::Rational;

pub use cone::{correct_cone, ConeFillings};
pub use experiment::{stability_experiment, write_csv, ExperimentConfig, ExperimentResult, ExperimentRow};
pub use filling::{cyclic_reduce, free_reduce, filling_search, Filling, FillingBudget, FillingCell, FillingSearch};
pub use presentations::{small_cheeger_presentation, small_cheeger_witness, SmallCheegerWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Complete,
    Cone,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Complete => "complete",
            Method::Cone => "cone",
            Method::Exact => "exact",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Method::Complete),
            "cone" => Ok(Method::Cone),
            "exact" => Ok(Method::Exact),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?} (complete, cone, exact)"))),
        }
    }
}

/// Method-specific evidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Detail {
    Complete {
        apex: usize,
        /// `||b_x . a||` for every apex `x`.
        apex_norms: Vec<Exact>,
        /// Whether `||delta a|| = (d+1)/(d-1) * mean_x ||b_x . a||` held exactly.
        averaging_identity: bool,
    },
    Cone {
        root: usize,
        radius: usize,
        loops: usize,
        failed_fillings: usize,
        largest_filling: Option<usize>,
        /// Largest polygon load `sum_e mu1(e) mult_e(P) / mu2(P)`.
        kappa: Option<Exact>,
    },
    Exact {
        exact: bool,
    },
}

#[derive(Clone, Debug)]
pub struct CorrectionCertificate {
    pub input: Cochain1,
    pub output: Cochain1,
    /// `d(input, output)`.
    pub distance: Rational,
    /// `||delta input||`.
    pub defect: Rational,
    /// `distance <= claimed_factor * defect` is claimed.
    pub claimed_factor: Option<Rational>,
    /// A bound on `distance` derived for this input alone.
    pub instance_bound: Option<Rational>,
    pub detail: Detail,
}

impl CorrectionCertificate {
    pub fn method(&self) -> Method {
        match self.detail {
            Detail::Complete { .. } => Method::Complete,
            Detail::Cone { .. } => Method::Cone,
            Detail::Exact { .. } => Method::Exact,
        }
    }

    /// `distance / defect`, undefined at zero defect.
    pub fn ratio(&self) -> Option<Rational> {
        (self.defect != Rational::from_integer(0)).then(|| self.distance / self.defect)
    }

    /// Whether the claimed inequality holds; `None` when nothing is claimed.
    pub fn holds(&self) -> Option<bool> {
        self.claimed_factor.map(|f| self.distance <= f * self.defect)
    }

    /// Re-derives every number from the two cochains.
    pub fn recheck(&self) -> Result<()> {
        if !self.output.is_cocycle() {
            return Err(Error::Precondition("correction output is not a cocycle".into()));
        }
        if self.input.distance_exact(&self.output)? != self.distance {
            return Err(Error::Precondition("recorded distance does not reproduce".into()));
        }
        if self.input.delta().norm_exact() != self.defect {
            return Err(Error::Precondition("recorded defect does not reproduce".into()));
        }
        if self.instance_bound.is_some_and(|b| self.distance > b) {
            return Err(Error::Precondition("distance exceeds the instance bound".into()));
        }
        Ok(())
    }

    pub fn report(&self, coefficient: Coefficient) -> CertificateReport {
        CertificateReport {
            method: self.method(),
            degree: self.input.degree(),
            distance: self.distance.into(),
            defect: self.defect.into(),
            ratio: self.ratio().map(Exact::from),
            claimed_factor: self.claimed_factor.map(Exact::from),
            instance_bound: self.instance_bound.map(Exact::from),
            holds: self.holds(),
            output_is_cocycle: self.output.is_cocycle(),
            output: CochainFile::from_cochain1(&self.output, coefficient),
            detail: self.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub method: Method,
    pub degree: usize,
    pub distance: Exact,
    pub defect: Exact,
    pub ratio: Option<Exact>,
    pub claimed_factor: Option<Exact>,
    pub instance_bound: Option<Exact>,
    pub holds: Option<bool>,
    pub output_is_cocycle: bool,
    pub output: CochainFile,
    pub detail: Detail,
}

/// Star normalization at the best apex of a complete complex.
///
/// For apex `x`, `b_x(y) = a(y -> x)` makes `b_x . a` the identity on the
/// star of `x`; the output is `delta0(b_x^-1)`, the identity cochain seen
/// from those coordinates, so `d(a, output) = ||b_x . a||`.
pub fn correct_complete(a: &Cochain1) -> Result<CorrectionCertificate> {
    let x = a.complex();
    let nv = x.n_vertices();
    if nv < 3 || **x != complete_complex(nv - 1)? {
        return Err(Error::Precondition("correct_complete needs an unmodified complete complex".into()));
    }
    let d = (nv - 1) as i128;
    let n = a.degree();
    let mut best: Option<(Rational, usize, Cochain0)> = None;
    let mut norms = Vec::with_capacity(nv);
    for apex in 0..nv {
        let values = (0..nv)
            .map(|y| {
                if y == apex {
                    return Permutation::identity(n);
                }
                let o = x.outgoing(VertexId(y)).iter().find(|o| o.dst == VertexId(apex)).expect("complete graph");
                a.on(*o)
            })
            .collect();
        let beta = Cochain0::new(x.clone(), values)?;
        let norm = a.act(&beta)?.norm_exact();
        norms.push(norm);
        if best.as_ref().is_none_or(|(b, _, _)| norm < *b) {
            best = Some((norm, apex, beta));
        }
    }
    let (norm, apex, beta) = best.expect("at least three apexes");
    let output = beta.inverse().delta();
    let distance = a.distance_exact(&output)?;
    debug_assert_eq!(distance, norm);
    let defect = a.delta().norm_exact();
    let mean: Rational = norms.iter().sum::<Rational>() / Rational::from_integer(nv as i128);
    let averaging_identity = defect == Rational::new(d + 1, d - 1) * mean;
    Ok(CorrectionCertificate {
        input: a.clone(),
        output,
        distance,
        defect,
        claimed_factor: Some(Rational::new(d - 1, d + 1)),
        instance_bound: Some(mean),
        detail: Detail::Complete { apex, apex_norms: norms.iter().map(Exact::from).collect(), averaging_identity },
    })
}

/// The nearest cocycle by exhaustive search (desk-scale only).
pub fn correct_exact(a: &Cochain1) -> Result<CorrectionCertificate> {
    let r = a.dist_to_cocycles(SearchMode::Exact)?;
    Ok(CorrectionCertificate {
        input: a.clone(),
        defect: a.delta().norm_exact(),
        distance: r.distance,
        instance_bound: Some(r.distance),
        output: r.nearest,
        claimed_factor: None,
        detail: Detail::Exact { exact: r.exact },
    })
}

/// `||a(loop)||` against `sum_i ||a(pi_i)||` for a filling of the loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectBound {
    pub loop_norm: Rational,
    pub cell_sum: Rational,
    pub holds: bool,
}

pub fn filling_defect_bound(a: &Cochain1, f: &Filling) -> Result<DefectBound> {
    f.verify(a.complex())?;
    let loop_norm = a.evaluate_path(&f.target)?.norm_exact();
    let cell_sum = f.cells.iter().map(|c| a.evaluate_polygon(&c.polygon).norm_exact()).sum();
    Ok(DefectBound { loop_norm, cell_sum, holds: loop_norm <= cell_sum })
}


#[cfg(test)]
mod tests;
