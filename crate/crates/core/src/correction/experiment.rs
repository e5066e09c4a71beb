use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{correct_complete, correct_exact, ConeFillings, CorrectionCertificate, Method};
use crate::cochain::{Cochain0, Cochain1};
use crate::complex::{Complex, VertexId};
use crate::covering::enumerate_cocycles_with;
use crate::error::{Error, Result};
use crate::search::random_permutation;

/// Cocycle enumeration limit before falling back to coboundaries.
const ENUMERATION_LIMIT: f64 = 1e5;

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p_corrupt: f64,
    pub trials: usize,
    pub method: Method,
    pub seed: u64,
    /// Cone method only.
    pub root: usize,
    pub radius_budget: usize,
    pub fill_budget: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 2,
            p_corrupt: 0.1,
            trials: 100,
            method: Method::Exact,
            seed: 42,
            root: 0,
            radius_budget: 3,
            fill_budget: 25,
        }
    }
}

/// One trial; `seed` is the trial's own seed, `config.seed + trial`.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRow {
    pub trial: usize,
    pub defect: f64,
    pub distance: f64,
    pub ratio: Option<f64>,
    pub method: Method,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub rows: Vec<ExperimentRow>,
    pub certificates: Vec<CorrectionCertificate>,
    /// Whether clean cocycles came from enumeration (else from coboundaries).
    pub enumerated: bool,
    pub largest_filling: Option<usize>,
}

impl ExperimentResult {
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    /// Whether every claimed inequality held.
    pub fn all_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds() != Some(false))
    }
}

/// Samples a cocycle, corrupts each edge with probability `p_corrupt` by a
/// uniform permutation, and corrects it, once per trial.
pub fn stability_experiment(x: Arc<Complex>, config: &ExperimentConfig) -> Result<ExperimentResult> {
    if !(0.0..=1.0).contains(&config.p_corrupt) {
        return Err(Error::InvalidArgument(format!("p_corrupt = {} is not a probability", config.p_corrupt)));
    }
    let cone = match config.method {
        Method::Cone => Some(ConeFillings::new(
            x.clone(),
            VertexId(config.root),
            config.radius_budget,
            config.fill_budget,
        )?),
        _ => None,
    };
    let reps = enumerate_cocycles_with(&x, config.n, ENUMERATION_LIMIT).ok();
    let certificates = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = config.seed.wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let beta = Cochain0::random(x.clone(), config.n, &mut rng);
            let clean = match &reps {
                Some(reps) => reps[rng.random_range(0..reps.len())].act(&beta)?,
                None => beta.delta(),
            };
            let a = corrupt(&clean, config.p_corrupt, &mut rng)?;
            match (&cone, config.method) {
                (Some(c), _) => c.correct(&a),
                (None, Method::Complete) => correct_complete(&a),
                _ => correct_exact(&a),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = certificates
        .iter()
        .enumerate()
        .map(|(trial, c)| ExperimentRow {
            trial,
            defect: crate::to_f64(&c.defect),
            distance: crate::to_f64(&c.distance),
            ratio: c.ratio().map(|r| crate::to_f64(&r)),
            method: config.method,
            seed: config.seed.wrapping_add(trial as u64),
        })
        .collect();
    Ok(ExperimentResult {
        rows,
        certificates,
        enumerated: reps.is_some(),
        largest_filling: cone.as_ref().and_then(ConeFillings::largest_filling),
    })
}

fn corrupt(a: &Cochain1, p: f64, rng: &mut impl Rng) -> Result<Cochain1> {
    let values = a
        .values()
        .iter()
        .map(|v| if rng.random_bool(p) { random_permutation(a.degree(), rng) } else { v.clone() })
        .collect();
    Cochain1::with_degree(a.complex().clone(), a.degree(), values)
}

/// CSV with columns `trial, defect, distance, ratio, method, seed`.
pub fn write_csv(rows: &[ExperimentRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}
