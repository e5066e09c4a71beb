//! Serializable values shared by every report.

use serde::{Deserialize, Serialize};

use crate::Rational;

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// An exact rational with its float value alongside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub value: f64,
    pub fraction: String,
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact { value: crate::to_f64(&r), fraction: r.to_string() }
    }
}

impl From<&Rational> for Exact {
    fn from(r: &Rational) -> Self {
        Exact::from(*r)
    }
}

/// A reported constant: exact, bracketed, or infinite (never a sentinel).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Value {
    Exact { value: f64, fraction: String },
    /// `lower` is certified when present; `upper` is realized by a witness.
    Interval { lower: Option<f64>, upper: Option<f64> },
    Infinite,
}

impl Value {
    pub fn exact(r: Rational) -> Self {
        let e = Exact::from(r);
        Value::Exact { value: e.value, fraction: e.fraction }
    }

    /// The exact value, or the witnessed upper end of an interval.
    pub fn upper(&self) -> Option<f64> {
        match self {
            Value::Exact { value, .. } => Some(*value),
            Value::Interval { upper, .. } => *upper,
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinite)
    }
}

/// Numerical tolerances, echoed in every report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalue agreement.
    pub eigenvalue: f64,
    /// Slack allowed on floating-point inequality checks.
    pub inequality: f64,
    /// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
    pub jacobi: f64,
    /// Agreement of a re-evaluated witness ratio with its report.
    pub witness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eigenvalue: 1e-10, inequality: 1e-9, jacobi: 1e-12, witness: 1e-12 }
    }
}
