//! Machine-readable experiment reports.
//!
//! Every report serializes to JSON with a stable schema version; numeric
//! fields round-trip exactly at 17 significant digits.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of an exponential-decay slope experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub schema_version: u32,
    pub h_list: Vec<f64>,
    /// log of the measured norms, one per h (empty when exactly zero).
    pub log_norms: Vec<f64>,
    /// Fitted slope of log norm against 1/h; absent for the exact-zero case.
    pub fitted_slope: Option<f64>,
    /// Slope allowed by the bound being tested.
    pub bound_slope: f64,
    pub slope_tol: f64,
    pub fit_residual: Option<f64>,
    /// Set when the linear fit does not describe the data.
    pub inconclusive: bool,
    pub note: Option<String>,
    pub pass: bool,
}

/// One offending (or worst) node of a pointwise bound check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundSample {
    /// (Re z1, Im z1, Re z2, Im z2) of the grid node.
    pub node: [f64; 4],
    /// log |Tf| measured at the node.
    pub lhs: f64,
    /// log of the bound at the node.
    pub rhs: f64,
    /// rhs - lhs; negative means violation.
    pub slack: f64,
}

/// Outcome of a pointwise exponential bound check over a grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub description: String,
    pub checked_nodes: usize,
    /// Worst slack over the grid (negative = violation); None when every
    /// value was exactly zero.
    pub worst: Option<BoundSample>,
    pub tol: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn empty(description: &str, tol: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            description: description.to_string(),
            checked_nodes: 0,
            worst: None,
            tol,
            pass: true,
        }
    }
}

/// Barrier-propagation verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarrierVerdict {
    pub schema_version: u32,
    pub delta: f64,
    /// Hypothesis constant used for the excluded-disc bound.
    pub c: f64,
    pub c_prime: f64,
    /// max over the strip of f - phi (<= tol on success).
    pub max_slack: f64,
    pub pass: bool,
}

/// Convergence table row for source-superposition approximation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_sources: usize,
    pub l2_error: f64,
    pub lambda: f64,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_report_round_trips() {
        let r = DecayReport {
            schema_version: SCHEMA_VERSION,
            h_list: vec![0.4, 0.25, 0.15],
            log_norms: vec![-1.0, -2.0, -3.5],
            fitted_slope: Some(-0.6000000000000001),
            bound_slope: -0.2,
            slope_tol: 0.05,
            fit_residual: Some(0.01),
            inconclusive: false,
            note: None,
            pass: true,
        };
        let s = to_json_pretty(&r);
        let back: DecayReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.fitted_slope, r.fitted_slope);
        assert_eq!(back.h_list, r.h_list);
    }
}
