//! Central-difference operators and the residual suites built on them.

use serde::Serialize;
use thiserror::Error;

mod operators;
mod residuals;

pub use operators::{curl, curl_of, directional, div, grad, jacobian, laplacian};
pub use residuals::{
    advection_residual, boundary_tangency, check_hamiltonian_structure, check_prop5_identity, curl_advection_residual,
    divergence_match, residual_beltrami, residual_force_balance, residual_geometric_conditions,
    residual_proportionality, run_analytic_check, run_check, singularity_scan, BeltramiResidual, CheckContext,
    PointResidual, ScanRow, ROUNDOFF_FLOOR,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalculusError {
    #[error("stencil point ({x}, {y}, {z}) lies outside the cleared domain")]
    StencilEscape { x: f64, y: f64, z: f64 },
    #[error("|∇χ × ∇π| = {norm:e} at ({x}, {y}, {z}) is below the floor")]
    DegeneratePair { x: f64, y: f64, z: f64, norm: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StencilConfig {
    pub h: f64,
    /// Also evaluate at `h/2` and report the observed order.
    pub richardson: bool,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self {
            h: 1e-4,
            richardson: false,
        }
    }
}

/// Outcome of one check on one case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub case_id: String,
    pub check_name: String,
    pub max_residual: f64,
    /// Root-mean-square over the sample points.
    pub l2_residual: f64,
    pub h: f64,
    pub n_points: usize,
    pub order_estimate: Option<f64>,
    pub pass: bool,
    pub expected_failure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub tolerance: f64,
}

impl ResidualReport {
    /// Report for a check that could not be evaluated.
    pub fn failed(case_id: &str, check_name: &str, h: f64, error: impl ToString) -> Self {
        Self {
            case_id: case_id.to_string(),
            check_name: check_name.to_string(),
            max_residual: f64::INFINITY,
            l2_residual: f64::INFINITY,
            h,
            n_points: 0,
            order_estimate: None,
            pass: false,
            expected_failure: false,
            error: Some(error.to_string()),
            tolerance: 0.0,
        }
    }

    /// Report for a single scalar outcome.
    pub fn scalar(case_id: &str, check_name: &str, value: f64, tolerance: f64, n_points: usize) -> Self {
        Self {
            case_id: case_id.to_string(),
            check_name: check_name.to_string(),
            max_residual: value,
            l2_residual: value,
            h: 0.0,
            n_points,
            order_estimate: None,
            pass: value < tolerance,
            expected_failure: false,
            error: None,
            tolerance,
        }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expected_failure = true;
        self
    }

    /// True when the outcome matches expectations.
    pub fn ok(&self) -> bool {
        self.pass != self.expected_failure
    }
}
