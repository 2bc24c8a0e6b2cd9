//! Constructed fields: solenoidal Beltrami, generalized Beltrami, ideal MHD
//! equilibria and steady Euler flows, plus the characteristics solver used
//! to build flux functions from a pressure profile.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::CalculusError;
use crate::charts::ChartError;
use crate::Vec3;

mod beltrami;
mod catalog;
mod characteristics;
mod euler;
mod frame;
mod generalized;
mod mhd;

pub use beltrami::{
    build_solenoidal_beltrami, hypothesis_region, predicted_proportionality, proportionality_factor, BeltramiSpec,
};
pub use catalog::{catalog, recipe, Domain, FieldRecipe, RecipeSpec};
pub use characteristics::{
    characteristic_value, solve_characteristics, CharacteristicsGrid, Grid2, SeedCurve, TraceOptions,
};
pub use euler::{build_euler_flow, EulerCase, EulerClosedForms};
pub use frame::{Frame, FrameJet};
pub use generalized::{build_generalized_beltrami, Amplitude, GeneralizedSpec};
pub use mhd::{build_mhd_equilibrium, eq2s_residual, MhdCase, MhdClosedForms};

/// Floor on `|w|²` below which a field is treated as vanishing.
pub const DEGENERATE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(
        "{chart} chart with ordering {order:?} violates the reduction hypothesis (max violation {max_violation:e})"
    )]
    HypothesisViolated {
        chart: &'static str,
        order: [usize; 3],
        max_violation: f64,
    },
    #[error("field vanishes at ({x}, {y}, {z})")]
    DegenerateField { x: f64, y: f64, z: f64 },
    #[error("scale factors |∇ℓ| = {grad_ell}, |∇ψ| = {grad_psi} at ({x}, {y}, {z}); expected {expected}")]
    ScaleFactorMismatch {
        x: f64,
        y: f64,
        z: f64,
        grad_ell: f64,
        grad_psi: f64,
        expected: f64,
    },
    #[error("amplitude {value} at ({x}, {y}, {z}) must be positive for a fractional power")]
    NonPositiveAmplitude { x: f64, y: f64, z: f64, value: f64 },
    #[error("kappa = {0} is not a generalized Beltrami exponent")]
    InvalidKappa(f64),
    #[error("pressure gradient vanishes at ({x}, {y}, {z})")]
    DegeneratePressure { x: f64, y: f64, z: f64 },
    #[error("coordinates {pair} are not orthogonal at ({x}, {y}, {z}) (cosine {cosine:e})")]
    NonOrthogonal {
        pair: &'static str,
        x: f64,
        y: f64,
        z: f64,
        cosine: f64,
    },
    #[error("|∇C|² depends on μ at ({x}, {y}, {z}) (derivative {derivative:e})")]
    MetricDependsOnMu { x: f64, y: f64, z: f64, derivative: f64 },
    #[error("λ² = {value} < 0 at ({x}, {y}, {z})")]
    NegativeRadicand { x: f64, y: f64, z: f64, value: f64 },
    #[error("c - P = {margin} below margin at ({x}, {y}, {z})")]
    ConstantViolation { x: f64, y: f64, z: f64, margin: f64 },
    #[error("|∇P| vanishes along the characteristic through ({x}, {y})")]
    CriticalPoint { x: f64, y: f64 },
    #[error("characteristic through ({x}, {y}) left the trace box before reaching the seed curve")]
    EscapedDomain { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SolenoidalBeltrami,
    GeneralizedBeltrami,
    MhdEquilibrium,
    EulerFlow,
}

impl Kind {
    pub fn short_name(&self) -> &'static str {
        match self {
            Kind::SolenoidalBeltrami => "beltrami",
            Kind::GeneralizedBeltrami => "generalized",
            Kind::MhdEquilibrium => "mhd",
            Kind::EulerFlow => "euler",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        [
            Kind::SolenoidalBeltrami,
            Kind::GeneralizedBeltrami,
            Kind::MhdEquilibrium,
            Kind::EulerFlow,
        ]
        .into_iter()
        .find(|k| k.short_name() == name)
    }
}

/// Value and gradient of a scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: Vec3,
}

impl ScalarJet {
    pub fn new(value: f64, grad: Vec3) -> Self {
        Self { value, grad }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            value,
            grad: Vec3::zeros(),
        }
    }
}

/// Profile σ applied to the flow-plane coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Sigma {
    Zero,
    /// σ(t) = slope·t + offset
    Affine {
        slope: f64,
        offset: f64,
    },
}

impl Sigma {
    pub const IDENTITY: Sigma = Sigma::Affine {
        slope: 1.0,
        offset: 0.0,
    };

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Sigma::Zero => 0.0,
            Sigma::Affine { slope, offset } => slope * t + offset,
        }
    }

    pub fn derivative(&self, _t: f64) -> f64 {
        match self {
            Sigma::Zero => 0.0,
            Sigma::Affine { slope, .. } => *slope,
        }
    }
}

type ScalarFn = dyn Fn(Vec3) -> f64 + Send + Sync;

/// Named closed-form scalar claimed to be conserved along the flow.
#[derive(Clone)]
pub struct Invariant {
    name: String,
    f: Arc<ScalarFn>,
}

impl Invariant {
    pub fn new(name: impl Into<String>, f: impl Fn(Vec3) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: Vec3) -> f64 {
        (self.f)(p)
    }
}

impl fmt::Debug for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Invariant").field("name", &self.name).finish()
    }
}

/// Closed-form model behind a [`VectorFieldEval`].
pub trait FieldModel: Send + Sync + fmt::Debug {
    /// Field value; only meaningful where [`FieldModel::is_cleared`] holds.
    fn value(&self, p: Vec3) -> Vec3;
    fn is_cleared(&self, p: Vec3) -> bool;
    fn analytic_div(&self, _p: Vec3) -> Option<f64> {
        None
    }
}

/// Evaluator of a constructed field together with its invariants.
#[derive(Clone)]
pub struct VectorFieldEval {
    label: String,
    model: Arc<dyn FieldModel>,
    invariants: Vec<Invariant>,
}

impl fmt::Debug for VectorFieldEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorFieldEval")
            .field("label", &self.label)
            .field("model", &self.model)
            .field("invariants", &self.invariants)
            .finish()
    }
}

type VectorFn = dyn Fn(Vec3) -> Vec3 + Send + Sync;
type PredicateFn = dyn Fn(Vec3) -> bool + Send + Sync;

struct ClosureModel {
    value: Box<VectorFn>,
    cleared: Box<PredicateFn>,
}

impl fmt::Debug for ClosureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ClosureModel")
    }
}

impl FieldModel for ClosureModel {
    fn value(&self, p: Vec3) -> Vec3 {
        (self.value)(p)
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        (self.cleared)(p)
    }
}

impl VectorFieldEval {
    pub fn new(label: impl Into<String>, model: Arc<dyn FieldModel>, invariants: Vec<Invariant>) -> Self {
        Self {
            label: label.into(),
            model,
            invariants,
        }
    }

    /// Field given directly by closures, cleared where `cleared` holds.
    pub fn from_fn(
        label: impl Into<String>,
        value: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static,
        cleared: impl Fn(Vec3) -> bool + Send + Sync + 'static,
    ) -> Self {
        let model = ClosureModel {
            value: Box::new(value),
            cleared: Box::new(cleared),
        };
        Self::new(label, Arc::new(model), Vec::new())
    }

    pub fn with_invariant(mut self, invariant: Invariant) -> Self {
        self.invariants.push(invariant);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_cleared(&self, p: Vec3) -> bool {
        self.model.is_cleared(p)
    }

    pub fn eval(&self, p: Vec3) -> Result<Vec3, FieldError> {
        self.try_eval(p).ok_or(FieldError::Chart(ChartError::SingularPoint {
            chart: "field",
            x: p.x,
            y: p.y,
            z: p.z,
        }))
    }

    /// `None` outside the cleared domain.
    pub fn try_eval(&self, p: Vec3) -> Option<Vec3> {
        if self.model.is_cleared(p) {
            Some(self.model.value(p))
        } else {
            None
        }
    }

    /// Closed-form value without the clearance test, for probing the
    /// approach to the excluded set. May be non-finite on it.
    pub fn eval_unchecked(&self, p: Vec3) -> Vec3 {
        self.model.value(p)
    }

    pub fn analytic_div(&self, p: Vec3) -> Option<f64> {
        self.model.analytic_div(p)
    }

    pub fn invariants(&self) -> &[Invariant] {
        &self.invariants
    }

    pub fn invariant(&self, name: &str) -> Option<&Invariant> {
        self.invariants.iter().find(|i| i.name() == name)
    }
}
