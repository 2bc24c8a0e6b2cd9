//! Solenoidal Beltrami fields `w = cos σ(θ) ∇ψ + sin σ(θ) ∇ℓ`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::{FieldError, FieldModel, Frame, Invariant, Sigma, VectorFieldEval, DEGENERATE_FLOOR};
use crate::calculus::{curl, StencilConfig};
use crate::charts::{alpha_reparam, check_theorem1_hypothesis, AxisOrder, Chart};
use crate::harmonic::OrientedPair;
use crate::sampling::CoordBox;
use crate::Vec3;

const HYPOTHESIS_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeltramiSpec {
    pub chart: Chart,
    pub order: AxisOrder,
    pub pair: OrientedPair,
    pub sigma: Sigma,
}

impl BeltramiSpec {
    pub fn frame(&self) -> Result<Frame, FieldError> {
        Ok(Frame::Chart {
            chart: self.chart,
            order: self.order,
            alpha: alpha_reparam(&self.chart, self.order)?,
            pair: self.pair,
        })
    }
}

/// Box in natural chart coordinates on which the reduction hypothesis is
/// sampled before a field is built.
pub fn hypothesis_region(chart: &Chart) -> CoordBox {
    match chart {
        Chart::Cartesian => CoordBox::new([-1.0; 3], [1.0; 3]),
        Chart::Cylindrical { .. } => CoordBox::new([0.5, 0.2, -1.0], [1.5, 1.4, 1.0]),
        Chart::Spherical { .. } => CoordBox::new([0.5, 0.3, 0.2], [1.5, PI - 0.3, 2.8]),
        Chart::Toroidal { .. } => CoordBox::new([0.2, 0.0, -0.5], [0.8, 1.0, 0.5]),
    }
}

#[derive(Debug)]
struct BeltramiModel {
    frame: Frame,
    sigma: Sigma,
}

impl FieldModel for BeltramiModel {
    fn value(&self, p: Vec3) -> Vec3 {
        let j = self.frame.jet(p);
        let (s, c) = self.sigma.value(j.theta).sin_cos();
        j.grad_psi * c + j.grad_ell * s
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        self.frame.is_cleared(p)
    }
}

/// Invariants `θ` and `L_θ = ℓ cos σ(θ) − ψ sin σ(θ)` of a frame-built field.
pub(crate) fn frame_invariants(frame: Frame, sigma: Sigma) -> Vec<Invariant> {
    let (theta_name, l_name) = frame.invariant_names();
    vec![
        Invariant::new(theta_name, move |p| frame.jet(p).theta),
        Invariant::new(l_name, move |p| {
            let j = frame.jet(p);
            let (s, c) = sigma.value(j.theta).sin_cos();
            j.ell * c - j.psi * s
        }),
    ]
}

pub fn build_solenoidal_beltrami(spec: &BeltramiSpec) -> Result<VectorFieldEval, FieldError> {
    let frame = spec.frame()?;
    let check = check_theorem1_hypothesis(
        &spec.chart,
        spec.order,
        &hypothesis_region(&spec.chart),
        HYPOTHESIS_SAMPLES,
    );
    if !check.passes {
        return Err(FieldError::HypothesisViolated {
            chart: spec.chart.name(),
            order: spec.order.0,
            max_violation: check.max_violation,
        });
    }
    let model = BeltramiModel {
        frame,
        sigma: spec.sigma,
    };
    Ok(VectorFieldEval::new(
        format!("beltrami/{}/{}", spec.chart.name(), spec.pair.pair.name()),
        Arc::new(model),
        frame_invariants(frame, spec.sigma),
    ))
}

/// `(w · ∇×w) / |w|²` with a numerical curl.
pub fn proportionality_factor(field: &VectorFieldEval, p: Vec3, cfg: &StencilConfig) -> Result<f64, FieldError> {
    let w = field.eval(p)?;
    let w2 = w.norm_squared();
    if w2 < DEGENERATE_FLOOR {
        return Err(FieldError::DegenerateField { x: p.x, y: p.y, z: p.z });
    }
    let c = curl(&|q| field.try_eval(q), p, cfg.h)?;
    Ok(w.dot(&c) / w2)
}

/// Closed-form factor `ε σ'(θ) |∇θ|` with `ε` the handedness of `(ℓ, ψ, θ)`.
pub fn predicted_proportionality(frame: &Frame, sigma: &Sigma, p: Vec3) -> f64 {
    let j = frame.jet(p);
    j.handedness() * sigma.derivative(j.theta) * j.grad_theta.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{theorem_ordering, TorusSide};
    use crate::harmonic::ConjugatePair;

    fn spec(chart: Chart, pair: OrientedPair, sigma: Sigma) -> BeltramiSpec {
        BeltramiSpec {
            chart,
            order: theorem_ordering(&chart).unwrap(),
            pair,
            sigma,
        }
    }

    #[test]
    fn cartesian_linear_values() {
        let f = build_solenoidal_beltrami(&spec(
            Chart::Cartesian,
            OrientedPair::direct(ConjugatePair::Linear),
            Sigma::IDENTITY,
        ))
        .unwrap();
        let w = f.eval(Vec3::new(0.3, -0.2, 0.0)).unwrap();
        assert!((w - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        let z = 0.7f64;
        let w = f.eval(Vec3::new(0.1, 0.1, z)).unwrap();
        assert!((w - Vec3::new(z.sin(), z.cos(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn factor_is_one_for_cartesian_linear() {
        let f = build_solenoidal_beltrami(&spec(
            Chart::Cartesian,
            OrientedPair::direct(ConjugatePair::Linear),
            Sigma::IDENTITY,
        ))
        .unwrap();
        let h = proportionality_factor(&f, Vec3::new(0.2, 0.5, -0.4), &StencilConfig::default()).unwrap();
        assert!((h - 1.0).abs() < 1e-7);
    }

    #[test]
    fn zero_profile_is_irrotational() {
        let s = spec(
            Chart::spherical(),
            OrientedPair::direct(ConjugatePair::Exponential),
            Sigma::Zero,
        );
        let f = build_solenoidal_beltrami(&s).unwrap();
        let p = Vec3::new(0.5, 0.4, 0.3);
        let h = proportionality_factor(&f, p, &StencilConfig::default()).unwrap();
        assert!(h.abs() < 1e-6);
        assert_eq!(predicted_proportionality(&s.frame().unwrap(), &s.sigma, p), 0.0);
    }

    #[test]
    fn figure_one_factor_is_minus_one() {
        let s = spec(
            Chart::spherical(),
            OrientedPair::swapped(ConjugatePair::Linear),
            Sigma::IDENTITY,
        );
        let f = build_solenoidal_beltrami(&s).unwrap();
        let p = Vec3::new(0.6, 0.1, 0.8);
        let h = proportionality_factor(&f, p, &StencilConfig::default()).unwrap();
        assert!((h + 1.0).abs() < 1e-6, "{h}");
        assert!((predicted_proportionality(&s.frame().unwrap(), &s.sigma, p) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn toroidal_chart_is_rejected() {
        let s = BeltramiSpec {
            chart: Chart::toroidal(TorusSide::Outer),
            order: AxisOrder::NATURAL,
            pair: OrientedPair::direct(ConjugatePair::Linear),
            sigma: Sigma::IDENTITY,
        };
        assert!(build_solenoidal_beltrami(&s).is_err());
    }

    #[test]
    fn degenerate_field_is_reported() {
        let f = VectorFieldEval::from_fn("zero", |_| Vec3::zeros(), |_| true);
        let err = proportionality_factor(&f, Vec3::zeros(), &StencilConfig::default()).unwrap_err();
        assert!(matches!(err, FieldError::DegenerateField { .. }));
    }
}
