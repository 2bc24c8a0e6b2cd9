//! Generalized Beltrami fields `w × (∇×w) = κ ∇w²`.
//!
//! For `κ = 1/2` the field is `a(θ, L_θ) ξ` with `ξ` the Beltrami field of a
//! unit-scale frame. For other exponents it is `a^{2κ} ξ` where the frame must
//! satisfy `|∇ℓ| = |∇ψ| = |a|^{1−2κ}`.

use std::sync::Arc;

use serde::Serialize;

use super::beltrami::frame_invariants;
use super::{FieldError, FieldModel, Frame, FrameJet, Sigma, VectorFieldEval};
use crate::Vec3;

const SCALE_TOL: f64 = 1e-8;

/// Amplitude as a function of the two invariants `(θ, L_θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Amplitude {
    Unit,
    Constant(f64),
    /// `sin(θ + L_θ)`
    SinSum,
}

impl Amplitude {
    pub fn value(&self, theta: f64, l: f64) -> f64 {
        match self {
            Amplitude::Unit => 1.0,
            Amplitude::Constant(a) => *a,
            Amplitude::SinSum => (theta + l).sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralizedSpec {
    pub frame: Frame,
    pub sigma: Sigma,
    pub amplitude: Amplitude,
    pub kappa: f64,
}

#[derive(Debug)]
struct GeneralizedModel {
    spec: GeneralizedSpec,
}

impl GeneralizedModel {
    fn parts(&self, j: &FrameJet) -> (f64, Vec3) {
        let sigma = self.spec.sigma.value(j.theta);
        let (s, c) = sigma.sin_cos();
        let l = j.ell * c - j.psi * s;
        let a = self.spec.amplitude.value(j.theta, l);
        (a, j.grad_psi * c + j.grad_ell * s)
    }

    fn factor(&self, a: f64) -> f64 {
        if self.spec.kappa == 0.5 {
            a
        } else {
            a.powf(2.0 * self.spec.kappa)
        }
    }
}

impl FieldModel for GeneralizedModel {
    fn value(&self, p: Vec3) -> Vec3 {
        let j = self.spec.frame.jet(p);
        let (a, xi) = self.parts(&j);
        xi * self.factor(a)
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        self.spec.frame.is_cleared(p)
    }

    fn analytic_div(&self, p: Vec3) -> Option<f64> {
        // a depends on the invariants only, so ∇a·ξ = 0 and ∇·w = a ∇·ξ
        match self.spec.frame {
            Frame::Planar { .. } => Some(0.0),
            Frame::Meridional { .. } => {
                let j = self.spec.frame.jet(p);
                let (a, _) = self.parts(&j);
                Some(self.factor(a) * self.spec.sigma.value(j.theta).sin() / j.ell)
            }
            Frame::Chart { .. } => None,
        }
    }
}

fn cosine(a: Vec3, b: Vec3) -> f64 {
    let n = a.norm() * b.norm();
    if n == 0.0 {
        0.0
    } else {
        a.dot(&b) / n
    }
}

/// Builds the field after checking the frame at `check_points` against the
/// scale-factor requirement for `kappa`.
pub fn build_generalized_beltrami(
    spec: &GeneralizedSpec,
    check_points: &[Vec3],
) -> Result<VectorFieldEval, FieldError> {
    let kappa = spec.kappa;
    if !kappa.is_finite() || kappa == 0.0 {
        return Err(FieldError::InvalidKappa(kappa));
    }
    let model = GeneralizedModel { spec: *spec };
    for &p in check_points {
        if !spec.frame.is_cleared(p) {
            continue;
        }
        let j = spec.frame.jet(p);
        let (a, _) = model.parts(&j);
        if kappa != 0.5 && a <= 0.0 {
            return Err(FieldError::NonPositiveAmplitude {
                x: p.x,
                y: p.y,
                z: p.z,
                value: a,
            });
        }
        let expected = if kappa == 0.5 {
            1.0
        } else {
            a.abs().powf(1.0 - 2.0 * kappa)
        };
        let (gl, gp) = (j.grad_ell.norm(), j.grad_psi.norm());
        if (gl - expected).abs() > SCALE_TOL * expected || (gp - expected).abs() > SCALE_TOL * expected {
            return Err(FieldError::ScaleFactorMismatch {
                x: p.x,
                y: p.y,
                z: p.z,
                grad_ell: gl,
                grad_psi: gp,
                expected,
            });
        }
        for (pair, u, v) in [
            ("(ℓ, ψ)", j.grad_ell, j.grad_psi),
            ("(ℓ, θ)", j.grad_ell, j.grad_theta),
            ("(ψ, θ)", j.grad_psi, j.grad_theta),
        ] {
            let c = cosine(u, v);
            if c.abs() > SCALE_TOL {
                return Err(FieldError::NonOrthogonal {
                    pair,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    cosine: c,
                });
            }
        }
    }
    Ok(VectorFieldEval::new(
        format!("generalized/kappa={kappa}"),
        Arc::new(model),
        frame_invariants(spec.frame, spec.sigma),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::AxisOrder;
    use crate::charts::{Chart, PhiBranch};
    use crate::fields::{build_solenoidal_beltrami, BeltramiSpec};
    use crate::harmonic::{ConjugatePair, OrientedPair};

    fn pts() -> Vec<Vec3> {
        vec![Vec3::new(0.3, 0.5, -0.2), Vec3::new(1.1, -0.4, 0.9)]
    }

    #[test]
    fn unit_amplitude_reduces_to_beltrami() {
        let gb = build_generalized_beltrami(
            &GeneralizedSpec {
                frame: Frame::Planar { scale: 1.0 },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::Unit,
                kappa: 0.5,
            },
            &pts(),
        )
        .unwrap();
        let b = build_solenoidal_beltrami(&BeltramiSpec {
            chart: Chart::Cartesian,
            order: AxisOrder::NATURAL,
            pair: OrientedPair::direct(ConjugatePair::Linear),
            sigma: Sigma::IDENTITY,
        })
        .unwrap();
        for p in pts() {
            assert!((gb.eval(p).unwrap() - b.eval(p).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn figure_two_field_value() {
        let f = build_generalized_beltrami(
            &GeneralizedSpec {
                frame: Frame::Planar { scale: 1.0 },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::SinSum,
                kappa: 0.5,
            },
            &pts(),
        )
        .unwrap();
        let (x, y, z) = (0.4f64, -0.3f64, 0.8f64);
        let l = x * z.cos() - y * z.sin();
        let a = (z + l).sin();
        let w = f.eval(Vec3::new(x, y, z)).unwrap();
        assert!((w - Vec3::new(a * z.sin(), a * z.cos(), 0.0)).norm() < 1e-15);
        assert!(f.invariant("L_z").is_some() && f.invariant("z").is_some());
    }

    #[test]
    fn meridional_divergence_closed_form() {
        let f = build_generalized_beltrami(
            &GeneralizedSpec {
                frame: Frame::Meridional {
                    branch: PhiBranch::ATAN2,
                },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::SinSum,
                kappa: 0.5,
            },
            &pts(),
        )
        .unwrap();
        let (r, phi, z) = (2.0f64, std::f64::consts::FRAC_PI_3, 0.25f64);
        let p = Vec3::new(r * phi.cos(), r * phi.sin(), z);
        let l = r * phi.cos() - z * phi.sin();
        let expected = (phi + l).sin() * phi.sin() / r;
        assert!((f.analytic_div(p).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn chart_frame_fails_unit_scale() {
        let frame = BeltramiSpec {
            chart: Chart::spherical(),
            order: AxisOrder([1, 2, 0]),
            pair: OrientedPair::direct(ConjugatePair::Linear),
            sigma: Sigma::IDENTITY,
        }
        .frame()
        .unwrap();
        let err = build_generalized_beltrami(
            &GeneralizedSpec {
                frame,
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::Unit,
                kappa: 0.5,
            },
            &pts(),
        )
        .unwrap_err();
        assert!(matches!(err, FieldError::ScaleFactorMismatch { .. }));
    }

    #[test]
    fn fractional_kappa_scale_validation() {
        let kappa = 0.25;
        let a0: f64 = 2.0;
        let good = GeneralizedSpec {
            frame: Frame::Planar {
                scale: a0.powf(1.0 - 2.0 * kappa),
            },
            sigma: Sigma::IDENTITY,
            amplitude: Amplitude::Constant(a0),
            kappa,
        };
        let f = build_generalized_beltrami(&good, &pts()).unwrap();
        let w = f.eval(Vec3::new(0.1, 0.2, 0.3)).unwrap();
        assert!((w.norm() - a0).abs() < 1e-14);

        let bad = GeneralizedSpec {
            frame: Frame::Planar { scale: 1.0 },
            ..good
        };
        assert!(matches!(
            build_generalized_beltrami(&bad, &pts()).unwrap_err(),
            FieldError::ScaleFactorMismatch { .. }
        ));
        let zero = GeneralizedSpec { kappa: 0.0, ..good };
        assert!(matches!(
            build_generalized_beltrami(&zero, &pts()).unwrap_err(),
            FieldError::InvalidKappa(_)
        ));
    }
}
