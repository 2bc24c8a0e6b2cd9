//! Ideal MHD equilibria `w × (∇×w) = ∇P` from an orthogonal triple
//! `(μ, P, C)`: `w = ∇σ(μ) + λ∇C` with `∂λ²/∂P = 2/|∇C|²`.

use std::fmt;
use std::sync::Arc;

use super::{FieldError, FieldModel, Invariant, ScalarJet, Sigma, VectorFieldEval};
use crate::charts::{Chart, PhiBranch, CLEARANCE};
use crate::Vec3;

const ORTHO_TOL: f64 = 1e-8;
const METRIC_STEP: f64 = 1e-5;
const METRIC_TOL: f64 = 1e-6;
const PRESSURE_FLOOR: f64 = 1e-10;

/// Closed forms of `(μ, P, C)` and of `λ²(P, C)`.
pub trait MhdClosedForms: Send + Sync + fmt::Debug {
    fn mu(&self, p: Vec3) -> ScalarJet;
    fn pressure(&self, p: Vec3) -> ScalarJet;
    fn flux(&self, p: Vec3) -> ScalarJet;
    fn lambda_sq(&self, pressure: f64, flux: f64) -> f64;
    fn is_cleared(&self, _p: Vec3) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MhdCase {
    /// `P = xy`, `C = (y² − x²)/2`, `μ = z`.
    Hyperbolic,
    /// `P = eˣ sin y`, `C = eˣ cos y`, `μ = z`.
    ExpSine,
    /// `P = e^{−r−z}`, `C = r − z`, `μ = φ`.
    ExpCylindrical { branch: PhiBranch },
    /// `P = 1 + x²`, `C = y`, `μ = z`.
    ProfileX,
    /// `P = 1 + r²`, `C = z`, `μ = φ`.
    ProfileR { branch: PhiBranch },
    /// `P` constant, `C = y`, `μ = z`; rejected by the constructor.
    Uniform { value: f64 },
}

fn polar(p: Vec3, branch: PhiBranch) -> (f64, f64, Vec3, Vec3) {
    let chart = Chart::Cylindrical { branch };
    let q = chart.forward_unchecked(p);
    let g = chart.gradients_unchecked(p);
    (q[0], q[1], g[0], g[1])
}

impl MhdClosedForms for MhdCase {
    fn mu(&self, p: Vec3) -> ScalarJet {
        match self {
            MhdCase::ExpCylindrical { branch } | MhdCase::ProfileR { branch } => {
                let (_, phi, _, grad_phi) = polar(p, *branch);
                ScalarJet::new(phi, grad_phi)
            }
            _ => ScalarJet::new(p.z, Vec3::z()),
        }
    }

    fn pressure(&self, p: Vec3) -> ScalarJet {
        let (x, y) = (p.x, p.y);
        match self {
            MhdCase::Hyperbolic => ScalarJet::new(x * y, Vec3::new(y, x, 0.0)),
            MhdCase::ExpSine => {
                let e = x.exp();
                let (s, c) = y.sin_cos();
                ScalarJet::new(e * s, Vec3::new(e * s, e * c, 0.0))
            }
            MhdCase::ExpCylindrical { branch } => {
                let (r, _, er, _) = polar(p, *branch);
                let v = (-r - p.z).exp();
                ScalarJet::new(v, -(er + Vec3::z()) * v)
            }
            MhdCase::ProfileX => ScalarJet::new(1.0 + x * x, Vec3::new(2.0 * x, 0.0, 0.0)),
            MhdCase::ProfileR { branch } => {
                let (r, _, er, _) = polar(p, *branch);
                ScalarJet::new(1.0 + r * r, er * (2.0 * r))
            }
            MhdCase::Uniform { value } => ScalarJet::constant(*value),
        }
    }

    fn flux(&self, p: Vec3) -> ScalarJet {
        let (x, y) = (p.x, p.y);
        match self {
            MhdCase::Hyperbolic => ScalarJet::new(0.5 * (y * y - x * x), Vec3::new(-x, y, 0.0)),
            MhdCase::ExpSine => {
                let e = x.exp();
                let (s, c) = y.sin_cos();
                ScalarJet::new(e * c, Vec3::new(e * c, -e * s, 0.0))
            }
            MhdCase::ExpCylindrical { branch } => {
                let (r, _, er, _) = polar(p, *branch);
                ScalarJet::new(r - p.z, er - Vec3::z())
            }
            MhdCase::ProfileX | MhdCase::Uniform { .. } => ScalarJet::new(y, Vec3::y()),
            MhdCase::ProfileR { .. } => ScalarJet::new(p.z, Vec3::z()),
        }
    }

    fn lambda_sq(&self, pressure: f64, flux: f64) -> f64 {
        match self {
            MhdCase::Hyperbolic => (flux.hypot(pressure) + pressure).ln(),
            MhdCase::ExpSine => {
                if flux == 0.0 {
                    // limit of (2/C) arctan(P/C) is singular; signal outside domain
                    f64::NAN
                } else {
                    2.0 / flux * (pressure / flux).atan()
                }
            }
            MhdCase::ExpCylindrical { .. } => pressure,
            MhdCase::ProfileX | MhdCase::ProfileR { .. } => 2.0 * pressure,
            MhdCase::Uniform { .. } => 1.0,
        }
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        match self {
            MhdCase::ExpCylindrical { .. } | MhdCase::ProfileR { .. } => p.x.hypot(p.y) >= CLEARANCE,
            // C = eˣ cos y must stay away from zero
            MhdCase::ExpSine => p.y.cos() >= CLEARANCE,
            _ => true,
        }
    }
}

#[derive(Debug)]
struct MhdModel {
    forms: Arc<dyn MhdClosedForms>,
    sigma: Sigma,
}

impl MhdModel {
    fn lambda(&self, p: Vec3) -> f64 {
        let pr = self.forms.pressure(p).value;
        let c = self.forms.flux(p).value;
        self.forms.lambda_sq(pr, c).sqrt()
    }
}

impl FieldModel for MhdModel {
    fn value(&self, p: Vec3) -> Vec3 {
        let mu = self.forms.mu(p);
        let c = self.forms.flux(p);
        mu.grad * self.sigma.derivative(mu.value) + c.grad * self.lambda(p)
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        self.forms.is_cleared(p) && self.lambda(p).is_finite()
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

/// Builds `∇σ(μ) + λ∇C` after checking `check_points` for a nonvanishing
/// pressure gradient, orthogonality, `∂|∇C|²/∂μ = 0` and `λ² ≥ 0`.
pub fn build_mhd_equilibrium(
    forms: Arc<dyn MhdClosedForms>,
    sigma: Sigma,
    check_points: &[Vec3],
) -> Result<VectorFieldEval, FieldError> {
    for &p in check_points {
        if !forms.is_cleared(p) {
            continue;
        }
        let (mu, pr, c) = (forms.mu(p), forms.pressure(p), forms.flux(p));
        if pr.grad.norm() < PRESSURE_FLOOR {
            return Err(FieldError::DegeneratePressure { x: p.x, y: p.y, z: p.z });
        }
        for (pair, u, v) in [
            ("(μ, P)", mu.grad, pr.grad),
            ("(μ, C)", mu.grad, c.grad),
            ("(P, C)", pr.grad, c.grad),
        ] {
            let cos = cosine(u, v);
            if cos.abs() > ORTHO_TOL {
                return Err(FieldError::NonOrthogonal {
                    pair,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    cosine: cos,
                });
            }
        }
        // ∂/∂μ along the dual basis vector ∇μ/|∇μ|²
        let dir = mu.grad / mu.grad.norm_squared();
        let metric = |q: Vec3| forms.flux(q).grad.norm_squared();
        let d = (metric(p + dir * METRIC_STEP) - metric(p - dir * METRIC_STEP)) / (2.0 * METRIC_STEP);
        if d.abs() > METRIC_TOL * metric(p).max(1.0) {
            return Err(FieldError::MetricDependsOnMu {
                x: p.x,
                y: p.y,
                z: p.z,
                derivative: d,
            });
        }
        let l2 = forms.lambda_sq(pr.value, c.value);
        if l2.is_nan() || l2 < 0.0 {
            return Err(FieldError::NegativeRadicand {
                x: p.x,
                y: p.y,
                z: p.z,
                value: l2,
            });
        }
    }
    let pressure = forms.clone();
    let invariants = vec![Invariant::new("P", move |p| pressure.pressure(p).value)];
    Ok(VectorFieldEval::new(
        format!("mhd/{forms:?}"),
        Arc::new(MhdModel { forms, sigma }),
        invariants,
    ))
}

/// Residuals of the two scalar conditions of the local existence system for
/// `w = ∇σ(μ) + λ(P, C)∇C`:
/// `½ ∂λ²/∂P |∇C|² + ∂λ/∂P ∇σ·∇C − 1` and `∇σ·∇P + λ ∇C·∇P`.
pub fn eq2s_residual(forms: &dyn MhdClosedForms, sigma: &Sigma, p: Vec3) -> [f64; 2] {
    let (mu, pr, c) = (forms.mu(p), forms.pressure(p), forms.flux(p));
    let grad_potential = mu.grad * sigma.derivative(mu.value);
    let dp = 1e-6 * pr.value.abs().max(1.0);
    let l2 = |q: f64| forms.lambda_sq(q, c.value);
    let dl2 = (l2(pr.value + dp) - l2(pr.value - dp)) / (2.0 * dp);
    let dl = (l2(pr.value + dp).sqrt() - l2(pr.value - dp).sqrt()) / (2.0 * dp);
    let lambda = l2(pr.value).sqrt();
    let g2 = c.grad.norm_squared();
    [
        0.5 * dl2 * g2 + dl * grad_potential.dot(&c.grad) - 1.0,
        grad_potential.dot(&pr.grad) + lambda * c.grad.dot(&pr.grad),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: [f64; 3], hi: [f64; 3]) -> Vec<Vec3> {
        let mut v = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..3 {
                    let t = [i as f64 / 3.0, j as f64 / 3.0, k as f64 / 2.0];
                    v.push(Vec3::new(
                        lo[0] + t[0] * (hi[0] - lo[0]),
                        lo[1] + t[1] * (hi[1] - lo[1]),
                        lo[2] + t[2] * (hi[2] - lo[2]),
                    ));
                }
            }
        }
        v
    }

    #[test]
    fn hyperbolic_closed_form() {
        let pts = grid([1.0, 1.0, 0.0], [2.0, 2.0, 1.0]);
        let f = build_mhd_equilibrium(Arc::new(MhdCase::Hyperbolic), Sigma::IDENTITY, &pts).unwrap();
        let (x, y) = (1.5f64, 1.2f64);
        let lambda = ((x + y).powi(2) / 2.0).ln().sqrt();
        let w = f.eval(Vec3::new(x, y, 0.3)).unwrap();
        assert!((w - Vec3::new(-lambda * x, lambda * y, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn lambda_identity_for_hyperbolic_pressure() {
        // √(C² + P²) + P = (x + y)²/2
        let (x, y) = (1.3f64, 1.9f64);
        let l2 = MhdCase::Hyperbolic.lambda_sq(x * y, 0.5 * (y * y - x * x));
        assert!((l2 - ((x + y).powi(2) / 2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn constant_pressure_rejected() {
        let pts = grid([0.0; 3], [1.0; 3]);
        let err = build_mhd_equilibrium(Arc::new(MhdCase::Uniform { value: 2.0 }), Sigma::IDENTITY, &pts).unwrap_err();
        assert!(matches!(err, FieldError::DegeneratePressure { .. }));
    }

    #[test]
    fn negative_radicand_detected() {
        // x + y < √2 makes log((x + y)²/2) negative
        let pts = grid([0.1, 0.1, 0.0], [0.5, 0.5, 1.0]);
        let err = build_mhd_equilibrium(Arc::new(MhdCase::Hyperbolic), Sigma::IDENTITY, &pts).unwrap_err();
        assert!(matches!(err, FieldError::NegativeRadicand { .. }));
    }

    #[derive(Debug)]
    struct Skewed;

    impl MhdClosedForms for Skewed {
        fn mu(&self, p: Vec3) -> ScalarJet {
            ScalarJet::new(p.z + p.x, Vec3::new(1.0, 0.0, 1.0))
        }
        fn pressure(&self, p: Vec3) -> ScalarJet {
            MhdCase::ProfileX.pressure(p)
        }
        fn flux(&self, p: Vec3) -> ScalarJet {
            ScalarJet::new(p.y, Vec3::y())
        }
        fn lambda_sq(&self, pressure: f64, _flux: f64) -> f64 {
            2.0 * pressure
        }
    }

    #[test]
    fn non_orthogonal_rejected() {
        let pts = grid([0.1; 3], [1.0; 3]);
        let err = build_mhd_equilibrium(Arc::new(Skewed), Sigma::IDENTITY, &pts).unwrap_err();
        assert!(matches!(err, FieldError::NonOrthogonal { .. }));
    }

    #[test]
    fn existence_system_holds_on_catalog() {
        let cases = [
            (MhdCase::Hyperbolic, Vec3::new(1.4, 1.7, 0.2)),
            (MhdCase::ExpSine, Vec3::new(0.3, 0.8, 0.5)),
            (
                MhdCase::ExpCylindrical {
                    branch: PhiBranch::ATAN2,
                },
                Vec3::new(0.8, 0.9, 0.4),
            ),
            (MhdCase::ProfileX, Vec3::new(0.5, -0.2, 0.1)),
        ];
        for (case, p) in cases {
            let r = eq2s_residual(&case, &Sigma::IDENTITY, p);
            assert!(r[0].abs() < 1e-8 && r[1].abs() < 1e-12, "{case:?}: {r:?}");
        }
    }
}
