//! Steady Euler flows `w × (∇×w) = ∇(P + ½w²)` of the form `w = ∇μ + λ∇C`
//! with `(μ, λ, C)` orthogonal, `½|∇μ|² = c − P` and `|∇C|² = 2`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use super::{FieldError, FieldModel, Invariant, ScalarJet, VectorFieldEval};
use crate::charts::{Chart, PhiBranch, CLEARANCE};
use crate::Vec3;

const MARGIN: f64 = 1e-6;
const ORTHO_TOL: f64 = 1e-8;

/// Closed forms of `(μ, λ, C)`, the pressure and the Bernoulli constant `c`.
pub trait EulerClosedForms: Send + Sync + fmt::Debug {
    fn mu(&self, p: Vec3) -> ScalarJet;
    fn lambda(&self, p: Vec3) -> ScalarJet;
    fn flux(&self, p: Vec3) -> ScalarJet;
    fn pressure(&self, p: Vec3) -> ScalarJet;
    fn bernoulli_constant(&self) -> f64;
    fn divergence(&self, _p: Vec3) -> Option<f64> {
        None
    }
    fn is_cleared(&self, _p: Vec3) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EulerCase {
    /// `P = c − k²`: `w = √2[k∇x + y∇z]`.
    UniformX { c: f64, k: f64 },
    /// `P = −e^{x+y}`: `w = 2∇e^{(x+y)/2} + √2(x − y)∇z`.
    ExpDiagonal,
    /// `P = c − k²/r²`: `w = √2[k∇log r + φ∇z]`.
    InverseSquare { c: f64, k: f64, branch: PhiBranch },
    /// `P = c − (1 + z)²`: `w = √2[(1 + z)∇z + φ∇r]`.
    Axial { c: f64, branch: PhiBranch },
    /// `P = −½e^{−2r}[1 + cos²φ(r^{−2} − 1)]`:
    /// `w = ∇[e^{−r} sin φ] + √2 e^{1/r} cos φ ∇z`.
    RadialAzimuthal { branch: PhiBranch },
}

struct Polar {
    r: f64,
    phi: f64,
    er: Vec3,
    grad_phi: Vec3,
}

fn polar(p: Vec3, branch: PhiBranch) -> Polar {
    let chart = Chart::Cylindrical { branch };
    let q = chart.forward_unchecked(p);
    let g = chart.gradients_unchecked(p);
    Polar {
        r: q[0],
        phi: q[1],
        er: g[0],
        grad_phi: g[1],
    }
}

impl EulerCase {
    /// Divergence as printed for the `(r, φ)` example, `(e^{−r}/r)(sin φ − r^{−2} cos φ)`.
    ///
    /// It disagrees with `Δ(e^{−r} sin φ) = e^{−r} sin φ (1 − 1/r − 1/r²)`,
    /// which is what [`EulerClosedForms::divergence`] returns.
    pub fn printed_divergence(&self, p: Vec3) -> Option<f64> {
        match self {
            EulerCase::RadialAzimuthal { branch } => {
                let q = polar(p, *branch);
                let (s, c) = q.phi.sin_cos();
                Some((-q.r).exp() / q.r * (s - c / (q.r * q.r)))
            }
            _ => None,
        }
    }
}

impl EulerClosedForms for EulerCase {
    fn mu(&self, p: Vec3) -> ScalarJet {
        match *self {
            EulerCase::UniformX { k, .. } => ScalarJet::new(SQRT_2 * k * p.x, Vec3::x() * (SQRT_2 * k)),
            EulerCase::ExpDiagonal => {
                let e = (0.5 * (p.x + p.y)).exp();
                ScalarJet::new(2.0 * e, Vec3::new(e, e, 0.0))
            }
            EulerCase::InverseSquare { k, branch, .. } => {
                let q = polar(p, branch);
                ScalarJet::new(SQRT_2 * k * q.r.ln(), q.er * (SQRT_2 * k / q.r))
            }
            EulerCase::Axial { .. } => {
                let z = p.z;
                ScalarJet::new(SQRT_2 * (z + 0.5 * z * z), Vec3::z() * (SQRT_2 * (1.0 + z)))
            }
            EulerCase::RadialAzimuthal { branch } => {
                let q = polar(p, branch);
                let e = (-q.r).exp();
                let (s, c) = q.phi.sin_cos();
                ScalarJet::new(e * s, -q.er * (e * s) + q.grad_phi * (e * c))
            }
        }
    }

    fn lambda(&self, p: Vec3) -> ScalarJet {
        match *self {
            EulerCase::UniformX { .. } => ScalarJet::new(p.y, Vec3::y()),
            EulerCase::ExpDiagonal => ScalarJet::new(p.x - p.y, Vec3::new(1.0, -1.0, 0.0)),
            EulerCase::InverseSquare { branch, .. } | EulerCase::Axial { branch, .. } => {
                let q = polar(p, branch);
                ScalarJet::new(q.phi, q.grad_phi)
            }
            EulerCase::RadialAzimuthal { branch } => {
                let q = polar(p, branch);
                let e = (1.0 / q.r).exp();
                let (s, c) = q.phi.sin_cos();
                let r2 = q.r * q.r;
                ScalarJet::new(e * c, -q.er * (e * c / r2) - q.grad_phi * (e * s))
            }
        }
    }

    fn flux(&self, p: Vec3) -> ScalarJet {
        match *self {
            EulerCase::Axial { branch, .. } => {
                let q = polar(p, branch);
                ScalarJet::new(SQRT_2 * q.r, q.er * SQRT_2)
            }
            _ => ScalarJet::new(SQRT_2 * p.z, Vec3::z() * SQRT_2),
        }
    }

    fn pressure(&self, p: Vec3) -> ScalarJet {
        match *self {
            EulerCase::UniformX { c, k } => ScalarJet::constant(c - k * k),
            EulerCase::ExpDiagonal => {
                let e = (p.x + p.y).exp();
                ScalarJet::new(-e, Vec3::new(-e, -e, 0.0))
            }
            EulerCase::InverseSquare { c, k, branch } => {
                let q = polar(p, branch);
                let r2 = q.r * q.r;
                ScalarJet::new(c - k * k / r2, q.er * (2.0 * k * k / (r2 * q.r)))
            }
            EulerCase::Axial { c, .. } => {
                let s = 1.0 + p.z;
                ScalarJet::new(c - s * s, Vec3::z() * (-2.0 * s))
            }
            EulerCase::RadialAzimuthal { branch } => {
                let q = polar(p, branch);
                let r = q.r;
                let e = (-2.0 * r).exp();
                let (s, c) = q.phi.sin_cos();
                let bracket = 1.0 + c * c * (1.0 / (r * r) - 1.0);
                let d_r = e * bracket + e * c * c / (r * r * r);
                let d_phi = e * s * c * (1.0 / (r * r) - 1.0);
                ScalarJet::new(-0.5 * e * bracket, q.er * d_r + q.grad_phi * d_phi)
            }
        }
    }

    fn bernoulli_constant(&self) -> f64 {
        match *self {
            EulerCase::UniformX { c, .. } | EulerCase::InverseSquare { c, .. } | EulerCase::Axial { c, .. } => c,
            EulerCase::ExpDiagonal | EulerCase::RadialAzimuthal { .. } => 0.0,
        }
    }

    fn divergence(&self, p: Vec3) -> Option<f64> {
        Some(match *self {
            EulerCase::UniformX { .. } | EulerCase::InverseSquare { .. } => 0.0,
            EulerCase::ExpDiagonal => (0.5 * (p.x + p.y)).exp(),
            EulerCase::Axial { branch, .. } => {
                let q = polar(p, branch);
                SQRT_2 * (1.0 + q.phi / q.r)
            }
            EulerCase::RadialAzimuthal { branch } => {
                let q = polar(p, branch);
                let r = q.r;
                (-r).exp() * q.phi.sin() * (1.0 - 1.0 / r - 1.0 / (r * r))
            }
        })
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        match self {
            EulerCase::UniformX { .. } | EulerCase::ExpDiagonal => true,
            _ => p.x.hypot(p.y) >= CLEARANCE,
        }
    }
}

#[derive(Debug)]
struct EulerModel {
    forms: Arc<dyn EulerClosedForms>,
}

impl FieldModel for EulerModel {
    fn value(&self, p: Vec3) -> Vec3 {
        self.forms.mu(p).grad + self.forms.flux(p).grad * self.forms.lambda(p).value
    }

    fn is_cleared(&self, p: Vec3) -> bool {
        self.forms.is_cleared(p)
    }

    fn analytic_div(&self, p: Vec3) -> Option<f64> {
        self.forms.divergence(p)
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

/// Builds `∇μ + λ∇C` after checking `c − P ≥ 10⁻⁶` and orthogonality of
/// `(μ, λ, C)` at `check_points`.
pub fn build_euler_flow(
    forms: Arc<dyn EulerClosedForms>,
    check_points: &[Vec3],
) -> Result<VectorFieldEval, FieldError> {
    let c = forms.bernoulli_constant();
    for &p in check_points {
        if !forms.is_cleared(p) {
            continue;
        }
        let margin = c - forms.pressure(p).value;
        if margin.is_nan() || margin < MARGIN {
            return Err(FieldError::ConstantViolation {
                x: p.x,
                y: p.y,
                z: p.z,
                margin,
            });
        }
        let (mu, lambda, flux) = (forms.mu(p), forms.lambda(p), forms.flux(p));
        for (pair, u, v) in [
            ("(μ, λ)", mu.grad, lambda.grad),
            ("(μ, C)", mu.grad, flux.grad),
            ("(λ, C)", lambda.grad, flux.grad),
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
    }
    let lambda = forms.clone();
    let invariants = vec![Invariant::new("lambda", move |p| lambda.lambda(p).value)];
    Ok(VectorFieldEval::new(
        format!("euler/{forms:?}"),
        Arc::new(EulerModel { forms }),
        invariants,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cases() -> Vec<(EulerCase, Vec3)> {
        let b = PhiBranch::ATAN2;
        vec![
            (EulerCase::UniformX { c: 2.0, k: 1.0 }, Vec3::new(0.3, -0.4, 0.2)),
            (EulerCase::ExpDiagonal, Vec3::new(0.3, -0.4, 0.2)),
            (
                EulerCase::InverseSquare {
                    c: 1.0,
                    k: 1.0,
                    branch: b,
                },
                Vec3::new(0.7, 0.6, 0.2),
            ),
            (EulerCase::Axial { c: 2.0, branch: b }, Vec3::new(0.7, 0.6, 0.4)),
            (EulerCase::RadialAzimuthal { branch: b }, Vec3::new(0.7, 0.6, 0.2)),
        ]
    }

    #[test]
    fn bernoulli_relation_holds() {
        for (case, p) in cases() {
            let lhs = 0.5 * case.mu(p).grad.norm_squared();
            let rhs = case.bernoulli_constant() - case.pressure(p).value;
            assert!((lhs - rhs).abs() < 1e-14, "{case:?}");
            assert!((case.flux(p).grad.norm_squared() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_gradients_match_differences() {
        let h = 1e-6;
        for (case, p) in cases() {
            for (name, f) in [
                ("mu", Box::new(|q| case.mu(q)) as Box<dyn Fn(Vec3) -> ScalarJet>),
                ("lambda", Box::new(|q| case.lambda(q))),
                ("pressure", Box::new(|q| case.pressure(q))),
            ] {
                let mut g = Vec3::zeros();
                for k in 0..3 {
                    let mut e = Vec3::zeros();
                    e[k] = h;
                    g[k] = (f(p + e).value - f(p - e).value) / (2.0 * h);
                }
                assert!((g - f(p).grad).norm() < 1e-8, "{case:?} {name}");
            }
        }
    }

    #[test]
    fn exp_diagonal_field() {
        let f = build_euler_flow(Arc::new(EulerCase::ExpDiagonal), &[Vec3::zeros()]).unwrap();
        let (x, y, z) = (0.2f64, 0.5f64, -0.3f64);
        let e = (0.5 * (x + y)).exp();
        let w = f.eval(Vec3::new(x, y, z)).unwrap();
        assert!((w - Vec3::new(e, e, SQRT_2 * (x - y))).norm() < 1e-14);
    }

    #[test]
    fn printed_and_true_divergence_differ() {
        let case = EulerCase::RadialAzimuthal {
            branch: PhiBranch::ATAN2,
        };
        let p = Vec3::new(0.7, 0.6, 0.2);
        let a = case.divergence(p).unwrap();
        let b = case.printed_divergence(p).unwrap();
        assert!((a - b).abs() > 1e-2);
    }

    #[derive(Debug)]
    struct Violating;

    impl EulerClosedForms for Violating {
        fn mu(&self, p: Vec3) -> ScalarJet {
            ScalarJet::new(p.x, Vec3::x())
        }
        fn lambda(&self, p: Vec3) -> ScalarJet {
            ScalarJet::new(p.y, Vec3::y())
        }
        fn flux(&self, p: Vec3) -> ScalarJet {
            ScalarJet::new(SQRT_2 * p.z, Vec3::z() * SQRT_2)
        }
        fn pressure(&self, _p: Vec3) -> ScalarJet {
            ScalarJet::constant(1.0)
        }
        fn bernoulli_constant(&self) -> f64 {
            0.5
        }
    }

    #[test]
    fn constant_below_pressure_rejected() {
        let err = build_euler_flow(Arc::new(Violating), &[Vec3::zeros()]).unwrap_err();
        assert!(matches!(err, FieldError::ConstantViolation { .. }));
    }
}
