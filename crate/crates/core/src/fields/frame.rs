//! Harmonic orthogonal frames `(ℓ, ψ, θ)` with closed-form gradients.

use serde::Serialize;

use crate::charts::{AlphaReparam, AxisOrder, Chart, PhiBranch, CLEARANCE};
use crate::harmonic::OrientedPair;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameJet {
    pub ell: f64,
    pub psi: f64,
    pub theta: f64,
    pub grad_ell: Vec3,
    pub grad_psi: Vec3,
    pub grad_theta: Vec3,
}

impl FrameJet {
    /// Sign of `∇ℓ × ∇ψ · ∇θ`.
    pub fn handedness(&self) -> f64 {
        let t = self.grad_ell.cross(&self.grad_psi).dot(&self.grad_theta);
        if t < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Same frame with `ψ` multiplied by `k` (breaks the equal-scale condition).
    pub fn with_psi_scaled(mut self, k: f64) -> Self {
        self.psi *= k;
        self.grad_psi *= k;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Frame {
    /// Conjugate pair composed with `(α(ζ), β)` of a chart ordering; `θ = γ`.
    Chart {
        chart: Chart,
        order: AxisOrder,
        alpha: AlphaReparam,
        pair: OrientedPair,
    },
    /// `ℓ = s·x`, `ψ = s·y`, `θ = z`.
    Planar { scale: f64 },
    /// `ℓ = r`, `ψ = z`, `θ = φ`.
    Meridional { branch: PhiBranch },
}

impl Frame {
    pub fn jet(&self, p: Vec3) -> FrameJet {
        match self {
            Frame::Chart {
                chart,
                order,
                alpha,
                pair,
            } => {
                let q = order.pick(chart.forward_unchecked(p));
                let g = order.pick(chart.gradients_unchecked(p));
                let a = alpha.alpha(q[0]);
                let grad_a = g[0] * alpha.dalpha_dzeta(q[0]);
                let l = pair.ell(a, q[1]);
                let s = pair.psi(a, q[1]);
                FrameJet {
                    ell: l.value,
                    psi: s.value,
                    theta: q[2],
                    grad_ell: grad_a * l.d_alpha + g[1] * l.d_beta,
                    grad_psi: grad_a * s.d_alpha + g[1] * s.d_beta,
                    grad_theta: g[2],
                }
            }
            Frame::Planar { scale } => FrameJet {
                ell: scale * p.x,
                psi: scale * p.y,
                theta: p.z,
                grad_ell: Vec3::x() * *scale,
                grad_psi: Vec3::y() * *scale,
                grad_theta: Vec3::z(),
            },
            Frame::Meridional { branch } => {
                let chart = Chart::Cylindrical { branch: *branch };
                let q = chart.forward_unchecked(p);
                let g = chart.gradients_unchecked(p);
                FrameJet {
                    ell: q[0],
                    psi: q[2],
                    theta: q[1],
                    grad_ell: g[0],
                    grad_psi: g[2],
                    grad_theta: g[1],
                }
            }
        }
    }

    pub fn is_cleared(&self, p: Vec3) -> bool {
        match self {
            Frame::Chart {
                chart,
                order,
                alpha,
                pair,
            } => {
                if !chart.is_cleared(p) {
                    return false;
                }
                let q = order.pick(chart.forward_unchecked(p));
                pair.is_cleared(alpha.alpha(q[0]), q[1])
            }
            Frame::Planar { .. } => p.iter().all(|v| v.is_finite()),
            Frame::Meridional { .. } => p.x.hypot(p.y) >= CLEARANCE && p.z.is_finite(),
        }
    }

    /// Names of `θ` and of the associated invariant `L_θ`.
    pub fn invariant_names(&self) -> (String, String) {
        let theta = match self {
            Frame::Chart { chart, order, .. } => chart.coordinate_names()[order.0[2]],
            Frame::Planar { .. } => "z",
            Frame::Meridional { .. } => "phi",
        };
        (theta.to_string(), format!("L_{theta}"))
    }
}
