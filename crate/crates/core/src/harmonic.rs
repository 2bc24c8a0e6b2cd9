//! Harmonic-conjugate pairs `(ℓ, ψ)` on the reduced `(α, β)` plane.
//!
//! Each pair carries hand-written first partials so the Cauchy-Riemann
//! structure can be checked analytically and by central differences.
//!
//! Pairs come in two orientations. With `ε = orientation()`,
//! `ℓ_α = ε ψ_β` and `ℓ_β = -ε ψ_α`. The trig-hyperbolic pair is listed with
//! `ε = -1`; swapping the roles of `ℓ` and `ψ` also flips `ε`. Both
//! orientations give harmonic functions with equal, orthogonal gradients.

use std::f64::consts::PI;

use serde::Serialize;

use crate::sampling::LowDiscrepancy;

/// Clearance around Poisson-kernel singularities in `(α, β)`.
pub const PAIR_CLEARANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConjugatePair {
    Linear,
    Exponential,
    TrigHyperbolic,
    PoissonKernel,
}

/// Value and first partials `(f, f_α, f_β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d_alpha: f64,
    pub d_beta: f64,
}

impl ConjugatePair {
    pub fn catalog() -> [ConjugatePair; 4] {
        [
            ConjugatePair::Linear,
            ConjugatePair::Exponential,
            ConjugatePair::TrigHyperbolic,
            ConjugatePair::PoissonKernel,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConjugatePair::Linear => "linear",
            ConjugatePair::Exponential => "exponential",
            ConjugatePair::TrigHyperbolic => "trig-hyperbolic",
            ConjugatePair::PoissonKernel => "poisson-kernel",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Self::catalog().into_iter().find(|p| p.name() == name)
    }

    pub fn orientation(&self) -> f64 {
        match self {
            ConjugatePair::TrigHyperbolic => -1.0,
            _ => 1.0,
        }
    }

    /// False within [`PAIR_CLEARANCE`] of a singular point of the pair.
    pub fn is_cleared(&self, alpha: f64, beta: f64) -> bool {
        if !(alpha.is_finite() && beta.is_finite()) {
            return false;
        }
        match self {
            ConjugatePair::PoissonKernel => {
                // singular at (0, 2πk)
                let k = (beta / (2.0 * PI)).round();
                let db = beta - 2.0 * PI * k;
                alpha.hypot(db) >= PAIR_CLEARANCE
            }
            _ => true,
        }
    }

    pub fn ell(&self, alpha: f64, beta: f64) -> Jet2 {
        let (a, b) = (alpha, beta);
        match self {
            ConjugatePair::Linear => Jet2 {
                value: a,
                d_alpha: 1.0,
                d_beta: 0.0,
            },
            ConjugatePair::Exponential => {
                let e = a.exp();
                let (sb, cb) = b.sin_cos();
                Jet2 {
                    value: -e * sb,
                    d_alpha: -e * sb,
                    d_beta: -e * cb,
                }
            }
            ConjugatePair::TrigHyperbolic => {
                let (sb, cb) = b.sin_cos();
                Jet2 {
                    value: a.sinh() * sb,
                    d_alpha: a.cosh() * sb,
                    d_beta: a.sinh() * cb,
                }
            }
            ConjugatePair::PoissonKernel => {
                let (sb, cb) = b.sin_cos();
                let (sha, cha) = (a.sinh(), a.cosh());
                let d = cha - cb;
                let d2 = d * d;
                Jet2 {
                    value: sb / d,
                    d_alpha: -sb * sha / d2,
                    d_beta: (cb * cha - 1.0) / d2,
                }
            }
        }
    }

    pub fn psi(&self, alpha: f64, beta: f64) -> Jet2 {
        let (a, b) = (alpha, beta);
        match self {
            ConjugatePair::Linear => Jet2 {
                value: b,
                d_alpha: 0.0,
                d_beta: 1.0,
            },
            ConjugatePair::Exponential => {
                let e = a.exp();
                let (sb, cb) = b.sin_cos();
                Jet2 {
                    value: e * cb,
                    d_alpha: e * cb,
                    d_beta: -e * sb,
                }
            }
            ConjugatePair::TrigHyperbolic => {
                let (sb, cb) = b.sin_cos();
                Jet2 {
                    value: a.cosh() * cb,
                    d_alpha: a.sinh() * cb,
                    d_beta: -a.cosh() * sb,
                }
            }
            ConjugatePair::PoissonKernel => {
                let (sb, cb) = b.sin_cos();
                let (sha, cha) = (a.sinh(), a.cosh());
                let d = cha - cb;
                let d2 = d * d;
                Jet2 {
                    value: sha / d,
                    d_alpha: (1.0 - cha * cb) / d2,
                    d_beta: -sha * sb / d2,
                }
            }
        }
    }
}

/// A catalog pair with the roles of `ℓ` and `ψ` possibly exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrientedPair {
    pub pair: ConjugatePair,
    pub swapped: bool,
}

impl OrientedPair {
    pub const fn direct(pair: ConjugatePair) -> Self {
        Self { pair, swapped: false }
    }

    pub const fn swapped(pair: ConjugatePair) -> Self {
        Self { pair, swapped: true }
    }

    pub fn ell(&self, alpha: f64, beta: f64) -> Jet2 {
        if self.swapped {
            self.pair.psi(alpha, beta)
        } else {
            self.pair.ell(alpha, beta)
        }
    }

    pub fn psi(&self, alpha: f64, beta: f64) -> Jet2 {
        if self.swapped {
            self.pair.ell(alpha, beta)
        } else {
            self.pair.psi(alpha, beta)
        }
    }

    pub fn orientation(&self) -> f64 {
        if self.swapped {
            -self.pair.orientation()
        } else {
            self.pair.orientation()
        }
    }

    pub fn is_cleared(&self, alpha: f64, beta: f64) -> bool {
        self.pair.is_cleared(alpha, beta)
    }
}

/// Axis-aligned box in the `(α, β)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneBox {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl PlaneBox {
    pub const fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Self { lo, hi }
    }

    fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        let mut seq = LowDiscrepancy::new(0xca11);
        (0..n)
            .map(|_| {
                let u = seq.next_unit();
                (
                    self.lo[0] + u[0] * (self.hi[0] - self.lo[0]),
                    self.lo[1] + u[1] * (self.hi[1] - self.lo[1]),
                )
            })
            .collect()
    }
}

fn central(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, h: f64) -> (f64, f64) {
    (
        (f(a + h, b) - f(a - h, b)) / (2.0 * h),
        (f(a, b + h) - f(a, b - h)) / (2.0 * h),
    )
}

/// Max over samples of `|ℓ_α - ε ψ_β| + |ℓ_β + ε ψ_α|` with central differences.
pub fn verify_cauchy_riemann(pair: ConjugatePair, region: &PlaneBox, h: f64, n: usize) -> f64 {
    let eps = pair.orientation();
    region
        .samples(n)
        .into_iter()
        .filter(|&(a, b)| pair.is_cleared(a, b))
        .map(|(a, b)| {
            let (la, lb) = central(|a, b| pair.ell(a, b).value, a, b, h);
            let (pa, pb) = central(|a, b| pair.psi(a, b).value, a, b, h);
            (la - eps * pb).abs() + (lb + eps * pa).abs()
        })
        .fold(0.0, f64::max)
}

/// Same residual from the closed-form partials.
pub fn analytic_cauchy_riemann(pair: ConjugatePair, region: &PlaneBox, n: usize) -> f64 {
    let eps = pair.orientation();
    region
        .samples(n)
        .into_iter()
        .filter(|&(a, b)| pair.is_cleared(a, b))
        .map(|(a, b)| {
            let l = pair.ell(a, b);
            let p = pair.psi(a, b);
            (l.d_alpha - eps * p.d_beta).abs() + (l.d_beta + eps * p.d_alpha).abs()
        })
        .fold(0.0, f64::max)
}

/// Max over samples of `|ℓ_αα + ℓ_ββ| + |ψ_αα + ψ_ββ|` by 5-point differences.
pub fn harmonicity_residual(pair: ConjugatePair, region: &PlaneBox, h: f64, n: usize) -> f64 {
    let lap = |f: &dyn Fn(f64, f64) -> f64, a: f64, b: f64| {
        (f(a + h, b) + f(a - h, b) + f(a, b + h) + f(a, b - h) - 4.0 * f(a, b)) / (h * h)
    };
    region
        .samples(n)
        .into_iter()
        .filter(|&(a, b)| pair.is_cleared(a, b))
        .map(|(a, b)| lap(&|a, b| pair.ell(a, b).value, a, b).abs() + lap(&|a, b| pair.psi(a, b).value, a, b).abs())
        .fold(0.0, f64::max)
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn gradient_magnitudes_agree(alpha in -1.5..1.5f64, beta in -1.5..1.5f64) {
            for pair in ConjugatePair::catalog() {
                if !pair.is_cleared(alpha, beta) {
                    continue;
                }
                let (l, p) = (pair.ell(alpha, beta), pair.psi(alpha, beta));
                let gl = l.d_alpha.hypot(l.d_beta);
                let gp = p.d_alpha.hypot(p.d_beta);
                prop_assert!((gl - gp).abs() <= 1e-12 * gl.max(1.0));
                prop_assert!((l.d_alpha * p.d_alpha + l.d_beta * p.d_beta).abs() <= 1e-12 * (gl * gp).max(1.0));
                // the partials are those of the values
                let h = 1e-5;
                let dl = (pair.ell(alpha + h, beta).value - pair.ell(alpha - h, beta).value) / (2.0 * h);
                prop_assert!((dl - l.d_alpha).abs() < 1e-6 * gl.max(1.0));
            }
        }
    }
}
