//! Residual suites: each evaluates one identity over a sample set and
//! returns a [`ResidualReport`].
//!
//! Per-point residuals are computed in parallel, collected in sample order and
//! reduced sequentially, so reports do not depend on thread scheduling.

use std::fmt::Display;

use rayon::prelude::*;
use serde::Serialize;

use super::{curl, div, grad, jacobian, CalculusError, ResidualReport, StencilConfig};
use crate::fields::{EulerClosedForms, Frame, FrameJet, Invariant, Sigma, VectorFieldEval};
use crate::sampling::LowDiscrepancy;
use crate::Vec3;

/// Residuals below this are treated as roundoff when estimating the order.
pub const ROUNDOFF_FLOOR: f64 = 1e-11;

const IRROTATIONAL_FLOOR: f64 = 1e-8;
const ALIGNMENT_EPS: f64 = 1e-30;
const DEGENERATE_PAIR_FLOOR: f64 = 1e-6;

/// Case identifier, stencil and tolerance shared by the checks of one case.
#[derive(Debug, Clone, Copy)]
pub struct CheckContext<'a> {
    pub case_id: &'a str,
    pub cfg: StencilConfig,
    pub tol: f64,
}

/// Residual at one point, with the magnitude used for relative normalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResidual {
    pub value: f64,
    pub scale: f64,
}

impl PointResidual {
    pub fn abs(value: f64) -> Self {
        Self {
            value: value.abs(),
            scale: 0.0,
        }
    }

    pub fn scaled(value: f64, scale: f64) -> Self {
        Self {
            value: value.abs(),
            scale: scale.abs(),
        }
    }
}

struct Reduced {
    max: f64,
    rms: f64,
}

fn reduce<E>(
    points: &[Vec3],
    h: f64,
    scale_floor: Option<f64>,
    f: &(dyn Fn(Vec3, f64) -> Result<PointResidual, E> + Sync),
) -> Result<Reduced, E>
where
    E: Send,
{
    let values: Vec<PointResidual> = points.par_iter().map(|&p| f(p, h)).collect::<Result<Vec<_>, E>>()?;
    let mut max: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut max_scale: f64 = 0.0;
    for r in &values {
        max = max.max(r.value);
        sum_sq += r.value * r.value;
        max_scale = max_scale.max(r.scale);
    }
    let n = values.len().max(1) as f64;
    let norm = match scale_floor {
        None => 1.0,
        Some(floor) => max_scale.max(floor).max(f64::MIN_POSITIVE),
    };
    Ok(Reduced {
        max: max / norm,
        rms: (sum_sq / n).sqrt() / norm,
    })
}

/// Runs a finite-difference check at `cfg.h` (and `h/2` under Richardson).
///
/// With `scale_floor = Some(f)` residuals are divided by
/// `max(f, max_i scale_i)`.
pub fn run_check<E, F>(
    ctx: &CheckContext,
    check_name: &str,
    points: &[Vec3],
    scale_floor: Option<f64>,
    f: F,
) -> ResidualReport
where
    E: Display + Send,
    F: Fn(Vec3, f64) -> Result<PointResidual, E> + Sync,
{
    let h = ctx.cfg.h;
    let coarse = match reduce(points, h, scale_floor, &f) {
        Ok(r) => r,
        Err(e) => return ResidualReport::failed(ctx.case_id, check_name, h, e),
    };
    let order_estimate = if ctx.cfg.richardson {
        match reduce(points, h / 2.0, scale_floor, &f) {
            Ok(fine) if coarse.max > ROUNDOFF_FLOOR && fine.max > ROUNDOFF_FLOOR => {
                Some((coarse.max / fine.max).log2())
            }
            Ok(_) => None,
            Err(e) => return ResidualReport::failed(ctx.case_id, check_name, h / 2.0, e),
        }
    } else {
        None
    };
    ResidualReport {
        case_id: ctx.case_id.to_string(),
        check_name: check_name.to_string(),
        max_residual: coarse.max,
        l2_residual: coarse.rms,
        h,
        n_points: points.len(),
        order_estimate,
        pass: coarse.max < ctx.tol,
        expected_failure: false,
        error: None,
        tolerance: ctx.tol,
    }
}

/// Check from closed forms only; reported with `h = 0`.
pub fn run_analytic_check(
    ctx: &CheckContext,
    check_name: &str,
    points: &[Vec3],
    f: impl Fn(Vec3) -> f64 + Sync,
) -> ResidualReport {
    let reduced = reduce::<CalculusError>(points, 0.0, None, &|p, _| Ok(PointResidual::abs(f(p))))
        .expect("closed-form checks cannot fail");
    ResidualReport {
        case_id: ctx.case_id.to_string(),
        check_name: check_name.to_string(),
        max_residual: reduced.max,
        l2_residual: reduced.rms,
        h: 0.0,
        n_points: points.len(),
        order_estimate: None,
        pass: reduced.max < ctx.tol,
        expected_failure: false,
        error: None,
        tolerance: ctx.tol,
    }
}

fn field_fn(field: &VectorFieldEval) -> impl Fn(Vec3) -> Option<Vec3> + '_ {
    move |q| field.try_eval(q)
}

fn value_at(field: &VectorFieldEval, p: Vec3) -> Result<Vec3, CalculusError> {
    field
        .try_eval(p)
        .ok_or(CalculusError::StencilEscape { x: p.x, y: p.y, z: p.z })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeltramiResidual {
    /// `‖w × ∇×w‖ / (‖w‖‖∇×w‖ + ε)`, zero where the field is irrotational.
    pub alignment: ResidualReport,
    /// `|∇·w| / max(1, ‖∇w‖)` with the Frobenius norm of the Jacobian.
    pub divergence: ResidualReport,
    /// Number of sample points with `‖∇×w‖ < 10⁻⁸`.
    pub irrotational_points: usize,
}

pub fn residual_beltrami(ctx: &CheckContext, field: &VectorFieldEval, points: &[Vec3]) -> BeltramiResidual {
    let v = field_fn(field);
    let alignment = run_check(ctx, "beltrami-alignment", points, None, |p, h| {
        let w = value_at(field, p)?;
        let c = curl(&v, p, h)?;
        let cn = c.norm();
        if cn < IRROTATIONAL_FLOOR {
            return Ok::<_, CalculusError>(PointResidual::abs(0.0));
        }
        Ok(PointResidual::abs(w.cross(&c).norm() / (w.norm() * cn + ALIGNMENT_EPS)))
    });
    let divergence = run_check(ctx, "divergence", points, None, |p, h| {
        let j = jacobian(&v, p, h)?;
        Ok::<_, CalculusError>(PointResidual::abs(j.trace() / j.norm().max(1.0)))
    });
    let irrotational_points = points
        .par_iter()
        .map(|&p| matches!(curl(&v, p, ctx.cfg.h), Ok(c) if c.norm() < IRROTATIONAL_FLOOR))
        .filter(|&b| b)
        .count();
    BeltramiResidual {
        alignment,
        divergence,
        irrotational_points,
    }
}

/// `|ĥ − ε σ'(θ)|∇θ|| / max(1, |σ'(θ)|∇θ||)` with `ĥ = (w·∇×w)/|w|²`.
pub fn residual_proportionality(
    ctx: &CheckContext,
    field: &VectorFieldEval,
    frame: &Frame,
    sigma: &Sigma,
    points: &[Vec3],
) -> ResidualReport {
    let v = field_fn(field);
    run_check(ctx, "proportionality-factor", points, None, |p, h| {
        let w = value_at(field, p)?;
        let c = curl(&v, p, h)?;
        let numeric = w.dot(&c) / w.norm_squared();
        let predicted = crate::fields::predicted_proportionality(frame, sigma, p);
        Ok::<_, CalculusError>(PointResidual::abs((numeric - predicted) / predicted.abs().max(1.0)))
    })
}

/// `‖w × (∇×w) − ∇(P + κw²)‖`, divided by `max‖∇P‖` for `κ = 0` and by
/// `max(1, max‖∇(P + κw²)‖)` otherwise.
pub fn residual_force_balance(
    ctx: &CheckContext,
    field: &VectorFieldEval,
    pressure: &(dyn Fn(Vec3) -> f64 + Sync),
    kappa: f64,
    points: &[Vec3],
) -> ResidualReport {
    let v = field_fn(field);
    let total = |q: Vec3| field.try_eval(q).map(|w| pressure(q) + kappa * w.norm_squared());
    let floor = if kappa == 0.0 { 0.0 } else { 1.0 };
    run_check(ctx, "force-balance", points, Some(floor), |p, h| {
        let w = value_at(field, p)?;
        let lhs = w.cross(&curl(&v, p, h)?);
        let rhs = grad(&total, p, h)?;
        Ok::<_, CalculusError>(PointResidual::scaled((lhs - rhs).norm(), rhs.norm()))
    })
}

/// Both geometric conditions with the flow angle replaced by `σ(θ)`:
/// `cos σ sin σ (|∇ψ|² − |∇ℓ|²) − (∇ℓ·∇ψ)(cos²σ − sin²σ)` and
/// `σ'(θ)(sin σ ∇ℓ·∇θ + cos σ ∇ψ·∇θ)`.
pub fn residual_geometric_conditions(
    ctx: &CheckContext,
    jet: &(dyn Fn(Vec3) -> FrameJet + Sync),
    sigma: &Sigma,
    points: &[Vec3],
) -> ResidualReport {
    run_analytic_check(ctx, "geometric-conditions", points, |p| {
        let j = jet(p);
        let (s, c) = sigma.value(j.theta).sin_cos();
        let a = c * s * (j.grad_psi.norm_squared() - j.grad_ell.norm_squared())
            - j.grad_ell.dot(&j.grad_psi) * (c * c - s * s);
        let b = sigma.derivative(j.theta) * (s * j.grad_ell.dot(&j.grad_theta) + c * j.grad_psi.dot(&j.grad_theta));
        a.abs().max(b.abs())
    })
}

/// `|∇·w − (closed-form divergence)|`.
pub fn divergence_match(ctx: &CheckContext, field: &VectorFieldEval, points: &[Vec3]) -> ResidualReport {
    let v = field_fn(field);
    run_check(ctx, "divergence-closed-form", points, None, |p, h| {
        let expected = field
            .analytic_div(p)
            .ok_or_else(|| format!("no closed-form divergence at {p:?}"))?;
        let numeric = div(&v, p, h).map_err(|e| e.to_string())?;
        Ok::<_, String>(PointResidual::abs(numeric - expected))
    })
}

/// `|w · ∇f|` with a numerical gradient of `f`.
pub fn advection_residual(
    ctx: &CheckContext,
    check_name: &str,
    field: &VectorFieldEval,
    f: &(dyn Fn(Vec3) -> Option<f64> + Sync),
    points: &[Vec3],
) -> ResidualReport {
    run_check(ctx, check_name, points, None, |p, h| {
        let w = value_at(field, p)?;
        Ok::<_, CalculusError>(PointResidual::abs(w.dot(&grad(f, p, h)?)))
    })
}

/// `|(∇×w) · ∇f|` with numerical curl and gradient.
pub fn curl_advection_residual(
    ctx: &CheckContext,
    check_name: &str,
    field: &VectorFieldEval,
    f: &(dyn Fn(Vec3) -> Option<f64> + Sync),
    points: &[Vec3],
) -> ResidualReport {
    let v = field_fn(field);
    run_check(ctx, check_name, points, None, |p, h| {
        let c = curl(&v, p, h)?;
        Ok::<_, CalculusError>(PointResidual::abs(c.dot(&grad(f, p, h)?)))
    })
}

/// Compares `w × (∇×w)` for `w = ∇χ × ∇π` with
/// `{∇·[∇π × (∇χ × ∇π)]}∇χ + {∇·[∇χ × (∇π × ∇χ)]}∇π`, all numerically.
/// Inner gradients use step `h`, outer curl and divergences `2h`; the
/// difference is divided by `max(1, max‖w × ∇×w‖)`.
pub fn check_prop5_identity(
    ctx: &CheckContext,
    chi: &(dyn Fn(Vec3) -> f64 + Sync),
    pi: &(dyn Fn(Vec3) -> f64 + Sync),
    points: &[Vec3],
) -> Result<ResidualReport, CalculusError> {
    let chi_o = |q: Vec3| Some(chi(q));
    let pi_o = |q: Vec3| Some(pi(q));
    for &p in points {
        let n = grad(&chi_o, p, ctx.cfg.h)?.cross(&grad(&pi_o, p, ctx.cfg.h)?).norm();
        if n < DEGENERATE_PAIR_FLOOR {
            return Err(CalculusError::DegeneratePair {
                x: p.x,
                y: p.y,
                z: p.z,
                norm: n,
            });
        }
    }
    Ok(run_check(ctx, "prop5-identity", points, Some(1.0), |p, h| {
        let gc = |q: Vec3| grad(&chi_o, q, h);
        let gp = |q: Vec3| grad(&pi_o, q, h);
        let w = |q: Vec3| Some(gc(q).ok()?.cross(&gp(q).ok()?));
        let a_vec = |q: Vec3| {
            let (c, s) = (gc(q).ok()?, gp(q).ok()?);
            Some(s.cross(&c.cross(&s)))
        };
        let b_vec = |q: Vec3| {
            let (c, s) = (gc(q).ok()?, gp(q).ok()?);
            Some(c.cross(&s.cross(&c)))
        };
        let lhs = value_or_escape(w(p), p)?.cross(&curl(&w, p, 2.0 * h)?);
        let a = div(&a_vec, p, 2.0 * h)?;
        let b = div(&b_vec, p, 2.0 * h)?;
        let rhs = gc(p)? * a + gp(p)? * b;
        Ok::<_, CalculusError>(PointResidual::scaled((lhs - rhs).norm(), lhs.norm()))
    }))
}

fn value_or_escape(v: Option<Vec3>, p: Vec3) -> Result<Vec3, CalculusError> {
    v.ok_or(CalculusError::StencilEscape { x: p.x, y: p.y, z: p.z })
}

/// Residuals of the Hamiltonian system for `w = ∇μ + λ∇C` with orthogonal
/// `(μ, λ, C)`: `w·∇λ + ∂𝒫/∂C`, `w·∇C − ∂𝒫/∂λ` and `∂𝒫/∂μ`, where
/// `𝒫 = P + ½w²` and `∂/∂q = (∇q/|∇q|²)·∇`. Reports the largest of the three.
pub fn check_hamiltonian_structure(
    ctx: &CheckContext,
    forms: &dyn EulerClosedForms,
    field: &VectorFieldEval,
    points: &[Vec3],
) -> ResidualReport {
    let total = |q: Vec3| {
        field
            .try_eval(q)
            .map(|w| forms.pressure(q).value + 0.5 * w.norm_squared())
    };
    let partial = |grad_total: Vec3, grad_q: Vec3| {
        let n2 = grad_q.norm_squared();
        if n2 == 0.0 {
            0.0
        } else {
            grad_total.dot(&grad_q) / n2
        }
    };
    run_check(ctx, "hamiltonian-structure", points, None, |p, h| {
        let w = value_at(field, p)?;
        let g = grad(&total, p, h)?;
        let (mu, lambda, flux) = (forms.mu(p), forms.lambda(p), forms.flux(p));
        let r1 = w.dot(&lambda.grad) + partial(g, flux.grad);
        let r2 = w.dot(&flux.grad) - partial(g, lambda.grad);
        let r3 = partial(g, mu.grad);
        Ok::<_, CalculusError>(PointResidual::abs(r1.abs().max(r2.abs()).max(r3.abs())))
    })
}

/// Largest `|w · x/|x||` over `n` cleared points of the sphere `|x| = radius`.
pub fn boundary_tangency(field: &VectorFieldEval, radius: f64, n: usize, seed: u64) -> f64 {
    let mut sampler = LowDiscrepancy::new(seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < n {
        let u = sampler.next_unit();
        let theta = (1.0 - 2.0 * u[0]).acos();
        let phi = 2.0 * std::f64::consts::PI * u[1];
        let p = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()) * radius;
        if let Some(w) = field.try_eval(p) {
            worst = worst.max(w.dot(&(p / p.norm())).abs());
            taken += 1;
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub w2: f64,
    /// `w² R² sin²ϑ`
    pub w2_r2_sin2: f64,
    /// `|L|` for the supplied invariant
    pub abs_l: f64,
}

/// Evaluates `w²`, `w²R²sin²ϑ` and `|L|` along the meridian `(R, ϑ, φ)` for
/// each polar angle in `thetas`. The scan deliberately goes inside the chart
/// clearance; angles where the closed form is not finite are skipped.
pub fn singularity_scan(
    field: &VectorFieldEval,
    invariant: &Invariant,
    radius: f64,
    phi: f64,
    thetas: &[f64],
) -> Vec<ScanRow> {
    thetas
        .iter()
        .filter_map(|&theta| {
            let p = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()) * radius;
            let w2 = field.eval_unchecked(p).norm_squared();
            if !w2.is_finite() {
                return None;
            }
            let s = theta.sin();
            Some(ScanRow {
                theta,
                w2,
                w2_r2_sin2: w2 * radius * radius * s * s,
                abs_l: invariant.eval(p).abs(),
            })
        })
        .collect()
}
