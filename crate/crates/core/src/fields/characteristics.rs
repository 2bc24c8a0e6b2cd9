//! Method of characteristics for `∇P · ∇C = 0` in the plane.
//!
//! `C` is constant along the gradient lines of `P`. Each query point is
//! traced along `±∇P/|∇P|` with step-doubling RK4 until it meets a seed
//! curve; `C` is the seed's arc-length parameter at the hit.

use rayon::prelude::*;
use serde::Serialize;

use super::FieldError;

/// Curve on which `C` is prescribed by arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SeedCurve {
    /// Arc length measured counter-clockwise from the positive x direction.
    Circle { center: [f64; 2], radius: f64 },
    /// Arc length measured from `origin` along the unit `direction`.
    Line { origin: [f64; 2], direction: [f64; 2] },
}

impl SeedCurve {
    fn level(&self, q: [f64; 2]) -> f64 {
        match self {
            SeedCurve::Circle { center, radius } => (q[0] - center[0]).hypot(q[1] - center[1]) - radius,
            SeedCurve::Line { origin, direction } => {
                let n = [-direction[1], direction[0]];
                n[0] * (q[0] - origin[0]) + n[1] * (q[1] - origin[1])
            }
        }
    }

    fn level_grad(&self, q: [f64; 2]) -> [f64; 2] {
        match self {
            SeedCurve::Circle { center, .. } => {
                let d = [q[0] - center[0], q[1] - center[1]];
                let n = d[0].hypot(d[1]);
                [d[0] / n, d[1] / n]
            }
            SeedCurve::Line { direction, .. } => [-direction[1], direction[0]],
        }
    }

    fn parameter(&self, q: [f64; 2]) -> f64 {
        match self {
            SeedCurve::Circle { center, radius } => radius * (q[1] - center[1]).atan2(q[0] - center[0]),
            SeedCurve::Line { origin, direction } => {
                direction[0] * (q[0] - origin[0]) + direction[1] * (q[1] - origin[1])
            }
        }
    }
}

/// Axis-aligned node grid (inclusive bounds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2 {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub n: [usize; 2],
}

impl Grid2 {
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let t = |k: usize, idx: usize| {
            if self.n[k] < 2 {
                self.lo[k]
            } else {
                self.lo[k] + (self.hi[k] - self.lo[k]) * idx as f64 / (self.n[k] - 1) as f64
            }
        };
        [t(0, i), t(1, j)]
    }

    pub fn contains(&self, q: [f64; 2]) -> bool {
        (0..2).all(|k| q[k] >= self.lo[k] && q[k] <= self.hi[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Box the characteristics must stay in while travelling to the seed.
    pub trace_lo: [f64; 2],
    pub trace_hi: [f64; 2],
    pub tol: f64,
    pub max_length: f64,
    pub grad_floor: f64,
}

impl TraceOptions {
    pub fn within(trace_lo: [f64; 2], trace_hi: [f64; 2]) -> Self {
        Self {
            trace_lo,
            trace_hi,
            tol: 1e-12,
            max_length: 100.0,
            grad_floor: 1e-6,
        }
    }

    fn inside(&self, q: [f64; 2]) -> bool {
        (0..2).all(|k| q[k] >= self.trace_lo[k] && q[k] <= self.trace_hi[k])
    }
}

/// `C` sampled on a grid, row-major in `j` (index `j * nx + i`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicsGrid {
    pub grid: Grid2,
    pub values: Vec<f64>,
}

impl CharacteristicsGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n[0] + i]
    }
}

fn rk4_step<F>(f: &F, q: [f64; 2], h: f64) -> Option<[f64; 2]>
where
    F: Fn([f64; 2]) -> Option<[f64; 2]>,
{
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
    let k1 = f(q)?;
    let k2 = f(add(q, k1, h / 2.0))?;
    let k3 = f(add(q, k2, h / 2.0))?;
    let k4 = f(add(q, k3, h))?;
    Some([
        q[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        q[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Value of `C` at `q`.
pub fn characteristic_value<G>(
    grad_p: &G,
    seed: &SeedCurve,
    opts: &TraceOptions,
    q: [f64; 2],
) -> Result<f64, FieldError>
where
    G: Fn([f64; 2]) -> [f64; 2] + ?Sized,
{
    let critical = || FieldError::CriticalPoint { x: q[0], y: q[1] };
    let escaped = || FieldError::EscapedDomain { x: q[0], y: q[1] };

    let level0 = seed.level(q);
    if level0 == 0.0 {
        return Ok(seed.parameter(q));
    }
    let g0 = grad_p(q);
    let n0 = g0[0].hypot(g0[1]);
    if n0 < opts.grad_floor {
        return Err(critical());
    }
    let lg = seed.level_grad(q);
    let approach = (lg[0] * g0[0] + lg[1] * g0[1]) / n0;
    if approach == 0.0 {
        return Err(escaped());
    }
    // move so that |level| decreases
    let dir = -level0.signum() * approach.signum();
    let floor = opts.grad_floor;
    let rhs = |p: [f64; 2]| {
        let g = grad_p(p);
        let n = g[0].hypot(g[1]);
        if n < floor || !n.is_finite() {
            None
        } else {
            Some([dir * g[0] / n, dir * g[1] / n])
        }
    };

    let mut p = q;
    let mut travelled = 0.0;
    let mut h: f64 = 1e-2;
    let sign0 = level0.signum();
    while travelled < opts.max_length {
        let full = rk4_step(&rhs, p, h).ok_or_else(critical)?;
        let half = rk4_step(&rhs, p, h / 2.0).ok_or_else(critical)?;
        let two = rk4_step(&rhs, half, h / 2.0).ok_or_else(critical)?;
        let err = (two[0] - full[0]).hypot(two[1] - full[1]) / 15.0;
        if err > opts.tol && h > 1e-8 {
            h *= 0.5;
            continue;
        }
        if !opts.inside(two) {
            return Err(escaped());
        }
        if seed.level(two).signum() != sign0 {
            // bisect on the step length from p
            let (mut a, mut b) = (0.0, h);
            let mut hit = two;
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let pm = rk4_step(&rhs, p, m).ok_or_else(critical)?;
                let lm = seed.level(pm);
                hit = pm;
                if lm == 0.0 || (b - a) < 1e-15 {
                    break;
                }
                if lm.signum() == sign0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(seed.parameter(hit));
        }
        p = two;
        travelled += h;
        if err < opts.tol / 64.0 {
            h = (h * 1.5).min(5e-2);
        }
    }
    Err(escaped())
}

/// `C` on every node of `grid`; nodes are traced independently in parallel.
pub fn solve_characteristics<G>(
    grad_p: &G,
    seed: &SeedCurve,
    grid: &Grid2,
    opts: &TraceOptions,
) -> Result<CharacteristicsGrid, FieldError>
where
    G: Fn([f64; 2]) -> [f64; 2] + Sync,
{
    let nodes: Vec<[f64; 2]> = (0..grid.n[1])
        .flat_map(|j| (0..grid.n[0]).map(move |i| (i, j)))
        .map(|(i, j)| grid.node(i, j))
        .collect();
    let values = nodes
        .par_iter()
        .map(|&q| characteristic_value(grad_p, seed, opts, q))
        .collect::<Result<Vec<f64>, FieldError>>()?;
    Ok(CharacteristicsGrid { grid: *grid, values })
}
