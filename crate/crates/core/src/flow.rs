//! Field-line tracing with classic RK4 and invariant-drift measurement.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::export::write_csv;
use crate::fields::{Domain, Invariant, VectorFieldEval};
use crate::Vec3;

/// Speeds below this stop a normalised trace.
pub const SPEED_FLOOR: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("seed ({x}, {y}, {z}) is not in the cleared domain")]
    SeedNotCleared { x: f64, y: f64, z: f64 },
    #[error("field vanishes at the seed ({x}, {y}, {z})")]
    DegenerateField { x: f64, y: f64, z: f64 },
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
}

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    /// An RK4 stage left the field's cleared domain.
    NotCleared {
        step: usize,
    },
    /// The speed fell under [`SPEED_FLOOR`] during a normalised step.
    DegenerateField {
        step: usize,
    },
    /// The next point left the bounding domain.
    LeftDomain {
        step: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub case_id: String,
    pub seed: Vec3,
    pub ds: f64,
    /// Steps requested; `points.len() - 1` were taken.
    pub n_steps: usize,
    pub normalize: bool,
    pub points: Vec<Vec3>,
    /// Cumulative chord length along `points`.
    pub arc_length: Vec<f64>,
    pub termination: Termination,
}

impl FlowTrace {
    pub fn steps_taken(&self) -> usize {
        self.points.len() - 1
    }

    /// Writes `s, x, y, z` and one column per invariant.
    pub fn write_csv<W: Write>(&self, out: &mut W, invariants: &[Invariant]) -> io::Result<()> {
        let mut header = vec!["s", "x", "y", "z"];
        header.extend(invariants.iter().map(|i| i.name()));
        let rows: Vec<Vec<f64>> = self
            .points
            .iter()
            .zip(&self.arc_length)
            .map(|(p, s)| {
                let mut row = vec![*s, p.x, p.y, p.z];
                row.extend(invariants.iter().map(|i| i.eval(*p)));
                row
            })
            .collect();
        write_csv(out, &header, &rows)
    }
}

enum Stage {
    Ok(Vec3),
    NotCleared,
    Degenerate,
}

fn direction(field: &VectorFieldEval, p: Vec3, normalize: bool) -> Stage {
    match field.try_eval(p) {
        None => Stage::NotCleared,
        Some(w) if !w.iter().all(|v| v.is_finite()) => Stage::NotCleared,
        Some(w) if normalize => {
            let n = w.norm();
            if n < SPEED_FLOOR {
                Stage::Degenerate
            } else {
                Stage::Ok(w / n)
            }
        }
        Some(w) => Stage::Ok(w),
    }
}

/// Integrates `dx/ds = w` (or `w/|w|` when `normalize`) from `seed` for up to
/// `n_steps` RK4 steps of size `ds`. The trace stops early, with the reason
/// recorded, when a stage leaves the cleared domain, the field degenerates,
/// or the next point leaves `bounds`.
pub fn trace_field_line(
    field: &VectorFieldEval,
    seed: Vec3,
    ds: f64,
    n_steps: usize,
    normalize: bool,
    bounds: Option<&Domain>,
) -> Result<FlowTrace, FlowError> {
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(FlowError::BadStep(ds));
    }
    match direction(field, seed, normalize) {
        Stage::NotCleared => {
            return Err(FlowError::SeedNotCleared {
                x: seed.x,
                y: seed.y,
                z: seed.z,
            })
        }
        Stage::Degenerate => {
            return Err(FlowError::DegenerateField {
                x: seed.x,
                y: seed.y,
                z: seed.z,
            })
        }
        Stage::Ok(_) => {}
    }

    let mut points = vec![seed];
    let mut arc_length = vec![0.0];
    let mut termination = Termination::Completed;
    let mut x = seed;
    'steps: for step in 0..n_steps {
        let mut k = [Vec3::zeros(); 4];
        for (i, offset) in [0.0, 0.5, 0.5, 1.0].into_iter().enumerate() {
            let probe = if i == 0 { x } else { x + k[i - 1] * (offset * ds) };
            match direction(field, probe, normalize) {
                Stage::Ok(v) => k[i] = v,
                Stage::NotCleared => {
                    termination = Termination::NotCleared { step };
                    break 'steps;
                }
                Stage::Degenerate => {
                    termination = Termination::DegenerateField { step };
                    break 'steps;
                }
            }
        }
        let next = x + (k[0] + k[1] * 2.0 + k[2] * 2.0 + k[3]) * (ds / 6.0);
        if bounds.is_some_and(|d| !d.contains(next)) {
            termination = Termination::LeftDomain { step };
            break;
        }
        if !field.is_cleared(next) {
            termination = Termination::NotCleared { step };
            break;
        }
        let s = arc_length.last().copied().unwrap_or(0.0) + (next - x).norm();
        points.push(next);
        arc_length.push(s);
        x = next;
    }

    Ok(FlowTrace {
        case_id: field.label().to_string(),
        seed,
        ds,
        n_steps,
        normalize,
        points,
        arc_length,
        termination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Drift {
    /// `max_i |f(x_i) − f(x_0)|`
    pub max_drift: f64,
    /// `max_drift / max(1, |f(x_0)|)`
    pub relative_drift: f64,
}

pub fn invariant_drift(trace: &FlowTrace, invariant: &Invariant) -> Drift {
    let f0 = invariant.eval(trace.points[0]);
    let max_drift = trace
        .points
        .iter()
        .map(|p| (invariant.eval(*p) - f0).abs())
        .fold(0.0, f64::max);
    Drift {
        max_drift,
        relative_drift: max_drift / f0.abs().max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn everywhere(f: impl Fn(Vec3) -> Vec3 + Send + Sync + 'static) -> VectorFieldEval {
        VectorFieldEval::from_fn("test", f, |_| true)
    }

    #[test]
    fn constant_field_straight_line() {
        let f = everywhere(|_| Vec3::z());
        let t = trace_field_line(&f, Vec3::zeros(), 0.1, 10, true, None).unwrap();
        assert_eq!(t.termination, Termination::Completed);
        assert!((t.points[10] - Vec3::z()).norm() < 1e-12);
        let x = Invariant::new("x", |p| p.x);
        assert_eq!(invariant_drift(&t, &x).max_drift, 0.0);
    }

    #[test]
    fn rotation_closes_circle() {
        let f = everywhere(|p| Vec3::new(-p.y, p.x, 0.0));
        let t = trace_field_line(&f, Vec3::x(), 2.0 * PI / 1000.0, 1000, false, None).unwrap();
        assert!((t.points[1000] - Vec3::x()).norm() < 1e-9);
    }

    #[test]
    fn leaving_bounds_is_recorded() {
        let f = everywhere(|_| Vec3::x());
        let d = Domain::cartesian([-1.0; 3], [1.0; 3]);
        let t = trace_field_line(&f, Vec3::zeros(), 0.3, 10, true, Some(&d)).unwrap();
        assert_eq!(t.termination, Termination::LeftDomain { step: 3 });
        assert_eq!(t.steps_taken(), 3);
    }

    #[test]
    fn excluded_set_stops_trace() {
        let f = VectorFieldEval::from_fn("half", |_| Vec3::x(), |p: Vec3| p.x < 0.5);
        let t = trace_field_line(&f, Vec3::zeros(), 0.2, 10, true, None).unwrap();
        assert!(matches!(t.termination, Termination::NotCleared { .. }));
        assert!(t.points.iter().all(|p| p.x < 0.5));
    }

    #[test]
    fn seed_errors() {
        let f = VectorFieldEval::from_fn("half", |_| Vec3::zeros(), |p: Vec3| p.x < 0.5);
        assert!(matches!(
            trace_field_line(&f, Vec3::x(), 0.1, 1, true, None),
            Err(FlowError::SeedNotCleared { .. })
        ));
        assert!(matches!(
            trace_field_line(&f, Vec3::zeros(), 0.1, 1, true, None),
            Err(FlowError::DegenerateField { .. })
        ));
    }

    #[test]
    fn csv_columns() {
        let f = everywhere(|_| Vec3::z());
        let t = trace_field_line(&f, Vec3::zeros(), 0.5, 2, true, None).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, &[Invariant::new("x", |p| p.x)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,x,y,z,x");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("1.00000000e+00,0.00000000e+00,0.00000000e+00,1.00000000e+00"));
    }
}
