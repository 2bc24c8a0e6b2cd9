//! Level-surface meshes with the field sampled on them.
//!
//! Each surface is a regular parameter grid. Level sets of the `L`
//! invariants are parametrized by solving for one coordinate in closed form;
//! vertices where that solution leaves the chart branch or the plotting box
//! are dropped, and the dropped parameter intervals are recorded.

use std::f64::consts::{FRAC_PI_2, PI};

use clap::ValueEnum;
use serde::Serialize;

use crate::charts::{AlphaReparam, Chart};
use crate::fields::{recipe, VectorFieldEval};
use crate::{Error, Vec3};

const POLE_GAP: f64 = 0.05;
const BRANCH_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    /// spherical-fig1 on the sphere R = 1
    Fig1a,
    /// spherical-fig1 on L_R = 0.5
    Fig1b,
    /// gb-fig2 on the planes z = -1.3, 0, 1.3
    Fig2a,
    /// gb-fig2 on L_z = 0.5
    Fig2b,
    /// gb-fig3 on the half-planes phi = 0, pi
    Fig3a,
    /// gb-fig3 on L_phi = 1
    Fig3b,
}

impl FigureId {
    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
        }
    }

    pub fn case_id(&self) -> &'static str {
        match self {
            FigureId::Fig1a | FigureId::Fig1b => "spherical-fig1",
            FigureId::Fig2a | FigureId::Fig2b => "gb-fig2",
            FigureId::Fig3a | FigureId::Fig3b => "gb-fig3",
        }
    }
}

/// Run of dropped vertices along one grid row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClippedBand {
    pub row_parameter: &'static str,
    pub row_value: f64,
    pub column_parameter: &'static str,
    pub from: f64,
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FigureMesh {
    pub points: Vec<Vec3>,
    pub quads: Vec<[usize; 4]>,
    pub vectors: Vec<Vec3>,
    pub clipped: Vec<ClippedBand>,
}

struct Sheet<'a> {
    u: (&'static str, f64, f64),
    v: (&'static str, f64, f64),
    map: &'a dyn Fn(f64, f64) -> Option<Vec3>,
}

fn lerp(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    lo + (hi - lo) * k as f64 / (n - 1) as f64
}

impl FigureMesh {
    fn add_sheet(&mut self, field: &VectorFieldEval, sheet: &Sheet, n: usize) {
        let mut index = vec![None; n * n];
        for i in 0..n {
            let u = lerp(sheet.u.1, sheet.u.2, i, n);
            let mut run: Option<(f64, f64)> = None;
            for j in 0..n {
                let v = lerp(sheet.v.1, sheet.v.2, j, n);
                let vertex = (sheet.map)(u, v).and_then(|p| field.try_eval(p).map(|w| (p, w)));
                match vertex {
                    Some((p, w)) => {
                        index[i * n + j] = Some(self.points.len());
                        self.points.push(p);
                        self.vectors.push(w);
                        if let Some((from, to)) = run.take() {
                            self.clip(sheet, u, from, to);
                        }
                    }
                    None => run = Some((run.map_or(v, |r| r.0), v)),
                }
            }
            if let Some((from, to)) = run {
                self.clip(sheet, u, from, to);
            }
        }
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let corners = [
                    index[i * n + j],
                    index[(i + 1) * n + j],
                    index[(i + 1) * n + j + 1],
                    index[i * n + j + 1],
                ];
                if let [Some(a), Some(b), Some(c), Some(d)] = corners {
                    self.quads.push([a, b, c, d]);
                }
            }
        }
    }

    fn clip(&mut self, sheet: &Sheet, u: f64, from: f64, to: f64) {
        self.clipped.push(ClippedBand {
            row_parameter: sheet.u.0,
            row_value: u,
            column_parameter: sheet.v.0,
            from,
            to,
        });
    }
}

/// Mesh for `id` with `resolution × resolution` vertices per sheet.
pub fn figure_mesh(id: FigureId, resolution: usize) -> Result<FigureMesh, Error> {
    if resolution < 2 {
        return Err(Error::Usage(format!("resolution must be at least 2, got {resolution}")));
    }
    let r = recipe(id.case_id()).ok_or_else(|| Error::UnknownCase(id.case_id().into()))?;
    let field = r.build()?;
    let mut mesh = FigureMesh::default();
    let sph = Chart::spherical();
    let n = resolution;
    match id {
        FigureId::Fig1a => {
            let map = |theta: f64, phi: f64| Some(sph.inverse([1.0, theta, phi]));
            let sheet = Sheet {
                u: ("theta", POLE_GAP, PI - POLE_GAP),
                v: ("phi", -PI, PI),
                map: &map,
            };
            mesh.add_sheet(&field, &sheet, n);
        }
        FigureId::Fig1b => {
            // φ = (L_R + α(ϑ) sin R) / cos R on the atan2 branch
            let level = 0.5;
            let map = |radius: f64, theta: f64| {
                let phi = (level + AlphaReparam::LogTanHalf.alpha(theta) * radius.sin()) / radius.cos();
                (phi.abs() < PI - BRANCH_GAP).then(|| sph.inverse([radius, theta, phi]))
            };
            let sheet = Sheet {
                u: ("R", 0.2, 1.4),
                v: ("theta", POLE_GAP, PI - POLE_GAP),
                map: &map,
            };
            mesh.add_sheet(&field, &sheet, n);
        }
        FigureId::Fig2a => {
            for z in [-1.3, 0.0, 1.3] {
                let map = move |x: f64, y: f64| Some(Vec3::new(x, y, z));
                let sheet = Sheet {
                    u: ("x", -1.5, 1.5),
                    v: ("y", -1.5, 1.5),
                    map: &map,
                };
                mesh.add_sheet(&field, &sheet, n);
            }
        }
        FigureId::Fig2b => {
            // x = (L_z + y sin z) / cos z, kept inside the plotting box
            let level = 0.5;
            let map = |z: f64, y: f64| {
                let x = (level + y * z.sin()) / z.cos();
                (x.abs() <= 1.5).then(|| Vec3::new(x, y, z))
            };
            let sheet = Sheet {
                u: ("z", -1.5, 1.5),
                v: ("y", -1.5, 1.5),
                map: &map,
            };
            mesh.add_sheet(&field, &sheet, n);
        }
        FigureId::Fig3a => {
            for sign in [1.0, -1.0] {
                let map = move |r: f64, z: f64| Some(Vec3::new(sign * r, 0.0, z));
                let sheet = Sheet {
                    u: ("r", POLE_GAP, 2.0),
                    v: ("z", -1.5, 1.5),
                    map: &map,
                };
                mesh.add_sheet(&field, &sheet, n);
            }
        }
        FigureId::Fig3b => {
            // r = (L_φ + z sin φ) / cos φ with φ on the branch centred at π/2
            let level = 1.0;
            let map = |phi: f64, z: f64| {
                let r = (level + z * phi.sin()) / phi.cos();
                (POLE_GAP..=2.0)
                    .contains(&r)
                    .then(|| Vec3::new(r * phi.cos(), r * phi.sin(), z))
            };
            let sheet = Sheet {
                u: ("phi", -FRAC_PI_2 + 0.01, 3.0 * FRAC_PI_2 - 0.01),
                v: ("z", -1.5, 1.5),
                map: &map,
            };
            mesh.add_sheet(&field, &sheet, n);
        }
    }
    Ok(mesh)
}
