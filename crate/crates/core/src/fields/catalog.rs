//! Named recipes for every constructed field.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use super::{
    build_euler_flow, build_generalized_beltrami, build_mhd_equilibrium, build_solenoidal_beltrami, Amplitude,
    BeltramiSpec, EulerCase, EulerClosedForms, FieldError, Frame, GeneralizedSpec, Kind, MhdCase, MhdClosedForms,
    Sigma, VectorFieldEval,
};
use crate::charts::{theorem_ordering, Chart, PhiBranch};
use crate::harmonic::{ConjugatePair, OrientedPair};
use crate::sampling::{case_seed, CoordBox, LowDiscrepancy};
use crate::Vec3;

const BUILD_CHECK_POINTS: usize = 64;
const CONTAINS_TOL: f64 = 1e-12;

/// Box in a chart's natural coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub chart: Chart,
    pub coords: CoordBox,
}

impl Domain {
    pub const fn cartesian(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self {
            chart: Chart::Cartesian,
            coords: CoordBox::new(lo, hi),
        }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        if !self.chart.is_cleared(p) {
            return false;
        }
        let q = self.chart.forward_unchecked(p);
        (0..3).all(|k| q[k] >= self.coords.lo[k] - CONTAINS_TOL && q[k] <= self.coords.hi[k] + CONTAINS_TOL)
    }

    pub fn center(&self) -> Vec3 {
        self.chart.inverse(self.coords.center())
    }

    /// `n` low-discrepancy points of the box mapped to Cartesian space.
    pub fn samples(&self, n: usize, seed: u64) -> Vec<Vec3> {
        LowDiscrepancy::new(seed)
            .take_units(n)
            .into_iter()
            .map(|u| self.chart.inverse(self.coords.at_unit(u)))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum RecipeSpec {
    Beltrami(BeltramiSpec),
    Generalized(GeneralizedSpec),
    Mhd { case: MhdCase, sigma: Sigma },
    Euler(EulerCase),
}

#[derive(Debug, Clone)]
pub struct FieldRecipe {
    pub id: String,
    /// Closed-form summary shown by `list`.
    pub summary: String,
    pub spec: RecipeSpec,
    pub domain: Domain,
    /// Default Cartesian bounds for grid sampling; inside `domain`.
    pub grid_bounds: CoordBox,
}

impl FieldRecipe {
    pub fn kind(&self) -> Kind {
        match self.spec {
            RecipeSpec::Beltrami(_) => Kind::SolenoidalBeltrami,
            RecipeSpec::Generalized(_) => Kind::GeneralizedBeltrami,
            RecipeSpec::Mhd { .. } => Kind::MhdEquilibrium,
            RecipeSpec::Euler(_) => Kind::EulerFlow,
        }
    }

    /// Chart in which the construction is expressed.
    pub fn chart_name(&self) -> &'static str {
        match &self.spec {
            RecipeSpec::Beltrami(s) => s.chart.name(),
            RecipeSpec::Generalized(s) => match s.frame {
                Frame::Chart { chart, .. } => chart.name(),
                Frame::Planar { .. } => "cartesian",
                Frame::Meridional { .. } => "cylindrical",
            },
            RecipeSpec::Mhd { case, .. } => match case {
                MhdCase::ExpCylindrical { .. } | MhdCase::ProfileR { .. } => "cylindrical",
                _ => "cartesian",
            },
            RecipeSpec::Euler(case) => match case {
                EulerCase::UniformX { .. } | EulerCase::ExpDiagonal => "cartesian",
                _ => "cylindrical",
            },
        }
    }

    pub fn build(&self) -> Result<VectorFieldEval, FieldError> {
        let check = || self.domain.samples(BUILD_CHECK_POINTS, case_seed(0, &self.id));
        let field = match &self.spec {
            RecipeSpec::Beltrami(s) => build_solenoidal_beltrami(s)?,
            RecipeSpec::Generalized(s) => build_generalized_beltrami(s, &check())?,
            RecipeSpec::Mhd { case, sigma } => build_mhd_equilibrium(Arc::new(*case), *sigma, &check())?,
            RecipeSpec::Euler(case) => build_euler_flow(Arc::new(*case), &check())?,
        };
        Ok(field)
    }

    /// Exponent κ of `w × (∇×w) = ∇(P + κw²)`; `None` for plain Beltrami fields.
    pub fn kappa(&self) -> Option<f64> {
        match &self.spec {
            RecipeSpec::Beltrami(_) => None,
            RecipeSpec::Generalized(s) => Some(s.kappa),
            RecipeSpec::Mhd { .. } => Some(0.0),
            RecipeSpec::Euler(_) => Some(0.5),
        }
    }

    /// Pressure `P` in the force balance (zero for generalized Beltrami fields).
    pub fn pressure(&self, p: Vec3) -> f64 {
        match &self.spec {
            RecipeSpec::Mhd { case, .. } => case.pressure(p).value,
            RecipeSpec::Euler(case) => case.pressure(p).value,
            _ => 0.0,
        }
    }

    pub fn pressure_gradient(&self, p: Vec3) -> Vec3 {
        match &self.spec {
            RecipeSpec::Mhd { case, .. } => case.pressure(p).grad,
            RecipeSpec::Euler(case) => case.pressure(p).grad,
            _ => Vec3::zeros(),
        }
    }

    /// Harmonic frame and profile for frame-built fields.
    pub fn frame(&self) -> Option<(Frame, Sigma)> {
        match &self.spec {
            RecipeSpec::Beltrami(s) => s.frame().ok().map(|f| (f, s.sigma)),
            RecipeSpec::Generalized(s) => Some((s.frame, s.sigma)),
            _ => None,
        }
    }
}

fn beltrami(chart: Chart, pair: OrientedPair) -> BeltramiSpec {
    BeltramiSpec {
        chart,
        order: theorem_ordering(&chart).expect("catalog charts admit the reduction"),
        pair,
        sigma: Sigma::IDENTITY,
    }
}

fn beltrami_recipes() -> Vec<FieldRecipe> {
    let mut out = Vec::new();
    for pair in ConjugatePair::catalog() {
        // the Poisson kernel blows up at (α, β) = (0, 0); the trig-hyperbolic
        // pair is kept off x = 0 where its level sets pinch
        let cart_domain = match pair {
            ConjugatePair::PoissonKernel => Domain::cartesian([0.8, -1.0, -1.0], [1.8, 1.0, 1.0]),
            ConjugatePair::TrigHyperbolic => Domain::cartesian([0.2, -1.0, -1.0], [1.2, 1.0, 1.0]),
            _ => Domain::cartesian([-1.0; 3], [1.0; 3]),
        };
        out.push(FieldRecipe {
            id: format!("cartesian-{}", pair.name()),
            summary: format!("{} pair on (x, y), sigma = z", pair.name()),
            spec: RecipeSpec::Beltrami(beltrami(Chart::Cartesian, OrientedPair::direct(pair))),
            domain: cart_domain,
            grid_bounds: cart_domain.coords,
        });
        let phi_lo = if pair == ConjugatePair::PoissonKernel { 0.7 } else { 0.3 };
        out.push(FieldRecipe {
            id: format!("cylindrical-{}", pair.name()),
            summary: format!("{} pair on (log r, phi), sigma = z", pair.name()),
            spec: RecipeSpec::Beltrami(beltrami(Chart::cylindrical(), OrientedPair::direct(pair))),
            domain: Domain {
                chart: Chart::cylindrical(),
                coords: CoordBox::new([0.7, phi_lo, -1.0], [1.5, 1.4, 1.0]),
            },
            grid_bounds: CoordBox::new([0.3, 0.75, -1.0], [0.5, 1.0, 1.0]),
        });
        let phi_lo = if pair == ConjugatePair::PoissonKernel { 0.8 } else { 0.2 };
        // pairs growing like e^|α| need more distance from the poles
        let polar_gap = match pair {
            ConjugatePair::Exponential | ConjugatePair::TrigHyperbolic => 0.9,
            _ => POLAR_GAP,
        };
        out.push(FieldRecipe {
            id: format!("spherical-{}", pair.name()),
            summary: format!("{} pair on (log tan(theta/2), phi), sigma = R", pair.name()),
            spec: RecipeSpec::Beltrami(beltrami(Chart::spherical(), OrientedPair::direct(pair))),
            domain: spherical_shell(polar_gap, phi_lo),
            grid_bounds: spherical_grid(),
        });
    }
    out.push(FieldRecipe {
        id: "spherical-fig1".into(),
        summary: "(l, psi) = (phi, log tan(theta/2)), sigma = R; tangent to every sphere".into(),
        spec: RecipeSpec::Beltrami(beltrami(
            Chart::spherical(),
            OrientedPair::swapped(ConjugatePair::Linear),
        )),
        domain: spherical_shell(POLAR_GAP, 0.2),
        grid_bounds: spherical_grid(),
    });
    out
}

const POLAR_GAP: f64 = 0.7;

fn spherical_shell(polar_gap: f64, phi_lo: f64) -> Domain {
    Domain {
        chart: Chart::spherical(),
        coords: CoordBox::new([0.5, polar_gap, phi_lo], [1.5, PI - polar_gap, 2.8]),
    }
}

fn spherical_grid() -> CoordBox {
    CoordBox::new([-0.3, 0.9, -0.4], [0.3, 1.2, 0.4])
}

fn generalized_recipes() -> Vec<FieldRecipe> {
    let fig3_branch = PhiBranch::centered(FRAC_PI_2);
    let kappa = 0.25;
    let a0: f64 = 2.0;
    vec![
        FieldRecipe {
            id: "gb-fig2".into(),
            summary: "sin(z + L_z)(sin z, cos z, 0), L_z = x cos z - y sin z".into(),
            spec: RecipeSpec::Generalized(GeneralizedSpec {
                frame: Frame::Planar { scale: 1.0 },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::SinSum,
                kappa: 0.5,
            }),
            domain: Domain::cartesian([-1.5; 3], [1.5; 3]),
            grid_bounds: CoordBox::new([-1.5; 3], [1.5; 3]),
        },
        FieldRecipe {
            id: "gb-fig3".into(),
            summary: "sin(phi + L_phi)[cos phi grad z + sin phi grad r], L_phi = r cos phi - z sin phi".into(),
            spec: RecipeSpec::Generalized(GeneralizedSpec {
                frame: Frame::Meridional { branch: fig3_branch },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::SinSum,
                kappa: 0.5,
            }),
            domain: Domain {
                chart: Chart::Cylindrical { branch: fig3_branch },
                coords: CoordBox::new([0.5, -0.3, -1.0], [2.0, PI + 0.3, 1.0]),
            },
            grid_bounds: CoordBox::new([-1.2, 0.6, -1.0], [1.2, 1.4, 1.0]),
        },
        FieldRecipe {
            id: "gb-kappa-quarter".into(),
            summary: "kappa = 1/4, amplitude 2, l = sqrt(2) x, psi = sqrt(2) y, sigma = z".into(),
            spec: RecipeSpec::Generalized(GeneralizedSpec {
                frame: Frame::Planar {
                    scale: a0.powf(1.0 - 2.0 * kappa),
                },
                sigma: Sigma::IDENTITY,
                amplitude: Amplitude::Constant(a0),
                kappa,
            }),
            domain: Domain::cartesian([-1.0; 3], [1.0; 3]),
            grid_bounds: CoordBox::new([-1.0; 3], [1.0; 3]),
        },
    ]
}

fn mhd_recipes() -> Vec<FieldRecipe> {
    let b = PhiBranch::ATAN2;
    let mhd = |id: &str, summary: &str, case: MhdCase, lo: [f64; 3], hi: [f64; 3]| FieldRecipe {
        id: id.into(),
        summary: summary.into(),
        spec: RecipeSpec::Mhd {
            case,
            sigma: Sigma::IDENTITY,
        },
        domain: Domain::cartesian(lo, hi),
        grid_bounds: CoordBox::new(lo, hi),
    };
    vec![
        mhd(
            "mhd-xy",
            "P = xy, C = (y^2 - x^2)/2, lambda^2 = log(sqrt(C^2 + P^2) + P), mu = z",
            MhdCase::Hyperbolic,
            [1.0, 1.0, 0.0],
            [2.0, 2.0, 1.0],
        ),
        mhd(
            "mhd-exp",
            "P = e^x sin y, C = e^x cos y, lambda^2 = (2/C) arctan(P/C), mu = z",
            MhdCase::ExpSine,
            [0.0, 0.2, 0.0],
            [1.0, 1.2, 1.0],
        ),
        mhd(
            "mhd-cyl",
            "P = exp(-r - z), C = r - z, lambda = sqrt(P), mu = phi",
            MhdCase::ExpCylindrical { branch: b },
            [0.5, 0.5, 0.0],
            [1.5, 1.5, 1.0],
        ),
        mhd(
            "mhd-profile-x",
            "P = 1 + x^2, w = grad z + sqrt(2P) grad y",
            MhdCase::ProfileX,
            [-1.0; 3],
            [1.0; 3],
        ),
        mhd(
            "mhd-profile-r",
            "P = 1 + r^2, w = grad phi + sqrt(2P) grad z",
            MhdCase::ProfileR { branch: b },
            [0.5, 0.5, -1.0],
            [1.5, 1.5, 1.0],
        ),
    ]
}

fn euler_recipes() -> Vec<FieldRecipe> {
    let b = PhiBranch::ATAN2;
    let euler = |id: &str, summary: &str, case: EulerCase, lo: [f64; 3], hi: [f64; 3]| FieldRecipe {
        id: id.into(),
        summary: summary.into(),
        spec: RecipeSpec::Euler(case),
        domain: Domain::cartesian(lo, hi),
        grid_bounds: CoordBox::new(lo, hi),
    };
    vec![
        euler(
            "euler-x-uniform",
            "P = c - k^2 (c = 2, k = 1), w = sqrt(2)[k grad x + y grad z]",
            EulerCase::UniformX { c: 2.0, k: 1.0 },
            [-1.0; 3],
            [1.0; 3],
        ),
        euler(
            "euler-exp",
            "P = -exp(x + y), w = 2 grad exp((x + y)/2) + sqrt(2)(x - y) grad z",
            EulerCase::ExpDiagonal,
            [-1.0; 3],
            [1.0; 3],
        ),
        euler(
            "euler-r-uniform",
            "P = c - k^2/r^2 (c = 1, k = 1), w = sqrt(2)[k grad log r + phi grad z]",
            EulerCase::InverseSquare {
                c: 1.0,
                k: 1.0,
                branch: b,
            },
            [0.5, 0.5, -1.0],
            [1.5, 1.5, 1.0],
        ),
        euler(
            "euler-z",
            "P = c - (1 + z)^2 (c = 2), w = sqrt(2)[(1 + z) grad z + phi grad r]",
            EulerCase::Axial { c: 2.0, branch: b },
            [0.5, 0.5, 0.0],
            [1.5, 1.5, 1.0],
        ),
        euler(
            "euler-rphi",
            "P = -exp(-2r)[1 + cos^2 phi (r^-2 - 1)]/2, w = grad(exp(-r) sin phi) + sqrt(2) exp(1/r) cos phi grad z",
            EulerCase::RadialAzimuthal { branch: b },
            [0.7, 0.7, -1.0],
            [1.5, 1.5, 1.0],
        ),
    ]
}

/// Every recipe, in listing order.
pub fn catalog() -> Vec<FieldRecipe> {
    let mut all = beltrami_recipes();
    all.extend(generalized_recipes());
    all.extend(mhd_recipes());
    all.extend(euler_recipes());
    all
}

pub fn recipe(id: &str) -> Option<FieldRecipe> {
    catalog().into_iter().find(|r| r.id == id)
}
