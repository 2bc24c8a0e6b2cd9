//! Verification suites: every applicable residual and invariant check for a
//! catalog recipe, plus the stand-alone cases that are not tied to a recipe.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{
    advection_residual, boundary_tangency, check_hamiltonian_structure, check_prop5_identity, curl,
    curl_advection_residual, divergence_match, residual_beltrami, residual_force_balance,
    residual_geometric_conditions, residual_proportionality, run_analytic_check, singularity_scan, CalculusError,
    CheckContext, ResidualReport, StencilConfig,
};
use crate::charts::{check_theorem1_hypothesis, theorem_ordering, AxisOrder, Chart, TorusSide, HYPOTHESIS_TOL};
use crate::fields::{
    catalog, characteristic_value, eq2s_residual, hypothesis_region, recipe, Domain, EulerCase, FieldRecipe, Grid2,
    MhdClosedForms, RecipeSpec, SeedCurve, TraceOptions, VectorFieldEval,
};
use crate::flow::{invariant_drift, trace_field_line};
use crate::sampling::case_seed;
use crate::{Error, Vec3};

pub const SAMPLE_POINTS: usize = 1000;
pub const DRIFT_STEPS: usize = 1000;
pub const DRIFT_DS: f64 = 1e-2;

const GC_TOL: f64 = 1e-10;
const CONTROL_THRESHOLD: f64 = 0.1;
const CURL_FLOW_TOL: f64 = 1e-4;
const NESTED_TOL: f64 = 1e-5;
const BOUNDARY_TOL: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-9;
const CHARACTERISTICS_TOL: f64 = 1e-4;
const XI_SPEED_FLOOR: f64 = 1e-2;
/// Unit-box position of trace seeds; off-centre so that no seed sits on a
/// symmetry locus where the amplitude vanishes.
const TRACE_SEED_UNIT: [f64; 3] = [0.45, 0.55, 0.6];

/// Cases that are not catalog recipes.
pub const EXTRA_CASES: [&str; 9] = [
    "cartesian-hypothesis",
    "characteristics-exp",
    "characteristics-xy",
    "cylindrical-hypothesis",
    "prop5-identity",
    "spherical-boundary",
    "spherical-hypothesis",
    "spherical-singularity",
    "toroidal-hypothesis",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub cfg: StencilConfig,
    pub tol: f64,
    pub seed: u64,
    pub n_points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            cfg: StencilConfig::default(),
            tol: 1e-6,
            seed: 0,
            n_points: SAMPLE_POINTS,
        }
    }
}

/// Every verifiable case id, sorted.
pub fn case_ids() -> Vec<String> {
    let mut ids: Vec<String> = catalog().into_iter().map(|r| r.id).collect();
    ids.extend(EXTRA_CASES.iter().map(|s| s.to_string()));
    ids.sort();
    ids
}

/// Resolves `all` or a comma-separated list of ids into sorted, unique ids.
pub fn select_cases(selector: &str) -> Result<Vec<String>, Error> {
    let known = case_ids();
    if selector == "all" {
        return Ok(known);
    }
    let mut ids = Vec::new();
    for id in selector.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !known.iter().any(|k| k == id) {
            return Err(Error::UnknownCase(id.to_string()));
        }
        ids.push(id.to_string());
    }
    if ids.is_empty() {
        return Err(Error::Usage("empty case selector".into()));
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Runs the cases concurrently and concatenates their reports in id order.
pub fn verify_cases(ids: &[String], vc: &VerifyConfig) -> Result<Vec<ResidualReport>, Error> {
    let per_case: Vec<Vec<ResidualReport>> = ids.par_iter().map(|id| verify_case(id, vc)).collect::<Result<_, _>>()?;
    Ok(per_case.into_iter().flatten().collect())
}

pub fn verify_case(id: &str, vc: &VerifyConfig) -> Result<Vec<ResidualReport>, Error> {
    if let Some(r) = recipe(id) {
        return Ok(recipe_suite(&r, vc));
    }
    let reports = match id {
        "cartesian-hypothesis" => vec![hypothesis(id, Chart::Cartesian)],
        "cylindrical-hypothesis" => vec![hypothesis(id, Chart::cylindrical())],
        "spherical-hypothesis" => vec![hypothesis(id, Chart::spherical())],
        "toroidal-hypothesis" => vec![hypothesis(id, Chart::toroidal(TorusSide::Outer))],
        "spherical-boundary" => spherical_boundary(id, vc)?,
        "spherical-singularity" => spherical_singularity(id)?,
        "prop5-identity" => prop5_identity(id, vc),
        "characteristics-xy" => characteristics(id, &hyperbolic_characteristics()),
        "characteristics-exp" => characteristics(id, &exp_characteristics()),
        _ => return Err(Error::UnknownCase(id.to_string())),
    };
    Ok(reports)
}

fn with_name(mut r: ResidualReport, name: &str) -> ResidualReport {
    r.check_name = name.to_string();
    r
}

/// All checks that apply to a recipe's field.
pub fn recipe_suite(r: &FieldRecipe, vc: &VerifyConfig) -> Vec<ResidualReport> {
    let ctx = CheckContext {
        case_id: &r.id,
        cfg: vc.cfg,
        tol: vc.tol,
    };
    let field = match r.build() {
        Ok(f) => f,
        Err(e) => return vec![ResidualReport::failed(&r.id, "build", vc.cfg.h, e)],
    };
    let pts = r.domain.samples(vc.n_points, case_seed(vc.seed, &r.id));
    let mut out = Vec::new();
    let pressure = |p: Vec3| r.pressure(p);

    match &r.spec {
        RecipeSpec::Beltrami(spec) => {
            let b = residual_beltrami(&ctx, &field, &pts);
            out.push(b.alignment);
            out.push(b.divergence);
            let frame = spec.frame().expect("catalog frames resolve");
            out.push(residual_proportionality(&ctx, &field, &frame, &spec.sigma, &pts));
            let gc = CheckContext { tol: GC_TOL, ..ctx };
            out.push(residual_geometric_conditions(&gc, &|p| frame.jet(p), &spec.sigma, &pts));
            let control = CheckContext {
                tol: CONTROL_THRESHOLD,
                ..ctx
            };
            let scaled =
                residual_geometric_conditions(&control, &|p| frame.jet(p).with_psi_scaled(2.0), &spec.sigma, &pts);
            out.push(with_name(scaled, "geometric-conditions-control").expecting_failure());
        }
        RecipeSpec::Generalized(spec) => {
            out.push(residual_force_balance(&ctx, &field, &pressure, spec.kappa, &pts));
            out.push(xi_alignment(&ctx, &field, &pts));
            let speed = |q: Vec3| field.try_eval(q).map(|w| w.norm_squared());
            out.push(advection_residual(&ctx, "speed-advection", &field, &speed, &pts));
            if field.analytic_div(pts[0]).is_some() {
                out.push(divergence_match(&ctx, &field, &pts));
            }
        }
        RecipeSpec::Mhd { case, sigma } => {
            out.push(residual_force_balance(&ctx, &field, &pressure, 0.0, &pts));
            let p_of = |q: Vec3| Some(case.pressure(q).value);
            out.push(advection_residual(&ctx, "pressure-advection", &field, &p_of, &pts));
            out.push(curl_advection_residual(
                &ctx,
                "curl-pressure-advection",
                &field,
                &p_of,
                &pts,
            ));
            out.push(run_analytic_check(&ctx, "local-existence", &pts, |p| {
                let [a, b] = eq2s_residual(case, sigma, p);
                a.abs().max(b.abs())
            }));
        }
        RecipeSpec::Euler(case) => {
            out.push(residual_force_balance(&ctx, &field, &pressure, 0.5, &pts));
            out.push(divergence_match(&ctx, &field, &pts));
            out.push(check_hamiltonian_structure(&ctx, case, &field, &pts));
            if case.printed_divergence(pts[0]).is_some() {
                out.push(printed_divergence_match(&ctx, case, &field, &pts).expecting_failure());
            }
        }
    }

    out.extend(drift_reports(&ctx, &field, &r.domain));
    if let RecipeSpec::Mhd { .. } = r.spec {
        out.push(curl_flow_drift(&ctx, &field, &r.domain));
    }
    out
}

/// Start point for drift traces inside `domain`.
pub fn trace_seed(domain: &Domain) -> Vec3 {
    domain.chart.inverse(domain.coords.at_unit(TRACE_SEED_UNIT))
}

fn drift_reports(ctx: &CheckContext, field: &VectorFieldEval, domain: &Domain) -> Vec<ResidualReport> {
    let trace = match trace_field_line(field, trace_seed(domain), DRIFT_DS, DRIFT_STEPS, true, Some(domain)) {
        Ok(t) => t,
        Err(e) => return vec![ResidualReport::failed(ctx.case_id, "drift", 0.0, e)],
    };
    field
        .invariants()
        .iter()
        .map(|inv| {
            let d = invariant_drift(&trace, inv);
            ResidualReport::scalar(
                ctx.case_id,
                &format!("drift-{}", inv.name()),
                d.relative_drift,
                ctx.tol,
                trace.points.len(),
            )
        })
        .collect()
}

/// Field whose value is the numerical curl of `field`; NaN where the stencil
/// leaves the cleared domain.
pub fn numerical_curl_field(field: &VectorFieldEval, h: f64) -> VectorFieldEval {
    let inner = field.clone();
    let cleared = field.clone();
    VectorFieldEval::from_fn(
        format!("curl {}", field.label()),
        move |p| curl(&|q| inner.try_eval(q), p, h).unwrap_or(Vec3::repeat(f64::NAN)),
        move |p| cleared.is_cleared(p),
    )
}

fn curl_flow_drift(ctx: &CheckContext, field: &VectorFieldEval, domain: &Domain) -> ResidualReport {
    let name = "curl-flow-drift-P";
    let Some(p_inv) = field.invariant("P") else {
        return ResidualReport::failed(ctx.case_id, name, ctx.cfg.h, "no pressure invariant");
    };
    let curled = numerical_curl_field(field, ctx.cfg.h);
    match trace_field_line(&curled, trace_seed(domain), DRIFT_DS, DRIFT_STEPS, true, Some(domain)) {
        Ok(t) => {
            let d = invariant_drift(&t, p_inv);
            ResidualReport::scalar(ctx.case_id, name, d.relative_drift, CURL_FLOW_TOL, t.points.len())
        }
        Err(e) => ResidualReport::failed(ctx.case_id, name, ctx.cfg.h, e),
    }
}

/// Alignment of `ξ = w/|w|` with its curl, on the points where `|w| ≥ 10⁻²`
/// (the direction is undefined on the amplitude's zero set).
fn xi_alignment(ctx: &CheckContext, field: &VectorFieldEval, pts: &[Vec3]) -> ResidualReport {
    let inner = field.clone();
    let cleared = field.clone();
    let xi = VectorFieldEval::from_fn(
        "xi",
        move |p| {
            let w = inner.try_eval(p).unwrap_or(Vec3::repeat(f64::NAN));
            w / w.norm()
        },
        move |p| cleared.is_cleared(p),
    );
    let kept: Vec<Vec3> = pts
        .iter()
        .copied()
        .filter(|&p| field.try_eval(p).is_some_and(|w| w.norm() >= XI_SPEED_FLOOR))
        .collect();
    with_name(residual_beltrami(ctx, &xi, &kept).alignment, "xi-alignment")
}

fn printed_divergence_match(
    ctx: &CheckContext,
    case: &EulerCase,
    field: &VectorFieldEval,
    pts: &[Vec3],
) -> ResidualReport {
    let v = |q: Vec3| field.try_eval(q);
    crate::calculus::run_check(ctx, "divergence-printed-form", pts, None, |p, h| {
        let expected = case.printed_divergence(p).ok_or("no printed form")?;
        let numeric = crate::calculus::div(&v, p, h).map_err(|e| e.to_string())?;
        Ok::<_, String>(crate::calculus::PointResidual::abs(numeric - expected))
    })
}

fn hypothesis(id: &str, chart: Chart) -> ResidualReport {
    const SAMPLES: usize = 200;
    let region = hypothesis_region(&chart);
    match theorem_ordering(&chart) {
        Some(order) => {
            let c = check_theorem1_hypothesis(&chart, order, &region, SAMPLES);
            ResidualReport::scalar(id, "hypothesis", c.max_violation, HYPOTHESIS_TOL, SAMPLES)
        }
        None => {
            // the smallest violation over all orderings: every one must fail
            let least = AxisOrder::all()
                .iter()
                .map(|&o| check_theorem1_hypothesis(&chart, o, &region, SAMPLES).max_violation)
                .fold(f64::INFINITY, f64::min);
            ResidualReport::scalar(id, "hypothesis", least, HYPOTHESIS_TOL, SAMPLES).expecting_failure()
        }
    }
}

fn built(id: &str) -> Result<VectorFieldEval, Error> {
    let r = recipe(id).ok_or_else(|| Error::UnknownCase(id.to_string()))?;
    Ok(r.build()?)
}

fn spherical_boundary(id: &str, vc: &VerifyConfig) -> Result<Vec<ResidualReport>, Error> {
    let seed = case_seed(vc.seed, id);
    let tangent = boundary_tangency(&built("spherical-fig1")?, 1.0, vc.n_points, seed);
    let control = boundary_tangency(&built("cartesian-linear")?, 1.0, vc.n_points, seed);
    Ok(vec![
        ResidualReport::scalar(id, "boundary-tangency", tangent, BOUNDARY_TOL, vc.n_points),
        ResidualReport::scalar(id, "boundary-tangency-control", control, CONTROL_THRESHOLD, vc.n_points)
            .expecting_failure(),
    ])
}

/// Polar angles from `π/2` down to `10⁻⁴`, geometrically spaced.
pub fn singularity_thetas(n: usize) -> Vec<f64> {
    let (hi, lo) = (FRAC_PI_2.ln(), 1e-4f64.ln());
    (0..n)
        .map(|k| (hi + (lo - hi) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn spherical_singularity(id: &str) -> Result<Vec<ResidualReport>, Error> {
    const N: usize = 200;
    let field = built("spherical-fig1")?;
    let l_r = field
        .invariant("L_R")
        .ok_or_else(|| Error::Usage("spherical-fig1 has no L_R invariant".into()))?;
    let rows = singularity_scan(&field, l_r, 1.0, 1.0, &singularity_thetas(N));
    let normalized = rows.iter().map(|r| (r.w2_r2_sin2 - 1.0).abs()).fold(0.0, f64::max);
    let non_increasing = rows.windows(2).filter(|w| w[1].abs_l <= w[0].abs_l).count();
    let mut reports = vec![
        ResidualReport::scalar(id, "speed-times-radius", normalized, SINGULAR_TOL, rows.len()),
        ResidualReport::scalar(
            id,
            "invariant-growth-violations",
            non_increasing as f64,
            0.5,
            rows.len(),
        ),
    ];
    if rows.len() != N {
        reports.push(ResidualReport::failed(
            id,
            "scan-coverage",
            0.0,
            "scan left the cleared domain",
        ));
    }
    Ok(reports)
}

/// Polynomial of degree at most three in `(x, y, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cubic {
    terms: Vec<(f64, [i32; 3])>,
}

impl Cubic {
    /// Exponent triples with total degree at most three (20 of them).
    pub fn monomials() -> Vec<[i32; 3]> {
        let mut out = Vec::new();
        for a in 0..=3 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    pub fn from_coefficients(coeffs: &[f64]) -> Self {
        let terms = Self::monomials()
            .into_iter()
            .zip(coeffs)
            .map(|(m, &c)| (c, m))
            .collect();
        Self { terms }
    }

    /// Coefficients uniform in `[−1, 1]`.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let coeffs: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self::from_coefficients(&coeffs)
    }

    pub fn eval(&self, p: Vec3) -> f64 {
        self.terms
            .iter()
            .map(|(c, [a, b, d])| c * p.x.powi(*a) * p.y.powi(*b) * p.z.powi(*d))
            .sum()
    }
}

fn prop5_identity(id: &str, vc: &VerifyConfig) -> Vec<ResidualReport> {
    const PAIRS: usize = 20;
    const POINTS: usize = 10;
    const MAX_ATTEMPTS: usize = 1000;
    let seed = case_seed(vc.seed, id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = Domain::cartesian([1.0; 3], [2.0; 3]).samples(POINTS, seed);
    let ctx = CheckContext {
        case_id: id,
        cfg: vc.cfg,
        tol: NESTED_TOL,
    };
    let mut out = Vec::new();
    for _ in 0..MAX_ATTEMPTS {
        if out.len() == PAIRS {
            break;
        }
        let (chi, pi) = (Cubic::random(&mut rng), Cubic::random(&mut rng));
        match check_prop5_identity(&ctx, &|p| chi.eval(p), &|p| pi.eval(p), &pts) {
            Ok(r) => out.push(with_name(r, &format!("prop5-identity-{:02}", out.len()))),
            Err(CalculusError::DegeneratePair { .. }) => continue,
            Err(e) => out.push(ResidualReport::failed(id, "prop5-identity", vc.cfg.h, e)),
        }
    }
    out
}

/// Planar pressure with a closed-form flux function, and the seed curve and
/// grid used to rebuild the flux by characteristics.
pub struct CharacteristicsProblem {
    pub grad_p: fn([f64; 2]) -> [f64; 2],
    pub grad_c: fn([f64; 2]) -> [f64; 2],
    pub seed: SeedCurve,
    pub grid: Grid2,
    pub opts: TraceOptions,
}

/// `P = xy`, `C = (y² − x²)/2` on `[1, 2]²`, seeded on `x + y = 3`.
pub fn hyperbolic_characteristics() -> CharacteristicsProblem {
    CharacteristicsProblem {
        grad_p: |q| [q[1], q[0]],
        grad_c: |q| [-q[0], q[1]],
        seed: SeedCurve::Line {
            origin: [1.5, 1.5],
            direction: [SQRT_2 / 2.0, -SQRT_2 / 2.0],
        },
        grid: Grid2 {
            lo: [1.0, 1.0],
            hi: [2.0, 2.0],
            n: [9, 9],
        },
        opts: TraceOptions::within([0.5, 0.5], [2.5, 2.5]),
    }
}

/// `P = eˣ sin y`, `C = eˣ cos y` on `[0, 1] × [0.2, 1.2]`, seeded on `x + y = 1.2`.
pub fn exp_characteristics() -> CharacteristicsProblem {
    CharacteristicsProblem {
        grad_p: |q| {
            let e = q[0].exp();
            [e * q[1].sin(), e * q[1].cos()]
        },
        grad_c: |q| {
            let e = q[0].exp();
            [e * q[1].cos(), -e * q[1].sin()]
        },
        seed: SeedCurve::Line {
            origin: [0.0, 1.2],
            direction: [SQRT_2 / 2.0, -SQRT_2 / 2.0],
        },
        grid: Grid2 {
            lo: [0.0, 0.2],
            hi: [1.0, 1.2],
            n: [9, 9],
        },
        opts: TraceOptions::within([-0.5, 0.01], [1.5, 1.55]),
    }
}

/// Gradient of the characteristics solution at `q` by central differences
/// of step `delta`.
pub fn numeric_flux_gradient(prob: &CharacteristicsProblem, q: [f64; 2], delta: f64) -> Option<[f64; 2]> {
    let c = |x: f64, y: f64| characteristic_value(&prob.grad_p, &prob.seed, &prob.opts, [x, y]).ok();
    Some([
        (c(q[0] + delta, q[1])? - c(q[0] - delta, q[1])?) / (2.0 * delta),
        (c(q[0], q[1] + delta)? - c(q[0], q[1] - delta)?) / (2.0 * delta),
    ])
}

fn characteristics(id: &str, prob: &CharacteristicsProblem) -> Vec<ResidualReport> {
    const DELTA: f64 = 1e-4;
    let [nx, ny] = prob.grid.n;
    let interior: Vec<Vec3> = (1..ny - 1)
        .flat_map(|j| (1..nx - 1).map(move |i| (i, j)))
        .map(|(i, j)| {
            let q = prob.grid.node(i, j);
            Vec3::new(q[0], q[1], 0.0)
        })
        .collect();
    let ctx = CheckContext {
        case_id: id,
        cfg: StencilConfig {
            h: DELTA,
            richardson: false,
        },
        tol: CHARACTERISTICS_TOL,
    };
    let gradient = |p: Vec3| numeric_flux_gradient(prob, [p.x, p.y], DELTA);
    let transport = run_analytic_check(&ctx, "flux-transport", &interior, |p| match gradient(p) {
        Some(g) => {
            let gp = (prob.grad_p)([p.x, p.y]);
            (gp[0] * g[0] + gp[1] * g[1]).abs()
        }
        None => f64::INFINITY,
    });
    let dependence = run_analytic_check(&ctx, "flux-functional-dependence", &interior, |p| match gradient(p) {
        Some(g) => {
            let c = (prob.grad_c)([p.x, p.y]);
            (g[0] * c[1] - g[1] * c[0]).abs() / (g[0].hypot(g[1]) * c[0].hypot(c[1]))
        }
        None => f64::INFINITY,
    });
    vec![transport, dependence]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_monomials() {
        assert_eq!(Cubic::monomials().len(), 20);
        let c = Cubic::from_coefficients(&[1.0; 20]);
        // at the origin only the constant term survives
        assert_eq!(c.eval(Vec3::zeros()), 1.0);
    }

    #[test]
    fn selector_rejects_unknown_ids() {
        assert!(matches!(select_cases("nope"), Err(Error::UnknownCase(_))));
        let ids = select_cases("mhd-xy,cartesian-linear,mhd-xy").unwrap();
        assert_eq!(ids, vec!["cartesian-linear".to_string(), "mhd-xy".to_string()]);
    }

    #[test]
    fn thetas_span_the_scan() {
        let t = singularity_thetas(50);
        assert_eq!(t[0], FRAC_PI_2);
        assert!((t[49] - 1e-4).abs() < 1e-16);
        assert!(t.windows(2).all(|w| w[1] < w[0]));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn nested_identity_holds_for_cubics(
            a in prop::collection::vec(-1.0..1.0f64, 20),
            b in prop::collection::vec(-1.0..1.0f64, 20),
        ) {
            let (chi, pi) = (Cubic::from_coefficients(&a), Cubic::from_coefficients(&b));
            let pts = Domain::cartesian([1.0; 3], [2.0; 3]).samples(10, 1);
            let ctx = CheckContext {
                case_id: "cubic",
                cfg: StencilConfig::default(),
                tol: NESTED_TOL,
            };
            match check_prop5_identity(&ctx, &|p| chi.eval(p), &|p| pi.eval(p), &pts) {
                Ok(r) => prop_assert!(r.pass, "residual {}", r.max_residual),
                Err(CalculusError::DegeneratePair { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
