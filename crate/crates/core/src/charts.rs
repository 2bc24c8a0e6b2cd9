//! Orthogonal curvilinear charts.
//!
//! Every chart maps a Cartesian point to a coordinate triple in its natural
//! order (`x,y,z`; `r,φ,z`; `R,ϑ,φ`; `τ,η,φ`) and supplies closed-form
//! coordinate gradients. Points inside the excluded set (axis, origin, torus
//! core) are rejected with [`ChartError::SingularPoint`].

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::sampling::{CoordBox, LowDiscrepancy};
use crate::Vec3;

/// Clearance radius around the excluded set, in chart coordinates.
pub const CLEARANCE: f64 = 1e-3;

/// Tolerance for analytically vanishing hypothesis derivatives.
pub const HYPOTHESIS_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("point ({x}, {y}, {z}) lies inside the excluded set of the {chart} chart")]
    SingularPoint {
        chart: &'static str,
        x: f64,
        y: f64,
        z: f64,
    },
    #[error("no closed-form reduced coordinate for the {chart} chart with ordering {order:?}")]
    UnsupportedChart { chart: &'static str, order: [usize; 3] },
}

/// Branch of the azimuth: φ ∈ (center − π, center + π].
///
/// The default center 0 reproduces `atan2`. Recipes whose domain straddles
/// φ = ±π move the cut away from the domain instead of differencing across it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PhiBranch {
    pub center: f64,
}

impl PhiBranch {
    pub const ATAN2: PhiBranch = PhiBranch { center: 0.0 };

    pub const fn centered(center: f64) -> Self {
        Self { center }
    }

    pub fn angle(&self, y: f64, x: f64) -> f64 {
        let a = y.atan2(x);
        if self.center == 0.0 {
            return a;
        }
        let mut d = a - self.center;
        while d <= -PI {
            d += 2.0 * PI;
        }
        while d > PI {
            d -= 2.0 * PI;
        }
        self.center + d
    }
}

/// Sign of `r - 1` selecting one of the two toroidal sub-charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorusSide {
    Inner,
    Outer,
}

impl TorusSide {
    fn sign(self) -> f64 {
        match self {
            TorusSide::Inner => -1.0,
            TorusSide::Outer => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Chart {
    Cartesian,
    Cylindrical { branch: PhiBranch },
    Spherical { branch: PhiBranch },
    Toroidal { side: TorusSide, branch: PhiBranch },
}

impl Chart {
    pub const fn cylindrical() -> Self {
        Chart::Cylindrical {
            branch: PhiBranch::ATAN2,
        }
    }

    pub const fn spherical() -> Self {
        Chart::Spherical {
            branch: PhiBranch::ATAN2,
        }
    }

    pub const fn toroidal(side: TorusSide) -> Self {
        Chart::Toroidal {
            side,
            branch: PhiBranch::ATAN2,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "cartesian" => Some(Chart::Cartesian),
            "cylindrical" => Some(Chart::cylindrical()),
            "spherical" => Some(Chart::spherical()),
            "toroidal" | "toroidal-outer" => Some(Chart::toroidal(TorusSide::Outer)),
            "toroidal-inner" => Some(Chart::toroidal(TorusSide::Inner)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::Cylindrical { .. } => "cylindrical",
            Chart::Spherical { .. } => "spherical",
            Chart::Toroidal { .. } => "toroidal",
        }
    }

    pub fn coordinate_names(&self) -> [&'static str; 3] {
        match self {
            Chart::Cartesian => ["x", "y", "z"],
            Chart::Cylindrical { .. } => ["r", "phi", "z"],
            Chart::Spherical { .. } => ["R", "theta", "phi"],
            Chart::Toroidal { .. } => ["tau", "eta", "phi"],
        }
    }

    /// Clearance predicate: true when `p` is at least [`CLEARANCE`] away
    /// from the excluded set.
    pub fn is_cleared(&self, p: Vec3) -> bool {
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
            return false;
        }
        let rho = p.x.hypot(p.y);
        match self {
            Chart::Cartesian => true,
            Chart::Cylindrical { .. } => rho >= CLEARANCE,
            Chart::Spherical { .. } => {
                let radius = p.norm();
                radius >= CLEARANCE && rho >= CLEARANCE * radius
            }
            Chart::Toroidal { side, .. } => {
                let d = rho - 1.0;
                let tau = d.hypot(p.z);
                rho >= CLEARANCE && tau >= CLEARANCE && side.sign() * d >= CLEARANCE
            }
        }
    }

    fn singular(&self, p: Vec3) -> ChartError {
        ChartError::SingularPoint {
            chart: self.name(),
            x: p.x,
            y: p.y,
            z: p.z,
        }
    }

    fn check(&self, p: Vec3) -> Result<(), ChartError> {
        if self.is_cleared(p) {
            Ok(())
        } else {
            Err(self.singular(p))
        }
    }

    /// Coordinates of `p` in natural order.
    pub fn forward(&self, p: Vec3) -> Result<[f64; 3], ChartError> {
        self.check(p)?;
        Ok(self.forward_unchecked(p))
    }

    pub fn forward_unchecked(&self, p: Vec3) -> [f64; 3] {
        let rho = p.x.hypot(p.y);
        match self {
            Chart::Cartesian => [p.x, p.y, p.z],
            Chart::Cylindrical { branch } => [rho, branch.angle(p.y, p.x), p.z],
            Chart::Spherical { branch } => [p.norm(), rho.atan2(p.z), branch.angle(p.y, p.x)],
            Chart::Toroidal { branch, .. } => {
                let d = rho - 1.0;
                [d.hypot(p.z), p.z / d, branch.angle(p.y, p.x)]
            }
        }
    }

    /// Cartesian point with the given natural coordinates.
    pub fn inverse(&self, q: [f64; 3]) -> Vec3 {
        match self {
            Chart::Cartesian => Vec3::new(q[0], q[1], q[2]),
            Chart::Cylindrical { .. } => Vec3::new(q[0] * q[1].cos(), q[0] * q[1].sin(), q[2]),
            Chart::Spherical { .. } => {
                let (st, ct) = q[1].sin_cos();
                let (sp, cp) = q[2].sin_cos();
                Vec3::new(q[0] * st * cp, q[0] * st * sp, q[0] * ct)
            }
            Chart::Toroidal { side, .. } => {
                let d = side.sign() * q[0] / (1.0 + q[1] * q[1]).sqrt();
                let r = 1.0 + d;
                Vec3::new(r * q[2].cos(), r * q[2].sin(), q[1] * d)
            }
        }
    }

    /// Closed-form gradients of the three coordinates.
    pub fn gradients(&self, p: Vec3) -> Result<[Vec3; 3], ChartError> {
        self.check(p)?;
        Ok(self.gradients_unchecked(p))
    }

    pub fn gradients_unchecked(&self, p: Vec3) -> [Vec3; 3] {
        let (x, y, z) = (p.x, p.y, p.z);
        let rho2 = x * x + y * y;
        let rho = rho2.sqrt();
        let grad_phi = Vec3::new(-y / rho2, x / rho2, 0.0);
        match self {
            Chart::Cartesian => [Vec3::x(), Vec3::y(), Vec3::z()],
            Chart::Cylindrical { .. } => [Vec3::new(x / rho, y / rho, 0.0), grad_phi, Vec3::z()],
            Chart::Spherical { .. } => {
                let r2 = rho2 + z * z;
                let r = r2.sqrt();
                let grad_theta = Vec3::new(z * x / rho, z * y / rho, -rho) / r2;
                [p / r, grad_theta, grad_phi]
            }
            Chart::Toroidal { .. } => {
                let d = rho - 1.0;
                let tau = d.hypot(z);
                let er = Vec3::new(x / rho, y / rho, 0.0);
                let grad_tau = (er * d + Vec3::z() * z) / tau;
                let grad_eta = (Vec3::z() * d - er * z) / (d * d);
                [grad_tau, grad_eta, grad_phi]
            }
        }
    }

    /// Scale factors `(|∇q₀|, |∇q₁|, |∇q₂|)` from their closed forms.
    pub fn scale_factors(&self, p: Vec3) -> Result<[f64; 3], ChartError> {
        self.check(p)?;
        Ok(self.scale_factors_unchecked(p))
    }

    pub fn scale_factors_unchecked(&self, p: Vec3) -> [f64; 3] {
        match self {
            Chart::Cartesian => [1.0, 1.0, 1.0],
            Chart::Cylindrical { .. } => {
                let r = p.x.hypot(p.y);
                [1.0, 1.0 / r, 1.0]
            }
            Chart::Spherical { .. } => {
                let radius = p.norm();
                let sin_theta = p.x.hypot(p.y) / radius;
                [1.0, 1.0 / radius, 1.0 / (radius * sin_theta)]
            }
            Chart::Toroidal { side, .. } => {
                let q = self.forward_unchecked(p);
                let (tau, eta) = (q[0], q[1]);
                let s = (1.0 + eta * eta).sqrt();
                [1.0, s * s / tau, 1.0 / (1.0 + side.sign() * tau / s)]
            }
        }
    }

    /// `∇q₀ · (∇q₁ × ∇q₂)` in natural order.
    pub fn jacobian(&self, p: Vec3) -> Result<f64, ChartError> {
        let g = self.gradients(p)?;
        Ok(g[0].dot(&g[1].cross(&g[2])))
    }
}

/// Assignment of natural chart coordinates to the roles `(ζ, β, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxisOrder(pub [usize; 3]);

impl AxisOrder {
    pub const NATURAL: AxisOrder = AxisOrder([0, 1, 2]);

    pub fn is_permutation(&self) -> bool {
        let mut seen = [false; 3];
        for &i in &self.0 {
            if i > 2 || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn all() -> [AxisOrder; 6] {
        [
            AxisOrder([0, 1, 2]),
            AxisOrder([0, 2, 1]),
            AxisOrder([1, 0, 2]),
            AxisOrder([1, 2, 0]),
            AxisOrder([2, 0, 1]),
            AxisOrder([2, 1, 0]),
        ]
    }

    pub fn pick<T: Copy>(&self, v: [T; 3]) -> [T; 3] {
        [v[self.0[0]], v[self.0[1]], v[self.0[2]]]
    }

    /// Sign of the permutation.
    pub fn parity(&self) -> f64 {
        let [a, b, c] = self.0;
        let inversions = (a > b) as u8 + (a > c) as u8 + (b > c) as u8;
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Ordering of a chart for which the harmonic reduction applies.
pub fn theorem_ordering(chart: &Chart) -> Option<AxisOrder> {
    match chart {
        Chart::Cartesian => Some(AxisOrder::NATURAL),
        Chart::Cylindrical { .. } => Some(AxisOrder([0, 1, 2])),
        // (ϑ, φ, R)
        Chart::Spherical { .. } => Some(AxisOrder([1, 2, 0])),
        Chart::Toroidal { .. } => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub passes: bool,
    pub max_violation: f64,
    pub n_samples: usize,
}

/// Evaluates `∂β(|∇ζ|/|∇β|)`, `∂γ(|∇ζ|/|∇β|)`, `∂ζ|∇γ|` and `∂β|∇γ|` by
/// central differences in the chart's own coordinates over `n_samples`
/// low-discrepancy points of `region` (a box in natural chart coordinates).
pub fn check_theorem1_hypothesis(
    chart: &Chart,
    order: AxisOrder,
    region: &CoordBox,
    n_samples: usize,
) -> HypothesisCheck {
    const STEP: f64 = 1e-4;
    let [iz, ib, ig] = order.0;
    let scales = |q: [f64; 3]| chart.scale_factors_unchecked(chart.inverse(q));
    let ratio = |q: [f64; 3]| {
        let s = scales(q);
        s[iz] / s[ib]
    };
    let gamma_scale = |q: [f64; 3]| scales(q)[ig];
    let partial = |f: &dyn Fn([f64; 3]) -> f64, q: [f64; 3], axis: usize| {
        let mut plus = q;
        let mut minus = q;
        plus[axis] += STEP;
        minus[axis] -= STEP;
        (f(plus) - f(minus)) / (2.0 * STEP)
    };

    let mut sampler = LowDiscrepancy::new(0x5eed);
    let mut max_violation: f64 = 0.0;
    for _ in 0..n_samples {
        let q = region.at_unit(sampler.next_unit());
        let v = [
            partial(&ratio, q, ib),
            partial(&ratio, q, ig),
            partial(&gamma_scale, q, iz),
            partial(&gamma_scale, q, ib),
        ];
        for d in v {
            max_violation = max_violation.max(d.abs());
        }
    }
    HypothesisCheck {
        passes: max_violation < HYPOTHESIS_TOL,
        max_violation,
        n_samples,
    }
}

/// Reduced coordinate α(ζ) with dα/dζ = |∇β|/|∇ζ| and integration constant 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlphaReparam {
    /// α = ζ (Cartesian).
    Identity,
    /// α = log r (cylindrical, ζ = r).
    LogRadius,
    /// α = log(sin ϑ / (1 + cos ϑ)) (spherical, ζ = ϑ).
    LogTanHalf,
}

impl AlphaReparam {
    pub fn alpha(&self, zeta: f64) -> f64 {
        match self {
            AlphaReparam::Identity => zeta,
            AlphaReparam::LogRadius => zeta.ln(),
            AlphaReparam::LogTanHalf => (zeta.sin() / (1.0 + zeta.cos())).ln(),
        }
    }

    pub fn dalpha_dzeta(&self, zeta: f64) -> f64 {
        match self {
            AlphaReparam::Identity => 1.0,
            AlphaReparam::LogRadius => 1.0 / zeta,
            AlphaReparam::LogTanHalf => 1.0 / zeta.sin(),
        }
    }

    pub fn zeta_of_alpha(&self, alpha: f64) -> f64 {
        match self {
            AlphaReparam::Identity => alpha,
            AlphaReparam::LogRadius => alpha.exp(),
            AlphaReparam::LogTanHalf => 2.0 * alpha.exp().atan(),
        }
    }
}

/// Catalog closed form of α for a chart ordering satisfying the hypothesis.
pub fn alpha_reparam(chart: &Chart, order: AxisOrder) -> Result<AlphaReparam, ChartError> {
    let unsupported = || ChartError::UnsupportedChart {
        chart: chart.name(),
        order: order.0,
    };
    if !order.is_permutation() {
        return Err(unsupported());
    }
    match chart {
        Chart::Cartesian => Ok(AlphaReparam::Identity),
        Chart::Cylindrical { .. } if order.0 == [0, 1, 2] => Ok(AlphaReparam::LogRadius),
        Chart::Spherical { .. } if order.0 == [1, 2, 0] => Ok(AlphaReparam::LogTanHalf),
        _ => Err(unsupported()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cartesian_identity() {
        let q = Chart::Cartesian.forward(Vec3::new(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(q, [1.0, 2.0, 3.0]);
    }

    #[test]
    fn spherical_axis_is_singular() {
        let err = Chart::spherical().forward(Vec3::new(0.0, 0.0, 2.0)).unwrap_err();
        assert!(matches!(err, ChartError::SingularPoint { chart: "spherical", .. }));
    }

    #[test]
    fn cylindrical_diagonal_point() {
        let q = Chart::cylindrical().forward(Vec3::new(1.0, 1.0, 0.0)).unwrap();
        assert!((q[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((q[1] - PI / 4.0).abs() < 1e-15);
        assert_eq!(q[2], 0.0);
    }

    #[test]
    fn scale_factor_values() {
        assert_eq!(
            Chart::Cartesian.scale_factors(Vec3::new(-3.0, 0.5, 9.0)).unwrap(),
            [1.0; 3]
        );

        let sph = Chart::spherical();
        let p = sph.inverse([2.0, FRAC_PI_2, 0.3]);
        let s = sph.scale_factors(p).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] - 0.5).abs() < 1e-15);
        assert!((s[2] - 0.5).abs() < 1e-15);

        let tor = Chart::toroidal(TorusSide::Outer);
        let p = tor.inverse([0.5, 0.0, 0.2]);
        let s = tor.scale_factors(p).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!((s[1] - 2.0).abs() < 1e-14);
        assert!((s[2] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn toroidal_round_trip_both_sides() {
        for side in [TorusSide::Inner, TorusSide::Outer] {
            let chart = Chart::toroidal(side);
            let q = [0.4, -0.7, 1.1];
            let p = chart.inverse(q);
            let back = chart.forward(p).unwrap();
            for k in 0..3 {
                assert!((back[k] - q[k]).abs() < 1e-13, "{side:?} {k}");
            }
        }
    }

    #[test]
    fn shifted_branch_unwraps_across_pi() {
        let branch = PhiBranch::centered(FRAC_PI_2);
        let phi = branch.angle(-1e-9, -1.0);
        assert!((phi - (PI + 1e-9)).abs() < 1e-12);
        assert_eq!(PhiBranch::ATAN2.angle(1.0, 1.0), 1f64.atan2(1.0));
    }

    #[test]
    fn hypothesis_holds_for_theorem_charts() {
        let cases = [
            (Chart::Cartesian, CoordBox::new([-1.0; 3], [1.0; 3])),
            (Chart::cylindrical(), CoordBox::new([0.2, -3.0, -1.0], [2.0, 3.0, 1.0])),
            (Chart::spherical(), CoordBox::new([0.2, 0.1, -3.0], [2.0, 3.0, 3.0])),
        ];
        for (chart, region) in cases {
            let order = theorem_ordering(&chart).unwrap();
            let check = check_theorem1_hypothesis(&chart, order, &region, 200);
            assert!(check.passes, "{}: {}", chart.name(), check.max_violation);
        }
    }

    #[test]
    fn cartesian_any_permutation_passes() {
        let region = CoordBox::new([-1.0; 3], [1.0; 3]);
        for order in AxisOrder::all() {
            let check = check_theorem1_hypothesis(&Chart::Cartesian, order, &region, 50);
            assert!(check.passes);
            assert_eq!(check.max_violation, 0.0);
        }
    }

    #[test]
    fn toroidal_fails_every_ordering() {
        let chart = Chart::toroidal(TorusSide::Outer);
        let region = CoordBox::new([0.2, 0.0, -0.5], [0.8, 1.0, 0.5]);
        for order in AxisOrder::all() {
            let check = check_theorem1_hypothesis(&chart, order, &region, 200);
            assert!(!check.passes);
            assert!(check.max_violation > 0.1, "{order:?}: {}", check.max_violation);
        }
    }

    #[test]
    fn alpha_closed_forms() {
        assert_eq!(
            alpha_reparam(&Chart::Cartesian, AxisOrder([2, 0, 1])).unwrap(),
            AlphaReparam::Identity
        );
        let cyl = alpha_reparam(&Chart::cylindrical(), AxisOrder::NATURAL).unwrap();
        assert!((cyl.alpha(2.0) - 2f64.ln()).abs() < 1e-15);
        let sph = alpha_reparam(&Chart::spherical(), AxisOrder([1, 2, 0])).unwrap();
        assert!(sph.alpha(FRAC_PI_2).abs() < 1e-15);
        assert!(matches!(
            alpha_reparam(&Chart::spherical(), AxisOrder::NATURAL),
            Err(ChartError::UnsupportedChart { .. })
        ));
        assert!(alpha_reparam(&Chart::toroidal(TorusSide::Outer), AxisOrder::NATURAL).is_err());
    }

    #[test]
    fn alpha_inverse_round_trip() {
        for a in [
            AlphaReparam::Identity,
            AlphaReparam::LogRadius,
            AlphaReparam::LogTanHalf,
        ] {
            let zeta = 0.7;
            assert!((a.zeta_of_alpha(a.alpha(zeta)) - zeta).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_of_orderings() {
        assert_eq!(AxisOrder([0, 1, 2]).parity(), 1.0);
        assert_eq!(AxisOrder([1, 2, 0]).parity(), 1.0);
        assert_eq!(AxisOrder([1, 0, 2]).parity(), -1.0);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn point() -> impl Strategy<Value = Vec3> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn orthogonal_with_positive_jacobian(p in point()) {
            for chart in [Chart::Cartesian, Chart::cylindrical(), Chart::spherical()] {
                if !chart.is_cleared(p) {
                    continue;
                }
                let g = chart.gradients(p).unwrap();
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    prop_assert!(g[i].dot(&g[j]).abs() <= 1e-12 * g[i].norm() * g[j].norm());
                }
                let s = chart.scale_factors(p).unwrap();
                for k in 0..3 {
                    prop_assert!((s[k] - g[k].norm()).abs() <= 1e-12 * s[k].max(1.0));
                }
                prop_assert!(chart.jacobian(p).unwrap() > 0.0);
                let back = chart.inverse(chart.forward(p).unwrap());
                prop_assert!((back - p).norm() <= 1e-12 * p.norm().max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn gradients_match_differenced_coordinates(p in point()) {
            const H: f64 = 1e-5;
            // keep the stencil off the axis and the φ branch cut
            prop_assume!(p.x.hypot(p.y) > 0.1 && p.y.atan2(p.x).abs() < 3.0);
            for chart in [Chart::cylindrical(), Chart::spherical()] {
                let g = chart.gradients(p).unwrap();
                for (k, gk) in g.iter().enumerate() {
                    let mut numeric = Vec3::zeros();
                    for j in 0..3 {
                        let mut e = Vec3::zeros();
                        e[j] = H;
                        numeric[j] = (chart.forward_unchecked(p + e)[k] - chart.forward_unchecked(p - e)[k]) / (2.0 * H);
                    }
                    prop_assert!((numeric - gk).norm() < 1e-6 * gk.norm().max(1.0));
                }
            }
        }

        #[test]
        fn alpha_derivative_is_the_scale_ratio(zeta in 0.2..2.9f64, h in 1e-3..1e-2f64) {
            for (chart, order) in [
                (Chart::cylindrical(), AxisOrder([0, 1, 2])),
                (Chart::spherical(), AxisOrder([1, 2, 0])),
            ] {
                let a = alpha_reparam(&chart, order).unwrap();
                // a point with the ζ coordinate set, the others fixed
                let mut q = [1.0, 0.5, 0.3];
                q[order.0[0]] = zeta;
                let s = chart.scale_factors(chart.inverse(q)).unwrap();
                let ratio = s[order.0[1]] / s[order.0[0]];
                prop_assert!((a.dalpha_dzeta(zeta) - ratio).abs() < 1e-12 * ratio);
                let err = |h: f64| ((a.alpha(zeta + h) - a.alpha(zeta - h)) / (2.0 * h) - ratio).abs();
                let (coarse, fine) = (err(h), err(h / 2.0));
                if fine > 1e-9 {
                    let r = coarse / fine;
                    prop_assert!((3.2..=4.8).contains(&r), "ratio {r}");
                }
                prop_assert!((a.zeta_of_alpha(a.alpha(zeta)) - zeta).abs() < 1e-12);
            }
        }
    }
}
