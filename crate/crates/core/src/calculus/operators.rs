//! Second-order central-difference operators.
//!
//! Every operator takes a point evaluator returning `None` outside its
//! cleared domain; a stencil that touches such a point fails with
//! [`CalculusError::StencilEscape`].

use nalgebra::Matrix3;

use super::CalculusError;
use crate::Vec3;

const AXES: [Vec3; 3] = [
    Vec3::new(1.0, 0.0, 0.0),
    Vec3::new(0.0, 1.0, 0.0),
    Vec3::new(0.0, 0.0, 1.0),
];

fn at<T, F>(f: &F, p: Vec3) -> Result<T, CalculusError>
where
    F: Fn(Vec3) -> Option<T> + ?Sized,
{
    f(p).ok_or(CalculusError::StencilEscape { x: p.x, y: p.y, z: p.z })
}

pub fn grad<F>(f: &F, p: Vec3, h: f64) -> Result<Vec3, CalculusError>
where
    F: Fn(Vec3) -> Option<f64> + ?Sized,
{
    let mut g = Vec3::zeros();
    for (k, e) in AXES.iter().enumerate() {
        g[k] = (at(f, p + e * h)? - at(f, p - e * h)?) / (2.0 * h);
    }
    Ok(g)
}

/// Directional derivative along `dir` (not normalised).
pub fn directional<F>(f: &F, p: Vec3, dir: Vec3, h: f64) -> Result<f64, CalculusError>
where
    F: Fn(Vec3) -> Option<f64> + ?Sized,
{
    Ok((at(f, p + dir * h)? - at(f, p - dir * h)?) / (2.0 * h))
}

/// `J[(i, j)] = ∂v_i/∂x_j`.
pub fn jacobian<F>(v: &F, p: Vec3, h: f64) -> Result<Matrix3<f64>, CalculusError>
where
    F: Fn(Vec3) -> Option<Vec3> + ?Sized,
{
    let mut jac = Matrix3::zeros();
    for (j, e) in AXES.iter().enumerate() {
        let col = (at(v, p + e * h)? - at(v, p - e * h)?) / (2.0 * h);
        jac.set_column(j, &col);
    }
    Ok(jac)
}

pub fn curl<F>(v: &F, p: Vec3, h: f64) -> Result<Vec3, CalculusError>
where
    F: Fn(Vec3) -> Option<Vec3> + ?Sized,
{
    let j = jacobian(v, p, h)?;
    Ok(curl_of(&j))
}

pub fn div<F>(v: &F, p: Vec3, h: f64) -> Result<f64, CalculusError>
where
    F: Fn(Vec3) -> Option<Vec3> + ?Sized,
{
    Ok(jacobian(v, p, h)?.trace())
}

/// Seven-point Laplacian.
pub fn laplacian<F>(f: &F, p: Vec3, h: f64) -> Result<f64, CalculusError>
where
    F: Fn(Vec3) -> Option<f64> + ?Sized,
{
    let centre = at(f, p)?;
    let mut acc = -6.0 * centre;
    for e in AXES.iter() {
        acc += at(f, p + e * h)? + at(f, p - e * h)?;
    }
    Ok(acc / (h * h))
}

pub fn curl_of(j: &Matrix3<f64>) -> Vec3 {
    Vec3::new(j[(2, 1)] - j[(1, 2)], j[(0, 2)] - j[(2, 0)], j[(1, 0)] - j[(0, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn everywhere<T>(f: impl Fn(Vec3) -> T) -> impl Fn(Vec3) -> Option<T> {
        move |p| Some(f(p))
    }

    #[test]
    fn curl_of_rotation_is_exact() {
        let v = everywhere(|p: Vec3| Vec3::new(-p.y, p.x, 0.0));
        for p in [Vec3::new(0.3, -1.2, 4.0), Vec3::new(10.0, 2.0, -3.0)] {
            let c = curl(&v, p, 1e-4).unwrap();
            assert!((c - Vec3::new(0.0, 0.0, 2.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn curl_eigenfield() {
        let v = everywhere(|p: Vec3| Vec3::new(p.z.sin(), p.z.cos(), 0.0));
        let p = Vec3::new(0.1, 0.2, 0.7);
        let c = curl(&v, p, 1e-4).unwrap();
        let w = Vec3::new(0.7f64.sin(), 0.7f64.cos(), 0.0);
        assert!((c - w).norm() < 1e-8);
    }

    #[test]
    fn quadratics_are_exact() {
        let f = everywhere(|p: Vec3| 3.0 * p.x * p.x - p.x * p.y + 2.0 * p.z * p.z + p.y - 4.0);
        let p = Vec3::new(0.7, -0.3, 1.9);
        let g = grad(&f, p, 1e-3).unwrap();
        let exact = Vec3::new(6.0 * p.x - p.y, -p.x + 1.0, 4.0 * p.z);
        assert!((g - exact).norm() < 1e-11);
        assert!((laplacian(&f, p, 1e-3).unwrap() - 10.0).abs() < 1e-6);

        let v = everywhere(|p: Vec3| Vec3::new(p.x * p.y, p.y * p.z, p.z * p.x + p.x * p.x));
        let d = div(&v, p, 1e-3).unwrap();
        assert!((d - (p.y + p.z + p.x)).abs() < 1e-11);
    }

    #[test]
    fn stencil_escape_reports_point() {
        let f = |p: Vec3| if p.x > 0.0 { Some(p.x.ln()) } else { None };
        let err = grad(&f, Vec3::new(5e-5, 0.0, 0.0), 1e-4).unwrap_err();
        assert!(matches!(err, CalculusError::StencilEscape { x, .. } if x < 0.0));
    }

    #[test]
    fn second_order_truncation() {
        let f = everywhere(|p: Vec3| p.x.sin() * p.y.exp());
        let p = Vec3::new(0.4, 0.2, 0.0);
        let exact = 0.4f64.cos() * 0.2f64.exp();
        let e1 = (grad(&f, p, 1e-2).unwrap().x - exact).abs();
        let e2 = (grad(&f, p, 5e-3).unwrap().x - exact).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.8, "{ratio}");
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    /// `c + b·x + xᵀAx`
    #[derive(Debug, Clone)]
    struct Quadratic {
        c: f64,
        b: Vec3,
        a: Matrix3<f64>,
    }

    impl Quadratic {
        fn eval(&self, p: Vec3) -> f64 {
            self.c + self.b.dot(&p) + p.dot(&(self.a * p))
        }

        fn grad(&self, p: Vec3) -> Vec3 {
            self.b + (self.a + self.a.transpose()) * p
        }
    }

    fn quadratic() -> impl Strategy<Value = Quadratic> {
        prop::collection::vec(-1.0..1.0f64, 13).prop_map(|v| Quadratic {
            c: v[0],
            b: Vec3::new(v[1], v[2], v[3]),
            a: Matrix3::from_column_slice(&v[4..13]),
        })
    }

    fn point() -> impl Strategy<Value = Vec3> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn exact_on_quadratics(
            f in quadratic(),
            g in quadratic(),
            k in quadratic(),
            p in point(),
            h in 0.05..0.5f64,
        ) {
            const TOL: f64 = 1e-11;
            let s = |q: Vec3| Some(f.eval(q));
            let v = |q: Vec3| Some(Vec3::new(f.eval(q), g.eval(q), k.eval(q)));
            prop_assert!((grad(&s, p, h).unwrap() - f.grad(p)).norm() < TOL);
            let dir = Vec3::new(0.3, -0.4, 1.2);
            prop_assert!((directional(&s, p, dir, h).unwrap() - f.grad(p).dot(&dir)).abs() < TOL);
            prop_assert!((laplacian(&s, p, h).unwrap() - 2.0 * f.a.trace()).abs() < TOL);
            let (gf, gg, gk) = (f.grad(p), g.grad(p), k.grad(p));
            prop_assert!((div(&v, p, h).unwrap() - (gf.x + gg.y + gk.z)).abs() < TOL);
            let expected = Vec3::new(gk.y - gg.z, gf.z - gk.x, gg.x - gf.y);
            prop_assert!((curl(&v, p, h).unwrap() - expected).norm() < TOL);
        }
    }
}
