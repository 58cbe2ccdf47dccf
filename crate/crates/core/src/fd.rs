//! Finite-difference kernels and the tolerance policy shared by every module.
//!
//! Two stencils are used:
//!
//! * the classical central difference with step `cbrt(eps) * (1 + |x_i|)`,
//!   used for gradients of scalar fields and for first-level derivatives of
//!   vector fields;
//! * a five-point (fourth-order) stencil with step `eps^(1/5) * (1 + |x_i|)`,
//!   used for quantities that are themselves differentiated again (translation
//!   Jacobians, `det Ad`, the Jacobian trace integrated along trajectories).

use nalgebra::DMatrix;

/// Tolerance for validations of exactly-entered data (structure constants,
/// cobracket components).
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for residuals that are computed through finite differences.
pub const FD_TOL: f64 = 1e-6;

pub fn central_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * (1.0 + x.abs())
}

pub fn five_point_step(x: f64) -> f64 {
    f64::EPSILON.powf(0.2) * (1.0 + x.abs())
}

fn hessian_step(x: f64) -> f64 {
    f64::EPSILON.powf(0.25) * (1.0 + x.abs())
}

/// Central-difference gradient of a scalar function.
pub fn gradient<F>(f: F, x: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = central_step(x[i]);
            p[i] = x[i] + h;
            let fp = f(&p);
            p[i] = x[i] - h;
            let fm = f(&p);
            p[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Five-point gradient of a scalar function.
pub fn gradient5<F>(f: F, x: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = five_point_step(x[i]);
            let mut at = |s: f64| {
                p[i] = x[i] + s * h;
                let v = f(&p);
                p[i] = x[i];
                v
            };
            (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian `J[i][j] = d f_i / d x_j` of a vector function.
pub fn jacobian<F>(f: F, x: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let m = f(x).len();
    let mut jac = DMatrix::zeros(m, n);
    let mut p = x.to_vec();
    for j in 0..n {
        let h = central_step(x[j]);
        p[j] = x[j] + h;
        let fp = f(&p);
        p[j] = x[j] - h;
        let fm = f(&p);
        p[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Five-point Jacobian `J[i][j] = d f_i / d x_j` of a vector function.
pub fn jacobian5<F>(f: F, x: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let m = f(x).len();
    let mut jac = DMatrix::zeros(m, n);
    let mut p = x.to_vec();
    for j in 0..n {
        let h = five_point_step(x[j]);
        let mut at = |s: f64| {
            p[j] = x[j] + s * h;
            let v = f(&p);
            p[j] = x[j];
            v
        };
        let (f2, f1, fm1, fm2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
        for i in 0..m {
            jac[(i, j)] = (-f2[i] + 8.0 * f1[i] - 8.0 * fm1[i] + fm2[i]) / (12.0 * h);
        }
    }
    jac
}

/// Five-point divergence `sum_i d f_i / d x_i`; cheaper than a full Jacobian.
pub fn trace5<F>(f: F, x: &[f64]) -> f64
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut p = x.to_vec();
    let mut acc = 0.0;
    for i in 0..x.len() {
        let h = five_point_step(x[i]);
        let mut at = |s: f64| {
            p[i] = x[i] + s * h;
            let v = f(&p)[i];
            p[i] = x[i];
            v
        };
        acc += (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
    }
    acc
}

/// Symmetrized second-order central-difference Hessian.
pub fn hessian<F>(f: F, x: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let mut hess = DMatrix::zeros(n, n);
    let mut p = x.to_vec();
    for i in 0..n {
        for j in i..n {
            let (hi, hj) = (hessian_step(x[i]), hessian_step(x[j]));
            let mut at = |si: f64, sj: f64| {
                p[i] += si * hi;
                p[j] += sj * hj;
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0))
                / (4.0 * hi * hj);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    (&hess + hess.transpose()) * 0.5
}

/// Largest absolute entry of a slice (0 for an empty slice).
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest absolute componentwise difference.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        let f = |v: &[f64]| v[0] * v[0] + 3.0 * v[0] * v[1];
        let g = gradient(f, &[1.0, 2.0]);
        assert!((g[0] - 8.0).abs() < 1e-8);
        assert!((g[1] - 3.0).abs() < 1e-8);
        let g5 = gradient5(f, &[1.0, 2.0]);
        assert!((g5[0] - 8.0).abs() < 1e-11);
    }

    #[test]
    fn five_point_jacobian_is_tighter() {
        let f = |v: &[f64]| vec![v[0].exp() * v[1].sin(), v[0] * v[1]];
        let x = [0.3, -0.7];
        let exact = (0.3f64).exp() * (-0.7f64).cos();
        let j2 = jacobian(f, &x);
        let j5 = jacobian5(f, &x);
        assert!((j5[(0, 1)] - exact).abs() < 1e-11);
        assert!((j2[(0, 1)] - exact).abs() < 1e-8);
        assert!((trace5(f, &x) - ((0.3f64).exp() * (-0.7f64).sin() + 0.3)).abs() < 1e-11);
    }

    #[test]
    fn hessian_is_symmetric_and_accurate() {
        let f = |v: &[f64]| v[0] * v[0] * v[1] + v[1].cosh();
        let h = hessian(f, &[0.5, 0.25]);
        assert!((h[(0, 0)] - 0.5).abs() < 1e-6);
        assert!((h[(0, 1)] - 1.0).abs() < 1e-6);
        assert!((h[(1, 1)] - 0.25f64.cosh()).abs() < 1e-6);
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }
}
