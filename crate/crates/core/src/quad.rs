//! Quadrature rules used throughout the crate.
//!
//! All radial integrals run composite Simpson on the solver's uniform grid so
//! that one quadrature engine carries one error model. `|simpson - trapezoid|`
//! serves as the attached error estimate.

use crate::error::{Error, Result};

/// Composite Simpson on a uniform grid. Requires an odd number of samples.
pub fn simpson(h: f64, values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::Quadrature(format!(
            "simpson needs an odd sample count >= 3, got {n}"
        )));
    }
    let mut acc = values[0] + values[n - 1];
    let mut i = 1;
    while i < n - 1 {
        acc += 4.0 * values[i];
        if i + 1 < n - 1 {
            acc += 2.0 * values[i + 1];
        }
        i += 2;
    }
    Ok(acc * h / 3.0)
}

/// Composite trapezoid on a uniform grid.
pub fn trapezoid(h: f64, values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Integral over the leading half panel `[0, h]` from samples at 0, h, 2h
/// (quadratic through the three points; same order as Simpson).
pub fn first_panel(h: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn simpson_exact_for_cubics() {
        let h = 0.1;
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * h).collect();
        let vals: Vec<f64> = xs.iter().map(|x| x.powi(3) - 2.0 * x + 1.0).collect();
        // integral of x^3 - 2x + 1 over [0,1] = 1/4 - 1 + 1
        assert_abs_diff_eq!(simpson(h, &vals).unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn simpson_rejects_even_counts() {
        assert!(simpson(0.1, &[1.0, 2.0]).is_err());
        assert!(simpson(0.1, &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn first_panel_quadratic() {
        // f(x) = x^2 on [0, 0.2] with h = 0.2: exact 0.2^3/3
        let h = 0.2;
        let got = first_panel(h, 0.0, h * h, 4.0 * h * h);
        assert_abs_diff_eq!(got, h * h * h / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_legendre_degree_exactness() {
        let (x, w) = gauss_legendre(8);
        let int: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(6)).sum();
        assert_abs_diff_eq!(int, 2.0 / 7.0, epsilon = 1e-14);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
    }
}
