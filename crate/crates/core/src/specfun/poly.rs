//! Orthogonal polynomials by three-term recurrences.

use crate::error::{Error, Result};

/// Physicists' Hermite polynomial H_n(x), H_{n+1} = 2x H_n - 2n H_{n-1}.
pub fn hermite(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let mut hm = 1.0;
            let mut h = 2.0 * x;
            for k in 1..n {
                let next = 2.0 * x * h - 2.0 * k as f64 * hm;
                hm = h;
                h = next;
            }
            h
        }
    }
}

/// Generalized Laguerre polynomial L_n^{(alpha)}(x).
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 + alpha - x,
        _ => {
            let mut lm = 1.0;
            let mut l = 1.0 + alpha - x;
            for k in 1..n {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0 + alpha - x) * l - (kf + alpha) * lm) / (kf + 1.0);
                lm = l;
                l = next;
            }
            l
        }
    }
}

/// Gegenbauer (ultraspherical) polynomial C_l^{(alpha)}(z) for alpha > 0,
/// |z| <= 1.
pub fn gegenbauer(l: u32, alpha: f64, z: f64) -> Result<f64> {
    if alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "gegenbauer needs alpha > 0, got {alpha}"
        )));
    }
    if z.abs() > 1.0 {
        return Err(Error::Domain(format!("gegenbauer needs |z| <= 1, got {z}")));
    }
    Ok(gegenbauer_unchecked(l, alpha, z))
}

fn gegenbauer_unchecked(l: u32, alpha: f64, z: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => 2.0 * alpha * z,
        _ => {
            let mut cm = 1.0;
            let mut c = 2.0 * alpha * z;
            for k in 1..l {
                let kf = k as f64;
                let next = (2.0 * (kf + alpha) * z * c - (kf + 2.0 * alpha - 1.0) * cm) / (kf + 1.0);
                cm = c;
                c = next;
            }
            c
        }
    }
}

/// Associated Gegenbauer polynomial
/// `F_{l,m}^{(j)}(z) = (-1)^m (1-z^2)^{m/2} d^m/dz^m C_l^{(j/2)}(z)`.
///
/// The m-th derivative is taken analytically with the index-raising identity
/// `d/dz C_l^{(a)} = 2a C_{l-1}^{(a+1)}`, which stays clean near z = +-1.
/// Returns 0 for m > l (derivative of a degree-l polynomial).
pub fn assoc_gegenbauer(l: u32, m: u32, j: u32, z: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::Domain("assoc_gegenbauer needs j >= 1".into()));
    }
    if z.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "assoc_gegenbauer needs |z| <= 1, got {z}"
        )));
    }
    if m > l {
        return Ok(0.0);
    }
    let alpha = j as f64 / 2.0;
    // d^m C_l^{(a)} = 2^m (a)_m C_{l-m}^{(a+m)}
    let mut factor = 1.0;
    for i in 0..m {
        factor *= 2.0 * (alpha + i as f64);
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let weight = (1.0 - z * z).powf(m as f64 / 2.0);
    Ok(sign * weight * factor * gegenbauer_unchecked(l - m, alpha + m as f64, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermite_low_orders_match_explicit_forms() {
        // H0..H4 explicitly
        for &x in &[-1.7, -0.3, 0.0, 0.45, 2.2] {
            assert_abs_diff_eq!(hermite(0, x), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(hermite(1, x), 2.0 * x, epsilon = 1e-12);
            assert_abs_diff_eq!(hermite(2, x), 4.0 * x * x - 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(hermite(3, x), 8.0 * x.powi(3) - 12.0 * x, epsilon = 1e-12);
            assert_abs_diff_eq!(
                hermite(4, x),
                16.0 * x.powi(4) - 48.0 * x * x + 12.0,
                epsilon = 1e-11
            );
        }
    }

    #[test]
    fn hermite_cubic_at_one() {
        // H3 = 8x^3 - 12x evaluated by hand at x = 1
        assert_abs_diff_eq!(hermite(3, 1.0), -4.0, epsilon = 1e-13);
    }

    #[test]
    fn hermite_odd_small_argument_slope() {
        // H_{2n+1}(x)/x -> (-1)^n (2n+2)!/(n+1)! as x -> 0; n=1 gives -12.
        let x = 1e-7;
        assert_abs_diff_eq!(hermite(3, x) / x, -12.0, epsilon = 1e-5);
        // n=2: (6)!/3! = 120, sign +
        assert_abs_diff_eq!(hermite(5, x) / x, 120.0, epsilon = 1e-4);
    }

    #[test]
    fn laguerre_values() {
        assert_abs_diff_eq!(laguerre(0, 2.3, 1.7), 1.0, epsilon = 1e-14);
        // L_1^{(1)}(x) = 2 - x has its root at x = 2
        assert_abs_diff_eq!(laguerre(1, 1.0, 2.0), 0.0, epsilon = 1e-14);
        // L_n(0) = 1 for alpha = 0
        assert_abs_diff_eq!(laguerre(2, 0.0, 0.0), 1.0, epsilon = 1e-14);
        // explicit L_2^{(a)}(x) = x^2/2 - (a+2)x + (a+1)(a+2)/2
        for &(a, x) in &[(0.5, 1.3), (2.0, 0.4), (3.5, 5.0)] {
            let explicit = 0.5 * x * x - (a + 2.0) * x + 0.5 * (a + 1.0) * (a + 2.0);
            assert_abs_diff_eq!(laguerre(2, a, x), explicit, epsilon = 1e-12);
        }
    }

    #[test]
    fn gegenbauer_values() {
        assert_abs_diff_eq!(gegenbauer(0, 1.3, 0.2).unwrap(), 1.0, epsilon = 1e-14);
        for &(a, z) in &[(0.5, -0.4), (1.5, 0.9), (2.0, 0.0)] {
            assert_abs_diff_eq!(gegenbauer(1, a, z).unwrap(), 2.0 * a * z, epsilon = 1e-14);
            // explicit degree 3: C3 = (4/3)a(a+1)(a+2)z^3 - 2a(a+1)z
            let c3 = 4.0 / 3.0 * a * (a + 1.0) * (a + 2.0) * z.powi(3) - 2.0 * a * (a + 1.0) * z;
            assert_abs_diff_eq!(gegenbauer(3, a, z).unwrap(), c3, epsilon = 1e-12);
        }
        // alpha = 1/2 reduces to Legendre, P_n(1) = 1
        assert_abs_diff_eq!(gegenbauer(2, 0.5, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert!(gegenbauer(2, 0.5, 1.2).is_err());
        assert!(gegenbauer(2, -0.5, 0.2).is_err());
    }

    #[test]
    fn assoc_gegenbauer_reductions() {
        // m = 0 is the plain polynomial
        for &(l, j, z) in &[(3u32, 2u32, 0.3), (4, 1, -0.6)] {
            assert_abs_diff_eq!(
                assoc_gegenbauer(l, 0, j, z).unwrap(),
                gegenbauer(l, j as f64 / 2.0, z).unwrap(),
                epsilon = 1e-13
            );
        }
        // F_{1,1}^{(1)}(0): d/dz C_1^{(1/2)} = 1, so F = -sqrt(1-z^2) -> -1 at z=0
        assert_abs_diff_eq!(assoc_gegenbauer(1, 1, 1, 0.0).unwrap(), -1.0, epsilon = 1e-14);
        // m > l vanishes
        assert_abs_diff_eq!(assoc_gegenbauer(2, 3, 1, 0.5).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn assoc_gegenbauer_derivative_consistency() {
        // m = 1 equals -(1-z^2)^{1/2} dC/dz; check against central differences.
        let h = 1e-5;
        for &(l, j, z) in &[(3u32, 2u32, 0.3), (5, 3, -0.45), (4, 1, 0.7)] {
            let a = j as f64 / 2.0;
            let fd = (gegenbauer(l, a, z + h).unwrap() - gegenbauer(l, a, z - h).unwrap())
                / (2.0 * h);
            let expected = -(1.0 - z * z).sqrt() * fd;
            assert_abs_diff_eq!(assoc_gegenbauer(l, 1, j, z).unwrap(), expected, epsilon = 1e-5);
        }
    }

    #[test]
    fn assoc_gegenbauer_ode_residual() {
        // -(1-z^2) F'' + (j+1) z F' + m(m+j-1)/(1-z^2) F = l(l+j) F
        let h = 1e-4;
        let (l, m, j, z) = (3u32, 1u32, 2u32, 0.3);
        let f = |z: f64| assoc_gegenbauer(l, m, j, z).unwrap();
        let f0 = f(z);
        let d1 = (f(z + h) - f(z - h)) / (2.0 * h);
        let d2 = (f(z + h) - 2.0 * f0 + f(z - h)) / (h * h);
        let lhs = -(1.0 - z * z) * d2
            + (j as f64 + 1.0) * z * d1
            + (m * (m + j - 1)) as f64 / (1.0 - z * z) * f0;
        let rhs = (l * (l + j)) as f64 * f0;
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6);
    }
}
