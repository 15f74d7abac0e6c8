//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Natural log of |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma(x) for real x (poles at non-positive integers return infinity).
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn half_integer_and_integer_values() {
        assert_abs_diff_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(gamma(1.0), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(gamma(5.0), 24.0, epsilon = 1e-11);
        assert_abs_diff_eq!(
            gamma(1.5),
            0.5 * std::f64::consts::PI.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn recurrence_property() {
        for &x in &[0.3, 1.7, 4.2, 9.9] {
            assert_abs_diff_eq!(gamma(x + 1.0) / gamma(x), x, epsilon = 1e-10 * x.max(1.0));
        }
    }
}
