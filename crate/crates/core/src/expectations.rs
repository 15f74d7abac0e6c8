//! Expectation values against P = R^2, kinetic-energy moments, and the
//! Hermite generating-function check.
//!
//! All moments run composite Simpson on the state's grid plus an analytic
//! small-rho sliver `integral_0^h W ~ W(h) h / (q+1)` with the exponent q of
//! the integrand measured on the first two nodes. The attached error estimate
//! is |Simpson - trapezoid| on the same samples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::ScaledPotential;
use crate::quad::{simpson, trapezoid};
use crate::radial::{Eigenstate, Grid};
use crate::specfun::gamma;

/// One expectation value with its quadrature error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct Moment {
    pub state: String,
    pub observable: String,
    pub value: f64,
    pub err: f64,
}

pub(crate) fn state_label(s: &Eigenstate) -> String {
    format!(
        "N={} l1={} n={} [{}]",
        s.dim.n_dim, s.dim.l1, s.n, s.potential.description
    )
}

/// Integrate precomputed integrand samples over [0, infinity) as
/// Simpson on [h, rho_max] plus an analytic model of the [0, h] sliver.
///
/// The sliver model is W = rho^q (c0 + c1 rho + c2 rho^2) with q measured on
/// the first two nodes and the quadratic factor matched through the first
/// three, which is accurate both for smooth integrands (q ~ 0) and for
/// fractional-power behaviour near the origin.
pub(crate) fn integrate_samples(grid: Grid, w: &[f64]) -> Result<(f64, f64)> {
    let body = simpson(grid.h(), w)?;
    let est = (body - trapezoid(grid.h(), w)).abs();
    let same_sign = w[0] != 0.0
        && w[1] != 0.0
        && w[2] != 0.0
        && w[0].signum() == w[1].signum()
        && w[1].signum() == w[2].signum();
    let tail = if same_sign {
        // Richardson exponent from three nodes: with W = c rho^q (1 + a rho)
        // the log-ratios d21 = q ln 2 + a h and d32 = q ln(3/2) + a h leave
        // q = (d21 - d32)/ln(4/3), so a smooth integrand measures q = 0
        // exactly instead of a spurious small power.
        let d21 = (w[1] / w[0]).abs().ln();
        let d32 = (w[2] / w[1]).abs().ln();
        let q = (d21 - d32) / (4.0f64 / 3.0).ln();
        if q <= -0.95 {
            return Err(Error::Domain(format!(
                "integrand behaves like rho^{q:.3} near the origin; integral diverges"
            )));
        }
        let h = grid.h();
        let r = [grid.rho(0), grid.rho(1), grid.rho(2)];
        let y = [
            w[0] / r[0].powf(q),
            w[1] / r[1].powf(q),
            w[2] / r[2].powf(q),
        ];
        // quadratic through (r_i, y_i)
        let c2 = ((y[2] - y[0]) / (r[2] - r[0]) - (y[1] - y[0]) / (r[1] - r[0])) / (r[2] - r[1]);
        let c1 = (y[1] - y[0]) / (r[1] - r[0]) - c2 * (r[0] + r[1]);
        let c0 = y[0] - c1 * r[0] - c2 * r[0] * r[0];
        c0 * h.powf(q + 1.0) / (q + 1.0)
            + c1 * h.powf(q + 2.0) / (q + 2.0)
            + c2 * h.powf(q + 3.0) / (q + 3.0)
    } else {
        // sign change or vanishing samples right at the origin: the sliver
        // is O(h * max|w[0..3]|) and treated as negligible
        0.0
    };
    Ok((body + tail, est))
}

/// Expectation value of an arbitrary radial observable g against P.
pub fn expect(s: &Eigenstate, g: impl Fn(f64) -> f64, observable: &str) -> Result<Moment> {
    let w: Vec<f64> = (0..s.grid.len())
        .map(|i| {
            let rho = s.rho(i);
            s.p(i) * g(rho)
        })
        .collect();
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "observable '{observable}' is not finite on the grid"
        )));
    }
    let (value, err) = integrate_samples(s.grid, &w)?;
    Ok(Moment {
        state: state_label(s),
        observable: observable.to_string(),
        value,
        err,
    })
}

/// `<rho^j>` with an explicit convergence precheck against the state's
/// small-rho exponent: j + 2 l1 + N - 1 must exceed -1 by a safety margin.
pub fn expect_power(s: &Eigenstate, j: f64) -> Result<Moment> {
    let q_total = j + s.dim.p_origin_exponent();
    if q_total <= -0.95 {
        return Err(Error::Domain(format!(
            "<rho^{j}> diverges: P rho^j ~ rho^{q_total:.3} near the origin"
        )));
    }
    expect(s, |rho| rho.powf(j), &format!("rho^{j}"))
}

/// `<T^order>` for order 1..=4 assembled from the commutator expansion:
/// quadrature pieces in v, v', v'' and v''' only.
pub fn kinetic_moment(s: &Eigenstate, p: &ScaledPotential, order: u32) -> Result<Moment> {
    if s.dim.n_dim != 3 {
        return Err(Error::Domain(
            "kinetic moments are derived for the three-dimensional radial problem".into(),
        ));
    }
    if order == 0 || order > 4 {
        return Err(Error::UnsupportedOrder(order));
    }
    if order == 4 && !p.has_third_derivative() {
        return Err(Error::Domain(
            "order-4 kinetic moment needs v'''; the custom potential does not supply it".into(),
        ));
    }
    let eps = s.eps;
    let ll = (s.dim.l1 * (s.dim.l1 + 1)) as f64;
    let mut samples = vec![0.0; s.grid.len()];
    for (i, slot) in samples.iter_mut().enumerate() {
        let rho = s.grid.rho(i);
        let t = eps - p.value(rho);
        *slot = match order {
            1 => t,
            2 => t * t,
            3 => {
                let v1 = p.derivative(rho, 1)?;
                t.powi(3) + 0.5 * v1 * v1
            }
            4 => {
                let v1 = p.derivative(rho, 1)?;
                let v2 = p.derivative(rho, 2)?;
                let v3 = p.derivative(rho, 3)?;
                t.powi(4)
                    + 4.0 * (t - ll / (4.0 * rho * rho)) * v1 * v1
                    + 0.75 * v2 * v2
                    + 0.5 * v1 * v3
            }
            _ => unreachable!(),
        } * s.p(i);
    }
    let (value, err) = integrate_samples(s.grid, &samples)?;
    Ok(Moment {
        state: state_label(s),
        observable: format!("T^{order}"),
        value,
        err,
    })
}

/// Truncated Hermite-squared series against its closed form:
/// `sum_{n <= n_max} u^{2n+1}/(2^{2n+1}(2n+1)!) integral H_{2n+1}^2 e^{-rho^2} rho^{2k-1}`
/// versus `Gamma(k)/4 (1-u^2)^{-1/2} [((1+u)/(1-u))^k - ((1-u)/(1+u))^k]`.
/// Returns (series, closed).
pub fn mehler_check(k: f64, u: f64, n_max: u32) -> Result<(f64, f64)> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("mehler check needs 0 < u < 1, got {u}")));
    }
    if !(k > 0.0) {
        return Err(Error::Domain(format!("mehler check needs k > 0, got {k}")));
    }
    // oscillator grid reaching past the outermost classical turning point
    let h = 1e-3;
    let rho_max = (2.0 * (2.0 * n_max as f64 + 1.5)).sqrt() + 8.0;
    let grid = Grid::new(h, rho_max)?;
    let n_terms = (n_max + 1) as usize;
    let mut integrals = vec![0.0; n_terms];
    let len = grid.len();
    for i in 0..len {
        let rho = grid.rho(i);
        // composite Simpson weight over [h, rho_max]
        let sw = if i == 0 || i == len - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * h
            / 3.0;
        let weight = sw * rho.powf(2.0 * k - 1.0);
        // Gaussian-weighted Hermite recurrence keeps every factor in range
        let gauss = (-0.5 * rho * rho).exp();
        let mut wm = gauss; // H_0 e^{-rho^2/2}
        let mut wc = 2.0 * rho * gauss; // H_1 e^{-rho^2/2}
        integrals[0] += weight * wc * wc;
        let mut m = 1u32;
        for slot in integrals.iter_mut().take(n_terms).skip(1) {
            // advance two orders to the next odd Hermite
            for _ in 0..2 {
                let next = 2.0 * rho * wc - 2.0 * m as f64 * wm;
                wm = wc;
                wc = next;
                m += 1;
            }
            *slot += weight * wc * wc;
        }
    }
    let mut series = 0.0f64;
    let mut factor = 0.5 * u; // u^{2n+1}/(2^{2n+1}(2n+1)!) at n = 0
    let mut prev_term = f64::INFINITY;
    for (n, integral) in integrals.iter().enumerate() {
        let term = factor * integral;
        if n > 2 && term.abs() > prev_term.abs() && term.abs() > 1e-12 * series.abs() {
            return Err(Error::NoConvergence(format!(
                "series terms grow at n = {n} (u = {u}, k = {k})"
            )));
        }
        series += term;
        prev_term = term;
        let nf = n as f64;
        factor *= u * u / (4.0 * (2.0 * nf + 2.0) * (2.0 * nf + 3.0));
    }
    let ratio = (1.0 + u) / (1.0 - u);
    let closed = 0.25 * gamma(k) / (1.0 - u * u).sqrt() * (ratio.powf(k) - ratio.powf(-k));
    Ok((series, closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_custom, make_power_law};
    use crate::radial::DimensionConfig;
    use crate::radial::{exact_coulomb, exact_linear_l0, exact_oscillator_l0, solve_auto};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn osc_ground() -> Eigenstate {
        exact_oscillator_l0(0, Grid::new(1e-3, 14.0).unwrap()).unwrap()
    }

    #[test]
    fn normalization_is_unity() {
        let m = expect(&osc_ground(), |_| 1.0, "1").unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-9);
        assert!(m.err < 1e-4);
    }

    #[test]
    fn oscillator_second_moment() {
        // <rho^2> = 2<v> = eps = 3/2
        let m = expect(&osc_ground(), |rho| rho * rho, "rho^2").unwrap();
        assert_abs_diff_eq!(m.value, 1.5, epsilon = 1e-8);
        let m4 = expect_power(&osc_ground(), 4.0).unwrap();
        assert_abs_diff_eq!(m4.value, 3.75, epsilon = 1e-7);
    }

    #[test]
    fn coulomb_moments() {
        let grid = Grid::new(1e-3, 60.0).unwrap();
        let s = exact_coulomb(1, 0, grid).unwrap();
        // <rho> = 3/2 (gamma-function integral of 4 rho^3 e^{-2 rho})
        assert_abs_diff_eq!(expect_power(&s, 1.0).unwrap().value, 1.5, epsilon = 1e-8);
        assert_abs_diff_eq!(expect_power(&s, -2.0).unwrap().value, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn linear_first_moment() {
        let grid = Grid::new(1e-3, 16.0).unwrap();
        let s = exact_linear_l0(1, grid).unwrap();
        // <rho> = 2 <v> = 4 eps / 3
        let m = expect_power(&s, 1.0).unwrap();
        assert_abs_diff_eq!(m.value, 4.0 / 3.0 * s.eps, epsilon = 1e-6);
        assert_abs_diff_eq!(m.value, 1.558_739, epsilon = 3e-6);
    }

    #[test]
    fn divergent_moments_are_refused() {
        let grid = Grid::new(1e-3, 60.0).unwrap();
        let s = exact_coulomb(1, 0, grid).unwrap();
        // P rho^-3 ~ rho^-1: divergent
        assert!(matches!(expect_power(&s, -3.0), Err(Error::Domain(_))));
        assert!(matches!(expect_power(&s, -5.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kinetic_moments_oscillator_ground() {
        let s = osc_ground();
        let p = ScaledPotential::oscillator();
        assert_abs_diff_eq!(kinetic_moment(&s, &p, 1).unwrap().value, 0.75, epsilon = 1e-8);
        assert_abs_diff_eq!(kinetic_moment(&s, &p, 2).unwrap().value, 0.9375, epsilon = 1e-7);
        assert_abs_diff_eq!(
            kinetic_moment(&s, &p, 3).unwrap().value,
            1.640625,
            epsilon = 1e-6
        );
        // <T^4> = <v^4> = 945/256 for the ground state
        assert_abs_diff_eq!(
            kinetic_moment(&s, &p, 4).unwrap().value,
            945.0 / 256.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn kinetic_moments_match_potential_moments_for_l1() {
        // the centrifugal piece of the order-4 expression is exercised only
        // by l > 0 states; <T^n> = <v^n> must still hold on the oscillator
        let p = ScaledPotential::oscillator();
        let s = solve_auto(&p, DimensionConfig::three_d(1), 0, 1e-3, 1e-10).unwrap();
        for order in 1..=4u32 {
            let t = kinetic_moment(&s, &p, order).unwrap().value;
            let v = expect(&s, |rho| (0.5 * rho * rho).powi(order as i32), "v^n")
                .unwrap()
                .value;
            assert!(
                (t - v).abs() < 1e-6,
                "<T^{order}> = {t} vs <v^{order}> = {v}"
            );
        }
    }

    #[test]
    fn kinetic_moment_guards() {
        let s = osc_ground();
        let p = ScaledPotential::oscillator();
        assert!(matches!(kinetic_moment(&s, &p, 5), Err(Error::UnsupportedOrder(5))));
        assert!(matches!(kinetic_moment(&s, &p, 0), Err(Error::UnsupportedOrder(0))));
        // custom potential without v''' refuses order 4 but not order 3
        let c = make_custom(
            "oscillator sans v'''",
            Arc::new(|r: f64| 0.5 * r * r),
            Arc::new(|r: f64| r),
            Arc::new(|_| 1.0),
            None,
        );
        assert!(kinetic_moment(&s, &c, 3).is_ok());
        assert!(matches!(kinetic_moment(&s, &c, 4), Err(Error::Domain(_))));
        // dimension guard
        let p5 = ScaledPotential::oscillator();
        let s5 = solve_auto(&p5, DimensionConfig::new(5, 0).unwrap(), 0, 1e-3, 1e-8).unwrap();
        assert!(matches!(kinetic_moment(&s5, &p5, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn kinetic_energy_integration_by_parts_route() {
        // <T> = 1/2 integral Rdot^2 + <l(l+1)/(2 rho^2)> must agree with
        // eps - <v> on exact states
        let states = vec![
            exact_oscillator_l0(1, Grid::new(1e-3, 14.0).unwrap()).unwrap(),
            exact_linear_l0(2, Grid::new(1e-3, 18.0).unwrap()).unwrap(),
            exact_coulomb(2, 1, Grid::new(1e-3, 80.0).unwrap()).unwrap(),
        ];
        for s in states {
            let p = s.potential.clone();
            let direct = kinetic_moment(&s, &p, 1).unwrap().value;
            let grad: Vec<f64> = s.rdot.iter().map(|d| d * d).collect();
            let (grad_int, _) = integrate_samples(s.grid, &grad).unwrap();
            let ll = (s.dim.l1 * (s.dim.l1 + 1)) as f64;
            let cent = if ll > 0.0 {
                expect(&s, |rho| ll / (2.0 * rho * rho), "centrifugal")
                    .unwrap()
                    .value
            } else {
                0.0
            };
            let alt = 0.5 * grad_int + cent;
            assert!(
                (direct - alt).abs() < 1e-6,
                "{}: {direct} vs {alt}",
                s.potential.description
            );
        }
    }

    #[test]
    fn mehler_series_matches_closed_form() {
        let (series, closed) = mehler_check(1.0, 0.3, 20).unwrap();
        assert_abs_diff_eq!(series, closed, epsilon = 1e-8);
        // closed form at k=1 is u (1-u^2)^{-3/2}
        assert_abs_diff_eq!(closed, 0.3 / 0.91f64.powf(1.5), epsilon = 1e-12);
        // u -> 0 sends both sides to zero
        let (s0, c0) = mehler_check(1.0, 1e-8, 5).unwrap();
        assert!(s0.abs() < 1e-7 && c0.abs() < 1e-7);
    }

    #[test]
    fn mehler_leading_term_coefficient() {
        // n = 0 contribution at k = 1 is exactly u
        let (series, _) = mehler_check(1.0, 0.05, 0).unwrap();
        assert_abs_diff_eq!(series, 0.05, epsilon = 1e-10);
    }

    #[test]
    fn mehler_rejects_bad_arguments() {
        assert!(mehler_check(1.0, 1.5, 5).is_err());
        assert!(mehler_check(1.0, 0.0, 5).is_err());
        assert!(mehler_check(-1.0, 0.5, 5).is_err());
    }

    #[test]
    fn moment_serializes_to_json_row() {
        let m = expect(&osc_ground(), |_| 1.0, "1").unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert!(v["state"].is_string());
        assert_eq!(v["observable"], "1");
        assert!(v["value"].is_f64() && v["err"].is_f64());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn power_moments_are_log_convex(j in 0.5f64..5.0) {
            // Cauchy-Schwarz on the positive measure P:
            // <rho^j>^2 <= <rho^{j-1}> <rho^{j+1}>
            let s = osc_ground();
            let mid = expect_power(&s, j).unwrap().value;
            let lo = expect_power(&s, j - 1.0).unwrap().value;
            let hi = expect_power(&s, j + 1.0).unwrap().value;
            prop_assert!(mid * mid <= lo * hi * (1.0 + 1e-9));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn power_law_amplitude_scales_out_of_virial_ratio(a in 0.5f64..3.0) {
            // <v> = 2 eps / (2+m) holds for any amplitude (m = 2 here)
            let p = make_power_law(a, 2.0).unwrap();
            let s = solve_auto(&p, DimensionConfig::three_d(0), 0, 2e-3, 1e-9).unwrap();
            let v = expect(&s, |rho| 0.5 * a * rho * rho, "v").unwrap().value;
            prop_assert!((v - 0.5 * s.eps).abs() < 1e-6);
        }
    }
}
