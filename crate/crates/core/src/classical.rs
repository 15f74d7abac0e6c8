//! Time averages over one radial period of a bound central-force orbit, the
//! classical generalized virial relation, and its comparison against the
//! quantum result.
//!
//! Everything uses the energy method (no trajectory integration): averages of
//! radial observables over a period reduce to
//! `<g> = integral g dr / sqrt(2 T_r) / integral dr / sqrt(2 T_r)` between
//! turning points, with T_r = E - V - l^2/(2 r^2) in scaled units M = 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expectations::expect;
use crate::potentials::ScaledPotential;
use crate::radial::Eigenstate;
use crate::relations::{q_form_average, ProbeFunction, RelationReport};

/// A bound orbit at energy E and squared angular momentum l2.
#[derive(Debug, Clone)]
pub struct ClassicalOrbit {
    pub potential: ScaledPotential,
    pub e: f64,
    pub l2: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub period: f64,
    /// r_min == r_max: averages degenerate to point evaluations.
    pub circular: bool,
    nodes: usize,
}

const DEFAULT_NODES: usize = 2048;

impl ClassicalOrbit {
    /// Build the orbit for the given (E, l2), locating both turning points.
    pub fn new(potential: &ScaledPotential, e: f64, l2: f64) -> Result<Self> {
        Self::with_nodes(potential, e, l2, DEFAULT_NODES)
    }

    /// Same, with an explicit quadrature node count.
    pub fn with_nodes(
        potential: &ScaledPotential,
        e: f64,
        l2: f64,
        nodes: usize,
    ) -> Result<Self> {
        if l2 < 0.0 {
            return Err(Error::Domain(format!("l^2 must be non-negative, got {l2}")));
        }
        let (r_min, r_max) = find_turning_points(potential, e, l2)?;
        let circular = r_max - r_min < 1e-8;
        let mut orbit = ClassicalOrbit {
            potential: potential.clone(),
            e,
            l2,
            r_min,
            r_max,
            period: 0.0,
            circular,
            nodes,
        };
        orbit.period = if circular {
            // small-oscillation period about the circular radius
            let r = orbit.r_min;
            let v2 = potential.derivative(r, 2)?;
            let curvature = v2 + 3.0 * l2 / r.powi(4);
            if curvature > 0.0 {
                2.0 * std::f64::consts::PI / curvature.sqrt()
            } else {
                f64::INFINITY
            }
        } else {
            2.0 * orbit.integrate(|_| 1.0)?
        };
        Ok(orbit)
    }

    /// Radial kinetic energy T_r(r) = E - V - l^2/(2 r^2).
    pub fn radial_kinetic(&self, r: f64) -> f64 {
        let centrifugal = if self.l2 == 0.0 { 0.0 } else { self.l2 / (2.0 * r * r) };
        self.e - self.potential.value(r) - centrifugal
    }

    fn radial_kinetic_gradient(&self, r: f64) -> Result<f64> {
        Ok(-self.potential.derivative(r, 1)? + self.l2 / (r * r * r))
    }

    // integral_{r_min}^{r_max} g(r) dr / sqrt(2 T_r)
    fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let inner_regular = self.r_min == 0.0;
        if !inner_regular {
            // Chebyshev-Gauss nodes absorb the 1/sqrt singularities at both
            // turning points: r = c + w cos(theta)
            let c = 0.5 * (self.r_min + self.r_max);
            let w = 0.5 * (self.r_max - self.r_min);
            let n = self.nodes;
            let mut acc = 0.0;
            for i in 0..n {
                let x = (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos();
                let r = c + w * x;
                let t = self.radial_kinetic(r);
                if !(t > 0.0) {
                    return Err(Error::Quadrature(format!(
                        "radial kinetic energy not positive inside the orbit at r = {r}"
                    )));
                }
                acc += g(r) * w * (1.0 - x * x).sqrt() / (2.0 * t).sqrt();
            }
            Ok(acc * std::f64::consts::PI / n as f64)
        } else {
            // inner endpoint has T_r > 0 (motion through the centre); only the
            // outer turning point is singular. Substitute r = r_max - s^2.
            let s_max = (self.r_max - self.r_min).sqrt();
            let n = if self.nodes % 2 == 0 { self.nodes } else { self.nodes + 1 };
            let hs = s_max / n as f64;
            let outer_slope = -self.radial_kinetic_gradient(self.r_max)?;
            if !(outer_slope > 0.0) {
                return Err(Error::Quadrature(
                    "outer turning point is not a simple zero of T_r".into(),
                ));
            }
            // keep evaluation strictly inside (0, r_max): the s = s_max node
            // can land on r = 0 up to rounding, where potentials and their
            // gradients are undefined
            let floor = (self.r_min).max(1e-13 * self.r_max);
            let eval = |s: f64| -> Result<f64> {
                if s < 1e-9 {
                    return Ok(2.0 * g(self.r_max) / (2.0 * outer_slope).sqrt());
                }
                let r = (self.r_max - s * s).max(floor);
                let t = self.radial_kinetic(r);
                if !(t > 0.0) {
                    return Err(Error::Quadrature(format!(
                        "radial kinetic energy not positive inside the orbit at r = {r}"
                    )));
                }
                // 2 s g / sqrt(2 T_r) written via A = T_r / s^2 for stability
                Ok(2.0 * g(r) / (2.0 * t / (s * s)).sqrt())
            };
            // composite Simpson in s
            let mut acc = eval(0.0)? + eval(s_max)?;
            for i in 1..n {
                let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += weight * eval(i as f64 * hs)?;
            }
            Ok(acc * hs / 3.0)
        }
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "E": self.e,
            "l2": self.l2,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "period": self.period,
            "circular": self.circular,
            "potential": self.potential.description,
        })
    }
}

/// Locate the radial turning points of bounded motion: the roots of T_r
/// bracketing the well minimum, each to about 1e-12 (relative). For l2 = 0
/// with a regular potential the motion passes through the centre and
/// r_min = 0.
pub fn find_turning_points(p: &ScaledPotential, e: f64, l2: f64) -> Result<(f64, f64)> {
    let v_eff = |r: f64| p.value(r) + l2 / (2.0 * r * r);
    let t_r = |r: f64| e - v_eff(r);

    // locate the well minimum on a log grid, then refine by golden section
    let mut best_r = f64::NAN;
    let mut best_v = f64::INFINITY;
    for i in 0..400 {
        let r = 10f64.powf(-4.0 + 8.0 * i as f64 / 399.0);
        let v = v_eff(r);
        if v < best_v {
            best_v = v;
            best_r = r;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::NoOrbit("effective potential has no finite minimum".into()));
    }
    let (mut a, mut b) = (best_r / 1.1, best_r * 1.1);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if v_eff(c) < v_eff(d) {
            b = d;
        } else {
            a = c;
        }
        if b - a < 1e-14 * b {
            break;
        }
    }
    let r_well = 0.5 * (a + b);
    let v_min = v_eff(r_well);
    if e < v_min {
        return Err(Error::NoOrbit(format!(
            "energy {e} below the effective-potential minimum {v_min:.12}"
        )));
    }
    if e - v_min < 1e-12 * (1.0 + e.abs()) {
        return Ok((r_well, r_well)); // circular orbit
    }

    // inner turning point
    let r_min = if t_r(1e-12) < 0.0 || l2 > 0.0 {
        let mut lo = r_well;
        let mut shrink = r_well;
        loop {
            shrink *= 0.5;
            if t_r(shrink) < 0.0 {
                lo = shrink;
                break;
            }
            if shrink < 1e-300 {
                break;
            }
        }
        if t_r(lo) < 0.0 {
            bisect_root(&t_r, lo, r_well)
        } else {
            0.0 // e.g. l2 = 0 and V finite at the centre
        }
    } else {
        0.0
    };

    // outer turning point
    let mut hi = r_well;
    loop {
        hi *= 2.0;
        if t_r(hi) < 0.0 {
            break;
        }
        if hi > 1e8 {
            return Err(Error::NoOrbit(format!(
                "motion at E = {e} is unbounded (no outer turning point below 1e8)"
            )));
        }
    }
    let r_max = bisect_root(&t_r, hi, r_well);
    Ok((r_min, r_max))
}

// root of f between a (f < 0) and b (f > 0), bisection to ~1e-13 relative
fn bisect_root(f: &impl Fn(f64) -> f64, mut neg: f64, mut pos: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (neg + pos);
        if f(mid) < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
        if (neg - pos).abs() < 1e-13 * pos.abs().max(1e-30) {
            break;
        }
    }
    0.5 * (neg + pos)
}

/// Time average of g(r) over one radial period.
pub fn period_average(orbit: &ClassicalOrbit, g: impl Fn(f64) -> f64) -> Result<f64> {
    if orbit.circular {
        return Ok(g(orbit.r_min));
    }
    let num = orbit.integrate(&g)?;
    let den = 0.5 * orbit.period;
    Ok(num / den)
}

/// Residual of the classical generalized virial relation
/// `<(1/f) d(f^2 T_r)/dr> = <2 f' T_r + f T_r'> = 0`.
pub fn classical_virial_residual(
    orbit: &ClassicalOrbit,
    probe: &ProbeFunction,
) -> Result<RelationReport> {
    let lhs = if orbit.circular {
        // T_r = 0 and T_r' = 0 at the circular radius: identically zero
        0.0
    } else {
        let grad = |r: f64| orbit.radial_kinetic_gradient(r).unwrap_or(f64::NAN);
        let avg = period_average(orbit, |r| {
            2.0 * probe.eval_d1(r) * orbit.radial_kinetic(r) + probe.eval(r) * grad(r)
        })?;
        if !avg.is_finite() {
            return Err(Error::Quadrature("potential gradient failed inside orbit".into()));
        }
        avg
    };
    let scale = if orbit.circular {
        1.0
    } else {
        period_average(orbit, |r| {
            (2.0 * probe.eval_d1(r) * orbit.radial_kinetic(r)).abs()
        })?
        .max(1.0)
    };
    Ok(RelationReport {
        relation_id: format!("classical f={:?}", probe),
        lhs,
        rhs: 0.0,
        residual: lhs,
        relative_residual: lhs.abs() / scale,
        boundary_active: false,
        flagged: false,
        quadrature_err: 0.0,
        n: 0,
        l1: 0,
        n_dim: 3,
        eps: orbit.e,
        potential: orbit.potential.description.clone(),
    })
}

/// Quantum-versus-classical comparison for one probe.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    /// `<(1/f) d(f^2 T_r)/d rho>` over the quantum state (T_r = -Q/2).
    pub quantum_lhs: f64,
    /// The same bracket averaged over the classical orbit (zero in exact
    /// arithmetic).
    pub classical_lhs: f64,
    /// `-<f'''>/4` over the quantum state: the term classical mechanics
    /// does not produce.
    pub predicted_gap: f64,
    /// quantum_lhs - classical_lhs - predicted_gap.
    pub identity_residual: f64,
}

/// Compare the quantum and classical generalized virial relations on matched
/// (E, l^2) data. The orbit must carry E = eps and l^2 = l(l+1).
pub fn quantum_classical_gap(
    s: &Eigenstate,
    orbit: &ClassicalOrbit,
    probe: &ProbeFunction,
) -> Result<GapReport> {
    if s.dim.n_dim != 3 {
        return Err(Error::Domain("the comparison is stated in three dimensions".into()));
    }
    let ll = (s.dim.l1 * (s.dim.l1 + 1)) as f64;
    if (orbit.e - s.eps).abs() > 1e-9 * (1.0 + s.eps.abs()) || (orbit.l2 - ll).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "orbit (E = {}, l2 = {}) does not match the state (eps = {}, l(l+1) = {ll})",
            orbit.e, orbit.l2, s.eps
        )));
    }
    // quantum side: T_r = -Q/2, so <(1/f) d(f^2 T_r)/d rho> = -<(1/f) d(f^2 Q)/d rho>/2
    let quantum_lhs = -0.5 * q_form_average(s, probe)?;
    let classical_lhs = classical_virial_residual(orbit, probe)?.lhs;
    let f3 = match probe {
        ProbeFunction::Power { j } => {
            let j = *j;
            let third =
                move |rho: f64| j * (j - 1.0) * (j - 2.0) * rho.powf(j - 3.0);
            expect(s, third, "f'''")?.value
        }
        ProbeFunction::Custom { f3, .. } => {
            let f3 = f3
                .as_ref()
                .ok_or_else(|| Error::Domain("probe supplies no third derivative".into()))?;
            expect(s, |rho| f3(rho), "f'''")?.value
        }
    };
    let predicted_gap = -0.25 * f3;
    Ok(GapReport {
        quantum_lhs,
        classical_lhs,
        predicted_gap,
        identity_residual: quantum_lhs - classical_lhs - predicted_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_coulomb, make_custom};
    use crate::radial::{exact_linear_l0, exact_oscillator_l0, Grid};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn kepler() -> ScaledPotential {
        make_coulomb(1.0).unwrap()
    }

    #[test]
    fn kepler_turning_points_by_quadratic_formula() {
        let (r_min, r_max) = find_turning_points(&kepler(), -0.5, 0.5).unwrap();
        let half_sqrt2 = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(r_min, 1.0 - half_sqrt2, epsilon = 1e-10);
        assert_abs_diff_eq!(r_max, 1.0 + half_sqrt2, epsilon = 1e-10);
        // the turning points are roots of the radial kinetic energy
        let orbit = ClassicalOrbit::new(&kepler(), -0.5, 0.5).unwrap();
        assert!(orbit.radial_kinetic(r_min).abs() < 1e-10);
        assert!(orbit.radial_kinetic(r_max).abs() < 1e-10);
    }

    #[test]
    fn circular_orbit_detected() {
        // Kepler with l^2 = 1 at E = -1/2 sits exactly at the minimum
        let orbit = ClassicalOrbit::new(&kepler(), -0.5, 1.0).unwrap();
        assert!(orbit.circular);
        assert_abs_diff_eq!(orbit.r_min, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(orbit.r_max, orbit.r_min);
        // averages are point evaluations
        assert_abs_diff_eq!(period_average(&orbit, |r| r * r).unwrap(), orbit.r_min.powi(2));
        // residual vanishes identically for any probe
        let rep = classical_virial_residual(&orbit, &ProbeFunction::power(5.0)).unwrap();
        assert_eq!(rep.lhs, 0.0);
    }

    #[test]
    fn oscillator_l2_zero_turning_points() {
        let p = ScaledPotential::oscillator();
        let (r_min, r_max) = find_turning_points(&p, 1.5, 0.0).unwrap();
        assert_eq!(r_min, 0.0);
        assert_abs_diff_eq!(r_max, 3f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn unbound_or_forbidden_energies_are_errors() {
        assert!(matches!(
            find_turning_points(&kepler(), 0.1, 0.5),
            Err(Error::NoOrbit(_))
        ));
        assert!(matches!(
            find_turning_points(&kepler(), -5.0, 1.0),
            Err(Error::NoOrbit(_))
        ));
    }

    #[test]
    fn kepler_time_averages() {
        let orbit = ClassicalOrbit::new(&kepler(), -0.5, 0.5).unwrap();
        assert_abs_diff_eq!(period_average(&orbit, |_| 1.0).unwrap(), 1.0, epsilon = 1e-12);
        // <T> = T_r + l^2/2r^2 averages to -E = 1/2; <V> = 2E = -1
        let t = period_average(&orbit, |r| {
            orbit.radial_kinetic(r) + orbit.l2 / (2.0 * r * r)
        })
        .unwrap();
        assert_abs_diff_eq!(t, 0.5, epsilon = 1e-8);
        let v = period_average(&orbit, |r| -1.0 / r).unwrap();
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-8);
        // Kepler radial period at a = 1 is 2 pi
        assert_abs_diff_eq!(orbit.period, 2.0 * std::f64::consts::PI, epsilon = 1e-7);
    }

    #[test]
    fn classical_relation_holds_for_polynomial_probes() {
        let cases = [
            (kepler(), -0.5, 0.5),
            (ScaledPotential::oscillator(), 1.5, 0.5),
            (ScaledPotential::linear(), 1.5, 0.5),
        ];
        for (p, e, l2) in cases {
            let orbit = ClassicalOrbit::new(&p, e, l2).unwrap();
            for j in 1..=4 {
                let rep =
                    classical_virial_residual(&orbit, &ProbeFunction::power(j as f64)).unwrap();
                assert!(
                    rep.relative_residual < 1e-6,
                    "{} f=r^{j}: {}",
                    p.description,
                    rep.relative_residual
                );
            }
        }
        // the standard virial (f = r) on the Kepler orbit holds to 1e-8
        let orbit = ClassicalOrbit::new(&kepler(), -0.5, 0.5).unwrap();
        let rep = classical_virial_residual(&orbit, &ProbeFunction::power(1.0)).unwrap();
        assert!(rep.lhs.abs() < 1e-8, "Kepler virial: {}", rep.lhs);
    }

    #[test]
    fn standard_virial_two_t_equals_r_grad_v() {
        for (p, e, l2) in [
            (kepler(), -0.4, 0.3),
            (ScaledPotential::oscillator(), 2.5, 1.2),
            (ScaledPotential::oscillator(), 4.0, 0.2),
        ] {
            let orbit = ClassicalOrbit::new(&p, e, l2).unwrap();
            let t = period_average(&orbit, |r| {
                orbit.radial_kinetic(r) + orbit.l2 / (2.0 * r * r)
            })
            .unwrap();
            let rv = period_average(&orbit, |r| r * p.derivative(r, 1).unwrap()).unwrap();
            assert!(
                (2.0 * t - rv).abs() < 1e-6,
                "{}: 2<T> = {} vs <r V'> = {}",
                p.description,
                2.0 * t,
                rv
            );
        }
    }

    #[test]
    fn period_is_stable_under_node_doubling() {
        let p = kepler();
        let coarse = ClassicalOrbit::with_nodes(&p, -0.5, 0.5, 2048).unwrap();
        let fine = ClassicalOrbit::with_nodes(&p, -0.5, 0.5, 4096).unwrap();
        assert!(
            ((coarse.period - fine.period) / fine.period).abs() < 1e-8,
            "{} vs {}",
            coarse.period,
            fine.period
        );
    }

    #[test]
    fn quantum_classical_gap_closes() {
        // oscillator ground state, f = rho^3: the quantum side carries
        // -<f'''>/4 = -3/2 that classical mechanics does not produce
        let s = exact_oscillator_l0(0, Grid::new(1e-3, 14.0).unwrap()).unwrap();
        let orbit = ClassicalOrbit::new(&s.potential.clone(), s.eps, 0.0).unwrap();
        let gap = quantum_classical_gap(&s, &orbit, &ProbeFunction::power(3.0)).unwrap();
        assert_abs_diff_eq!(gap.predicted_gap, -1.5, epsilon = 1e-7);
        assert!(gap.identity_residual.abs() < 1e-6, "{gap:?}");
        assert!(gap.classical_lhs.abs() < 1e-6);
        assert_abs_diff_eq!(gap.quantum_lhs, -1.5, epsilon = 1e-6);
        // f = rho and rho^2 have no third derivative: gap is zero
        for j in [1.0, 2.0] {
            let gap = quantum_classical_gap(&s, &orbit, &ProbeFunction::power(j)).unwrap();
            assert_abs_diff_eq!(gap.predicted_gap, 0.0, epsilon = 1e-12);
            assert!(gap.identity_residual.abs() < 1e-6, "j={j}: {gap:?}");
        }
        // linear ground state
        let s = exact_linear_l0(1, Grid::new(1e-3, 16.0).unwrap()).unwrap();
        let orbit = ClassicalOrbit::new(&s.potential.clone(), s.eps, 0.0).unwrap();
        let gap = quantum_classical_gap(&s, &orbit, &ProbeFunction::power(3.0)).unwrap();
        assert!(gap.identity_residual.abs() < 1e-6, "{gap:?}");
    }

    #[test]
    fn gap_requires_matching_orbit_and_third_derivative() {
        let s = exact_oscillator_l0(0, Grid::new(1e-3, 14.0).unwrap()).unwrap();
        let wrong = ClassicalOrbit::new(&s.potential.clone(), 2.0, 0.0).unwrap();
        assert!(quantum_classical_gap(&s, &wrong, &ProbeFunction::power(3.0)).is_err());
        let orbit = ClassicalOrbit::new(&s.potential.clone(), s.eps, 0.0).unwrap();
        let no3 = ProbeFunction::Custom {
            f: Arc::new(|r: f64| r * r * r),
            f1: Arc::new(|r: f64| 3.0 * r * r),
            f2: Arc::new(|r: f64| 6.0 * r),
            f3: None,
            q: 3.0,
            b: 1.0,
        };
        assert!(quantum_classical_gap(&s, &orbit, &no3).is_err());
    }

    #[test]
    fn custom_potential_orbit() {
        // quartic well via the Custom kind
        let p = make_custom(
            "quartic",
            Arc::new(|r: f64| 0.25 * r.powi(4)),
            Arc::new(|r: f64| r.powi(3)),
            Arc::new(|r: f64| 3.0 * r * r),
            Some(Arc::new(|r: f64| 6.0 * r)),
        );
        let orbit = ClassicalOrbit::new(&p, 2.0, 0.4).unwrap();
        let rep = classical_virial_residual(&orbit, &ProbeFunction::power(2.0)).unwrap();
        assert!(rep.relative_residual < 1e-6, "{rep:?}");
    }

    #[test]
    fn orbit_summary_serializes() {
        let orbit = ClassicalOrbit::new(&kepler(), -0.5, 0.5).unwrap();
        let v = orbit.summary_json();
        assert_abs_diff_eq!(v["E"].as_f64().unwrap(), -0.5);
        assert!(v["period"].as_f64().unwrap() > 6.0);
    }
}
