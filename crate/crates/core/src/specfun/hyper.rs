//! Hyperspherical coordinates and the N-dimensional angular eigenfunctions
//! built from associated Gegenbauer polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::specfun::poly::assoc_gegenbauer;

/// Quantum numbers (l_1, ..., l_{N-1}) of an angular eigenfunction in N
/// dimensions. The chain must satisfy l_1 >= l_2 >= ... >= |l_{N-1}|; only
/// the last index (the phase index) may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularIndexSet {
    n_dim: u32,
    ls: Vec<i64>,
}

impl AngularIndexSet {
    pub fn new(n_dim: u32, ls: Vec<i64>) -> Result<Self> {
        if n_dim < 2 {
            return Err(Error::Domain("angular indices need N >= 2".into()));
        }
        if ls.len() != (n_dim - 1) as usize {
            return Err(Error::Domain(format!(
                "expected {} angular quantum numbers for N = {n_dim}, got {}",
                n_dim - 1,
                ls.len()
            )));
        }
        for (i, &l) in ls.iter().enumerate() {
            if i + 1 < ls.len() && l < 0 {
                return Err(Error::Domain(format!(
                    "l_{} must be non-negative, got {l}",
                    i + 1
                )));
            }
        }
        for i in 0..ls.len().saturating_sub(1) {
            let next = if i + 2 == ls.len() { ls[i + 1].abs() } else { ls[i + 1] };
            if next > ls[i] {
                return Err(Error::Domain(format!(
                    "index chain violated: |l_{}| = {} > l_{} = {}",
                    i + 2,
                    next,
                    i + 1,
                    ls[i]
                )));
            }
        }
        Ok(Self { n_dim, ls })
    }

    pub fn n_dim(&self) -> u32 {
        self.n_dim
    }

    pub fn indices(&self) -> &[i64] {
        &self.ls
    }

    /// Eigenvalue lambda = l_1 (l_1 + N - 2) of the total angular operator.
    pub fn lambda(&self) -> f64 {
        let l1 = self.ls[0];
        (l1 * (l1 + self.n_dim as i64 - 2)) as f64
    }
}

/// Unnormalized angular eigenfunction
/// `Omega = exp(i l_{N-1} theta_{N-1}) prod_a F^{(N-1-a)}_{l_a, |l_{a+1}|}(cos theta_a)`.
///
/// With `normalized` set, the value is divided by the numerically integrated
/// norm over the (N-1)-sphere (recomputed per call; hoist
/// [`omega_norm_constant`] out of loops).
pub fn omega(idx: &AngularIndexSet, angles: &[f64], normalized: bool) -> Result<Complex64> {
    let n = idx.n_dim as usize;
    if angles.len() != n - 1 {
        return Err(Error::Domain(format!(
            "expected {} angles for N = {n}, got {}",
            n - 1,
            angles.len()
        )));
    }
    let phase_l = idx.ls[n - 2];
    let mut value = Complex64::from_polar(1.0, phase_l as f64 * angles[n - 2]);
    for a in 1..=n - 2 {
        let l = idx.ls[a - 1] as u32;
        let m = idx.ls[a].unsigned_abs() as u32;
        let j = (n - 1 - a) as u32;
        value *= assoc_gegenbauer(l, m, j, angles[a - 1].cos())?;
    }
    if normalized {
        value *= omega_norm_constant(idx)?;
    }
    Ok(value)
}

/// 1/sqrt(integral of |Omega|^2) over the (N-1)-sphere, via tensor-product
/// Gauss-Legendre in cos(theta_a) (the azimuthal factor integrates to 2*pi
/// exactly). N is capped at 6; the quadrature cost grows too fast beyond.
pub fn omega_norm_constant(idx: &AngularIndexSet) -> Result<f64> {
    let n = idx.n_dim as usize;
    if n > 6 {
        return Err(Error::Domain("omega normalization capped at N = 6".into()));
    }
    let mut norm_sq = 2.0 * std::f64::consts::PI;
    // the (1-z^2)^{1/2}-type measure factors limit Gauss-Legendre to
    // algebraic convergence ~ n^-3; 2000 nodes keep the error near 1e-10
    let (nodes, weights) = gauss_legendre(2000);
    for a in 1..=n - 2 {
        let l = idx.ls[a - 1] as u32;
        let m = idx.ls[a].unsigned_abs() as u32;
        let j = (n - 1 - a) as u32;
        let weight_pow = (n as f64 - 2.0 - a as f64) / 2.0;
        let mut acc = 0.0;
        for (&z, &w) in nodes.iter().zip(&weights) {
            let f = assoc_gegenbauer(l, m, j, z)?;
            acc += w * f * f * (1.0 - z * z).powf(weight_pow);
        }
        norm_sq *= acc;
    }
    Ok(1.0 / norm_sq.sqrt())
}

/// Map N-dimensional spherical coordinates (r, theta_1..theta_{N-1}) to
/// cartesian (x_1..x_N).
pub fn spherical_to_cartesian(n_dim: u32, r: f64, angles: &[f64]) -> Result<Vec<f64>> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let n = n_dim as usize;
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if angles.len() != n - 1 {
        return Err(Error::Domain(format!(
            "expected {} angles for N = {n}, got {}",
            n - 1,
            angles.len()
        )));
    }
    let mut xs = Vec::with_capacity(n);
    let mut sin_prod = r;
    for &theta in angles {
        xs.push(sin_prod * theta.cos());
        sin_prod *= theta.sin();
    }
    xs.push(sin_prod);
    Ok(xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn idx4(ls: [i64; 3]) -> AngularIndexSet {
        AngularIndexSet::new(4, ls.to_vec()).unwrap()
    }

    #[test]
    fn index_chain_validation() {
        assert!(AngularIndexSet::new(4, vec![1, 0, 0]).is_ok());
        assert!(AngularIndexSet::new(4, vec![1, 1, -1]).is_ok());
        // middle index above its predecessor
        assert!(AngularIndexSet::new(4, vec![1, 2, 0]).is_err());
        // negative non-final index
        assert!(AngularIndexSet::new(4, vec![2, -1, 0]).is_err());
        // wrong index count
        assert!(AngularIndexSet::new(4, vec![0, 0]).is_err());
        assert_abs_diff_eq!(
            AngularIndexSet::new(5, vec![2, 1, 0, 0]).unwrap().lambda(),
            10.0
        );
    }

    #[test]
    fn four_dim_constant_state_matches_closed_form() {
        let idx = idx4([0, 0, 0]);
        let v = omega(&idx, &[0.4, 1.1, 2.0], true).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / (PI * 2f64.sqrt()), epsilon = 1e-9);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn four_dim_first_excited_matches_closed_form() {
        let idx = idx4([1, 0, 0]);
        // value sqrt(2)/pi * cos(theta1) at theta1 = 0
        let v = omega(&idx, &[0.0, 0.7, 0.3], true).unwrap();
        assert_abs_diff_eq!(v.re, 2f64.sqrt() / PI, epsilon = 1e-9);
        // and proportional to cos(theta1)
        let v2 = omega(&idx, &[1.0, 0.7, 0.3], true).unwrap();
        assert_abs_diff_eq!(v2.re, 2f64.sqrt() / PI * 1f64.cos(), epsilon = 1e-9);
    }

    #[test]
    fn three_dim_reduces_to_spherical_harmonic_shape() {
        // (l1, l2) = (1, 0): |Omega| proportional to cos(thetaated1)
        let idx = AngularIndexSet::new(3, vec![1, 0]).unwrap();
        let a = omega(&idx, &[0.3, 0.0], false).unwrap().norm();
        let b = omega(&idx, &[1.2, 0.0], false).unwrap().norm();
        assert_abs_diff_eq!(a / b, (0.3f64.cos() / 1.2f64.cos()).abs(), epsilon = 1e-12);
    }

    #[test]
    fn four_dim_states_are_orthonormal() {
        // tensor-product quadrature over the 3-sphere for the four appendix
        // states; the Gram matrix must be the identity. The angular tables
        // are precomputed per state, then every pair is contracted over the
        // same (z1, z2, phi) tensor grid.
        let states = [idx4([0, 0, 0]), idx4([1, 0, 0]), idx4([1, 1, 0]), idx4([1, 1, 1])];
        let consts: Vec<f64> = states
            .iter()
            .map(|s| omega_norm_constant(s).unwrap())
            .collect();
        let (nodes, weights) = gauss_legendre(240);
        let n_phi = 16;
        let nz = nodes.len();
        // angular part (phi-independent) per state on the (z1, z2) grid
        let mut tables = vec![vec![0.0f64; nz * nz]; states.len()];
        for (s, table) in states.iter().zip(tables.iter_mut()) {
            for (i1, &z1) in nodes.iter().enumerate() {
                for (i2, &z2) in nodes.iter().enumerate() {
                    let v = omega(s, &[z1.acos(), z2.acos(), 0.0], false).unwrap();
                    table[i1 * nz + i2] = v.re; // phi = 0 makes it real
                }
            }
        }
        for i in 0..states.len() {
            for j in i..states.len() {
                // numeric phi loop (trapezoid on the periodic factor)
                let dl = (states[j].indices()[2] - states[i].indices()[2]) as f64;
                let mut phi_int = Complex64::new(0.0, 0.0);
                for p in 0..n_phi {
                    let phi = 2.0 * PI * p as f64 / n_phi as f64;
                    phi_int += Complex64::from_polar(1.0, dl * phi);
                }
                phi_int *= 2.0 * PI / n_phi as f64;
                let mut angular = 0.0;
                for (i1, (&z1, &w1)) in nodes.iter().zip(&weights).enumerate() {
                    let m1 = w1 * (1.0 - z1 * z1).sqrt();
                    for (i2, &w2) in weights.iter().enumerate() {
                        angular +=
                            m1 * w2 * tables[i][i1 * nz + i2] * tables[j][i1 * nz + i2];
                    }
                }
                let overlap = phi_int * angular * consts[i] * consts[j];
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(overlap.re, expected, epsilon = 1e-6);
                assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn invalid_chain_is_rejected_by_omega() {
        assert!(AngularIndexSet::new(4, vec![0, 1, 0]).is_err());
    }

    #[test]
    fn cartesian_map_known_points() {
        let v = spherical_to_cartesian(3, 1.0, &[PI / 2.0, 0.0]).unwrap();
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], 0.0, epsilon = 1e-15);
        // theta1 = 0 collapses everything onto x1
        let v = spherical_to_cartesian(4, 2.5, &[0.0, 1.1, 0.4]).unwrap();
        assert_abs_diff_eq!(v[0], 2.5, epsilon = 1e-15);
        for x in &v[1..] {
            assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cartesian_map_preserves_radius() {
        for (n_dim, angles) in [
            (2u32, vec![1.9]),
            (3, vec![0.7, 4.0]),
            (5, vec![0.3, 2.2, 1.0, 5.5]),
        ] {
            let r = 1.7;
            let xs = spherical_to_cartesian(n_dim, r, &angles).unwrap();
            let r2: f64 = xs.iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(r2, r * r, epsilon = 1e-12);
        }
    }
}
