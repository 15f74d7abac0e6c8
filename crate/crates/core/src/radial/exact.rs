//! Closed-form radial states used as oracles: oscillator l = 0 (odd Hermite),
//! linear l = 0 (shifted Airy) and hydrogenic Coulomb states.

use super::{differentiate, DimensionConfig, Eigenstate, Grid};
use crate::error::{Error, Result};
use crate::potentials::ScaledPotential;
use crate::quad::simpson;
use crate::specfun::{airy, airy_zero, hermite, laguerre};

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

struct ClosedForm {
    dim: DimensionConfig,
    n_nodes: u32,
    eps: f64,
    c2: f64,
    potential: ScaledPotential,
}

fn finish(form: ClosedForm, grid: Grid, r: Vec<f64>, rdot: Vec<f64>) -> Result<Eigenstate> {
    let p_vals: Vec<f64> = r.iter().map(|y| y * y).collect();
    let expo = form.dim.p_origin_exponent();
    let norm_residual =
        (simpson(grid.h(), &p_vals)? + p_vals[0] * grid.h() / (expo + 1.0) - 1.0).abs();
    Ok(Eigenstate {
        dim: form.dim,
        n: form.n_nodes,
        eps: form.eps,
        grid,
        r,
        rdot,
        c2: form.c2,
        norm_residual,
        c2_fit_warning: false,
        potential: form.potential,
    })
}

/// Oscillator l = 0 state built from the odd Hermite polynomial H_{2n+1}:
/// `R_{n0} = pi^{-1/4} (2^{2n} (2n+1)!)^{-1/2} e^{-rho^2/2} H_{2n+1}(rho)`,
/// eps = (4n+3)/2.
pub fn exact_oscillator_l0(n: u32, grid: Grid) -> Result<Eigenstate> {
    if n > 14 {
        return Err(Error::Domain("oscillator closed form capped at n = 14".into()));
    }
    let m = 2 * n + 1;
    let norm = std::f64::consts::PI.powf(-0.25) / (2f64.powi(2 * n as i32) * factorial(m)).sqrt();
    let mut r = Vec::with_capacity(grid.len());
    let mut rdot = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let rho = grid.rho(i);
        let gauss = (-0.5 * rho * rho).exp();
        let h = hermite(m, rho);
        r.push(norm * gauss * h);
        // d/drho [e^{-rho^2/2} H_m] = e^{-rho^2/2} (2m H_{m-1} - rho H_m)
        rdot.push(norm * gauss * (2.0 * m as f64 * hermite(m - 1, rho) - rho * h));
    }
    // slope at the origin from Lt H_{2n+1} = (-1)^n (2n+2)!/(n+1)! rho
    let slope = norm * factorial(2 * n + 2) / factorial(n + 1);
    let eps = (4.0 * n as f64 + 3.0) / 2.0;
    finish(
        ClosedForm {
            dim: DimensionConfig::three_d(0),
            n_nodes: n,
            eps,
            c2: slope * slope,
            potential: ScaledPotential::oscillator(),
        },
        grid,
        r,
        rdot,
    )
}

/// Linear-potential l = 0 state `R_{n0} = Ai(rho + Z_n)/Ai'(Z_n)` with unit
/// slope at the origin; eps = -Z_n/2. `n` starts at 1.
pub fn exact_linear_l0(n: u32, grid: Grid) -> Result<Eigenstate> {
    if n == 0 {
        return Err(Error::Domain("linear closed form needs n >= 1".into()));
    }
    let z = airy_zero(n)?;
    let aip = airy(z).1;
    let mut r = Vec::with_capacity(grid.len());
    let mut rdot = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (ai, ai1) = airy(grid.rho(i) + z);
        r.push(ai / aip);
        rdot.push(ai1 / aip);
    }
    finish(
        ClosedForm {
            dim: DimensionConfig::three_d(0),
            n_nodes: n - 1,
            eps: -z / 2.0,
            c2: 1.0,
            potential: ScaledPotential::linear(),
        },
        grid,
        r,
        rdot,
    )
}

/// Hydrogenic state for v = -1/rho:
/// `R = N rho^{l+1} e^{-rho/n} L_{n-l-1}^{(2l+1)}(2 rho/n)`, eps = -1/(2n^2).
pub fn exact_coulomb(n_princ: u32, l: u32, grid: Grid) -> Result<Eigenstate> {
    if n_princ == 0 || l >= n_princ {
        return Err(Error::Domain(format!(
            "coulomb state needs 0 <= l < n, got n = {n_princ}, l = {l}"
        )));
    }
    if n_princ > 12 {
        return Err(Error::Domain("coulomb closed form capped at n = 12".into()));
    }
    let nf = n_princ as f64;
    let k = n_princ - l - 1;
    let alpha = (2 * l + 1) as f64;
    // 1 / [ (n/2)^{2l+3} (n+l)!/(n-l-1)! 2n ]
    let norm_sq = 1.0
        / ((nf / 2.0).powi(2 * l as i32 + 3) * factorial(n_princ + l) / factorial(k) * 2.0 * nf);
    let norm = norm_sq.sqrt();
    let r: Vec<f64> = (0..grid.len())
        .map(|i| {
            let rho = grid.rho(i);
            norm * rho.powi(l as i32 + 1) * (-rho / nf).exp() * laguerre(k, alpha, 2.0 * rho / nf)
        })
        .collect();
    let rdot = differentiate(&r, grid.h());
    // C^2 = N^2 L_k^{(2l+1)}(0)^2 with L_k^{(a)}(0) = (k+a choose k)
    let l_at_zero = factorial(n_princ + l) / (factorial(k) * factorial(2 * l + 1));
    finish(
        ClosedForm {
            dim: DimensionConfig::three_d(l),
            n_nodes: k,
            eps: -0.5 / (nf * nf),
            c2: norm_sq * l_at_zero * l_at_zero,
            potential: ScaledPotential::coulomb_unit(),
        },
        grid,
        r,
        rdot,
    )
}
