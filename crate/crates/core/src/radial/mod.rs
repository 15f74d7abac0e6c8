//! Bound states of `R'' = Q R` in N dimensions by Numerov shooting.
//!
//! The radial coefficient is `Q = 2(v - eps) + K(K-1)/rho^2` with
//! `K = l1 + (N-1)/2`, so one code path covers every dimension. Trial
//! energies are bracketed by node counting and refined by bisection on the
//! derivative mismatch at the outermost classical turning point.

mod exact;

pub use exact::{exact_coulomb, exact_linear_l0, exact_oscillator_l0};

use std::path::Path;

use serde_json::json;

use crate::error::{Error, Result};
use crate::potentials::{PotentialKind, ScaledPotential};
use crate::quad::simpson;

/// Dimension N >= 1 and leading angular quantum number l1 (equal to l for
/// N = 2, 3 and forced to 0 for N = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionConfig {
    pub n_dim: u32,
    pub l1: u32,
}

impl DimensionConfig {
    pub fn new(n_dim: u32, l1: u32) -> Result<Self> {
        if n_dim == 0 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        if n_dim == 1 && l1 != 0 {
            return Err(Error::Domain("N = 1 forces l1 = 0".into()));
        }
        Ok(Self { n_dim, l1 })
    }

    pub fn three_d(l: u32) -> Self {
        Self { n_dim: 3, l1: l }
    }

    /// K = l1 + (N-1)/2.
    pub fn k_exponent(&self) -> f64 {
        self.l1 as f64 + (self.n_dim as f64 - 1.0) / 2.0
    }

    /// K(K-1), evaluated exactly as (2l1+N-1)(2l1+N-3)/4. This is the
    /// centrifugal strength in Q; it reduces to 0 for N = 1, to
    /// (4l^2-1)/4 for N = 2 and to l(l+1) for N = 3.
    pub fn centrifugal_strength(&self) -> f64 {
        let a = 2 * self.l1 as i64 + self.n_dim as i64 - 1;
        let b = 2 * self.l1 as i64 + self.n_dim as i64 - 3;
        (a * b) as f64 / 4.0
    }

    /// Small-rho exponent of P = R^2: P ~ C rho^{2l1 + N - 1}.
    pub fn p_origin_exponent(&self) -> f64 {
        (2 * self.l1 as i64 + self.n_dim as i64 - 1) as f64
    }

    /// Threshold probe exponent q0 = -(2 l1 + N - 3) below which the
    /// generalized relation stops converging.
    pub fn boundary_exponent(&self) -> f64 {
        -(2.0 * self.l1 as f64 + self.n_dim as f64 - 3.0)
    }
}

/// Uniform radial grid: nodes at rho_i = h (i+1), i = 0..len. The node count
/// is kept odd so composite Simpson applies directly on [h, rho_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    h: f64,
    len: usize,
}

impl Grid {
    pub fn new(h: f64, rho_max: f64) -> Result<Self> {
        if !(h > 0.0) || !(rho_max > h) {
            return Err(Error::Domain(format!(
                "grid needs 0 < h < rho_max, got h = {h}, rho_max = {rho_max}"
            )));
        }
        let mut len = (rho_max / h).ceil() as usize;
        if len % 2 == 0 {
            len += 1;
        }
        if len < 65 {
            return Err(Error::Domain(format!(
                "grid too coarse: {len} nodes (need >= 65)"
            )));
        }
        Ok(Self { h, len })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.h * (i + 1) as f64
    }

    pub fn rho_max(&self) -> f64 {
        self.h * self.len as f64
    }
}

/// One normalized radial bound state.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub dim: DimensionConfig,
    /// Radial node count.
    pub n: u32,
    /// Scaled energy.
    pub eps: f64,
    pub grid: Grid,
    /// R on the grid.
    pub r: Vec<f64>,
    /// dR/drho on the grid.
    pub rdot: Vec<f64>,
    /// Origin coefficient: P -> c2 * rho^{2l1+N-1} as rho -> 0.
    pub c2: f64,
    /// |quadrature(P) - 1| at construction time.
    pub norm_residual: f64,
    /// Set when the origin-coefficient fit scattered beyond its threshold.
    pub c2_fit_warning: bool,
    pub potential: ScaledPotential,
}

impl Eigenstate {
    pub fn p(&self, i: usize) -> f64 {
        self.r[i] * self.r[i]
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.grid.rho(i)
    }

    pub fn l1(&self) -> u32 {
        self.dim.l1
    }

    /// CSV export with columns rho, R, Rdot (shortest round-trip decimals).
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "rho,R,Rdot")?;
        for i in 0..self.r.len() {
            writeln!(out, "{},{},{}", self.rho(i), self.r[i], self.rdot[i])?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> std::io::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        json!({
            "N": self.dim.n_dim,
            "l1": self.dim.l1,
            "n": self.n,
            "eps": self.eps,
            "C2": self.c2,
            "norm_residual": self.norm_residual,
            "c2_fit_warning": self.c2_fit_warning,
            "grid": {"h": self.grid.h(), "nodes": self.grid.len(), "rho_max": self.grid.rho_max()},
            "potential": self.potential.description,
        })
    }
}

/// The coefficient Q_N(rho) = 2(v - eps) + K(K-1)/rho^2 of R'' = Q R.
///
/// The centrifugal term enters with a plus sign here (it raises Q and binds
/// the solution toward the origin); the angular operator itself has
/// eigenvalues of the opposite sign under the Laplacian splitting.
pub fn q_coefficient(p: &ScaledPotential, dim: DimensionConfig, eps: f64, rho: f64) -> f64 {
    2.0 * (p.value(rho) - eps) + dim.centrifugal_strength() / (rho * rho)
}

/// Origin coefficient of an eigenstate (extracted at construction).
pub fn origin_coefficient(state: &Eigenstate) -> f64 {
    state.c2
}

// How the outward integration is seeded near the origin.
#[derive(Debug, Clone, Copy)]
enum StartRule {
    /// Frobenius series R = rho^K (1 + sum a_k rho^k) with the potential's
    /// leading term v ~ vm rho^m (integer m >= -1).
    Series { vm: f64, m: i32 },
    /// Plain leading power (custom / fractional-exponent potentials).
    PurePower,
}

const SERIES_TERMS: usize = 8;
// Nodes filled from the series before Numerov takes over. Keeps the stepper
// away from the centrifugal singularity where h^2 Q / 12 is O(1).
const SERIES_NODES: usize = 8;

struct Shooter<'a> {
    potential: &'a ScaledPotential,
    grid: Grid,
    /// 2 v_i + centrifugal_i per node; q_i(eps) = base_i - 2 eps.
    base: Vec<f64>,
    start: StartRule,
    k: f64,
}

impl<'a> Shooter<'a> {
    fn new(potential: &'a ScaledPotential, dim: DimensionConfig, grid: Grid) -> Self {
        let cent = dim.centrifugal_strength();
        let base = (0..grid.len())
            .map(|i| {
                let rho = grid.rho(i);
                2.0 * potential.value(rho) + cent / (rho * rho)
            })
            .collect();
        let start = match &potential.kind {
            PotentialKind::PowerLaw { amplitude, exponent }
                if exponent.fract() == 0.0 && *exponent >= -1.0 =>
            {
                StartRule::Series { vm: 0.5 * amplitude, m: *exponent as i32 }
            }
            PotentialKind::Coulomb { strength } => StartRule::Series { vm: -strength, m: -1 },
            _ => StartRule::PurePower,
        };
        // N = 1 Coulomb has a logarithmic origin series; fall back.
        let start = if dim.k_exponent() == 0.0 && matches!(start, StartRule::Series { m: -1, .. })
        {
            StartRule::PurePower
        } else {
            start
        };
        Self { potential, grid, base, start, k: dim.k_exponent() }
    }

    fn q(&self, i: usize, eps: f64) -> f64 {
        self.base[i] - 2.0 * eps
    }

    fn series_coefficients(&self, eps: f64) -> [f64; SERIES_TERMS + 1] {
        let mut a = [0.0; SERIES_TERMS + 1];
        a[0] = 1.0;
        if let StartRule::Series { vm, m } = self.start {
            for k in 1..=SERIES_TERMS {
                let mut rhs = 0.0;
                if k >= 2 {
                    rhs += -2.0 * eps * a[k - 2];
                }
                let idx = k as i64 - m as i64 - 2;
                if (0..=SERIES_TERMS as i64).contains(&idx) && idx < k as i64 {
                    rhs += 2.0 * vm * a[idx as usize];
                }
                let denom = k as f64 * (2.0 * self.k + k as f64 - 1.0);
                a[k] = if denom.abs() < 1e-12 { 0.0 } else { rhs / denom };
            }
        }
        a
    }

    fn start_value(&self, rho: f64, eps: f64, coeffs: &[f64; SERIES_TERMS + 1]) -> f64 {
        match self.start {
            StartRule::Series { .. } => {
                let mut s = 0.0;
                for &c in coeffs.iter().rev() {
                    s = s * rho + c;
                }
                rho.powf(self.k) * s
            }
            StartRule::PurePower => {
                if self.k == 0.0 {
                    // even sector in one dimension: R ~ 1 + (v - eps) rho^2
                    1.0 + (self.potential.value(rho) - eps) * rho * rho
                } else {
                    rho.powf(self.k)
                }
            }
        }
    }

    fn start_nodes(&self) -> usize {
        match self.start {
            StartRule::Series { .. } => SERIES_NODES.min(self.grid.len() / 4),
            StartRule::PurePower => 2,
        }
    }

    /// Count sign changes of the outward solution across the whole grid.
    fn count_nodes(&self, eps: f64) -> usize {
        let h2 = self.grid.h() * self.grid.h();
        let coeffs = self.series_coefficients(eps);
        let i0 = self.start_nodes();
        let mut count = 0;
        let mut y_prev = self.start_value(self.grid.rho(i0 - 2), eps, &coeffs);
        let mut y = self.start_value(self.grid.rho(i0 - 1), eps, &coeffs);
        let mut t_prev = h2 * self.q(i0 - 2, eps) / 12.0;
        let mut t = h2 * self.q(i0 - 1, eps) / 12.0;
        for i in i0..self.grid.len() {
            let t_next = h2 * self.q(i, eps) / 12.0;
            let y_next = ((2.0 + 10.0 * t) * y - (1.0 - t_prev) * y_prev) / (1.0 - t_next);
            if y_next * y < 0.0 {
                count += 1;
            }
            y_prev = y;
            y = y_next;
            t_prev = t;
            t = t_next;
            if y.abs() > 1e250 {
                y *= 1e-200;
                y_prev *= 1e-200;
            }
        }
        count
    }

    /// Index of the outermost classical turning point (last node with
    /// Q <= 0), clipped so both integrations have working room.
    fn match_index(&self, eps: f64) -> Option<usize> {
        let mut m = None;
        for i in 0..self.grid.len() {
            if self.q(i, eps) <= 0.0 {
                m = Some(i);
            }
        }
        m.map(|i| i.clamp(self.start_nodes() + 2, self.grid.len() - 4))
    }

    /// Outward solution on nodes 0..=limit.
    fn integrate_outward(&self, eps: f64, limit: usize) -> Vec<f64> {
        let h2 = self.grid.h() * self.grid.h();
        let coeffs = self.series_coefficients(eps);
        let i0 = self.start_nodes();
        let mut y = vec![0.0; limit + 1];
        for (i, slot) in y.iter_mut().enumerate().take(i0.min(limit + 1)) {
            *slot = self.start_value(self.grid.rho(i), eps, &coeffs);
        }
        for i in i0..=limit {
            let t_next = h2 * self.q(i, eps) / 12.0;
            let t = h2 * self.q(i - 1, eps) / 12.0;
            let t_prev = h2 * self.q(i - 2, eps) / 12.0;
            y[i] = ((2.0 + 10.0 * t) * y[i - 1] - (1.0 - t_prev) * y[i - 2]) / (1.0 - t_next);
            if y[i].abs() > 1e250 {
                for v in y[..=i].iter_mut() {
                    *v *= 1e-200;
                }
            }
        }
        y
    }

    /// Inward solution stored on nodes from..len-1 (indexing matches the
    /// grid; entries below `from` are zero).
    fn integrate_inward(&self, eps: f64, from: usize) -> Vec<f64> {
        let n = self.grid.len();
        let h2 = self.grid.h() * self.grid.h();
        let mut y = vec![0.0; n];
        let kappa = self.q(n - 1, eps).max(0.0).sqrt();
        y[n - 1] = 1e-250;
        y[n - 2] = y[n - 1] * (kappa * self.grid.h()).exp().max(1.0 + 1e-8);
        for i in (from..=n - 3).rev() {
            let t_next = h2 * self.q(i, eps) / 12.0;
            let t = h2 * self.q(i + 1, eps) / 12.0;
            let t_prev = h2 * self.q(i + 2, eps) / 12.0;
            y[i] = ((2.0 + 10.0 * t) * y[i + 1] - (1.0 - t_prev) * y[i + 2]) / (1.0 - t_next);
            if y[i].abs() > 1e250 {
                for v in y[i..].iter_mut() {
                    *v *= 1e-200;
                }
            }
        }
        y
    }

    /// Scale-invariant derivative mismatch at the matching node. Changes sign
    /// exactly at an eigenvalue.
    fn mismatch(&self, eps: f64) -> Option<f64> {
        let m = self.match_index(eps)?;
        let out = self.integrate_outward(eps, m + 1);
        let inw = self.integrate_inward(eps, m - 1);
        let (yo, yi) = (out[m], inw[m]);
        if yo == 0.0 || yi == 0.0 {
            return None;
        }
        let h = self.grid.h();
        let dy_out = (out[m + 1] - out[m - 1]) / (2.0 * h);
        let dy_in = (inw[m + 1] - inw[m - 1]) / (2.0 * h);
        Some((dy_out * yi - dy_in * yo) / (yo.abs() * yi.abs()))
    }
}

/// Solve for the bound state with `n_nodes` radial nodes on the given grid.
///
/// Node-count bisection brackets the eigenvalue inside the energy window
/// spanned by the effective potential on the grid; bisection on the matching
/// derivative mismatch then refines it to `|d eps| <= tol`.
///
/// The grid stays fixed and uniform; eigenvalues converge as O(h^4) (see the
/// convergence test) down to a rounding floor near 1e-12. Even dimensions
/// put a half-integer power into R near the origin, which costs a few digits
/// there (N = 2 lands around 5e-6).
pub fn solve_eigenstate(
    potential: &ScaledPotential,
    dim: DimensionConfig,
    n_nodes: u32,
    grid: Grid,
    tol: f64,
) -> Result<Eigenstate> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let shooter = Shooter::new(potential, dim, grid);
    let target = n_nodes as usize;

    let v_eff = |i: usize| shooter.base[i] / 2.0; // v + K(K-1)/(2 rho^2)
    let mut lo = f64::INFINITY;
    for i in 0..grid.len() {
        lo = lo.min(v_eff(i));
    }
    let mut hi = v_eff(grid.len() - 1);
    lo -= 1.0;
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    if shooter.count_nodes(lo) > target {
        return Err(Error::NoBoundState(format!(
            "window floor already has more than {n_nodes} nodes"
        )));
    }
    if shooter.count_nodes(hi) < target + 1 {
        return Err(Error::NoBoundState(format!(
            "state with {n_nodes} nodes not bracketed below eps = {hi:.6}; \
             enlarge the grid or check that the potential binds"
        )));
    }

    // Phase 1: node-count bisection.
    let (mut a, mut b) = (lo, hi);
    for _ in 0..400 {
        if b - a <= (1e-4_f64).max(1e-4 * b.abs()) {
            break;
        }
        let mid = 0.5 * (a + b);
        if shooter.count_nodes(mid) > target {
            b = mid;
        } else {
            a = mid;
        }
    }

    // Phase 2: derivative-mismatch bisection. The loop runs all the way to
    // ulp-level width (well past the requested tolerance): stopping earlier
    // leaves a derivative kink at the matching node, and high-power probe
    // moments amplify that kink far above their quadrature error.
    let scale = |x: f64| tol.max(tol * x.abs());
    let (wa, wb) = (shooter.mismatch(a), shooter.mismatch(b));
    if let (Some(mut fa), Some(fb)) = (wa, wb) {
        if fa * fb < 0.0 {
            for _ in 0..120 {
                if b - a <= 2.0 * f64::EPSILON * b.abs() {
                    break;
                }
                let mid = 0.5 * (a + b);
                match shooter.mismatch(mid) {
                    Some(fm) if fa * fm <= 0.0 => b = mid,
                    Some(fm) => {
                        a = mid;
                        fa = fm;
                    }
                    None => break,
                }
            }
        }
    }
    // Fall back to node counting if the mismatch never bracketed.
    for _ in 0..400 {
        if b - a <= scale(b) {
            break;
        }
        let mid = 0.5 * (a + b);
        if shooter.count_nodes(mid) > target {
            b = mid;
        } else {
            a = mid;
        }
    }
    let eps = 0.5 * (a + b);
    if b - a > scale(b) * 4.0 {
        return Err(Error::NoConvergence(format!(
            "eigenvalue window [{a}, {b}] did not close to tolerance {tol}"
        )));
    }

    build_state(&shooter, potential, dim, n_nodes, grid, eps)
}

fn build_state(
    shooter: &Shooter,
    potential: &ScaledPotential,
    dim: DimensionConfig,
    n_nodes: u32,
    grid: Grid,
    eps: f64,
) -> Result<Eigenstate> {
    let mut m = shooter
        .match_index(eps)
        .ok_or_else(|| Error::NoBoundState("no classically allowed region".into()))?;
    let mut out = shooter.integrate_outward(eps, m + 1);
    let mut inw = shooter.integrate_inward(eps, m.saturating_sub(4));
    // avoid matching on a node of the wavefunction
    let in_peak = inw.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for _ in 0..3 {
        if inw[m].abs() > 1e-8 * in_peak && out[m].abs() > 0.0 {
            break;
        }
        m -= 1;
        out = shooter.integrate_outward(eps, m + 1);
        inw = shooter.integrate_inward(eps, m.saturating_sub(4));
    }
    let scale = out[m] / inw[m];
    let mut r: Vec<f64> = (0..grid.len())
        .map(|i| if i <= m { out[i] } else { inw[i] * scale })
        .collect();

    let nodes_found = count_sign_changes(&r);
    if nodes_found != n_nodes as usize {
        return Err(Error::NoConvergence(format!(
            "converged state has {nodes_found} nodes, wanted {n_nodes}"
        )));
    }

    // Normalize: Simpson over [h, rho_max] plus the analytic [0, h] sliver.
    let p_vals: Vec<f64> = r.iter().map(|y| y * y).collect();
    let expo = dim.p_origin_exponent();
    let norm_sq = simpson(grid.h(), &p_vals)? + p_vals[0] * grid.h() / (expo + 1.0);
    if !(norm_sq > 0.0) {
        return Err(Error::NoConvergence("normalization integral vanished".into()));
    }
    let inv = 1.0 / norm_sq.sqrt();
    for y in r.iter_mut() {
        *y *= inv;
    }

    let rdot = differentiate(&r, grid.h());
    let (c2, c2_fit_warning) = fit_origin_coefficient(shooter, &r, grid, eps, dim);

    let p_vals: Vec<f64> = r.iter().map(|y| y * y).collect();
    let norm_resid =
        (simpson(grid.h(), &p_vals)? + p_vals[0] * grid.h() / (expo + 1.0) - 1.0).abs();

    Ok(Eigenstate {
        dim,
        n: n_nodes,
        eps,
        grid,
        r,
        rdot,
        c2,
        norm_residual: norm_resid,
        c2_fit_warning,
        potential: potential.clone(),
    })
}

/// Least-squares extraction of the origin coefficient over the first grid
/// decade with the exponent pinned to 2l1 + N - 1.
///
/// For potentials with a Frobenius start the ODE-consistent subleading
/// factor S(rho)^2 is divided out first, which removes the O(rho) bias that a
/// bare power-law fit would pick up.
fn fit_origin_coefficient(
    shooter: &Shooter,
    r: &[f64],
    grid: Grid,
    eps: f64,
    dim: DimensionConfig,
) -> (f64, bool) {
    let expo = dim.p_origin_exponent();
    let take = 10.min(r.len());
    match shooter.start {
        StartRule::Series { .. } => {
            let coeffs = shooter.series_coefficients(eps);
            let mut acc = 0.0;
            let mut vals = Vec::with_capacity(take);
            for (i, &ri) in r.iter().enumerate().take(take) {
                let rho = grid.rho(i);
                let mut s = 0.0;
                for &c in coeffs.iter().rev() {
                    s = s * rho + c;
                }
                let model = rho.powf(expo) * s * s;
                let c = ri * ri / model;
                acc += c.ln();
                vals.push(c);
            }
            let c2 = (acc / take as f64).exp();
            let scatter = vals
                .iter()
                .map(|c| (c / c2 - 1.0).abs())
                .fold(0.0f64, f64::max);
            (c2, scatter > 1e-4)
        }
        StartRule::PurePower => {
            // cubic least squares on y = P / rho^expo over a wider window
            let take = 30.min(r.len());
            let ys: Vec<f64> = (0..take)
                .map(|i| r[i] * r[i] / grid.rho(i).powf(expo))
                .collect();
            let xs: Vec<f64> = (0..take).map(|i| grid.rho(i)).collect();
            let c2 = polyfit_intercept(&xs, &ys, 3);
            let scatter = ys
                .iter()
                .map(|y| (y / c2 - 1.0).abs())
                .fold(0.0f64, f64::max);
            (c2, scatter > 0.05)
        }
    }
}

// Intercept of a least-squares polynomial of the given degree.
fn polyfit_intercept(xs: &[f64], ys: &[f64], degree: usize) -> f64 {
    let n = degree + 1;
    let x_scale = xs.iter().cloned().fold(0.0f64, f64::max);
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (&x, &y) in xs.iter().zip(ys) {
        let t = x / x_scale;
        let mut pow = [0.0; 8];
        let mut v = 1.0;
        for p in pow.iter_mut().take(n) {
            *p = v;
            v *= t;
        }
        for i in 0..n {
            for j in 0..n {
                ata[i][j] += pow[i] * pow[j];
            }
            atb[i] += pow[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if ata[row][col].abs() > ata[piv][col].abs() {
                piv = row;
            }
        }
        ata.swap(col, piv);
        atb.swap(col, piv);
        let d = ata[col][col];
        for row in col + 1..n {
            let f = ata[row][col] / d;
            let pivot_row = ata[col].clone();
            for (dst, src) in ata[row][col..n].iter_mut().zip(&pivot_row[col..n]) {
                *dst -= f * src;
            }
            atb[row] -= f * atb[col];
        }
    }
    for col in (0..n).rev() {
        for k in col + 1..n {
            atb[col] -= ata[col][k] * atb[k];
        }
        atb[col] /= ata[col][col];
    }
    atb[0]
}

/// Count interior sign changes, treating exact zeros as part of the crossing
/// they sit on rather than as separators.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// Fourth-order finite-difference derivative on a uniform grid.
pub(crate) fn differentiate(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut d = vec![0.0; n];
    if n < 5 {
        for i in 0..n.saturating_sub(1) {
            d[i] = (y[i + 1] - y[i]) / h;
        }
        return d;
    }
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    for i in 2..n - 2 {
        d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
    }
    d[n - 2] =
        (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5])
            / (12.0 * h);
    d[n - 1] =
        (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5])
            / (12.0 * h);
    d
}

/// Solve with an automatically sized grid: rho_max = outer turning point plus
/// `margin` for confining potentials, 40 (n + l1 + 1) / strength for Coulomb.
pub fn solve_auto(
    potential: &ScaledPotential,
    dim: DimensionConfig,
    n_nodes: u32,
    h: f64,
    tol: f64,
) -> Result<Eigenstate> {
    let margin = 10.0;
    if let PotentialKind::Coulomb { strength } = potential.kind {
        let rho_max = 40.0 * (n_nodes + dim.l1 + 1) as f64 / strength;
        let grid = Grid::new(h, rho_max)?;
        return solve_eigenstate(potential, dim, n_nodes, grid, tol);
    }
    let mut rho_max = 20.0;
    let mut last_err = None;
    for _ in 0..5 {
        let coarse = Grid::new(5e-3, rho_max)?;
        match solve_eigenstate(potential, dim, n_nodes, coarse, 1e-6) {
            Ok(state) => {
                let mut turn = rho_max * 0.5;
                for i in 0..coarse.len() {
                    if q_coefficient(potential, dim, state.eps, coarse.rho(i)) <= 0.0 {
                        turn = coarse.rho(i);
                    }
                }
                let grid = Grid::new(h, turn + margin)?;
                return solve_eigenstate(potential, dim, n_nodes, grid, tol);
            }
            Err(Error::NoBoundState(e)) => {
                last_err = Some(Error::NoBoundState(e));
                rho_max *= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::NoBoundState("grid sizing failed".into())))
}
