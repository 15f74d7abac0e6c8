//! Airy function of the first kind and its derivative, plus its negative
//! zeros.
//!
//! Evaluation strategy: Maclaurin series around 0 where it is well
//! conditioned, the standard asymptotic expansions far out, and Taylor
//! continuation of the ODE y'' = x y stepping down from x = 12 on the
//! positive mid-range where neither series reaches full precision in f64.

use crate::error::{Error, Result};

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
const AI_ZERO: f64 = 0.355_028_053_887_817_24;
const AIP_ZERO: f64 = -0.258_819_403_792_806_8;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Ai(x) and Ai'(x).
///
/// Accuracy is ~1e-12 absolute (relative to the oscillation envelope on the
/// negative axis) for |x| <= 20. For very large positive x the value
/// underflows smoothly to (0, 0).
///
/// The Maclaurin series is used only for |x| <= 4.5 where its cancellation
/// stays below one part in 1e14; in the mid ranges 4.5 < |x| < 9 neither the
/// series (cancellation) nor the asymptotics (optimal-truncation floor)
/// reaches full precision, so the value is carried in from |x| = 12 by Taylor
/// continuation of the defining equation.
pub fn airy(x: f64) -> (f64, f64) {
    if x >= 103.0 {
        // exp(-2/3 x^{3/2}) underflows
        return (0.0, 0.0);
    }
    if x >= 9.0 {
        airy_asymptotic_pos(x)
    } else if x > 4.5 {
        airy_continued(x, 12.0)
    } else if x >= -4.5 {
        airy_maclaurin(x)
    } else if x > -9.0 {
        airy_continued(x, -12.0)
    } else {
        airy_asymptotic_neg(x)
    }
}

fn airy_maclaurin(x: f64) -> (f64, f64) {
    let (y1, dy1) = maclaurin_branch(0, x);
    let (y2, dy2) = maclaurin_branch(1, x);
    (AI_ZERO * y1 + AIP_ZERO * y2, AI_ZERO * dy1 + AIP_ZERO * dy2)
}

// Solution branch of y'' = x y with c_{m0} = 1; c_{m+3} = c_m/((m+2)(m+3)).
fn maclaurin_branch(m0: u32, x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let mut t = if m0 == 0 { 1.0 } else { x };
    let mut sum = t;
    let mut dsum = if m0 == 0 { 0.0 } else { 1.0 };
    let mut m = m0 as f64;
    for _ in 0..200 {
        let dt_next = t * x * x / (m + 2.0);
        t *= x3 / ((m + 2.0) * (m + 3.0));
        sum += t;
        dsum += dt_next;
        m += 3.0;
        if t.abs() < 1e-18 * (sum.abs() + 1.0) {
            break;
        }
    }
    (sum, dsum)
}

// u_k, v_k coefficient pairs of the large-|x| expansions.
fn asymptotic_uv() -> impl Iterator<Item = (f64, f64)> {
    let mut u = 1.0f64;
    let mut k = 0u32;
    std::iter::from_fn(move || {
        let kf = k as f64;
        if k > 0 {
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0));
        }
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        k += 1;
        Some((u, v))
    })
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut s_a = 0.0;
    let mut s_ap = 0.0;
    let mut sign = 1.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (u, v) in asymptotic_uv().take(60) {
        let term = u * pow;
        if term.abs() > last {
            break; // divergent tail reached
        }
        s_a += sign * term;
        s_ap += sign * v * pow;
        last = term.abs();
        if term.abs() < 1e-18 {
            break;
        }
        sign = -sign;
        pow /= zeta;
    }
    let pre = (-zeta).exp() / (2.0 * SQRT_PI * x.powf(0.25));
    (pre * s_a, -x.powf(0.25) * (-zeta).exp() / (2.0 * SQRT_PI) * s_ap)
}

fn airy_asymptotic_neg(x: f64) -> (f64, f64) {
    let t = -x;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let phi = zeta + std::f64::consts::FRAC_PI_4;
    // split u, v into even/odd columns with alternating signs in zeta^{-2}
    let (mut p, mut q, mut r, mut s) = (0.0, 0.0, 0.0, 0.0);
    let mut pow = 1.0; // zeta^{-k}
    let mut last = f64::INFINITY;
    for (k, (u, v)) in asymptotic_uv().take(60).enumerate() {
        let term = u * pow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // (-1)^{k/2} pattern: k = 0,1 -> +; k = 2,3 -> -; ...
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
            r += sign * v * pow;
        } else {
            q += sign * term;
            s += sign * v * pow;
        }
        if term.abs() < 1e-18 {
            break;
        }
        pow /= zeta;
    }
    let ai = (phi.sin() * p - phi.cos() * q) / (SQRT_PI * t.powf(0.25));
    let aip = -t.powf(0.25) / SQRT_PI * (phi.cos() * r + phi.sin() * s);
    (ai, aip)
}

// Taylor continuation of y'' = x y from the anchor (where the asymptotic
// series is exact to machine precision) toward x. On the positive side the
// march runs toward smaller x, which amplifies Ai and damps the Bi admixture,
// so rounding in the seed stays harmless; on the negative side both solutions
// share one oscillation envelope and errors do not grow at all.
fn airy_continued(x: f64, anchor: f64) -> (f64, f64) {
    let (mut y, mut dy) = if anchor > 0.0 {
        airy_asymptotic_pos(anchor)
    } else {
        airy_asymptotic_neg(anchor)
    };
    let mut x0 = anchor;
    while (x0 - x).abs() > 0.0 {
        let step = (x - x0).clamp(-0.75, 0.75);
        let (ny, ndy) = taylor_step(x0, y, dy, step);
        y = ny;
        dy = ndy;
        x0 += step;
        if step.abs() < 0.75 {
            break;
        }
    }
    (y, dy)
}

fn taylor_step(x0: f64, y: f64, dy: f64, delta: f64) -> (f64, f64) {
    const M: usize = 30;
    let mut c = [0.0f64; M];
    c[0] = y;
    c[1] = dy;
    c[2] = x0 * c[0] / 2.0;
    for m in 1..M - 2 {
        c[m + 2] = (x0 * c[m] + c[m - 1]) / (((m + 1) * (m + 2)) as f64);
    }
    let mut val = c[M - 1];
    for m in (0..M - 1).rev() {
        val = val * delta + c[m];
    }
    let mut der = (M - 1) as f64 * c[M - 1];
    for m in (1..M - 1).rev() {
        der = der * delta + m as f64 * c[m];
    }
    (val, der)
}

/// k-th negative zero Z_k of Ai (k >= 1), to about 1e-12.
pub fn airy_zero(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("airy_zero needs k >= 1".into()));
    }
    let kf = k as f64;
    // McMahon-style guess
    let t = 3.0 * std::f64::consts::PI * (4.0 * kf - 1.0) / 8.0;
    let t2 = t * t;
    let guess = t.powf(2.0 / 3.0)
        * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2) + 77125.0 / 82944.0 / (t2 * t2 * t2));
    let mut half_width = 0.6 / kf.cbrt();
    let (mut a, mut b) = (-(guess + half_width), -(guess - half_width));
    let mut fa = airy(a).0;
    let mut fb = airy(b).0;
    for _ in 0..4 {
        if fa * fb < 0.0 {
            break;
        }
        half_width *= 1.6;
        a = -(guess + half_width);
        b = -(guess - half_width);
        fa = airy(a).0;
        fb = airy(b).0;
    }
    if fa * fb >= 0.0 {
        return Err(Error::NoConvergence(format!(
            "airy_zero bracketing failed for k = {k}"
        )));
    }
    for _ in 0..70 {
        let mid = 0.5 * (a + b);
        let fm = airy(mid).0;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..3 {
        let (f, df) = airy(z);
        z -= f / df;
    }
    Ok(z)
}
