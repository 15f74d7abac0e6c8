//! Scaled spherically symmetric potentials with analytic derivatives.
//!
//! Everything lives in the scaled units hbar = M = a = 1, so v(rho) is
//! dimensionless. Coulomb is a kind of its own rather than a power law with
//! negative amplitude: the power-law relations assume A > 0 while the Coulomb
//! chain treats the sign explicitly.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type PotentialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PotentialKind {
    /// v(rho) = A rho^m / 2 with A > 0, m > -2.
    PowerLaw { amplitude: f64, exponent: f64 },
    /// v(rho) = -strength / rho with strength > 0.
    Coulomb { strength: f64 },
    /// User-supplied v and derivatives. The third derivative is optional;
    /// operations that need it refuse to run rather than difference
    /// numerically.
    Custom {
        v: PotentialFn,
        v1: PotentialFn,
        v2: PotentialFn,
        v3: Option<PotentialFn>,
    },
}

/// A potential in scaled units, immutable after construction.
#[derive(Clone)]
pub struct ScaledPotential {
    pub kind: PotentialKind,
    pub description: String,
}

impl fmt::Debug for ScaledPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PotentialKind::PowerLaw { amplitude, exponent } => {
                write!(f, "PowerLaw(A={amplitude}, m={exponent}; {})", self.description)
            }
            PotentialKind::Coulomb { strength } => {
                write!(f, "Coulomb(strength={strength}; {})", self.description)
            }
            PotentialKind::Custom { .. } => write!(f, "Custom({})", self.description),
        }
    }
}

/// Power-law potential v = A rho^m / 2.
///
/// Rejects A <= 0 (the relations assume a positive amplitude) and m <= -2
/// (bound states need the potential less singular than the centrifugal term).
pub fn make_power_law(amplitude: f64, exponent: f64) -> Result<ScaledPotential> {
    if !(amplitude > 0.0) {
        return Err(Error::Domain(format!(
            "power-law amplitude must be positive, got {amplitude}"
        )));
    }
    if !(exponent > -2.0) {
        return Err(Error::Domain(format!(
            "power-law exponent must exceed -2, got {exponent}"
        )));
    }
    Ok(ScaledPotential {
        kind: PotentialKind::PowerLaw { amplitude, exponent },
        description: format!("v = {amplitude} rho^{exponent} / 2"),
    })
}

/// Attractive Coulomb potential v = -strength / rho.
pub fn make_coulomb(strength: f64) -> Result<ScaledPotential> {
    if !(strength > 0.0) {
        return Err(Error::Domain(format!(
            "coulomb strength must be positive, got {strength}"
        )));
    }
    Ok(ScaledPotential {
        kind: PotentialKind::Coulomb { strength },
        description: format!("v = -{strength} / rho"),
    })
}

/// Custom potential from explicit callables (no automatic differentiation).
pub fn make_custom(
    description: impl Into<String>,
    v: PotentialFn,
    v1: PotentialFn,
    v2: PotentialFn,
    v3: Option<PotentialFn>,
) -> ScaledPotential {
    ScaledPotential {
        kind: PotentialKind::Custom { v, v1, v2, v3 },
        description: description.into(),
    }
}

impl ScaledPotential {
    /// Harmonic oscillator v = rho^2 / 2.
    pub fn oscillator() -> Self {
        make_power_law(1.0, 2.0).expect("valid parameters")
    }

    /// Linear potential v = rho / 2.
    pub fn linear() -> Self {
        make_power_law(1.0, 1.0).expect("valid parameters")
    }

    /// Unit attractive Coulomb potential v = -1/rho.
    pub fn coulomb_unit() -> Self {
        make_coulomb(1.0).expect("valid parameters")
    }

    pub fn value(&self, rho: f64) -> f64 {
        match &self.kind {
            PotentialKind::PowerLaw { amplitude, exponent } => {
                0.5 * amplitude * rho.powf(*exponent)
            }
            PotentialKind::Coulomb { strength } => -strength / rho,
            PotentialKind::Custom { v, .. } => v(rho),
        }
    }

    /// d^order v / d rho^order for order in 0..=3.
    pub fn derivative(&self, rho: f64, order: u32) -> Result<f64> {
        if rho <= 0.0 {
            return Err(Error::Domain(format!(
                "potential derivatives need rho > 0, got {rho}"
            )));
        }
        if order > 3 {
            return Err(Error::UnsupportedOrder(order));
        }
        match &self.kind {
            PotentialKind::PowerLaw { amplitude, exponent } => {
                let mut factor = 0.5 * amplitude;
                for k in 0..order {
                    factor *= exponent - k as f64;
                }
                Ok(factor * rho.powf(exponent - order as f64))
            }
            PotentialKind::Coulomb { strength } => {
                // d^k (-s/rho) = -s (-1)^k k! rho^{-1-k}
                let sign = if order % 2 == 0 { -1.0 } else { 1.0 };
                let mut fact = 1.0;
                for k in 1..=order {
                    fact *= k as f64;
                }
                Ok(sign * strength * fact * rho.powi(-1 - order as i32))
            }
            PotentialKind::Custom { v, v1, v2, v3 } => match order {
                0 => Ok(v(rho)),
                1 => Ok(v1(rho)),
                2 => Ok(v2(rho)),
                3 => v3.as_ref().map(|f| f(rho)).ok_or_else(|| {
                    Error::Domain("custom potential supplies no third derivative".into())
                }),
                _ => unreachable!(),
            },
        }
    }

    /// True when a third derivative is available.
    pub fn has_third_derivative(&self) -> bool {
        !matches!(&self.kind, PotentialKind::Custom { v3: None, .. })
    }
}
