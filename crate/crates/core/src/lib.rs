//! Bound states of spherically symmetric potentials in N dimensions and the
//! matrix-element identities they satisfy.
//!
//! The crate solves the scaled radial equation `R'' = Q R` by Numerov shooting,
//! evaluates expectation values against the radial probability density
//! `P = R^2`, and verifies generalized virial / Kramer-type relations, exact
//! recursion chains, kinetic-energy moment identities and their classical
//! periodic-orbit analogues. Everything works in scaled units
//! (hbar = M = a = 1), so energies and lengths are dimensionless.
//!
//! ```
//! use virial::radial::solve_auto;
//! use virial::relations::{general_residual, ProbeFunction};
//! use virial::{DimensionConfig, ScaledPotential};
//!
//! let potential = ScaledPotential::oscillator();
//! let state = solve_auto(&potential, DimensionConfig::three_d(0), 0, 2e-3, 1e-10)?;
//! assert!((state.eps - 1.5).abs() < 1e-8);
//!
//! // the virial theorem, evaluated as a residual report
//! let report = general_residual(&state, &ProbeFunction::power(1.0))?;
//! assert!(report.relative_residual < 1e-6);
//! # Ok::<(), virial::Error>(())
//! ```

// `!(x > 0.0)` guards deliberately catch NaN alongside the sign check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]
#![allow(clippy::excessive_precision)]

pub mod classical;
pub mod error;
pub mod expectations;
pub mod potentials;
pub mod quad;
pub mod radial;
pub mod relations;
pub mod specfun;

pub use error::{Error, Result};
pub use potentials::ScaledPotential;
pub use radial::{DimensionConfig, Eigenstate, Grid};
pub use relations::{ProbeFunction, RelationReport};
