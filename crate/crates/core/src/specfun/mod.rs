//! Special functions for the exact solutions and the N-dimensional angular
//! eigenfunctions: Hermite, Airy, Laguerre, Gegenbauer / associated Gegenbauer
//! polynomials, hyperspherical coordinates and the angular product states.

mod airy;
mod gamma;
mod hyper;
mod poly;

pub use airy::{airy, airy_zero};
pub use gamma::{gamma, ln_gamma};
pub use hyper::{omega, omega_norm_constant, spherical_to_cartesian, AngularIndexSet};
pub use num_complex::Complex64;
pub use poly::{assoc_gegenbauer, gegenbauer, hermite, laguerre};
