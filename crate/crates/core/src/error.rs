use std::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    Domain(String),
    /// A derivative order the potential/probe cannot supply.
    UnsupportedOrder(u32),
    /// Eigenvalue bracketing failed inside the configured energy window.
    NoBoundState(String),
    /// Iteration limit reached before the requested tolerance.
    NoConvergence(String),
    /// Requested energy/angular momentum does not admit a bound orbit.
    NoOrbit(String),
    /// A quadrature could not be carried out safely.
    Quadrature(String),
    /// A recursion chain is missing its required seed value.
    MissingSeed(String),
    /// Invalid run configuration.
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnsupportedOrder(n) => write!(f, "unsupported derivative order {n}"),
            Error::NoBoundState(msg) => write!(f, "no bound state: {msg}"),
            Error::NoConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::NoOrbit(msg) => write!(f, "no bound orbit: {msg}"),
            Error::Quadrature(msg) => write!(f, "quadrature failure: {msg}"),
            Error::MissingSeed(msg) => write!(f, "missing seed: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
