//! Nearest-neighbour entanglement after a quench of the transverse-field
//! Ising chain
//!
//! ```text
//! H = -1/2 sum_i (lambda sx_i sx_{i+1} + sz_i)
//! ```
//!
//! prepared in the equal mixture of the two fully x-polarized product states.
//!
//! The analytic path runs `model` (single-mode quantities) -> `correlators`
//! (thermodynamic-limit two-point functions by quadrature) -> `density` (the
//! X-shaped two-site reduced density matrix and its concurrence) ->
//! `analysis` (scans, first-maximum times, regime classification). The
//! `oracle` module is an independent ground truth built from exact
//! diagonalization of small periodic chains.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod correlators;
pub mod density;
pub mod model;
pub mod oracle;
pub mod quadrature;

use thiserror::Error;

pub use correlators::{correlator_set, CorrelatorSet};
pub use density::{assemble_rho, concurrence, concurrence_at, x_spectrum, ConcurrenceSpectrum, XState};
pub use model::{Mode, ModelError, ModelParams};
pub use quadrature::{QuadratureConfig, QuadratureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("unphysical {quantity} = {value:e} at lambda = {lambda}, t = {t}")]
    Unphysical { quantity: &'static str, value: f64, lambda: f64, t: f64 },
    #[error("positivity violated: {quantity} = {value:e}")]
    Positivity { quantity: &'static str, value: f64 },
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("no entanglement above threshold for lambda = {lambda} in (0, {t_max}]")]
    NoEntanglement { lambda: f64, t_max: f64 },
    #[error("at lambda = {lambda}, t = {t}: {source}")]
    At { lambda: f64, t: f64, source: Box<Error> },
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}

impl Error {
    /// Attaches the evaluation point unless one is already attached.
    pub fn at(self, lambda: f64, t: f64) -> Self {
        match self {
            e @ Error::At { .. } => e,
            e => Error::At { lambda, t, source: Box::new(e) },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_time(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::InvalidTime(t))
    }
}
