//! Independent ground truth for the analytic path.
//!
//! * [`ed`]: exact diagonalization of periodic chains of up to 12 spins with
//!   the exact mixed initial state, reduced to sites 1 and 2.
//! * [`wootters`]: the generic two-qubit concurrence through the spin-flipped
//!   matrix and the characteristic polynomial of `rho rho~`.
//! * [`momentum`]: a midpoint momentum sum over the correlator integrands.
//!
//! None of these share an evaluation path with the quadrature or the
//! closed-form X-state spectrum they are used to check.

pub mod ed;
pub mod momentum;
pub mod quartic;
pub mod wootters;

use nalgebra::Matrix4;
use num_complex::Complex64;
use thiserror::Error;

use crate::density::XState;

pub use ed::{
    build_hamiltonian, evolve_and_reduce, initial_state, static_check, EdEvolution, InitialState, StaticReport,
};
pub use momentum::momentum_sum_correlators;
pub use wootters::wootters_generic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("chain length must be even and in 4..=12, got {0}")]
    InvalidChainLength(usize),
    #[error("reciprocal field must be finite and nonnegative, got {0}")]
    InvalidLambda(f64),
    #[error("at least 100 momentum modes are required, got {0}")]
    TooFewModes(usize),
    #[error("static check needs at least 6 sites, got {0}")]
    ChainTooShortForStaticCheck(usize),
    #[error("invalid two-qubit density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("eigenvalue of rho rho~ has negative real part {0:e}")]
    NegativeEigenvalue(f64),
}

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 12;

/// A periodic transverse-field Ising chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainSpec {
    n_sites: usize,
    lambda: f64,
}

impl SpinChainSpec {
    pub fn new(n_sites: usize, lambda: f64) -> Result<Self, OracleError> {
        check_sites(n_sites)?;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(OracleError::InvalidLambda(lambda));
        }
        Ok(Self { n_sites, lambda })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

pub(crate) fn check_sites(n: usize) -> Result<(), OracleError> {
    if (MIN_SITES..=MAX_SITES).contains(&n) && n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(OracleError::InvalidChainLength(n))
    }
}

/// General two-qubit density matrix in the `{|uu>, |ud>, |du>, |dd>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(pub Matrix4<Complex64>);

impl DensityMatrix4 {
    pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
    pub const TRACE_TOLERANCE: f64 = 1e-10;
    pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn from_xstate(x: &XState) -> Self {
        Self::from_rows(x.to_matrix())
    }

    /// Pure state `|psi><psi|`.
    pub fn pure(psi: [Complex64; 4]) -> Self {
        Self(Matrix4::from_fn(|i, j| psi[i] * psi[j].conj()))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigenvalues();
        let mut out = [eig[0], eig[1], eig[2], eig[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let herm = (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > Self::HERMITICITY_TOLERANCE {
            return Err(OracleError::InvalidDensityMatrix(format!("not Hermitian: {herm:e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > Self::TRACE_TOLERANCE {
            return Err(OracleError::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < -Self::EIGENVALUE_TOLERANCE {
            return Err(OracleError::InvalidDensityMatrix(format!("eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Largest magnitude among the eight entries outside the X pattern.
    pub fn max_non_x(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    max = max.max(self.0[(i, j)].norm());
                }
            }
        }
        max
    }

    /// Entrywise maximum deviation.
    pub fn max_deviation(&self, other: &DensityMatrix4) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Projects onto the X pattern, symmetrizing the inner block the way the
    /// analytic path parametrizes it.
    pub fn to_xstate(&self) -> XState {
        let m = &self.0;
        XState {
            r11: m[(0, 0)].re,
            r22: 0.5 * (m[(1, 1)].re + m[(2, 2)].re),
            r44: m[(3, 3)].re,
            r14: m[(0, 3)],
            r23: m[(1, 2)].re,
        }
    }
}
