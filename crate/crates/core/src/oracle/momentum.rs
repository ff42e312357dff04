//! Midpoint momentum sum over the correlator integrands.
//!
//! Replaces `(1/pi) int_0^pi dk` by `(1/n) sum_n` over `k_n = pi (n - 1/2) / n`.
//! The integrands are even and `2 pi`-periodic in `k`, so the midpoint sum
//! converges much faster than first order.

use std::f64::consts::PI;

use super::OracleError;
use crate::correlators::{integrands, CorrelatorSet};
use crate::model::ModelParams;
use crate::{check_time, Result};

pub const MIN_MODES: usize = 100;

pub fn momentum_sum_correlators(params: ModelParams, t: f64, n_modes: usize) -> Result<CorrelatorSet> {
    let t = check_time(t)?;
    if n_modes < MIN_MODES {
        return Err(OracleError::TooFewModes(n_modes).into());
    }
    let mut sums = [0.0; 4];
    for n in 0..n_modes {
        let k = PI * (n as f64 + 0.5) / n_modes as f64;
        for (acc, v) in sums.iter_mut().zip(integrands(params, k, t)) {
            *acc += v;
        }
    }
    let scale = 1.0 / n_modes as f64;
    Ok(CorrelatorSet::from_integrals(params.lambda(), t, sums.map(|s| s * scale)))
}
