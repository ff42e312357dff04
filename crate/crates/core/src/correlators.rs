//! Fermionic two-point functions of the quenched chain.
//!
//! In the thermodynamic limit the three nearest-neighbour correlators that fix
//! the two-site density matrix are
//!
//! ```text
//! g11(t) = 1/2 + (1/pi) int_0^pi lambda sin^2 k sin^2(L t) / L^2 dk
//! g12(t) = 1/4 + (1/pi) int_0^pi lambda cos k sin^2 k sin^2(L t) / L^2 dk
//! f12(t) = (1/2pi) int_0^pi sin^2 k [ i sin(2 L t) / L - cos(2 L t)
//!                                     - 2 lambda sin^2(L t) (cos k + lambda) / L^2 ] dk
//! ```
//!
//! with `L = Lambda_k`. All three are written here as `offset + (1/pi) int g`,
//! and [`integrands`] returns the `g` parts so that other discretizations of
//! the same integrals can reuse them.

use num_complex::Complex64;

use crate::model::{dispersion, propagator_amplitudes, Mode, ModelParams};
use crate::quadrature::{integrate_converged, QuadratureConfig};
use crate::{check_time, Error, Result};

const REALITY_TOLERANCE: f64 = 1e-10;
const BOUND_SLACK: f64 = 1e-10;

/// Initial-state two-point functions as a function of the site offset
/// `j - i`: `<c+_i c_j>`, `<c_i c_j>` and `<c+_i c+_j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticCorrelators {
    pub hopping: f64,
    pub pairing: f64,
    pub pairing_dag: f64,
}

pub fn static_correlators(offset: i64) -> StaticCorrelators {
    match offset {
        0 => StaticCorrelators { hopping: 0.5, pairing: 0.0, pairing_dag: 0.0 },
        1 => StaticCorrelators { hopping: 0.25, pairing: -0.25, pairing_dag: 0.25 },
        -1 => StaticCorrelators { hopping: 0.25, pairing: 0.25, pairing_dag: -0.25 },
        _ => StaticCorrelators { hopping: 0.0, pairing: 0.0, pairing_dag: 0.0 },
    }
}

/// Time-evolved nearest-neighbour correlators.
///
/// `f12` carries the phase convention of the amplitudes `A(k, t) ~ e^{+i L t}`;
/// under `e^{-iHt}` evolution the pair amplitude `<c_1(t) c_2(t)>` is its
/// complex conjugate. The density matrix assembly accounts for this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub lambda: f64,
    pub t: f64,
    /// `<c+_1(t) c_1(t)>`
    pub g11: f64,
    /// `<c+_1(t) c_2(t)>`
    pub g12: f64,
    /// `<c_1(t) c_2(t)>`
    pub f12: Complex64,
}

impl CorrelatorSet {
    /// Correlators of the initial state.
    pub fn initial(lambda: f64) -> Self {
        Self { lambda, t: 0.0, g11: 0.5, g12: 0.25, f12: Complex64::new(-0.25, 0.0) }
    }

    pub(crate) fn from_integrals(lambda: f64, t: f64, sums: [f64; 4]) -> Self {
        let [g11, g12, f_re, f_im] = sums;
        Self { lambda, t, g11: 0.5 + g11, g12: 0.25 + g12, f12: Complex64::new(f_re, f_im) }
    }

    pub(crate) fn check_bounds(&self) -> Result<()> {
        let unphysical = |quantity, value| Error::Unphysical { quantity, value, lambda: self.lambda, t: self.t };
        if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&self.g11) {
            return Err(unphysical("occupation g11", self.g11));
        }
        if self.f12.norm() > 0.5 + BOUND_SLACK {
            return Err(unphysical("pairing |f12|", self.f12.norm()));
        }
        Ok(())
    }
}

/// `sin(L t) / L` with its `L -> 0` limit.
#[inline]
fn sin_over(energy: f64, t: f64) -> f64 {
    if energy == 0.0 {
        t
    } else {
        (energy * t).sin() / energy
    }
}

/// Integrands `g` such that each correlator is `offset + (1/pi) int_0^pi g dk`,
/// in the order `[g11, g12, Re f12, Im f12]`.
#[inline]
pub fn integrands(params: ModelParams, k: f64, t: f64) -> [f64; 4] {
    let lambda = params.lambda();
    let energy = dispersion(params, Mode::new_unchecked(k));
    let (sin_k, cos_k) = k.sin_cos();
    let sin2 = sin_k * sin_k;
    let s = sin_over(energy, t);
    let s2 = s * s;
    let common = lambda * sin2 * s2;
    // sin(2Lt)/L = 2 cos(Lt) sin(Lt)/L
    let sin_double_over = 2.0 * (energy * t).cos() * s;
    let cos_double = (2.0 * energy * t).cos();
    [
        common,
        common * cos_k,
        0.5 * sin2 * (-cos_double - 2.0 * lambda * s2 * (cos_k + lambda)),
        0.5 * sin2 * sin_double_over,
    ]
}

/// Imaginary part of the hopping integrand written directly in terms of the
/// amplitudes `A`, `B` (before reduction to a manifestly real form). Its
/// integral must vanish.
#[inline]
fn hopping_imaginary_integrand(params: ModelParams, k: f64, t: f64) -> f64 {
    let amp = propagator_amplitudes(params, Mode::new_unchecked(k), t);
    let (a2, b2) = (amp.a.norm_sqr(), amp.b.norm_sqr());
    let cross = (amp.a - amp.a.conj()) * amp.b.conj();
    let value =
        Complex64::from((1.0 + (2.0 * k).cos()) * (a2 - b2) + 2.0 * k.cos() * (a2 + b2)) + (2.0 * k).sin() * cross;
    0.25 * value.im
}

fn validated_params(lambda: f64) -> Result<ModelParams> {
    Ok(ModelParams::new(lambda)?)
}

/// All three correlators from one pass over shared quadrature nodes.
pub fn correlator_set(params: ModelParams, t: f64, cfg: &QuadratureConfig) -> Result<CorrelatorSet> {
    let t = check_time(t)?;
    let lambda = params.lambda();
    let panels = cfg.initial_panels(lambda, t);
    let [g11, g12, f_re, f_im, g12_im] = integrate_converged(cfg, panels, |k| {
        let [a, b, c, d] = integrands(params, k, t);
        [a, b, c, d, hopping_imaginary_integrand(params, k, t)]
    })?;
    let scale = std::f64::consts::FRAC_1_PI;
    let g12_im = g12_im * scale;
    if g12_im.abs() >= REALITY_TOLERANCE {
        return Err(Error::Unphysical { quantity: "imaginary part of g12", value: g12_im, lambda, t });
    }
    let set = CorrelatorSet::from_integrals(lambda, t, [g11 * scale, g12 * scale, f_re * scale, f_im * scale]);
    set.check_bounds()?;
    Ok(set)
}

/// `<c+_1(t) c_1(t)>`
pub fn occupation(params: ModelParams, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    correlator_set(params, t, cfg).map(|c| c.g11)
}

/// `<c+_1(t) c_2(t)>`
pub fn hopping(params: ModelParams, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    correlator_set(params, t, cfg).map(|c| c.g12)
}

/// `<c_1(t) c_2(t)>`
pub fn pairing(params: ModelParams, t: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    correlator_set(params, t, cfg).map(|c| c.f12)
}

/// Convenience wrapper taking a raw `lambda`.
pub fn correlators_at(lambda: f64, t: f64, cfg: &QuadratureConfig) -> Result<CorrelatorSet> {
    correlator_set(validated_params(lambda)?, t, cfg)
}
