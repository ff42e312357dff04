//! Single-mode quantities of the transverse-field Ising chain.
//!
//! Everything here is a pure function of the reciprocal field `lambda`, the
//! quasimomentum `k` and time `t`. The Bogoliubov coefficients are evaluated
//! in rationalized form so that the removable singularities at `k = 0` and
//! `k = pi` do not lose precision; only the gapless mode `(lambda = 1, k = pi)`
//! is genuinely undefined.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("reciprocal field must be finite and nonnegative, got {0}")]
    InvalidLambda(f64),
    #[error("quasimomentum must lie in [0, pi], got {0}")]
    InvalidMode(f64),
    #[error("Bogoliubov coefficients are undefined at the gapless mode (lambda = {lambda}, k = {k})")]
    DegenerateMode { lambda: f64, k: f64 },
}

/// The reciprocal transverse field, the model's only physical parameter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ModelParams {
    lambda: f64,
}

impl ModelParams {
    pub fn new(lambda: f64) -> Result<Self, ModelError> {
        if lambda.is_finite() && lambda >= 0.0 {
            Ok(Self { lambda })
        } else {
            Err(ModelError::InvalidLambda(lambda))
        }
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Quasimomentum on the reduced zone `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Mode {
    k: f64,
}

impl Mode {
    pub fn new(k: f64) -> Result<Self, ModelError> {
        if (0.0..=PI).contains(&k) {
            Ok(Self { k })
        } else {
            Err(ModelError::InvalidMode(k))
        }
    }

    /// Skips the range check. Callers guarantee `0 <= k <= pi`.
    #[inline]
    pub(crate) fn new_unchecked(k: f64) -> Self {
        debug_assert!((0.0..=PI).contains(&k));
        Self { k }
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    pub alpha: f64,
    pub beta: f64,
}

/// Heisenberg-picture amplitudes `A(k, t)` and `B(k, t)`.
///
/// `b` is purely imaginary and `|a|^2 + |b|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
}

/// Quasiparticle energy `sqrt(1 + lambda^2 + 2 lambda cos k)`.
#[inline]
pub fn dispersion(params: ModelParams, mode: Mode) -> f64 {
    let lambda = params.lambda;
    // (1 - lambda)^2 + 2 lambda (1 + cos k) avoids cancellation near the gap.
    let one_plus_cos = 2.0 * (0.5 * (PI - mode.k)).sin().powi(2);
    ((1.0 - lambda).powi(2) + 2.0 * lambda * one_plus_cos).sqrt()
}

/// The pieces shared by the coefficient routines: `Lambda_k`, `1 + lambda cos k`
/// and `lambda sin k`.
#[derive(Debug, Clone, Copy)]
struct ModeTerms {
    energy: f64,
    diag: f64,
    offdiag: f64,
}

impl ModeTerms {
    #[inline]
    fn new(params: ModelParams, mode: Mode) -> Self {
        let (sin_k, cos_k) = mode.k.sin_cos();
        Self { energy: dispersion(params, mode), diag: 1.0 + params.lambda * cos_k, offdiag: params.lambda * sin_k }
    }

    /// `(alpha^2, beta^2)`, using `Lambda^2 - diag^2 = offdiag^2` to pick the
    /// branch without cancellation.
    #[inline]
    fn squares(&self) -> (f64, f64) {
        let Self { energy, diag, offdiag } = *self;
        let two_e = 2.0 * energy;
        if diag >= 0.0 {
            let alpha_sq = offdiag * offdiag / (two_e * (energy + diag));
            (alpha_sq, (energy + diag) / two_e)
        } else {
            let beta_sq = offdiag * offdiag / (two_e * (energy - diag));
            ((energy - diag) / two_e, beta_sq)
        }
    }
}

/// Bogoliubov coefficients `(alpha_k, beta_k)` with `beta >= 0` on `[0, pi]`.
pub fn bogoliubov(params: ModelParams, mode: Mode) -> Result<BogoliubovCoefficients, ModelError> {
    let terms = ModeTerms::new(params, mode);
    if terms.energy == 0.0 {
        return Err(ModelError::DegenerateMode { lambda: params.lambda, k: mode.k });
    }
    let (alpha_sq, beta_sq) = terms.squares();
    Ok(BogoliubovCoefficients { alpha: alpha_sq.sqrt(), beta: beta_sq.sqrt() })
}

/// `A = e^{i Lambda t} - 2 i beta^2 sin(Lambda t)`,
/// `B = -2 i alpha beta sin(Lambda t)`.
///
/// At the gapless mode the `sin(Lambda t)` factor vanishes and the limit
/// `A = 1, B = 0` is returned.
pub fn propagator_amplitudes(params: ModelParams, mode: Mode, t: f64) -> PropagatorAmplitudes {
    let terms = ModeTerms::new(params, mode);
    if terms.energy == 0.0 {
        return PropagatorAmplitudes { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };
    }
    let (_, beta_sq) = terms.squares();
    let alpha_beta = terms.offdiag / (2.0 * terms.energy);
    let (sin_et, cos_et) = (terms.energy * t).sin_cos();
    PropagatorAmplitudes {
        a: Complex64::new(cos_et, sin_et * (1.0 - 2.0 * beta_sq)),
        b: Complex64::new(0.0, -2.0 * alpha_beta * sin_et),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(lambda: f64) -> ModelParams {
        ModelParams::new(lambda).unwrap()
    }

    fn m(k: f64) -> Mode {
        Mode::new(k).unwrap()
    }

    /// Coefficients exactly as written, no rationalization.
    fn raw_coefficients(lambda: f64, k: f64) -> (f64, f64) {
        let e = (1.0 + lambda * lambda + 2.0 * lambda * k.cos()).sqrt();
        let c = 1.0 + lambda * k.cos();
        let denom = (2.0 * (e * e - c * e)).sqrt();
        ((e - c) / denom, lambda * k.sin() / denom)
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(p(1.0), m(PI)), 0.0);
        assert!((dispersion(p(0.0), m(1.234)) - 1.0).abs() < 1e-15);
        assert!((dispersion(p(2.0), m(0.0)) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn gap_minimum_is_abs_one_minus_lambda() {
        for &lambda in &[0.0, 0.3, 0.99, 1.0, 1.01, 2.5, 7.0] {
            let min =
                (0..=2000).map(|i| dispersion(p(lambda), m(PI * i as f64 / 2000.0))).fold(f64::INFINITY, f64::min);
            assert!((min - (1.0 - lambda).abs()).abs() < 1e-12, "lambda {lambda}");
            if lambda != 1.0 {
                assert!(min > 0.0);
            }
        }
    }

    #[test]
    fn coefficients_at_critical_quarter_turn() {
        let c = bogoliubov(p(1.0), m(PI / 2.0)).unwrap();
        let (a, b) = raw_coefficients(1.0, PI / 2.0);
        assert!((c.alpha - (PI / 8.0).sin()).abs() < 1e-15);
        assert!((c.beta - (PI / 8.0).cos()).abs() < 1e-15);
        assert!((c.alpha - a).abs() < 1e-15 && (c.beta - b).abs() < 1e-15);
    }

    #[test]
    fn coefficients_near_zone_centre() {
        let c = bogoliubov(p(2.0), m(1e-9)).unwrap();
        assert!(c.alpha < 1e-9);
        assert!((c.beta - 1.0).abs() < 1e-15);
        // Exactly at the zone edges the rationalized form is still finite.
        let c = bogoliubov(p(2.0), m(0.0)).unwrap();
        assert_eq!((c.alpha, c.beta), (0.0, 1.0));
        let c = bogoliubov(p(2.0), m(PI)).unwrap();
        assert!((c.alpha - 1.0).abs() < 1e-15 && c.beta.abs() < 1e-15);
    }

    #[test]
    fn gapless_mode_is_degenerate() {
        assert!(matches!(bogoliubov(p(1.0), m(PI)), Err(ModelError::DegenerateMode { .. })));
        let amp = propagator_amplitudes(p(1.0), m(PI), 3.7);
        assert_eq!(amp.a, Complex64::new(1.0, 0.0));
        assert_eq!(amp.b, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn amplitudes_examples() {
        for &(lambda, k) in &[(0.0, 0.2), (1.5, 1.0), (3.0, 3.0)] {
            let amp = propagator_amplitudes(p(lambda), m(k), 0.0);
            assert_eq!(amp.a, Complex64::new(1.0, 0.0));
            assert_eq!(amp.b.norm(), 0.0);
        }
        let amp = propagator_amplitudes(p(1.5), m(1.0), 2.0);
        assert!((amp.a.norm_sqr() + amp.b.norm_sqr() - 1.0).abs() < 1e-14);

        let amp = propagator_amplitudes(p(0.0), m(0.7), 1.3);
        assert!((amp.a.norm() - 1.0).abs() < 1e-15);
        assert_eq!(amp.b.norm(), 0.0);
    }

    #[test]
    fn amplitudes_match_coefficient_definition() {
        let (lambda, k, t) = (0.7, 2.1, 4.4);
        let c = bogoliubov(p(lambda), m(k)).unwrap();
        let e = dispersion(p(lambda), m(k));
        let i = Complex64::i();
        let a = (i * e * t).exp() - 2.0 * i * c.beta * c.beta * (e * t).sin();
        let b = -2.0 * i * c.alpha * c.beta * (e * t).sin();
        let amp = propagator_amplitudes(p(lambda), m(k), t);
        assert!((amp.a - a).norm() < 1e-14);
        assert!((amp.b - b).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(-0.1).is_err());
        assert!(ModelParams::new(f64::NAN).is_err());
        assert!(ModelParams::new(f64::INFINITY).is_err());
        assert!(Mode::new(-1e-12).is_err());
        assert!(Mode::new(3.2).is_err());
    }

    #[test]
    fn rationalized_forms_match_raw_at_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let lambda = rng.random_range(0.01..5.0);
            let k = rng.random_range(0.01..PI - 0.01);
            let (a, b) = raw_coefficients(lambda, k);
            let c = bogoliubov(p(lambda), m(k)).unwrap();
            assert!((c.alpha - a).abs() < 1e-10, "alpha at ({lambda}, {k})");
            assert!((c.beta - b).abs() < 1e-10, "beta at ({lambda}, {k})");
        }
    }

    proptest! {
        #[test]
        fn normalization(lambda in 0.0..10.0f64, k in 0.0..PI) {
            prop_assume!(!(lambda == 1.0 && k == PI));
            let c = bogoliubov(p(lambda), m(k)).unwrap();
            prop_assert!((c.alpha * c.alpha + c.beta * c.beta - 1.0).abs() < 1e-12);
            prop_assert!(c.alpha >= 0.0 && c.beta >= 0.0);
        }

        #[test]
        fn unitarity(lambda in 0.0..10.0f64, k in 0.0..PI, t in 0.0..50.0f64) {
            let amp = propagator_amplitudes(p(lambda), m(k), t);
            prop_assert!((amp.a.norm_sqr() + amp.b.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert_eq!(amp.b.re, 0.0);
        }
    }
}
