//! Two-site reduced density matrix and its concurrence.
//!
//! Odd fermion averages vanish for the quenched state, so the reduced
//! density matrix of sites 1 and 2 is an X-state
//!
//! ```text
//!         | r11  0    0    r14 |
//! rho  =  | 0    r22  r23  0   |
//!         | 0    r23  r22  0   |
//!         | r14* 0    0    r44 |
//! ```
//!
//! in the basis `{|uu>, |ud>, |du>, |dd>}`, whose entries follow from the
//! three correlators by Wick's theorem. The concurrence then follows from the
//! closed-form eigenvalues of `sqrt(rho rho~)` without forming the spin-flipped
//! matrix.

use num_complex::Complex64;

use crate::correlators::{correlator_set, CorrelatorSet};
use crate::model::ModelParams;
use crate::quadrature::QuadratureConfig;
use crate::{Error, Result};

/// Computational-basis conventions shared with the exact-diagonalization
/// oracle.
pub mod basis {
    /// Bit value of an up spin in a computational basis index. Spin up is an
    /// occupied fermion mode (`sz / 2 = c+ c - 1/2`).
    pub const UP: usize = 1;

    /// Row labels of two-site matrices.
    pub const LABELS: [&str; 4] = ["uu", "ud", "du", "dd"];

    /// Maps a two-bit computational index (site 1 most significant, bit 1 =
    /// up) to the row of the `{|uu>, |ud>, |du>, |dd>}` basis.
    #[inline]
    pub const fn row_of_bits(bits: usize) -> usize {
        3 - bits
    }
}

pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;
pub const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub r11: f64,
    /// Shared by `rho_22` and `rho_33`.
    pub r22: f64,
    pub r44: f64,
    pub r14: Complex64,
    pub r23: f64,
}

impl XState {
    /// The initial state: `1/4` on every X entry.
    pub const INITIAL: XState = XState { r11: 0.25, r22: 0.25, r44: 0.25, r14: Complex64::new(0.25, 0.0), r23: 0.25 };

    pub fn trace(&self) -> f64 {
        self.r11 + 2.0 * self.r22 + self.r44
    }

    pub fn to_matrix(&self) -> [[Complex64; 4]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let re = |x: f64| Complex64::new(x, 0.0);
        [
            [re(self.r11), z, z, self.r14],
            [z, re(self.r22), re(self.r23), z],
            [z, re(self.r23), re(self.r22), z],
            [self.r14.conj(), z, z, re(self.r44)],
        ]
    }

    /// Checks trace and X-state positivity, returning the first violation.
    pub fn validate(&self, tolerance: f64) -> std::result::Result<(), (&'static str, f64)> {
        let trace_err = self.trace() - 1.0;
        if trace_err.abs() > TRACE_TOLERANCE {
            return Err(("trace - 1", trace_err));
        }
        for (name, v) in [("rho_11", self.r11), ("rho_22", self.r22), ("rho_44", self.r44)] {
            if v < -tolerance {
                return Err((name, v));
            }
        }
        let outer = self.r11 * self.r44 - self.r14.norm_sqr();
        if outer < -tolerance {
            return Err(("rho_11 rho_44 - |rho_14|^2", outer));
        }
        let inner = self.r22 * self.r22 - self.r23 * self.r23;
        if inner < -tolerance {
            return Err(("rho_22^2 - rho_23^2", inner));
        }
        Ok(())
    }
}

/// Eigenvalues of `sqrt(rho rho~)`, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceSpectrum(pub [f64; 4]);

impl ConcurrenceSpectrum {
    pub fn from_unsorted(mut values: [f64; 4]) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }
}

/// Builds the X-state from the correlators by Wick's theorem:
///
/// * `r11 = g11^2 + |f12|^2 - g12^2`
/// * `r22 = r33 = g11 - r11`, `r44 = 1 - r11 - 2 r22`
/// * `r23 = g12`
/// * `r14 = <c_2 c_1> = -conj(f12)`; the conjugate converts the amplitude
///   phase convention of [`CorrelatorSet::f12`] to `e^{-iHt}` evolution.
pub fn assemble_rho(c: &CorrelatorSet) -> Result<XState> {
    let r11 = c.g11 * c.g11 + c.f12.norm_sqr() - c.g12 * c.g12;
    let r22 = c.g11 - r11;
    let rho = XState { r11, r22, r44: 1.0 - r11 - 2.0 * r22, r14: -c.f12.conj(), r23: c.g12 };
    rho.validate(POSITIVITY_TOLERANCE).map_err(|(quantity, value)| Error::Unphysical {
        quantity,
        value,
        lambda: c.lambda,
        t: c.t,
    })?;
    Ok(rho)
}

/// Closed-form spectrum: `| |r14| +- sqrt(r11 r44) |` and `|r22 +- r23|`.
pub fn x_spectrum(rho: &XState) -> Result<ConcurrenceSpectrum> {
    let mut radicand = rho.r11 * rho.r44;
    if radicand < 0.0 {
        if radicand < -RADICAND_CLAMP {
            return Err(Error::Positivity { quantity: "rho_11 rho_44", value: radicand });
        }
        radicand = 0.0;
    }
    let root = radicand.sqrt();
    let corner = rho.r14.norm();
    Ok(ConcurrenceSpectrum::from_unsorted([
        (corner + root).abs(),
        (corner - root).abs(),
        (rho.r22 + rho.r23).abs(),
        (rho.r22 - rho.r23).abs(),
    ]))
}

/// `max(0, l1 - l2 - l3 - l4)`.
pub fn concurrence(spec: &ConcurrenceSpectrum) -> f64 {
    let [l1, l2, l3, l4] = spec.0;
    (l1 - l2 - l3 - l4).max(0.0)
}

/// End-to-end concurrence of sites 1 and 2 at time `t`.
pub fn concurrence_at(params: ModelParams, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let corr = correlator_set(params, t, cfg)?;
    let rho = assemble_rho(&corr)?;
    let spec = x_spectrum(&rho).map_err(|e| e.at(params.lambda(), t))?;
    Ok(concurrence(&spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(rho: XState) -> [f64; 4] {
        x_spectrum(&rho).unwrap().values()
    }

    #[test]
    fn initial_state_from_static_correlators() {
        let rho = assemble_rho(&CorrelatorSet::initial(1.7)).unwrap();
        assert_eq!(rho, XState::INITIAL);
        assert_eq!(rho.trace(), 1.0);
        assert_eq!(spectrum(rho), [0.5, 0.5, 0.0, 0.0]);
        assert_eq!(concurrence(&x_spectrum(&rho).unwrap()), 0.0);
    }

    #[test]
    fn bell_and_mixed_states() {
        let bell = XState { r11: 0.5, r22: 0.0, r44: 0.5, r14: Complex64::new(0.5, 0.0), r23: 0.0 };
        assert_eq!(spectrum(bell), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(concurrence(&x_spectrum(&bell).unwrap()), 1.0);

        let mixed = XState { r11: 0.25, r22: 0.25, r44: 0.25, r14: Complex64::new(0.0, 0.0), r23: 0.0 };
        assert_eq!(spectrum(mixed), [0.25; 4]);
        assert_eq!(concurrence(&x_spectrum(&mixed).unwrap()), 0.0);
    }

    #[test]
    fn singlet_like_inner_block() {
        let psi = XState { r11: 0.0, r22: 0.5, r44: 0.0, r14: Complex64::new(0.0, 0.0), r23: -0.5 };
        assert_eq!(concurrence(&x_spectrum(&psi).unwrap()), 1.0);
    }

    #[test]
    fn wick_reduction_of_r11() {
        let c = CorrelatorSet { lambda: 1.0, t: 1.0, g11: 0.6, g12: 0.2, f12: Complex64::new(-0.1, 0.2) };
        let rho = assemble_rho(&c).unwrap();
        // g11 g11 - <c+1 c+2><c1 c2> - g12 g12 with <c+1 c+2> = -conj(f12)
        let direct = c.g11 * c.g11 - (-c.f12.conj() * c.f12).re - c.g12 * c.g12;
        assert!((rho.r11 - direct).abs() < 1e-15);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert_eq!(rho.r23, 0.2);
        assert_eq!(rho.r14, Complex64::new(0.1, 0.2));
    }

    #[test]
    fn unphysical_correlators_rejected() {
        // |f12| large enough to break r11 r44 >= |r14|^2
        let c = CorrelatorSet { lambda: 1.0, t: 1.0, g11: 0.5, g12: 0.25, f12: Complex64::new(0.0, 0.49) };
        assert!(matches!(assemble_rho(&c), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn negative_radicand() {
        let rho = XState { r11: -1e-6, r22: 0.25, r44: 0.5, r14: Complex64::new(0.0, 0.0), r23: 0.0 };
        assert!(x_spectrum(&rho).is_err());
        let rho = XState { r11: -1e-13, ..rho };
        let l = spectrum(rho);
        assert!(l.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn concurrence_vanishes_at_start() {
        let cfg = QuadratureConfig::default();
        for i in 0..50 {
            let lambda = 5.0 * i as f64 / 49.0;
            let c = concurrence_at(ModelParams::new(lambda).unwrap(), 0.0, &cfg).unwrap();
            assert!(c.abs() < 1e-10);
        }
    }

    #[test]
    fn field_only_chain_stays_unentangled() {
        let cfg = QuadratureConfig::default();
        let p = ModelParams::new(0.0).unwrap();
        for i in 0..40 {
            assert!(concurrence_at(p, 0.25 * i as f64, &cfg).unwrap() < 1e-14);
        }
    }

    #[test]
    fn physical_states_are_valid() {
        let cfg = QuadratureConfig::default();
        for i in 0..=12 {
            for j in 0..=20 {
                let (lambda, t) = (0.25 * i as f64, 0.5 * j as f64);
                let corr = correlator_set(ModelParams::new(lambda).unwrap(), t, &cfg).unwrap();
                let rho = assemble_rho(&corr).unwrap();
                assert!((rho.trace() - 1.0).abs() < 1e-10);
                assert!(rho.validate(1e-8).is_ok());
                let c = concurrence(&x_spectrum(&rho).unwrap());
                assert!((0.0..=1.0).contains(&c));
            }
        }
    }
}
