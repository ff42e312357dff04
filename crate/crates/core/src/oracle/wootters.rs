//! Generic two-qubit concurrence.
//!
//! `rho~ = (sy x sy) rho* (sy x sy)`; the eigenvalues of the non-Hermitian
//! product `rho rho~` are real and nonnegative, and their square roots give
//! the concurrence `max(0, l1 - l2 - l3 - l4)`. The eigenvalues come from the
//! characteristic polynomial (Faddeev-LeVerrier) and the quartic formula.
//!
//! Repeated eigenvalues make the polynomial roots sensitive: a k-fold root
//! moves by about the k-th root of the coefficient rounding. The initial
//! state has two double pairs, which leaves its concurrence accurate to about
//! 1e-8, and pure states (a triple zero) to about 1e-3. Simple spectra are
//! resolved to near machine precision.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::quartic::{refine_real_roots, solve_quartic};
use super::{DensityMatrix4, OracleError};

/// Negative eigenvalues above this are root-finding noise and are clamped to
/// zero; it covers the triple-root spread for pure states.
const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-5;

/// `sy x sy`, which is real.
fn sigma_y_y() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

pub fn spin_flip(rho: &DensityMatrix4) -> Matrix4<Complex64> {
    let yy = sigma_y_y();
    yy * rho.0.map(|z| z.conj()) * yy
}

/// Monic characteristic polynomial coefficients `[c3, c2, c1, c0]` of `m`,
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
pub fn characteristic_polynomial(m: &Matrix4<Complex64>) -> [Complex64; 4] {
    let identity = Matrix4::<Complex64>::identity();
    let mut coeffs = [Complex64::new(0.0, 0.0); 4];
    let mut aux = identity;
    for k in 1..=4 {
        let product = m * aux;
        let c = -product.trace() / k as f64;
        coeffs[k - 1] = c;
        aux = product + identity * c;
    }
    coeffs
}

/// Eigenvalues of `sqrt(rho rho~)`, sorted descending.
pub fn sqrt_rho_rho_tilde_spectrum(rho: &DensityMatrix4) -> Result<[f64; 4], OracleError> {
    let product = rho.0 * spin_flip(rho);
    let [c3, c2, c1, _] = characteristic_polynomial(&product);
    // det(rho rho~) = |det rho|^2. The recursion's constant term carries an
    // absolute error near eps, which swamps it when two eigenvalues are tiny;
    // the LU determinant keeps its relative accuracy.
    let c0 = Complex64::new(rho.0.determinant().norm_sqr(), 0.0);
    // The spectrum is real, so the polynomial is too up to rounding. Nearly
    // equal roots can come back as a conjugate pair `m +- i e`; real starting
    // points `m + e` and `m - e` separate them again.
    let start = solve_quartic(c3, c2, c1, c0).map(|z| z.re + z.im);
    let roots = refine_real_roots(start, [c3.re, c2.re, c1.re, c0.re]);
    let mut values = [0.0; 4];
    for (v, mu) in values.iter_mut().zip(roots) {
        if mu < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(OracleError::NegativeEigenvalue(mu));
        }
        // small negative values are rounding noise
        *v = mu.max(0.0).sqrt();
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

pub fn wootters_generic(rho: &DensityMatrix4) -> Result<f64, OracleError> {
    let [l1, l2, l3, l4] = sqrt_rho_rho_tilde_spectrum(rho)?;
    Ok((l1 - l2 - l3 - l4).max(0.0))
}
