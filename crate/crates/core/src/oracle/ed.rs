//! Exact diagonalization of the periodic spin chain.
//!
//! Basis index bit `N - 1 - i` holds site `i` (site 1 is the most significant
//! bit) and a set bit is an up spin. The Hamiltonian conserves the parity of
//! the number of up spins, so it is diagonalized as two dense real symmetric
//! blocks. The initial mixture `(|N+><N+| + |N-><N-|) / 2` is evolved as its two
//! pure components.

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use super::{check_sites, DensityMatrix4, OracleError, SpinChainSpec};
use crate::density::basis;

/// Dense `2^N x 2^N` Hamiltonian
/// `H = -1/2 sum_i (lambda sx_i sx_{i+1} + sz_i)` with site `N` coupled to
/// site 1.
pub fn build_hamiltonian(spec: &SpinChainSpec) -> DMatrix<f64> {
    let dim = spec.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for state in 0..dim {
        h[(state, state)] = diagonal_energy(spec.n_sites(), state);
        for (flipped, amp) in bond_flips(spec, state) {
            h[(flipped, state)] += amp;
        }
    }
    h
}

#[inline]
fn site_bit(n: usize, site: usize) -> usize {
    n - 1 - site
}

fn diagonal_energy(n: usize, state: usize) -> f64 {
    // bits set to basis::UP are up spins
    let up = state.count_ones() as f64;
    let down = n as f64 - up;
    -0.5 * (up - down)
}

/// `sx_i sx_{i+1}` flips both spins of every bond.
fn bond_flips(spec: &SpinChainSpec, state: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
    let n = spec.n_sites();
    let amp = -0.5 * spec.lambda();
    (0..n).map(move |i| {
        let j = (i + 1) % n;
        let mask = (1 << site_bit(n, i)) | (1 << site_bit(n, j));
        (state ^ mask, amp)
    })
}

/// The two pure components `|N+>`, `|N->` of the initial state, each a
/// product of `(|u> +- |d>) / sqrt 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub plus: DVector<f64>,
    pub minus: DVector<f64>,
}

pub fn initial_state(n_sites: usize) -> Result<InitialState, OracleError> {
    check_sites(n_sites)?;
    let dim = 1usize << n_sites;
    let amp = (0.5f64).powf(n_sites as f64 / 2.0);
    let plus = DVector::from_element(dim, amp);
    let minus = DVector::from_fn(dim, |state, _| {
        let downs = n_sites as u32 - state.count_ones();
        if downs.is_multiple_of(2) {
            amp
        } else {
            -amp
        }
    });
    Ok(InitialState { plus, minus })
}

/// One parity sector: its basis states and eigendecomposition.
#[derive(Debug, Clone)]
struct Sector {
    states: Vec<usize>,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl Sector {
    fn new(spec: &SpinChainSpec, parity: u32) -> Self {
        let states: Vec<usize> = (0..spec.dim()).filter(|s| s.count_ones() % 2 == parity).collect();
        let mut index = vec![usize::MAX; spec.dim()];
        for (i, &s) in states.iter().enumerate() {
            index[s] = i;
        }
        let m = states.len();
        let mut h = DMatrix::zeros(m, m);
        for (col, &s) in states.iter().enumerate() {
            h[(col, col)] = diagonal_energy(spec.n_sites(), s);
            for (flipped, amp) in bond_flips(spec, s) {
                h[(index[flipped], col)] += amp;
            }
        }
        let eig = SymmetricEigen::new(h);
        Self { states, energies: eig.eigenvalues, vectors: eig.eigenvectors }
    }
}

/// Eigendecomposition of one chain, reusable for any number of times.
#[derive(Debug, Clone)]
pub struct EdEvolution {
    spec: SpinChainSpec,
    sectors: [Sector; 2],
    /// Eigenbasis coefficients of `|N+>` and `|N->`, per sector.
    coefficients: [[DVector<f64>; 2]; 2],
}

impl EdEvolution {
    pub fn new(spec: SpinChainSpec) -> Self {
        let init = initial_state(spec.n_sites()).expect("spec validated chain length");
        let sectors = [Sector::new(&spec, 0), Sector::new(&spec, 1)];
        let coefficients = std::array::from_fn(|s| {
            let sector = &sectors[s];
            [&init.plus, &init.minus].map(|full| {
                let restricted = DVector::from_iterator(sector.states.len(), sector.states.iter().map(|&i| full[i]));
                sector.vectors.tr_mul(&restricted)
            })
        });
        Self { spec, sectors, coefficients }
    }

    pub fn spec(&self) -> &SpinChainSpec {
        &self.spec
    }

    /// Ground-state energy over both parity sectors.
    pub fn ground_energy(&self) -> f64 {
        self.sectors.iter().map(|s| s.energies.min()).fold(f64::INFINITY, f64::min)
    }

    /// `e^{-iHt}` applied to the pure component `which` (0 = plus, 1 = minus).
    fn evolve_component(&self, which: usize, t: f64) -> Vec<Complex64> {
        let mut psi = vec![Complex64::new(0.0, 0.0); self.spec.dim()];
        for (sector, coeffs) in self.sectors.iter().zip(&self.coefficients) {
            let c = &coeffs[which];
            let (cos_part, sin_part): (Vec<f64>, Vec<f64>) = c
                .iter()
                .zip(sector.energies.iter())
                .map(|(&ci, &e)| {
                    let (s, co) = (e * t).sin_cos();
                    (ci * co, -ci * s)
                })
                .unzip();
            let re = &sector.vectors * DVector::from_vec(cos_part);
            let im = &sector.vectors * DVector::from_vec(sin_part);
            for (k, &state) in sector.states.iter().enumerate() {
                psi[state] = Complex64::new(re[k], im[k]);
            }
        }
        psi
    }

    /// Reduced density matrix of sites 1 and 2 at time `t`.
    pub fn reduce_at(&self, t: f64) -> DensityMatrix4 {
        let plus = self.evolve_component(0, t);
        let minus = self.evolve_component(1, t);
        let mut rho = reduce_pair(self.spec.n_sites(), &plus);
        rho.0 += reduce_pair(self.spec.n_sites(), &minus).0;
        rho.0 *= Complex64::new(0.5, 0.0);
        rho
    }
}

/// Partial trace of `|psi><psi|` over sites 3..N, in the
/// `{|uu>, |ud>, |du>, |dd>}` basis.
fn reduce_pair<T>(n: usize, psi: &[T]) -> DensityMatrix4
where
    T: Copy + Into<Complex64>,
{
    let rest = 1usize << (n - 2);
    let mut m = Matrix4::<Complex64>::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..rest {
                let x: Complex64 = psi[(a << (n - 2)) | r].into();
                let y: Complex64 = psi[(b << (n - 2)) | r].into();
                acc += x * y.conj();
            }
            m[(basis::row_of_bits(a), basis::row_of_bits(b))] = acc;
        }
    }
    DensityMatrix4(m)
}

/// Diagonalizes the chain and returns the reduced matrix at `t`. Prefer
/// [`EdEvolution`] when evaluating several times.
pub fn evolve_and_reduce(spec: SpinChainSpec, t: f64) -> DensityMatrix4 {
    EdEvolution::new(spec).reduce_at(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticReport {
    pub n_sites: usize,
    /// `max_i |<sz_i>|` in the initial state.
    pub max_sigma_z: f64,
    /// Entrywise deviation of the initial two-site matrix from `1/4` on the X.
    pub max_rho_deviation: f64,
}

impl StaticReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_sigma_z.max(self.max_rho_deviation)
    }
}

/// Initial-state checks on the spin side, from the product states directly.
pub fn static_check(n_sites: usize) -> Result<StaticReport, OracleError> {
    if n_sites < 6 {
        return Err(OracleError::ChainTooShortForStaticCheck(n_sites));
    }
    let init = initial_state(n_sites)?;
    let mut max_sigma_z = 0.0f64;
    for site in 0..n_sites {
        let bit = 1 << site_bit(n_sites, site);
        let sz = |v: &DVector<f64>| -> f64 {
            v.iter().enumerate().map(|(s, a)| if s & bit != 0 { a * a } else { -a * a }).sum()
        };
        max_sigma_z = max_sigma_z.max((0.5 * (sz(&init.plus) + sz(&init.minus))).abs());
    }
    let mut rho = reduce_pair(n_sites, init.plus.as_slice());
    rho.0 += reduce_pair(n_sites, init.minus.as_slice()).0;
    rho.0 *= Complex64::new(0.5, 0.0);
    let expected = DensityMatrix4::from_xstate(&crate::density::XState::INITIAL);
    Ok(StaticReport { n_sites, max_sigma_z, max_rho_deviation: rho.max_deviation(&expected) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(n: usize, lambda: f64) -> SpinChainSpec {
        SpinChainSpec::new(n, lambda).unwrap()
    }

    #[test]
    fn field_only_hamiltonian_is_diagonal() {
        let h = build_hamiltonian(&spec(4, 0.0));
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    assert_eq!(h[(i, j)], 0.0);
                }
            }
        }
        assert_eq!(h[(15, 15)], -2.0);
        assert_eq!(h[(0, 0)], 2.0);
        let min = (0..16).map(|i| h[(i, i)]).fold(f64::INFINITY, f64::min);
        assert_eq!(min, -2.0);
    }

    #[test]
    fn hamiltonian_is_real_symmetric() {
        let h = build_hamiltonian(&spec(6, 1.37));
        assert_eq!(h, h.transpose());
        // periodic bond between the last and the first site
        let flipped = 0b100001;
        assert_eq!(h[(flipped, 0)], -0.5 * 1.37);
    }

    #[test]
    fn critical_ground_energy() {
        let ed = EdEvolution::new(spec(8, 1.0));
        let per_site = ed.ground_energy() / 8.0;
        // -(1/pi) int_0^pi cos(k/2) dk = -2/pi
        let thermodynamic = -2.0 / PI;
        assert!((per_site - thermodynamic).abs() < 0.02, "{per_site}");
        let full = SymmetricEigen::new(build_hamiltonian(&spec(8, 1.0)));
        assert!((full.eigenvalues.min() - ed.ground_energy()).abs() < 1e-10);
    }

    #[test]
    fn initial_state_properties() {
        let init = initial_state(6).unwrap();
        assert!((init.plus.norm() - 1.0).abs() < 1e-14);
        assert!((init.minus.norm() - 1.0).abs() < 1e-14);
        assert!(init.plus.dot(&init.minus).abs() < 1e-14);

        // <sx_1 sx_2> = 1 in both components
        let n = 6;
        let mask = (1 << site_bit(n, 0)) | (1 << site_bit(n, 1));
        for v in [&init.plus, &init.minus] {
            let xx: f64 = (0..v.len()).map(|s| v[s] * v[s ^ mask]).sum();
            assert!((xx - 1.0).abs() < 1e-14);
        }
        // purity of the equal mixture of orthogonal states
        let overlap = init.plus.dot(&init.minus);
        let purity = 0.25 * (1.0 + 2.0 * overlap * overlap + 1.0);
        assert!((purity - 0.5).abs() < 1e-14);
    }

    #[test]
    fn static_checks() {
        for n in [6, 8, 12] {
            let report = static_check(n).unwrap();
            assert!(report.max_deviation() < 1e-12, "{report:?}");
        }
        assert!(static_check(4).is_err());
    }

    #[test]
    fn evolution_at_zero_is_initial_matrix() {
        let rho = evolve_and_reduce(spec(8, 0.7), 0.0);
        let expected = DensityMatrix4::from_xstate(&crate::density::XState::INITIAL);
        assert!(rho.max_deviation(&expected) < 1e-12);
    }

    #[test]
    fn evolved_matrix_is_x_shaped_and_valid() {
        let ed = EdEvolution::new(spec(8, 1.5));
        for t in [0.3, 2.0, 5.5] {
            let rho = ed.reduce_at(t);
            assert!(rho.max_non_x() < 1e-10);
            rho.validate().unwrap();
            // the two inner diagonal entries coincide by reflection symmetry
            assert!((rho.get(1, 1) - rho.get(2, 2)).norm() < 1e-10);
        }
    }

    #[test]
    fn field_only_evolution_is_precession() {
        // Without coupling each spin precesses independently: the inner
        // block stays at 1/4 and the corner picks up the phase e^{2it}.
        let t = 0.4;
        let rho = evolve_and_reduce(spec(6, 0.0), t);
        assert!((rho.get(1, 2) - 0.25).norm() < 1e-12);
        let corner = 0.25 * Complex64::new((2.0 * t).cos(), (2.0 * t).sin());
        assert!((rho.get(0, 3) - corner).norm() < 1e-12);
    }
}
