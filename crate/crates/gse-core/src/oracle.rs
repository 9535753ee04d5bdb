//! Brute-force reference: dense diagonalization of the Dicke Hamiltonian
//! H = ω_c a†a + ω₀S³ + χ(a + a†)(S⁺ + S⁻) in the symmetric sector, with the
//! photon number truncated, and exact golden-rule elements of one electron
//! extraction. Shares nothing with the perturbative modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{GseError, Result};
use crate::params::DickeParams;

pub const MAX_ELECTRONS: u64 = 8;
pub const DEFAULT_CUTOFF: usize = 12;
pub const CUTOFF_STEP: usize = 4;
pub const MAX_CUTOFF: usize = 40;
/// Ground-energy change that counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;

/// Basis |j = N/2, m⟩ ⊗ |γ⟩ with γ ≤ cutoff, ordered lexicographically in (m, γ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedHilbertSpace {
    pub n_electrons: u64,
    pub photon_cutoff: usize,
}

impl TruncatedHilbertSpace {
    pub fn new(n_electrons: u64, photon_cutoff: usize) -> Result<Self> {
        if n_electrons == 0 || n_electrons > MAX_ELECTRONS {
            return Err(GseError::Config(format!("oracle supports 1 <= N <= {MAX_ELECTRONS}, got {n_electrons}")));
        }
        if photon_cutoff < 8 {
            return Err(GseError::Config("oracle photon cutoff must be >= 8".into()));
        }
        Ok(Self { n_electrons, photon_cutoff })
    }

    /// 2j + 1 spin states.
    pub fn spin_states(&self) -> usize {
        self.n_electrons as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.spin_states() * (self.photon_cutoff + 1)
    }

    /// Index of (k, γ) with k = m + j.
    pub fn index(&self, k: usize, gamma: usize) -> usize {
        k * (self.photon_cutoff + 1) + gamma
    }

    /// Excitation-number parity n = k + γ mod 2 of basis state `i`.
    pub fn parity(&self, i: usize) -> usize {
        (i / (self.photon_cutoff + 1) + i % (self.photon_cutoff + 1)) % 2
    }

    pub fn hamiltonian(&self, omega_0: f64, omega_c: f64, chi: f64) -> DMatrix<f64> {
        let j = self.n_electrons as f64 / 2.0;
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.spin_states() {
            let m = -j + k as f64;
            for gamma in 0..=self.photon_cutoff {
                let i = self.index(k, gamma);
                h[(i, i)] = omega_c * gamma as f64 + omega_0 * m;
                if k + 1 < self.spin_states() {
                    let spin = chi * ((j - m) * (j + m + 1.0)).sqrt();
                    // S⁺ with a† and with a.
                    if gamma < self.photon_cutoff {
                        let f = self.index(k + 1, gamma + 1);
                        let v = spin * ((gamma + 1) as f64).sqrt();
                        h[(f, i)] += v;
                        h[(i, f)] += v;
                    }
                    if gamma > 0 {
                        let f = self.index(k + 1, gamma - 1);
                        let v = spin * (gamma as f64).sqrt();
                        h[(f, i)] += v;
                        h[(i, f)] += v;
                    }
                }
            }
        }
        h
    }

    /// ⟨S⁺ + S⁻⟩ in `state`.
    pub fn spin_flip_expectation(&self, state: &DVector<f64>) -> f64 {
        let j = self.n_electrons as f64 / 2.0;
        let mut total = 0.0;
        for k in 0..self.spin_states() - 1 {
            let m = -j + k as f64;
            let amp = ((j - m) * (j + m + 1.0)).sqrt();
            for gamma in 0..=self.photon_cutoff {
                total += 2.0 * amp * state[self.index(k + 1, gamma)] * state[self.index(k, gamma)];
            }
        }
        total
    }
}

/// Ascending spectrum of one sector.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub space: TruncatedHilbertSpace,
    pub energies: Vec<f64>,
    /// Columns are eigenvectors, in the order of `energies`.
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn solve(space: TruncatedHilbertSpace, omega_0: f64, omega_c: f64, chi: f64) -> Self {
        let eig = SymmetricEigen::new(space.hamiltonian(omega_0, omega_c, chi));
        let mut order: Vec<usize> = (0..space.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
        Self { space, energies, vectors }
    }

    /// Parity of eigenvector `col` (weight-majority of its basis states).
    pub fn parity(&self, col: usize) -> usize {
        let odd: f64 =
            (0..self.space.dim()).filter(|&i| self.space.parity(i) == 1).map(|i| self.vectors[(i, col)].powi(2)).sum();
        usize::from(odd > 0.5)
    }

    /// Indices of the lowest `count` eigenvectors of the given parity.
    pub fn lowest_of_parity(&self, parity: usize, count: usize) -> Vec<usize> {
        (0..self.energies.len()).filter(|&c| self.parity(c) == parity).take(count).collect()
    }
}

/// Lowest eigenpair with the photon cutoff escalated until converged.
pub fn exact_ground_state(
    n_electrons: u64,
    params: &DickeParams,
    photon_cutoff: usize,
) -> Result<(f64, DVector<f64>, TruncatedHilbertSpace)> {
    let (space, spectrum) = converged_spectrum(n_electrons, params, photon_cutoff)?;
    Ok((spectrum.energies[0], spectrum.vectors.column(0).into_owned(), space))
}

fn converged_spectrum(
    n_electrons: u64,
    params: &DickeParams,
    photon_cutoff: usize,
) -> Result<(TruncatedHilbertSpace, Spectrum)> {
    let mut cutoff = photon_cutoff;
    let mut current =
        Spectrum::solve(TruncatedHilbertSpace::new(n_electrons, cutoff)?, params.omega_0, params.omega_c, params.chi);
    loop {
        let next_cutoff = cutoff + CUTOFF_STEP;
        if next_cutoff > MAX_CUTOFF {
            return Err(GseError::CutoffNotConverged { cutoff, delta: f64::NAN });
        }
        let next = Spectrum::solve(
            TruncatedHilbertSpace::new(n_electrons, next_cutoff)?,
            params.omega_0,
            params.omega_c,
            params.chi,
        );
        let delta = (next.energies[0] - current.energies[0]).abs();
        if delta < CONVERGENCE_TOL {
            return Ok((current.space, current));
        }
        if next_cutoff + CUTOFF_STEP > MAX_CUTOFF {
            return Err(GseError::CutoffNotConverged { cutoff: next_cutoff, delta });
        }
        cutoff = next_cutoff;
        current = next;
    }
}

/// Removes one electron from a j = N/2 state onto the j' = (N−1)/2 basis:
/// a lower-band electron (amplitude √((J−M)/2J)) keeps k, an upper-band one
/// (amplitude √((J+M)/2J)) lowers k by one; γ is untouched.
pub fn remove_electron(state: &DVector<f64>, from: &TruncatedHilbertSpace, to: &TruncatedHilbertSpace) -> DVector<f64> {
    let big_j = from.n_electrons as f64 / 2.0;
    let mut out = DVector::zeros(to.dim());
    for k in 0..from.spin_states() {
        let big_m = -big_j + k as f64;
        for gamma in 0..=from.photon_cutoff.min(to.photon_cutoff) {
            let amp = state[from.index(k, gamma)];
            if k < to.spin_states() {
                out[to.index(k, gamma)] += amp * ((big_j - big_m) / (2.0 * big_j)).sqrt();
            }
            if k >= 1 {
                out[to.index(k - 1, gamma)] += amp * ((big_j + big_m) / (2.0 * big_j)).sqrt();
            }
        }
    }
    out
}

/// Exact extraction rates N·|M|² (units of Γ_el) out of G_N.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactTransitions {
    pub n_electrons: u64,
    pub photon_cutoff: usize,
    pub ground_energy: f64,
    pub dark: f64,
    /// (upper, lower).
    pub single: (f64, f64),
    /// (++, +−, −−); `None` when N − 1 has no three two-excitation states.
    pub double: Option<(f64, f64, f64)>,
    /// Σ over every final state of N·|M|².
    pub total: f64,
    /// N + ⟨G|S⁺ + S⁻|G⟩, the operator side of the completeness sum rule.
    pub sum_rule: f64,
}

impl ExactTransitions {
    pub fn sum_rule_residual(&self) -> f64 {
        (self.total - self.sum_rule).abs()
    }
}

pub fn exact_transition_elements(params: &DickeParams, photon_cutoff: usize) -> Result<ExactTransitions> {
    let n = params.n_electrons;
    if n < 2 {
        return Err(GseError::Config("extraction needs N >= 2".into()));
    }
    params.check_stability()?;
    let (space, spectrum) = converged_spectrum(n, params, photon_cutoff)?;
    let ground = spectrum.vectors.column(0).into_owned();
    let final_space = TruncatedHilbertSpace::new(n - 1, space.photon_cutoff)?;
    let finals = Spectrum::solve(final_space, params.omega_0, params.omega_c, params.chi);
    let removed = remove_electron(&ground, &space, &final_space);
    let nf = n as f64;
    let rates: Vec<f64> = (0..final_space.dim()).map(|c| nf * finals.vectors.column(c).dot(&removed).powi(2)).collect();

    let even = finals.lowest_of_parity(0, 4);
    let odd = finals.lowest_of_parity(1, 2);
    let double = (n >= 3 && even.len() == 4).then(|| (rates[even[3]], rates[even[2]], rates[even[1]]));
    Ok(ExactTransitions {
        n_electrons: n,
        photon_cutoff: space.photon_cutoff,
        ground_energy: spectrum.energies[0],
        dark: rates[even[0]],
        single: (rates[odd[1]], rates[odd[0]]),
        double,
        total: rates.iter().sum(),
        sum_rule: nf + space.spin_flip_expectation(&ground),
    })
}
