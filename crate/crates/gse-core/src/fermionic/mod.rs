//! Fermionic model: N singly occupied two-level sites coupled to one cavity
//! mode, solved sector by sector in total angular momentum j.
//!
//! Within a sector the rotating-wave Hamiltonian conserves the bare excitation
//! number n = k + γ (k matter excitations, γ photons, m = −j + k), so each
//! (j, n) block is a small symmetric tridiagonal matrix. The counter-rotating
//! part V = χ(aS⁻ + a†S⁺) couples n to n ± 2 and is kept to first order.

pub mod clebsch;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{GseError, Result};
use crate::params::DickeParams;
use crate::{Branch, PolaritonPair};

use clebsch::{c_coeff, d_coeff};

/// Energy denominators below this magnitude are treated as degenerate.
pub const MIN_DENOMINATOR: f64 = 1e-9;

/// Model constants shared by every sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionicModel {
    pub omega_0: f64,
    pub omega_c: f64,
    pub chi: f64,
    /// Lower band energy ω₁; only absolute energies (gates) depend on it.
    pub omega_1: f64,
    /// Constant left over from the diamagnetic squeeze.
    pub e0_shift: f64,
}

impl FermionicModel {
    pub fn from_dicke(dicke: &DickeParams, omega_1: f64) -> Self {
        Self { omega_0: dicke.omega_0, omega_c: dicke.omega_c, chi: dicke.chi, omega_1, e0_shift: dicke.e0_shift }
    }

    /// Band energy E₀(N, N₂) = ω₁N + 2ω₁N₂ + ω₀(N/2 + N₂), plus the squeeze constant.
    pub fn band_energy(&self, n_electrons: u64, n_double: u64) -> f64 {
        let (n, n2) = (n_electrons as f64, n_double as f64);
        self.omega_1 * (n + 2.0 * n2) + self.omega_0 * (0.5 * n + n2) + self.e0_shift
    }
}

/// Labels one (j, n) block; `two_j` = 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceKey {
    pub two_j: u64,
    pub n_exc: u64,
    pub n_electrons: u64,
    pub n_double: u64,
}

impl SubspaceKey {
    pub fn new(two_j: u64, n_exc: u64, n_electrons: u64) -> Result<Self> {
        let key = Self { two_j, n_exc, n_electrons, n_double: 0 };
        key.validate()?;
        Ok(key)
    }

    pub fn validate(&self) -> Result<()> {
        if self.two_j > self.n_electrons || !(self.n_electrons - self.two_j).is_multiple_of(2) {
            return Err(GseError::InvalidQuantumNumbers(format!(
                "j = {}/2 is not reachable with N = {}",
                self.two_j, self.n_electrons
            )));
        }
        Ok(())
    }

    /// Basis size; k runs over 0..=min(n, 2j).
    pub fn dim(&self) -> usize {
        self.n_exc.min(self.two_j) as usize + 1
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Photon number of basis index k.
    pub fn gamma(&self, k: usize) -> u64 {
        self.n_exc - k as u64
    }

    /// Basis index of photon number γ, if it lies in the block.
    pub fn index_of(&self, gamma: u64) -> Option<usize> {
        if gamma > self.n_exc {
            return None;
        }
        let k = (self.n_exc - gamma) as usize;
        (k < self.dim()).then_some(k)
    }

    fn with_n(&self, n_exc: u64) -> Self {
        Self { n_exc, ..*self }
    }
}

/// Symmetric tridiagonal block of the rotating-wave Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct TcKernel {
    pub key: SubspaceKey,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TcKernel {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.diag.len();
        DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                self.diag[r]
            } else if r + 1 == c {
                self.offdiag[r]
            } else if c + 1 == r {
                self.offdiag[c]
            } else {
                0.0
            }
        })
    }
}

/// Diagonal (n−k)ω_c + kω₀ + Ẽ₀ and couplings χ√(n−k+1)·√(k(2j−k+1)) between
/// k−1 and k, with Ẽ₀ = E₀(N, N₂) − jω₀.
pub fn tc_kernel(key: &SubspaceKey, model: &FermionicModel) -> Result<TcKernel> {
    key.validate()?;
    let e0 = model.band_energy(key.n_electrons, key.n_double) - key.j() * model.omega_0;
    let n = key.n_exc as f64;
    let two_j = key.two_j as f64;
    let diag = (0..key.dim()).map(|k| (n - k as f64) * model.omega_c + k as f64 * model.omega_0 + e0).collect();
    let offdiag = (1..key.dim())
        .map(|k| {
            let k = k as f64;
            let radicand = k * (two_j - k + 1.0);
            debug_assert!(radicand >= 0.0 && n - k + 1.0 >= 0.0);
            model.chi * (n - k + 1.0).sqrt() * radicand.sqrt()
        })
        .collect();
    Ok(TcKernel { key: *key, diag, offdiag })
}

/// Eigenpairs of one block; column β of `vectors` holds u^{(0)β} indexed by k.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceEigenbasis {
    pub key: SubspaceKey,
    /// Ascending.
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SubspaceEigenbasis {
    /// u^{(0)β}_γ, zero when γ lies outside the block.
    pub fn coeff(&self, beta: usize, gamma: u64) -> f64 {
        self.key.index_of(gamma).map_or(0.0, |k| self.vectors[(k, beta)])
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Ascending eigenpairs. Each vector's sign is fixed by making its first
/// non-negligible component (largest photon number) positive.
pub fn diagonalize_subspace(kernel: &TcKernel) -> SubspaceEigenbasis {
    let dim = kernel.diag.len();
    let eig = SymmetricEigen::new(kernel.to_dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let scale = v.amax();
        let pivot = v.iter().find(|c| c.abs() > 1e-12 * scale).copied().unwrap_or(1.0);
        vectors.set_column(col, &(v * pivot.signum()));
    }
    SubspaceEigenbasis { key: kernel.key, energies, vectors }
}

fn eigenbasis(key: &SubspaceKey, model: &FermionicModel) -> Result<SubspaceEigenbasis> {
    Ok(diagonalize_subspace(&tc_kernel(key, model)?))
}

/// Eigenstate dressed to first order in the counter-rotating coupling.
///
/// `coeffs` maps (n, γ) to u_γ(n) for n ∈ {n⁰ − 2, n⁰, n⁰ + 2}; the first-order
/// state is not renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedState {
    pub key: SubspaceKey,
    /// Index of the unperturbed eigenvector within its block (ascending energy).
    pub index: usize,
    /// Unperturbed absolute energy.
    pub energy: f64,
    pub coeffs: BTreeMap<(u64, u64), f64>,
}

impl DressedState {
    pub fn two_j(&self) -> u64 {
        self.key.two_j
    }

    pub fn n_electrons(&self) -> u64 {
        self.key.n_electrons
    }

    pub fn u(&self, n: u64, gamma: u64) -> f64 {
        self.coeffs.get(&(n, gamma)).copied().unwrap_or(0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// Label of the state for n⁰ ≤ 2 in a block of full size.
    pub fn label(&self) -> Option<StateLabel> {
        let top = self.key.dim().checked_sub(1)?;
        match (self.key.n_exc, top.checked_sub(self.index)?) {
            (0, 0) => Some(StateLabel::Ground),
            (1, 0) => Some(StateLabel::Single(Branch::Plus)),
            (1, 1) => Some(StateLabel::Single(Branch::Minus)),
            (2, 0) if top == 2 => Some(StateLabel::Double(PolaritonPair::PlusPlus)),
            (2, 1) if top == 2 => Some(StateLabel::Double(PolaritonPair::PlusMinus)),
            (2, 2) => Some(StateLabel::Double(PolaritonPair::MinusMinus)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    Ground,
    Single(Branch),
    Double(PolaritonPair),
}

/// A_{+,γ} = √((γ+1)(2j−n+γ)(n−γ+1)), the a†S⁺ element from (n, γ) to (n+2, γ+1).
pub fn a_plus(two_j: u64, n: u64, gamma: u64) -> f64 {
    let (j2, n, g) = (two_j as f64, n as f64, gamma as f64);
    ((g + 1.0) * (j2 - n + g).max(0.0) * (n - g + 1.0)).sqrt()
}

/// A_{−,γ} = √(γ(n−γ)(2j−n+γ+1)), the aS⁻ element from (n, γ) to (n−2, γ−1).
pub fn a_minus(two_j: u64, n: u64, gamma: u64) -> f64 {
    let (j2, n, g) = (two_j as f64, n as f64, gamma as f64);
    (g * (n - g) * (j2 - n + g + 1.0).max(0.0)).sqrt()
}

/// Dresses eigenvector `beta` of the (j, n⁰) block:
/// u(n⁰ ± 2) = −Σ_β̄ c±^{ββ̄} u^{(0)β̄}(n⁰ ± 2) with
/// c±^{ββ̄} = χ/(E_β̄ − E_β) · Σ_γ ū^{β̄}_{γ±1} u^β_γ A_{±,γ}.
pub fn dress_state_first_order(base: &SubspaceEigenbasis, beta: usize, model: &FermionicModel) -> Result<DressedState> {
    let key = base.key;
    let n0 = key.n_exc;
    let energy = base.energies[beta];
    let mut coeffs = BTreeMap::new();
    for k in 0..key.dim() {
        coeffs.insert((n0, key.gamma(k)), base.vectors[(k, beta)]);
    }

    let mut dress = |target: &SubspaceEigenbasis, up: bool| -> Result<()> {
        let n_target = target.key.n_exc;
        let mut u = vec![0.0; target.key.dim()];
        for bar in 0..target.len() {
            let mut overlap = 0.0;
            for k in 0..key.dim() {
                let gamma = key.gamma(k);
                let (gamma_to, amp) = if up {
                    (gamma + 1, a_plus(key.two_j, n0, gamma))
                } else if gamma >= 1 {
                    (gamma - 1, a_minus(key.two_j, n0, gamma))
                } else {
                    continue;
                };
                overlap += target.coeff(bar, gamma_to) * base.vectors[(k, beta)] * amp;
            }
            if overlap == 0.0 || model.chi == 0.0 {
                continue;
            }
            let denominator = target.energies[bar] - energy;
            if denominator.abs() < MIN_DENOMINATOR {
                return Err(GseError::DegenerateDenominator(denominator));
            }
            let c = model.chi / denominator * overlap;
            for (k, u_k) in u.iter_mut().enumerate() {
                *u_k -= c * target.vectors[(k, bar)];
            }
        }
        for (k, u_k) in u.into_iter().enumerate() {
            if u_k != 0.0 {
                coeffs.insert((n_target, target.key.gamma(k)), u_k);
            }
        }
        Ok(())
    };

    dress(&eigenbasis(&key.with_n(n0 + 2), model)?, true)?;
    if n0 >= 2 {
        dress(&eigenbasis(&key.with_n(n0 - 2), model)?, false)?;
    }
    Ok(DressedState { key, index: beta, energy, coeffs })
}

/// Builds and dresses eigenstate `index` (ascending) of the (j, n) block.
pub fn dressed_eigenstate(key: &SubspaceKey, index: usize, model: &FermionicModel) -> Result<DressedState> {
    let base = eigenbasis(key, model)?;
    if index >= base.len() {
        return Err(GseError::InvalidQuantumNumbers(format!("block {key:?} has no eigenstate {index}")));
    }
    dress_state_first_order(&base, index, model)
}

/// ⟨A, B⟩ˣ_F = Σ_n Σ_γ ū^B_γ(n + x) u^A_γ(n) F(m), m = −j^A + n − γ.
///
/// `weight` receives 2m.
pub fn pseudo_inner(a: &DressedState, b: &DressedState, x: i64, weight: impl Fn(i64) -> f64) -> f64 {
    let two_ja = a.two_j() as i64;
    a.coeffs
        .iter()
        .filter_map(|(&(n, gamma), &ua)| {
            let nb = n as i64 + x;
            if nb < 0 {
                return None;
            }
            let ub = b.u(nb as u64, gamma);
            (ub != 0.0).then(|| ub * ua * weight(-two_ja + 2 * (n as i64 - gamma as i64)))
        })
        .sum()
}

/// Multiplicity of spin j among N spin-½: C(N, N/2−j) − C(N, N/2−j−1).
pub fn degeneracy(n_electrons: u64, two_j: u64) -> Result<u128> {
    if two_j > n_electrons || !(n_electrons - two_j).is_multiple_of(2) {
        return Err(GseError::InvalidQuantumNumbers(format!("j = {two_j}/2 with N = {n_electrons}")));
    }
    let k = (n_electrons - two_j) / 2;
    let binom = |n: u64, k: u64| -> Option<u128> {
        (0..k).try_fold(1u128, |acc, i| Some(acc.checked_mul((n - i) as u128)? / (i as u128 + 1)))
    };
    let overflow = || GseError::InvalidQuantumNumbers(format!("degeneracy of N = {n_electrons} overflows"));
    let lower = if k == 0 { 0 } else { binom(n_electrons, k - 1).ok_or_else(overflow)? };
    Ok(binom(n_electrons, k).ok_or_else(overflow)? - lower)
}

/// Site-level macro state (j, m; N, N₂, γ) and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroState {
    pub two_j: u64,
    pub two_m: i64,
    pub n_electrons: u64,
    pub n_double: u64,
    pub gamma: u64,
}

impl MacroState {
    pub fn degeneracy(&self) -> Result<u128> {
        degeneracy(self.n_electrons, self.two_j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reservoir {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// Reservoir-side constants of the transport rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leads {
    pub gamma_el: f64,
    pub mu_l: f64,
    pub mu_r: f64,
    pub n_sites_total: u64,
}

impl Leads {
    pub fn mu(&self, reservoir: Reservoir) -> f64 {
        match reservoir {
            Reservoir::Left => self.mu_l,
            Reservoir::Right => self.mu_r,
        }
    }
}

/// Zero-temperature gate; θ(0) = 1.
pub fn chemical_gate(delta_ab: f64, mu: f64, direction: Direction) -> bool {
    match direction {
        Direction::Out => -mu - delta_ab >= 0.0,
        Direction::In => mu - delta_ab >= 0.0,
    }
}

/// Number of site-level ways κ to realize (N_A, N₂ᴬ) → (N_B, N₂ᴮ).
pub fn kappa(a: &SubspaceKey, b: &SubspaceKey, direction: Direction, n_sites_total: u64) -> u64 {
    let dn = b.n_electrons as i64 - a.n_electrons as i64;
    let dn2 = b.n_double as i64 - a.n_double as i64;
    match (direction, dn, dn2) {
        (Direction::Out, -1, 0) => a.n_electrons,
        (Direction::Out, 1, -1) => a.n_double,
        (Direction::In, 1, 0) => n_sites_total.saturating_sub(a.n_electrons + a.n_double),
        (Direction::In, -1, 1) => a.n_electrons,
        _ => 0,
    }
}

/// Bracketed pseudo-inner-product combination of the single-electron
/// transition A → B (N₂ = 0 channels).
pub fn transition_amplitude(a: &DressedState, b: &DressedState) -> Result<f64> {
    if a.key.n_double != 0 || b.key.n_double != 0 {
        return Err(GseError::UnsupportedDoubleOccupancy(a.key.n_double.max(b.key.n_double)));
    }
    let (ja, jb) = (a.two_j() as i64, b.two_j() as i64);
    let dn = b.n_electrons() as i64 - a.n_electrons() as i64;
    // 2Δᴺ_J = ΔN − 2(j^B − j^A).
    let two_dnj = dn - (jb - ja);
    let c_down = |m: i64| c_coeff(ja, m, jb, m + 1);
    let d_down = |m: i64| d_coeff(ja, m, jb, m - 1);
    let c_up = |m: i64| c_coeff(jb, m - 1, ja, m);
    let d_up = |m: i64| d_coeff(jb, m + 1, ja, m);
    let value = match (dn, two_dnj) {
        (-1, -2) => pseudo_inner(a, b, 1, c_down) + pseudo_inner(a, b, 0, d_down),
        (-1, 0) => pseudo_inner(a, b, 0, c_down) + pseudo_inner(a, b, -1, d_down),
        (1, 0) => pseudo_inner(a, b, 1, d_up) + pseudo_inner(a, b, 0, c_up),
        (1, 2) => pseudo_inner(a, b, 0, d_up) + pseudo_inner(a, b, -1, c_up),
        _ => 0.0,
    };
    Ok(value)
}

/// Γ^{A→B} for one reservoir and direction, in the same units as Γ_el.
pub fn transition_rate_fermionic(
    a: &DressedState,
    b: &DressedState,
    reservoir: Reservoir,
    direction: Direction,
    leads: &Leads,
) -> Result<f64> {
    let amplitude = transition_amplitude(a, b)?;
    let k = kappa(&a.key, &b.key, direction, leads.n_sites_total);
    if k == 0 || !chemical_gate(b.energy - a.energy, leads.mu(reservoir), direction) {
        return Ok(0.0);
    }
    Ok(leads.gamma_el * k as f64 * amplitude * amplitude)
}

/// Symmetric-sector states around one extraction event: G_N and the
/// single/double polaritons of N − 1.
#[derive(Debug, Clone)]
pub struct ExtractionStates {
    pub ground: DressedState,
    pub ground_after: DressedState,
    /// (upper, lower).
    pub singles: [DressedState; 2],
    /// (++, +−, −−); empty for N − 1 = 1.
    pub doubles: Vec<DressedState>,
}

pub fn extraction_states(model: &FermionicModel, n_electrons: u64) -> Result<ExtractionStates> {
    if n_electrons < 2 {
        return Err(GseError::Config("extraction needs N >= 2".into()));
    }
    let n = n_electrons;
    let ground = dressed_eigenstate(&SubspaceKey::new(n, 0, n)?, 0, model)?;
    let ground_after = dressed_eigenstate(&SubspaceKey::new(n - 1, 0, n - 1)?, 0, model)?;
    let single_key = SubspaceKey::new(n - 1, 1, n - 1)?;
    let singles = [dressed_eigenstate(&single_key, 1, model)?, dressed_eigenstate(&single_key, 0, model)?];
    let double_key = SubspaceKey::new(n - 1, 2, n - 1)?;
    let doubles = if double_key.dim() == 3 {
        (0..3).rev().map(|i| dressed_eigenstate(&double_key, i, model)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(ExtractionStates { ground, ground_after, singles, doubles })
}

/// κ·|amplitude|² for G_N → B_{N−1} with an open gate, in units of Γ_el.
fn extraction_rate(from: &DressedState, to: &DressedState) -> Result<f64> {
    let amplitude = transition_amplitude(from, to)?;
    Ok(from.n_electrons() as f64 * amplitude * amplitude)
}

/// Single-polariton GSE rates (Γ⁺, Γ⁻) at N electrons, in units of Γ_el.
pub fn single_polariton_rate_fermionic(model: &FermionicModel, n_electrons: u64) -> Result<(f64, f64)> {
    let s = extraction_states(model, n_electrons)?;
    Ok((extraction_rate(&s.ground, &s.singles[0])?, extraction_rate(&s.ground, &s.singles[1])?))
}

/// Double-polariton GSE rate towards one pair state; needs N ≥ 3.
pub fn double_polariton_rate_fermionic(model: &FermionicModel, n_electrons: u64, pair: PolaritonPair) -> Result<f64> {
    let s = extraction_states(model, n_electrons)?;
    let idx = PolaritonPair::ALL.iter().position(|&p| p == pair).unwrap_or(0);
    let target = s.doubles.get(idx).ok_or_else(|| GseError::Config("double-polariton states need N >= 3".into()))?;
    extraction_rate(&s.ground, target)
}

/// Dark channel G_N → G_{N−1}, in units of Γ_el.
pub fn dark_rate_fermionic(model: &FermionicModel, n_electrons: u64) -> Result<f64> {
    let s = extraction_states(model, n_electrons)?;
    extraction_rate(&s.ground, &s.ground_after)
}

/// Mixing angle of the single-polariton states |B'⟩ = cos θ|matter⟩ + sin θ|photon⟩,
/// tan θ₊ = (−Δ + √(4g² + Δ²))/(2g) and θ₋ = θ₊ + π/2.
pub fn mixing_angle(omega_0: f64, omega_c: f64, g: f64, branch: Branch) -> f64 {
    let delta = omega_0 - omega_c;
    let r = (4.0 * g * g + delta * delta).sqrt();
    // atan2 keeps the g → 0 limits finite.
    let theta_plus = if delta > 0.0 { (2.0 * g).atan2(delta + r) } else { (r - delta).atan2(2.0 * g) };
    match branch {
        Branch::Plus => theta_plus,
        Branch::Minus => theta_plus + std::f64::consts::FRAC_PI_2,
    }
}

/// Large-N closed form of the single-polariton rate:
/// Γ/Γ_el = [g ω_c (g cos θ − ω₀ sin θ) / ((ω₀ + ω_c)(ω₀ω_c − g²))]².
pub fn gse_rate_closed_form(omega_0: f64, omega_c: f64, g: f64, branch: Branch) -> Result<f64> {
    crate::params::check_stability(omega_0, omega_c, g)?;
    if g == 0.0 {
        return Ok(0.0);
    }
    let theta = mixing_angle(omega_0, omega_c, g, branch);
    let amplitude =
        g * omega_c * (g * theta.cos() - omega_0 * theta.sin()) / ((omega_0 + omega_c) * (omega_0 * omega_c - g * g));
    Ok(amplitude * amplitude)
}
