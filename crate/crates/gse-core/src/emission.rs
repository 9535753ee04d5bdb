//! End-to-end observables: gated GSE rates, fluxes, extra-cavity conversion
//! and the two-peak emission spectrum.

use std::f64::consts::PI;

use crate::bosonic_full::{hopfield_modes, photon_weight_full, single_polariton_rate_full};
use crate::bosonic_pert::{jc_basis_or_limit, perturbative_betas, photon_weight_pert, single_polariton_rate_pert};
use crate::error::{GseError, Result};
pub use crate::fermionic::{chemical_gate, Direction};
use crate::fermionic::{extraction_states, transition_amplitude, FermionicModel};
use crate::params::SystemParams;
use crate::{Branch, Model};

/// Per-branch (Γ_tot⁺, Γ_tot⁻) = |α_ph|²·Γ_em·Γ_cav/(Γ_dark + Γ_cav).
pub fn total_emission(
    rate_em: (f64, f64),
    photon_weight: (f64, f64),
    gamma_cav: f64,
    gamma_dark: (f64, f64),
) -> (f64, f64) {
    debug_assert!(gamma_cav > 0.0);
    let convert = |rate: f64, weight: f64, dark: f64| weight * rate * gamma_cav / (dark + gamma_cav);
    (convert(rate_em.0, photon_weight.0, gamma_dark.0), convert(rate_em.1, photon_weight.1, gamma_dark.1))
}

/// Γ_GSE = Γ⁺ + Γ⁻, plus the double-polariton channels when given. The dark
/// G → G channel never contributes.
pub fn gse_total_rate(single: (f64, f64), double: Option<[f64; 3]>) -> f64 {
    single.0 + single.1 + double.map_or(0.0, |d| d.iter().sum())
}

/// One branch of a [`SweepRecord`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchObservables {
    /// Γ_em in units of Γ_el.
    pub rate_em: f64,
    /// ω·Γ_em in units of ω₀Γ_el.
    pub flux: f64,
    pub photon_weight: f64,
    pub rate_tot: f64,
}

impl BranchObservables {
    /// Emitted photon frequency; `None` when the branch carries no rate.
    pub fn frequency(&self) -> Option<f64> {
        (self.rate_em > 0.0).then(|| self.flux / self.rate_em)
    }
}

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub model: Model,
    /// (ω_c − ω₀)/ω₀ of the bare input.
    pub detuning: f64,
    /// Bare collective coupling g_N/ω₀.
    pub g: f64,
    pub n_electrons: u64,
    pub plus: BranchObservables,
    pub minus: BranchObservables,
}

impl SweepRecord {
    pub fn branch(&self, branch: Branch) -> &BranchObservables {
        match branch {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }

    pub fn gse_rate(&self) -> f64 {
        gse_total_rate((self.plus.rate_em, self.minus.rate_em), None)
    }

    pub fn gse_flux(&self) -> f64 {
        self.plus.flux + self.minus.flux
    }

    pub fn tot_rate(&self) -> f64 {
        self.plus.rate_tot + self.minus.rate_tot
    }

    pub fn tot_flux(&self) -> f64 {
        self.plus.frequency().map_or(0.0, |w| w * self.plus.rate_tot)
            + self.minus.frequency().map_or(0.0, |w| w * self.minus.rate_tot)
    }
}

/// Frequencies, rates and photon weights of the two final single-polariton
/// states, per branch (+, −).
struct Channels {
    omega: (f64, f64),
    rate: (f64, f64),
    weight: (f64, f64),
}

fn channels(model: Model, params: &SystemParams, raw_dicke: bool) -> Result<Channels> {
    let dicke = params.dicke(raw_dicke);
    let (w0, wc) = (dicke.omega_0, dicke.omega_c);
    match model {
        Model::Pert => {
            let g = dicke.g();
            let basis = jc_basis_or_limit(w0, wc, g)?;
            let betas = perturbative_betas(&basis, g);
            Ok(Channels {
                omega: (basis.omega(Branch::Plus), basis.omega(Branch::Minus)),
                rate: single_polariton_rate_pert(&basis, &betas),
                weight: (
                    photon_weight_pert(&basis, &betas, Branch::Plus),
                    photon_weight_pert(&basis, &betas, Branch::Minus),
                ),
            })
        }
        Model::Full => {
            // The final polaritons live in the N − 1 system.
            let g = dicke.g_minus_one();
            let modes = hopfield_modes(w0, wc, g)?;
            Ok(Channels {
                omega: (modes.lambda_plus, modes.lambda_minus),
                rate: single_polariton_rate_full(w0, wc, g)?,
                weight: (photon_weight_full(&modes, Branch::Plus), photon_weight_full(&modes, Branch::Minus)),
            })
        }
        Model::Fermionic => {
            dicke.check_stability()?;
            let model = FermionicModel::from_dicke(&dicke, params.omega_1().unwrap_or(0.0));
            let states = extraction_states(&model, params.n_electrons)?;
            let n = params.n_electrons as f64;
            let e_after = states.ground_after.energy;
            let mut omega = [0.0; 2];
            let mut rate = [0.0; 2];
            let mut weight = [0.0; 2];
            for (i, state) in states.singles.iter().enumerate() {
                omega[i] = state.energy - e_after;
                let amplitude = transition_amplitude(&states.ground, state)?;
                rate[i] = n * amplitude * amplitude;
                // Photon fraction of the one-excitation eigenvector.
                let photon = state.u(1, 1).powi(2);
                let matter = state.u(1, 0).powi(2);
                weight[i] = photon / (photon + matter);
            }
            Ok(Channels { omega: (omega[0], omega[1]), rate: (rate[0], rate[1]), weight: (weight[0], weight[1]) })
        }
    }
}

/// Whether the left lead can absorb the extracted electron for a final
/// polariton of frequency `omega`. Without an ω₂ reference the lead is taken
/// to sit low enough for every extraction.
fn extraction_open(params: &SystemParams, omega: f64) -> bool {
    match params.omega_1() {
        // Δ = E_B − E_G = −ω₁ + ω with unperturbed energies.
        Some(omega_1) => chemical_gate(omega - omega_1, params.mu_l, Direction::Out),
        None => true,
    }
}

/// Full observables for one model at one parameter point.
pub fn sweep_record(model: Model, params: &SystemParams, raw_dicke: bool) -> Result<SweepRecord> {
    params.validate()?;
    if params.n_double != 0 {
        return Err(GseError::UnsupportedDoubleOccupancy(params.n_double));
    }
    let c = channels(model, params, raw_dicke)?;
    let gate = |omega: f64, rate: f64| if extraction_open(params, omega) { rate } else { 0.0 };
    let rate = (gate(c.omega.0, c.rate.0), gate(c.omega.1, c.rate.1));
    let tot = total_emission(rate, c.weight, params.gamma_cav, (params.gamma_dark_plus, params.gamma_dark_minus));
    let branch = |rate: f64, omega: f64, weight: f64, tot: f64| BranchObservables {
        rate_em: rate,
        flux: omega * rate,
        photon_weight: weight,
        rate_tot: tot,
    };
    Ok(SweepRecord {
        model,
        detuning: (params.omega_c - params.omega_0) / params.omega_0,
        g: params.collective_coupling() / params.omega_0,
        n_electrons: params.n_electrons,
        plus: branch(rate.0, c.omega.0, c.weight.0, tot.0),
        minus: branch(rate.1, c.omega.1, c.weight.1, tot.1),
    })
}

/// Lorentzian of unit area and full width `width` centred at `center`.
pub fn lorentzian(omega: f64, center: f64, width: f64) -> f64 {
    let half = 0.5 * width;
    half / (PI * ((omega - center).powi(2) + half * half))
}

/// Two Lorentzians of full width Γ_cav at ω±, weighted by Γ_tot± so that the
/// integral over all frequencies equals the record's tot_rate.
pub fn emission_spectrum(record: &SweepRecord, gamma_cav: f64, frequencies: &[f64]) -> Result<Vec<f64>> {
    if gamma_cav.is_nan() || gamma_cav <= 0.0 {
        return Err(GseError::Config(format!("linewidth must be positive, got {gamma_cav}")));
    }
    let peaks: Vec<(f64, f64)> =
        Branch::BOTH.iter().map(|&b| record.branch(b)).filter_map(|o| o.frequency().map(|w| (w, o.rate_tot))).collect();
    Ok(frequencies
        .iter()
        .map(|&w| peaks.iter().map(|&(center, h)| h * lorentzian(w, center, gamma_cav)).sum())
        .collect())
}
