//! Physical inputs and the diamagnetic renormalization onto the Dicke form.
//!
//! Frequencies are dimensionless in units of ω₀; rates are reported in units
//! of Γ_el.

use crate::error::{GseError, Result};

/// Smallest Γ_cav/Γ_el ratio accepted by the emission pipelines.
pub const MIN_CAVITY_TO_ELECTRON_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_0: f64,
    pub omega_c: f64,
    /// Single-electron coupling χ.
    pub chi: f64,
    pub n_electrons: u64,
    pub n_sites_total: u64,
    /// Doubly occupied sites N₂. Representable, rejected by the rate pipelines.
    pub n_double: u64,
    pub gamma_el: f64,
    pub gamma_cav: f64,
    pub gamma_dark_plus: f64,
    pub gamma_dark_minus: f64,
    pub mu_l: f64,
    pub mu_r: f64,
    /// Absolute energy of the upper band, ω₂. Only the gates need it, so it
    /// has no default: ω₁ = ω₂ − ω₀ is otherwise unconstrained.
    pub omega_2_ref: Option<f64>,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega_0: 1.0,
            omega_c: 1.0,
            chi: 0.0,
            n_electrons: 1,
            n_sites_total: 1,
            n_double: 0,
            gamma_el: 1e-3,
            gamma_cav: 1e-1,
            gamma_dark_plus: 0.0,
            gamma_dark_minus: 0.0,
            mu_l: -1.0,
            mu_r: 0.0,
            omega_2_ref: None,
        }
    }
}

impl SystemParams {
    /// Dicke-form parameters with `chi` chosen so that χ√N = `g`.
    pub fn with_collective_coupling(omega_c: f64, g: f64, n_electrons: u64) -> Self {
        Self {
            omega_c,
            chi: g / (n_electrons as f64).sqrt(),
            n_electrons,
            n_sites_total: n_electrons,
            ..Self::default()
        }
    }

    pub fn collective_coupling(&self) -> f64 {
        collective_coupling(self.chi, self.n_electrons)
    }

    /// Checks every invariant of the parameter set; see [`check_stability`]
    /// for the coupling bound.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_0,
            self.omega_c,
            self.chi,
            self.gamma_el,
            self.gamma_cav,
            self.gamma_dark_plus,
            self.gamma_dark_minus,
            self.mu_l,
            self.mu_r,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(GseError::Config("non-finite parameter".into()));
        }
        if self.omega_0 <= 0.0 || self.omega_c <= 0.0 {
            return Err(GseError::Config(format!(
                "omega_0 = {} and omega_c = {} must be positive",
                self.omega_0, self.omega_c
            )));
        }
        if self.chi < 0.0 {
            return Err(GseError::Config(format!("chi = {} must be non-negative", self.chi)));
        }
        if self.n_electrons < 1 || self.n_electrons > self.n_sites_total {
            return Err(GseError::Config(format!(
                "need 1 <= N <= N_T, got N = {}, N_T = {}",
                self.n_electrons, self.n_sites_total
            )));
        }
        if self.gamma_el < 0.0 || self.gamma_dark_plus < 0.0 || self.gamma_dark_minus < 0.0 {
            return Err(GseError::Config("rates must be non-negative".into()));
        }
        if self.gamma_cav < MIN_CAVITY_TO_ELECTRON_RATIO * self.gamma_el {
            return Err(GseError::Config(format!(
                "gamma_cav = {} must exceed {} * gamma_el = {}",
                self.gamma_cav,
                MIN_CAVITY_TO_ELECTRON_RATIO,
                MIN_CAVITY_TO_ELECTRON_RATIO * self.gamma_el
            )));
        }
        if self.mu_l >= self.mu_r {
            return Err(GseError::Config(format!("need mu_l < mu_r, got {} and {}", self.mu_l, self.mu_r)));
        }
        if let Some(w2) = self.omega_2_ref {
            if !w2.is_finite() {
                return Err(GseError::Config("omega_2_ref must be finite".into()));
            }
            if self.mu_r >= w2 {
                return Err(GseError::Config(format!("need mu_r < omega_2_ref, got {} and {w2}", self.mu_r)));
            }
        }
        check_stability(self.omega_0, self.omega_c, self.collective_coupling())
    }

    /// Band offset ω₁ = ω₂ − ω₀, when ω₂ is known.
    pub fn omega_1(&self) -> Option<f64> {
        self.omega_2_ref.map(|w2| w2 - self.omega_0)
    }

    /// Parameters entering the Dicke Hamiltonian, either renormalized or
    /// taken verbatim (`raw_dicke`).
    pub fn dicke(&self, raw_dicke: bool) -> DickeParams {
        if raw_dicke {
            return DickeParams {
                omega_0: self.omega_0,
                omega_c: self.omega_c,
                chi: self.chi,
                n_electrons: self.n_electrons,
                e0_shift: 0.0,
            };
        }
        let r = renormalize_diamagnetic(self);
        DickeParams {
            omega_0: self.omega_0,
            omega_c: r.omega_c_tilde,
            chi: r.chi_tilde,
            n_electrons: self.n_electrons,
            e0_shift: r.e0_shift,
        }
    }
}

pub fn collective_coupling(chi: f64, n_electrons: u64) -> f64 {
    chi * (n_electrons as f64).sqrt()
}

/// g² < ω₀ω_c/4, beyond which the lower Hopfield frequency turns imaginary.
pub fn check_stability(omega_0: f64, omega_c: f64, g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 && 4.0 * g * g < omega_0 * omega_c {
        Ok(())
    } else {
        Err(GseError::Unstable { g, omega_0, omega_c, bound: "g < sqrt(omega_0 * omega_c) / 2" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizedParams {
    pub omega_c_tilde: f64,
    pub chi_tilde: f64,
    pub lambda_squeeze: f64,
    /// ω_c/2·(e^{−2λ} − 1), added to the band energy E₀.
    pub e0_shift: f64,
}

/// Bogoliubov squeeze that absorbs D(a + a†)² with D = Nχ²/ω₀.
pub fn renormalize_diamagnetic(params: &SystemParams) -> RenormalizedParams {
    let d = params.n_electrons as f64 * params.chi * params.chi / params.omega_0;
    let omega_c = params.omega_c;
    let lambda = 0.5 * (d / (omega_c + 2.0 * d)).atanh();
    RenormalizedParams {
        omega_c_tilde: omega_c * (2.0 * lambda).exp(),
        chi_tilde: params.chi * (-lambda).exp(),
        lambda_squeeze: lambda,
        e0_shift: 0.5 * omega_c * (-2.0 * lambda).exp_m1(),
    }
}

/// Parameters of the Dicke Hamiltonian H = ω_c a†a + ω₀S³ + χ(a + a†)(S⁺ + S⁻).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeParams {
    pub omega_0: f64,
    pub omega_c: f64,
    pub chi: f64,
    pub n_electrons: u64,
    pub e0_shift: f64,
}

impl DickeParams {
    pub fn new(omega_0: f64, omega_c: f64, chi: f64, n_electrons: u64) -> Self {
        Self { omega_0, omega_c, chi, n_electrons, e0_shift: 0.0 }
    }

    /// Sets χ from the collective coupling g_N.
    pub fn from_g(omega_0: f64, omega_c: f64, g: f64, n_electrons: u64) -> Self {
        Self::new(omega_0, omega_c, g / (n_electrons as f64).sqrt(), n_electrons)
    }

    pub fn g(&self) -> f64 {
        collective_coupling(self.chi, self.n_electrons)
    }

    /// Coupling seen by the bra side after one electron left: χ√(N−1).
    pub fn g_minus_one(&self) -> f64 {
        collective_coupling(self.chi, self.n_electrons - 1)
    }

    /// Δ = ω₀ − ω_c.
    pub fn delta(&self) -> f64 {
        self.omega_0 - self.omega_c
    }

    pub fn check_stability(&self) -> Result<()> {
        check_stability(self.omega_0, self.omega_c, self.g())
    }
}
