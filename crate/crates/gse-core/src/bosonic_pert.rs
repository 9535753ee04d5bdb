//! Perturbative bosonic model: Jaynes–Cummings polaritons dressed to first
//! order by the counter-rotating coupling g(ab + a†b†).

use std::f64::consts::SQRT_2;

use crate::error::{GseError, Result};
use crate::{Branch, PolaritonPair};

/// Hopfield-like coefficients of the RWA polaritons
/// p± = α_a± a + α_b± b, with α_b± ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcPolaritonBasis {
    pub alpha_a_plus: f64,
    pub alpha_a_minus: f64,
    pub alpha_b_plus: f64,
    pub alpha_b_minus: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Δ/g with Δ = ω₀ − ω_c; infinite (or NaN at Δ = 0) when g = 0.
    pub x: f64,
}

impl JcPolaritonBasis {
    pub fn alpha_a(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.alpha_a_plus,
            Branch::Minus => self.alpha_a_minus,
        }
    }

    pub fn alpha_b(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.alpha_b_plus,
            Branch::Minus => self.alpha_b_minus,
        }
    }

    pub fn omega(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.omega_plus,
            Branch::Minus => self.omega_minus,
        }
    }
}

/// JC basis for g > 0. Use [`jc_basis_or_limit`] to accept g = 0.
pub fn jc_basis(omega_0: f64, omega_c: f64, g: f64) -> Result<JcPolaritonBasis> {
    if g == 0.0 {
        return Err(GseError::ZeroCoupling);
    }
    jc_basis_or_limit(omega_0, omega_c, g)
}

/// JC basis including the decoupled g = 0 limit.
pub fn jc_basis_or_limit(omega_0: f64, omega_c: f64, g: f64) -> Result<JcPolaritonBasis> {
    if !(g >= 0.0 && g * g < omega_0 * omega_c) {
        return Err(GseError::Unstable { g, omega_0, omega_c, bound: "g^2 < omega_0 * omega_c" });
    }
    let delta = omega_0 - omega_c;
    let r = (4.0 * g * g + delta * delta).sqrt();
    let s = omega_0 + omega_c;
    let (a_plus, b_plus) = if r == 0.0 {
        (0.5f64.sqrt(), 0.5f64.sqrt())
    } else {
        // R ∓ Δ without cancellation.
        let r_minus = if delta > 0.0 { 4.0 * g * g / (r + delta) } else { r - delta };
        let r_plus = if delta < 0.0 { 4.0 * g * g / (r - delta) } else { r + delta };
        ((r_minus / (2.0 * r)).sqrt(), (r_plus / (2.0 * r)).sqrt())
    };
    Ok(JcPolaritonBasis {
        alpha_a_plus: a_plus,
        alpha_b_plus: b_plus,
        alpha_a_minus: -b_plus,
        alpha_b_minus: a_plus,
        omega_plus: 0.5 * (s + r),
        omega_minus: 2.0 * (omega_0 * omega_c - g * g) / (s + r),
        x: delta / g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeCoefficients {
    pub beta_pp: f64,
    pub beta_mm: f64,
    pub beta_pm: f64,
}

pub fn perturbative_betas(basis: &JcPolaritonBasis, g: f64) -> PerturbativeCoefficients {
    let b = basis;
    let betas = PerturbativeCoefficients {
        beta_pp: -SQRT_2 * g / (2.0 * b.omega_plus) * b.alpha_a_minus * b.alpha_b_minus,
        beta_mm: -SQRT_2 * g / (2.0 * b.omega_minus) * b.alpha_a_plus * b.alpha_b_plus,
        beta_pm: g / (b.omega_plus + b.omega_minus)
            * (b.alpha_b_plus * b.alpha_a_minus + b.alpha_b_minus * b.alpha_a_plus),
    };
    let largest = betas.beta_pp.abs().max(betas.beta_mm.abs()).max(betas.beta_pm.abs());
    if largest > 0.3 {
        log::warn!("first-order mixing amplitude {largest:.3} is not small (g = {g})");
    }
    betas
}

/// Single-polariton GSE rates (Γ⁺, Γ⁻) in units of Γ_el; independent of N at
/// fixed g_N.
pub fn single_polariton_rate_pert(basis: &JcPolaritonBasis, betas: &PerturbativeCoefficients) -> (f64, f64) {
    let plus = SQRT_2 * betas.beta_pp * basis.alpha_b_plus + betas.beta_pm * basis.alpha_b_minus;
    let minus = SQRT_2 * betas.beta_mm * basis.alpha_b_minus + betas.beta_pm * basis.alpha_b_plus;
    (plus * plus, minus * minus)
}

/// Convenience wrapper: single-polariton rates at (ω₀, ω_c, g).
pub fn single_polariton_rates(omega_0: f64, omega_c: f64, g: f64) -> Result<(f64, f64)> {
    let basis = jc_basis_or_limit(omega_0, omega_c, g)?;
    Ok(single_polariton_rate_pert(&basis, &perturbative_betas(&basis, g)))
}

/// ∂β/∂g of the three mixing amplitudes, in closed form.
///
/// With S = ω₀ + ω_c and R = √(4g² + Δ²) the amplitudes read
/// β₊₊ = √2g²/((S+R)R), β₋₋ = −√2g²/((S−R)R), β₊₋ = −gΔ/(SR).
pub fn beta_derivatives(omega_0: f64, omega_c: f64, g: f64) -> PerturbativeCoefficients {
    let delta = omega_0 - omega_c;
    let s = omega_0 + omega_c;
    let r = (4.0 * g * g + delta * delta).sqrt();
    if r == 0.0 {
        return PerturbativeCoefficients { beta_pp: 0.0, beta_mm: 0.0, beta_pm: 0.0 };
    }
    let g_dr = 4.0 * g * g / r;
    // S − R = 4(ω₀ω_c − g²)/(S + R).
    let s_minus_r = 4.0 * (omega_0 * omega_c - g * g) / (s + r);
    let upper = (s + r) * r;
    let lower = s_minus_r * r;
    PerturbativeCoefficients {
        beta_pp: SQRT_2 * g * (2.0 * upper - g_dr * (s + 2.0 * r)) / (upper * upper),
        beta_mm: -SQRT_2 * g * (2.0 * lower - g_dr * (s - 2.0 * r)) / (lower * lower),
        beta_pm: -(delta / r).powi(3) / s,
    }
}

/// Double-polariton rate N·|∂_N β|² with ∂_N = (g/2N)·∂_g, in units of Γ_el.
pub fn double_polariton_rate_pert(
    omega_0: f64,
    omega_c: f64,
    g: f64,
    n_electrons: u64,
    pair: PolaritonPair,
) -> Result<f64> {
    if n_electrons < 2 {
        return Err(GseError::Config("double-polariton rates need N >= 2".into()));
    }
    jc_basis_or_limit(omega_0, omega_c, g)?;
    let d = beta_derivatives(omega_0, omega_c, g);
    let db = match pair {
        PolaritonPair::PlusPlus => d.beta_pp,
        PolaritonPair::MinusMinus => d.beta_mm,
        PolaritonPair::PlusMinus => d.beta_pm,
    };
    let n = n_electrons as f64;
    let dn = g / (2.0 * n) * db;
    Ok(n * dn * dn)
}

/// |α_ph±|² = |α_a± + α_a±β±±/√2|².
pub fn photon_weight_pert(basis: &JcPolaritonBasis, betas: &PerturbativeCoefficients, branch: Branch) -> f64 {
    let beta = match branch {
        Branch::Plus => betas.beta_pp,
        Branch::Minus => betas.beta_mm,
    };
    let a = basis.alpha_a(branch);
    let w = a + a * beta / SQRT_2;
    w * w
}
