//! Full bosonic model: Hopfield diagonalization with counter-rotating terms.
//!
//! Mode vectors hold the coefficients of (a†, a, b†, b). They are
//! pseudo-normalized, v₁² + v₃² − v₂² − v₄² = 1, and satisfy H̄ᵀv = λv for the
//! kernel returned by [`hopfield_kernel`] (equivalently H̄·Jv = λ·Jv with
//! J = diag(1, −1, 1, −1)).

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{GseError, Result};
use crate::params::check_stability;
use crate::{Branch, PolaritonPair};

/// Metric of the bosonic commutator algebra.
pub const METRIC: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// Step of the complex-step derivative; any tiny value works since there is
/// no subtractive cancellation.
const COMPLEX_STEP: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct HopfieldModes {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: [f64; 4],
    pub v_minus: [f64; 4],
    pub p_matrix: Matrix4<f64>,
}

impl HopfieldModes {
    pub fn lambda(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.lambda_plus,
            Branch::Minus => self.lambda_minus,
        }
    }

    pub fn v(&self, branch: Branch) -> &[f64; 4] {
        match branch {
            Branch::Plus => &self.v_plus,
            Branch::Minus => &self.v_minus,
        }
    }
}

/// The 4×4 kernel H̄ with [H, Oᵢ] = Σⱼ H̄ⱼᵢ Oⱼ for O = (a†, a, b†, b).
pub fn hopfield_kernel(omega_0: f64, omega_c: f64, g: f64) -> Matrix4<f64> {
    Matrix4::new(
        omega_c, 0.0, g, -g, //
        0.0, -omega_c, g, -g, //
        g, -g, omega_0, 0.0, //
        g, -g, 0.0, -omega_0,
    )
}

/// Closed-form λ± = √[(ω₀² + ω_c² ± √((ω₀² − ω_c²)² + 16g²ω₀ω_c))/2].
pub fn closed_form_lambdas(omega_0: f64, omega_c: f64, g: f64) -> (f64, f64) {
    let [(lp, _), (lm, _)] = branch_data(omega_0, omega_c, Complex64::new(g, 0.0));
    (lp.re, lm.re)
}

/// (λ, λ² − ω_c²) for the (+, −) branches, arranged to avoid cancellation.
fn branch_data(omega_0: f64, omega_c: f64, g: Complex64) -> [(Complex64, Complex64); 2] {
    let d = omega_0 * omega_0 - omega_c * omega_c;
    let w = omega_0 * omega_c;
    let g2 = g * g;
    let root = (d * d + 16.0 * g2 * w).sqrt();
    let lp2 = (omega_0 * omega_0 + omega_c * omega_c + root) * 0.5;
    let lm2 = w * (w - 4.0 * g2) / lp2;
    let shift_p = if d >= 0.0 { (d + root) * 0.5 } else { 8.0 * g2 * w / (root - d) };
    let shift_m = if d <= 0.0 { (d - root) * 0.5 } else { -8.0 * g2 * w / (d + root) };
    [(lp2.sqrt(), shift_p), (lm2.sqrt(), shift_m)]
}

/// Pseudo-normalized mode vectors (v⁺, v⁻) from the printed components.
fn mode_vectors(omega_0: f64, omega_c: f64, g: Complex64) -> [[Complex64; 4]; 2] {
    branch_data(omega_0, omega_c, g).map(|(lambda, shift)| {
        let lw0 = lambda + omega_0;
        let raw = [
            g * lw0 * (lambda + omega_c),
            -g * lw0 * shift / (lambda + omega_c),
            2.0 * g * g * omega_c + lw0 * shift,
            -2.0 * g * g * omega_c,
        ];
        let z = (raw[0] * raw[0] + raw[2] * raw[2] - raw[1] * raw[1] - raw[3] * raw[3]).sqrt();
        raw.map(|c| c / z)
    })
}

/// Decoupled modes at g = 0, taken as the g → 0⁺ limit of the printed vectors.
fn decoupled_vectors(omega_0: f64, omega_c: f64) -> [[f64; 4]; 2] {
    let photon = [1.0, 0.0, 0.0, 0.0];
    if omega_c > omega_0 {
        [photon, [0.0, 0.0, -1.0, 0.0]]
    } else if omega_c < omega_0 {
        [[0.0, 0.0, 1.0, 0.0], photon]
    } else {
        let h = 0.5f64.sqrt();
        [[h, 0.0, h, 0.0], [h, 0.0, -h, 0.0]]
    }
}

/// Rows (v⁺₁, v⁺₂, v⁺₃, v⁺₄), (v⁺₂, v⁺₁, v⁺₄, v⁺₃), (v⁻₁, …), (v⁻₂, v⁻₁, v⁻₄, v⁻₃).
fn p_from_vectors<T: Copy>(vp: &[T; 4], vm: &[T; 4]) -> [[T; 4]; 4] {
    [
        [vp[0], vp[1], vp[2], vp[3]],
        [vp[1], vp[0], vp[3], vp[2]],
        [vm[0], vm[1], vm[2], vm[3]],
        [vm[1], vm[0], vm[3], vm[2]],
    ]
}

fn to_matrix(rows: [[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| rows[i][j])
}

pub fn hopfield_modes(omega_0: f64, omega_c: f64, g: f64) -> Result<HopfieldModes> {
    check_stability(omega_0, omega_c, g)?;
    let (lambda_plus, lambda_minus) = closed_form_lambdas(omega_0, omega_c, g);
    let [v_plus, v_minus] = if g == 0.0 {
        decoupled_vectors(omega_0, omega_c)
    } else {
        mode_vectors(omega_0, omega_c, Complex64::new(g, 0.0)).map(|v| v.map(|c| c.re))
    };
    Ok(HopfieldModes {
        lambda_plus,
        lambda_minus,
        v_plus,
        v_minus,
        p_matrix: to_matrix(p_from_vectors(&v_plus, &v_minus)),
    })
}

/// ∂P/∂g by complex-step differentiation of the closed-form components.
pub fn p_matrix_derivative(omega_0: f64, omega_c: f64, g: f64) -> Result<Matrix4<f64>> {
    check_stability(omega_0, omega_c, g)?;
    if g == 0.0 {
        return Err(GseError::ZeroCoupling);
    }
    let [vp, vm] = mode_vectors(omega_0, omega_c, Complex64::new(g, COMPLEX_STEP));
    let rows = p_from_vectors(&vp, &vm).map(|row| row.map(|c| c.im / COMPLEX_STEP));
    Ok(to_matrix(rows))
}

/// ∂P/∂g by central differences with step `h`; the cross-check for
/// [`p_matrix_derivative`].
pub fn p_matrix_derivative_fd(omega_0: f64, omega_c: f64, g: f64, h: f64) -> Result<Matrix4<f64>> {
    let up = hopfield_modes(omega_0, omega_c, g + h)?.p_matrix;
    let down = hopfield_modes(omega_0, omega_c, g - h)?.p_matrix;
    Ok((up - down) / (2.0 * h))
}

/// Single-polariton rates (P₂₃², P₄₃²) with P evaluated at g_{N−1}.
pub fn single_polariton_rate_full(omega_0: f64, omega_c: f64, g_bra: f64) -> Result<(f64, f64)> {
    let p = hopfield_modes(omega_0, omega_c, g_bra)?.p_matrix;
    Ok((p[(1, 2)].powi(2), p[(3, 2)].powi(2)))
}

/// Double-polariton rate N·M² for one pair, P evaluated at `g_bra`.
///
/// For (+−) the two expansion orders give different algebraic forms; the
/// amplitude is their arithmetic mean, the order-independent combination.
pub fn double_polariton_rate_full(
    omega_0: f64,
    omega_c: f64,
    g_bra: f64,
    n_electrons: u64,
    pair: PolaritonPair,
) -> Result<f64> {
    if n_electrons < 2 {
        return Err(GseError::Config("double-polariton rates need N >= 2".into()));
    }
    check_stability(omega_0, omega_c, g_bra)?;
    if g_bra == 0.0 {
        return Ok(0.0);
    }
    let n = n_electrons as f64;
    let p = hopfield_modes(omega_0, omega_c, g_bra)?.p_matrix;
    let det = p.determinant();
    if det.abs() < 1e-12 {
        return Err(GseError::SingularP(det.abs()));
    }
    let p_inv = p.try_inverse().ok_or(GseError::SingularP(det.abs()))?;
    let dp = p_matrix_derivative(omega_0, omega_c, g_bra)?;
    // g·Σⱼ ∂P_{row,j} P⁻¹_{j,col}, zero-based indices.
    let drift = |row: usize, col: usize| g_bra * (dp.row(row) * p_inv.column(col))[0];
    let sqrt2 = std::f64::consts::SQRT_2;
    let m = match pair {
        PolaritonPair::PlusPlus => (p[(1, 3)] * p[(1, 2)] - 0.5 * drift(1, 0)) / (sqrt2 * n),
        PolaritonPair::MinusMinus => (p[(3, 3)] * p[(3, 2)] - 0.5 * drift(3, 2)) / (sqrt2 * n),
        PolaritonPair::PlusMinus => {
            let first = p[(1, 3)] * p[(3, 2)] - 0.5 * drift(1, 2);
            let second = p[(3, 3)] * p[(1, 2)] - 0.5 * drift(3, 0);
            0.5 * (first + second) / n
        }
    };
    Ok(n * m * m)
}

/// |α_ph±|² = (v₁± − v₂±)².
pub fn photon_weight_full(modes: &HopfieldModes, branch: Branch) -> f64 {
    let v = modes.v(branch);
    (v[0] - v[1]).powi(2)
}

pub fn pseudo_norm(v: &[f64; 4]) -> f64 {
    v.iter().zip(METRIC).map(|(c, s)| s * c * c).sum()
}
