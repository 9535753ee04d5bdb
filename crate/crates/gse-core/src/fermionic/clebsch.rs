//! Clebsch–Gordan coefficients for coupling one spin-½ site to a spin j.
//!
//! Half-integers are passed doubled (`two_j = 2j`). `C` is the coefficient
//! with the site spin down (m₁ = −½, lower band), `D` with the site spin up
//! (m₁ = +½, upper band):
//!
//! ```text
//!            J = j + ½            J = j − ½
//! C  m = M+½  √((J−M)/2J)         √((J+M+1)/(2J+2))
//! D  m = M−½  √((J+M)/2J)        −√((J−M+1)/(2J+2))
//! ```

use crate::error::{GseError, Result};

/// C^{J,M}_{j,m}; zero outside the selection rules.
pub fn c_coeff(two_big_j: i64, two_big_m: i64, two_j: i64, two_m: i64) -> f64 {
    if two_big_m != two_m - 1 || two_big_m.abs() > two_big_j || two_m.abs() > two_j {
        return 0.0;
    }
    if two_big_j == two_j + 1 {
        ((two_big_j - two_big_m) as f64 / (2 * two_big_j) as f64).sqrt()
    } else if two_big_j + 1 == two_j {
        ((two_big_j + two_big_m + 2) as f64 / (2 * two_big_j + 4) as f64).sqrt()
    } else {
        0.0
    }
}

/// D^{J,M}_{j,m}; zero outside the selection rules.
pub fn d_coeff(two_big_j: i64, two_big_m: i64, two_j: i64, two_m: i64) -> f64 {
    if two_big_m != two_m + 1 || two_big_m.abs() > two_big_j || two_m.abs() > two_j {
        return 0.0;
    }
    if two_big_j == two_j + 1 {
        ((two_big_j + two_big_m) as f64 / (2 * two_big_j) as f64).sqrt()
    } else if two_big_j + 1 == two_j {
        -((two_big_j - two_big_m + 2) as f64 / (2 * two_big_j + 4) as f64).sqrt()
    } else {
        0.0
    }
}

/// Which j₂ the total J was coupled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// J = j₂ + ½.
    Stretched,
    /// J = j₂ − ½.
    Reduced,
}

/// (C, D) for total (J, M) and the chosen j₂ branch.
pub fn clebsch_coeffs(two_big_j: i64, two_big_m: i64, coupling: Coupling) -> Result<(f64, f64)> {
    if two_big_j < 0 || two_big_m.abs() > two_big_j || (two_big_j - two_big_m) % 2 != 0 {
        return Err(GseError::InvalidQuantumNumbers(format!("J = {two_big_j}/2, M = {two_big_m}/2")));
    }
    let two_j2 = match coupling {
        Coupling::Stretched if two_big_j == 0 => {
            return Err(GseError::InvalidQuantumNumbers("J = 0 needs j2 = 1/2 + 0".into()));
        }
        Coupling::Stretched => two_big_j - 1,
        Coupling::Reduced => two_big_j + 1,
    };
    Ok((c_coeff(two_big_j, two_big_m, two_j2, two_big_m + 1), d_coeff(two_big_j, two_big_m, two_j2, two_big_m - 1)))
}
