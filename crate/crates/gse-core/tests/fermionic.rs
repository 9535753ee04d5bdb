use approx::assert_relative_eq;
use gse_core::fermionic::clebsch::{c_coeff, clebsch_coeffs, d_coeff, Coupling};
use gse_core::fermionic::*;
use gse_core::oracle::TruncatedHilbertSpace;
use gse_core::{Branch, PolaritonPair};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn model(omega_c: f64, chi: f64) -> FermionicModel {
    FermionicModel { omega_0: 1.0, omega_c, chi, omega_1: 0.0, e0_shift: 0.0 }
}

fn model_g(omega_c: f64, g: f64, n: u64) -> FermionicModel {
    model(omega_c, g / (n as f64).sqrt())
}

proptest! {
    #[test]
    fn clebsch_gordan_unitarity(two_j2 in 0i64..=40, k in 0i64..=40) {
        prop_assume!(k <= two_j2);
        let two_m2 = -two_j2 + 2 * k;
        // Fixed (m₁, m₂): the two total-J branches exhaust the product state.
        let down: f64 = [two_j2 + 1, two_j2 - 1]
            .iter()
            .filter(|&&two_big_j| two_big_j >= 0)
            .map(|&two_big_j| c_coeff(two_big_j, two_m2 - 1, two_j2, two_m2).powi(2))
            .sum();
        let up: f64 = [two_j2 + 1, two_j2 - 1]
            .iter()
            .filter(|&&two_big_j| two_big_j >= 0)
            .map(|&two_big_j| d_coeff(two_big_j, two_m2 + 1, two_j2, two_m2).powi(2))
            .sum();
        prop_assert!((down - 1.0).abs() < 1e-12);
        prop_assert!((up - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clebsch_gordan_rows_are_normalized(two_big_j in 1i64..=41, k in 0i64..=41) {
        prop_assume!(k <= two_big_j);
        let two_big_m = -two_big_j + 2 * k;
        for coupling in [Coupling::Stretched, Coupling::Reduced] {
            let (c, d) = clebsch_coeffs(two_big_j, two_big_m, coupling).unwrap();
            prop_assert!((c * c + d * d - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_equals_pipeline(wc in 0.5f64..1.5, frac in 0.01f64..0.95) {
        let n = 1_000_000_000_000u64;
        let g = frac * 0.5 * wc.sqrt();
        let (plus, minus) = single_polariton_rate_fermionic(&model_g(wc, g, n), n).unwrap();
        let gb = g * ((n - 1) as f64 / n as f64).sqrt();
        let cp = gse_rate_closed_form(1.0, wc, gb, Branch::Plus).unwrap();
        let cm = gse_rate_closed_form(1.0, wc, gb, Branch::Minus).unwrap();
        prop_assert!((plus - cp).abs() <= 1e-10 * cp.max(1e-300), "{plus} vs {cp}");
        prop_assert!((minus - cm).abs() <= 1e-10 * cm.max(1e-300), "{minus} vs {cm}");
    }
}

#[test]
fn table_values() {
    let (c, d) = clebsch_coeffs(2, 0, Coupling::Stretched).unwrap();
    assert_relative_eq!(d, 0.5f64.sqrt(), epsilon = 1e-15);
    assert_relative_eq!(c, 0.5f64.sqrt(), epsilon = 1e-15);
    // J = 3/2, M = 1/2 from j₂ = 2: D = −√((J−M+1)/(2J+2)).
    let (_, d) = clebsch_coeffs(3, 1, Coupling::Reduced).unwrap();
    assert_relative_eq!(d, -(2.0f64 / 5.0).sqrt(), epsilon = 1e-15);
    assert!(clebsch_coeffs(3, 2, Coupling::Reduced).is_err());
}

/// Multiplicity of spin j among N spin-½, counted from the spectrum of S².
fn enumerated_degeneracy(n: u32, two_j: u64) -> u64 {
    let eig = SymmetricEigen::new(spin_squared(n));
    let target = (two_j as f64 / 2.0) * (two_j as f64 / 2.0 + 1.0);
    let count = eig.eigenvalues.iter().filter(|&&v| (v - target).abs() < 1e-8).count() as u64;
    count / (two_j + 1)
}

/// S² = S_z² + ½(S⁺S⁻ + S⁻S⁺) on the 2ᴺ site basis.
fn spin_squared(n: u32) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut s2 = DMatrix::<f64>::zeros(dim, dim);
    for state in 0..dim {
        let sz = state.count_ones() as f64 - n as f64 / 2.0;
        s2[(state, state)] += sz * sz;
        for a in 0..n {
            for b in 0..n {
                let (ua, ub) = (state >> a & 1, state >> b & 1);
                if a == b {
                    s2[(state, state)] += 0.5;
                } else if ua == 0 && ub == 1 {
                    // σ⁺_a σ⁻_b moves the up spin from b to a.
                    let flipped = state ^ (1 << a) ^ (1 << b);
                    s2[(flipped, state)] += 1.0;
                }
            }
        }
    }
    s2
}

#[test]
fn degeneracy_matches_enumeration() {
    for n in 1..=6u32 {
        for two_j in (n as u64 % 2..=n as u64).step_by(2) {
            assert_eq!(
                degeneracy(n as u64, two_j).unwrap() as u64,
                enumerated_degeneracy(n, two_j),
                "N = {n}, 2j = {two_j}"
            );
        }
    }
    assert_eq!(degeneracy(2, 0).unwrap(), 1);
    assert_eq!(degeneracy(4, 2).unwrap(), 3);
    assert!(degeneracy(4, 1).is_err());
}

/// RWA part of the brute-force Dicke matrix: same-n entries only.
#[test]
fn kernel_matches_brute_force_dicke_elements() {
    let (wc, chi) = (0.9, 0.03);
    for n_el in 2..=4u64 {
        let space = TruncatedHilbertSpace::new(n_el, 12).unwrap();
        let h = space.hamiltonian(1.0, wc, chi);
        let m = model(wc, chi);
        let mut offset = None;
        for n in 0..=4u64 {
            let key = SubspaceKey::new(n_el, n, n_el).unwrap();
            let k = tc_kernel(&key, &m).unwrap();
            for i in 0..key.dim() {
                let gi = key.gamma(i);
                let idx = space.index((n - gi) as usize, gi as usize);
                let shift = k.diag[i] - h[(idx, idx)];
                let reference = *offset.get_or_insert(shift);
                assert_relative_eq!(shift, reference, epsilon = 1e-12);
                if i + 1 < key.dim() {
                    let gj = key.gamma(i + 1);
                    let jdx = space.index((n - gj) as usize, gj as usize);
                    assert_relative_eq!(k.offdiag[i], h[(idx, jdx)], epsilon = 1e-12);
                }
            }
        }
    }
}

#[test]
fn resonant_single_polaritons() {
    let m = model_g(1.0, 0.05, 100);
    let key = SubspaceKey::new(100, 1, 100).unwrap();
    let basis = diagonalize_subspace(&tc_kernel(&key, &m).unwrap());
    let e0 = m.band_energy(100, 0) - 50.0;
    assert_relative_eq!(basis.energies[0], 1.0 - 0.05 + e0, epsilon = 1e-12);
    assert_relative_eq!(basis.energies[1], 1.0 + 0.05 + e0, epsilon = 1e-12);
}

#[test]
fn mixing_angle_matches_eigenvector() {
    let (delta, g) = (0.2, 0.05);
    let wc = 1.0 - delta;
    let m = model_g(wc, g, 400);
    let key = SubspaceKey::new(400, 1, 400).unwrap();
    let basis = diagonalize_subspace(&tc_kernel(&key, &m).unwrap());
    // Upper state: cos θ on the matter component (γ = 0), sin θ on the photon.
    let theta = mixing_angle(1.0, wc, g, Branch::Plus);
    let (matter, photon) = (basis.coeff(1, 0), basis.coeff(1, 1));
    assert_relative_eq!(photon.atan2(matter).rem_euclid(std::f64::consts::PI), theta, epsilon = 1e-10);
}

#[test]
fn dressing_vanishes_without_coupling() {
    let m = model(1.1, 0.0);
    for n in 0..=2 {
        let key = SubspaceKey::new(6, n, 6).unwrap();
        let s = dressed_eigenstate(&key, 0, &m).unwrap();
        assert!(s.coeffs.iter().all(|(&(nn, _), &c)| nn == n || c == 0.0));
        assert_relative_eq!(s.norm_sq(), 1.0, epsilon = 1e-14);
    }
}

#[test]
fn ground_state_dressing_only_reaches_two_excitations() {
    let m = model_g(1.0, 0.05, 10);
    let g = dressed_eigenstate(&SubspaceKey::new(10, 0, 10).unwrap(), 0, &m).unwrap();
    assert_eq!(g.u(0, 0), 1.0);
    assert!(g.coeffs.keys().all(|&(n, _)| n == 0 || n == 2));
    assert!(g.u(2, 0) != 0.0 && g.u(2, 1) != 0.0);
}

#[test]
fn pseudo_inner_normalization_and_orthogonality() {
    let m = model(0.9, 0.0);
    let key = SubspaceKey::new(6, 2, 6).unwrap();
    let a = dressed_eigenstate(&key, 0, &m).unwrap();
    let b = dressed_eigenstate(&key, 1, &m).unwrap();
    assert_relative_eq!(pseudo_inner(&a, &a, 0, |_| 1.0), 1.0, epsilon = 1e-14);
    assert_eq!(pseudo_inner(&a, &b, 0, |_| 1.0), 0.0);
}

#[test]
fn ground_to_single_overlap_formula() {
    let n = 50u64;
    let m = model_g(0.95, 0.05, n);
    let s = extraction_states(&m, n).unwrap();
    for single in &s.singles {
        let formula: f64 = (0..=1u64)
            .map(|gamma| single.u(1, gamma) * s.ground.u(2, gamma) * ((2 - gamma) as f64 / n as f64).sqrt())
            .sum();
        let amplitude = transition_amplitude(&s.ground, single).unwrap();
        assert_relative_eq!(amplitude, formula, max_relative = 1e-12);
    }
}

#[test]
fn parity_selection() {
    let n = 20u64;
    let m = model_g(0.9, 0.05, n);
    let s = extraction_states(&m, n).unwrap();
    for x in [-2i64, 0, 2] {
        for single in &s.singles {
            assert_eq!(pseudo_inner(&s.ground, single, x, |_| 1.0), 0.0);
        }
    }
    for x in [-1i64, 1] {
        for double in &s.doubles {
            assert_eq!(pseudo_inner(&s.ground, double, x, |_| 1.0), 0.0);
        }
    }
}

#[test]
fn statistical_suppression_plateau() {
    let rate = |n: u64| single_polariton_rate_fermionic(&model_g(0.9, 0.05, n), n).unwrap();
    let (p3, m3) = rate(1_000);
    for n in [10_000, 100_000] {
        let (p, m) = rate(n);
        assert_relative_eq!(p, p3, max_relative = 1e-2);
        assert_relative_eq!(m, m3, max_relative = 1e-2);
    }
}

#[test]
fn closed_form_examples() {
    assert_eq!(gse_rate_closed_form(1.0, 1.0, 0.0, Branch::Plus).unwrap(), 0.0);
    let lower = gse_rate_closed_form(1.0, 1.0, 0.1, Branch::Minus).unwrap();
    assert_relative_eq!(lower, (0.1 / (2.0 * 2f64.sqrt() * 0.9)).powi(2), max_relative = 1e-12);
    assert_relative_eq!(lower, 1.543e-3, max_relative = 1e-3);
    let g = 1e-4;
    for branch in Branch::BOTH {
        assert_relative_eq!(gse_rate_closed_form(1.0, 1.0, g, branch).unwrap() / (g * g), 0.125, max_relative = 1e-3);
    }
    assert!(gse_rate_closed_form(1.0, 1.0, 0.5, Branch::Plus).is_err());
}

#[test]
fn double_polariton_states_are_labelled() {
    let s = extraction_states(&model_g(1.0, 0.05, 10), 10).unwrap();
    let labels: Vec<_> = s.doubles.iter().map(|d| d.label()).collect();
    assert_eq!(labels, PolaritonPair::ALL.iter().map(|&p| Some(StateLabel::Double(p))).collect::<Vec<_>>());
    assert_eq!(s.singles[0].label(), Some(StateLabel::Single(Branch::Plus)));
    assert_eq!(s.ground.label(), Some(StateLabel::Ground));
}

#[test]
fn kappa_examples() {
    let a = SubspaceKey::new(4, 0, 4).unwrap();
    let out = SubspaceKey::new(3, 0, 3).unwrap();
    let inj = SubspaceKey::new(5, 0, 5).unwrap();
    assert_eq!(kappa(&a, &out, Direction::Out, 10), 4);
    assert_eq!(kappa(&a, &inj, Direction::In, 10), 6);
}

/// μ_L < μ_R below every injection threshold ω₁ + ω±: only the dark G → G
/// injection survives, and at χ = 0 it equals Γ_el·κ.
#[test]
fn gating_leaves_only_dark_injection() {
    let leads = Leads { gamma_el: 1e-3, mu_l: -1.5, mu_r: 0.5, n_sites_total: 12 };
    let n = 6u64;
    for chi in [0.0, 0.02 / (n as f64).sqrt()] {
        let m = model(1.0, chi);
        let ground = dressed_eigenstate(&SubspaceKey::new(n, 0, n).unwrap(), 0, &m).unwrap();
        for reservoir in [Reservoir::Left, Reservoir::Right] {
            for n_exc in 1..=2 {
                let key = SubspaceKey::new(n + 1, n_exc, n + 1).unwrap();
                for index in 0..key.dim() {
                    let b = dressed_eigenstate(&key, index, &m).unwrap();
                    let rate = transition_rate_fermionic(&ground, &b, reservoir, Direction::In, &leads).unwrap();
                    assert_eq!(rate, 0.0);
                }
            }
        }
        let g_after = dressed_eigenstate(&SubspaceKey::new(n + 1, 0, n + 1).unwrap(), 0, &m).unwrap();
        let dark = transition_rate_fermionic(&ground, &g_after, Reservoir::Right, Direction::In, &leads).unwrap();
        let expected = leads.gamma_el * (leads.n_sites_total - n) as f64;
        let g2 = chi * chi * n as f64;
        assert!((dark - expected).abs() <= 1e-12 * expected + 10.0 * g2 * expected, "{dark} vs {expected}");
        assert_eq!(transition_rate_fermionic(&ground, &g_after, Reservoir::Left, Direction::In, &leads).unwrap(), 0.0);
    }
}

#[test]
fn double_occupancy_is_rejected() {
    let m = model(1.0, 0.01);
    let a = dressed_eigenstate(&SubspaceKey::new(4, 0, 4).unwrap(), 0, &m).unwrap();
    let mut b = dressed_eigenstate(&SubspaceKey::new(3, 0, 3).unwrap(), 0, &m).unwrap();
    b.key.n_double = 1;
    assert!(matches!(transition_amplitude(&a, &b), Err(gse_core::GseError::UnsupportedDoubleOccupancy(1))));
}
