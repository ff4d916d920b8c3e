//! Closed-form moments against direct series and grid quadrature.

use std::f64::consts::PI;

use circle_unc::observables::{
    density, expect_exp_j, expect_j_moments, expect_u_power, packet_center, uniform_grid, wavefunction,
    windowed_phi_moments, WindowSpec,
};
use circle_unc::oracle::{oracle_expectation, oracle_phi_moments, CenterPolicy, OracleConfig, OracleOperator};
use circle_unc::states::{cat_state, coherent_state, fock_state, squeezed_coherent_state, CircleState};
use circle_unc::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sample_states() -> Vec<CircleState> {
    vec![
        coherent_state(c(1.0, 0.0)).unwrap(),
        coherent_state(c(0.4, 0.0)).unwrap(),
        coherent_state(Complex64::from_polar(2.5, 1.1)).unwrap(),
        squeezed_coherent_state(c(1.0, 0.0), 0.2).unwrap(),
        squeezed_coherent_state(Complex64::from_polar(0.7, -2.0), 1.7).unwrap(),
        cat_state(c(1.0, 0.0), c(1.0, 0.0)).unwrap(),
        cat_state(c(1.0, 0.0), c(-1.0, 0.0)).unwrap(),
        cat_state(Complex64::from_polar(0.5, 0.3), c(0.0, 1.0)).unwrap(),
        fock_state(3),
    ]
}

/// Odd cat at z = 1: weights exp(-m^2) on odd m.
fn odd_cat_series() -> (f64, f64) {
    let ms: Vec<i32> = (-9..=9).filter(|m| m % 2 != 0).collect();
    let w = |m: i32| (-(m * m) as f64 / 2.0).exp();
    let norm: f64 = ms.iter().map(|&m| w(m) * w(m)).sum();
    let u2: f64 = ms.iter().map(|&m| w(m) * w(m + 2)).sum::<f64>() / norm;
    let e2j: f64 = ms.iter().map(|&m| (2.0 * m as f64).exp() * w(m) * w(m)).sum::<f64>() / norm;
    (u2, e2j)
}

#[test]
fn odd_cat_series_values() {
    let psi = cat_state(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
    let (u2, e2j) = odd_cat_series();
    assert!((u2 - 0.51814).abs() < 1e-5 && (e2j - 3.8286).abs() < 1e-4);
    let got = expect_u_power(&psi, 2);
    assert!((got - c(u2, 0.0)).norm() < 1e-12, "<U^2> = {got}");
    assert!((expect_exp_j(&psi, 2.0).unwrap() - e2j).abs() < 1e-12 * e2j);
    // Odd parity: first moments vanish.
    assert!(expect_u_power(&psi, 1).norm() < 1e-15);
}

#[test]
fn parseval_and_density_normalization() {
    let grid = uniform_grid(4096);
    let h = 2.0 * PI / 4096.0;
    for psi in sample_states() {
        let total: f64 = density(&psi, &grid).iter().sum::<f64>() * h;
        assert!((total - 1.0).abs() < 1e-12, "{psi}: integral {total}");
        let wave = wavefunction(&psi, &grid);
        let l2: f64 = wave.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
        assert!((l2 - psi.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn moments_match_quadrature() {
    let cfg = OracleConfig::new(1 << 16, CenterPolicy::ReuseMain).unwrap();
    for psi in sample_states() {
        let main = windowed_phi_moments(&psi, WindowSpec::centred_on(&psi));
        let quad = oracle_phi_moments(&psi, &cfg);
        assert!((main.mean_phi - quad.mean_phi).abs() < 1e-8, "{psi}: {main:?} vs {quad:?}");
        assert!((main.var_phi - quad.var_phi).abs() < 1e-8, "{psi}: {main:?} vs {quad:?}");

        let j = expect_j_moments(&psi);
        let qj = oracle_expectation(&psi, OracleOperator::J, &cfg).re;
        let qj2 = oracle_expectation(&psi, OracleOperator::J2, &cfg).re;
        assert!((j.mean_j - qj).abs() < 1e-8 && (j.mean_j2 - qj2).abs() < 1e-8 * qj2.max(1.0));

        for k in [1, 2, -1] {
            let d = (expect_u_power(&psi, k) - oracle_expectation(&psi, OracleOperator::UPower(k), &cfg)).norm();
            assert!(d < 1e-10, "{psi}: U^{k} differs by {d:e}");
        }
    }
}

#[test]
fn coherent_densities_translate() {
    // |0.4> and |1> differ only by a translation in phi, up to the window shift.
    let a = coherent_state(c(0.4, 0.0)).unwrap();
    let b = coherent_state(c(1.0, 0.0)).unwrap();
    let grid = uniform_grid(2048);
    let shift = packet_center(&a) - packet_center(&b);
    let shifted: Vec<f64> = grid.iter().map(|p| p + shift).collect();
    let da = density(&a, &shifted);
    let db = density(&b, &grid);
    let sup = da.iter().zip(&db).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(sup < 1e-2, "sup difference {sup}");
    assert!(packet_center(&b).abs() < 1e-9);
}

#[test]
fn odd_cat_variance_is_window_symmetric() {
    // Lobes at 0 and pi: moving the window by pi swaps them without changing the spread.
    let psi = cat_state(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
    let w0 = windowed_phi_moments(&psi, WindowSpec::new(0.0, 4096).unwrap());
    let w1 = windowed_phi_moments(&psi, WindowSpec::new(PI, 4096).unwrap());
    assert!((w0.var_phi - w1.var_phi).abs() < 1e-12, "{w0:?} vs {w1:?}");
    assert!(w0.mean_phi.abs() < 1e-12);
}

#[test]
fn fock_density_is_flat() {
    let grid = uniform_grid(512);
    for m in [-2, 0, 5] {
        let d = density(&fock_state(m), &grid);
        assert!(d.iter().all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-14));
        let w = windowed_phi_moments(&fock_state(m), WindowSpec::centred_on(&fock_state(m)));
        assert!((w.var_phi - PI * PI / 3.0).abs() < 1e-12);
    }
}
