//! Brute-force position-grid cross-checks.
//!
//! Everything here goes through the wave function sampled on a dense uniform
//! grid over the window and trapezoid quadrature. Operators diagonal in `m`
//! are applied by reweighting the coefficients and re-synthesizing; the angle
//! is applied by pointwise multiplication. None of the closed-form kernels
//! from [`crate::observables`] are used.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::observables::{
    expect_exp_j, expect_j_moments, expect_u_power, grid_argmax, packet_center, uniform_grid,
    windowed_phi_moments, PhiMoments, WindowSpec,
};
use crate::states::{apply_z, apply_z_dagger, CircleState, CoeffSeq};
use crate::uncertainty::{gram_matrix_in, kr_uncertainties, GramMatrix, Observable};

pub const DEFAULT_ORACLE_GRID: usize = 1 << 16;

/// Looser of absolute and relative agreement required between the two paths.
pub const ORACLE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CenterPolicy {
    /// Use the refined packet centre from the main path.
    ReuseMain,
    /// Use the oracle's own unrefined grid argmax.
    IndependentArgmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub grid_n: usize,
    pub center: CenterPolicy,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { grid_n: DEFAULT_ORACLE_GRID, center: CenterPolicy::ReuseMain }
    }
}

impl OracleConfig {
    pub fn new(grid_n: usize, center: CenterPolicy) -> Result<Self> {
        if grid_n < 4096 || !grid_n.is_power_of_two() {
            return Err(domain(format!("oracle grid must be a power of two >= 4096, got {grid_n}")));
        }
        Ok(Self { grid_n, center })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OracleOperator {
    UPower(i32),
    ExpJ(f64),
    J,
    J2,
    Phi,
    Phi2,
}

/// Trapezoid grid over `[phi0 - pi, phi0 + pi]`, endpoints included.
struct Quadrature {
    phis: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    fn new(phi0: f64, n: usize) -> Self {
        let h = 2.0 * PI / n as f64;
        let phis: Vec<f64> = (0..=n).map(|k| phi0 - PI + k as f64 * h).collect();
        let mut weights = vec![h; n + 1];
        weights[0] = 0.5 * h;
        weights[n] = 0.5 * h;
        Self { phis, weights }
    }

    fn synth(&self, c: &CoeffSeq) -> Vec<Complex64> {
        let scale = (2.0 * PI).sqrt().recip();
        self.phis
            .iter()
            .map(|&phi| {
                // Direct sum, independent of the Horner evaluation on the main path.
                c.iter().map(|(m, v)| v * Complex64::from_polar(scale, m as f64 * phi)).sum()
            })
            .collect()
    }

    fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter().zip(g).zip(&self.weights).map(|((a, b), w)| a.conj() * b * *w).sum()
    }

    fn integrate(&self, f: impl Fn(f64) -> f64, p: &[f64]) -> f64 {
        self.phis.iter().zip(p).zip(&self.weights).map(|((&phi, &pk), w)| f(phi) * pk * w).sum()
    }
}

fn window_centre(psi: &CircleState, cfg: &OracleConfig) -> f64 {
    match cfg.center {
        CenterPolicy::ReuseMain => packet_center(psi),
        CenterPolicy::IndependentArgmax => oracle_packet_center(psi, cfg),
    }
}

fn reweight(c: &CoeffSeq, f: impl Fn(f64) -> f64) -> CoeffSeq {
    CoeffSeq::new(c.m_min, c.iter().map(|(m, v)| v * f(m as f64)).collect())
}

/// `<psi| O |psi>` by grid quadrature.
pub fn oracle_expectation(psi: &CircleState, op: OracleOperator, cfg: &OracleConfig) -> Complex64 {
    let q = Quadrature::new(window_centre(psi, cfg), cfg.grid_n);
    expectation_on(&q, psi, op)
}

fn expectation_on(q: &Quadrature, psi: &CircleState, op: OracleOperator) -> Complex64 {
    let c = psi.coeffs();
    let wave = q.synth(c);
    match op {
        OracleOperator::UPower(k) => {
            let shifted: Vec<Complex64> =
                wave.iter().zip(&q.phis).map(|(v, &phi)| v * Complex64::from_polar(1.0, k as f64 * phi)).collect();
            q.inner(&wave, &shifted)
        }
        OracleOperator::ExpJ(beta) => q.inner(&wave, &q.synth(&reweight(c, |m| (beta * m).exp()))),
        OracleOperator::J => q.inner(&wave, &q.synth(&reweight(c, |m| m))),
        OracleOperator::J2 => q.inner(&wave, &q.synth(&reweight(c, |m| m * m))),
        OracleOperator::Phi | OracleOperator::Phi2 => {
            let p: Vec<f64> = wave.iter().map(|v| v.norm_sqr()).collect();
            let power = if op == OracleOperator::Phi { 1 } else { 2 };
            Complex64::new(q.integrate(|phi| phi.powi(power), &p), 0.0)
        }
    }
}

/// Windowed angle moments by quadrature.
pub fn oracle_phi_moments(psi: &CircleState, cfg: &OracleConfig) -> PhiMoments {
    let q = Quadrature::new(window_centre(psi, cfg), cfg.grid_n);
    let mean = expectation_on(&q, psi, OracleOperator::Phi).re;
    let mean2 = expectation_on(&q, psi, OracleOperator::Phi2).re;
    // Variance from the centred integrand to avoid cancellation when |phi0| is large.
    let p: Vec<f64> = q.synth(psi.coeffs()).iter().map(|v| v.norm_sqr()).collect();
    let var = q.integrate(|phi| (phi - mean).powi(2), &p);
    PhiMoments { mean_phi: mean, mean_phi2: mean2, var_phi: var }
}

/// Gram matrix with the centred vectors formed as grid functions.
pub fn oracle_gram(psi: &CircleState, observables: &[Observable], cfg: &OracleConfig) -> Result<GramMatrix> {
    let q = Quadrature::new(window_centre(psi, cfg), cfg.grid_n);
    let c = psi.coeffs();
    let wave = q.synth(c);
    let vectors: Vec<Vec<Complex64>> = observables
        .iter()
        .map(|obs| {
            let applied: Vec<Complex64> = match obs {
                Observable::J => q.synth(&reweight(c, |m| m)),
                Observable::Phi => wave.iter().zip(&q.phis).map(|(v, &phi)| v * phi).collect(),
                Observable::X => {
                    let zc = q.synth(&apply_z(c, 1.0));
                    let zd = q.synth(&apply_z_dagger(c, 1.0));
                    zc.iter().zip(&zd).map(|(a, b)| (a + b) * 0.5).collect()
                }
                Observable::Y => {
                    let zc = q.synth(&apply_z(c, 1.0));
                    let zd = q.synth(&apply_z_dagger(c, 1.0));
                    zc.iter().zip(&zd).map(|(a, b)| (a - b) * Complex64::new(0.0, -0.5)).collect()
                }
            };
            let mean = q.inner(&wave, &applied);
            applied.iter().zip(&wave).map(|(a, w)| a - mean * w).collect()
        })
        .collect();
    let n = vectors.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(q.inner(&vectors[i], &vectors[j]));
        }
    }
    GramMatrix::from_entries(observables.to_vec(), entries)
}

/// Plain argmax of the density on `grid_n` points over `[-pi, pi)`.
pub fn oracle_packet_center(psi: &CircleState, cfg: &OracleConfig) -> f64 {
    let grid = uniform_grid(cfg.grid_n);
    let p: Vec<f64> = Quadrature { phis: grid.clone(), weights: vec![] }
        .synth(psi.coeffs())
        .iter()
        .map(|v| v.norm_sqr())
        .collect();
    grid[grid_argmax(&grid, &p)]
}

/// One scalar computed both ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub main: f64,
    pub oracle: f64,
}

impl Comparison {
    /// `|main - oracle| / max(1, |main|)`; zero when both agree on an infinity.
    pub fn discrepancy(&self) -> f64 {
        if self.main == self.oracle {
            return 0.0;
        }
        (self.main - self.oracle).abs() / self.main.abs().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub comparisons: Vec<Comparison>,
    pub center_main: f64,
    pub center_oracle: f64,
    pub grid_n: usize,
}

impl CrossCheck {
    pub fn max_discrepancy(&self) -> f64 {
        self.comparisons.iter().map(Comparison::discrepancy).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&Comparison> {
        self.comparisons
            .iter()
            .max_by(|a, b| a.discrepancy().partial_cmp(&b.discrepancy()).unwrap())
    }

    /// Refined and grid centres agree to one oracle grid step (modulo `2 pi`).
    pub fn centers_agree(&self) -> bool {
        let d = crate::observables::wrap_angle(self.center_main - self.center_oracle);
        d.abs() <= 2.0 * PI / self.grid_n as f64
    }

    pub fn passes(&self) -> bool {
        self.max_discrepancy() <= ORACLE_TOL
    }
}

/// Recompute every main-path scalar of `psi` through the oracle. The oracle
/// window reuses the main packet centre so both paths integrate over the same
/// branch.
pub fn cross_check(psi: &CircleState, grid_n: usize) -> Result<CrossCheck> {
    let cfg = OracleConfig::new(grid_n, CenterPolicy::ReuseMain)?;
    let window = WindowSpec::centred_on(psi);
    let q = Quadrature::new(window.phi0, cfg.grid_n);
    let mut out = Vec::new();
    let mut push = |name: &str, main: f64, oracle: f64| {
        out.push(Comparison { name: name.to_string(), main, oracle });
    };

    let u2 = expect_u_power(psi, 2);
    let u2_o = expectation_on(&q, psi, OracleOperator::UPower(2));
    push("u2_re", u2.re, u2_o.re);
    push("u2_im", u2.im, u2_o.im);
    let e_plus = expect_exp_j(psi, 2.0)?;
    let e_plus_o = expectation_on(&q, psi, OracleOperator::ExpJ(2.0)).re;
    let e_minus = expect_exp_j(psi, -2.0)?;
    let e_minus_o = expectation_on(&q, psi, OracleOperator::ExpJ(-2.0)).re;
    push("exp_2j", e_plus, e_plus_o);
    push("exp_m2j", e_minus, e_minus_o);

    let kr = kr_uncertainties(psi)?;
    // An infinite K-R angle uncertainty (exactly vanishing <U^2>) cannot be
    // reproduced by quadrature; the u2 comparisons above cover that case.
    if kr.phi.is_finite() {
        push("kr_phi", kr.phi, (-0.5 * u2_o.norm().ln()).max(0.0));
    }
    push("kr_j", kr.j, (0.25 * (e_plus_o * e_minus_o).ln()).max(0.0));

    let jm = expect_j_moments(psi);
    let mean_j_o = expectation_on(&q, psi, OracleOperator::J).re;
    let mean_j2_o = expectation_on(&q, psi, OracleOperator::J2).re;
    push("mean_j", jm.mean_j, mean_j_o);
    push("mean_j2", jm.mean_j2, mean_j2_o);

    let mom = windowed_phi_moments(psi, window);
    let p: Vec<f64> = q.synth(psi.coeffs()).iter().map(|v| v.norm_sqr()).collect();
    let mean_phi_o = q.integrate(|phi| phi, &p);
    push("mean_phi", mom.mean_phi, mean_phi_o);
    push("mean_phi2", mom.mean_phi2, q.integrate(|phi| phi * phi, &p));
    push("var_phi", mom.var_phi, q.integrate(|phi| (phi - mean_phi_o).powi(2), &p));
    push("norm", psi.norm_sqr(), q.integrate(|_| 1.0, &p));

    let obs = [Observable::J, Observable::Phi];
    let g = gram_matrix_in(psi, &obs, window)?;
    let go = oracle_gram(psi, &obs, &cfg)?;
    push("g_jj", g.get(0, 0).re, go.get(0, 0).re);
    push("g_phiphi", g.get(1, 1).re, go.get(1, 1).re);
    push("g_jphi_re", g.get(0, 1).re, go.get(0, 1).re);
    push("g_jphi_im", g.get(0, 1).im, go.get(0, 1).im);
    push("det_g", g.det(), go.det());

    let center_oracle = oracle_packet_center(psi, &cfg);
    Ok(CrossCheck { comparisons: out, center_main: window.phi0, center_oracle, grid_n: cfg.grid_n })
}
