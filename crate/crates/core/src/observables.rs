//! Expectation values, densities, packet centres and windowed angle moments.
//!
//! All angle quantities use the single branch `phi in [phi0 - pi, phi0 + pi]`
//! around the packet centre `phi0`. Inside the window the angle is handled in
//! the recentred variable `theta = phi - phi0`, for which the state has
//! coefficients `d_m = c_m e^{i m phi0}`, and every integral reduces to the
//! closed forms
//!
//! ```text
//! (1/2pi) int_{-pi}^{pi} theta   e^{i n theta} = -i (-1)^n / n        (n != 0), 0
//! (1/2pi) int_{-pi}^{pi} theta^2 e^{i n theta} =  2 (-1)^n / n^2      (n != 0), pi^2 / 3
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::states::{CircleState, CoeffSeq};

pub const DEFAULT_GRID: usize = 4096;
const CENTER_GRID: usize = 4096;
/// Relative tolerance under which two density values count as a tie.
const TIE_REL: f64 = 1e-12;
const OVERFLOW_LIMIT: f64 = 1e300;

/// Integration window `[phi0 - pi, phi0 + pi]` plus the quadrature size used
/// by grid-based consumers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub phi0: f64,
    pub grid_n: usize,
}

impl WindowSpec {
    pub fn new(phi0: f64, grid_n: usize) -> Result<Self> {
        if !phi0.is_finite() {
            return Err(domain("window centre must be finite"));
        }
        if grid_n < 256 || grid_n % 2 != 0 {
            return Err(domain(format!("grid_n must be even and >= 256, got {grid_n}")));
        }
        Ok(Self { phi0, grid_n })
    }

    /// Window centred on the packet centre of `psi`.
    pub fn centred_on(psi: &CircleState) -> Self {
        Self { phi0: packet_center(psi), grid_n: DEFAULT_GRID }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiMoments {
    pub mean_phi: f64,
    pub mean_phi2: f64,
    pub var_phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JMoments {
    pub mean_j: f64,
    pub mean_j2: f64,
    pub var_j: f64,
}

/// `(1/2pi) int_{-pi}^{pi} theta e^{i n theta} d theta`.
pub fn sawtooth_kernel(n: i64) -> Complex64 {
    if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, -alt_sign(n) / n as f64)
    }
}

/// `(1/2pi) int_{-pi}^{pi} theta^2 e^{i n theta} d theta`.
pub fn parabola_kernel(n: i64) -> f64 {
    if n == 0 {
        PI * PI / 3.0
    } else {
        2.0 * alt_sign(n) / (n as f64 * n as f64)
    }
}

fn alt_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficients of `psi(phi0 + theta)` as a function of `theta`.
pub(crate) fn recentre(c: &CoeffSeq, phi0: f64) -> CoeffSeq {
    CoeffSeq::new(c.m_min, c.iter().map(|(m, v)| v * Complex64::from_polar(1.0, m as f64 * phi0)).collect())
}

/// `sum_{m, m'} conj(u_m') w_m K(m - m')` for a kernel `K`.
pub(crate) fn bilinear(u: &CoeffSeq, w: &CoeffSeq, kernel: impl Fn(i64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (mp, up) in u.iter() {
        if up == Complex64::new(0.0, 0.0) {
            continue;
        }
        let upc = up.conj();
        for (m, wm) in w.iter() {
            acc += upc * wm * kernel(m as i64 - mp as i64);
        }
    }
    acc
}

/// `<U^k> = sum_m conj(c_{m+k}) c_m`.
pub fn expect_u_power(psi: &CircleState, k: i32) -> Complex64 {
    psi.coeffs().iter().map(|(m, c)| psi.coeff(m + k).conj() * c).sum()
}

/// `<e^{beta J}> = sum_m e^{beta m} |c_m|^2`.
pub fn expect_exp_j(psi: &CircleState, beta: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (m, c) in psi.coeffs().iter() {
        let term = (beta * m as f64).exp() * c.norm_sqr();
        if term > OVERFLOW_LIMIT || !term.is_finite() {
            return Err(Error::TruncationOverflow { m });
        }
        acc += term;
    }
    Ok(acc)
}

pub fn expect_j_moments(psi: &CircleState) -> JMoments {
    let mut mean = 0.0;
    let mut mean2 = 0.0;
    for (m, c) in psi.coeffs().iter() {
        let w = c.norm_sqr();
        mean += m as f64 * w;
        mean2 += (m as f64).powi(2) * w;
    }
    // Centred sum avoids cancellation for large |<J>|.
    let var: f64 = psi.coeffs().iter().map(|(m, c)| (m as f64 - mean).powi(2) * c.norm_sqr()).sum();
    JMoments { mean_j: mean, mean_j2: mean2, var_j: var.max(0.0) }
}

/// `psi(phi) = (2 pi)^{-1/2} sum_m c_m e^{i m phi}`, evaluated by Horner's rule
/// in `e^{i phi}`.
pub fn wavefunction(psi: &CircleState, phis: &[f64]) -> Vec<Complex64> {
    synthesize(psi.coeffs(), phis)
}

pub(crate) fn synthesize(c: &CoeffSeq, phis: &[f64]) -> Vec<Complex64> {
    let scale = (2.0 * PI).sqrt().recip();
    phis.iter()
        .map(|&phi| {
            let w = Complex64::from_polar(1.0, phi);
            let poly = c.values.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * w + v);
            poly * Complex64::from_polar(scale, c.m_min as f64 * phi)
        })
        .collect()
}

pub fn density(psi: &CircleState, phis: &[f64]) -> Vec<f64> {
    wavefunction(psi, phis).into_iter().map(|v| v.norm_sqr()).collect()
}

/// Uniform grid `-pi + 2 pi k / n`, `k = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| -PI + k as f64 * h).collect()
}

/// Index of the density maximum on a uniform `[-pi, pi)` grid. Ties go to the
/// point with the smallest representative in `[0, 2 pi)`.
pub(crate) fn grid_argmax(grid: &[f64], p: &[f64]) -> usize {
    let pmax = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let key = |phi: f64| if phi < 0.0 { phi + 2.0 * PI } else { phi };
    let mut best = None::<usize>;
    for (k, (&phi, &pk)) in grid.iter().zip(p).enumerate() {
        if pk >= pmax - TIE_REL * pmax.abs() {
            match best {
                Some(b) if key(grid[b]) <= key(phi) => {}
                _ => best = Some(k),
            }
        }
    }
    best.unwrap_or(0)
}

/// Most probable angle in `[-pi, pi)`.
///
/// Coarse scan on 4096 points followed by a parabolic fit through the winning
/// triple. Ties between equal maxima are broken towards the smallest
/// nonnegative representative, so a flat density yields `0`.
pub fn packet_center(psi: &CircleState) -> f64 {
    let grid = uniform_grid(CENTER_GRID);
    let p = density(psi, &grid);
    let n = grid.len();
    let k = grid_argmax(&grid, &p);
    let h = 2.0 * PI / n as f64;
    let (l, c, r) = (p[(k + n - 1) % n], p[k], p[(k + 1) % n]);
    let denom = l - 2.0 * c + r;
    let mut phi = grid[k];
    // A strict interior maximum has denom < 0; flat or degenerate triples keep the grid point.
    if denom < -TIE_REL * c.abs() {
        let offset = 0.5 * (l - r) / denom;
        if offset.abs() <= 1.0 {
            phi += offset * h;
        }
    }
    wrap_angle(phi)
}

/// Map into `[-pi, pi)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// `<phi>`, `<phi^2>` and the variance on the branch `[phi0 - pi, phi0 + pi]`,
/// from closed-form Fourier integrals over coefficient pairs.
pub fn windowed_phi_moments(psi: &CircleState, window: WindowSpec) -> PhiMoments {
    let d = recentre(psi.coeffs(), window.phi0);
    let mean_theta = bilinear(&d, &d, sawtooth_kernel).re;
    let mean_theta2 = bilinear(&d, &d, |n| Complex64::new(parabola_kernel(n), 0.0)).re;
    let var = (mean_theta2 - mean_theta * mean_theta).max(0.0);
    let phi0 = window.phi0;
    PhiMoments {
        mean_phi: phi0 + mean_theta,
        mean_phi2: phi0 * phi0 + 2.0 * phi0 * mean_theta + mean_theta2,
        var_phi: var,
    }
}

/// `(J c)_m = m c_m`.
pub fn apply_j(psi: &CircleState) -> CoeffSeq {
    let c = psi.coeffs();
    CoeffSeq::new(c.m_min, c.iter().map(|(m, v)| v * m as f64).collect())
}

/// Fourier coefficients of the windowed product `phi psi(phi)` together with
/// the Parseval gap `<phi^2> - sum |e_n|^2` left by the finite band.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiProjection {
    pub coeffs: CoeffSeq,
    pub residual: f64,
    pub band: i32,
}

const PROJECTION_TOL: f64 = 1e-10;
const MAX_BAND: i32 = 1 << 13;

/// Multiply `psi` by the sawtooth branch of `phi` on the window and project
/// back onto `e^{i n phi}`.
///
/// The band is doubled until the Parseval gap drops below `1e-10` or the
/// band reaches 8192 extra modes on each side. The product has a jump at the
/// cut `phi0 + pi` unless `psi` vanishes there, in which case the gap only
/// decays like `1/band`; callers needing exact inner products with `phi psi`
/// should use the bilinear forms in [`crate::uncertainty`] instead.
pub fn apply_phi_windowed(psi: &CircleState, window: WindowSpec) -> PhiProjection {
    let c = psi.coeffs();
    let phi0 = window.phi0;
    let target = windowed_phi_moments(psi, window).mean_phi2;
    let mut band = 8;
    loop {
        let lo = c.m_min - band;
        let hi = c.m_max() + band;
        let values: Vec<Complex64> = (lo..=hi)
            .map(|n| {
                let mut e = c.get(n) * phi0;
                for (m, cm) in c.iter() {
                    let diff = (m - n) as i64;
                    e += cm * Complex64::from_polar(1.0, diff as f64 * phi0) * sawtooth_kernel(diff);
                }
                e
            })
            .collect();
        let coeffs = CoeffSeq::new(lo, values);
        let residual = target - coeffs.norm_sqr();
        if residual.abs() < PROJECTION_TOL * psi.norm_sqr() || band >= MAX_BAND {
            return PhiProjection { coeffs, residual, band };
        }
        band *= 2;
    }
}
