//! State families on the circle as truncated coefficient sequences.
//!
//! A state is `sum_m c_m |m>` with `J|m> = m|m>` and wave function
//! `psi(phi) = (2 pi)^{-1/2} sum_m c_m e^{i m phi}`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Boundary coefficients must fall below this fraction of the peak magnitude.
pub const BOUNDARY_REL: f64 = 1e-18;

/// Largest admissible distance (in modes) between the peak and a window edge.
pub const MAX_HALF_WIDTH: i32 = 64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Contiguous run of coefficients starting at `m_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    pub m_min: i32,
    pub values: Vec<Complex64>,
}

impl CoeffSeq {
    pub fn new(m_min: i32, values: Vec<Complex64>) -> Self {
        Self { m_min, values }
    }

    pub fn zeros(m_min: i32, m_max: i32) -> Self {
        let len = (m_max - m_min + 1).max(0) as usize;
        Self { m_min, values: vec![ZERO; len] }
    }

    pub fn m_max(&self) -> i32 {
        self.m_min + self.values.len() as i32 - 1
    }

    pub fn get(&self, m: i32) -> Complex64 {
        let k = m - self.m_min;
        if k < 0 || k as usize >= self.values.len() {
            ZERO
        } else {
            self.values[k as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &c)| (self.m_min + k as i32, c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn dot(&self, other: &CoeffSeq) -> Complex64 {
        let lo = self.m_min.max(other.m_min);
        let hi = self.m_max().min(other.m_max());
        (lo..=hi).map(|m| self.get(m).conj() * other.get(m)).sum()
    }

    /// `self + factor * other` over the union of both ranges.
    pub fn add_scaled(&self, factor: Complex64, other: &CoeffSeq) -> CoeffSeq {
        let lo = self.m_min.min(other.m_min);
        let hi = self.m_max().max(other.m_max());
        let values = (lo..=hi).map(|m| self.get(m) + factor * other.get(m)).collect();
        CoeffSeq { m_min: lo, values }
    }

    pub fn scale(&self, factor: Complex64) -> CoeffSeq {
        CoeffSeq { m_min: self.m_min, values: self.values.iter().map(|&c| c * factor).collect() }
    }
}

/// Parameters of the state families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    pub z: Complex64,
    pub s: f64,
    pub a: Complex64,
    pub m: i32,
}

impl Default for StateParams {
    fn default() -> Self {
        Self { z: Complex64::new(1.0, 0.0), s: 1.0, a: ZERO, m: 0 }
    }
}

/// Normalized state with a certified truncation window.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleState {
    coeffs: CoeffSeq,
    label: String,
}

impl CircleState {
    /// Normalizes `coeffs`, fixes the global phase (largest coefficient real
    /// and positive) and pads with a zero on either side if a boundary
    /// coefficient is not negligible.
    pub fn from_coeffs(coeffs: CoeffSeq, label: impl Into<String>) -> Result<Self> {
        let norm = coeffs.norm_sqr().sqrt();
        if !(norm > 1e-10) || !norm.is_finite() {
            return Err(Error::DegenerateSuperposition { norm });
        }
        let peak = coeffs
            .values
            .iter()
            .copied()
            .fold(ZERO, |best, c| if c.norm() > best.norm() { c } else { best });
        let phase = peak.conj() / peak.norm();
        let mut values: Vec<Complex64> = coeffs.values.iter().map(|&c| c * phase / norm).collect();
        let mut m_min = coeffs.m_min;
        let cutoff = BOUNDARY_REL * peak.norm() / norm;
        if values.first().map_or(true, |c| c.norm() >= cutoff) {
            values.insert(0, ZERO);
            m_min -= 1;
        }
        if values.last().map_or(true, |c| c.norm() >= cutoff) {
            values.push(ZERO);
        }
        Ok(Self { coeffs: CoeffSeq { m_min, values }, label: label.into() })
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    pub fn m_min(&self) -> i32 {
        self.coeffs.m_min
    }

    pub fn m_max(&self) -> i32 {
        self.coeffs.m_max()
    }

    pub fn coeff(&self, m: i32) -> Complex64 {
        self.coeffs.get(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.norm_sqr()
    }

    pub fn peak_abs(&self) -> f64 {
        self.coeffs.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Both boundary coefficients are below `BOUNDARY_REL` of the peak.
    pub fn truncation_certified(&self) -> bool {
        let cut = BOUNDARY_REL * self.peak_abs();
        let v = &self.coeffs.values;
        v.first().map_or(false, |c| c.norm() < cut) && v.last().map_or(false, |c| c.norm() < cut)
    }
}

impl fmt::Display for CircleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [m = {}..{}]", self.label, self.m_min(), self.m_max())
    }
}

fn check_z(z: Complex64) -> Result<()> {
    if z == ZERO || !z.re.is_finite() || !z.im.is_finite() {
        return Err(domain(format!("z must be nonzero and finite, got {z}")));
    }
    Ok(())
}

/// `c_m = exp(-s m^2 / 2) z^{-m}` on a window symmetric about the magnitude
/// peak, scaled so the peak magnitude is 1, with the natural phases (no
/// phase fix, not normalized).
pub fn coefficient_law(z: Complex64, s: f64) -> Result<CoeffSeq> {
    check_z(z)?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!("squeeze parameter must be positive, got {s}")));
    }
    let ln_z = z.ln();
    let log_mag = |m: f64| -0.5 * s * m * m - m * ln_z.re;
    let centre = (-ln_z.re / s).round() as i32;
    let peak = log_mag(centre as f64);
    let drop = -BOUNDARY_REL.ln();

    let mut half = 1;
    while log_mag((centre - half) as f64) - peak > -drop || log_mag((centre + half) as f64) - peak > -drop {
        half += 1;
        if half > MAX_HALF_WIDTH {
            let needed = ((2.0 * drop / s).sqrt().ceil() as i32).max(half);
            return Err(Error::TruncationCap { cap: MAX_HALF_WIDTH, needed });
        }
    }
    let values = (centre - half..=centre + half)
        .map(|m| {
            let mf = m as f64;
            Complex64::from_polar((log_mag(mf) - peak).exp(), -mf * ln_z.im)
        })
        .collect();
    Ok(CoeffSeq::new(centre - half, values))
}

/// Eigenstate `|z>` of `Z = exp(-J + 1/2) U`.
pub fn coherent_state(z: Complex64) -> Result<CircleState> {
    check_z(z)?;
    CircleState::from_coeffs(coefficient_law(z, 1.0)?, format!("coherent z={}", fmt_c(z)))
}

/// Eigenstate `|z>_s` of `Z(s) = exp(-s J + s/2) U`.
pub fn squeezed_coherent_state(z: Complex64, s: f64) -> Result<CircleState> {
    check_z(z)?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!("squeeze parameter must be positive, got {s}")));
    }
    CircleState::from_coeffs(coefficient_law(z, s)?, format!("squeezed z={} s={s}", fmt_c(z)))
}

/// `|z, a> = N(z, a) (|z> + a |-z>)`.
///
/// Both components carry the natural phases of the coefficient law, so that
/// `a` has its textbook meaning; the phase convention is applied only to the
/// final superposition.
pub fn cat_state(z: Complex64, a: Complex64) -> Result<CircleState> {
    check_z(z)?;
    let plus = coefficient_law(z, 1.0)?;
    // (-z)^{-m} = (-1)^m z^{-m}, applied exactly so even/odd cats keep exact zeros.
    let minus = CoeffSeq::new(
        plus.m_min,
        plus.iter().map(|(m, v)| if m.rem_euclid(2) == 0 { v } else { -v }).collect(),
    );
    let sum = plus.add_scaled(a, &minus);
    CircleState::from_coeffs(sum, format!("cat z={} a={}", fmt_c(z), fmt_c(a)))
}

/// Normalization constant `N(z, a) = [1 + |a|^2 + 2 <z|-z> Re a]^{-1/2}`
/// with the normalized overlap `<z|-z> = theta(-|z|^2) / theta(|z|^2)`.
pub fn cat_normalization(z: Complex64, a: Complex64) -> Result<f64> {
    use crate::theta::cs_overlap;
    check_z(z)?;
    let overlap = cs_overlap(z, -z)? / cs_overlap(z, z)?;
    Ok((1.0 + a.norm_sqr() + 2.0 * overlap.re * a.re).powf(-0.5))
}

/// Angular-momentum eigenstate `psi_m(phi) = e^{i m phi} / sqrt(2 pi)`.
pub fn fock_state(m: i32) -> CircleState {
    let coeffs = CoeffSeq::new(m - 1, vec![ZERO, Complex64::new(1.0, 0.0), ZERO]);
    CircleState { coeffs, label: format!("fock m={m}") }
}

/// Normalized `sum_k w_k psi_k`.
pub fn superpose(states: &[CircleState], weights: &[Complex64]) -> Result<CircleState> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(domain("superpose needs non-empty, equally long state and weight lists"));
    }
    let mut acc = states[0].coeffs.scale(weights[0]);
    for (st, &w) in states.iter().zip(weights).skip(1) {
        acc = acc.add_scaled(w, &st.coeffs);
    }
    let labels: Vec<&str> = states.iter().map(|s| s.label()).collect();
    CircleState::from_coeffs(acc, format!("superposition of [{}]", labels.join("; ")))
}

/// Action of `Z(s) = exp(-s J + s/2) U`: `(Z c)_m = e^{-s (m - 1/2)} c_{m-1}`.
pub fn apply_z(c: &CoeffSeq, s: f64) -> CoeffSeq {
    let values = (c.m_min + 1..=c.m_max() + 1)
        .map(|m| c.get(m - 1) * (-s * (m as f64 - 0.5)).exp())
        .collect();
    CoeffSeq::new(c.m_min + 1, values)
}

/// Action of the adjoint: `(Z^dagger c)_m = e^{-s (m + 1/2)} c_{m+1}`.
pub fn apply_z_dagger(c: &CoeffSeq, s: f64) -> CoeffSeq {
    let values = (c.m_min - 1..=c.m_max() - 1)
        .map(|m| c.get(m + 1) * (-s * (m as f64 + 0.5)).exp())
        .collect();
    CoeffSeq::new(c.m_min - 1, values)
}

/// `|| (Z(s) - z) psi ||`.
pub fn eigen_residual(psi: &CircleState, z: Complex64, s: f64) -> f64 {
    let zc = apply_z(psi.coeffs(), s);
    zc.add_scaled(-z, psi.coeffs()).norm_sqr().sqrt()
}

pub(crate) fn fmt_c(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_z_is_rejected() {
        assert!(coherent_state(c(0.0, 0.0)).is_err());
        assert!(squeezed_coherent_state(c(0.0, 0.0), 1.0).is_err());
        assert!(cat_state(c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn nonpositive_squeeze_is_rejected() {
        assert!(squeezed_coherent_state(c(1.0, 0.0), 0.0).is_err());
        assert!(squeezed_coherent_state(c(1.0, 0.0), -0.5).is_err());
    }

    #[test]
    fn cap_binds_for_tiny_squeeze() {
        match squeezed_coherent_state(c(1.0, 0.0), 0.005) {
            Err(Error::TruncationCap { cap, .. }) => assert_eq!(cap, MAX_HALF_WIDTH),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn coherent_at_one_is_symmetric() {
        let psi = coherent_state(c(1.0, 0.0)).unwrap();
        for m in 0..10 {
            assert!((psi.coeff(m) - psi.coeff(-m)).norm() < 1e-16);
        }
        let ratio = psi.coeff(1).norm_sqr() / psi.coeff(0).norm_sqr();
        assert!((ratio - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn coherent_peak_follows_log_modulus() {
        // |c_m|^2 ~ exp(-m^2 + 2 m l) peaks at m = l.
        for &l in &[2.0, -3.0, 0.2] {
            let psi = coherent_state(c((-l as f64).exp(), 0.0)).unwrap();
            let argmax = (psi.m_min()..=psi.m_max())
                .max_by(|&a, &b| psi.coeff(a).norm().partial_cmp(&psi.coeff(b).norm()).unwrap())
                .unwrap();
            assert_eq!(argmax, (l as f64).round() as i32);
        }
    }

    #[test]
    fn unit_squeeze_matches_coherent() {
        for &z in &[c(0.4, 0.0), c(1.0, 1.0), c(-3.0, 0.2)] {
            let a = coherent_state(z).unwrap();
            let b = squeezed_coherent_state(z, 1.0).unwrap();
            assert_eq!(a.coeffs(), b.coeffs());
        }
    }

    #[test]
    fn smaller_squeeze_is_broader() {
        let count = |psi: &CircleState| psi.coeffs().values.iter().filter(|c| c.norm_sqr() > 1e-6).count();
        let narrow = coherent_state(c(1.0, 0.0)).unwrap();
        let broad = squeezed_coherent_state(c(1.0, 0.0), 0.25).unwrap();
        assert!(count(&broad) > count(&narrow));
    }

    #[test]
    fn cat_with_zero_weight_is_coherent() {
        let z = c(0.7, -0.4);
        assert_eq!(cat_state(z, c(0.0, 0.0)).unwrap().coeffs(), coherent_state(z).unwrap().coeffs());
    }

    #[test]
    fn odd_cat_has_only_odd_modes() {
        let psi = cat_state(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        for m in psi.m_min()..=psi.m_max() {
            if m % 2 == 0 {
                assert_eq!(psi.coeff(m).norm(), 0.0, "m = {m}");
            }
        }
        // Surviving weights go like e^{-m^2}.
        let r = psi.coeff(3).norm_sqr() / psi.coeff(1).norm_sqr();
        assert!((r - (-8.0f64).exp()).abs() < 1e-15);
        assert!((psi.coeff(1).norm_sqr() - psi.coeff(-1).norm_sqr()).abs() < 1e-16);
    }

    #[test]
    fn fock_has_one_coefficient() {
        let psi = fock_state(5);
        assert_eq!(psi.coeff(5), c(1.0, 0.0));
        assert_eq!(psi.coeffs().values.iter().filter(|c| c.norm() > 0.0).count(), 1);
        assert!(psi.truncation_certified());
    }

    #[test]
    fn superpose_identity_and_errors() {
        let psi = coherent_state(c(0.4, 0.3)).unwrap();
        let same = superpose(&[psi.clone()], &[c(1.0, 0.0)]).unwrap();
        assert_eq!(same.coeffs(), psi.coeffs());
        assert!(superpose(&[], &[]).is_err());
        assert!(superpose(&[psi.clone()], &[]).is_err());
        match superpose(&[psi.clone(), psi], &[c(1.0, 0.0), c(-1.0, 0.0)]) {
            Err(Error::DegenerateSuperposition { .. }) => {}
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn superpose_reproduces_cat_on_unit_circle() {
        let z = c(1.0, 0.0);
        let a = c(0.5, 0.0);
        let n = cat_normalization(z, a).unwrap();
        let s = superpose(
            &[coherent_state(z).unwrap(), coherent_state(-z).unwrap()],
            &[c(n, 0.0), c(n, 0.0) * a],
        )
        .unwrap();
        let cat = cat_state(z, a).unwrap();
        for m in -12..=12 {
            assert!((s.coeff(m) - cat.coeff(m)).norm() < 1e-12);
        }
    }

    #[test]
    fn z_and_adjoint_are_adjoint() {
        let u = coherent_state(c(0.6, 0.2)).unwrap();
        let v = cat_state(c(1.3, -0.5), c(0.0, 1.0)).unwrap();
        let lhs = v.coeffs().dot(&apply_z(u.coeffs(), 0.7));
        let rhs = apply_z_dagger(v.coeffs(), 0.7).dot(u.coeffs());
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
