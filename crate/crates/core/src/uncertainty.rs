//! Uncertainty measures and relations.
//!
//! Two families of measures live here: the logarithmic Kowalski-Rembielinski
//! uncertainties built from `<U^2>` and `<e^{+-2J}>`, and the Gram-Robertson
//! matrix `G_ij = <(X_i - <X_i>) psi | (X_j - <X_j>) psi>` with the
//! characteristic, Schrodinger and Heisenberg relations and squeezing criteria
//! that follow from `G >= 0`.
//!
//! The angle enters `G` through the sawtooth branch on the packet-centred
//! window. `phi psi` is not in the span of finitely many `|m>`, so every
//! inner product involving it is evaluated as an exact bilinear form over the
//! coefficients of `psi` rather than through a truncated projection.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::observables::{
    bilinear, expect_exp_j, expect_j_moments, expect_u_power, recentre, sawtooth_kernel,
    windowed_phi_moments, WindowSpec,
};
use crate::states::{apply_z, apply_z_dagger, CircleState, CoeffSeq};

/// Simultaneous-minimum variance used by the `Delta_0^2` squeezing criterion
/// when no estimate is supplied.
pub const DEFAULT_DELTA0_SQ: f64 = 0.49999;

/// Slack used by the relation checks.
pub const RELATION_SLACK: f64 = 1e-10;

const KR_SLACK: f64 = 1e-12;
const INTELLIGENT_REL: f64 = 1e-8;
const MAX_CHARACTERISTIC_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    /// Angular momentum `J = -i d/dphi`.
    J,
    /// Angle on the packet-centred branch.
    Phi,
    /// `X = (Z + Z^dagger) / 2`.
    X,
    /// `Y = (Z - Z^dagger) / 2i`.
    Y,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Observable::J => "J",
            Observable::Phi => "phi",
            Observable::X => "X",
            Observable::Y => "Y",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrUncertainties {
    /// `-(1/4) ln |<U^2>|^2`; `+inf` when `<U^2> = 0`.
    pub phi: f64,
    /// `(1/4) ln(<e^{-2J}> <e^{2J}>)`.
    pub j: f64,
}

impl KrUncertainties {
    pub fn sum(&self) -> f64 {
        self.phi + self.j
    }
}

pub fn kr_uncertainties(psi: &CircleState) -> Result<KrUncertainties> {
    let u2 = expect_u_power(psi, 2).norm();
    // |<U^2>| <= 1; rounding can push it a hair above.
    let phi = if u2 == 0.0 { f64::INFINITY } else { (-0.5 * u2.ln()).max(0.0) };
    let plus = expect_exp_j(psi, 2.0)?;
    let minus = expect_exp_j(psi, -2.0)?;
    let j = (0.25 * (plus * minus).ln()).max(0.0);
    Ok(KrUncertainties { phi, j })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrRelation {
    pub sum: f64,
    pub satisfied: bool,
}

/// `kr_phi + kr_J >= 1`, with `1e-12` slack.
pub fn kr_relation_check(psi: &CircleState) -> Result<KrRelation> {
    let sum = kr_uncertainties(psi)?.sum();
    Ok(KrRelation { sum, satisfied: sum >= 1.0 - KR_SLACK })
}

/// Hermitian Gram-Robertson matrix of a list of observables in one state.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    labels: Vec<Observable>,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    pub fn from_entries(labels: Vec<Observable>, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != labels.len() * labels.len() || labels.is_empty() {
            return Err(domain("Gram matrix entries must form a non-empty square"));
        }
        Ok(Self { labels, entries })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Observable] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n() + j]
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| self.get(i, j))
    }

    /// `S = (G + G^T) / 2 = Re G` for Hermitian `G`.
    pub fn symmetric_part(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| 0.5 * (self.get(i, j) + self.get(j, i)).re)
    }

    /// `A = (G - G^T) / 2i = Im G` for Hermitian `G`.
    pub fn antisymmetric_part(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| {
            ((self.get(i, j) - self.get(j, i)) / Complex64::new(0.0, 2.0)).re
        })
    }

    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i).re).sum()
    }

    pub fn det(&self) -> f64 {
        if self.n() == 2 {
            return (self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)).re;
        }
        self.to_matrix().determinant().re
    }

    /// Eigenvalues of the Hermitian matrix, ascending.
    ///
    /// Computed from the real symmetric embedding `[[S, -A], [A, S]]`, whose
    /// spectrum is that of `G` with every eigenvalue doubled.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n();
        let s = self.symmetric_part();
        let a = self.antisymmetric_part();
        let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => s[(i, j)],
            (true, false) => -a[(i, j - n)],
            (false, true) => a[(i - n, j)],
            (false, false) => s[(i - n, j - n)],
        });
        let mut ev: Vec<f64> = big.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev.into_iter().step_by(2).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Smallest eigenvalue is at least `-1e-10 * trace`.
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -RELATION_SLACK * self.trace().abs().max(f64::MIN_POSITIVE)
    }
}

enum Centred {
    Finite(CoeffSeq),
    Phi,
}

struct GramContext<'a> {
    psi: &'a CircleState,
    phi0: f64,
    recentred: CoeffSeq,
    mean_theta: f64,
    var_phi: f64,
}

impl<'a> GramContext<'a> {
    fn new(psi: &'a CircleState, window: WindowSpec) -> Self {
        let mom = windowed_phi_moments(psi, window);
        Self {
            psi,
            phi0: window.phi0,
            recentred: recentre(psi.coeffs(), window.phi0),
            mean_theta: mom.mean_phi - window.phi0,
            var_phi: mom.var_phi,
        }
    }

    fn centred(&self, obs: Observable) -> Centred {
        let c = self.psi.coeffs();
        let raw = match obs {
            Observable::Phi => return Centred::Phi,
            Observable::J => CoeffSeq::new(c.m_min, c.iter().map(|(m, v)| v * m as f64).collect()),
            Observable::X => apply_z(c, 1.0).add_scaled(Complex64::new(1.0, 0.0), &apply_z_dagger(c, 1.0)).scale(Complex64::new(0.5, 0.0)),
            Observable::Y => apply_z(c, 1.0).add_scaled(Complex64::new(-1.0, 0.0), &apply_z_dagger(c, 1.0)).scale(Complex64::new(0.0, -0.5)),
        };
        let mean = c.dot(&raw);
        Centred::Finite(raw.add_scaled(-mean, c))
    }

    /// `<u | (theta - <theta>) psi>` for a finite vector `u`.
    fn finite_phi(&self, u: &CoeffSeq) -> Complex64 {
        let ur = recentre(u, self.phi0);
        bilinear(&ur, &self.recentred, sawtooth_kernel) - self.mean_theta * ur.dot(&self.recentred)
    }

    fn inner(&self, a: &Centred, b: &Centred) -> Complex64 {
        match (a, b) {
            (Centred::Finite(u), Centred::Finite(w)) => u.dot(w),
            (Centred::Finite(u), Centred::Phi) => self.finite_phi(u),
            (Centred::Phi, Centred::Finite(w)) => self.finite_phi(w).conj(),
            (Centred::Phi, Centred::Phi) => Complex64::new(self.var_phi, 0.0),
        }
    }
}

/// Gram matrix on the packet-centred window.
pub fn gram_matrix(psi: &CircleState, observables: &[Observable]) -> Result<GramMatrix> {
    gram_matrix_in(psi, observables, WindowSpec::centred_on(psi))
}

pub fn gram_matrix_in(psi: &CircleState, observables: &[Observable], window: WindowSpec) -> Result<GramMatrix> {
    if observables.is_empty() {
        return Err(domain("Gram matrix needs at least one observable"));
    }
    let ctx = GramContext::new(psi, window);
    let vecs: Vec<Centred> = observables.iter().map(|&o| ctx.centred(o)).collect();
    let n = vecs.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let g = ctx.inner(&vecs[i], &vecs[j]);
            if i == j {
                entries[i * n + i] = Complex64::new(g.re, 0.0);
            } else {
                entries[i * n + j] = g;
                entries[j * n + i] = g.conj();
            }
        }
    }
    GramMatrix::from_entries(observables.to_vec(), entries)
}

/// `C_r(M)`, the sum of all `r x r` principal minors.
pub fn characteristic_coefficients(m: &DMatrix<f64>, r: usize) -> Result<f64> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(domain("characteristic coefficients need a square matrix"));
    }
    if n > MAX_CHARACTERISTIC_DIM {
        return Err(domain(format!("matrix dimension {n} exceeds {MAX_CHARACTERISTIC_DIM}")));
    }
    if r == 0 || r > n {
        return Err(domain(format!("order r = {r} outside 1..={n}")));
    }
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let minor = DMatrix::from_fn(r, r, |i, j| m[(idx[i], idx[j])]);
        total += minor.determinant();
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicLine {
    pub r: usize,
    pub c_s: f64,
    pub c_a: f64,
    pub satisfied: bool,
}

/// `C_r(S) >= C_r(A)` for every order `r`.
pub fn characteristic_ur_check(g: &GramMatrix) -> Result<Vec<CharacteristicLine>> {
    let s = g.symmetric_part();
    let a = g.antisymmetric_part();
    (1..=g.n())
        .map(|r| {
            let c_s = characteristic_coefficients(&s, r)?;
            let c_a = characteristic_coefficients(&a, r)?;
            Ok(CharacteristicLine { r, c_s, c_a, satisfied: c_s >= c_a - RELATION_SLACK })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerUr {
    pub lhs: f64,
    pub rhs: f64,
    pub det_g: f64,
}

impl SchrodingerUr {
    pub fn holds(&self) -> bool {
        self.det_g >= -RELATION_SLACK
    }
}

/// `var_J var_phi >= cov^2 + (Im G_{J phi})^2`, from a `[J, phi]` Gram matrix.
pub fn schrodinger_from_gram(g: &GramMatrix) -> SchrodingerUr {
    let lhs = g.get(0, 0).re * g.get(1, 1).re;
    let off = g.get(0, 1);
    let rhs = off.re * off.re + off.im * off.im;
    SchrodingerUr { lhs, rhs, det_g: lhs - rhs }
}

pub fn schrodinger_ur(psi: &CircleState) -> Result<SchrodingerUr> {
    Ok(schrodinger_from_gram(&gram_matrix(psi, &[Observable::J, Observable::Phi])?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergUr {
    pub lhs: f64,
    pub rhs: f64,
}

impl HeisenbergUr {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - RELATION_SLACK
    }
}

/// `sqrt(var_1 var_2) >= |Im G_12|`.
pub fn heisenberg_from_gram(g: &GramMatrix) -> HeisenbergUr {
    HeisenbergUr { lhs: (g.get(0, 0).re * g.get(1, 1).re).max(0.0).sqrt(), rhs: g.get(0, 1).im.abs() }
}

pub fn heisenberg_ur(psi: &CircleState) -> Result<HeisenbergUr> {
    Ok(heisenberg_from_gram(&gram_matrix(psi, &[Observable::J, Observable::Phi])?))
}

/// Squeezing of `phi` and `J` under the relative criterion (variance below
/// `|Im G_{J phi}|`) and the absolute one (variance below `Delta_0^2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqueezeFlags {
    pub phi_commutator: bool,
    pub j_commutator: bool,
    pub phi_delta0: bool,
    pub j_delta0: bool,
}

impl SqueezeFlags {
    pub fn any(&self) -> bool {
        self.phi_commutator || self.j_commutator || self.phi_delta0 || self.j_delta0
    }
}

pub fn squeezing_from_gram(g: &GramMatrix, delta0_sq: f64) -> SqueezeFlags {
    let var_j = g.get(0, 0).re;
    let var_phi = g.get(1, 1).re;
    let im = g.get(0, 1).im.abs();
    SqueezeFlags {
        phi_commutator: var_phi < im,
        j_commutator: var_j < im,
        phi_delta0: var_phi < delta0_sq,
        j_delta0: var_j < delta0_sq,
    }
}

pub fn squeezing_flags(psi: &CircleState, delta0_sq: f64) -> Result<SqueezeFlags> {
    if !(delta0_sq > 0.0) {
        return Err(domain(format!("Delta_0^2 must be positive, got {delta0_sq}")));
    }
    Ok(squeezing_from_gram(&gram_matrix(psi, &[Observable::J, Observable::Phi])?, delta0_sq))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntelligentCheck {
    pub mean_x: f64,
    pub mean_y: f64,
    pub dx: f64,
    pub dy: f64,
    /// `|Im G_XY| = |<[X, Y]>| / 2`.
    pub half_mean_commutator: f64,
    pub is_intelligent: bool,
}

/// Heisenberg equality `dX dY = |<[X, Y]>| / 2` for the Hermitian components
/// of `Z`.
pub fn zy_intelligent_check(psi: &CircleState) -> Result<IntelligentCheck> {
    let g = gram_matrix(psi, &[Observable::X, Observable::Y])?;
    let c = psi.coeffs();
    let zc = apply_z(c, 1.0);
    let mean_z = c.dot(&zc);
    let dx = g.get(0, 0).re.max(0.0).sqrt();
    let dy = g.get(1, 1).re.max(0.0).sqrt();
    let half = g.get(0, 1).im.abs();
    let prod = dx * dy;
    Ok(IntelligentCheck {
        mean_x: mean_z.re,
        mean_y: mean_z.im,
        dx,
        dy,
        half_mean_commutator: half,
        is_intelligent: (prod - half).abs() < INTELLIGENT_REL * prod,
    })
}

/// Serialize non-finite reals as strings so JSON round-trips `+inf`.
pub mod ext_real {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            Repr::Num(*v).serialize(s)
        } else if v.is_nan() {
            Repr::Text("nan".into()).serialize(s)
        } else if *v > 0.0 {
            Repr::Text("+inf".into()).serialize(s)
        } else {
            Repr::Text("-inf".into()).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// Every scalar measure for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub label: String,
    #[serde(with = "ext_real")]
    pub kr_phi: f64,
    pub kr_j: f64,
    #[serde(with = "ext_real")]
    pub kr_sum: f64,
    pub kr_satisfied: bool,
    pub mean_phi: f64,
    pub var_phi: f64,
    pub mean_j: f64,
    pub var_j: f64,
    pub cov_jphi: f64,
    pub im_g_jphi: f64,
    pub det_g: f64,
    pub schrodinger_lhs: f64,
    pub schrodinger_rhs: f64,
    pub heisenberg_lhs: f64,
    pub heisenberg_rhs: f64,
    pub delta0_sq: f64,
    pub squeeze_flags: SqueezeFlags,
    pub window: WindowSpec,
}

pub fn uncertainty_report(psi: &CircleState, delta0_sq: f64) -> Result<UncertaintyReport> {
    if !(delta0_sq > 0.0) {
        return Err(domain(format!("Delta_0^2 must be positive, got {delta0_sq}")));
    }
    let window = WindowSpec::centred_on(psi);
    let kr = kr_uncertainties(psi)?;
    let g = gram_matrix_in(psi, &[Observable::J, Observable::Phi], window)?;
    let sch = schrodinger_from_gram(&g);
    let hei = heisenberg_from_gram(&g);
    let mom = windowed_phi_moments(psi, window);
    let jm = expect_j_moments(psi);
    let kr_sum = kr.sum();
    Ok(UncertaintyReport {
        label: psi.label().to_string(),
        kr_phi: kr.phi,
        kr_j: kr.j,
        kr_sum,
        kr_satisfied: kr_sum >= 1.0 - KR_SLACK,
        mean_phi: mom.mean_phi,
        var_phi: g.get(1, 1).re,
        mean_j: jm.mean_j,
        var_j: g.get(0, 0).re,
        cov_jphi: g.get(0, 1).re,
        im_g_jphi: g.get(0, 1).im,
        det_g: sch.det_g,
        schrodinger_lhs: sch.lhs,
        schrodinger_rhs: sch.rhs,
        heisenberg_lhs: hei.lhs,
        heisenberg_rhs: hei.rhs,
        delta0_sq,
        squeeze_flags: squeezing_from_gram(&g, delta0_sq),
        window,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::states::{cat_state, coherent_state, fock_state, squeezed_coherent_state};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_kr_is_half() {
        let kr = kr_uncertainties(&coherent_state(c(2.0, -1.0)).unwrap()).unwrap();
        assert!((kr.phi - 0.5).abs() < 1e-9 && (kr.j - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fock_kr_is_infinite() {
        let kr = kr_uncertainties(&fock_state(3)).unwrap();
        assert_eq!(kr.phi, f64::INFINITY);
        assert!(kr.j.abs() < 1e-15);
        let rel = kr_relation_check(&fock_state(3)).unwrap();
        assert!(rel.satisfied && rel.sum.is_infinite());
    }

    #[test]
    fn characteristic_small_cases() {
        let id = DMatrix::<f64>::identity(2, 2);
        assert_eq!(characteristic_coefficients(&id, 1).unwrap(), 2.0);
        assert_eq!(characteristic_coefficients(&id, 2).unwrap(), 1.0);
        let b = 0.7;
        let anti = DMatrix::from_row_slice(2, 2, &[0.0, b, -b, 0.0]);
        assert!((characteristic_coefficients(&anti, 2).unwrap() - b * b).abs() < 1e-15);
        assert!(characteristic_coefficients(&id, 0).is_err());
        assert!(characteristic_coefficients(&id, 3).is_err());
        assert!(characteristic_coefficients(&DMatrix::<f64>::identity(7, 7), 1).is_err());
    }

    #[test]
    fn characteristic_three_by_three() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        assert_eq!(characteristic_coefficients(&m, 1).unwrap(), 9.0);
        // (6-1) + (8-0) + (12-1)
        assert!((characteristic_coefficients(&m, 2).unwrap() - 24.0).abs() < 1e-12);
        assert!((characteristic_coefficients(&m, 3).unwrap() - m.determinant()).abs() < 1e-12);
    }

    #[test]
    fn fock_gram() {
        let g = gram_matrix(&fock_state(-2), &[Observable::J, Observable::Phi]).unwrap();
        assert_eq!(g.get(0, 0), c(0.0, 0.0));
        assert_eq!(g.get(0, 1), c(0.0, 0.0));
        assert!((g.get(1, 1).re - PI * PI / 3.0).abs() < 1e-14);
        let lines = characteristic_ur_check(&g).unwrap();
        assert!(lines.iter().all(|l| l.satisfied));
        assert!(lines[1].c_s.abs() < 1e-15 && lines[1].c_a.abs() < 1e-15);
    }

    #[test]
    fn real_cat_has_no_covariance() {
        for &a in &[-2.0, -1.0, 0.3, 1.0] {
            let g = gram_matrix(&cat_state(c(0.4, 0.0), c(a, 0.0)).unwrap(), &[Observable::J, Observable::Phi]).unwrap();
            assert!(g.get(0, 1).re.abs() < 1e-9, "a = {a}: {}", g.get(0, 1));
        }
    }

    #[test]
    fn gram_is_hermitian_and_psd_for_mixed_sets() {
        let psi = cat_state(c(0.8, 0.6), c(0.2, 1.1)).unwrap();
        let g = gram_matrix(&psi, &[Observable::J, Observable::Phi, Observable::X, Observable::Y]).unwrap();
        assert!(g.hermitian_defect() < 1e-12);
        assert!(g.is_psd(), "{:?}", g.eigenvalues());
        assert!(characteristic_ur_check(&g).unwrap().iter().all(|l| l.satisfied));
        let det_direct = g.to_matrix().determinant().re;
        assert!((g.det() - det_direct).abs() < 1e-12);
    }

    #[test]
    fn odd_cat_heisenberg_has_room() {
        let h = heisenberg_ur(&cat_state(c(1.0, 0.0), c(-1.0, 0.0)).unwrap()).unwrap();
        assert!(h.lhs > 1.2 && h.rhs < 0.6, "{h:?}");
    }

    #[test]
    fn squeezed_state_is_phi_squeezed() {
        let f = squeezing_flags(&squeezed_coherent_state(c(1.0, 0.0), 0.25).unwrap(), DEFAULT_DELTA0_SQ).unwrap();
        assert!(f.phi_delta0 && f.phi_commutator && !f.j_delta0);
        assert!(squeezing_flags(&fock_state(0), 0.0).is_err());
    }

    #[test]
    fn coherent_state_angle_is_not_squeezed() {
        // var_J oscillates slightly below 1/2 for these z, so only the angle
        // flags are expected to stay off.
        for &z in &[0.4, 1.0, 3.0] {
            let f = squeezing_flags(&coherent_state(c(z, 0.0)).unwrap(), DEFAULT_DELTA0_SQ).unwrap();
            assert!(!f.phi_commutator && !f.phi_delta0, "z = {z}: {f:?}");
        }
    }

    #[test]
    fn fock_zy_components() {
        let chk = zy_intelligent_check(&fock_state(1)).unwrap();
        assert_eq!((chk.mean_x, chk.mean_y), (0.0, 0.0));
        assert!((chk.dx - chk.dy).abs() < 1e-15);
    }

    #[test]
    fn report_identity_and_json() {
        let psi = cat_state(c(1.0, 0.0), c(0.4, 0.3)).unwrap();
        let r = uncertainty_report(&psi, DEFAULT_DELTA0_SQ).unwrap();
        let ident = r.var_phi * r.var_j - r.cov_jphi.powi(2) - r.im_g_jphi.powi(2);
        assert!((r.det_g - ident).abs() < 1e-10);
        assert_eq!(r.kr_sum, r.kr_phi + r.kr_j);
        let back: UncertaintyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn infinite_kr_survives_json() {
        let r = uncertainty_report(&fock_state(0), DEFAULT_DELTA0_SQ).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"kr_phi\":\"+inf\""));
        let back: UncertaintyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.kr_phi, f64::INFINITY);
        assert_eq!(back, r);
    }
}
