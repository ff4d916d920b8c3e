//! Jacobi theta function on the imaginary-modulus slice.
//!
//! `theta3(v, i t) = sum_n exp(-pi t n^2) exp(2 pi i n v)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Relative size of the first dropped term, measured against `max(|partial sum|, 1)`.
const TAIL_TOL: f64 = 1e-16;

/// Argument pair `(v, tau = i t)` for [`theta3`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArg {
    v: Complex64,
    t: f64,
}

impl ThetaArg {
    pub fn new(v: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(domain(format!("theta3 needs t > 0, got {t}")));
        }
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(domain("theta3 argument v must be finite"));
        }
        Ok(Self { v, t })
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Evaluate `theta3(v, i t)` by direct summation.
///
/// Pairs `+n` and `-n` are added until the larger of the two term magnitudes,
/// `exp(-pi t n^2 + 2 pi n |Im v|)`, is past its maximum and below
/// `1e-16 * max(|partial|, 1)`.
pub fn theta3(arg: ThetaArg) -> Complex64 {
    let ThetaArg { v, t } = arg;
    let im_abs = v.im.abs();
    // The bound is increasing in n until n = |Im v| / t.
    let turning = im_abs / t;
    let two_pi_i_v = Complex64::new(0.0, 2.0 * PI) * v;

    let mut sum = Complex64::new(1.0, 0.0);
    let mut n: i64 = 1;
    loop {
        let nf = n as f64;
        let log_bound = -PI * t * nf * nf + 2.0 * PI * nf * im_abs;
        if nf > turning && log_bound.exp() < TAIL_TOL * sum.norm().max(1.0) {
            break;
        }
        let gauss = -PI * t * nf * nf;
        let plus = (Complex64::new(gauss, 0.0) + two_pi_i_v * nf).exp();
        let minus = (Complex64::new(gauss, 0.0) - two_pi_i_v * nf).exp();
        sum += plus + minus;
        n += 1;
    }
    sum
}

/// Unnormalized overlap `<z1|z2>` of two coherent states,
/// `theta3((i / 2 pi) ln(conj(z1) z2), i / pi) = sum_m e^{-m^2} (conj(z1) z2)^{-m}`.
///
/// Only integer powers of `conj(z1) z2` enter, so the principal branch of the
/// logarithm is as good as any other.
pub fn cs_overlap(z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if z1 == Complex64::new(0.0, 0.0) || z2 == Complex64::new(0.0, 0.0) {
        return Err(domain("coherent-state overlap needs nonzero arguments"));
    }
    let w = z1.conj() * z2;
    let v = Complex64::new(0.0, 1.0 / (2.0 * PI)) * w.ln();
    Ok(theta3(ThetaArg::new(v, 1.0 / PI)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_nonpositive_modulus() {
        assert!(ThetaArg::new(c(0.0, 0.0), 0.0).is_err());
        assert!(ThetaArg::new(c(0.0, 0.0), -1.0).is_err());
        assert!(ThetaArg::new(c(0.0, 0.0), f64::NAN).is_err());
    }

    #[test]
    fn gaussian_sums() {
        // Partial sums of sum e^{-n^2} and sum (-1)^n e^{-n^2}.
        let mut plain = 1.0;
        let mut alt = 1.0;
        for n in 1..=10 {
            let term = (-(n as f64).powi(2)).exp();
            plain += 2.0 * term;
            alt += 2.0 * if n % 2 == 0 { term } else { -term };
        }
        let a = theta3(ThetaArg::new(c(0.0, 0.0), 1.0 / PI).unwrap());
        let b = theta3(ThetaArg::new(c(0.5, 0.0), 1.0 / PI).unwrap());
        assert!((a.re - plain).abs() < 1e-15 && a.im.abs() < 1e-15);
        assert!((b.re - alt).abs() < 1e-15 && b.im.abs() < 1e-15);
        assert!((a.re - 1.7726372).abs() < 1e-7);
        assert!((b.re - 0.3006259).abs() < 1e-7);
    }

    #[test]
    fn unit_period_in_v() {
        for &(v, t) in &[(c(0.3, 0.2), 0.7), (c(-0.8, -1.1), 2.0), (c(0.1, 0.0), 0.15)] {
            let a = theta3(ThetaArg::new(v, t).unwrap());
            let b = theta3(ThetaArg::new(v + 1.0, t).unwrap());
            assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
        }
    }

    #[test]
    fn overlap_rejects_zero() {
        assert!(cs_overlap(c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(cs_overlap(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn overlap_at_unity() {
        let o = cs_overlap(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let direct: f64 = (-10..=10).map(|m: i32| (-(m * m) as f64).exp()).sum();
        assert!((o.re - direct).abs() < 1e-15);
    }

    #[test]
    fn overlap_with_antipode_is_real_ratio() {
        for &z in &[c(0.4, 0.0), c(1.0, 1.0), c(-2.0, 0.5)] {
            let r = cs_overlap(z, -z).unwrap() / cs_overlap(z, z).unwrap();
            assert!(r.im.abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn overlap_is_hermitian() {
        let z1 = c(0.7, -0.3);
        let z2 = c(-1.2, 2.0);
        let a = cs_overlap(z1, z2).unwrap();
        let b = cs_overlap(z2, z1).unwrap();
        assert!((a - b.conj()).norm() < 1e-13 * a.norm());
    }
}
