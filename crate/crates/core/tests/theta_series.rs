//! theta3 against brute-force summation and the quasi-periodicity identity.

use std::f64::consts::PI;

use circle_unc::theta::{cs_overlap, theta3, ThetaArg};
use circle_unc::Complex64;

fn brute(v: Complex64, t: f64) -> Complex64 {
    (-50i32..=50)
        .map(|n| {
            let nf = n as f64;
            (Complex64::new(-PI * t * nf * nf, 0.0) + Complex64::new(0.0, 2.0 * PI * nf) * v).exp()
        })
        .sum()
}

/// Sum of term magnitudes: the natural error scale for a sum that may cancel.
fn magnitude(v: Complex64, t: f64) -> f64 {
    (-50i32..=50)
        .map(|n| {
            let nf = n as f64;
            (-PI * t * nf * nf - 2.0 * PI * nf * v.im).exp()
        })
        .sum()
}

fn grid() -> Vec<(Complex64, f64)> {
    let mut out = Vec::new();
    for &t in &[0.1, 0.3, 1.0 / PI, 0.7, 1.5, 5.0] {
        for &re in &[-1.0, -0.35, 0.0, 0.5, 0.9] {
            for &im in &[-2.0, -0.6, 0.0, 0.25, 2.0] {
                out.push((Complex64::new(re, im), t));
            }
        }
    }
    out
}

#[test]
fn matches_brute_force() {
    for (v, t) in grid() {
        let got = theta3(ThetaArg::new(v, t).unwrap());
        let want = brute(v, t);
        let err = (got - want).norm() / magnitude(v, t);
        assert!(err < 1e-14, "v={v} t={t}: rel err {err:e}");
    }
}

#[test]
fn quasi_periodic_shift() {
    // theta3(v + i t) = exp(pi t - 2 pi i v) theta3(v)
    for (v, t) in grid().into_iter().filter(|(v, _)| v.im.abs() <= 0.6) {
        let shifted = theta3(ThetaArg::new(v + Complex64::new(0.0, t), t).unwrap());
        let base = theta3(ThetaArg::new(v, t).unwrap());
        let want = (Complex64::new(PI * t, 0.0) - Complex64::new(0.0, 2.0 * PI) * v).exp() * base;
        // Points such as v = 1/2 + i t/2 are zeros of theta3, so compare on the term scale.
        let scale = magnitude(v + Complex64::new(0.0, t), t);
        let err = (shifted - want).norm() / scale;
        assert!(err < 1e-12, "v={v} t={t}: rel err {err:e}");
    }
}

#[test]
fn overlap_is_coefficient_sum() {
    let zs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.4, 0.0),
        Complex64::from_polar(2.0, 1.0),
        Complex64::from_polar(0.3, -2.5),
        Complex64::new(-1.0, 0.1),
    ];
    for &z1 in &zs {
        for &z2 in &zs {
            let w = z1.conj() * z2;
            let direct: Complex64 = (-40i32..=40).map(|m| (-(m * m) as f64).exp() * w.powi(-m)).sum();
            let got = cs_overlap(z1, z2).unwrap();
            assert!((got - direct).norm() < 1e-12 * direct.norm(), "{z1} {z2}");
        }
    }
}
