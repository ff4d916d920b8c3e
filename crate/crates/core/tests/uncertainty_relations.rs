//! Uncertainty relations on generated states.

use std::f64::consts::PI;

use circle_unc::states::{cat_state, coherent_state, squeezed_coherent_state, superpose, CircleState};
use circle_unc::uncertainty::{
    characteristic_ur_check, gram_matrix, heisenberg_ur, kr_relation_check, kr_uncertainties, schrodinger_ur,
    uncertainty_report, Observable, UncertaintyReport, DEFAULT_DELTA0_SQ,
};
use circle_unc::Complex64;
use proptest::prelude::*;

const ALL: [Observable; 4] = [Observable::J, Observable::Phi, Observable::X, Observable::Y];

fn polar() -> impl Strategy<Value = Complex64> {
    (0.2f64..5.0, -PI..PI).prop_map(|(r, p)| Complex64::from_polar(r, p))
}

fn weight() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn mixed_state() -> impl Strategy<Value = CircleState> {
    (polar(), polar(), polar(), 0.1f64..2.0, weight(), weight(), weight()).prop_filter_map(
        "degenerate superposition",
        |(z1, z2, z3, s, w1, w2, w3)| {
            let parts = [
                coherent_state(z1).ok()?,
                squeezed_coherent_state(z2, s).ok()?,
                cat_state(z3, Complex64::new(-1.0, 0.0)).ok()?,
            ];
            superpose(&parts, &[w1, w2, w3]).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_is_hermitian_and_psd(psi in mixed_state()) {
        let g = gram_matrix(&psi, &ALL).unwrap();
        prop_assert!(g.hermitian_defect() < 1e-12);
        prop_assert!(g.is_psd(), "min eigenvalue {}", g.min_eigenvalue());
        for line in characteristic_ur_check(&g).unwrap() {
            prop_assert!(line.satisfied, "{line:?}");
        }
    }

    #[test]
    fn schrodinger_implies_heisenberg(psi in mixed_state()) {
        let s = schrodinger_ur(&psi).unwrap();
        let h = heisenberg_ur(&psi).unwrap();
        prop_assert!(s.holds() && h.holds());
        // The Schrodinger bound is never weaker than the Heisenberg one.
        prop_assert!(s.rhs >= h.rhs * h.rhs - 1e-14);
    }

    #[test]
    fn kr_relation_holds(psi in mixed_state()) {
        let kr = kr_relation_check(&psi).unwrap();
        prop_assert!(kr.satisfied, "sum {}", kr.sum);
    }

    #[test]
    fn report_survives_json(psi in mixed_state()) {
        let r = uncertainty_report(&psi, DEFAULT_DELTA0_SQ).unwrap();
        let back: UncertaintyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn coherent_kr_sum_is_phase_free(r in 0.2f64..5.0, p in -PI..PI) {
        let a = kr_uncertainties(&coherent_state(Complex64::from_polar(r, p)).unwrap()).unwrap();
        let b = kr_uncertainties(&coherent_state(Complex64::new(1.0, 0.0)).unwrap()).unwrap();
        prop_assert!((a.phi - b.phi).abs() < 1e-12 && (a.j - b.j).abs() < 1e-12);
        prop_assert!((a.sum() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn odd_cat_kr_phi_is_finite() {
    let psi = cat_state(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
    let r = uncertainty_report(&psi, DEFAULT_DELTA0_SQ).unwrap();
    assert!(r.kr_phi.is_finite() && (r.kr_phi - 0.328753).abs() < 1e-6, "{}", r.kr_phi);
    assert!(r.kr_satisfied);
}
