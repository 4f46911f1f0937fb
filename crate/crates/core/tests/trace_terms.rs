//! Pole structure of the identity term and of the model logarithmic
//! derivative, by contour integration.

use num_complex::Complex64;
use proptest::prelude::*;
use selberg_core::contour::{contour_integral, residue};
use selberg_core::divisor::{full_divisor, LaplaceSpectrum};
use selberg_core::spectral_terms::{
    epsilon_of, exp_two_pi_i_h_alpha, identity_term, model_log_derivative, trig_term, HalfInt,
    IdentityTermModel,
};
use selberg_core::zeta::SigmaParam;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn is_integer(z: Complex64, tol: f64) -> bool {
    (z.re - z.re.round()).abs() < tol && z.im.abs() < tol
}

#[test]
fn identity_term_residues_on_the_negative_lattice() {
    for g in [2u32, 3] {
        let model = IdentityTermModel::new(g).unwrap();
        for n in 0..=5u32 {
            let x = f64::from(2 * n + 1) / 2.0;
            let neg = residue(|l| identity_term(&model, l), c(-x, 0.0)).unwrap();
            let expected = f64::from((2 * g - 2) * (2 * n + 1));
            assert!((neg - expected).norm() < 1e-8, "g {g} n {n}: {neg}");
            assert!(is_integer(neg, 1e-8));
            let pos = residue(|l| identity_term(&model, l), c(x, 0.0)).unwrap();
            assert!(pos.norm() < 1e-8, "g {g} n {n}: {pos}");
        }
    }
}

#[test]
fn calibration_constants_do_not_move_residues() {
    let model = IdentityTermModel::new(2)
        .unwrap()
        .with_constants(3.7, -1.25);
    let r = residue(|l| identity_term(&model, l), c(-2.5, 0.0)).unwrap();
    assert!((r - 10.0).norm() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_term_is_analytic_off_the_lattice(re in -6.0..6.0f64, im in 0.3..6.0f64, g in 2u32..=4) {
        let model = IdentityTermModel::new(g).unwrap();
        // disks of radius 0.2 around points at distance >= 0.3 from the real axis
        let r = contour_integral(|l| identity_term(&model, l), c(re, im), 0.2, 256).unwrap();
        prop_assert!(r.norm() < 1e-8, "{}", r);
    }

    #[test]
    fn disks_between_lattice_points_are_pole_free(n in 0u32..6, g in 2u32..=4) {
        let model = IdentityTermModel::new(g).unwrap();
        let center = c(-f64::from(n) - 1.0, 0.0);
        let r = contour_integral(|l| identity_term(&model, l), center, 0.3, 256).unwrap();
        prop_assert!(r.norm() < 1e-8, "{}", r);
    }
}

#[test]
fn model_residues_are_the_divisor_orders() {
    let spec = LaplaceSpectrum::new(vec![(0.0, 1), (0.15, 2), (2.0, 3)], 5.0).unwrap();
    for g in [2u32, 3] {
        let model = IdentityTermModel::new(g).unwrap();
        let divisor = full_divisor(g, &spec, 5.6).unwrap();
        for &(z, order) in divisor.points() {
            // spectral points closer than 0.25 to a trivial zero get a smaller circle
            let r =
                contour_integral(|l| model_log_derivative(&model, &spec, l), z, 0.05, 512).unwrap();
            assert!(
                (r - order as f64).norm() < 1e-8,
                "g {g} at {z}: {r} vs {order}"
            );
        }
        // positive half-integers carry only the spectral contribution
        for n in 1..=5u32 {
            let z = c(f64::from(2 * n + 1) / 2.0, 0.0);
            let r = residue(|l| model_log_derivative(&model, &spec, l), z).unwrap();
            assert!(r.norm() < 1e-8, "{z}: {r}");
        }
    }
}

#[test]
fn epsilon_invariants() {
    let h = exp_two_pi_i_h_alpha();
    for z in h {
        assert!((z + 1.0).norm() < 1e-15, "exp(2πi H_α) = -I");
    }
    let trivial = epsilon_of(SigmaParam::Trivial);
    assert_eq!(
        (trivial.eps_alpha, trivial.eps_sigma),
        (HalfInt::Zero, HalfInt::Half)
    );
    let theta = epsilon_of(SigmaParam::Theta);
    assert_eq!(
        (theta.eps_alpha, theta.eps_sigma),
        (HalfInt::Half, HalfInt::Zero)
    );
}

#[test]
fn trig_term_lattices_follow_epsilon() {
    let tan_case = epsilon_of(SigmaParam::Trivial);
    let cot_case = epsilon_of(SigmaParam::Theta);
    for k in -3..=3 {
        let half = c(f64::from(k) + 0.5, 0.0);
        let whole = c(f64::from(k), 0.0);
        // π tan(πλ) has residue −1 at half-integers, −π cot(πλ) has residue −1 at integers
        let a = residue(|l| trig_term(&tan_case, l), half).unwrap();
        assert!((a + 1.0).norm() < 1e-10);
        let b = residue(|l| trig_term(&cot_case, l), whole).unwrap();
        assert!((b + 1.0).norm() < 1e-10);
        assert!(residue(|l| trig_term(&tan_case, l), whole).unwrap().norm() < 1e-10);
        assert!(residue(|l| trig_term(&cot_case, l), half).unwrap().norm() < 1e-10);
    }
}
