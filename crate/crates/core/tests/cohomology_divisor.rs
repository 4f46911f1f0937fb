//! Cohomology dimension tables, the long exact sequences, and the order of
//! the zeta function against `−χ'` on synthetic spectra.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selberg_core::cohomology::{
    check_les, check_patterson, dims_discrete, dims_finite, dims_hyperfunction, PattersonCheck,
    Regime, Side,
};
use selberg_core::divisor::{full_divisor, trivial_order, LaplaceSpectrum, POINT_TOL};
use selberg_core::Error;

const GENERA: [u32; 4] = [2, 3, 5, 10];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn half(n: u32, positive: bool) -> Complex64 {
    let x = f64::from(2 * n + 1) / 2.0;
    c(if positive { x } else { -x }, 0.0)
}

fn constants() -> LaplaceSpectrum {
    LaplaceSpectrum::constants_only(1.0)
}

/// The five tables as columns `(F, V, D)` or `(D, V, F)` of `(h0, h1, h2)`.
fn expected_columns(g: u64, n: u64, positive: bool) -> [[u64; 3]; 3] {
    let k = (2 * g - 2) * (2 * n + 1);
    match (n, positive) {
        (0, true) => [[1, 2 * g, 1], [1, 1, 0], [2 * g, 2, 0]],
        (_, true) => [[0, k, 0], [0, 0, 0], [k, 0, 0]],
        (0, false) => [[2 * g, 2, 0], [2 * g, 2 * g + 1, 1], [1, 2 * g, 1]],
        (_, false) => [[k, 0, 0], [k, k, 0], [0, k, 0]],
    }
}

#[test]
fn tables_reproduce_every_entry() {
    for g in GENERA {
        for n in 0..=20u32 {
            for positive in [true, false] {
                let side = if positive {
                    Side::PosLambda
                } else {
                    Side::NegLambda
                };
                let v = dims_hyperfunction(g, half(n, positive), &constants()).unwrap();
                let f = dims_finite(g, n).unwrap();
                let d = dims_discrete(g, n, side).unwrap();
                let got = if positive {
                    [f.dims, v.dims, d.dims]
                } else {
                    [d.dims, v.dims, f.dims]
                };
                assert_eq!(
                    got,
                    expected_columns(u64::from(g), u64::from(n), positive),
                    "g {g} n {n} {positive}"
                );
                assert_eq!(v.chi(), 0);
            }
        }
    }
}

#[test]
fn table_lines_are_printable() {
    let t = dims_hyperfunction(2, c(-0.5, 0.0), &constants()).unwrap();
    assert_eq!(
        t.to_string(),
        "g 2 lambda -1/2 module V h0 4 h1 5 h2 1 chi 0 chiprime -3"
    );
    let f = dims_finite(3, 2).unwrap();
    assert_eq!(
        f.to_string(),
        "g 3 lambda pm5/2 module F h0 0 h1 20 h2 0 chi -20 chiprime -20"
    );
}

#[test]
fn les_holds_in_all_special_regimes() {
    for g in 2..=10 {
        for n in 0..=20 {
            for positive in [true, false] {
                assert!(
                    check_les(g, Regime::special(n, positive)).unwrap(),
                    "g {g} n {n}"
                );
            }
        }
    }
    assert!(check_les(2, Regime::Generic).is_err());
}

fn synthetic_spectra() -> Vec<LaplaceSpectrum> {
    vec![
        LaplaceSpectrum::constants_only(2.0),
        LaplaceSpectrum::new(
            vec![(0.0, 1), (0.1, 2), (0.2, 1), (0.25, 1), (3.5, 3)],
            10.0,
        )
        .unwrap(),
        LaplaceSpectrum::new(
            vec![
                (0.0, 1),
                (0.05, 1),
                (0.25, 2),
                (1.0, 4),
                (5.0, 1),
                (17.0, 2),
            ],
            20.0,
        )
        .unwrap(),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, kind: usize, bound: f64, imaginary_room: f64) -> Complex64 {
    match kind % 4 {
        0 => c(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound)),
        1 => c(rng.gen_range(-bound..bound), 0.0),
        2 => c(0.0, rng.gen_range(-imaginary_room..imaginary_room)),
        _ => half(rng.gen_range(1..=20), true),
    }
}

#[test]
fn patterson_identity_on_synthetic_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for g in GENERA {
        for spec in synthetic_spectra() {
            let bound = 20.5;
            let divisor = full_divisor(g, &spec, bound).unwrap();
            for &(z, order) in divisor.points() {
                if z.norm() <= POINT_TOL {
                    assert!(matches!(
                        check_patterson(g, z, &spec),
                        Err(Error::UnsupportedLambda)
                    ));
                    continue;
                }
                let r = check_patterson(g, z, &spec).unwrap();
                assert_eq!(r, PattersonCheck::Ok { order }, "g {g} at {z}");
                checked += 1;
            }
            let room = (spec.complete_below() - 0.25).sqrt();
            let mut placed = 0;
            while placed < 100 {
                let z = random_point(&mut rng, placed, bound, room);
                if z.norm() <= 1e-6 || divisor.points().iter().any(|(p, _)| (p - z).norm() < 1e-6) {
                    continue;
                }
                let r = check_patterson(g, z, &spec).unwrap();
                assert_eq!(r, PattersonCheck::Ok { order: 0 }, "g {g} at {z}");
                placed += 1;
                checked += 1;
            }
        }
    }
    assert!(checked > 1200);
}

#[test]
fn trivial_zero_orders() {
    for g in GENERA {
        let spec = constants();
        let divisor = full_divisor(g, &spec, 20.5).unwrap();
        for n in 0..=20 {
            let extra = if n == 0 { 1 } else { 0 };
            assert_eq!(
                divisor.order_at(half(n, false)),
                trivial_order(g, n) + extra
            );
            assert_eq!(divisor.order_at(half(n, true)), extra);
        }
    }
}

#[test]
fn beyond_completeness_is_refused() {
    let spec = LaplaceSpectrum::constants_only(2.0);
    // μ(2i) = 1/4 + 4 is above the bound
    assert!(matches!(
        check_patterson(2, c(0.0, 2.0), &spec),
        Err(Error::UnknownSpectralRegion { .. })
    ));
    assert!(matches!(
        dims_hyperfunction(2, c(0.0, 0.0), &spec),
        Err(Error::UnsupportedLambda)
    ));
}

proptest! {
    #[test]
    fn generic_points_have_vanishing_euler_characteristic(
        g in 2u32..=10,
        re in -15.0..15.0f64,
        im in 0.01..15.0f64,
    ) {
        let t = dims_hyperfunction(g, c(re, im), &constants()).unwrap();
        prop_assert_eq!(t.chi(), 0);
        prop_assert_eq!(t.dims, [0, 0, 0]);
    }

    #[test]
    fn small_eigenvalue_zeros_are_simple_per_multiplicity(mu in 0.01..0.24f64, m in 1u32..5, g in 2u32..=5) {
        let spec = LaplaceSpectrum::new(vec![(0.0, 1), (mu, m)], 1.0).unwrap();
        let s = (0.25 - mu).sqrt();
        for z in [c(s, 0.0), c(-s, 0.0)] {
            let r = check_patterson(g, z, &spec).unwrap();
            prop_assert_eq!(r, PattersonCheck::Ok { order: i64::from(m) });
        }
    }
}
