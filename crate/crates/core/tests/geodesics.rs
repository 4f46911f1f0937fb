//! Length spectrum of the Bolza group against a word-ball oracle and the
//! structural properties of the enumeration.

use rug::Float;
use selberg_core::fuchsian::{
    bolza_group, enumerate_ball, is_primitive, length_spectrum, systole, FuchsianGroup,
};
use selberg_core::hyperbolic::{classify, translation_length, Classification};
use selberg_core::Precision;

fn bolza() -> FuchsianGroup {
    bolza_group(Precision::default())
}

fn cutoff(x: f64) -> Float {
    Precision::default().float(x)
}

/// `2 arccosh(a + b√2)` at the given precision.
fn closed_form(prec: Precision, a: u32, b: u32) -> Float {
    let bits = prec.bits();
    let s = Float::with_val(bits, 2u32).sqrt();
    let x = Float::with_val(bits, s * b) + a;
    x.acosh() * 2u32
}

/// Distinct translation lengths in the word ball, computed at 60 digits.
fn ball_lengths(radius: usize, below: f64) -> Vec<Float> {
    let group = bolza_group(Precision::new(60));
    let ball = enumerate_ball(&group, radius).unwrap();
    let mut lengths: Vec<Float> = ball.elements[1..]
        .iter()
        .map(|e| translation_length(e).unwrap())
        .filter(|l| l.to_f64() <= below)
        .collect();
    lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tol = Float::with_val(200, 1e-40);
    lengths.dedup_by(|a, b| Float::with_val(200, &*a - &*b).abs() < tol);
    lengths
}

#[test]
fn systole_matches_closed_form_to_twenty_digits() {
    let sys = systole(&bolza()).unwrap();
    let exact = closed_form(Precision::new(60), 1, 1);
    let diff = Float::with_val(200, &sys - &exact).abs();
    assert!(diff < 1e-20, "systole {sys} vs {exact}");
}

#[test]
fn distinct_lengths_agree_with_ball_oracle() {
    // every class below 6 has a representative of word length <= 4
    let oracle = ball_lengths(4, 6.0);
    let spec = length_spectrum(&bolza(), &cutoff(6.0), None).unwrap();
    let mut engine: Vec<&Float> = spec.geodesics.iter().map(|g| &g.length).collect();
    engine.dedup_by(|a, b| Float::with_val(200, &**a - &**b).abs() < 1e-30);
    assert_eq!(
        engine.len(),
        oracle.len(),
        "engine {engine:?} oracle {oracle:?}"
    );
    for (e, o) in engine.iter().zip(&oracle) {
        let diff = Float::with_val(200, *e - o).abs();
        assert!(diff < 1e-30, "{e} vs {o}");
    }
    // the oracle lengths are the traces 2(1+√2), 2(3+2√2), 2(5+3√2)
    let p = Precision::new(60);
    for (o, (a, b)) in oracle.iter().zip([(1, 1), (3, 2), (5, 3)]) {
        let diff = Float::with_val(200, o - closed_form(p, a, b)).abs();
        assert!(diff < 1e-40, "{o}");
    }
}

#[test]
fn systole_has_twelve_geodesics_in_both_orientations() {
    let spec = length_spectrum(&bolza(), &cutoff(3.1), None).unwrap();
    assert_eq!(spec.class_count(), 24);
    let by_sign: Vec<(i8, u32)> = spec
        .geodesics
        .iter()
        .map(|g| (g.m_sign, g.multiplicity))
        .collect();
    assert_eq!(by_sign, [(-1, 8), (1, 16)]);
}

#[test]
fn frozen_class_counts() {
    // regression values from the tile walk at L = 6 and 8
    let spec6 = length_spectrum(&bolza(), &cutoff(6.0), None).unwrap();
    assert_eq!(spec6.class_count(), 96);
    let spec8 = length_spectrum(&bolza(), &cutoff(8.0), None).unwrap();
    assert_eq!(spec8.class_count(), 392);
    let stats = spec8.stats.as_ref().unwrap();
    assert_eq!(stats.sign_conflicts, 0);
    assert_eq!(stats.class_sign_conflicts, 0);
    assert_eq!(stats.missing_powers, 0);
    assert!(spec8.warning.is_none());
}

#[test]
fn stable_under_one_more_step() {
    let group = bolza();
    let spec = length_spectrum(&group, &cutoff(8.0), None).unwrap();
    let depth = spec.stats.as_ref().unwrap().depth;
    let capped = length_spectrum(&group, &cutoff(8.0), Some(depth)).unwrap();
    let deeper = length_spectrum(&group, &cutoff(8.0), Some(depth + 1)).unwrap();
    assert!(capped.same_classes(&spec));
    assert!(deeper.same_classes(&spec));
    assert_eq!(deeper.to_file_string(), spec.to_file_string());
}

#[test]
fn premature_depth_cap_is_reported() {
    let group = bolza();
    let spec = length_spectrum(&group, &cutoff(8.0), None).unwrap();
    let depth = spec.stats.as_ref().unwrap().depth;
    let err = length_spectrum(&group, &cutoff(8.0), Some(depth / 2)).unwrap_err();
    assert!(
        matches!(err, selberg_core::Error::IncompleteBall(_)),
        "{err}"
    );
}

#[test]
fn representatives_carry_their_class_data() {
    let group = bolza();
    let spec = length_spectrum(&group, &cutoff(7.0), None).unwrap();
    let tol = Precision::default().dedup_tol();
    for g in &spec.geodesics {
        let rep = group.evaluate(&g.representative_word);
        for conj in std::iter::once(None).chain(group.letters().into_iter().map(Some)) {
            let e = match conj {
                None => rep.clone(),
                Some(l) => rep.conjugate_by(&group.letter(l)),
            };
            match classify(&e).unwrap() {
                Classification::Hyperbolic(h) => {
                    assert_eq!(h.m_sign, g.m_sign, "word {:?}", g.representative_word);
                    assert!(Float::with_val(200, &h.length - &g.length).abs() < tol);
                }
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn powers_are_not_primitive() {
    let group = bolza();
    let spec = length_spectrum(&group, &cutoff(7.0), None).unwrap();
    for g in spec.geodesics.iter().take(2) {
        let rep = group.evaluate(&g.representative_word);
        assert!(is_primitive(&rep, &group, 3).unwrap());
        let square = rep.pow(2);
        assert!(
            !is_primitive(&square, &group, 3).unwrap(),
            "{:?}",
            g.representative_word
        );
        // twice the length is not listed as a primitive length
        let twice = Float::with_val(200, &g.length * 2u32);
        assert!(spec
            .geodesics
            .iter()
            .all(|h| Float::with_val(200, &h.length - &twice).abs() > 1e-20));
    }
}

#[test]
fn enumerated_elements_are_hyperbolic() {
    let ball = enumerate_ball(&bolza(), 4).unwrap();
    assert_eq!(ball.sphere_sizes()[..3], [1, 8, 56]);
    for e in &ball.elements[1..] {
        assert!(classify(e).unwrap().is_hyperbolic(), "{:?}", e.word());
    }
}

#[test]
fn spectrum_is_thread_count_independent() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                length_spectrum(&bolza(), &cutoff(7.0), None)
                    .unwrap()
                    .to_file_string()
            })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn below_systole_is_empty() {
    for l in [0.5, 1.0, 3.0] {
        let spec = length_spectrum(&bolza(), &cutoff(l), None).unwrap();
        assert!(spec.is_empty());
    }
}
