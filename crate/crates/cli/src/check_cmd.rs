//! Verification suites with a line-per-item report.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selberg_core::cohomology::{
    check_les, check_patterson, dims_hyperfunction, PattersonCheck, Regime,
};
use selberg_core::contour::residue;
use selberg_core::divisor::{full_divisor, trivial_order, LaplaceSpectrum, POINT_TOL};
use selberg_core::spectral_terms::{epsilon_of, identity_term, HalfInt, IdentityTermModel};
use selberg_core::zeta::{
    local_factor_general_unchecked, local_factor_sl2_unchecked, GeneralLocalFactorInput, SigmaParam,
};
use selberg_core::BigComplex;

use crate::args::Suite;
use crate::config::{write, RunConfig};
use crate::error::{CliError, CliResult};

/// Integrality tolerance for contour residues.
const RESIDUE_TOL: f64 = 1e-8;
/// Relative agreement required between the two local-factor formulas.
const LOCAL_FACTOR_TOL: f64 = 1e-25;
const RANDOM_POINTS: usize = 100;
const LOCAL_FACTOR_SAMPLES: usize = 200;

struct Report {
    suite: &'static str,
    total: usize,
    failed: usize,
}

impl Report {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            total: 0,
            failed: 0,
        }
    }

    fn record(&mut self, item: &str, ok: bool, detail: &str) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} {item} {} {detail}",
            self.suite,
            if ok { "ok" } else { "FAIL" }
        );
    }

    fn finish(self) -> CliResult<()> {
        println!(
            "summary {} passed {}/{}",
            self.suite,
            self.total - self.failed,
            self.total
        );
        if self.failed == 0 {
            Ok(())
        } else {
            Err(CliError::ChecksFailed {
                suite: self.suite,
                failed: self.failed,
                total: self.total,
            })
        }
    }
}

pub fn run(cfg: &RunConfig, suite: Suite, n_max: u32, seed: u64) -> CliResult<()> {
    match suite {
        Suite::Patterson => {
            let spec = cfg.load_laplace_spectrum()?.ok_or(CliError::MissingInput {
                suite: "patterson",
                what: "--spectrum <file>",
            })?;
            patterson(cfg, &spec, n_max, seed)
        }
        Suite::Les => les(cfg.genus, n_max),
        Suite::Residues => residues(cfg.genus, n_max),
        Suite::LocalFactor => local_factor(cfg, seed),
    }
}

fn fmt_point(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn patterson(cfg: &RunConfig, spec: &LaplaceSpectrum, n_max: u32, seed: u64) -> CliResult<()> {
    let g = cfg.genus;
    let bound = f64::from(n_max) + 0.5;
    let divisor = full_divisor(g, spec, bound)?;
    cfg.ensure_output_dir()?;
    write(
        &cfg.output_dir.join(format!("divisor-g{g}.txt")),
        &divisor.to_file_string(),
    )?;

    let mut report = Report::new("patterson");
    let mut check = |label: &str, z: Complex64| -> CliResult<()> {
        let item = format!("{label} {}", fmt_point(z));
        match check_patterson(g, z, spec)? {
            PattersonCheck::Ok { order } => report.record(&item, true, &format!("ord {order}")),
            PattersonCheck::Mismatch {
                divisor_order,
                minus_chi_prime,
            } => report.record(
                &item,
                false,
                &format!("ord {divisor_order} minus_chi_prime {minus_chi_prime}"),
            ),
        }
        Ok(())
    };

    for &(z, _) in divisor.points() {
        if z.norm() <= POINT_TOL {
            println!(
                "patterson divisor {} skipped lambda=0 is excluded",
                fmt_point(z)
            );
            continue;
        }
        check("divisor", z)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let imaginary_room = (spec.complete_below() - 0.25).max(0.0).sqrt();
    let mut placed = 0;
    while placed < RANDOM_POINTS {
        let z = match placed % 4 {
            0 => Complex64::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound)),
            1 => Complex64::new(rng.gen_range(-bound..bound), 0.0),
            2 if imaginary_room > 0.0 => {
                let t = rng.gen_range(0.0..imaginary_room);
                Complex64::new(0.0, if rng.gen_bool(0.5) { t } else { -t })
            }
            2 => Complex64::new(0.0, rng.gen_range(-bound..bound)),
            _ => Complex64::new(
                f64::from(2 * rng.gen_range(1..=n_max.max(1)) + 1) / 2.0,
                0.0,
            ),
        };
        let clash = z.norm() <= 1e3 * POINT_TOL
            || divisor
                .points()
                .iter()
                .any(|(p, _)| (p - z).norm() <= 1e3 * POINT_TOL);
        // imaginary points beyond the completeness bound are refused by the
        // cohomology side, so they are drawn only inside it
        if clash || (z.re == 0.0 && z.im.abs() >= imaginary_room && imaginary_room > 0.0) {
            continue;
        }
        check("random", z)?;
        placed += 1;
    }
    report.finish()
}

fn les(g: u32, n_max: u32) -> CliResult<()> {
    let mut report = Report::new("les");
    for n in 0..=n_max {
        for positive in [true, false] {
            let regime = Regime::special(n, positive);
            let ok = check_les(g, regime)?;
            report.record(&format!("g={g} {regime:?}"), ok, "");
            let sign = if positive { 1.0 } else { -1.0 };
            let lambda = Complex64::new(sign * (f64::from(n) + 0.5), 0.0);
            let table = dims_hyperfunction(g, lambda, &LaplaceSpectrum::constants_only(1.0))?;
            report.record(
                &format!("g={g} chi {}", fmt_point(lambda)),
                table.chi() == 0,
                &format!("chi {}", table.chi()),
            );
        }
    }
    report.finish()
}

fn residues(g: u32, n_max: u32) -> CliResult<()> {
    let mut report = Report::new("residues");
    let trivial = epsilon_of(SigmaParam::Trivial);
    report.record(
        "epsilon trivial",
        trivial.eps_alpha == HalfInt::Zero && trivial.eps_sigma == HalfInt::Half,
        &format!("{:?}", trivial),
    );
    let theta = epsilon_of(SigmaParam::Theta);
    report.record(
        "epsilon theta",
        theta.eps_alpha == HalfInt::Half && theta.eps_sigma == HalfInt::Zero,
        &format!("{:?}", theta),
    );

    let model = IdentityTermModel::new(g)?;
    for n in 0..=n_max {
        let x = f64::from(2 * n + 1) / 2.0;
        for (center, expected) in [(-x, trivial_order(g, n)), (x, 0)] {
            let r = residue(|l| identity_term(&model, l), Complex64::new(center, 0.0))?;
            let err = (r - expected as f64).norm();
            let integral = (r.re - r.re.round()).abs().max(r.im.abs()) < RESIDUE_TOL;
            report.record(
                &format!("g={g} lambda={center}"),
                err < RESIDUE_TOL && integral,
                &format!("residue {:.12} expected {expected} err {err:.2e}", r.re),
            );
        }
    }
    report.finish()
}

fn local_factor(cfg: &RunConfig, seed: u64) -> CliResult<()> {
    let mut report = Report::new("local-factor");
    let prec = cfg.precision;
    let rho = prec.float(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..LOCAL_FACTOR_SAMPLES {
        let ell: f64 = rng.gen_range(1e-3..10.0);
        let re: f64 = rng.gen_range(-2.0..4.0);
        let im: f64 = rng.gen_range(-5.0..5.0);
        let k_max: u32 = rng.gen_range(3..=50);
        let m_sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let sigma = if rng.gen_bool(0.5) {
            SigmaParam::Trivial
        } else {
            SigmaParam::Theta
        };
        let t = prec.float(ell).exp();
        let lambda = BigComplex::from_f64(prec, re, im);
        let special = local_factor_sl2_unchecked(&t, m_sign, sigma, &lambda, k_max);
        let input = GeneralLocalFactorInput::sl2(&t, m_sign, sigma);
        let general = local_factor_general_unchecked(&input, &lambda, &rho, k_max)?;
        let rel = general.value.rel_diff(&special.value);
        worst = worst.max(rel);
        if rel >= LOCAL_FACTOR_TOL {
            report.record(
                &format!("sample {i}"),
                false,
                &format!("t=e^{ell} lambda={re}{im:+}i K={k_max} rel {rel:.2e}"),
            );
        }
    }
    report.record(
        &format!("{LOCAL_FACTOR_SAMPLES} samples"),
        worst < LOCAL_FACTOR_TOL,
        &format!("max rel {worst:.2e}"),
    );
    report.finish()
}
