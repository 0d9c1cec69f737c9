//! Quick correctness suites behind the `selftest` command.

use rand::Rng;

use crate::experiments::{random_band_limited, seeded_rng};
use crate::oracle::{
    compare_fields, compare_fields_below_nyquist, oracle_first_order_step, oracle_quadrature_step,
    oracle_second_order_step,
};
use crate::schemes::{
    step_expint1, step_expint1_twisted, step_expint2, step_expint2_twisted, Stepper, Variant,
};
use crate::spectral::{Grid, SpectralField};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed defect.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl SuiteResult {
    fn new(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Self {
        SuiteResult {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
            detail,
        }
    }

    fn failed(name: &'static str, tolerance: f64, err: crate::Error) -> Self {
        SuiteResult {
            name,
            passed: false,
            worst: f64::INFINITY,
            tolerance,
            detail: err.to_string(),
        }
    }
}

fn guarded(name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<SuiteResult>) -> SuiteResult {
    f().unwrap_or_else(|e| SuiteResult::failed(name, tolerance, e))
}

/// Runs every suite with random data drawn from `seed`.
pub fn run_selftest(seed: u64) -> Vec<SuiteResult> {
    vec![
        key_identity(),
        oracle_equivalence(seed),
        zero_mode(seed.wrapping_add(1)),
        isometry(seed.wrapping_add(2)),
        twist_equivalence(seed.wrapping_add(3)),
    ]
}

fn key_identity() -> SuiteResult {
    let mut failures = 0u32;
    for k1 in -1000i64..=1000 {
        for k2 in -1000i64..=1000 {
            if k1.pow(3) + k2.pow(3) - (k1 + k2).pow(3) != -3 * (k1 + k2) * k1 * k2 {
                failures += 1;
            }
        }
    }
    SuiteResult::new("key-identity", failures as f64, 0.0, "|k1|, |k2| <= 1000, integer arithmetic".into())
}

fn oracle_equivalence(seed: u64) -> SuiteResult {
    const TOL: f64 = 1e-10;
    guarded("oracle-equivalence", TOL, || {
        let mut rng = seeded_rng(seed);
        let g = Grid::unit(32)?;
        let gd = g.with_dealias(true);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let v = random_band_limited(g, 8, 1.0, &mut rng);
            let vd = v.clone().with_grid(gd)?;
            for tau in [1e-2, 1e-3] {
                for t_n in [0.0, 0.37] {
                    let closed = oracle_first_order_step(&v, t_n, tau, 0.0)?;
                    let fft = step_expint1_twisted(&v, t_n, tau)?;
                    let quad = oracle_quadrature_step(&v, t_n, tau, 1e-12)?;
                    worst = worst
                        .max(compare_fields_below_nyquist(&fft, &closed)?.max_abs_coeff_diff)
                        .max(compare_fields(&quad, &closed)?.max_abs_coeff_diff);
                }
                let o2 = oracle_second_order_step(&vd, tau)?;
                worst = worst.max(compare_fields_below_nyquist(&step_expint2(&vd, tau)?, &o2)?.max_abs_coeff_diff);
            }
        }
        Ok(SuiteResult::new(
            "oracle-equivalence",
            worst,
            TOL,
            "K=32, |k| <= 8; order 2 on the 2/3-rule grid".into(),
        ))
    })
}

fn zero_mode(seed: u64) -> SuiteResult {
    const TOL: f64 = 1e-12;
    guarded("zero-mode", TOL, || {
        let mut rng = seeded_rng(seed);
        let g = Grid::unit(64)?;
        let mut worst = 0.0f64;
        for variant in [Variant::ExpInt1, Variant::ExpInt2] {
            let mut u = random_band_limited(g, 20, 0.2, &mut rng);
            let st = Stepper::new(g, variant, 1e-3, 0.0)?;
            for _ in 0..300 {
                u = st.step(&u)?;
                worst = worst.max(u.mean().norm());
            }
        }
        Ok(SuiteResult::new("zero-mode", worst, TOL, "300 steps of each scheme, K=64".into()))
    })
}

fn isometry(seed: u64) -> SuiteResult {
    const TOL: f64 = 1e-13;
    guarded("isometry", TOL, || {
        let mut rng = seeded_rng(seed);
        let g = Grid::new(128, 0.5)?;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let u = random_band_limited(g, 64, 1.0, &mut rng);
            let t: f64 = rng.gen_range(-10.0..10.0);
            let pu = u.propagate_airy(t);
            for r in [0.0, 1.0, 2.0] {
                let n = u.sobolev_norm(r);
                worst = worst.max((pu.sobolev_norm(r) - n).abs() / n);
            }
        }
        Ok(SuiteResult::new("isometry", worst, TOL, "relative H0/H1/H2 change under the Airy flow".into()))
    })
}

fn twist_equivalence(seed: u64) -> SuiteResult {
    const TOL: f64 = 1e-12;
    guarded("twist-equivalence", TOL, || {
        let mut rng = seeded_rng(seed);
        let g = Grid::unit(64)?;
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let u = random_band_limited(g, 16, 0.5, &mut rng);
            for t_n in [0.37, 1.9] {
                let v = u.propagate_airy(-t_n);
                let tau = 1e-2;
                let one = step_expint1_twisted(&v, t_n, tau)?.propagate_airy(t_n + tau);
                let two = step_expint2_twisted(&v, t_n, tau)?.propagate_airy(t_n + tau);
                worst = worst
                    .max(diff(&one, &step_expint1(&u, tau)?))
                    .max(diff(&two, &step_expint2(&u, tau)?));
            }
        }
        Ok(SuiteResult::new(
            "twist-equivalence",
            worst,
            TOL,
            "untwisted steps from t_n = 0.37, 1.9 vs the autonomous maps".into(),
        ))
    })
}

fn diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
