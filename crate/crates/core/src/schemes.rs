//! Exponential-type integrators for `u_t + u_xxx = (u^2)_x / 2`.
//!
//! Both schemes are derived in the twisted variable `v(t) = exp(t d^3/dx^3) u(t)`,
//! where the stiff dispersive part disappears and the oscillatory Duhamel
//! integral is evaluated exactly through the factorization
//! `k1^3 + k2^3 - (k1 + k2)^3 = -3 (k1 + k2) k1 k2`. The steppers below act on
//! the untwisted variable; the twisted forms are kept for cross-checking.
//!
//! Fields with a nonzero mean `alpha` are evolved as `u = alpha + u_tilde`,
//! where `u_tilde` solves the KdV equation with the extra transport term
//! `alpha u_x` folded into the linear flow `exp(-t (d^3/dx^3 - alpha d/dx))`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, NyquistPolicy, SpectralField};

/// Tolerance on the zero mode of fields handed to the mean-free steppers,
/// relative to `max(1, max_k |xi_k|)`.
pub const ZERO_MEAN_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// First-order scheme.
    ExpInt1,
    /// Second-order scheme.
    ExpInt2,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::ExpInt1 => "expint1",
            Variant::ExpInt2 => "expint2",
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            Variant::ExpInt1 => 1,
            Variant::ExpInt2 => 2,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expint1" => Ok(Variant::ExpInt1),
            "expint2" => Ok(Variant::ExpInt2),
            _ => Err(Error::InvalidArgument(format!(
                "unknown scheme `{s}` (expected expint1 or expint2)"
            ))),
        }
    }
}

/// What to do with a nonzero mean in the initial data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AlphaPolicy {
    /// Reject data whose zero mode is not zero.
    RequireZeroMean,
    /// Split off the mean and evolve the remainder with shifted propagators.
    #[default]
    AutoShift,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    pub variant: Variant,
    pub tau: f64,
    pub alpha_policy: AlphaPolicy,
    pub nyquist_policy: NyquistPolicy,
    pub dealias: bool,
}

impl SchemeConfig {
    pub fn new(variant: Variant, tau: f64) -> Result<Self> {
        let cfg = SchemeConfig {
            variant,
            tau,
            alpha_policy: AlphaPolicy::default(),
            nyquist_policy: NyquistPolicy::default(),
            dealias: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau.is_finite() && self.tau > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "time step must be positive and finite, got {}",
                self.tau
            )))
        }
    }
}

/// Numerical solution `u^n` at time `t_n` after `step_index` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct StepperState {
    pub u: SpectralField,
    pub t: f64,
    /// Mean carried outside `u`; the evolved field itself is mean-free.
    pub alpha: f64,
    pub step_index: usize,
}

impl StepperState {
    pub fn new(u: SpectralField) -> Self {
        StepperState {
            u,
            t: 0.0,
            alpha: 0.0,
            step_index: 0,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// The full solution `alpha + u`.
    pub fn solution(&self) -> SpectralField {
        self.u.clone().add_mean(self.alpha)
    }
}

fn check_zero_mean(u: &SpectralField) -> Result<()> {
    let mean = u.mean().norm();
    if mean <= ZERO_MEAN_TOL * u.max_abs().max(1.0) {
        Ok(())
    } else {
        Err(Error::MeanViolation { mean })
    }
}

fn without_mean(mut f: SpectralField) -> SpectralField {
    f.set_coeff(0, ZERO);
    f
}

fn product(a: &SpectralField, b: &SpectralField) -> SpectralField {
    a.pointwise_product(b)
        .expect("operands of a stepper share one grid")
}

/// One-step map of either scheme with its symbols precomputed for a fixed
/// step size and mean shift.
#[derive(Clone, Debug)]
pub struct Stepper {
    grid: Grid,
    variant: Variant,
    tau: f64,
    alpha: f64,
    flow: Vec<Complex64>,
    inv_deriv: Vec<Complex64>,
    inv_deriv2: Vec<Complex64>,
    deriv: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: Grid, variant: Variant, tau: f64, alpha: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time step must be finite and non-negative, got {tau}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("mean shift {alpha} is not finite")));
        }
        let inv_deriv = grid.inverse_derivative_symbols();
        Ok(Stepper {
            grid,
            variant,
            tau,
            alpha,
            flow: grid.flow_symbols(tau, alpha),
            inv_deriv2: inv_deriv.iter().map(|s| s * s).collect(),
            inv_deriv,
            deriv: grid.derivative_symbols(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Advance the mean-free field `u` by one step.
    pub fn step(&self, u: &SpectralField) -> Result<SpectralField> {
        self.grid.ensure_same(u.grid())?;
        check_zero_mean(u)?;
        Ok(match (self.variant, self.packed()) {
            (Variant::ExpInt1, false) => self.first_order(u),
            (Variant::ExpInt2, false) => self.second_order(u),
            (Variant::ExpInt1, true) => self.first_order_packed(u),
            (Variant::ExpInt2, true) => self.second_order_packed(u),
        })
    }

    /// Whether all intermediate fields are real, so that products can be
    /// formed two at a time in one complex FFT. The literal Nyquist symbols
    /// make fields non-real, and padded products take their own route.
    fn packed(&self) -> bool {
        self.grid.nyquist() == NyquistPolicy::ZeroNyquist && !self.grid.dealias()
    }

    /// `P u + ((P w)^2 - P (w^2)) / 6` with `P` the linear flow over one
    /// step and `w` the antiderivative of `u`.
    fn first_order(&self, u: &SpectralField) -> SpectralField {
        let w = u.apply_symbols(&self.inv_deriv);
        let pw = w.apply_symbols(&self.flow);
        u.apply_symbols(&self.flow)
            + &self.quadratic_increment(&w, &pw)
    }

    fn quadratic_increment(&self, w: &SpectralField, pw: &SpectralField) -> SpectralField {
        let raw = pw.pointwise_square() - &w.pointwise_square().apply_symbols(&self.flow);
        // The k1 + k2 = 0 interactions cancel exactly; drop the round-off.
        without_mean(raw.scale(1.0 / 6.0))
    }

    fn second_order(&self, u: &SpectralField) -> SpectralField {
        let nl = u.pointwise_square().apply_symbols(&self.deriv).scale(0.5);
        let w = u.apply_symbols(&self.inv_deriv);
        let pw = w.apply_symbols(&self.flow);
        let first = u.apply_symbols(&self.flow) + &self.quadratic_increment(&w, &pw);

        // boundary term of the integration by parts in s
        let p_inl = nl.apply_symbols(&self.inv_deriv).apply_symbols(&self.flow);
        let boundary = without_mean(product(&pw, &p_inl)).scale(self.tau / 3.0);

        // the two 1/(9 i k1^2 k2^2 (k1 + k2)) kernels
        let u2 = u.apply_symbols(&self.inv_deriv2);
        let nl2 = nl.apply_symbols(&self.inv_deriv2);
        let late = product(&u2.apply_symbols(&self.flow), &nl2.apply_symbols(&self.flow))
            .apply_symbols(&self.inv_deriv);
        let early = product(&u2, &nl2)
            .apply_symbols(&self.inv_deriv)
            .apply_symbols(&self.flow);

        first + &boundary + &(early - &late).scale(1.0 / 9.0)
    }

    fn first_order_packed(&self, u: &SpectralField) -> SpectralField {
        let w = u.apply_symbols(&self.inv_deriv);
        let pw = w.apply_symbols(&self.flow);
        let z: Vec<Complex64> = pw
            .paired_samples(&w)
            .into_iter()
            .map(|s| Complex64::new(s.re * s.re, s.im * s.im))
            .collect();
        let (pw_sq, w_sq) = SpectralField::from_paired_samples(self.grid, &z);
        let raw = pw_sq - &w_sq.apply_symbols(&self.flow);
        u.apply_symbols(&self.flow) + &without_mean(raw.scale(1.0 / 6.0))
    }

    /// Same map as `second_order` with 7 FFTs instead of 15.
    fn second_order_packed(&self, u: &SpectralField) -> SpectralField {
        let g = self.grid;
        let w = u.apply_symbols(&self.inv_deriv);
        let pw = w.apply_symbols(&self.flow);
        let u2 = u.apply_symbols(&self.inv_deriv2);

        let z_uw = u.paired_samples(&w);
        let z_pw_u2 = pw.paired_samples(&u2);
        let sq: Vec<Complex64> = z_uw
            .iter()
            .map(|s| Complex64::new(s.re * s.re, s.im * s.im))
            .collect();
        let (u_sq, w_sq) = SpectralField::from_paired_samples(g, &sq);

        let nl = u_sq.apply_symbols(&self.deriv).scale(0.5);
        let p_inl = nl.apply_symbols(&self.inv_deriv).apply_symbols(&self.flow);
        let nl2 = nl.apply_symbols(&self.inv_deriv2);
        let p_nl2 = nl2.apply_symbols(&self.flow);
        let pu2 = u2.apply_symbols(&self.flow);
        let z_pinl_nl2 = p_inl.paired_samples(&nl2);
        let z_late = pu2.paired_samples(&p_nl2);

        let a: Vec<Complex64> = z_pw_u2
            .iter()
            .zip(&z_pinl_nl2)
            .map(|(x, y)| Complex64::new(x.re * x.re, x.re * y.re))
            .collect();
        let b: Vec<Complex64> = z_pw_u2
            .iter()
            .zip(&z_pinl_nl2)
            .zip(&z_late)
            .map(|((x, y), l)| Complex64::new(x.im * y.im, l.re * l.im))
            .collect();
        let (pw_sq, pw_pinl) = SpectralField::from_paired_samples(g, &a);
        let (early, late) = SpectralField::from_paired_samples(g, &b);

        let first = u.apply_symbols(&self.flow)
            + &without_mean((pw_sq - &w_sq.apply_symbols(&self.flow)).scale(1.0 / 6.0));
        let boundary = without_mean(pw_pinl).scale(self.tau / 3.0);
        let late = late.apply_symbols(&self.inv_deriv);
        let early = early.apply_symbols(&self.inv_deriv).apply_symbols(&self.flow);
        first + &boundary + &(early - &late).scale(1.0 / 9.0)
    }
}

/// One step of the first-order scheme on a mean-free field.
pub fn step_expint1(u: &SpectralField, tau: f64) -> Result<SpectralField> {
    Stepper::new(*u.grid(), Variant::ExpInt1, tau, 0.0)?.step(u)
}

/// One step of the second-order scheme on a mean-free field.
pub fn step_expint2(u: &SpectralField, tau: f64) -> Result<SpectralField> {
    Stepper::new(*u.grid(), Variant::ExpInt2, tau, 0.0)?.step(u)
}

/// Second-order step for the shifted variable `u_tilde = u - alpha`.
pub fn step_expint2_shifted(u: &SpectralField, alpha: f64, tau: f64) -> Result<SpectralField> {
    Stepper::new(*u.grid(), Variant::ExpInt2, tau, alpha)?.step(u)
}

/// `(1/2) d/dx (u^2)`, the untwisted time derivative of the twisted variable.
pub fn compute_nonlinearity(u: &SpectralField) -> Result<SpectralField> {
    check_zero_mean(u)?;
    Ok(u.pointwise_square().apply_derivative().scale(0.5))
}

/// Linear flow `exp(-s (d^3/dx^3 - alpha d/dx))`.
fn flow(f: &SpectralField, s: f64, alpha: f64) -> SpectralField {
    f.apply_symbols(&f.grid().flow_symbols(s, alpha))
}

/// `exp(t L) (exp(-t L) a)^2` with `exp(-t L)` the linear flow over time `t`.
fn twisted_square(a: &SpectralField, t: f64, alpha: f64) -> SpectralField {
    flow(&flow(a, t, alpha).pointwise_square(), -t, alpha)
}

fn twisted_product(a: &SpectralField, b: &SpectralField, t: f64, alpha: f64) -> SpectralField {
    flow(&product(&flow(a, t, alpha), &flow(b, t, alpha)), -t, alpha)
}

fn twisted_first_order(v: &SpectralField, t_n: f64, tau: f64, alpha: f64) -> SpectralField {
    let w = v.apply_inverse_derivative();
    let late = twisted_square(&w, t_n + tau, alpha);
    let early = twisted_square(&w, t_n, alpha);
    v.clone() + &without_mean((late - &early).scale(1.0 / 6.0))
}

/// First-order step in the twisted variable `v = exp(t_n d^3/dx^3) u` at time `t_n`.
pub fn step_expint1_twisted(v: &SpectralField, t_n: f64, tau: f64) -> Result<SpectralField> {
    check_zero_mean(v)?;
    Ok(twisted_first_order(v, t_n, tau, 0.0))
}

/// First-order step for the shifted variable `u_tilde = u - alpha`, carried
/// out by twisting at `t_n`, updating, and untwisting at `t_n + tau`.
pub fn step_expint1_shifted(u: &SpectralField, alpha: f64, t_n: f64, tau: f64) -> Result<SpectralField> {
    check_zero_mean(u)?;
    let v = flow(u, -t_n, alpha);
    let next = twisted_first_order(&v, t_n, tau, alpha);
    Ok(flow(&next, t_n + tau, alpha))
}

/// Second-order step in the twisted variable at time `t_n`.
pub fn step_expint2_twisted(v: &SpectralField, t_n: f64, tau: f64) -> Result<SpectralField> {
    check_zero_mean(v)?;
    let t1 = t_n + tau;
    let dv = flow(&flow(v, t_n, 0.0).pointwise_square().apply_derivative(), -t_n, 0.0).scale(0.5);

    let first = twisted_first_order(v, t_n, tau, 0.0);
    let w = v.apply_inverse_derivative();
    let dw = dv.apply_inverse_derivative();
    let boundary = without_mean(twisted_product(&w, &dw, t1, 0.0)).scale(tau / 3.0);

    let w2 = w.apply_inverse_derivative();
    let dw2 = dw.apply_inverse_derivative();
    let late = twisted_product(&w2, &dw2, t1, 0.0).apply_inverse_derivative();
    let early = twisted_product(&w2, &dw2, t_n, 0.0).apply_inverse_derivative();

    Ok(first + &boundary + &(early - &late).scale(1.0 / 9.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: SpectralField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryMeta {
    pub variant: Variant,
    pub tau: f64,
    pub alpha: f64,
    pub steps: usize,
    /// Steps shorter than `tau`, taken to land exactly on a snapshot or final time.
    pub partial_steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a trajectory has at least one snapshot")
    }
}

/// Relative size below which a shortened step counts as a full one.
const PARTIAL_STEP_TOL: f64 = 1e-6;

/// Evolve `state0` to `t_final`, recording the full solution (mean included)
/// at each of `snapshot_times` and at `t_final`.
pub fn run_evolution(
    state0: &StepperState,
    cfg: &SchemeConfig,
    t_final: f64,
    snapshot_times: &[f64],
) -> Result<Trajectory> {
    cfg.validate()?;
    let t0 = state0.t;
    if !(t_final.is_finite() && t_final >= t0) {
        return Err(Error::InvalidArgument(format!(
            "final time {t_final} precedes the initial time {t0}"
        )));
    }
    if snapshot_times.windows(2).any(|w| w[0] > w[1])
        || snapshot_times.iter().any(|&t| !(t0..=t_final).contains(&t))
    {
        return Err(Error::InvalidArgument(format!(
            "snapshot times must be sorted and lie in [{t0}, {t_final}]"
        )));
    }

    let grid = state0
        .u
        .grid()
        .with_nyquist(cfg.nyquist_policy)
        .with_dealias(cfg.dealias);
    let u0 = state0.u.clone().with_grid(grid)?;
    let (alpha, mut u) = match cfg.alpha_policy {
        AlphaPolicy::AutoShift => {
            let (mean, rest) = u0.split_mean()?;
            (state0.alpha + mean, rest)
        }
        AlphaPolicy::RequireZeroMean => {
            check_zero_mean(&u0)?;
            (state0.alpha, u0)
        }
    };

    let stepper = Stepper::new(grid, cfg.variant, cfg.tau, alpha)?;
    let mut t = t0;
    let mut steps = state0.step_index;
    let mut partial_steps = 0;
    let mut snapshots = Vec::with_capacity(snapshot_times.len() + 1);

    let mut landmarks: Vec<f64> = snapshot_times.to_vec();
    if landmarks.last() != Some(&t_final) {
        landmarks.push(t_final);
    }
    for &target in &landmarks {
        let span = target - t;
        let n = if span > 0.0 {
            ((span / cfg.tau) - 1e-9).ceil().max(1.0) as usize
        } else {
            0
        };
        for i in 0..n {
            let next = if i + 1 == n {
                let h = target - t;
                if (h - cfg.tau).abs() > PARTIAL_STEP_TOL * cfg.tau {
                    partial_steps += 1;
                    Stepper::new(grid, cfg.variant, h, alpha)?.step(&u)?
                } else {
                    stepper.step(&u)?
                }
            } else {
                stepper.step(&u)?
            };
            steps += 1;
            t = if i + 1 == n { target } else { t + cfg.tau };
            if !next.is_finite() {
                return Err(Error::Divergence { step: steps, time: t });
            }
            u = next;
        }
        snapshots.push(Snapshot {
            t,
            field: u.clone().add_mean(alpha),
        });
    }

    Ok(Trajectory {
        snapshots,
        meta: TrajectoryMeta {
            variant: cfg.variant,
            tau: cfg.tau,
            alpha,
            steps,
            partial_steps,
        },
    })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::REAL_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Mean-free real field supported on `1 <= |k| <= kmax`.
    fn random_band(grid: Grid, kmax: i64, amp: f64, rng: &mut ChaCha8Rng) -> SpectralField {
        let mut f = SpectralField::zeros(grid);
        for k in 1..=kmax {
            let z = c(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
            f.set_coeff(k, z);
            f.set_coeff(-k, z.conj());
        }
        f
    }

    #[test]
    fn packed_products_match_plain_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Grid::new(128, 0.5).unwrap();
        for variant in [Variant::ExpInt1, Variant::ExpInt2] {
            for _ in 0..5 {
                let u = random_band(g, 63, 1.0, &mut rng);
                let st = Stepper::new(g, variant, 0.01, 0.3).unwrap();
                let (fast, plain) = match variant {
                    Variant::ExpInt1 => (st.first_order_packed(&u), st.first_order(&u)),
                    Variant::ExpInt2 => (st.second_order_packed(&u), st.second_order(&u)),
                };
                assert!(max_diff(&fast, &plain) < 1e-13 * plain.max_abs().max(1.0));
                assert_eq!(fast.hermitian_defect().1, 0.0);
            }
        }
    }

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn key_relation_small_range() {
        for k1 in -50i64..=50 {
            for k2 in -50i64..=50 {
                assert_eq!(
                    k1.pow(3) + k2.pow(3) - (k1 + k2).pow(3),
                    -3 * (k1 + k2) * k1 * k2
                );
            }
        }
    }

    #[test]
    fn zero_is_fixed_and_zero_step_is_identity() {
        let g = Grid::unit(32).unwrap();
        let zero = SpectralField::zeros(g);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_band(g, 8, 0.1, &mut rng);
        for step in [step_expint1, step_expint2] {
            assert_eq!(step(&zero, 0.01).unwrap().max_abs(), 0.0);
            assert!(max_diff(&step(&u, 0.0).unwrap(), &u) < 1e-16);
        }
        assert_eq!(step_expint1_twisted(&zero, 0.37, 0.01).unwrap().max_abs(), 0.0);
        assert!(max_diff(&step_expint1_twisted(&u, 0.37, 0.0).unwrap(), &u) < 1e-16);
        assert!(max_diff(&step_expint2_twisted(&u, 0.37, 0.0).unwrap(), &u) < 1e-16);
        assert_eq!(step_expint1_shifted(&zero, 1.3, 0.2, 0.01).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let g = Grid::unit(16).unwrap();
        let u = SpectralField::from_modes(g, &[(0, c(0.5, 0.0))]).unwrap();
        assert!(matches!(step_expint1(&u, 0.1), Err(Error::MeanViolation { .. })));
        assert!(matches!(step_expint2(&u, 0.1), Err(Error::MeanViolation { .. })));
        assert!(step_expint1_shifted(&u, 0.5, 0.0, 0.1).is_err());
    }

    #[test]
    fn nonlinearity_examples() {
        let g = Grid::unit(16).unwrap();
        assert_eq!(compute_nonlinearity(&SpectralField::zeros(g)).unwrap().max_abs(), 0.0);
        let e1 = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        let w = compute_nonlinearity(&e1).unwrap();
        let expect = SpectralField::from_modes(g, &[(2, c(0.0, 1.0))]).unwrap();
        assert!(max_diff(&w, &expect) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = random_band(g, 7, 0.5, &mut rng);
        let w = compute_nonlinearity(&u).unwrap();
        assert!(w.is_real(REAL_TOL));
        assert_eq!(w.mean(), c(0.0, 0.0));
    }

    #[test]
    fn steppers_keep_real_fields_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = Grid::new(64, 0.7).unwrap();
        let u = random_band(g, 20, 0.3, &mut rng);
        for step in [step_expint1, step_expint2] {
            let next = step(&u, 0.02).unwrap();
            assert!(next.is_real(REAL_TOL));
            assert!(next.mean().norm() <= 1e-13);
        }
    }

    #[test]
    fn shifted_step_with_zero_alpha_matches_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let g = Grid::unit(32).unwrap();
        let u = random_band(g, 8, 0.1, &mut rng);
        let plain = step_expint1(&u, 0.01).unwrap();
        let shifted = step_expint1_shifted(&u, 0.0, 0.37, 0.01).unwrap();
        assert!(max_diff(&plain, &shifted) < 1e-13);
        let plain2 = step_expint2(&u, 0.01).unwrap();
        let shifted2 = step_expint2_shifted(&u, 0.0, 0.01).unwrap();
        assert_eq!(plain2, shifted2);
    }

    #[test]
    fn shifted_step_is_translated_plain_step() {
        // exp(alpha tau d/dx) commutes with squaring, so the shifted step is the
        // plain step translated by alpha * tau, as long as no product aliases
        // (translation by a non-grid shift does not commute with wrapping).
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let g = Grid::unit(32).unwrap();
        let u = random_band(g, 5, 0.1, &mut rng);
        let (alpha, tau) = (1.0, 0.01);
        let translate = |f: &SpectralField| {
            let phases: Vec<Complex64> = g
                .modes()
                .map(|k| if g.is_nyquist(k) { c(1.0, 0.0) } else { Complex64::from_polar(1.0, alpha * tau * k as f64) })
                .collect();
            f.apply_symbols(&phases)
        };
        let s1 = step_expint1_shifted(&u, alpha, 0.0, tau).unwrap();
        let d1 = max_diff(&s1, &translate(&step_expint1(&u, tau).unwrap()));
        assert!(d1 < 1e-15, "{d1}");
        let s2 = step_expint2_shifted(&u, alpha, tau).unwrap();
        let d2 = max_diff(&s2, &translate(&step_expint2(&u, tau).unwrap()));
        assert!(d2 < 1e-15, "{d2}");
    }

    #[test]
    fn run_evolution_trivial_span() {
        let g = Grid::unit(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let u = random_band(g, 4, 0.1, &mut rng);
        let cfg = SchemeConfig::new(Variant::ExpInt1, 0.01).unwrap();
        let traj = run_evolution(&StepperState::new(u.clone()), &cfg, 0.0, &[]).unwrap();
        assert_eq!(traj.snapshots.len(), 1);
        assert_eq!(traj.snapshots[0].field, u);
        assert_eq!(traj.meta.steps, 0);
    }

    #[test]
    fn run_evolution_partial_final_step() {
        let g = Grid::unit(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let u = random_band(g, 4, 0.1, &mut rng);
        let cfg = SchemeConfig::new(Variant::ExpInt2, 0.25).unwrap();
        let traj = run_evolution(&StepperState::new(u.clone()), &cfg, 1.1, &[0.5]).unwrap();
        assert_eq!(traj.meta.steps, 2 + 3);
        assert_eq!(traj.meta.partial_steps, 1);
        assert_eq!(traj.snapshots.len(), 2);
        assert_eq!(traj.snapshots[0].t, 0.5);
        assert_eq!(traj.last().t, 1.1);

        let mut manual = u;
        for h in [0.25, 0.25, 0.25, 0.25, 0.1] {
            manual = step_expint2(&manual, h).unwrap();
        }
        assert!(max_diff(&manual, &traj.last().field) < 1e-14);
    }

    #[test]
    fn run_evolution_validates_inputs() {
        let g = Grid::unit(16).unwrap();
        let u = SpectralField::zeros(g);
        let cfg = SchemeConfig::new(Variant::ExpInt1, 0.1).unwrap();
        let s = StepperState::new(u.clone());
        assert!(run_evolution(&s, &cfg, -1.0, &[]).is_err());
        assert!(run_evolution(&s, &cfg, 1.0, &[0.5, 0.2]).is_err());
        assert!(run_evolution(&s, &cfg, 1.0, &[2.0]).is_err());
        assert!(SchemeConfig::new(Variant::ExpInt1, 0.0).is_err());

        let mut strict = cfg;
        strict.alpha_policy = AlphaPolicy::RequireZeroMean;
        let shifted = u.add_mean(1.0);
        assert!(matches!(
            run_evolution(&StepperState::new(shifted), &strict, 1.0, &[]),
            Err(Error::MeanViolation { .. })
        ));
    }

    #[test]
    fn run_evolution_reports_divergence() {
        let g = Grid::unit(16).unwrap();
        let mut u = SpectralField::zeros(g);
        u.set_coeff(1, c(f64::NAN, 0.0));
        u.set_coeff(-1, c(f64::NAN, 0.0));
        let cfg = SchemeConfig::new(Variant::ExpInt1, 0.1).unwrap();
        let err = run_evolution(&StepperState::new(u), &cfg, 1.0, &[]).unwrap_err();
        assert!(matches!(err, Error::Divergence { step: 1, .. }), "{err}");
    }

    #[test]
    fn constant_state_is_fixed_under_auto_shift() {
        let g = Grid::unit(16).unwrap();
        let u = SpectralField::zeros(g).add_mean(-0.5);
        for variant in [Variant::ExpInt1, Variant::ExpInt2] {
            let cfg = SchemeConfig::new(variant, 0.1).unwrap();
            let traj = run_evolution(&StepperState::new(u.clone()), &cfg, 1.0, &[]).unwrap();
            assert_eq!(traj.last().field, u);
            assert_eq!(traj.meta.alpha, -0.5);
        }
    }
}
