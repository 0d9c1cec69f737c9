//! Initial data, exact solitary waves, reference solutions and convergence
//! studies.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schemes::{run_evolution, AlphaPolicy, SchemeConfig, StepperState, Variant};
use crate::spectral::{forward_transform, Grid, RealField, SpectralField};

/// Environment variable capping the number of worker threads of a study.
pub const THREADS_ENV: &str = "KDVEXP_THREADS";

#[derive(Clone, Debug, PartialEq)]
pub enum IcKind {
    /// `2 sech^2(x/2) sin(x)`
    Sech2Sin,
    /// Solitary wave with speed `c` centred at `a`.
    Soliton { c: f64, a: f64 },
    /// Explicit `(mode, coefficient)` list; unlisted modes are zero.
    CustomSpectrum(Vec<(i64, Complex64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialCondition {
    kind: IcKind,
    grid: Grid,
}

impl InitialCondition {
    pub fn new(kind: IcKind, grid: Grid) -> Result<Self> {
        match &kind {
            IcKind::Sech2Sin => {}
            IcKind::Soliton { c, a } => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "soliton speed must be positive, got {c}"
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::InvalidArgument(format!("soliton shift {a} is not finite")));
                }
            }
            IcKind::CustomSpectrum(modes) => {
                let field = SpectralField::from_modes(grid, modes)?;
                field.check_real(crate::spectral::REAL_TOL)?;
            }
        }
        Ok(InitialCondition { kind, grid })
    }

    pub fn sech2sin(grid: Grid) -> Self {
        InitialCondition { kind: IcKind::Sech2Sin, grid }
    }

    pub fn soliton(grid: Grid, c: f64, a: f64) -> Result<Self> {
        Self::new(IcKind::Soliton { c, a }, grid)
    }

    pub fn kind(&self) -> &IcKind {
        &self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Same data on a grid with other discretization options.
    pub fn with_grid(self, grid: Grid) -> Result<Self> {
        Self::new(self.kind, grid)
    }
}

impl fmt::Display for IcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IcKind::Sech2Sin => write!(f, "sech2sin"),
            IcKind::Soliton { c, a } => write!(f, "soliton c={c} a={a}"),
            IcKind::CustomSpectrum(modes) => write!(f, "custom ({} modes)", modes.len()),
        }
    }
}

fn sech2(x: f64) -> f64 {
    let s = 1.0 / x.cosh();
    s * s
}

/// Representative of `x` in `[-P/2, P/2)` for the torus period `P`.
fn wrap(x: f64, period: f64) -> f64 {
    x - period * (x / period + 0.5).floor()
}

fn soliton_samples(grid: Grid, t: f64, c: f64, a: f64) -> RealField {
    let period = grid.length();
    let amp = -3.0 * c;
    let width = c.sqrt() / 2.0;
    RealField::from_fn(grid, |x| amp * sech2(width * wrap(x - c * t - a, period)))
        .expect("soliton samples are finite")
}

/// Samples the closed-form initial profile at the grid points and transforms.
pub fn make_initial(ic: &InitialCondition) -> SpectralField {
    match &ic.kind {
        IcKind::Sech2Sin => {
            let f = RealField::from_fn(ic.grid, |x| 2.0 * sech2(x / 2.0) * x.sin())
                .expect("sech2sin samples are finite");
            forward_transform(&f)
        }
        IcKind::Soliton { c, a } => forward_transform(&soliton_samples(ic.grid, 0.0, *c, *a)),
        IcKind::CustomSpectrum(modes) => {
            SpectralField::from_modes(ic.grid, modes).expect("validated on construction")
        }
    }
}

/// Solitary wave `-3c sech^2(sqrt(c)/2 (x - ct - a))` of
/// `u_t + u_xxx = (u^2)_x / 2`, sampled on the grid at time `t`.
pub fn exact_soliton(t: f64, grid: Grid, c: f64, a: f64) -> Result<SpectralField> {
    InitialCondition::soliton(grid, c, a)?;
    Ok(forward_transform(&soliton_samples(grid, t, c, a)))
}

fn scheme_config(grid: &Grid, variant: Variant, tau: f64) -> Result<SchemeConfig> {
    let mut cfg = SchemeConfig::new(variant, tau)?;
    cfg.alpha_policy = AlphaPolicy::AutoShift;
    cfg.nyquist_policy = grid.nyquist();
    cfg.dealias = grid.dealias();
    Ok(cfg)
}

/// Final state of `variant` with step `tau` started from `u0` at `t = 0`.
pub fn evolve(u0: &SpectralField, variant: Variant, tau: f64, t_final: f64) -> Result<SpectralField> {
    let cfg = scheme_config(u0.grid(), variant, tau)?;
    let traj = run_evolution(&StepperState::new(u0.clone()), &cfg, t_final, &[])?;
    Ok(traj.last().field.clone())
}

/// Fine-step ExpInt2 solution at `t_final`.
pub fn make_reference(ic: &InitialCondition, t_final: f64, tau_ref: f64) -> Result<SpectralField> {
    evolve(&make_initial(ic), Variant::ExpInt2, tau_ref, t_final)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    L2,
    H1,
    H2,
}

impl Norm {
    pub fn order(self) -> f64 {
        match self {
            Norm::L2 => 0.0,
            Norm::H1 => 1.0,
            Norm::H2 => 2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::H1 => "h1",
            Norm::H2 => "h2",
        }
    }

    pub fn of(self, f: &SpectralField) -> f64 {
        f.sobolev_norm(self.order())
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l2" | "h0" => Ok(Norm::L2),
            "h1" => Ok(Norm::H1),
            "h2" => Ok(Norm::H2),
            other => Err(Error::InvalidArgument(format!(
                "unknown norm '{other}' (expected l2, h1 or h2)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceKind {
    ExactSoliton,
    FineTau { tau_ref: f64 },
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKind::ExactSoliton => write!(f, "exact"),
            ReferenceKind::FineTau { tau_ref } => write!(f, "fine:{tau_ref:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRecord {
    pub scheme: Variant,
    pub tau: f64,
    /// One entry per requested norm, in request order. Empty when the run diverged.
    pub errors: Vec<(Norm, f64)>,
    pub diverged: bool,
}

impl ErrorRecord {
    pub fn error(&self, norm: Norm) -> Option<f64> {
        self.errors.iter().find(|(n, _)| *n == norm).map(|&(_, e)| e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub scheme: Variant,
    pub norm: Norm,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    /// Sorted by decreasing `tau`, then by scheme.
    pub records: Vec<ErrorRecord>,
    pub slopes: Vec<SlopeFit>,
    pub reference_kind: ReferenceKind,
    pub norms: Vec<Norm>,
    pub warnings: Vec<String>,
}

impl ConvergenceStudy {
    pub fn slope(&self, scheme: Variant, norm: Norm) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.scheme == scheme && s.norm == norm)
            .map(|s| s.slope)
    }

    /// `(tau, error)` pairs of one scheme in one norm, divergent rows skipped.
    pub fn series(&self, scheme: Variant, norm: Norm) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.scheme == scheme)
            .filter_map(|r| r.error(norm).map(|e| (r.tau, e)))
            .collect()
    }
}

/// Least-squares slope of `log(error)` against `log(tau)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {}", points.len())));
    }
    if let Some(&(tau, err)) = points.iter().find(|&&(t, e)| !(t > 0.0 && e > 0.0 && t.is_finite() && e.is_finite())) {
        return Err(Error::Fit(format!(
            "cannot take logarithms of tau = {tau}, error = {err}"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all tau values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Worker count for studies: `KDVEXP_THREADS` if set, else the machine's parallelism.
pub fn study_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Minimum ratio between the smallest study step and a fine reference step.
pub const REFERENCE_RATIO: f64 = 100.0;

/// Error of each `(scheme, tau)` run against the reference at `t_final`, plus
/// fitted slopes. Divergent runs are kept as rows, left out of the fits and
/// reported in `warnings`.
pub fn convergence_study(
    ic: &InitialCondition,
    schemes: &[Variant],
    taus: &[f64],
    t_final: f64,
    reference: ReferenceKind,
    norms: &[Norm],
) -> Result<ConvergenceStudy> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(study_threads())
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| convergence_study_inner(ic, schemes, taus, t_final, reference, norms))
}

fn convergence_study_inner(
    ic: &InitialCondition,
    schemes: &[Variant],
    taus: &[f64],
    t_final: f64,
    reference: ReferenceKind,
    norms: &[Norm],
) -> Result<ConvergenceStudy> {
    if taus.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a convergence study needs at least 3 step sizes, got {}",
            taus.len()
        )));
    }
    if schemes.is_empty() || norms.is_empty() {
        return Err(Error::InvalidArgument("no schemes or no norms requested".into()));
    }
    let mut taus = taus.to_vec();
    if taus.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidArgument("step sizes must be positive".into()));
    }
    taus.sort_by(|a, b| b.total_cmp(a));
    if taus.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("step sizes must be distinct".into()));
    }
    let mut schemes = schemes.to_vec();
    schemes.sort();
    schemes.dedup();
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidArgument(format!("final time must be positive, got {t_final}")));
    }
    match (reference, ic.kind()) {
        (ReferenceKind::ExactSoliton, IcKind::Soliton { .. }) => {}
        (ReferenceKind::ExactSoliton, other) => {
            return Err(Error::InvalidArgument(format!(
                "exact reference requires soliton data, got {other}"
            )))
        }
        (ReferenceKind::FineTau { tau_ref }, _) => {
            let smallest = *taus.last().unwrap();
            if !(tau_ref > 0.0 && tau_ref * REFERENCE_RATIO <= smallest * (1.0 + 1e-12)) {
                return Err(Error::InvalidArgument(format!(
                    "reference step {tau_ref:e} must be at most the smallest study step {smallest:e} / {REFERENCE_RATIO}"
                )));
            }
        }
    }

    let u0 = make_initial(ic);
    let cells: Vec<(f64, Variant)> = taus
        .iter()
        .flat_map(|&tau| schemes.iter().map(move |&s| (tau, s)))
        .collect();
    let (reference_field, finals) = rayon::join(
        || match reference {
            ReferenceKind::ExactSoliton => match ic.kind() {
                IcKind::Soliton { c, a } => exact_soliton(t_final, *ic.grid(), *c, *a),
                _ => unreachable!("checked above"),
            },
            ReferenceKind::FineTau { tau_ref } => make_reference(ic, t_final, tau_ref),
        },
        || {
            cells
                .par_iter()
                .map(|&(tau, scheme)| evolve(&u0, scheme, tau, t_final))
                .collect::<Vec<_>>()
        },
    );
    let reference_field = reference_field?;

    let mut records = Vec::with_capacity(cells.len());
    let mut warnings = Vec::new();
    for (&(tau, scheme), result) in cells.iter().zip(finals) {
        match result {
            Ok(u) => {
                let diff = u - &reference_field;
                records.push(ErrorRecord {
                    scheme,
                    tau,
                    errors: norms.iter().map(|&n| (n, n.of(&diff))).collect(),
                    diverged: false,
                });
            }
            Err(e) if e.is_numerical() => {
                warnings.push(format!("{scheme} tau={tau:e}: {e}; row excluded from the fit"));
                records.push(ErrorRecord {
                    scheme,
                    tau,
                    errors: Vec::new(),
                    diverged: true,
                });
            }
            Err(e) => return Err(e),
        }
    }

    let mut study = ConvergenceStudy {
        records,
        slopes: Vec::new(),
        reference_kind: reference,
        norms: norms.to_vec(),
        warnings,
    };
    for &scheme in &schemes {
        for &norm in norms {
            let series = study.series(scheme, norm);
            if series.len() < 3 {
                study
                    .warnings
                    .push(format!("{scheme} {norm}: fewer than 3 usable rows, no slope fitted"));
                continue;
            }
            match fit_slope(&series) {
                Ok(slope) => study.slopes.push(SlopeFit { scheme, norm, slope }),
                Err(e) => study.warnings.push(format!("{scheme} {norm}: {e}")),
            }
        }
    }
    Ok(study)
}

/// Dyadic step list `tau_max, tau_max/2, ..., tau_min`.
pub fn dyadic_taus(tau_max: f64, tau_min: f64) -> Result<Vec<f64>> {
    if !(tau_max.is_finite() && tau_min > 0.0 && tau_min <= tau_max) {
        return Err(Error::InvalidArgument(format!(
            "invalid dyadic range {tau_max:e}..{tau_min:e}"
        )));
    }
    let mut out = vec![tau_max];
    let mut t = tau_max;
    while t / 2.0 >= tau_min * (1.0 - 1e-12) {
        t /= 2.0;
        out.push(t);
    }
    Ok(out)
}

/// Real random field with coefficients of size up to `amplitude` on
/// `1 <= |k| <= kmax` and zero mean.
pub fn random_band_limited(grid: Grid, kmax: i64, amplitude: f64, rng: &mut impl Rng) -> SpectralField {
    let kmax = kmax.min(grid.max_mode());
    let mut f = SpectralField::zeros(grid);
    for k in 1..=kmax {
        let z = Complex64::new(
            rng.gen_range(-amplitude..amplitude),
            rng.gen_range(-amplitude..amplitude),
        );
        f.set_coeff(k, z);
        f.set_coeff(-k, z.conj());
    }
    f
}

/// Seeded generator used by self-tests and examples.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_examples() {
        assert!((fit_slope(&[(1.0, 1.0), (0.1, 0.1)]).unwrap() - 1.0).abs() < 1e-12);
        assert!((fit_slope(&[(1.0, 1.0), (0.1, 0.01)]).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(fit_slope(&[(1.0, 1.0), (0.1, 0.0)]), Err(Error::Fit(_))));
        assert!(fit_slope(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn synthetic_power_laws() {
        let taus = dyadic_taus(0.5 * 2f64.powi(-7), 0.5 * 2f64.powi(-13)).unwrap();
        assert_eq!(taus.len(), 7);
        for p in [1.0, 2.0] {
            let pts: Vec<_> = taus.iter().map(|&t| (t, 3.7 * t.powf(p))).collect();
            assert!((fit_slope(&pts).unwrap() - p).abs() < 1e-12);
        }
    }

    #[test]
    fn soliton_profile() {
        let g = Grid::new(256, 0.1).unwrap();
        let ic = InitialCondition::soliton(g, 1.0, 0.0).unwrap();
        let u = make_initial(&ic).inverse_transform().unwrap();
        // x = 0 is the sample with index K/2
        assert!((u.samples()[128] + 3.0).abs() < 1e-14);
        let peak = u.samples().iter().fold(0.0f64, |m, s| m.max(s.abs()));
        assert_eq!(peak, 3.0);
        assert!(InitialCondition::soliton(g, 0.0, 0.0).is_err());
        assert!(exact_soliton(0.0, g, -1.0, 0.0).is_err());
    }

    #[test]
    fn soliton_mean_on_large_torus() {
        // integral of -3c sech^2(sqrt(c) x / 2) is -12 sqrt(c); the mean
        // coefficient divides by the torus length 2 pi / L
        for c in [1.0, 1.44] {
            let g = Grid::new(1024, 0.1).unwrap();
            let u = make_initial(&InitialCondition::soliton(g, c, 0.0).unwrap());
            let expected = -12.0 * f64::sqrt(c) / g.length();
            assert!((u.mean().re - expected).abs() < 1e-10, "{} vs {expected}", u.mean().re);
        }
    }

    #[test]
    fn sech2sin_vanishes_at_origin() {
        let g = Grid::unit(64).unwrap();
        let u = make_initial(&InitialCondition::sech2sin(g)).inverse_transform().unwrap();
        assert!(u.samples()[32].abs() < 1e-15);
    }

    #[test]
    fn exact_soliton_translates() {
        // L = 0.5 makes the grid spacing 2 pi / (K L) = pi / 32 for K = 128;
        // with c = pi / 32 and t = 1 the wave moves one grid point.
        let g = Grid::new(128, 0.5).unwrap();
        let c = std::f64::consts::PI / 32.0;
        let a0 = make_initial(&InitialCondition::soliton(g, c, 0.0).unwrap());
        assert_eq!(exact_soliton(0.0, g, c, 0.0).unwrap(), a0);
        let s0 = a0.inverse_transform().unwrap();
        let s1 = exact_soliton(1.0, g, c, 0.0).unwrap().inverse_transform().unwrap();
        for i in 1..128 {
            assert!((s1.samples()[i] - s0.samples()[i - 1]).abs() < 1e-13);
        }
    }

    #[test]
    fn reference_at_time_zero_is_initial() {
        let g = Grid::unit(32).unwrap();
        let ic = InitialCondition::sech2sin(g);
        let r = make_reference(&ic, 0.0, 1e-3).unwrap();
        assert!((r - &make_initial(&ic)).max_abs() < 1e-15);
    }

    #[test]
    fn custom_spectrum_must_be_real() {
        let g = Grid::unit(16).unwrap();
        let z = Complex64::new(0.1, 0.2);
        assert!(InitialCondition::new(IcKind::CustomSpectrum(vec![(1, z), (-1, z.conj())]), g).is_ok());
        assert!(InitialCondition::new(IcKind::CustomSpectrum(vec![(1, z)]), g).is_err());
        assert!(InitialCondition::new(IcKind::CustomSpectrum(vec![(40, z)]), g).is_err());
    }

    #[test]
    fn study_validation() {
        let g = Grid::unit(32).unwrap();
        let ic = InitialCondition::sech2sin(g);
        let v = [Variant::ExpInt1];
        assert!(convergence_study(&ic, &v, &[0.1, 0.05], 0.1, ReferenceKind::FineTau { tau_ref: 1e-4 }, &[Norm::H1]).is_err());
        assert!(convergence_study(&ic, &v, &[0.1, 0.05, 0.025], 0.1, ReferenceKind::FineTau { tau_ref: 1e-3 }, &[Norm::H1]).is_err());
        assert!(convergence_study(&ic, &v, &[0.1, 0.05, 0.025], 0.1, ReferenceKind::ExactSoliton, &[Norm::H1]).is_err());
    }

    #[test]
    fn small_study_orders_rows() {
        let g = Grid::unit(32).unwrap();
        let ic = InitialCondition::sech2sin(g);
        let study = convergence_study(
            &ic,
            &[Variant::ExpInt2, Variant::ExpInt1],
            &[0.0125, 0.05, 0.025],
            0.2,
            ReferenceKind::FineTau { tau_ref: 1.25e-4 },
            &[Norm::L2, Norm::H1],
        )
        .unwrap();
        let order: Vec<_> = study.records.iter().map(|r| (r.tau, r.scheme)).collect();
        assert_eq!(
            order,
            vec![
                (0.05, Variant::ExpInt1),
                (0.05, Variant::ExpInt2),
                (0.025, Variant::ExpInt1),
                (0.025, Variant::ExpInt2),
                (0.0125, Variant::ExpInt1),
                (0.0125, Variant::ExpInt2),
            ]
        );
        assert_eq!(study.slopes.len(), 4);
        let s1 = study.slope(Variant::ExpInt1, Norm::H1).unwrap();
        let s2 = study.slope(Variant::ExpInt2, Norm::H1).unwrap();
        assert!((0.8..1.3).contains(&s1), "{s1}");
        assert!((1.7..2.4).contains(&s2), "{s2}");
    }
}
