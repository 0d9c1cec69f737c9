use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::grid::Grid;
use super::transform;
use crate::error::{Error, Result};

/// Relative tolerance used for realness (Hermitian symmetry) checks.
pub const REAL_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Real samples `f(x_a)` at the grid points, stored with `a = -K/2` first.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.num_modes() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.num_modes(),
                samples.len()
            )));
        }
        if let Some(a) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sample {a} is not finite"
            )));
        }
        Ok(RealField { grid, samples })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Fourier coefficients `xi_k`, `k = -K/2, ..., K/2-1`, in the coefficient
/// convention: the field `exp(i kappa_k x)` has `xi_k = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            coeffs: vec![ZERO; grid.num_modes()],
            grid,
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.num_modes() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.num_modes(),
                coeffs.len()
            )));
        }
        Ok(SpectralField { grid, coeffs })
    }

    /// Field with the listed `(mode, coefficient)` pairs and zeros elsewhere.
    pub fn from_modes(grid: Grid, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut field = Self::zeros(grid);
        for &(k, c) in modes {
            let i = grid.index_of(k).ok_or_else(|| {
                Error::InvalidArgument(format!("mode {k} is outside the grid ({grid})"))
            })?;
            field.coeffs[i] += c;
        }
        Ok(field)
    }

    /// Transform of complex samples at the grid points.
    pub fn from_complex_samples(grid: Grid, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != grid.num_modes() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.num_modes(),
                samples.len()
            )));
        }
        Ok(SpectralField {
            grid,
            coeffs: transform::samples_to_coeffs(samples),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `mode`, zero for modes outside the grid.
    pub fn coeff(&self, mode: i64) -> Complex64 {
        self.grid
            .index_of(mode)
            .map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, mode: i64, value: Complex64) {
        let i = self
            .grid
            .index_of(mode)
            .unwrap_or_else(|| panic!("mode {mode} outside grid {}", self.grid));
        self.coeffs[i] = value;
    }

    /// Same coefficients viewed on a grid with other discretization options.
    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        if grid.num_modes() != self.grid.num_modes() || grid.torus_scale() != self.grid.torus_scale() {
            return Err(Error::GridMismatch {
                left: self.grid.to_string(),
                right: grid.to_string(),
            });
        }
        self.grid = grid;
        Ok(self)
    }

    /// The zero-mode coefficient `xi_0`.
    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Worst violation of `xi_{-k} = conj(xi_k)` (and of real `xi_0`,
    /// `xi_{-K/2}`), as `(mode, |defect|)`.
    pub fn hermitian_defect(&self) -> (i64, f64) {
        let mut worst = (0, 0.0);
        for k in self.grid.min_mode()..=0 {
            let d = if k == 0 || self.grid.is_nyquist(k) {
                self.coeff(k).im.abs()
            } else {
                (self.coeff(k) - self.coeff(-k).conj()).norm()
            };
            if d > worst.1 {
                worst = (k, d);
            }
        }
        worst
    }

    /// Hermitian symmetry up to `tol` relative to the largest coefficient.
    pub fn is_real(&self, tol: f64) -> bool {
        self.check_real(tol).is_ok()
    }

    pub fn check_real(&self, tol: f64) -> Result<()> {
        let (mode, defect) = self.hermitian_defect();
        if defect <= tol * self.max_abs() {
            Ok(())
        } else {
            Err(Error::Symmetry { mode, defect })
        }
    }

    /// Complex samples `sum_k xi_k exp(i k 2 pi a / K)`.
    pub fn complex_samples(&self) -> Vec<Complex64> {
        transform::coeffs_to_samples(&self.coeffs)
    }

    /// Real samples; fails when the coefficients are not Hermitian.
    pub fn inverse_transform(&self) -> Result<RealField> {
        self.check_real(REAL_TOL)?;
        Ok(RealField {
            grid: self.grid,
            samples: self.real_part_samples(),
        })
    }

    /// Real parts of the samples without a symmetry check.
    pub fn real_part_samples(&self) -> Vec<f64> {
        self.complex_samples().into_iter().map(|c| c.re).collect()
    }

    fn map_symbols(&self, symbols: impl Iterator<Item = Complex64>) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(symbols).map(|(c, s)| c * s).collect(),
        }
    }

    /// Multiply mode-wise by a precomputed symbol vector.
    pub fn apply_symbols(&self, symbols: &[Complex64]) -> Self {
        debug_assert_eq!(symbols.len(), self.coeffs.len());
        self.map_symbols(symbols.iter().copied())
    }

    /// Free Airy flow `exp(-t d^3/dx^3)`: `xi_k -> exp(i t kappa_k^3) xi_k`.
    pub fn propagate_airy(&self, t: f64) -> Self {
        let g = self.grid;
        self.map_symbols(g.modes().map(|k| g.flow_symbol(k, t, 0.0)))
    }

    /// `exp(t (d^3/dx^3 - alpha d/dx))`: `xi_k -> exp(-i t (kappa_k^3 + alpha kappa_k)) xi_k`.
    pub fn propagate_shifted_airy(&self, t: f64, alpha: f64) -> Self {
        let g = self.grid;
        self.map_symbols(g.modes().map(|k| g.flow_symbol(k, -t, alpha)))
    }

    pub fn apply_derivative(&self) -> Self {
        let g = self.grid;
        self.map_symbols(g.modes().map(|k| g.derivative_symbol(k)))
    }

    /// Mean-free antiderivative; the zero mode of the result is exactly 0.
    pub fn apply_inverse_derivative(&self) -> Self {
        let g = self.grid;
        self.map_symbols(g.modes().map(|k| g.inverse_derivative_symbol(k)))
    }

    /// Square computed on the grid: a circular (aliased) convolution of the
    /// coefficients, or a 2/3-rule padded product when the grid asks for it.
    pub fn pointwise_square(&self) -> Self {
        if self.grid.dealias() {
            return SpectralField {
                grid: self.grid,
                coeffs: transform::padded_product(&self.coeffs, &self.coeffs),
            };
        }
        let mut samples = self.complex_samples();
        samples.iter_mut().for_each(|s| *s = *s * *s);
        SpectralField {
            grid: self.grid,
            coeffs: transform::samples_to_coeffs(&samples),
        }
    }

    pub fn pointwise_product(&self, other: &SpectralField) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        if self.grid.dealias() {
            return Ok(SpectralField {
                grid: self.grid,
                coeffs: transform::padded_product(&self.coeffs, &other.coeffs),
            });
        }
        let a = self.complex_samples();
        let b = other.complex_samples();
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Ok(SpectralField {
            grid: self.grid,
            coeffs: transform::samples_to_coeffs(&prod),
        })
    }

    /// Samples of two real fields packed into one complex vector (`self` in
    /// the real parts, `other` in the imaginary parts). Meaningful only for
    /// Hermitian coefficients.
    pub(crate) fn paired_samples(&self, other: &SpectralField) -> Vec<Complex64> {
        debug_assert_eq!(self.grid, other.grid);
        transform::pair_to_samples(&self.coeffs, &other.coeffs)
    }

    /// The two real fields whose samples are `Re z` and `Im z`.
    pub(crate) fn from_paired_samples(grid: Grid, z: &[Complex64]) -> (Self, Self) {
        let (a, b) = transform::samples_to_pair(z);
        (SpectralField { grid, coeffs: a }, SpectralField { grid, coeffs: b })
    }

    /// Discrete `H^r` norm `((2 pi / L) sum_k (1 + kappa_k^2)^r |xi_k|^2)^(1/2)`.
    pub fn sobolev_norm(&self, r: f64) -> f64 {
        let g = &self.grid;
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(g.modes())
            .map(|(c, k)| {
                let kappa = g.wavenumber(k);
                (1.0 + kappa * kappa).powf(r) * c.norm_sqr()
            })
            .sum();
        (g.length() * sum).sqrt()
    }

    /// Split off the mean: returns `(alpha, field with zero mode removed)`.
    pub fn split_mean(&self) -> Result<(f64, SpectralField)> {
        let m = self.mean();
        if m.im.abs() > REAL_TOL * self.max_abs().max(1.0) {
            return Err(Error::Symmetry {
                mode: 0,
                defect: m.im.abs(),
            });
        }
        let mut rest = self.clone();
        rest.set_coeff(0, ZERO);
        Ok((m.re, rest))
    }

    /// Add a constant to the zero mode.
    pub fn add_mean(mut self, alpha: f64) -> Self {
        let i = self.grid.index_of(0).expect("zero mode is always on the grid");
        self.coeffs[i] += alpha;
        self
    }

    pub fn scale(mut self, factor: f64) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
        self
    }

    /// `self + factor * other` on matching grids.
    pub fn add_scaled(mut self, factor: f64, other: &SpectralField) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch in field arithmetic");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
        self
    }
}

impl Add<&SpectralField> for SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub<&SpectralField> for SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.add_scaled(-1.0, rhs)
    }
}

/// Coefficient-convention discrete Fourier transform of real samples.
pub fn forward_transform(f: &RealField) -> SpectralField {
    let samples: Vec<Complex64> = f.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    SpectralField {
        grid: f.grid,
        coeffs: transform::samples_to_coeffs(&samples),
    }
}

pub fn inverse_transform(xi: &SpectralField) -> Result<RealField> {
    xi.inverse_transform()
}
