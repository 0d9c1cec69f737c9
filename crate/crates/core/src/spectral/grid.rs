use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Treatment of the unpaired mode `k = -K/2` under odd Fourier symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NyquistPolicy {
    /// Odd symbols (derivative, antiderivative) annihilate the Nyquist mode and
    /// the dispersive flow leaves it untouched, so real fields stay real.
    #[default]
    ZeroNyquist,
    /// Apply every symbol literally on the full mode set `{-K/2, ..., K/2-1}`.
    PaperExact,
}

/// Uniform discretization of the torus `[-pi/L, pi/L)` with `K` points.
///
/// Mode `k` carries the effective wavenumber `kappa_k = L * k`; grid point `a`
/// sits at `x_a = 2 pi a / (K L)`, both for `k, a` in `{-K/2, ..., K/2-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    num_modes: usize,
    torus_scale: f64,
    nyquist: NyquistPolicy,
    dealias: bool,
}

impl Grid {
    pub fn new(num_modes: usize, torus_scale: f64) -> Result<Self> {
        if num_modes < 4 || !num_modes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "number of modes must be even and at least 4, got {num_modes}"
            )));
        }
        if !(torus_scale.is_finite() && torus_scale > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "torus scale must be positive and finite, got {torus_scale}"
            )));
        }
        Ok(Grid {
            num_modes,
            torus_scale,
            nyquist: NyquistPolicy::default(),
            dealias: false,
        })
    }

    /// The standard torus `[-pi, pi)`.
    pub fn unit(num_modes: usize) -> Result<Self> {
        Self::new(num_modes, 1.0)
    }

    pub fn with_nyquist(mut self, policy: NyquistPolicy) -> Self {
        self.nyquist = policy;
        self
    }

    /// Enable 2/3-rule zero padding for quadratic products.
    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn torus_scale(&self) -> f64 {
        self.torus_scale
    }

    pub fn nyquist(&self) -> NyquistPolicy {
        self.nyquist
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// Length `2 pi / L` of the periodic domain.
    pub fn length(&self) -> f64 {
        2.0 * PI / self.torus_scale
    }

    pub fn min_mode(&self) -> i64 {
        -(self.num_modes as i64 / 2)
    }

    pub fn max_mode(&self) -> i64 {
        self.num_modes as i64 / 2 - 1
    }

    /// Modes in storage order, `-K/2` first.
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        self.min_mode()..=self.max_mode()
    }

    pub fn mode_at(&self, index: usize) -> i64 {
        index as i64 + self.min_mode()
    }

    pub fn index_of(&self, mode: i64) -> Option<usize> {
        (self.min_mode()..=self.max_mode())
            .contains(&mode)
            .then(|| (mode - self.min_mode()) as usize)
    }

    pub fn is_nyquist(&self, mode: i64) -> bool {
        mode == self.min_mode()
    }

    pub fn wavenumber(&self, mode: i64) -> f64 {
        self.torus_scale * mode as f64
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.modes().map(|k| self.wavenumber(k)).collect()
    }

    pub fn point(&self, a: i64) -> f64 {
        2.0 * PI * a as f64 / (self.num_modes as f64 * self.torus_scale)
    }

    pub fn points(&self) -> Vec<f64> {
        self.modes().map(|a| self.point(a)).collect()
    }

    /// Symbol of `d/dx` at `mode`.
    pub fn derivative_symbol(&self, mode: i64) -> Complex64 {
        if self.is_nyquist(mode) && self.nyquist == NyquistPolicy::ZeroNyquist {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, self.wavenumber(mode))
    }

    /// Symbol of the mean-free antiderivative: `1/(i kappa)`, zero on the mean.
    pub fn inverse_derivative_symbol(&self, mode: i64) -> Complex64 {
        if mode == 0 || (self.is_nyquist(mode) && self.nyquist == NyquistPolicy::ZeroNyquist) {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, -1.0 / self.wavenumber(mode))
    }

    /// Symbol of `exp(-s (d^3/dx^3 - alpha d/dx))`, i.e. `exp(i s (kappa^3 + alpha kappa))`.
    ///
    /// This is the free flow of the (shifted) linear part forward by time `s`.
    pub fn flow_symbol(&self, mode: i64, s: f64, alpha: f64) -> Complex64 {
        if self.is_nyquist(mode) && self.nyquist == NyquistPolicy::ZeroNyquist {
            return Complex64::new(1.0, 0.0);
        }
        let kappa = self.wavenumber(mode);
        Complex64::from_polar(1.0, s * (kappa * kappa * kappa + alpha * kappa))
    }

    pub fn derivative_symbols(&self) -> Vec<Complex64> {
        self.modes().map(|k| self.derivative_symbol(k)).collect()
    }

    pub fn inverse_derivative_symbols(&self) -> Vec<Complex64> {
        self.modes()
            .map(|k| self.inverse_derivative_symbol(k))
            .collect()
    }

    pub fn flow_symbols(&self, s: f64, alpha: f64) -> Vec<Complex64> {
        self.modes().map(|k| self.flow_symbol(k, s, alpha)).collect()
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K={} L={} nyquist={:?}{}",
            self.num_modes,
            self.torus_scale,
            self.nyquist,
            if self.dealias { " dealiased" } else { "" }
        )
    }
}
