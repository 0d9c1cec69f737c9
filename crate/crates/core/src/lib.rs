//! Exponential-type time integrators for the periodic KdV equation
//! `u_t + u_xxx = (u^2)_x / 2`, discretized with a Fourier pseudospectral method.
//!
//! [`schemes`] holds the first- and second-order steppers and the evolution
//! driver, [`oracle`] brute-force references for them, [`experiments`] the
//! convergence harness and [`io`] configuration and output files.

pub mod error;
pub mod experiments;
pub mod io;
pub mod oracle;
pub mod schemes;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use experiments::{ConvergenceStudy, ErrorRecord, IcKind, InitialCondition, Norm, ReferenceKind};
pub use io::RunConfig;
pub use oracle::OracleReport;
pub use schemes::{AlphaPolicy, SchemeConfig, Stepper, StepperState, Trajectory, Variant};
pub use spectral::{forward_transform, inverse_transform, Grid, NyquistPolicy, RealField, SpectralField};
