//! FFT plumbing between storage order (`-K/2` first) and FFT order (`0` first).
//!
//! Plans are cached per thread, so transforms never contend on a lock.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        }
    });
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::new(0.0, 0.0));
        }
        fft.process_with_scratch(buf, &mut s[..need]);
    });
}

/// Copy of `v` rotated left by half its length, i.e. between storage order
/// and FFT order (the rotation is its own inverse for even lengths).
fn half_rotated(v: &[Complex64]) -> Vec<Complex64> {
    let h = v.len() / 2;
    let mut out = Vec::with_capacity(v.len());
    out.extend_from_slice(&v[h..]);
    out.extend_from_slice(&v[..h]);
    out
}

/// Storage-ordered samples to storage-ordered coefficients, `1/K` scaled.
pub(crate) fn samples_to_coeffs(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = half_rotated(samples);
    fft_in_place(&mut buf, false);
    let scale = 1.0 / n as f64;
    let h = n / 2;
    buf[h..].iter().chain(&buf[..h]).map(|c| c * scale).collect()
}

/// Storage-ordered coefficients to storage-ordered samples (unscaled sum).
pub(crate) fn coeffs_to_samples(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = half_rotated(coeffs);
    fft_in_place(&mut buf, true);
    half_rotated(&buf)
}

/// Samples of two Hermitian coefficient vectors from one inverse FFT: the real
/// parts of the result are the samples of `a`, the imaginary parts those of `b`.
pub(crate) fn pair_to_samples(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let packed: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
    coeffs_to_samples(&packed)
}

/// Inverse of [`pair_to_samples`]: coefficients of the real sample vectors
/// `Re z` and `Im z`, both exactly Hermitian.
pub(crate) fn samples_to_pair(z: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let f = samples_to_coeffs(z);
    let n = f.len();
    let half_i = Complex64::new(0.0, 0.5);
    (0..n)
        .map(|i| {
            let mirror = f[(n - i) % n].conj();
            ((f[i] + mirror) * 0.5, (f[i] - mirror) * -half_i)
        })
        .unzip()
}

/// Coefficients of the product of two fields with aliasing removed by zero
/// padding to `3K/2` points.
pub(crate) fn padded_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let m = 3 * n / 2;
    let half = (n / 2) as i64;
    let place = |src: &[Complex64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (i, c) in src.iter().enumerate() {
            let k = i as i64 - half;
            buf[k.rem_euclid(m as i64) as usize] = *c;
        }
        fft_in_place(&mut buf, true);
        buf
    };
    let pa = place(a);
    let pb = place(b);
    let mut prod: Vec<Complex64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    fft_in_place(&mut prod, false);
    let scale = 1.0 / m as f64;
    (0..n)
        .map(|i| {
            let k = i as i64 - half;
            prod[k.rem_euclid(m as i64) as usize] * scale
        })
        .collect()
}
