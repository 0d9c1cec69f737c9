//! Torus grids, Fourier transforms, Fourier-symbol operators and discrete
//! Sobolev norms.

mod field;
mod grid;
mod transform;

pub use field::{forward_transform, inverse_transform, RealField, SpectralField, REAL_TOL};
pub use grid::{Grid, NyquistPolicy};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_real(grid: Grid, rng: &mut ChaCha8Rng) -> RealField {
        let s = (0..grid.num_modes()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        RealField::new(grid, s).unwrap()
    }

    fn random_complex(grid: Grid, rng: &mut ChaCha8Rng) -> SpectralField {
        let v = (0..grid.num_modes())
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SpectralField::from_coeffs(grid, v).unwrap()
    }

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn forward_constant_and_cosine() {
        let g = Grid::unit(8).unwrap();
        let one = forward_transform(&RealField::from_fn(g, |_| 1.0).unwrap());
        for k in g.modes() {
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert!((one.coeff(k) - c(expect, 0.0)).norm() < 1e-15);
        }
        let cos = forward_transform(&RealField::from_fn(g, f64::cos).unwrap());
        for k in g.modes() {
            let expect = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((cos.coeff(k) - c(expect, 0.0)).norm() < 1e-15, "mode {k}");
        }
    }

    #[test]
    fn cosine_on_scaled_torus() {
        let g = Grid::new(16, 0.1).unwrap();
        let f = RealField::from_fn(g, |x| (0.1 * 3.0 * x).cos()).unwrap();
        let xi = forward_transform(&f);
        assert!((xi.coeff(3) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((xi.coeff(-3) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [8, 64, 1024] {
            let g = Grid::unit(k).unwrap();
            let f = random_real(g, &mut rng);
            let back = forward_transform(&f).inverse_transform().unwrap();
            for (a, b) in f.samples().iter().zip(back.samples()) {
                assert!((a - b).abs() < 1e-13);
            }
            let xi = random_complex(g, &mut rng);
            let again = SpectralField::from_complex_samples(g, &xi.complex_samples()).unwrap();
            assert!(max_diff(&xi, &again) < 1e-13);
        }
    }

    #[test]
    fn inverse_examples() {
        let g = Grid::unit(8).unwrap();
        let one = SpectralField::from_modes(g, &[(0, c(1.0, 0.0))]).unwrap();
        assert!(one.inverse_transform().unwrap().samples().iter().all(|s| (s - 1.0).abs() < 1e-15));
        let cos = SpectralField::from_modes(g, &[(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]).unwrap();
        let samples = cos.inverse_transform().unwrap();
        for (x, s) in g.points().iter().zip(samples.samples()) {
            assert!((s - x.cos()).abs() < 1e-15);
        }
        let broken = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            broken.inverse_transform(),
            Err(crate::Error::Symmetry { mode: -1, .. })
        ));
    }

    #[test]
    fn airy_examples() {
        let g = Grid::unit(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xi = random_complex(g, &mut rng);
        assert_eq!(xi.propagate_airy(0.0), xi);
        let tau = 0.013;
        let one = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        let moved = one.propagate_airy(tau);
        assert!((moved.coeff(1) - Complex64::from_polar(1.0, tau)).norm() < 1e-16);
        for r in [0.0, 1.0, 2.0] {
            let n0 = xi.sobolev_norm(r);
            assert!((xi.propagate_airy(3.7).sobolev_norm(r) - n0).abs() < 1e-13 * n0);
        }
    }

    #[test]
    fn shifted_airy_examples() {
        let g = Grid::unit(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xi = random_complex(g, &mut rng);
        assert_eq!(xi.propagate_shifted_airy(0.0, 1.5), xi);
        assert!(max_diff(&xi.propagate_shifted_airy(0.7, 0.0), &xi.propagate_airy(-0.7)) == 0.0);
        let one = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        let shifted = one.propagate_shifted_airy(1.0, 2.0);
        assert!((shifted.coeff(1) - Complex64::from_polar(1.0, -3.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let g = Grid::unit(16).unwrap();
        let constant = SpectralField::from_modes(g, &[(0, c(2.5, 0.0))]).unwrap();
        assert_eq!(constant.apply_derivative().max_abs(), 0.0);
        assert_eq!(constant.apply_inverse_derivative().max_abs(), 0.0);
        let m3 = SpectralField::from_modes(g, &[(3, c(1.0, 0.0))]).unwrap();
        assert!((m3.apply_derivative().coeff(3) - c(0.0, 3.0)).norm() < 1e-15);
        let m2 = SpectralField::from_modes(g, &[(2, c(1.0, 0.0))]).unwrap();
        assert!((m2.apply_inverse_derivative().coeff(2) - c(0.0, -0.5)).norm() < 1e-16);
    }

    #[test]
    fn derivative_undoes_antiderivative_off_mean_and_nyquist() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for policy in [NyquistPolicy::ZeroNyquist, NyquistPolicy::PaperExact] {
            let g = Grid::new(32, 0.4).unwrap().with_nyquist(policy);
            let xi = random_complex(g, &mut rng);
            let back = xi.apply_inverse_derivative().apply_derivative();
            for k in g.modes() {
                let dropped = k == 0 || (g.is_nyquist(k) && policy == NyquistPolicy::ZeroNyquist);
                let expect = if dropped { c(0.0, 0.0) } else { xi.coeff(k) };
                assert!((back.coeff(k) - expect).norm() < 1e-15, "mode {k} {policy:?}");
            }
            assert_eq!(xi.apply_inverse_derivative().mean(), c(0.0, 0.0));
        }
    }

    #[test]
    fn pointwise_square_examples() {
        let g = Grid::unit(16).unwrap();
        let one = SpectralField::from_modes(g, &[(0, c(1.0, 0.0))]).unwrap();
        assert!(max_diff(&one.pointwise_square(), &one) < 1e-15);
        let e1 = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        let e2 = SpectralField::from_modes(g, &[(2, c(1.0, 0.0))]).unwrap();
        assert!(max_diff(&e1.pointwise_square(), &e2) < 1e-15);
    }

    #[test]
    fn dealiased_square_drops_wrapped_modes() {
        let g = Grid::unit(8).unwrap();
        let e3 = SpectralField::from_modes(g, &[(3, c(1.0, 0.0))]).unwrap();
        // e^{6ix} wraps onto mode -2 on an 8-point grid.
        assert!((e3.pointwise_square().coeff(-2) - c(1.0, 0.0)).norm() < 1e-15);
        let padded = e3.clone().with_grid(g.with_dealias(true)).unwrap();
        assert!(padded.pointwise_square().max_abs() < 1e-15);
        let e1 = SpectralField::from_modes(g.with_dealias(true), &[(1, c(1.0, 0.0))]).unwrap();
        assert!((e1.pointwise_square().coeff(2) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sobolev_examples() {
        let g = Grid::unit(16).unwrap();
        let one = SpectralField::from_modes(g, &[(0, c(1.0, 0.0))]).unwrap();
        for r in [0.0, 0.5, 1.0, 2.0] {
            assert!((one.sobolev_norm(r) - (2.0 * PI).sqrt()).abs() < 1e-15);
        }
        let e1 = SpectralField::from_modes(g, &[(1, c(1.0, 0.0))]).unwrap();
        assert!((e1.sobolev_norm(1.0) - 2.0 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(SpectralField::zeros(g).sobolev_norm(1.0), 0.0);
    }

    #[test]
    fn parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (k, l) in [(8, 1.0), (64, 0.1), (1024, 2.0)] {
            let g = Grid::new(k, l).unwrap();
            let f = random_real(g, &mut rng);
            let xi = forward_transform(&f);
            let grid_sum: f64 = f.samples().iter().map(|s| s * s).sum();
            let expect = 2.0 * PI / (l * k as f64) * grid_sum;
            let got = xi.sobolev_norm(0.0).powi(2);
            assert!((got - expect).abs() < 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn split_mean_examples() {
        let g = Grid::unit(16).unwrap();
        let f = forward_transform(&RealField::from_fn(g, |x| 3.0 + x.sin()).unwrap());
        let (alpha, rest) = f.split_mean().unwrap();
        assert!((alpha - 3.0).abs() < 1e-15);
        assert!(rest.mean().norm() == 0.0);
        assert!((rest.coeff(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(rest.clone().add_mean(alpha), f);

        let zero_mean = forward_transform(&RealField::from_fn(g, f64::sin).unwrap());
        let mut zm = zero_mean.clone();
        zm.set_coeff(0, c(0.0, 0.0));
        let (alpha, rest) = zm.split_mean().unwrap();
        assert_eq!(alpha, 0.0);
        assert_eq!(rest, zm);

        let mut bad = zm;
        bad.set_coeff(0, c(0.0, 0.1));
        assert!(bad.split_mean().is_err());
    }

    #[test]
    fn operators_preserve_realness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Grid::new(64, 0.3).unwrap();
        let xi = forward_transform(&random_real(g, &mut rng));
        assert!(xi.is_real(REAL_TOL));
        assert!(xi.apply_derivative().is_real(REAL_TOL));
        assert!(xi.apply_inverse_derivative().is_real(REAL_TOL));
        assert!(xi.propagate_airy(0.77).is_real(REAL_TOL));
        assert!(xi.propagate_shifted_airy(0.77, -0.4).is_real(REAL_TOL));
        assert!(xi.pointwise_square().is_real(REAL_TOL));
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        fn field(k: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
            proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), k)
        }

        proptest! {
            #[test]
            fn airy_flow_is_a_unitary_group(
                v in field(32),
                s in -10.0..10.0f64,
                t in -10.0..10.0f64,
                scale in 0.05..3.0f64,
            ) {
                let g = Grid::new(32, scale).unwrap();
                let xi = SpectralField::from_coeffs(g, v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap();
                let two = xi.propagate_airy(s).propagate_airy(t);
                let one = xi.propagate_airy(s + t);
                // phases grow like t * kappa^3, so compare relative to that
                let phase_scale = (s.abs() + t.abs()) * (16.0 * scale).powi(3);
                prop_assert!(max_diff(&one, &two) < 1e-15 * phase_scale.max(1.0) * 8.0);
                for r in [0.0, 1.0, 2.0] {
                    let n = xi.sobolev_norm(r);
                    prop_assert!((one.sobolev_norm(r) - n).abs() <= 1e-13 * n);
                }
            }

            #[test]
            fn antiderivative_kills_mean(v in field(16), scale in 0.05..3.0f64) {
                let g = Grid::new(16, scale).unwrap();
                let xi = SpectralField::from_coeffs(g, v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap();
                prop_assert_eq!(xi.apply_inverse_derivative().mean(), c(0.0, 0.0));
            }
        }
    }
}
