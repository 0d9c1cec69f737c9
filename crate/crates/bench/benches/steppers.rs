use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kdvexp::experiments::{random_band_limited, seeded_rng};
use kdvexp::oracle::{oracle_first_order_step, oracle_second_order_step};
use kdvexp::schemes::Stepper;
use kdvexp::{forward_transform, Grid, Variant};
use kdvexp_bench::sech2sin;

fn steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for k in [256, 1024] {
        for dealias in [false, true] {
            let u = sech2sin(k, dealias);
            for variant in [Variant::ExpInt1, Variant::ExpInt2] {
                let st = Stepper::new(*u.grid(), variant, 1e-3, 0.0).unwrap();
                let id = format!("{variant}/{}", if dealias { "dealiased" } else { "plain" });
                group.bench_with_input(BenchmarkId::new(id, k), &u, |b, u| b.iter(|| st.step(u).unwrap()));
            }
        }
    }
    group.finish();
}

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for k in [256, 1024, 4096] {
        let real = sech2sin(k, false).inverse_transform().unwrap();
        group.bench_with_input(BenchmarkId::new("forward", k), &real, |b, f| b.iter(|| forward_transform(f)));
        let xi = forward_transform(&real);
        group.bench_with_input(BenchmarkId::new("square", k), &xi, |b, x| b.iter(|| x.pointwise_square()));
    }
    group.finish();
}

fn oracles(c: &mut Criterion) {
    let g = Grid::unit(32).unwrap();
    let v = random_band_limited(g, 8, 1.0, &mut seeded_rng(1));
    let vd = v.clone().with_grid(g.with_dealias(true)).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.bench_function("first_order/32", |b| b.iter(|| oracle_first_order_step(&v, 0.37, 1e-2, 0.0).unwrap()));
    group.bench_function("second_order/32", |b| b.iter(|| oracle_second_order_step(&vd, 1e-2).unwrap()));
    group.finish();
}

criterion_group!(benches, steps, transforms, oracles);
criterion_main!(benches);
