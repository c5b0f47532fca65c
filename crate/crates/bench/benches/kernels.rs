use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use splinegram::spectra::{hermitian_eigenvalues, symmetric_eigenvalues};
use splinegram::{assemble_gram, build_bspline, toeplitz_coeff, GaborConfig, LaurentSymbol, SystemParams};

fn coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("toeplitz_coeff");
    for order in [2usize, 4, 8] {
        let p = SystemParams::new(0.25, 1.5, order).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(order), &p, |bch, p| {
            bch.iter(|| {
                let m = p.bandwidth() as i64;
                (-m..=m).map(|j| toeplitz_coeff(p, black_box(3), j)).sum::<f64>()
            })
        });
    }
    g.finish();
    c.bench_function("build_bspline/12", |b| b.iter(|| build_bspline(black_box(12)).unwrap()));
}

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble_gram");
    for n in [9usize, 15, 21] {
        let config = GaborConfig::new(0.25, 1.5, 2, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &config, |b, cfg| {
            b.iter(|| assemble_gram(black_box(cfg)))
        });
    }
    g.finish();
}

fn eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigensolve");
    g.sample_size(10);
    let sym = LaurentSymbol::new(SystemParams::new(0.25, 1.5, 2).unwrap(), 0);
    for n in [33usize, 65, 129] {
        let t = sym.block.matrix(n);
        g.bench_with_input(BenchmarkId::new("toeplitz", n), &t, |b, t| {
            b.iter(|| symmetric_eigenvalues(black_box(t)).unwrap())
        });
    }
    let gram = assemble_gram(&GaborConfig::new(0.25, 1.5, 2, 9).unwrap());
    g.bench_function("gram/9", |b| {
        b.iter(|| hermitian_eigenvalues(black_box(&gram.entries)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, coefficients, gram, eigen);
criterion_main!(benches);
