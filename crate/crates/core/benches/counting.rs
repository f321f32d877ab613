use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wpzeta::count::count_cone_naive;
use wpzeta::field::FiniteField;
use wpzeta::padic::{deformation_matrix, DeformationFamily};
use wpzeta::par::Strategy;
use wpzeta::wps::{Term, WeightedPoly};

fn strategies() -> [(&'static str, Strategy); 2] {
    [
        ("sequential", Strategy::Sequential),
        ("parallel", Strategy::Parallel),
    ]
}

fn naive_counts(c: &mut Criterion) {
    // Hasse fiber at mu = 1: every term couples, so only the naive count applies
    let poly = WeightedPoly::new(
        vec![1, 1, 1],
        vec![
            Term::new(1, vec![3, 0, 0]),
            Term::new(1, vec![0, 3, 0]),
            Term::new(1, vec![0, 0, 3]),
            Term::new(1, vec![1, 1, 1]),
        ],
    )
    .unwrap();
    let mut group = c.benchmark_group("naive_cone_count");
    for p in [31u64, 61] {
        let f = FiniteField::new(p, 1).unwrap();
        for (name, s) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, p), &p, |b, _| {
                b.iter(|| count_cone_naive(&poly, &f, s, u64::MAX).unwrap())
            });
        }
    }
    group.finish();
}

fn deformation_series(c: &mut Criterion) {
    let fam = DeformationFamily::genus_25_family();
    let mut group = c.benchmark_group("deformation_matrix");
    group.sample_size(10);
    for (name, s) in strategies() {
        group.bench_function(name, |b| {
            b.iter(|| deformation_matrix(&fam, 48, s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, naive_counts, deformation_series);
criterion_main!(benches);
