use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sparsos::cones::{build_gram_structure, AffinePolyMatrix, ConeKind, GramOptions};
use sparsos::problems::{
    block_arrow_pattern, broyden_poly, eig_bound_instance, lyapunov_search, random_banded_system, random_copositive,
    solve_copositive, solve_lower_bound, solve_matrix_eig_bound, LyapunovOptions, SolveOptions,
};
use sparsos::PolyMatrix;

fn broyden(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut g = c.benchmark_group("broyden");
    g.sample_size(10);
    for n in [10, 20] {
        let p = broyden_poly(n);
        for kind in [ConeKind::Ssos, ConeKind::Sdsos] {
            g.bench_with_input(BenchmarkId::new(kind.to_string(), n), &p, |b, p| {
                b.iter(|| solve_lower_bound(p, kind, &opts).unwrap())
            });
        }
    }
    g.finish();
}

fn gram_structure(c: &mut Criterion) {
    let target = AffinePolyMatrix::from(&PolyMatrix::scalar(broyden_poly(40)));
    let gram = GramOptions::default();
    c.bench_function("gram_structure/broyden_ssos_40", |b| {
        b.iter(|| build_gram_structure(&target, ConeKind::Ssos, None, &gram).unwrap())
    });
}

fn matrix_eig(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let (p, pattern) = eig_bound_instance(10, 0).unwrap();
    let mut g = c.benchmark_group("matrix_eig");
    g.sample_size(10);
    for kind in [ConeKind::Ssos, ConeKind::Sdsos] {
        g.bench_function(kind.to_string(), |b| b.iter(|| solve_matrix_eig_bound(&p, &pattern, kind, &opts).unwrap()));
    }
    g.finish();
}

fn copositive(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let z = random_copositive(&block_arrow_pattern(4, 3, 2).unwrap(), 0);
    let mut g = c.benchmark_group("copositive_l4");
    g.sample_size(10);
    for kind in ConeKind::ALL {
        g.bench_function(kind.to_string(), |b| b.iter(|| solve_copositive(&z, kind, &opts).unwrap()));
    }
    g.finish();
}

fn lyapunov(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let lopts = LyapunovOptions::default();
    let f = random_banded_system(10, 0).unwrap();
    let mut g = c.benchmark_group("lyapunov_n10");
    g.sample_size(10);
    for kind in [ConeKind::Ssos, ConeKind::Sos] {
        g.bench_function(kind.to_string(), |b| b.iter(|| lyapunov_search(&f, kind, &lopts, &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, broyden, gram_structure, matrix_eig, copositive, lyapunov);
criterion_main!(benches);
