use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cuspcohom::compact::{hc_pro_system, ExhaustionSchedule};
use cuspcohom::cusped::{build_cusped_complex, build_cusped_graph, cayley_complex};
use cuspcohom::group::cayley_ball;
use cuspcohom::homology::{smith_normal_form, IntMatrix};
use cuspcohom::metric::{delta_estimate, Metric};
use cuspcohom::rips::rips_complex;
use cuspcohom::{GroupSpec, PeripheralSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IntMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect())
}

fn snf(c: &mut Criterion) {
    let m = random_matrix(30, 1);
    c.bench_function("smith_normal_form 30x30", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn spaces(c: &mut Criterion) {
    let f2 = GroupSpec::free(2);
    let torus = PeripheralSpec::from_generators(&f2, &[&["abAB"]]).unwrap();
    c.bench_function("cayley_ball F2 r=8", |b| b.iter(|| cayley_ball(black_box(&f2), 8).unwrap()));
    c.bench_function("cusped_complex torus R=4 T=6", |b| b.iter(|| build_cusped_complex(&f2, &torus, 4, 6).unwrap()));
    c.bench_function("cusped_graph F2/<a> R=3 T=6", |b| {
        let per = PeripheralSpec::from_generators(&f2, &[&["a"]]).unwrap();
        b.iter(|| build_cusped_graph(&f2, &per, 3, 6).unwrap())
    });
}

fn pro_systems(c: &mut Criterion) {
    let f2 = GroupSpec::free(2);
    let tree = cayley_complex(&f2, 6).unwrap();
    let schedule = ExhaustionSchedule::range(1, 5).unwrap();
    c.bench_function("hc_pro_system F2 tree k=1", |b| b.iter(|| hc_pro_system(&tree, 1, &schedule).unwrap()));
    let torus = build_cusped_complex(&f2, &PeripheralSpec::from_generators(&f2, &[&["abAB"]]).unwrap(), 4, 6).unwrap();
    let short = ExhaustionSchedule::range(1, 4).unwrap();
    c.bench_function("hc_pro_system torus k=2", |b| b.iter(|| hc_pro_system(&torus.truncation, 2, &short).unwrap()));
}

fn metric(c: &mut Criterion) {
    let f2 = GroupSpec::free(2);
    let per = PeripheralSpec::from_generators(&f2, &[&["a"]]).unwrap();
    let g = build_cusped_graph(&f2, &per, 3, 6).unwrap();
    c.bench_function("delta_estimate 2000 samples", |b| b.iter(|| delta_estimate(&g.graph, 2000, 7).unwrap()));
    let m = Metric::new(&g.graph);
    m.warm_all();
    let points: Vec<usize> = (0..g.len()).filter(|&v| g.depth(v) >= 2).collect();
    c.bench_function("rips_complex D=2 deep points", |b| b.iter(|| rips_complex(&m, &points, 2, 2, 5_000_000).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = snf, spaces, pro_systems, metric
}
criterion_main!(benches);
