//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported but do not fail the test
//! run; each entry carries the reason the stated target cannot be met.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cuspcohom::compact::*;
use cuspcohom::cusped::{build_cusped_complex, build_cusped_graph, cayley_complex, ComplexTruncation, CuspedGraph};
use cuspcohom::experiments::{builtin, local_probe, regularity_suite, Scenario};
use cuspcohom::homology::{smith_normal_form, IntMatrix, Matrix};
use cuspcohom::metric::{delta_estimate, HalfInt, Metric};
use cuspcohom::rips::{contract_in_point_set, hull_check};
use cuspcohom::{GroupSpec, PeripheralSpec, SimplicialComplex};

const KNOWN_FAILURES: &[(usize, &str)] = &[
    (
        1,
        "the closed form 2*3^(n-1) disagrees with BFS: the n-sphere of the 4-valent tree has 4*3^(n-1) vertices, one per component",
    ),
    (
        13,
        "V(z, n) is a connected shadow whose Rips complex is already acyclic at D >= 2, so no gap size makes the inclusion nonzero",
    ),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn schedule() -> ExhaustionSchedule {
    ExhaustionSchedule::range(1, 6).unwrap()
}

fn verdicts(x: &ComplexTruncation, degrees: &[usize]) -> Vec<(usize, ProSystem, ProVerdict)> {
    degrees
        .par_iter()
        .map(|&k| {
            let p = hc_pro_system(x, k, &schedule()).unwrap();
            let v = pro_classify(&p, DEFAULT_WINDOW);
            (k, p, v)
        })
        .collect()
}

fn f2() -> GroupSpec {
    GroupSpec::free(2)
}

fn torus() -> PeripheralSpec {
    PeripheralSpec::from_generators(&f2(), &[&["abAB"]]).unwrap()
}

fn pants() -> PeripheralSpec {
    PeripheralSpec::from_generators(&f2(), &[&["a"], &["b"], &["ab"]]).unwrap()
}

fn single_a() -> PeripheralSpec {
    PeripheralSpec::from_generators(&f2(), &[&["a"]]).unwrap()
}

fn c1_ends() -> Outcome {
    let counts = |spec: &GroupSpec| {
        let x = cayley_complex(spec, 7).unwrap();
        (1..=5).map(|n| count_ends(&x, n).unwrap()).collect::<Vec<_>>()
    };
    let z = counts(&GroupSpec::free(1));
    let z2 = counts(&GroupSpec::free_abelian(2));
    let f = counts(&f2());
    let stated: Vec<usize> = (1..=5u32).map(|n| 2 * 3usize.pow(n - 1)).collect();
    let oracle: Vec<usize> = (1..=5u32).map(|n| 4 * 3usize.pow(n - 1)).collect();
    let verdicts_ok = ends_verdict(&z) == EndsVerdict::Ends(2)
        && ends_verdict(&z2) == EndsVerdict::Ends(1)
        && ends_verdict(&f) == EndsVerdict::Growing;
    outcome(
        verdicts_ok && f == stated,
        format!("Z {z:?}, Z^2 {z2:?}, F2 {f:?}; stated 2*3^(n-1) = {stated:?}; sphere sizes 4*3^(n-1) = {oracle:?}; verdicts ok: {verdicts_ok}"),
    )
}

fn c2_line() -> Outcome {
    let x = cayley_complex(&GroupSpec::free(1), 8).unwrap();
    let v = verdicts(&x, &[0, 1]);
    let got: Vec<String> = v.iter().map(|(_, _, v)| v.classification.to_string()).collect();
    outcome(got == ["pro-trivial", "stable(1)"], format!("k=0 {}, k=1 {}", got[0], got[1]))
}

fn pd2_profile(per: &PeripheralSpec) -> Outcome {
    let x = build_cusped_complex(&f2(), per, 6, 8).unwrap();
    let v = verdicts(&x.truncation, &[1, 2]);
    let got: Vec<String> = v.iter().map(|(_, _, v)| v.classification.to_string()).collect();
    let window = v[1].2.window;
    outcome(
        got == ["pro-trivial", "stable(1)"] && window >= 3,
        format!("R=6 T=8, {} simplices: k=1 {}, k=2 {} (window {window})", x.complex().total(), got[0], got[1]),
    )
}

fn c5_contrast() -> Outcome {
    let x = build_cusped_complex(&f2(), &single_a(), 6, 8).unwrap();
    let v = verdicts(&x.truncation, &[1, 2]);
    let got: Vec<String> = v.iter().map(|(_, _, v)| v.classification.to_string()).collect();
    outcome(
        got == ["growing", "pro-trivial"],
        format!("k=1 {} (ranks {:?}), k=2 {}", got[0], v[0].2.stage_ranks, got[1]),
    )
}

fn c6_dimension() -> Outcome {
    let est = |x: &ComplexTruncation, degrees: &[usize]| {
        let v: Vec<(usize, ProVerdict)> = verdicts(x, degrees).into_iter().map(|(k, _, v)| (k, v)).collect();
        boundary_dim_estimate(&v).unwrap().value
    };
    let torus = est(&build_cusped_complex(&f2(), &torus(), 6, 8).unwrap().truncation, &[0, 1, 2]);
    let line = est(&cayley_complex(&GroupSpec::free(1), 8).unwrap(), &[0, 1]);
    let tree = est(&cayley_complex(&f2(), 7).unwrap(), &[0, 1]);
    outcome(torus == 1 && line == 0 && tree == 0, format!("punctured torus {torus}, line {line}, F2 {tree}"))
}

fn c7_les() -> Outcome {
    let worked = [
        (SimplicialComplex::from_simplices([[0, 1]]), SimplicialComplex::from_simplices([[0]])),
        (SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]), SimplicialComplex::from_simplices([[0]])),
        (
            SimplicialComplex::from_simplices([
                [0, 1, 2],
                [0, 2, 3],
                [0, 3, 4],
                [0, 4, 5],
                [0, 1, 5],
                [1, 2, 4],
                [2, 3, 5],
                [1, 3, 4],
                [1, 3, 5],
                [2, 4, 5],
            ]),
            SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]),
        ),
    ];
    let mut failures = 0;
    let mut slots = 0;
    for (x, f) in &worked {
        let r = les_check(x, f).unwrap();
        failures += r.failures().len();
        slots += r.slots.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = 40;
    for _ in 0..random {
        let x = common::random_complex(&mut rng, 40);
        let f = common::random_subcomplex(&mut rng, &x);
        let r = les_check(&x, &f).unwrap();
        failures += r.failures().len();
        slots += r.slots.len();
    }
    outcome(failures == 0, format!("3 worked + {random} random pairs, {slots} slots, {failures} failures"))
}

fn c8_cylinders() -> Outcome {
    let bases = [
        ("point", SimplicialComplex::from_simplices([[0]])),
        ("two points", SimplicialComplex::from_simplices([[0], [1]])),
        ("hollow triangle", SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]])),
    ];
    let mut bad = Vec::new();
    for (name, k) in &bases {
        for (deg, v) in cylinder_vanishing_test(k, 8, &schedule()).unwrap() {
            if v.classification != Classification::ProTrivial {
                bad.push(format!("{name} k={deg}: {}", v.classification));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all degrees pro-trivial, 6 stages".to_string() } else { bad.join("; ") })
}

fn to_big(m: &IntMatrix) -> Matrix<BigInt> {
    m.to_big()
}

fn snf_ok(a: &IntMatrix) -> bool {
    let f = smith_normal_form(a);
    let uav = f.u.checked_mul(&to_big(a)).and_then(|m| m.checked_mul(&f.v));
    let unimodular = f.u.determinant().abs().is_one() && f.v.determinant().abs().is_one();
    let d = f.diagonal();
    let positive = d.iter().all(|x| x.is_positive());
    let chain = d.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
    let off_diag_zero = (0..f.s.rows()).all(|i| (0..f.s.cols()).all(|j| i == j || f.s.get(i, j).is_zero()));
    uav.as_ref() == Some(&f.s) && unimodular && positive && chain && off_diag_zero
}

fn c9_snf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let failures = (0..200)
        .filter(|_| {
            let (r, c) = (rng.gen_range(1..=30), rng.gen_range(1..=30));
            !snf_ok(&common::random_matrix(&mut rng, r, c))
        })
        .count();
    let d = smith_normal_form(&IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]])).diagonal();
    let small = d == [BigInt::from(1), BigInt::from(6)];
    outcome(failures == 0 && small, format!("200 random matrices, {failures} failures; diag(2,3) -> {d:?}"))
}

/// Random simplices of the Rips complex at scale `d`: a few cliques of up to three points.
fn random_simplices(rng: &mut ChaCha8Rng, m: &Metric, d: u32) -> Vec<Vec<usize>> {
    let n = m.graph().len();
    let count = rng.gen_range(1..=4);
    (0..count)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut s = vec![u];
            for _ in 0..rng.gen_range(0..=2) {
                let w = rng.gen_range(0..n);
                if s.iter().all(|&x| m.dist(x, w).unwrap() <= d) && !s.contains(&w) {
                    s.push(w);
                }
            }
            s.sort_unstable();
            s
        })
        .collect()
}

fn hull_trials(g: &CuspedGraph, delta: HalfInt, seed: u64) -> (usize, usize, usize, u32) {
    let m = Metric::new(&g.graph);
    m.warm_all();
    // 4 delta, with delta stored in halves
    let d = (2 * delta.0).max(2) as u32;
    let points: Vec<usize> = (0..g.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut violations, mut moves) = (0, 0);
    for _ in 0..50 {
        let l = random_simplices(&mut rng, &m, d);
        match contract_in_point_set(&m, &points, d, &l, g.basepoint, 0, delta) {
            Ok(trace) => {
                moves += trace.moves.len();
                if !hull_check(&m, &trace).unwrap().ok {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    (50, violations, moves, d)
}

fn metric_graphs() -> Vec<(&'static str, CuspedGraph)> {
    let none = PeripheralSpec::empty();
    vec![
        ("Z-ball", build_cusped_graph(&GroupSpec::free(1), &none, 12, 0).unwrap()),
        ("F2-ball", build_cusped_graph(&f2(), &none, 4, 0).unwrap()),
        ("(F2,<a>) R=3 T=4", build_cusped_graph(&f2(), &single_a(), 3, 4).unwrap()),
    ]
}

fn c10_hull() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, g)) in metric_graphs().iter().enumerate() {
        let delta = delta_estimate(&g.graph, 20_000, 7).unwrap();
        let (n, bad, moves, d) = hull_trials(g, delta.delta_thin, 100 + i as u64);
        // a second pass at the four-point scale, where contractions actually move
        let (n2, bad2, moves2, d2) = hull_trials(g, delta.delta_four_point, 200 + i as u64);
        pass &= bad == 0 && bad2 == 0;
        parts.push(format!(
            "{name}: thin D={d} {bad}/{n} violations ({moves} moves); four-point D={d2} {bad2}/{n2} violations ({moves2} moves)"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c11_gromov() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, g)) in metric_graphs().iter().enumerate() {
        let delta = delta_estimate(&g.graph, 20_000, 7).unwrap().delta_thin;
        let m = Metric::new(&g.graph);
        m.warm_all();
        let mut rng = ChaCha8Rng::seed_from_u64(300 + i as u64);
        let n = g.len();
        let mut worst = HalfInt::ZERO;
        for _ in 0..500 {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let gp = m.gromov_product(x, y, z).unwrap();
            let dz = HalfInt::from_int(m.dist_to_set(z, &m.geodesic(x, y).unwrap()).unwrap() as i64);
            let gap = HalfInt((gp.0 - dz.0).abs());
            worst = worst.max(gap);
        }
        pass &= worst <= delta;
        parts.push(format!("{name}: worst gap {worst} vs delta_thin {delta}"));
    }
    outcome(pass, parts.join("; "))
}

fn c12_regularity() -> Outcome {
    let s = builtin("punctured-torus").unwrap();
    let space = s.build_space().unwrap();
    let probes = regularity_suite(&s, &space).unwrap();
    let found = probes.iter().filter(|(_, r)| r.found).count();
    let exceeded = probes.iter().filter(|(_, r)| r.radius_exceeded.is_some()).count();
    let m = probes.iter().filter_map(|(_, r)| r.primitive_radius).max().unwrap_or(0);
    let depths: BTreeSet<u32> = probes.iter().map(|(t, _)| *t).collect();
    let chain = probes.iter().filter(|(_, r)| r.mode == ProbeMode::Chain).count();
    outcome(
        found == probes.len() && exceeded == 0 && chain > 0 && depths == (3..=6).collect(),
        format!("{found}/{} probes found ({chain} chain-mode) at depths {depths:?}; measured M = {m}", probes.len()),
    )
}

fn c13_local() -> Outcome {
    let run = |s: &Scenario| {
        let space = s.build_space().unwrap();
        local_probe(s, &space, 3_000_000).unwrap().1
    };
    let line = run(&builtin("line-local").unwrap());
    let cusp_scenario = builtin("f2-a-local").unwrap();
    let cusp = run(&cusp_scenario);
    let mut control_scenario = cusp_scenario.clone();
    let task = control_scenario.tasks.local.as_mut().unwrap();
    task.inner = task.outer + 1;
    let control = run(&control_scenario);
    let compliant_ok = line.compliant && line.vanishes() && cusp.compliant && cusp.vanishes();
    let control_fails = !control.compliant && !control.vanishes();
    outcome(
        compliant_ok && control_fails,
        format!(
            "line {}/{} vanishes={}; (F2,<a>) {}/{} D={} vanishes={}; control {}/{} compliant={} vanishes={}",
            line.n_outer,
            line.n_inner,
            line.vanishes(),
            cusp.n_outer,
            cusp.n_inner,
            cusp.d,
            cusp.vanishes(),
            control.n_outer,
            control.n_inner,
            control.compliant,
            control.vanishes()
        ),
    )
}

fn c14_guard() -> Outcome {
    type Build = fn(usize, u32) -> ComplexTruncation;
    let cases: [(&str, Build, usize, u32, &[usize]); 4] = [
        ("line", |r, _| cayley_complex(&GroupSpec::free(1), r).unwrap(), 8, 0, &[0, 1]),
        ("punctured torus", |r, t| build_cusped_complex(&f2(), &torus(), r, t).unwrap().truncation, 6, 8, &[1, 2]),
        ("pants", |r, t| build_cusped_complex(&f2(), &pants(), r, t).unwrap().truncation, 6, 8, &[1, 2]),
        ("F2 rel a", |r, t| build_cusped_complex(&f2(), &single_a(), r, t).unwrap().truncation, 6, 8, &[1, 2]),
    ];
    let mut changed = Vec::new();
    for (name, build, r, t, degrees) in cases {
        let small = verdicts(&build(r, t), degrees);
        let big = verdicts(&build(r + 2, t + 2), degrees);
        for ((k, p, v), (_, q, w)) in small.iter().zip(&big) {
            if v.classification != w.classification || p.stages != q.stages || p.images != q.images {
                changed.push(format!("{name} k={k}: {} vs {}", v.classification, w.classification));
            }
        }
    }
    outcome(
        changed.is_empty(),
        if changed.is_empty() { "criteria 2-5 unchanged with R+2, T+2".to_string() } else { changed.join("; ") },
    )
}

type Criterion = (usize, &'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "ends of Z, Z^2, F2", c1_ends),
        (2, "line boundary", c2_line),
        (3, "punctured torus PD(2) profile", || pd2_profile(&torus())),
        (4, "three-punctured sphere PD(2) profile", || pd2_profile(&pants())),
        (5, "(F2,<a>) non-PD contrast", c5_contrast),
        (6, "boundary dimension estimates", c6_dimension),
        (7, "long exact sequence exactness", c7_les),
        (8, "cylinder vanishing", c8_cylinders),
        (9, "Smith normal form identities", c9_snf),
        (10, "Rips contraction hull property", c10_hull),
        (11, "Gromov product vs geodesic distance", c11_gromov),
        (12, "regularity probes", c12_regularity),
        (13, "local homology probe", c13_local),
        (14, "truncation guard soundness", c14_guard),
    ];
    let results: Vec<(usize, &str, Outcome, f64)> = criteria
        .into_par_iter()
        .map(|(id, name, f)| {
            let t0 = Instant::now();
            let o = f();
            (id, name, o, t0.elapsed().as_secs_f64())
        })
        .collect();
    let mut unexpected = Vec::new();
    for (id, name, o, secs) in &results {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| k == id);
        println!("{} [{id:>2}] {name} ({secs:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            match known {
                Some((_, why)) => println!("          known failure: {why}"),
                None => unexpected.push(*id),
            }
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
