use std::f64::consts::FRAC_PI_4;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpevac::chord_arc::{min_chord_l, sigma};
use lpevac::evacuation::{critical_params_on, worst_case_cost_on};
use lpevac::geometry::pi_p;
use lpevac::{LpCircle, PExponent, WirelessSearch};

const PS: [f64; 4] = [1.5, 2.0, 3.0, 20.0];

fn circle(p: f64) -> LpCircle {
    LpCircle::new(PExponent::new(p).unwrap()).unwrap()
}

fn perimeter(c: &mut Criterion) {
    let mut g = c.benchmark_group("pi_p");
    for p in PS {
        let p = PExponent::new(p).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| pi_p(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn circle_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("circle_new");
    for p in PS {
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| circle(black_box(p)))
        });
    }
    g.finish();
}

fn arc_length_inverse(c: &mut Criterion) {
    let mut g = c.benchmark_group("point_at_length");
    for p in PS {
        let circ = circle(p);
        let len = 0.37 * circ.perimeter();
        g.bench_with_input(BenchmarkId::from_parameter(p), &len, |b, &len| {
            b.iter(|| circ.point_at_length(black_box(len)).unwrap())
        });
    }
    g.finish();
}

fn worst_case(c: &mut Criterion) {
    let mut g = c.benchmark_group("worst_case");
    for p in PS {
        let circ = circle(p);
        g.bench_with_input(BenchmarkId::new("closed_form", p), &circ, |b, circ| {
            b.iter(|| worst_case_cost_on(black_box(circ)).unwrap())
        });
        let search =
            WirelessSearch::on_circle(circ.clone(), if p <= 2.0 { 0.0 } else { FRAC_PI_4 })
                .unwrap();
        g.bench_with_input(BenchmarkId::new("grid_oracle_1024", p), &search, |b, s| {
            b.iter(|| s.worst_case_grid_oracle(black_box(1024)).unwrap())
        });
    }
    g.finish();
}

fn chords(c: &mut Criterion) {
    let mut g = c.benchmark_group("chords");
    g.sample_size(20);
    for p in PS {
        let circ = circle(p);
        let e = critical_params_on(&circ).unwrap().e_p;
        g.bench_with_input(BenchmarkId::new("sigma", p), &e, |b, &e| {
            b.iter(|| sigma(&circ, black_box(0.3), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("min_chord_l", p), &e, |b, &e| {
            b.iter(|| min_chord_l(&circ, black_box(e)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    perimeter,
    circle_build,
    arc_length_inverse,
    worst_case,
    chords
);
criterion_main!(benches);
