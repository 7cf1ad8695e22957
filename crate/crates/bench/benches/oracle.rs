use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use locmix_bench::{big_cycle, clique_chain, expander};
use locmix_core::{
    local_mixing_oracle, mixing_time, step, Dist, LengthSchedule, MixParams, OracleMode,
    DEFAULT_EPS,
};

fn bench_walk_step(c: &mut Criterion) {
    let g = clique_chain();
    let d = Dist::stationary(&g);
    c.bench_function("walk_step/barbell_4x32", |b| {
        b.iter(|| step(black_box(&g), black_box(&d), false))
    });
}

fn bench_mixing_time(c: &mut Criterion) {
    let g = expander();
    c.bench_function("mixing_time/random_regular_64_6", |b| {
        b.iter(|| mixing_time(black_box(&g), 0, DEFAULT_EPS, false).unwrap())
    });
}

fn bench_local_mixing_oracle(c: &mut Criterion) {
    let g = clique_chain();
    let params = MixParams::new(4.0, DEFAULT_EPS).unwrap();
    c.bench_function("local_mixing_oracle/definition/barbell_4x32", |b| {
        b.iter(|| {
            local_mixing_oracle(
                black_box(&g),
                0,
                &params,
                OracleMode::Definition { contain_source: false },
            )
            .unwrap()
        })
    });
    let cyc = big_cycle();
    let params = MixParams::new(4.0, DEFAULT_EPS).unwrap();
    c.bench_function("local_mixing_oracle/grid_powers/cycle_129", |b| {
        b.iter(|| {
            local_mixing_oracle(
                black_box(&cyc),
                0,
                &params,
                OracleMode::AlgorithmGrid { schedule: LengthSchedule::PowersOfTwo },
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, bench_walk_step, bench_mixing_time, bench_local_mixing_oracle);
criterion_main!(benches);
