use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ppf_core::exec::Exec;
use ppf_core::families::{sweep_table1, SweepConfig};
use ppf_core::field::{FieldCtx, DEFAULT_CAP};
use ppf_core::framework::{ast_property_sweep, random_g_pool, random_permutation_table};
use ppf_core::poly::FnTable;

fn modes() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn table1(c: &mut Criterion) {
    let mut group = c.benchmark_group("table1_sweep");
    group.sample_size(10);
    for (name, exec) in modes() {
        let cfg = SweepConfig {
            q_list: vec![5, 7],
            m_max: 4,
            n_max: 4,
            families: None,
            seed: 1,
            cap: DEFAULT_CAP,
            keep_all: false,
            exec,
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| black_box(sweep_table1(cfg).summary.instances))
        });
    }
    group.finish();
}

fn ast(c: &mut Criterion) {
    let ctx = FieldCtx::quadratic_over(3, DEFAULT_CAP).unwrap();
    let base = ctx.base().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fs = vec![
        FnTable::identity(&ctx),
        random_permutation_table(&ctx, &mut rng),
    ];
    let gs = random_g_pool(&base, 2, 20, &mut rng);
    let mut group = c.benchmark_group("ast_sweep_f9");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| black_box(ast_property_sweep(&ctx, &fs, &gs, exec).unwrap().checks))
        });
    }
    group.finish();
}

criterion_group!(benches, table1, ast);
criterion_main!(benches);
