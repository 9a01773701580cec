use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qcocycle::cocycle::properness_scan;
use qcocycle::uq_irreps::{spectrum_sweep, spins_up_to};
use qcocycle::verify::{run_verify, VerifyOptions};
use qcocycle::{Exec, ParamContext};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ctx() -> ParamContext {
    ParamContext::parse("0.5", "1.3", 50).unwrap()
}

fn growth(c: &mut Criterion) {
    let ctx = ctx();
    let eps = ctx.parse_real("1e-8").unwrap();
    let mut group = c.benchmark_group("properness_scan");
    group.sample_size(10);
    for n_max in [10usize, 20] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n_max), &n_max, |b, &n| {
                b.iter(|| properness_scan(&ctx, black_box(n), &eps, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let ctx = ctx();
    let spins = spins_up_to(8);
    let mut group = c.benchmark_group("spectrum_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| spectrum_sweep(&ctx, black_box(&spins), exec).unwrap()));
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let ctx = ParamContext::parse("0.5", "1.3", 30).unwrap();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut opts = VerifyOptions::new(&ctx);
        opts.n_max = 12;
        opts.exec = exec;
        group.bench_function(name, |b| b.iter(|| run_verify(&ctx, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, growth, spectrum, verify);
criterion_main!(benches);
