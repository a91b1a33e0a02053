use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use frobtangent::algebra::make_field;
use frobtangent::geometry;
use frobtangent::par::Exec;
use frobtangent::replay;
use frobtangent::scan::{self, ScanConfig};

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("exec");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let name = format!("{exec:?}");
        g.bench_with_input(BenchmarkId::new("quadric_scan_gf2", &name), &exec, |b, &exec| {
            let mut sc = ScanConfig::new(make_field(2, 1).unwrap(), 2);
            sc.cfg.exec = exec;
            b.iter(|| scan::scan_conjecture(&sc, None).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("cubic_points_f125", &name), &exec, |b, &exec| {
            let j = replay::job("4.6").unwrap();
            let cfg = geometry::PointConfig { exec, ..Default::default() };
            b.iter(|| geometry::count_points(std::slice::from_ref(&j.surface), &j.field, 3, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
