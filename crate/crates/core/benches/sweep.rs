//! Sequential against rayon-parallel per-discriminant sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prym_core::components::{sweep, Exec, Sets};

fn execs() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Exec::Parallel),
    ]
}

fn sweeps(c: &mut Criterion) {
    let cases = [
        ("S genus 3", 3, Sets::S_ONLY, 17..=2000),
        ("P genus 3", 3, Sets::P_ONLY, 17..=600),
        ("PQS genus 3", 3, Sets::ALL, 17..=300),
        (
            "PS genus 4",
            4,
            Sets {
                p: true,
                q: false,
                s: true,
            },
            12..=600,
        ),
    ];
    for (name, genus, sets, range) in cases {
        let mut g = c.benchmark_group(name);
        g.sample_size(10);
        for (label, exec) in execs() {
            g.bench_with_input(BenchmarkId::new(label, range.end()), &range, |b, r| {
                b.iter(|| sweep(r.clone(), genus, sets, exec).unwrap())
            });
        }
        g.finish();
    }
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
