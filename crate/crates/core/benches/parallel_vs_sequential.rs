//! Same workloads through each execution mode. With the default
//! `parallel` feature every workload runs on rayon's global pool and on a
//! one-thread pool; with `--no-default-features` it runs the sequential
//! fallback, which can be compared against a saved baseline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dynprop::arith::UniPoly;
use dynprop::dynamics::rational_periodic_points_with;
use dynprop::groups::PermGroup;
use dynprop::reduction::certified_rational_periodic_points;
use dynprop::tower::{build_tower, verify_tower};
use dynprop::Limits;

type Workload = (&'static str, Box<dyn Fn() + Send + Sync>);

fn workloads() -> Vec<Workload> {
    let cubic: UniPoly = "x^3 - 3x^2 + 2".parse().unwrap();
    let quad: UniPoly = "x^2 - 29/16".parse().unwrap();
    vec![
        ("escape_box_sweep", Box::new(move || {
            certified_rational_periodic_points(&cubic, &Limits::default()).unwrap();
        })),
        ("dynatomic_periods_1_to_9", Box::new(move || {
            rational_periodic_points_with(&quad, 9, &Limits::default()).unwrap();
        })),
        ("tower_12_certificates", Box::new(|| {
            let t = build_tower(&[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37], 12).unwrap();
            verify_tower(&t).unwrap();
        })),
        ("normals_a5xa5", Box::new(|| {
            PermGroup::from_name("A5xA5").unwrap().normal_subgroups(&Limits::default()).unwrap();
        })),
    ]
}

#[cfg(feature = "parallel")]
fn modes() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    vec![("rayon", None), ("one_thread", Some(one))]
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10);
    for (name, work) in workloads() {
        #[cfg(feature = "parallel")]
        for (mode, pool) in modes() {
            group.bench_function(BenchmarkId::new(name, mode), |b| match &pool {
                Some(p) => b.iter(|| p.install(&work)),
                None => b.iter(&work),
            });
        }
        #[cfg(not(feature = "parallel"))]
        group.bench_function(BenchmarkId::new(name, "sequential"), |b| b.iter(&work));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
