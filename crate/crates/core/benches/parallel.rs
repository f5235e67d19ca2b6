//! Parallel against sequential execution on the hot paths: Ext-class
//! enumeration in the cotorsion checks, lemma batteries and whole suites.
//! Without the `parallel` feature both variants run sequentially.

use std::time::Duration;

use cotlab_core::cotorsion::{cotorsion_report, ClassSpec, Universe};
use cotlab_core::harness::{bundled, run_suite};
use cotlab_core::products::{lemma_battery, LemmaKind};
use cotlab_core::{CheckConfig, Exec, Ring};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn cotorsion(c: &mut Criterion) {
    let mut g = c.benchmark_group("cotorsion_report");
    for n in [8u64, 12] {
        let u = Universe::enumerate(Ring::new(n).unwrap(), 2);
        for (name, exec) in MODES {
            let cfg = CheckConfig::default().with_exec(exec);
            g.bench_with_input(BenchmarkId::new(name, format!("Z/{n}")), &u, |b, u| {
                b.iter(|| cotorsion_report(&ClassSpec::All, &ClassSpec::Injective, u, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn batteries(c: &mut Criterion) {
    let mut g = c.benchmark_group("lemma_battery");
    let r = Ring::new(4).unwrap();
    for kind in [LemmaKind::HomLeftSplit, LemmaKind::PpAdjunction] {
        for (name, exec) in MODES {
            let cfg = CheckConfig::default().with_exec(exec).with_trials(50);
            g.bench_function(BenchmarkId::new(name, kind.name()), |b| {
                b.iter(|| lemma_battery(kind, r, 2, None, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_suite");
    g.sample_size(10);
    let sc = bundled("paper-core-z4").unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, &sc.name), |b| b.iter(|| run_suite(&sc, exec).unwrap()));
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = cotorsion, batteries, suites
}
criterion_main!(benches);
