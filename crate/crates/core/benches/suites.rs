use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ordinal_automata::random::words_over;
use ordinal_automata::word::Alphabet;
use ordinal_automata::par::{map_with, Mode};
use ordinal_automata::suites::{automaton_sample, run_suite, universe_w2, SuiteConfig};

fn membership(c: &mut Criterion) {
    let sample = automaton_sample(7, 40);
    let words = words_over(2, &Alphabet::from_symbols(&["a"]), &universe_w2());
    let mut g = c.benchmark_group("membership");
    for mode in [Mode::Sequential, Mode::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(mode.name()), &mode, |b, &mode| {
            b.iter(|| {
                map_with(mode, &sample, |a| words.iter().filter(|w| a.accepts(w).unwrap_or(false)).count())
            })
        });
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for name in ["stabilization", "encoding"] {
        for mode in [Mode::Sequential, Mode::Parallel] {
            let cfg = SuiteConfig { mode, ..Default::default() };
            g.bench_with_input(BenchmarkId::new(name, mode.name()), &cfg, |b, &cfg| {
                b.iter(|| run_suite(name, cfg).expect("registered"))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, membership, suites);
criterion_main!(benches);
