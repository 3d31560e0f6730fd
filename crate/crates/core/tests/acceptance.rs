//! One PASS/FAIL line per acceptance criterion, with pinned time limits.
//!
//! A criterion listed in `KNOWN_FAILURES` is still run and printed; the test
//! fails if it unexpectedly passes, so the list cannot go stale.

use std::time::Duration;

use ordinal_automata::suites::{run_suite, SuiteConfig, SuiteReport, DEFAULT_SEED};

struct Criterion {
    id: u32,
    suite: &'static str,
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, suite: "engine-oracle", limit: secs(60) },
    Criterion { id: 2, suite: "finite-words", limit: secs(5) },
    Criterion { id: 3, suite: "rank-probe", limit: secs(10) },
    Criterion { id: 4, suite: "stabilization", limit: secs(60) },
    Criterion { id: 5, suite: "encoding", limit: secs(30) },
    Criterion { id: 6, suite: "fc-echo", limit: secs(30) },
    Criterion { id: 7, suite: "decomposition", limit: secs(120) },
    Criterion { id: 8, suite: "growth", limit: secs(60) },
    Criterion { id: 9, suite: "tree-ranks", limit: secs(30) },
    Criterion { id: 10, suite: "fo-eval", limit: secs(120) },
];

/// The printed size bound `(c + i m)^(m+1) d` undercounts by one value per
/// coefficient: `U_1({0}) = {0, 1, w, w+1}` has 4 elements against a bound
/// of 1. The suite reports both this bound and `(c + i m + 1)^(m+1) d`.
const KNOWN_FAILURES: [(u32, &str); 1] = [(8, "stated growth bound is off by one per coefficient")];

fn verdict(c: &Criterion, r: &SuiteReport) -> (bool, String) {
    let in_time = r.elapsed <= c.limit;
    let pass = r.passed && in_time;
    let failed: Vec<&str> = r.lines.iter().filter(|(_, v)| v == "FAILED").map(|(k, _)| k.as_str()).collect();
    let mut note = format!("{:.2}s of {}s", r.elapsed.as_secs_f64(), c.limit.as_secs());
    if !in_time {
        note.push_str(", over time");
    }
    if !failed.is_empty() {
        note.push_str(&format!(", failed checks: {}", failed.join(", ")));
    }
    (pass, note)
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig { seed: DEFAULT_SEED, ..Default::default() };
    let mut unexpected = Vec::new();
    for c in &CRITERIA {
        let r = run_suite(c.suite, cfg).expect("suite registered");
        let (pass, note) = verdict(c, &r);
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == c.id);
        let tag = if pass { "PASS" } else { "FAIL" };
        match known {
            Some((_, why)) => println!("criterion {:>2} [{}]: {tag} ({note}; known: {why})", c.id, c.suite),
            None => println!("criterion {:>2} [{}]: {tag} ({note})", c.id, c.suite),
        }
        if pass == known.is_some() {
            eprintln!("{}", r.render());
            unexpected.push(c.id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
