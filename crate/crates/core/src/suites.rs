//! Verification suites with plain `key: value` reports.
//!
//! Every suite is deterministic for a fixed seed; suites that do not sample
//! ignore it.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::analysis::growth::{bound_sweep, small_ordinals};
use crate::analysis::{
    decompose, finite_forest_rank, growth_audit, stabilization_check, verify_tame_box, DecomposeInput,
};
use crate::constructions::{
    dec_word, enc_ordinal, finite_word_recognizer, interval_automaton, kb_cmp, rank_probe, word_order_cmp, T0Node,
    TcNode,
};
use crate::oracle::LassoOracle;
use crate::ordinal::fc_ranks;
use crate::ordinal::{ord, Ordinal};
use crate::par;
use crate::random::{random_automaton, rng, words_over, RandomSpec};
use crate::reduction::{fo_eval_str, projection_agreement, standard_presentations, FoResult, Presentation};
use crate::word::{convolve, shape_ordinal, Alphabet, OrdinalWord};

pub const DEFAULT_SEED: u64 = 2024;

/// Suite names with one-line descriptions.
pub const SUITES: &[(&str, &str)] = &[
    ("engine-oracle", "engine membership against lasso search on random 4-state automata"),
    ("finite-words", "the finite-word recognizer accepts every bounded-support word"),
    ("rank-probe", "C_n accepts the empty w^m-word iff m <= n"),
    ("stabilization", "gap relations at w^j, w^j*2, w^j*3, w^(j+1) agree for j >= |Q|"),
    ("encoding", "ordinal encodings are order-isomorphic and decode back"),
    ("fc-echo", "presented order types over w^k have FC_* below w^k"),
    ("decomposition", "sum-of-box decompositions of interval subgraphs, with a mutated control"),
    ("growth", "growth-set size bound and support growth along the successor relation"),
    ("tree-ranks", "forest ranks of tree truncations and Kleene-Brouwer order"),
    ("fo-eval", "first-order evaluation examples and projection against witness search"),
];

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<(String, String)>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: true,
            lines: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    /// Records a named check and folds it into the verdict.
    fn check(&mut self, key: &str, ok: bool) {
        self.put(key, if ok { "ok" } else { "FAILED" });
        self.passed &= ok;
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite: {}", self.name);
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}: {v}");
        }
        let _ = writeln!(s, "result: {}", if self.passed { "pass" } else { "fail" });
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub mode: par::Mode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            mode: par::Mode::default(),
        }
    }
}

pub fn run_suite(name: &str, cfg: SuiteConfig) -> Option<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new(name);
    match name {
        "engine-oracle" => engine_oracle(&mut r, cfg),
        "finite-words" => finite_words(&mut r),
        "rank-probe" => rank_probe_suite(&mut r),
        "stabilization" => stabilization(&mut r, cfg),
        "encoding" => encoding(&mut r, cfg),
        "fc-echo" => fc_echo(&mut r),
        "decomposition" => decomposition(&mut r),
        "growth" => growth(&mut r),
        "tree-ranks" => tree_ranks(&mut r),
        "fo-eval" => fo_eval_suite(&mut r),
        _ => return None,
    }
    r.elapsed = start.elapsed();
    Some(r)
}

/// Six positions below `w^2` used as the bounded support universe.
pub fn universe_w2() -> Vec<Ordinal> {
    ["0", "1", "w", "w+2", "w*3", "w*3+1"].iter().map(|s| ord(s)).collect()
}

pub const SAMPLE_SIZE: usize = 200;

/// The seeded sample of 4-state automata over one letter.
pub fn automaton_sample(seed: u64, count: usize) -> Vec<crate::automaton::OrdinalAutomaton> {
    let spec = RandomSpec::new(4, &["a"]);
    let mut g = rng(seed);
    (0..count).map(|_| random_automaton(&mut g, &spec)).collect()
}

fn engine_oracle(r: &mut SuiteReport, cfg: SuiteConfig) {
    let sample = automaton_sample(cfg.seed, SAMPLE_SIZE);
    let words = words_over(2, &Alphabet::from_symbols(&["a"]), &universe_w2());
    let results = par::map_with(cfg.mode, &sample, |a| {
        let mut o = LassoOracle::new(a);
        let mut agree = 0usize;
        let mut first = None;
        for w in &words {
            if a.accepts(w).ok() == Some(o.accepts(w)) {
                agree += 1;
            } else if first.is_none() {
                first = Some(w.to_string());
            }
        }
        (agree, first)
    });
    let agree: usize = results.iter().map(|x| x.0).sum();
    let total = sample.len() * words.len();
    r.put("seed", cfg.seed);
    r.put("automata", sample.len());
    r.put("words_per_automaton", words.len());
    r.put("agree", format!("{agree}/{total}"));
    if let Some((i, (_, Some(w)))) = results.iter().enumerate().find(|(_, x)| x.1.is_some()) {
        r.put("first_disagreement", format!("automaton {i} on {{{w}}}"));
    }
    r.check("engine_matches_oracle", agree == total);
}

fn finite_words(r: &mut SuiteReport) {
    let sigma = Alphabet::from_symbols(&["a", "b"]);
    let a = finite_word_recognizer(&sigma);
    let words = words_over(2, &sigma, &universe_w2());
    let accepted = words.iter().filter(|w| a.accepts(w).unwrap_or(false)).count();
    let mut o = LassoOracle::new(&a);
    let oracle_accepted = words.iter().filter(|w| o.accepts(w)).count();
    r.put("states", a.num_states());
    r.put("words", words.len());
    r.put("accepted", accepted);
    r.put("oracle_accepted", oracle_accepted);
    r.check("accepts_all", accepted == words.len());
    r.check("oracle_accepts_all", oracle_accepted == words.len());
}

pub const PROBE_MAX: usize = 4;

fn rank_probe_suite(r: &mut SuiteReport) {
    let sigma = Alphabet::from_symbols(&["a"]);
    let mut wrong = Vec::new();
    for n in 0..=PROBE_MAX {
        let c = rank_probe(n, &sigma);
        let row: Vec<String> = (0..=PROBE_MAX as u32)
            .map(|m| {
                let got = c.accepts(&OrdinalWord::empty(m, 1)).unwrap_or(false);
                if got != (m as usize <= n) {
                    wrong.push(format!("C_{n} on w^{m}"));
                }
                if got { "1" } else { "0" }.to_string()
            })
            .collect();
        r.put(&format!("C_{n}"), row.join(""));
    }
    r.put("mismatches", wrong.len());
    if let Some(w) = wrong.first() {
        r.put("first_mismatch", w);
    }
    r.check("accepts_iff_m_le_n", wrong.is_empty());
}

/// Levels are compared from 1 up to `|Q| + STAB_EXTRA`.
pub const STAB_EXTRA: u32 = 2;

fn stabilization(r: &mut SuiteReport, cfg: SuiteConfig) {
    let ex = finite_word_recognizer(&Alphabet::from_symbols(&["a"]));
    let rep = stabilization_check(&ex, 4);
    r.put("finite_word_recognizer_level", rep.level.map_or("none".into(), |l| l.to_string()));
    r.check("finite_word_recognizer_stable_from_1", rep.level == Some(1));
    let sample = automaton_sample(cfg.seed, SAMPLE_SIZE);
    let reports = par::map_with(cfg.mode, &sample, |a| {
        stabilization_check(a, a.num_states() as u32 + STAB_EXTRA)
    });
    let bad = reports.iter().filter(|x| !x.ok()).count();
    let worst = reports.iter().filter_map(|x| x.level).max().unwrap_or(0);
    let mut hist = [0usize; 8];
    for x in &reports {
        if let Some(l) = x.level {
            hist[(l as usize).min(7)] += 1;
        }
    }
    r.put("seed", cfg.seed);
    r.put("automata", sample.len());
    r.put(
        "levels_checked",
        format!("1..=|Q|+{STAB_EXTRA}, multipliers 2, 3, w"),
    );
    r.put("level_histogram", format!("{:?}", &hist[1..=(worst as usize).max(1)]));
    r.put("max_stabilization_level", worst);
    r.put("unstable_from_state_count", bad);
    r.check("stable_from_state_count", bad == 0);
}

/// All ordinals below `w^3` with coefficients at most 3.
pub fn encoding_sample() -> Vec<Ordinal> {
    small_ordinals(2, 3)
}

fn encoding(r: &mut SuiteReport, cfg: SuiteConfig) {
    let betas = encoding_sample();
    let sigma = Alphabet::from_symbols(&["a"]);
    let mut all_ok = true;
    for k in 1..=3u32 {
        let bound = crate::constructions::encoding_bound(k);
        let set: Vec<&Ordinal> = betas.iter().filter(|b| **b < bound).collect();
        let enc: Vec<OrdinalWord> = set.iter().map(|b| enc_ordinal(b, k).expect("in range")).collect();
        let roundtrip = set.iter().zip(&enc).all(|(b, w)| dec_word(w, k).ok().as_ref() == Some(*b));
        let idx: Vec<usize> = (0..set.len()).collect();
        let bad: usize = par::map_with(cfg.mode, &idx, |&i| {
            (0..set.len())
                .filter(|&j| word_order_cmp(&sigma, &enc[i], &enc[j]).ok() != Some(set[i].cmp(set[j])))
                .count()
        })
        .into_iter()
        .sum();
        r.put(&format!("k{k}.ordinals"), set.len());
        r.put(&format!("k{k}.order_mismatches"), bad);
        r.put(&format!("k{k}.roundtrip"), roundtrip);
        all_ok &= bad == 0 && roundtrip;
    }
    r.check("order_isomorphic_and_invertible", all_ok);
}

/// Order types of the standard presentations, computed from their shape.
pub fn presented_order_types() -> Vec<(String, u32, Ordinal)> {
    let mut out = Vec::new();
    for (name, p) in standard_presentations() {
        let k = p.shape();
        let ty = match name {
            // Unary codes of the naturals.
            "unary-naturals" => Ordinal::omega(),
            // Finite words over w^k in the well-order, and the ordinal
            // encodings: both have type w^(w^(k-1)).
            _ => Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::nat(k as u64 - 1))),
        };
        out.push((name.to_string(), k, ty));
    }
    for k in 1..=3u32 {
        out.push((format!("encodings-k{k}"), k, crate::constructions::encoding_bound(k)));
    }
    out
}

fn fc_echo(r: &mut SuiteReport) {
    let mut ok = true;
    for (name, k, ty) in presented_order_types() {
        let fc = fc_ranks(&ty);
        let below = fc.fc_star < shape_ordinal(k);
        r.put(&name, format!("type={ty} shape=w^{k} fc_star={} below_shape={below}", fc.fc_star));
        ok &= below;
    }
    // The word order on a small sample agrees with the claimed type: its
    // initial segment of words below w is the finite sets of naturals.
    let sigma = Alphabet::from_symbols(&["a"]);
    let pos: Vec<Ordinal> = (0..4).map(Ordinal::nat).collect();
    let mut ws = words_over(2, &sigma, &pos);
    ws.sort_by(|x, y| word_order_cmp(&sigma, x, y).unwrap_or(Ordering::Equal));
    let binary = ws.iter().enumerate().all(|(i, w)| {
        let code: u64 = w.support().map(|p| 1u64 << p.as_nat().unwrap_or(0)).sum();
        code == i as u64
    });
    r.check("word_order_counts_in_binary", binary);
    r.check("fc_star_below_shape", ok);
}

/// Interval parameters `(y1, y2)` used for the decomposition suite.
pub const INTERVAL_PARAMS: [(&str, &str); 3] = [("a@w", "a@w*2"), ("a@w+1", "a@w*2+1"), ("", "a@w*2+2")];

pub fn decomposition_universe() -> Vec<Ordinal> {
    ["1", "w", "w+1", "w*2", "w*2+1", "w*3+1"].iter().map(|s| ord(s)).collect()
}

fn word_order() -> Presentation {
    standard_presentations().into_iter().find(|(n, _)| *n == "word-order").expect("registered").1
}

fn decomposition(r: &mut SuiteReport) {
    let p = word_order();
    let param = interval_automaton(&Alphabet::from_symbols(&["a"])).expect("interval automaton");
    let boundaries = vec![ord("w"), ord("w*3")];
    let positions = decomposition_universe();
    let param_word = |y1: &str, y2: &str| {
        let a = OrdinalWord::parse(y1, None, 2).expect("word");
        let b = OrdinalWord::parse(y2, None, 2).expect("word");
        convolve(&[&a, &b]).expect("same shape")
    };
    let mut all = true;
    for (i, (y1, y2)) in INTERVAL_PARAMS.iter().enumerate() {
        let pw = param_word(y1, y2);
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: pw,
            boundaries: boundaries.clone(),
            positions: positions.clone(),
            colouring: None,
        };
        match decompose(&input) {
            Ok(d) => {
                let v = verify_tame_box(&d);
                r.put(
                    &format!("param{i}"),
                    format!(
                        "y1={{{y1}}} y2={{{y2}}} segments={} vertices={} classes={} bound=2^{} pairs={} tame={}",
                        d.num_segments(),
                        d.vertices.len(),
                        d.classes.len(),
                        d.class_bound_log2,
                        v.pairs_checked,
                        v.ok
                    ),
                );
                all &= v.ok && !d.vertices.is_empty();
            }
            Err(e) => {
                r.put(&format!("param{i}"), format!("error: {e}"));
                all = false;
            }
        }
    }
    r.check("interval_subgraphs_tame", all);

    let edge = &p.relation("<").expect("order relation").automaton;
    let words = words_over(2, p.sigma(), &positions);
    let control = crate::analysis::decompose::visible_flip(edge, &words);
    let caught = control.as_ref().is_some_and(|bad| {
        let (y1, y2) = INTERVAL_PARAMS[0];
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: param_word(y1, y2),
            boundaries: boundaries.clone(),
            positions: positions.clone(),
            colouring: Some(bad),
        };
        match decompose(&input) {
            Ok(d) => {
                let v = verify_tame_box(&d);
                if let Some(c) = v.counterexamples.first() {
                    r.put("control_counterexample", c);
                }
                r.put("control_counterexamples", v.counterexamples.len());
                !v.ok && !v.counterexamples.is_empty()
            }
            Err(_) => false,
        }
    });
    r.check("mutated_control_rejected", caught);
}

/// Pool and limits of the exhaustive growth-bound sweep.
pub const GROWTH_MAX_M: u32 = 3;
pub const GROWTH_MAX_I: usize = 3;
pub const GROWTH_MAX_SET: usize = 3;
pub const GROWTH_MAX_DEGREE: u32 = 3;
pub const GROWTH_MAX_COEFF: u64 = 1;

fn growth(r: &mut SuiteReport) {
    let pool = small_ordinals(GROWTH_MAX_DEGREE, GROWTH_MAX_COEFF);
    r.put(
        "pool",
        format!("{} ordinals of degree <= {GROWTH_MAX_DEGREE}, coefficients <= {GROWTH_MAX_COEFF}", pool.len()),
    );
    r.put("ranges", format!("m <= {GROWTH_MAX_M}, i <= {GROWTH_MAX_I}, |X| <= {GROWTH_MAX_SET}"));
    match bound_sweep(&pool, GROWTH_MAX_M, GROWTH_MAX_I, GROWTH_MAX_SET) {
        Ok(s) => {
            r.put("cases", s.cases);
            r.put("stated_bound_failures", s.stated_failures);
            if let Some(f) = &s.first_stated_failure {
                r.put("first_stated_failure", f);
            }
            r.put("value_count_bound_failures", s.value_count_failures);
            r.put("max_size_over_value_count_bound", format!("{:.4}", s.worst_ratio));
            r.check("value_count_bound_holds", s.value_count_failures == 0);
            r.check("stated_bound_holds", s.stated_failures == 0);
        }
        Err(e) => {
            r.put("sweep_error", e);
            r.passed = false;
        }
    }
    let (_, enc) = standard_presentations()
        .into_iter()
        .find(|(n, _)| *n == "enc-ordinals")
        .expect("registered");
    let pos: Vec<Ordinal> = ["0", "1", "2", "w", "w+1", "w*2"].iter().map(|s| ord(s)).collect();
    let extra = [ord("3"), ord("w+2")];
    match growth_audit(&enc, "succ", &pos, &extra) {
        Ok(a) => {
            r.put("audit_pairs", a.pairs_checked);
            r.put("audit_states", a.m);
            r.put("audit_violations", a.violations.len());
            r.put("audit_not_locally_finite", a.skipped.len());
            r.check("successor_growth_contained", a.ok() && a.pairs_checked > 0);
        }
        Err(e) => {
            r.put("audit_error", e);
            r.passed = false;
        }
    }
}

pub const T0_MAX_M: u64 = 8;
pub const TC_MAX_M: u64 = 4;
pub const TC_MAX_C: usize = 3;
pub const KB_MAX_NODES: usize = 5;

/// Every rooted tree on `1..=n` nodes as a parent array with `parent[i] < i`.
pub fn small_trees(n: usize) -> Vec<Vec<Option<usize>>> {
    let mut out: Vec<Vec<Option<usize>>> = vec![vec![None]];
    let mut all = out.clone();
    for size in 2..=n {
        out = out
            .iter()
            .flat_map(|t| {
                (0..size - 1).map(move |p| {
                    let mut u = t.clone();
                    u.push(Some(p));
                    u
                })
            })
            .collect();
        all.extend(out.iter().cloned());
    }
    all
}

fn postorder(parent: &[Option<usize>]) -> Vec<usize> {
    fn visit(v: usize, parent: &[Option<usize>], out: &mut Vec<usize>) {
        for c in (0..parent.len()).filter(|&c| parent[c] == Some(v)) {
            visit(c, parent, out);
        }
        out.push(v);
    }
    let mut out = Vec::new();
    visit(0, parent, &mut out);
    out
}

fn tree_ranks(r: &mut SuiteReport) {
    let mut t0_ok = true;
    let mut t0_totals = Vec::new();
    for max_m in 0..=T0_MAX_M {
        let nodes = T0Node::truncation(max_m);
        match finite_forest_rank(&nodes, |a, b| a.leq(*b)) {
            Ok(fr) => {
                t0_ok &= nodes.iter().zip(&fr.ranks).all(|(n, rk)| match n {
                    T0Node::Pair(n, _) => rk == n,
                    T0Node::Root => true,
                });
                t0_totals.push(fr.total);
            }
            Err(_) => t0_ok = false,
        }
    }
    r.put("t0_truncations", format!("m <= 0..={T0_MAX_M}"));
    r.put("t0_totals", format!("{t0_totals:?}"));
    r.check("t0_node_rank_is_n", t0_ok);

    let base = finite_forest_rank(&T0Node::truncation(TC_MAX_M), |a, b| a.leq(*b)).map(|f| f.total);
    let mut tc_ok = base.is_ok();
    for c in 1..=TC_MAX_C {
        let nodes = TcNode::truncation(c, TC_MAX_M);
        let total = finite_forest_rank(&nodes, |a, b| a.leq(b)).map(|f| f.total);
        let expect = base.as_ref().map(|b| b * c as u64);
        r.put(
            &format!("tc{c}"),
            format!("nodes={} total={:?} expected={:?}", nodes.len(), total.as_ref().ok(), expect.as_ref().ok()),
        );
        tc_ok &= total.is_ok() && total.ok() == expect.ok();
    }
    r.check("tc_rank_scales_by_c", tc_ok);

    let trees = small_trees(KB_MAX_NODES);
    let mut kb_ok = true;
    for parent in &trees {
        let chain = |x: &usize| {
            let mut v = vec![*x];
            while let Some(p) = parent[*v.last().unwrap()] {
                v.push(p);
            }
            v
        };
        let mut order: Vec<usize> = (0..parent.len()).collect();
        let mut failed = false;
        order.sort_by(|x, y| {
            kb_cmp(x, y, chain, |a, b| a.cmp(b)).unwrap_or_else(|_| {
                failed = true;
                Ordering::Equal
            })
        });
        kb_ok &= !failed && order == postorder(parent);
    }
    r.put("kb_trees", trees.len());
    r.check("kb_equals_postorder", kb_ok);
}

/// The three sentence examples with their expected values.
pub const FO_EXAMPLES: [(&str, &str, bool); 3] = [
    ("unary-naturals", "forall x exists y (x < y)", true),
    ("unary-naturals", "exists x (x < x)", false),
    ("word-order", "forall x forall y (x<y | y<x | x=y)", true),
];

fn fo_eval_suite(r: &mut SuiteReport) {
    let ps = standard_presentations();
    let find = |n: &str| ps.iter().find(|(m, _)| *m == n).map(|x| &x.1).expect("registered");
    let mut ok = true;
    for (i, (pres, f, expect)) in FO_EXAMPLES.iter().enumerate() {
        let got = match fo_eval_str(find(pres), f) {
            Ok(FoResult::Sentence(b)) => Some(b),
            _ => None,
        };
        r.put(&format!("example{i}"), format!("{pres}: {f} -> {got:?} (expected {expect})"));
        ok &= got == Some(*expect);
    }
    r.check("examples", ok);
    let mut agree = true;
    for (name, p) in &ps {
        let positions: Vec<Ordinal> = match p.shape() {
            1 => (0..6).map(Ordinal::nat).collect(),
            _ => universe_w2(),
        };
        let universe = words_over(p.shape(), p.sigma(), &positions);
        match projection_agreement(p, &universe) {
            Ok(rep) => {
                r.put(
                    &format!("projection.{name}"),
                    format!(
                        "checked={} agree={} confirmed_outside={} mismatches={}",
                        rep.checked,
                        rep.agree,
                        rep.confirmed_outside,
                        rep.mismatches.len()
                    ),
                );
                agree &= rep.ok();
            }
            Err(e) => {
                r.put(&format!("projection.{name}"), format!("error: {e}"));
                agree = false;
            }
        }
    }
    r.check("projection_matches_search", agree);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_enumeration() {
        let counts: Vec<usize> = (1..=5).map(|n| small_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 10, 34]);
        assert_eq!(postorder(&[None, Some(0), Some(0)]), vec![1, 2, 0]);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", SuiteConfig::default()).is_none());
    }

    #[test]
    fn report_format() {
        let r = run_suite("rank-probe", SuiteConfig::default()).unwrap();
        let text = r.render();
        assert!(text.starts_with("suite: rank-probe\n"));
        assert!(text.contains("C_2: 11100\n"));
        assert!(text.ends_with("result: pass\n"));
    }
}
