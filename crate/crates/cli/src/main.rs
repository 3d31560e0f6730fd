use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ordinal_automata::analysis::decompose::DecomposeInput;
use ordinal_automata::analysis::forest::parse_forest;
use ordinal_automata::analysis::{decompose, finite_forest_rank, growth_audit, growth_sets, stabilization_check, verify_tame_box};
use ordinal_automata::automaton::text::{format_automaton, parse_automaton};
use ordinal_automata::automaton::{OrdinalAutomaton, Relation};
use ordinal_automata::constructions::{dec_word, enc_ordinal, generate, word_order_cmp, GENERATORS};
use ordinal_automata::ordinal::Ordinal;
use ordinal_automata::par::Mode;
use ordinal_automata::reduction::{AbstractNfa, ClassContext, FoEvaluator, FoResult, Formula, Presentation};
use ordinal_automata::suites::{run_suite, SuiteConfig, DEFAULT_SEED, SUITES};
use ordinal_automata::word::{parse_shape, Alphabet, OrdinalWord};

#[derive(Parser)]
#[command(name = "ordaut", version, about = "Automata on finite-support ordinal words")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Shape {
    /// Word shape: `w^k`, `w` or just `k`.
    #[arg(long = "k", default_value = "2", value_parser = shape_arg)]
    k: u32,
}

fn shape_arg(s: &str) -> Result<u32, String> {
    parse_shape(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership of a word, optionally read against an oracle word.
    Member {
        automaton: String,
        word: String,
        #[arg(long)]
        oracle: Option<String>,
        /// Print an accepting run at segment boundaries.
        #[arg(long)]
        run: bool,
        #[command(flatten)]
        shape: Shape,
    },
    /// Relation of the automaton over an empty stretch of the given length.
    Gaps { automaton: String, length: String },
    /// Relation of the automaton over the positions `[lo, hi)` of a word.
    Behavior {
        automaton: String,
        word: String,
        lo: String,
        hi: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Abstract the automaton to a classical NFA over gap classes and letters.
    Abstract {
        automaton: String,
        /// Also list the gap classes.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        shape: Shape,
    },
    /// Evaluate a first-order formula on a presentation.
    Fo {
        presentation: PathBuf,
        /// Formula text, or `@file` to read it from a file.
        formula: String,
    },
    /// Encode an ordinal as a word.
    Enc {
        ordinal: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Decode a word to the ordinal it encodes.
    Dec {
        word: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Compare two words in the finite-word well-order.
    Cmpwords {
        w: String,
        v: String,
        /// Letter order, comma separated; defaults to the sorted letters used.
        #[arg(long)]
        alphabet: Option<String>,
        #[command(flatten)]
        shape: Shape,
    },
    /// Print a named construction in the automaton text format.
    Gen {
        /// Construction name, or `list`.
        construction: String,
        params: Vec<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Decompose the subgraph cut out by a parameter automaton and check it.
    Decompose {
        presentation: PathBuf,
        /// Binary relation used as the edge set.
        #[arg(long)]
        edge: String,
        /// Automaton reading `x ⊗ p ⊗ o`.
        #[arg(long)]
        param: String,
        /// Parameter word (tracks after `x`).
        #[arg(long = "p")]
        p: String,
        /// Segment boundaries, comma separated.
        #[arg(long)]
        cuts: String,
        /// Universe positions, comma separated.
        #[arg(long)]
        positions: String,
        /// Automaton to colour with instead of the edge automaton.
        #[arg(long)]
        colouring: Option<String>,
    },
    /// Ranks of a finite forest file (`node <name>`, `edge <child> <parent>`).
    Rank { forest: PathBuf },
    /// Growth sets `U_m`, or a growth audit of a presented relation.
    Growth {
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Base ordinals, comma separated.
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Audit a relation of this presentation instead.
        #[arg(long)]
        audit: Option<PathBuf>,
        #[arg(long, default_value = "succ")]
        relation: String,
        #[arg(long, default_value = "0,1,2,w,w+1,w*2")]
        positions: String,
        #[arg(long, default_value = "3,w+2")]
        extra: String,
    },
    /// Check stabilization of gap relations across levels.
    Stab {
        automaton: String,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
    },
    /// Run a verification suite (`list` shows them, `all` runs every one).
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
    },
}

/// Exit status: true/nonempty, false/empty.
enum Outcome {
    Yes,
    No,
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(cli.cmd, &mut out) {
        Ok(o) => {
            print!("{out}");
            match o {
                Outcome::Yes => ExitCode::SUCCESS,
                Outcome::No => ExitCode::from(1),
            }
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// A file path, or `gen:<construction>[:param...]`.
fn load_automaton(src: &str) -> Result<OrdinalAutomaton> {
    if let Some(spec) = src.strip_prefix("gen:") {
        return Ok(generate(spec)?);
    }
    let text = std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?;
    parse_automaton(&text).with_context(|| format!("in {src}"))
}

fn word_for(a: &OrdinalAutomaton, text: &str, k: u32) -> Result<OrdinalWord> {
    OrdinalWord::parse(text, Some(a.alphabet()), k).with_context(|| format!("word {text:?}"))
}

fn ordinal(s: &str) -> Result<Ordinal> {
    s.trim().parse::<Ordinal>().map_err(|e| anyhow!("ordinal {s:?}: {e}"))
}

fn ordinals(s: &str) -> Result<Vec<Ordinal>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(ordinal).collect()
}

fn relation_text(a: &OrdinalAutomaton, r: &Relation) -> String {
    let pairs: Vec<String> = r
        .pairs()
        .map(|(p, q)| format!("({}, {})", a.state_name(p), a.state_name(q)))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

fn run(cmd: Cmd, out: &mut String) -> Result<Outcome> {
    match cmd {
        Cmd::Member { automaton, word, oracle, run, shape } => {
            let a = load_automaton(&automaton)?;
            let o = match &oracle {
                Some(t) => Some(OrdinalWord::parse(t, None, shape.k).with_context(|| format!("oracle {t:?}"))?),
                None => None,
            };
            let w = match &o {
                Some(_) => OrdinalWord::parse(&word, None, shape.k).with_context(|| format!("word {word:?}"))?,
                None => word_for(&a, &word, shape.k)?,
            };
            let ok = a.accepts_with_oracle(&w, o.as_ref())?;
            writeln!(out, "accepted: {ok}")?;
            if run && ok {
                let read = match &o {
                    Some(o) => ordinal_automata::word::convolve(&[&w, o])?,
                    None => w.clone(),
                };
                if let Some(r) = a.run_witness(&read)? {
                    writeln!(out, "run: {}", r.render(&a))?;
                }
            }
            Ok(ok.into())
        }
        Cmd::Gaps { automaton, length } => {
            let a = load_automaton(&automaton)?;
            let r = a.gap_relation(&ordinal(&length)?)?;
            writeln!(out, "relation: {}", relation_text(&a, &r))?;
            Ok((!r.is_empty()).into())
        }
        Cmd::Behavior { automaton, word, lo, hi, shape } => {
            let a = load_automaton(&automaton)?;
            let w = word_for(&a, &word, shape.k)?;
            let r = a.behavior(&w, &ordinal(&lo)?, &ordinal(&hi)?)?;
            writeln!(out, "relation: {}", relation_text(&a, &r))?;
            Ok((!r.is_empty()).into())
        }
        Cmd::Abstract { automaton, verbose, shape } => {
            let a = load_automaton(&automaton)?;
            let ctx = std::sync::Arc::new(ClassContext::for_automata(shape.k, &[&a]));
            let n = AbstractNfa::from_automaton(&a, ctx.clone(), vec![a.alphabet().clone()])?;
            writeln!(out, "shape: w^{}", shape.k)?;
            let caps: Vec<String> = ctx.caps().iter().map(|(p, q)| format!("({p},{q})")).collect();
            writeln!(out, "level_caps: {}", caps.join(" "))?;
            writeln!(out, "gap_classes: {}", ctx.num_inner())?;
            writeln!(out, "symbols: {}", n.num_symbols())?;
            writeln!(out, "states: {}", n.num_states())?;
            writeln!(out, "transitions: {}", n.num_transitions())?;
            if verbose {
                let classes: Vec<_> = ctx.inner_classes().collect();
                for (i, g) in classes.iter().enumerate() {
                    writeln!(out, "class.{i}: least gap {}", ctx.least(g))?;
                }
            }
            let empty = n.is_empty();
            writeln!(out, "empty: {empty}")?;
            if let Some(w) = n.witness() {
                writeln!(out, "witness: {{{w}}}")?;
            }
            Ok((!empty).into())
        }
        Cmd::Fo { presentation, formula } => {
            let p = Presentation::load(&presentation).with_context(|| format!("in {}", presentation.display()))?;
            let text = match formula.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
                None => formula,
            };
            let f = Formula::parse(&text)?;
            let ev = FoEvaluator::new(&p)?;
            match ev.eval(&f)? {
                FoResult::Sentence(b) => {
                    writeln!(out, "value: {b}")?;
                    Ok(b.into())
                }
                FoResult::Relation(d) => {
                    writeln!(out, "free: {}", d.vars.join(", "))?;
                    writeln!(out, "states: {}", d.nfa.num_states())?;
                    let w = ev.witness(&d);
                    writeln!(out, "empty: {}", w.is_none())?;
                    if let Some(w) = &w {
                        for (v, e) in d.vars.iter().zip(&w.elems) {
                            writeln!(out, "witness {v}: {{{e}}}")?;
                        }
                    }
                    Ok(w.is_some().into())
                }
            }
        }
        Cmd::Enc { ordinal: o, shape } => {
            let w = enc_ordinal(&ordinal(&o)?, shape.k)?;
            writeln!(out, "{{{w}}}")?;
            Ok(Outcome::Yes)
        }
        Cmd::Dec { word, shape } => {
            let w = OrdinalWord::parse(&word, None, shape.k)?;
            writeln!(out, "{}", dec_word(&w, shape.k)?)?;
            Ok(Outcome::Yes)
        }
        Cmd::Cmpwords { w, v, alphabet, shape } => {
            let a = OrdinalWord::parse(&w, None, shape.k)?;
            let b = OrdinalWord::parse(&v, None, shape.k)?;
            let sigma = match alphabet {
                Some(s) => {
                    let syms: Vec<&str> = s.split(',').map(str::trim).collect();
                    Alphabet::from_symbols(&syms)
                }
                None => {
                    let mut syms: Vec<String> = a
                        .entries()
                        .iter()
                        .chain(b.entries())
                        .filter_map(|(_, l)| l.component(0).map(|s| s.to_string()))
                        .collect();
                    syms.sort();
                    syms.dedup();
                    if syms.is_empty() {
                        syms.push("a".into());
                    }
                    let refs: Vec<&str> = syms.iter().map(String::as_str).collect();
                    Alphabet::from_symbols(&refs)
                }
            };
            let c = word_order_cmp(&sigma, &a, &b)?;
            writeln!(
                out,
                "{}",
                match c {
                    std::cmp::Ordering::Less => "LT",
                    std::cmp::Ordering::Equal => "EQ",
                    std::cmp::Ordering::Greater => "GT",
                }
            )?;
            Ok(Outcome::Yes)
        }
        Cmd::Gen { construction, params, out: path } => {
            if construction == "list" {
                for (name, params, desc) in GENERATORS {
                    writeln!(out, "{name} {params}: {desc}")?;
                }
                return Ok(Outcome::Yes);
            }
            let mut spec = construction;
            for p in params {
                spec.push(':');
                spec.push_str(&p);
            }
            let text = format_automaton(&generate(&spec)?);
            match path {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => out.push_str(&text),
            }
            Ok(Outcome::Yes)
        }
        Cmd::Decompose { presentation, edge, param, p, cuts, positions, colouring } => {
            let pres = Presentation::load(&presentation).with_context(|| format!("in {}", presentation.display()))?;
            let param = load_automaton(&param)?;
            let colour = colouring.as_deref().map(load_automaton).transpose()?;
            let pw = OrdinalWord::parse(&p, None, pres.shape()).with_context(|| format!("parameter {p:?}"))?;
            let input = DecomposeInput {
                presentation: &pres,
                edge,
                param: &param,
                p: pw,
                boundaries: ordinals(&cuts)?,
                positions: ordinals(&positions)?,
                colouring: colour.as_ref(),
            };
            let d = decompose(&input)?;
            out.push_str(&d.report());
            let v = verify_tame_box(&d);
            out.push_str(&v.report());
            Ok(v.ok.into())
        }
        Cmd::Rank { forest } => {
            let src = std::fs::read_to_string(&forest).with_context(|| format!("reading {}", forest.display()))?;
            let (names, leq) = parse_forest(&src).with_context(|| format!("in {}", forest.display()))?;
            let idx: Vec<usize> = (0..names.len()).collect();
            let r = finite_forest_rank(&idx, |a, b| leq[*a][*b])?;
            out.push_str(&r.report(&names));
            writeln!(out, "inf_rank: 0 (finite forest)")?;
            Ok(Outcome::Yes)
        }
        Cmd::Growth { m, x, delta, i, audit, relation, positions, extra } => {
            if let Some(path) = audit {
                let pres = Presentation::load(&path).with_context(|| format!("in {}", path.display()))?;
                let a = growth_audit(&pres, &relation, &ordinals(&positions)?, &ordinals(&extra)?)?;
                out.push_str(&a.report());
                return Ok(a.ok().into());
            }
            let delta = delta.as_deref().map(ordinal).transpose()?;
            if i == 0 {
                bail!("--i must be at least 1");
            }
            let g = growth_sets(m, &ordinals(&x)?, delta.as_ref(), i)?;
            out.push_str(&g.report());
            Ok(Outcome::Yes)
        }
        Cmd::Stab { automaton, max_level } => {
            let a = load_automaton(&automaton)?;
            let r = stabilization_check(&a, max_level);
            out.push_str(&r.report());
            Ok(r.ok().into())
        }
        Cmd::Verify { suite, seed, sequential } => {
            if suite == "list" {
                for (name, desc) in SUITES {
                    writeln!(out, "{name}: {desc}")?;
                }
                return Ok(Outcome::Yes);
            }
            let cfg = SuiteConfig {
                seed,
                mode: if sequential { Mode::Sequential } else { Mode::default() },
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.iter().map(|(n, _)| *n).collect()
            } else {
                vec![suite.as_str()]
            };
            let mut all = true;
            for name in names {
                let r = run_suite(name, cfg).ok_or_else(|| anyhow!("unknown suite {name:?}; try `verify list`"))?;
                out.push_str(&r.render());
                all &= r.passed;
            }
            Ok(all.into())
        }
    }
}
