//! First-order evaluation over presentations.
//!
//! Each subformula becomes an [`AbstractNfa`] over one track group per free
//! variable (sorted by name), followed by the oracle group when there is one.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::formula::{Formula, FormulaError};
use super::gapclass::ClassContext;
use super::nfa::{AbstractNfa, NfaError};
use super::presentation::Presentation;
use crate::word::{Alphabet, OrdinalWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error(transparent)]
    Parse(#[from] FormulaError),
    #[error("unknown relation symbol {0:?}")]
    UnknownRelation(String),
    #[error("relation {name} has arity {expected}, used with {got} arguments")]
    Arity { name: String, expected: usize, got: usize },
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

/// A defined relation: the automaton reads one group per variable, in order.
#[derive(Clone, Debug)]
pub struct Defined {
    pub vars: Vec<String>,
    pub nfa: AbstractNfa,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub elems: Vec<OrdinalWord>,
    pub oracle: Option<OrdinalWord>,
}

#[derive(Clone, Debug)]
pub enum FoResult {
    Sentence(bool),
    Relation(Defined),
}

pub struct FoEvaluator<'p> {
    p: &'p Presentation,
    ctx: Arc<ClassContext>,
    oracle: Option<Alphabet>,
    domain: AbstractNfa,
}

impl<'p> FoEvaluator<'p> {
    pub fn new(p: &'p Presentation) -> Result<Self, FoError> {
        let ctx = Arc::new(ClassContext::for_automata(p.shape(), &p.automata()));
        let oracle = p.oracle_alphabet();
        let mut ev = FoEvaluator {
            p,
            ctx: ctx.clone(),
            oracle,
            domain: AbstractNfa::nothing(ctx.clone(), Vec::new()),
        };
        ev.domain = AbstractNfa::from_automaton(p.domain(), ctx, ev.tracks(1))?.trim();
        Ok(ev)
    }

    pub fn context(&self) -> &Arc<ClassContext> {
        &self.ctx
    }

    /// Track groups for `n` variables plus the oracle.
    pub fn tracks(&self, n: usize) -> Vec<Alphabet> {
        let mut t = vec![self.p.sigma().clone(); n];
        t.extend(self.oracle.clone());
        t
    }

    /// Reads `d` over the variable list `vars`, a superset of `d.vars`.
    fn cylindrify(&self, d: &Defined, vars: &[String]) -> Result<AbstractNfa, FoError> {
        if d.vars == vars {
            return Ok(d.nfa.clone());
        }
        self.place(&d.nfa, &d.vars, vars)
    }

    /// Reads `nfa`, whose groups carry `args` (repeats allowed), over `vars`.
    fn place(&self, nfa: &AbstractNfa, args: &[String], vars: &[String]) -> Result<AbstractNfa, FoError> {
        let mut map: Vec<usize> = args
            .iter()
            .map(|a| vars.iter().position(|v| v == a).expect("variable in scope"))
            .collect();
        if self.oracle.is_some() {
            map.push(vars.len());
        }
        Ok(nfa.reindex(self.tracks(vars.len()), &map)?.trim())
    }

    /// Tuples of domain elements.
    pub fn domain_power(&self, vars: &[String]) -> Result<AbstractNfa, FoError> {
        let mut acc = AbstractNfa::universal(self.ctx.clone(), self.tracks(vars.len()));
        for v in vars {
            let d = self.place(&self.domain, std::slice::from_ref(v), vars)?;
            acc = acc.intersect(&d)?.trim();
        }
        Ok(acc)
    }

    fn merged(a: &Defined, b: &Defined) -> Vec<String> {
        let mut v: Vec<String> = a.vars.iter().chain(&b.vars).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    fn translate(&self, f: &Formula) -> Result<Defined, FoError> {
        Ok(match f {
            Formula::True => Defined {
                vars: Vec::new(),
                nfa: AbstractNfa::universal(self.ctx.clone(), self.tracks(0)),
            },
            Formula::False => Defined {
                vars: Vec::new(),
                nfa: AbstractNfa::nothing(self.ctx.clone(), self.tracks(0)),
            },
            Formula::Atom(name, args) => {
                let r = self.p.relation(name).ok_or_else(|| FoError::UnknownRelation(name.clone()))?;
                if r.arity != args.len() {
                    return Err(FoError::Arity {
                        name: name.clone(),
                        expected: r.arity,
                        got: args.len(),
                    });
                }
                let nfa = AbstractNfa::from_automaton(&r.automaton, self.ctx.clone(), self.tracks(r.arity))?;
                let mut vars = args.clone();
                vars.sort();
                vars.dedup();
                let nfa = self.place(&nfa, args, &vars)?;
                Defined { vars, nfa }
            }
            Formula::Eq(a, b) => {
                if a == b {
                    let vars = vec![a.clone()];
                    Defined {
                        nfa: self.domain_power(&vars)?,
                        vars,
                    }
                } else {
                    let eq = AbstractNfa::equality(self.ctx.clone(), self.tracks(2), 0, 1);
                    let args = [a.clone(), b.clone()];
                    let mut vars = args.to_vec();
                    vars.sort();
                    Defined {
                        nfa: self.place(&eq, &args, &vars)?,
                        vars,
                    }
                }
            }
            Formula::Not(g) => {
                let d = self.translate(g)?;
                let nfa = d.nfa.complement().intersect(&self.domain_power(&d.vars)?)?.trim();
                Defined { vars: d.vars, nfa }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (da, db) = (self.translate(a)?, self.translate(b)?);
                let vars = Self::merged(&da, &db);
                let (na, nb) = (self.cylindrify(&da, &vars)?, self.cylindrify(&db, &vars)?);
                let nfa = if matches!(f, Formula::And(..)) {
                    na.intersect(&nb)?
                } else {
                    na.union(&nb)?
                };
                Defined { vars, nfa: nfa.trim() }
            }
            Formula::Implies(a, b) => {
                let g = Formula::Or(Box::new(Formula::Not(a.clone())), b.clone());
                self.translate(&g)?
            }
            Formula::Exists(v, g) => {
                let d = self.translate(g)?;
                let mut vars = d.vars.clone();
                if !vars.contains(v) {
                    vars.push(v.clone());
                    vars.sort();
                }
                let body = self.cylindrify(&d, &vars)?;
                let dom = self.place(&self.domain, std::slice::from_ref(v), &vars)?;
                let i = vars.iter().position(|x| x == v).expect("bound variable");
                let nfa = body.intersect(&dom)?.project(i)?.trim();
                vars.remove(i);
                Defined { vars, nfa }
            }
            Formula::Forall(v, g) => {
                let g = Formula::Not(Box::new(Formula::Exists(
                    v.clone(),
                    Box::new(Formula::Not(g.clone())),
                )));
                self.translate(&g)?
            }
        })
    }

    /// The relation defined by `f` over its free variables, restricted to the domain.
    pub fn define(&self, f: &Formula) -> Result<Defined, FoError> {
        let d = self.translate(f)?;
        let nfa = d.nfa.intersect(&self.domain_power(&d.vars)?)?.trim();
        Ok(Defined { vars: d.vars, nfa })
    }

    pub fn eval(&self, f: &Formula) -> Result<FoResult, FoError> {
        let d = self.define(f)?;
        if !d.vars.is_empty() {
            return Ok(FoResult::Relation(d));
        }
        Ok(FoResult::Sentence(self.sentence_value(&d.nfa)?))
    }

    /// Value of a defined relation with no variables: membership of the oracle.
    fn sentence_value(&self, nfa: &AbstractNfa) -> Result<bool, FoError> {
        match self.p.oracle() {
            Some(o) => Ok(nfa.accepts(o)?),
            None => Ok(nfa.accepts_symbols(&[])),
        }
    }

    /// Whether the tuple `args` (in `d.vars` order) satisfies `d`.
    pub fn holds(&self, d: &Defined, args: &[&OrdinalWord]) -> Result<bool, FoError> {
        Ok(d.nfa.accepts(&self.p.with_oracle(args))?)
    }

    /// An element tuple in `d`, placed at the least positions of its gap
    /// classes. With an oracle the tuple comes with a copy of the oracle
    /// that has the same abstraction; the tuple satisfies `d` against that copy.
    pub fn witness(&self, d: &Defined) -> Option<Witness> {
        let w = match self.p.oracle() {
            Some(o) => {
                let fixed = AbstractNfa::singleton(self.ctx.clone(), self.tracks(0), o).ok()?;
                let fixed = self.place_oracle_only(&fixed, d.vars.len()).ok()?;
                d.nfa.intersect(&fixed).ok()?.witness()?
            }
            None => d.nfa.witness()?,
        };
        let sw = self.p.sigma().width();
        let n = d.vars.len();
        let group = |i: usize, width: usize| w.select_tracks(&(i * sw..i * sw + width).collect::<Vec<_>>());
        Some(Witness {
            elems: (0..n).map(|i| group(i, sw)).collect(),
            oracle: self.p.oracle().map(|o| group(n, o.width())),
        })
    }

    fn place_oracle_only(&self, nfa: &AbstractNfa, n: usize) -> Result<AbstractNfa, FoError> {
        Ok(nfa.reindex(self.tracks(n), &[n])?)
    }
}

pub fn fo_eval(p: &Presentation, f: &Formula) -> Result<FoResult, FoError> {
    FoEvaluator::new(p)?.eval(f)
}

pub fn fo_eval_str(p: &Presentation, src: &str) -> Result<FoResult, FoError> {
    fo_eval(p, &Formula::parse(src)?)
}

/// Direct evaluation with quantifiers ranging over the domain elements of
/// `universe`. Free variables are read from `env`.
pub fn eval_bounded(
    p: &Presentation,
    f: &Formula,
    universe: &[OrdinalWord],
    env: &mut BTreeMap<String, OrdinalWord>,
) -> Result<bool, FoError> {
    let elems: Vec<&OrdinalWord> = universe.iter().filter(|w| p.in_domain(w)).collect();
    eval_in(p, f, &elems, env)
}

fn eval_in(
    p: &Presentation,
    f: &Formula,
    elems: &[&OrdinalWord],
    env: &mut BTreeMap<String, OrdinalWord>,
) -> Result<bool, FoError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(name, args) => {
            let r = p.relation(name).ok_or_else(|| FoError::UnknownRelation(name.clone()))?;
            if r.arity != args.len() {
                return Err(FoError::Arity {
                    name: name.clone(),
                    expected: r.arity,
                    got: args.len(),
                });
            }
            let ws: Vec<&OrdinalWord> = args.iter().map(|a| &env[a]).collect();
            p.holds(name, &ws).unwrap_or(false)
        }
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Not(g) => !eval_in(p, g, elems, env)?,
        Formula::And(a, b) => eval_in(p, a, elems, env)? && eval_in(p, b, elems, env)?,
        Formula::Or(a, b) => eval_in(p, a, elems, env)? || eval_in(p, b, elems, env)?,
        Formula::Implies(a, b) => !eval_in(p, a, elems, env)? || eval_in(p, b, elems, env)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = env.get(v).cloned();
            let mut result = universal;
            for w in elems {
                env.insert(v.clone(), (*w).clone());
                if eval_in(p, g, elems, env)? != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            result
        }
    })
}

/// Outcome of comparing `exists y R(.., y, ..)` with a bounded search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProjectionReport {
    pub checked: usize,
    /// Both sides found a witness, or neither did.
    pub agree: usize,
    /// The automaton found a witness outside the search space; it was
    /// rebuilt and confirmed by the ordinal automata.
    pub confirmed_outside: usize,
    pub mismatches: Vec<String>,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.checked == self.agree + self.confirmed_outside
    }
}

/// For every binary relation `R` and both argument positions, compares
/// `exists y R(x, y)` (resp. `R(y, x)`) with a witness search over the
/// domain elements of `universe`, for each domain element `x` there.
pub fn projection_agreement(p: &Presentation, universe: &[OrdinalWord]) -> Result<ProjectionReport, FoError> {
    let ev = FoEvaluator::new(p)?;
    let elems: Vec<&OrdinalWord> = universe.iter().filter(|w| p.in_domain(w)).collect();
    let mut rep = ProjectionReport::default();
    let (x, y) = ("x".to_string(), "y".to_string());
    for (name, r) in p.relations() {
        if r.arity != 2 {
            continue;
        }
        for flipped in [false, true] {
            let args = if flipped { vec![y.clone(), x.clone()] } else { vec![x.clone(), y.clone()] };
            let atom = Formula::Atom(name.clone(), args.clone());
            let proj = ev.define(&Formula::Exists(y.clone(), Box::new(atom.clone())))?;
            let rel = ev.define(&atom)?;
            for &xw in &elems {
                rep.checked += 1;
                let says = ev.holds(&proj, &[xw])?;
                let found = elems.iter().any(|&yw| {
                    let pair = if flipped { [yw, xw] } else { [xw, yw] };
                    p.holds(name, &pair).unwrap_or(false)
                });
                let label = format!("exists y {atom} at x = {{{xw}}}");
                match (says, found) {
                    (true, true) | (false, false) => rep.agree += 1,
                    (false, true) => rep.mismatches.push(format!("{label}: search found a witness, automaton did not")),
                    (true, false) => {
                        if confirm_outside(&ev, p, name, &rel, xw, flipped)? {
                            rep.confirmed_outside += 1;
                        } else {
                            rep.mismatches.push(format!("{label}: automaton witness not confirmed"));
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Rebuilds a witness pair whose `x` part has the abstraction of `xw` and
/// checks it against the relation and domain automata directly.
fn confirm_outside(
    ev: &FoEvaluator<'_>,
    p: &Presentation,
    name: &str,
    rel: &Defined,
    xw: &OrdinalWord,
    flipped: bool,
) -> Result<bool, FoError> {
    let fixed = AbstractNfa::singleton(ev.ctx.clone(), ev.tracks(1), &p.with_oracle(&[xw]))?;
    let fixed = ev.place(&fixed, &["x".to_string()], &rel.vars)?;
    let both = Defined {
        vars: rel.vars.clone(),
        nfa: rel.nfa.intersect(&fixed)?.trim(),
    };
    let Some(wit) = ev.witness(&both) else {
        return Ok(false);
    };
    // `rel.vars` is sorted: x before y.
    let (x2, y2) = (&wit.elems[0], &wit.elems[1]);
    let pair = if flipped { [y2, x2] } else { [x2, y2] };
    let read = |args: &[&OrdinalWord]| {
        let mut v = args.to_vec();
        v.extend(wit.oracle.as_ref());
        crate::word::convolve(&v).expect("same shape")
    };
    let abs = AbstractNfa::universal(ev.ctx.clone(), ev.tracks(1));
    let same_class = abs.abstraction(&read(&[x2]))? == abs.abstraction(&p.with_oracle(&[xw]))?;
    let r = &p.relation(name).expect("relation exists").automaton;
    let ok = |a: &crate::automaton::OrdinalAutomaton, w: OrdinalWord| a.accepts(&w).unwrap_or(false);
    Ok(same_class && ok(p.domain(), read(&[x2])) && ok(p.domain(), read(&[y2])) && ok(r, read(&pair)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;
    use crate::random::words_over;
    use crate::reduction::standard_presentations;

    fn pres(name: &str) -> Presentation {
        standard_presentations().into_iter().find(|(n, _)| *n == name).unwrap().1
    }

    fn sentence(p: &Presentation, s: &str) -> bool {
        match fo_eval_str(p, s).unwrap() {
            FoResult::Sentence(b) => b,
            FoResult::Relation(d) => panic!("open formula, free {:?}", d.vars),
        }
    }

    #[test]
    fn unary_naturals_have_no_maximum() {
        let p = pres("unary-naturals");
        assert!(sentence(&p, "forall x exists y (x < y)"));
        assert!(!sentence(&p, "exists x (x < x)"));
        assert!(sentence(&p, "exists x forall y (x < y | x = y)"));
        assert!(!sentence(&p, "exists x forall y (y < x | x = y)"));
    }

    #[test]
    fn word_order_is_total() {
        let p = pres("word-order");
        assert!(sentence(&p, "forall x forall y (x<y | y<x | x=y)"));
        assert!(!sentence(&p, "exists x (x < x)"));
        assert!(sentence(&p, "forall x forall y forall z (x < y & y < z -> x < z)"));
    }

    #[test]
    fn open_formula_defines_a_relation() {
        let p = pres("unary-naturals");
        let ev = FoEvaluator::new(&p).unwrap();
        let d = ev.define(&Formula::parse("exists y (y < x)").unwrap()).unwrap();
        assert_eq!(d.vars, vec!["x".to_string()]);
        let zero = OrdinalWord::empty(1, 1);
        let two = OrdinalWord::parse("a@0, a@1", None, 1).unwrap();
        assert!(!ev.holds(&d, &[&zero]).unwrap());
        assert!(ev.holds(&d, &[&two]).unwrap());
        let w = ev.witness(&d).unwrap();
        assert!(p.in_domain(&w.elems[0]) && !w.elems[0].is_empty());
    }

    #[test]
    fn errors() {
        let p = pres("unary-naturals");
        assert!(matches!(fo_eval_str(&p, "exists x R(x)"), Err(FoError::UnknownRelation(_))));
        assert!(fo_eval_str(&p, "exists x <(x)").is_err());
        assert!(matches!(fo_eval_str(&p, "exists^inf x (x = x)"), Err(FoError::Parse(FormulaError::InfiniteQuantifier))));
    }

    #[test]
    fn agrees_with_bounded_search() {
        let p = pres("unary-naturals");
        let positions: Vec<_> = (0..6).map(|i| ord(&i.to_string())).collect();
        let universe = words_over(1, p.sigma(), &positions);
        let f = Formula::parse("exists y (x < y & exists z (y < z))").unwrap();
        let ev = FoEvaluator::new(&p).unwrap();
        let d = ev.define(&f).unwrap();
        for x in universe.iter().filter(|w| p.in_domain(w)) {
            let mut env = BTreeMap::from([("x".to_string(), x.clone())]);
            // Unary numbers up to 3 have witnesses inside the universe.
            if x.entries().len() <= 3 {
                assert_eq!(ev.holds(&d, &[x]).unwrap(), eval_bounded(&p, &f, &universe, &mut env).unwrap(), "{x}");
            }
        }
        let rep = projection_agreement(&p, &universe).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert!(rep.confirmed_outside > 0);
    }
}
