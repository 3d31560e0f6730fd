//! Sum-of-box decompositions of parameter-defined subgraphs, checked
//! extensionally on a bounded universe of words.
//!
//! The shape is cut into segments `L, z_0, ..., z_1, R`. Two words are
//! equivalent on a segment when the parameter automaton and the edge
//! automaton (reading the word against itself) have the same behavior
//! there; the sum classes are the products of these equivalences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use super::AnalysisError;
use crate::automaton::{OrdinalAutomaton, Relation};
use crate::ordinal::Ordinal;
use crate::par;
use crate::random::words_over;
use crate::reduction::Presentation;
use crate::word::{convolve, shape_ordinal, OrdinalWord};

/// Behavior of one segment component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentSignature {
    /// Parameter automaton on `x ⊗ p ⊗ o`.
    pub param: Relation,
    /// Edge automaton on `x ⊗ x ⊗ o`.
    pub edge: Relation,
}

#[derive(Clone, Debug)]
pub struct DecomposeInput<'a> {
    pub presentation: &'a Presentation,
    /// Binary relation of the presentation used as the edge set.
    pub edge: String,
    pub param: &'a OrdinalAutomaton,
    pub p: OrdinalWord,
    /// Increasing cuts strictly inside the shape.
    pub boundaries: Vec<Ordinal>,
    /// Candidate support positions; every word with support inside is enumerated.
    pub positions: Vec<Ordinal>,
    /// Automaton used for signatures and colours. Defaults to the edge
    /// relation's own automaton; a different one serves as a negative control.
    pub colouring: Option<&'a OrdinalAutomaton>,
}

#[derive(Clone, Debug)]
pub struct SumClass {
    pub key: Vec<SegmentSignature>,
    /// Indices into [`Decomposition::vertices`].
    pub members: Vec<usize>,
    /// Per segment, indices into [`Decomposition::segment_words`] of the box factor.
    pub factors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub segments: Vec<(Ordinal, Ordinal)>,
    pub universe: usize,
    /// The vertices `V_p`: domain words accepted with the parameter.
    pub vertices: Vec<OrdinalWord>,
    /// Per segment, all universe words supported in the segment.
    pub segment_words: Vec<Vec<OrdinalWord>>,
    /// Per segment, the signature of each segment word.
    pub segment_sigs: Vec<Vec<SegmentSignature>>,
    /// Per vertex, its component index in each segment.
    pub components: Vec<Vec<usize>>,
    pub classes: Vec<SumClass>,
    /// `|Q|² + 2|Q_E|²`, the base-2 logarithm of the class bound.
    pub class_bound_log2: usize,
    presentation: Presentation,
    edge: String,
    param: OrdinalAutomaton,
    colouring: OrdinalAutomaton,
    p: OrdinalWord,
}

fn join(parts: &[&OrdinalWord]) -> OrdinalWord {
    let first = parts[0];
    let entries = parts.iter().flat_map(|w| w.entries().iter().cloned());
    OrdinalWord::new(first.shape(), first.width(), entries).expect("disjoint segments")
}

impl Decomposition {
    pub fn num_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn colouring(&self) -> &OrdinalAutomaton {
        &self.colouring
    }

    fn read(&self, args: &[&OrdinalWord]) -> OrdinalWord {
        self.presentation.with_oracle(args)
    }

    /// Edge verdict from the presentation itself.
    pub fn edge_holds(&self, x: &OrdinalWord, y: &OrdinalWord) -> bool {
        self.presentation.holds(&self.edge, &[x, y]).unwrap_or(false)
    }

    /// Colour `c_j(x_j, y_j)`: the colouring automaton's behavior on segment `j`.
    pub fn colour(&self, j: usize, x: &OrdinalWord, y: &OrdinalWord) -> Relation {
        let (lo, hi) = &self.segments[j];
        self.colouring.behavior(&self.read(&[x, y]), lo, hi).expect("shapes agree")
    }

    pub fn in_vertices(&self, w: &OrdinalWord) -> bool {
        self.presentation.in_domain(w)
            && self
                .param
                .accepts(&self.read(&[w, &self.p]))
                .unwrap_or(false)
    }

    fn signature_of(&self, j: usize, x: &OrdinalWord) -> SegmentSignature {
        signature(&self.param, &self.colouring, &self.presentation, &self.p, &self.segments[j], x)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "segments: {}", self.segments.len());
        for (i, (lo, hi)) in self.segments.iter().enumerate() {
            let _ = writeln!(
                s,
                "segment.{i}: [{lo}, {hi}) words={} classes={}",
                self.segment_words[i].len(),
                self.segment_sigs[i].iter().collect::<BTreeSet<_>>().len()
            );
        }
        let _ = writeln!(s, "universe: {}", self.universe);
        let _ = writeln!(s, "vertices: {}", self.vertices.len());
        let _ = writeln!(s, "sum_classes: {}", self.classes.len());
        let _ = writeln!(s, "class_bound: 2^{}", self.class_bound_log2);
        for (i, c) in self.classes.iter().enumerate() {
            let sizes: Vec<String> = c.factors.iter().map(|f| f.len().to_string()).collect();
            let _ = writeln!(s, "class.{i}: members={} box={}", c.members.len(), sizes.join("x"));
        }
        s
    }
}

fn signature(
    param: &OrdinalAutomaton,
    colouring: &OrdinalAutomaton,
    pres: &Presentation,
    p: &OrdinalWord,
    seg: &(Ordinal, Ordinal),
    x: &OrdinalWord,
) -> SegmentSignature {
    let (lo, hi) = seg;
    SegmentSignature {
        param: param.behavior(&pres.with_oracle(&[x, p]), lo, hi).expect("shapes agree"),
        edge: colouring.behavior(&pres.with_oracle(&[x, x]), lo, hi).expect("shapes agree"),
    }
}

pub fn decompose(input: &DecomposeInput<'_>) -> Result<Decomposition, AnalysisError> {
    let pres = input.presentation;
    let k = pres.shape();
    let rel = pres
        .relation(&input.edge)
        .ok_or_else(|| AnalysisError::Input(format!("no relation {:?}", input.edge)))?;
    if rel.arity != 2 {
        return Err(AnalysisError::Input(format!("relation {} is not binary", input.edge)));
    }
    if input.p.shape() != k {
        return Err(AnalysisError::Input("parameter shape differs from the presentation".into()));
    }
    let colouring = input.colouring.unwrap_or(&rel.automaton).clone();
    if colouring.width() != rel.automaton.width() {
        return Err(AnalysisError::Input("colouring automaton reads a different width".into()));
    }
    let end = shape_ordinal(k);
    let b = &input.boundaries;
    if b.windows(2).any(|w| w[0] >= w[1]) || b.iter().any(|c| c.is_zero() || c >= &end) {
        return Err(AnalysisError::Input("boundaries must increase strictly inside the shape".into()));
    }
    if let (Some(first), Some(last)) = (b.first(), b.last()) {
        if input.p.support().any(|x| x < first || x >= last) {
            return Err(AnalysisError::Input(format!(
                "parameter support must lie in [{first}, {last})"
            )));
        }
    }
    let mut cuts = vec![Ordinal::zero()];
    cuts.extend(b.iter().cloned());
    cuts.push(end);
    let segments: Vec<(Ordinal, Ordinal)> = cuts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();

    let mut positions = input.positions.clone();
    positions.sort();
    positions.dedup();
    if positions.iter().any(|x| x >= &segments.last().unwrap().1) {
        return Err(AnalysisError::Input("universe position outside the shape".into()));
    }
    let segment_words: Vec<Vec<OrdinalWord>> = segments
        .iter()
        .map(|(lo, hi)| {
            let ps: Vec<Ordinal> = positions.iter().filter(|x| *x >= lo && *x < hi).cloned().collect();
            words_over(k, pres.sigma(), &ps)
        })
        .collect();
    let segment_sigs: Vec<Vec<SegmentSignature>> = segments
        .iter()
        .zip(&segment_words)
        .map(|(seg, ws)| par::map(ws, |x| signature(input.param, &colouring, pres, &input.p, seg, x)))
        .collect();

    // Every combination of segment words is a universe word.
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for ws in &segment_words {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..ws.len()).map(move |i| {
                    let mut d = c.clone();
                    d.push(i);
                    d
                })
            })
            .collect();
    }
    let universe = combos.len();
    let built: Vec<(Vec<usize>, OrdinalWord)> = combos
        .into_iter()
        .map(|c| {
            let parts: Vec<&OrdinalWord> = c.iter().enumerate().map(|(j, &i)| &segment_words[j][i]).collect();
            let w = join(&parts);
            (c, w)
        })
        .collect();
    let keep = par::map(&built, |(_, w)| {
        pres.in_domain(w) && input.param.accepts(&pres.with_oracle(&[w, &input.p])).unwrap_or(false)
    });
    let mut vertices = Vec::new();
    let mut components = Vec::new();
    for ((c, w), k) in built.into_iter().zip(keep) {
        if k {
            vertices.push(w);
            components.push(c);
        }
    }

    let mut by_key: BTreeMap<Vec<SegmentSignature>, Vec<usize>> = BTreeMap::new();
    for (v, c) in components.iter().enumerate() {
        let key: Vec<SegmentSignature> = c.iter().enumerate().map(|(j, &i)| segment_sigs[j][i].clone()).collect();
        by_key.entry(key).or_default().push(v);
    }
    let classes = by_key
        .into_iter()
        .map(|(key, members)| {
            let factors = key
                .iter()
                .enumerate()
                .map(|(j, sig)| (0..segment_words[j].len()).filter(|&i| &segment_sigs[j][i] == sig).collect())
                .collect();
            SumClass { key, members, factors }
        })
        .collect();
    let q = input.param.num_states();
    let qe = colouring.num_states();
    Ok(Decomposition {
        segments,
        universe,
        vertices,
        segment_words,
        segment_sigs,
        components,
        classes,
        class_bound_log2: q * q + 2 * qe * qe,
        presentation: pres.clone(),
        edge: input.edge.clone(),
        param: input.param.clone(),
        colouring,
        p: input.p.clone(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct TameBoxVerdict {
    pub ok: bool,
    pub class_count_ok: bool,
    pub pairs_checked: usize,
    pub replacements_checked: usize,
    pub restrictions_checked: usize,
    pub counterexamples: Vec<String>,
}

impl TameBoxVerdict {
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verdict: {}", if self.ok { "tame" } else { "not tame" });
        let _ = writeln!(s, "class_count_within_bound: {}", self.class_count_ok);
        let _ = writeln!(s, "pairs_checked: {}", self.pairs_checked);
        let _ = writeln!(s, "replacements_checked: {}", self.replacements_checked);
        let _ = writeln!(s, "restrictions_checked: {}", self.restrictions_checked);
        let _ = writeln!(s, "counterexamples: {}", self.counterexamples.len());
        for c in self.counterexamples.iter().take(5) {
            let _ = writeln!(s, "counterexample: {c}");
        }
        s
    }
}

const MAX_COUNTEREXAMPLES: usize = 20;

/// Checks that the colours determine the edges, that each sum class is the
/// full product of its box factors, and that edges inside one coordinate
/// follow the context set `M_i`.
pub fn verify_tame_box(d: &Decomposition) -> TameBoxVerdict {
    let mut v = TameBoxVerdict {
        class_count_ok: d.class_bound_log2 >= 64 || (d.classes.len() as u64) <= 1u64 << d.class_bound_log2,
        ..Default::default()
    };
    let n = d.vertices.len();
    let segs = d.num_segments();
    let col = &d.colouring;

    // (a) Colours determine the edge relation.
    let rows: Vec<usize> = (0..n).collect();
    let results = par::map(&rows, |&i| {
        let x = &d.vertices[i];
        let mut out = Vec::new();
        for j in 0..n {
            let y = &d.vertices[j];
            let colours: Vec<Relation> = (0..segs).map(|s| d.colour(s, x, y)).collect();
            let mut cur = col.initial();
            for c in &colours {
                cur = c.image(cur);
            }
            let by_colours = !cur.intersect(col.final_states()).is_empty();
            out.push((j, colours, by_colours, d.edge_holds(x, y)));
        }
        out
    });
    let mut seen: HashMap<Vec<Relation>, (bool, usize, usize)> = HashMap::new();
    for (i, row) in results.into_iter().enumerate() {
        for (j, colours, by_colours, actual) in row {
            v.pairs_checked += 1;
            if by_colours != actual && v.counterexamples.len() < MAX_COUNTEREXAMPLES {
                v.counterexamples.push(format!(
                    "edge({{{}}}, {{{}}}) is {actual} but the colours give {by_colours}",
                    d.vertices[i], d.vertices[j]
                ));
            }
            match seen.get(&colours) {
                Some(&(other, a, b)) if other != actual => {
                    if v.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        v.counterexamples.push(format!(
                            "pairs ({{{}}}, {{{}}}) and ({{{}}}, {{{}}}) share colours but differ on the edge",
                            d.vertices[a], d.vertices[b], d.vertices[i], d.vertices[j]
                        ));
                    }
                }
                Some(_) => {}
                None => {
                    seen.insert(colours, (actual, i, j));
                }
            }
        }
    }

    // (b) Sum classes are full products of their factors.
    let index: HashMap<&Vec<usize>, usize> = d.components.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let class_of: HashMap<usize, usize> = d
        .classes
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.members.iter().map(move |&m| (m, ci)))
        .collect();
    for (ci, c) in d.classes.iter().enumerate() {
        for &m in &c.members {
            for s in 0..segs {
                for &alt in &c.factors[s] {
                    v.replacements_checked += 1;
                    let mut comp = d.components[m].clone();
                    comp[s] = alt;
                    let ok = index.get(&comp).is_some_and(|vi| class_of.get(vi) == Some(&ci));
                    if !ok && v.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        v.counterexamples.push(format!(
                            "replacing segment {s} of {{{}}} by {{{}}} leaves class {ci}",
                            d.vertices[m], d.segment_words[s][alt]
                        ));
                    }
                }
            }
        }
    }

    // Edges inside one coordinate, with the others fixed to a representative.
    for c in &d.classes {
        let Some(&rep) = c.members.first() else { continue };
        let w = &d.vertices[rep];
        let ww = d.read(&[w, w]);
        for s in 0..segs {
            let (lo, hi) = &d.segments[s];
            let left = col.behavior(&ww, &Ordinal::zero(), lo).expect("shapes agree").image(col.initial());
            let right = col
                .behavior(&ww, hi, &shape_ordinal(w.shape()))
                .expect("shapes agree")
                .preimage(col.final_states());
            let place = |alt: usize| {
                let mut comp = d.components[rep].clone();
                comp[s] = alt;
                let parts: Vec<&OrdinalWord> = comp.iter().enumerate().map(|(j, &i)| &d.segment_words[j][i]).collect();
                join(&parts)
            };
            for &a in &c.factors[s] {
                for &b in &c.factors[s] {
                    v.restrictions_checked += 1;
                    let (xa, xb) = (&d.segment_words[s][a], &d.segment_words[s][b]);
                    let by_m = d.colour(s, xa, xb).meets(left, right);
                    let actual = d.edge_holds(&place(a), &place(b));
                    if by_m != actual && v.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        v.counterexamples.push(format!(
                            "segment {s} of class with representative {{{w}}}: edge({{{xa}}}, {{{xb}}}) is {actual} but M gives {by_m}"
                        ));
                    }
                }
            }
        }
    }
    v.ok = v.counterexamples.is_empty() && v.class_count_ok;
    v
}

/// Sanity check of a signature against a freshly computed one.
pub fn recheck_signature(d: &Decomposition, s: usize, i: usize) -> bool {
    d.signature_of(s, &d.segment_words[s][i]) == d.segment_sigs[s][i]
}

/// Variants of `a` with one successor transition added or removed, in a
/// fixed order.
pub fn single_flips(a: &OrdinalAutomaton) -> impl Iterator<Item = OrdinalAutomaton> + '_ {
    let n = a.num_states();
    let mut letters = vec![a.alphabet().blank()];
    letters.extend(a.alphabet().letters().iter().cloned());
    let cands: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|p| (0..letters.len()).flat_map(move |l| (0..n).map(move |q| (p, l, q))))
        .collect();
    cands.into_iter().filter_map(move |(p, l, q)| {
        let mut raw = a.to_raw();
        let t = (a.state_name(p).to_string(), letters[l].clone(), a.state_name(q).to_string());
        if let Some(i) = raw.succ.iter().position(|x| *x == t) {
            raw.succ.remove(i);
        } else {
            raw.succ.push(t);
        }
        raw.build().ok()
    })
}

/// The first single flip of `a` that changes acceptance on some pair of `words`.
pub fn visible_flip(a: &OrdinalAutomaton, words: &[OrdinalWord]) -> Option<OrdinalAutomaton> {
    single_flips(a).find(|m| {
        words.iter().any(|x| {
            words.iter().any(|y| {
                let xy = convolve(&[x, y]).expect("same shape");
                a.accepts(&xy).ok() != m.accepts(&xy).ok()
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::interval_automaton;
    use crate::ordinal::ord;
    use crate::reduction::standard_presentations;
    use crate::word::Alphabet;

    fn word_order() -> Presentation {
        standard_presentations().into_iter().find(|(n, _)| *n == "word-order").unwrap().1
    }

    fn positions() -> Vec<Ordinal> {
        ["1", "w", "w+1", "w*2", "w*3+1"].iter().map(|s| ord(s)).collect()
    }

    fn param_word(y1: &str, y2: &str) -> OrdinalWord {
        let a = OrdinalWord::parse(y1, None, 2).unwrap();
        let b = OrdinalWord::parse(y2, None, 2).unwrap();
        convolve(&[&a, &b]).unwrap()
    }

    #[test]
    fn interval_subgraph_is_tame() {
        let p = word_order();
        let param = interval_automaton(&Alphabet::from_symbols(&["a"])).unwrap();
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: param_word("a@w", "a@w*2"),
            boundaries: vec![ord("w"), ord("w*3")],
            positions: positions(),
            colouring: None,
        };
        let d = decompose(&input).unwrap();
        assert_eq!(d.num_segments(), 3);
        assert!(!d.vertices.is_empty());
        assert!(recheck_signature(&d, 1, 0));
        let v = verify_tame_box(&d);
        assert!(v.ok, "{}", v.report());
        assert!(v.pairs_checked > 0 && v.replacements_checked > 0 && v.restrictions_checked > 0);
    }

    #[test]
    fn corrupted_colouring_is_caught() {
        let p = word_order();
        let param = interval_automaton(&Alphabet::from_symbols(&["a"])).unwrap();
        let pos = positions();
        let edge = &p.relation("<").unwrap().automaton;
        let words = words_over(2, p.sigma(), &pos);
        let bad = visible_flip(edge, &words).unwrap();
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: param_word("a@w", "a@w*2"),
            boundaries: vec![ord("w"), ord("w*3")],
            positions: pos,
            colouring: Some(&bad),
        };
        let v = verify_tame_box(&decompose(&input).unwrap());
        assert!(!v.ok);
        assert!(!v.counterexamples.is_empty());
    }

    #[test]
    fn single_segment() {
        let p = word_order();
        let param = interval_automaton(&Alphabet::from_symbols(&["a"])).unwrap();
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: param_word("", "a@w*3+1"),
            boundaries: Vec::new(),
            positions: positions(),
            colouring: None,
        };
        let d = decompose(&input).unwrap();
        assert_eq!(d.num_segments(), 1);
        assert!(verify_tame_box(&d).ok);
    }

    #[test]
    fn rejects_parameters_outside_the_middle() {
        let p = word_order();
        let param = interval_automaton(&Alphabet::from_symbols(&["a"])).unwrap();
        let input = DecomposeInput {
            presentation: &p,
            edge: "<".into(),
            param: &param,
            p: param_word("a@0", "a@w"),
            boundaries: vec![ord("w"), ord("w*3")],
            positions: positions(),
            colouring: None,
        };
        assert!(decompose(&input).is_err());
    }
}
