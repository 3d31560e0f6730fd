//! Reduction of ordinal automata on finite-support words to classical
//! automata over gap-class symbols, and first-order evaluation on top of it.

pub mod fo;
pub mod formula;
pub mod gapclass;
pub mod nfa;
pub mod presentation;

pub use gapclass::{ClassContext, GapClass};
pub use nfa::{AbstractNfa, NfaError, Symbol};
pub use presentation::{standard_presentations, Presentation, PresentationError, RelationDef};
pub use formula::{Formula, FormulaError};
pub use fo::{eval_bounded, fo_eval, fo_eval_str, projection_agreement, Defined, FoError, FoEvaluator, FoResult, ProjectionReport, Witness};
