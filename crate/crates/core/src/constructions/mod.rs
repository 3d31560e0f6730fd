//! Concrete automata, orders, encodings and trees.

mod encoding;
mod kb;
mod recognizers;
mod registry;
pub mod trees;
mod word_order;

pub use encoding::{dec_word, enc_ordinal, encoding_bound, EncodingError};
pub use kb::{kb_cmp, KbError};
pub use recognizers::{
    enc_successor, finite_word_recognizer, probe_state, rank_probe, unary_domain, unary_less,
    word_order_automaton, word_order_leq_automaton,
};
pub use registry::{
    enc_domain, generate, generate_with, interval_automaton, track_product, GenError, GENERATORS, PRODUCT_LIMIT,
};
pub use trees::{T0Node, TcNode, TreeError, TreeHandle, TreeKind};
pub use word_order::word_order_cmp;
