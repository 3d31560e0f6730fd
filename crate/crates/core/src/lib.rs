pub mod automaton;
pub mod ordinal;
pub mod word;
pub mod oracle;
pub mod random;
pub mod constructions;
pub mod reduction;
pub mod par;
pub mod analysis;
pub mod suites;
