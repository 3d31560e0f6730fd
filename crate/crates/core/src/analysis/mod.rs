//! Desk-scale checks: decompositions, forest ranks, growth sets and
//! stabilization of gap relations.

pub mod decompose;
pub mod forest;
pub mod growth;
pub mod stabilization;

use thiserror::Error;

pub use decompose::{decompose, verify_tame_box, DecomposeInput, Decomposition, SegmentSignature, SumClass, TameBoxVerdict};
pub use forest::{finite_forest_rank, inf_rank, parse_forest, ForestRanks, InfRank};
pub use growth::{growth_audit, growth_sets, GrowthAudit, GrowthSets};
pub use stabilization::{stabilization_check, StabilizationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("{0}")]
    Input(String),
    #[error("order has a cycle through nodes {0} and {1}")]
    Cycle(usize, usize),
    #[error("{0} has transfinite degree")]
    Transfinite(String),
}
