//! Chains of elliptic curves and limit linear series on them.

mod canonical;
mod curve;
mod redistribute;
mod series;
mod stability;
mod tableaux;

pub(crate) mod propagate;

pub use canonical::{canonical_class, canonical_series};
pub use curve::{ChainCurve, ComponentKind, GluingData, NodeGluing};
pub use redistribute::{redistribute, Redistribution};
pub use series::{
    validate_lls, validate_rank1, LimitLinearSeries, NodeRank1, Rank1Report, StructuralIssue,
    ValidationReport,
};
pub use stability::{check_stability, StabilityVerdict};
pub use tableaux::{count_tableaux, for_each_tableau, hook_length_count, Tableau};

use crate::elliptic::EllipticError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("genus {0} is below the minimum of 2")]
    GenusTooSmall(i64),
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("target degrees sum to {got}, expected {expected}")]
    DegreeSum { expected: i64, got: i64 },
    #[error("component {component}: target {target} is not congruent to {degree} mod {rank}")]
    Congruence { component: usize, target: i64, degree: i64, rank: u32 },
    #[error("component {component}: degree identity chain breaks: {steps:?}")]
    IdentityChain { component: usize, steps: [i64; 5] },
    #[error("series has rank {0}, expected rank 1")]
    NotRankOne(u32),
    #[error("series is structurally invalid: {0}")]
    Structural(StructuralIssue),
    #[error("tableau shape {rows}x{cols} is negative")]
    TableauShape { rows: i64, cols: i64 },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}
