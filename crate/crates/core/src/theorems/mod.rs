//! End-to-end constructions: the Petri bound for `W^k_{r,d}` and surjectivity
//! of the product `H^0(K) (x) H^0(K (x) Tr0 E0) -> H^0(K^2 (x) Tr0 E0)`.

mod endo;
mod petri;
mod verdict;

pub use endo::{endo_build, endo_h0, onto_certificate, onto_pairs, twisted_series, EndoBuild, PoinParams};
pub use petri::{petri_build, petri_certificate, petri_pairs, PetriBuild, PetriCase, PetriParams};
pub use verdict::{
    DimensionAudit, DistributionAudit, SeriesSummary, Status, ThresholdAudit, Verdict, VerdictParams,
};

use crate::chain::ChainError;
use crate::elliptic::EllipticError;
use crate::independence::ProductError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoremError {
    #[error("parameters out of range: {0}")]
    Range(&'static str),
    #[error("hypothesis fails: {lhs} > {rhs} ({case})")]
    Hypothesis { case: &'static str, lhs: i64, rhs: i64 },
    #[error("construction breaks on component {component}: {reason}")]
    Inconsistent { component: usize, reason: &'static str },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Product(#[from] ProductError),
}
