//! Divisor classes, bundles and section spaces on one elliptic component with
//! two generic marked points `P` and `Q`.

mod bundle;
mod class;
mod sections;

pub use bundle::{end_decomposition, h0_component, BundleOnComponent, IndecomposableSlot, Slot};
pub use class::{class_isomorphic, Degree0Class, LineBundleClass, TorsionSymbol};
pub use sections::{
    adapted_basis, atom_rows, section_basis, section_space, twist_sections, SectionBasis,
    SectionSymbol, VanishingTable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("torsion order must be at least 2, got {0}")]
    TorsionOrder(u32),
    #[error("line bundle of degree {0} has no section basis")]
    NonPositiveDegree(i64),
    #[error("section index {k} out of range for degree {degree}")]
    NominalOutOfRange { k: i64, degree: i64 },
    #[error("section space (u={u}, t={t}) invalid for degree {degree}: {reason}")]
    SectionRange { u: i64, t: i64, degree: i64, reason: &'static str },
    #[error("twist {alpha} outside 0..={d1}")]
    TwistRange { alpha: i64, d1: i64 },
    #[error("bundle is not a uniform sum of indecomposable slots")]
    NonUniform,
    #[error("slot of rank {rank} and degree {degree} is not an Atiyah atom")]
    NotCoprime { rank: u32, degree: i64 },
    #[error("tensor product of these slots is not a sum of line and atom slots")]
    UnsupportedTensor,
    #[error("{rows} sections exceed the {bound} available in slot {slot} at order {order}")]
    Filtration { slot: usize, order: i64, rows: usize, bound: i64 },
}
