//! Limit linear series of vector bundles on chains of elliptic curves.
//!
//! The crate models each elliptic component symbolically: divisor classes are
//! formal combinations of `P - Q`, free generic symbols and torsion symbols, and
//! sections are tracked by their vanishing orders at the two marked points.
//! On top of that sit the chain-level series, degree redistribution, product
//! sections with elimination certificates, a modular rank oracle, and the two
//! end-to-end pipelines in [`theorems`].

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chain;
pub mod elliptic;
pub mod independence;
pub mod theorems;

mod util;

pub use chain::{
    canonical_series, count_tableaux, for_each_tableau, redistribute, validate_lls, validate_rank1,
    ChainCurve, ComponentKind, GluingData, LimitLinearSeries, NodeGluing, Redistribution,
    Tableau, ValidationReport,
};
pub use elliptic::{
    class_isomorphic, end_decomposition, h0_component, section_basis, section_space,
    twist_sections, BundleOnComponent, Degree0Class, IndecomposableSlot, LineBundleClass,
    SectionSymbol, Slot, TorsionSymbol, VanishingTable,
};
pub use independence::{
    certify_independence, oracle_rank, product_sections, Certificate, OracleConfig, OracleReport,
    ProductSection,
};
pub use theorems::{
    endo_build, endo_h0, onto_certificate, petri_build, petri_certificate, PetriParams,
    PoinParams, Status, Verdict,
};
