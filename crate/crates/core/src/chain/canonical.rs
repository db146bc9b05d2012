use alloc::vec::Vec;

use super::curve::{ChainCurve, GluingData, NodeGluing};
use super::propagate::line_chain;
use super::series::LimitLinearSeries;
use super::ChainError;
use crate::elliptic::{BundleOnComponent, LineBundleClass, Slot, VanishingTable};

/// `L_i = O(2(i-1) P_i + 2(g-i) Q_i)` on `C_i`.
pub fn canonical_class(g: i64, i: i64) -> LineBundleClass {
    LineBundleClass::new(2 * (i - 1), 2 * (g - i))
}

/// The canonical limit linear series on a chain of `g` elliptic curves.
pub fn canonical_series(g: usize) -> Result<LimitLinearSeries, ChainError> {
    let gi = g as i64;
    if gi < 2 {
        return Err(ChainError::GenusTooSmall(gi));
    }
    let classes: Vec<LineBundleClass> = (1..=gi).map(|i| canonical_class(gi, i)).collect();
    let start: Vec<i64> = (0..gi).collect();
    let rows = line_chain(&classes, &start, 2 * gi - 2)?;
    Ok(LimitLinearSeries {
        chain: ChainCurve::elliptic(g),
        rank: 1,
        degree: 2 * gi - 2,
        dimension: g,
        a: 2 * gi - 2,
        bundles: classes.into_iter().map(|l| BundleOnComponent::new(alloc::vec![Slot::Line(l)])).collect(),
        tables: rows.into_iter().map(VanishingTable::new).collect(),
        pairings: LimitLinearSeries::aligned_pairings(g, g),
        gluing: GluingData { nodes: (1..g).map(|_| NodeGluing::identity(1)).collect() },
    })
}
