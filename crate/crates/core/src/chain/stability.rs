use alloc::vec::Vec;

use super::curve::{GluingData, NodeGluing};
use crate::elliptic::{BundleOnComponent, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StabilityVerdict {
    StableByCriterion,
    Inconclusive,
}

fn stable(e: &BundleOnComponent) -> bool {
    match e.slots.as_slice() {
        [Slot::Line(_)] => true,
        [Slot::Indecomposable(x)] => x.gcd() == 1,
        _ => false,
    }
}

fn semistable(e: &BundleOnComponent) -> bool {
    let Some(first) = e.slots.first() else { return false };
    let (d0, r0) = (first.degree(), i64::from(first.rank()));
    e.slots.iter().all(|s| s.degree() * r0 == d0 * i64::from(s.rank()))
        && e.slots.iter().all(|s| match s {
            Slot::Indecomposable(x) => x.gcd() == 1,
            Slot::Line(_) => true,
        })
}

/// Sufficient criterion for stability of a bundle on the chain.
///
/// `destabilizing[i]` lists the slots of `bundles[i]` that span destabilizing
/// subbundles; the criterion fails if the gluing matches two of them.
pub fn check_stability(
    bundles: &[BundleOnComponent],
    gluing: &GluingData,
    destabilizing: &[Vec<usize>],
) -> StabilityVerdict {
    if bundles.is_empty() || !bundles.iter().all(semistable) {
        return StabilityVerdict::Inconclusive;
    }
    if bundles.iter().any(stable) {
        return StabilityVerdict::StableByCriterion;
    }
    for (n, g) in gluing.nodes.iter().enumerate() {
        let NodeGluing::SlotMatching { map } = g else { continue };
        let (Some(here), Some(there)) = (destabilizing.get(n), destabilizing.get(n + 1)) else { continue };
        if here.iter().any(|&j| map.get(j).is_some_and(|k| there.contains(k))) {
            return StabilityVerdict::Inconclusive;
        }
    }
    StabilityVerdict::StableByCriterion
}
