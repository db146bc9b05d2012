use alloc::vec::Vec;

use super::product::{ProductAspect, ProductSection};
use crate::chain::Redistribution;

/// Whether a product restricts to a nonzero section of the twisted bundle on a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Liveness {
    Alive,
    Dead,
    /// A lower-bound order sits below the threshold.
    Unknown,
}

impl Liveness {
    pub fn of(x: &ProductAspect, tp: i64, tq: i64) -> Liveness {
        let below = |ord: i64, t: i64, exact: bool| match (ord >= t, exact) {
            (true, _) => Some(false),
            (false, true) => Some(true),
            (false, false) => None,
        };
        match (below(x.ord_p, tp, x.exact_p), below(x.ord_q, tq, x.exact_q)) {
            (Some(true), _) | (_, Some(true)) => Liveness::Dead,
            (Some(false), Some(false)) => Liveness::Alive,
            _ => Liveness::Unknown,
        }
    }
}

impl ProductSection {
    pub fn liveness(&self, redist: &Redistribution) -> Vec<Liveness> {
        self.aspects
            .iter()
            .enumerate()
            .map(|(i, x)| Liveness::of(x, redist.p_thresholds[i], redist.q_thresholds[i]))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Discriminator {
    /// No other candidate on this component shares the slot.
    Slot,
    /// Candidates sharing the slot have pairwise distinct exact `P`-orders.
    Order,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Survivor {
    pub product: usize,
    pub slot: usize,
    /// `P`-order in the twisted bundle.
    pub ord_p: i64,
    pub discriminator: Discriminator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pass {
    pub component: usize,
    /// Products whose coefficient is still free when the pass starts.
    pub undetermined: Vec<usize>,
    pub survivors: Vec<Survivor>,
    /// Undetermined products of unknown liveness: discriminated but not eliminated.
    pub unresolved: Vec<usize>,
    /// Coefficients forced to zero by this pass.
    pub eliminated: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Certificate {
    pub products: usize,
    pub passes: Vec<Pass>,
}

impl Certificate {
    pub fn eliminated(&self) -> usize {
        self.passes.iter().map(|p| p.eliminated.len()).sum()
    }

    /// Re-runs the elimination and checks the recorded trace against it and
    /// against the certificate invariants.
    pub fn audit(&self, products: &[ProductSection], redist: &Redistribution) -> bool {
        let Ok(replay) = certify_independence(products, redist) else { return false };
        if replay != *self {
            return false;
        }
        let mut seen = alloc::vec![0u32; products.len()];
        for pass in &self.passes {
            for &x in &pass.eliminated {
                seen[x] += 1;
            }
            let mut cands: Vec<ProductAspect> =
                pass.survivors.iter().map(|s| products[s.product].aspects[pass.component]).collect();
            cands.extend(pass.unresolved.iter().map(|&x| products[x].aspects[pass.component]));
            if first_clash(&cands).is_some() {
                return false;
            }
        }
        seen.iter().all(|&n| n == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("products carry {products} components, redistribution has {redist}")]
    ComponentCount { products: usize, redist: usize },
    #[error("component {component}: products {first} and {second} share slot {slot} without distinct exact P-orders")]
    NotDiscriminated { component: usize, first: usize, second: usize, slot: usize },
    #[error("{} products never eliminated", remaining.len())]
    Incomplete { remaining: Vec<usize> },
}

/// First pair of candidates that share a slot without distinct exact `P`-orders.
fn first_clash(cands: &[ProductAspect]) -> Option<(usize, usize)> {
    for i in 0..cands.len() {
        for j in 0..i {
            let (x, y) = (&cands[i], &cands[j]);
            if x.slot == y.slot && !(x.exact_p && y.exact_p && x.ord_p != y.ord_p) {
                return Some((j, i));
            }
        }
    }
    None
}

/// Left-to-right elimination: on each component the products that are alive
/// and still undetermined must be pairwise discriminated, and their
/// coefficients are then forced to zero.
pub fn certify_independence(
    products: &[ProductSection],
    redist: &Redistribution,
) -> Result<Certificate, CertifyError> {
    let m = redist.p_thresholds.len();
    if let Some(p) = products.iter().find(|p| p.aspects.len() != m) {
        return Err(CertifyError::ComponentCount { products: p.aspects.len(), redist: m });
    }
    let mut open: Vec<usize> = (0..products.len()).collect();
    let mut passes = Vec::with_capacity(m);
    for i in 0..m {
        let (tp, tq) = (redist.p_thresholds[i], redist.q_thresholds[i]);
        let mut alive = Vec::new();
        let mut unresolved = Vec::new();
        for &x in &open {
            match Liveness::of(&products[x].aspects[i], tp, tq) {
                Liveness::Alive => alive.push(x),
                Liveness::Unknown => unresolved.push(x),
                Liveness::Dead => {}
            }
        }
        let ids: Vec<usize> = alive.iter().chain(&unresolved).copied().collect();
        let cands: Vec<ProductAspect> = ids.iter().map(|&x| products[x].aspects[i]).collect();
        if let Some((a, b)) = first_clash(&cands) {
            return Err(CertifyError::NotDiscriminated {
                component: i,
                first: ids[a],
                second: ids[b],
                slot: cands[a].slot,
            });
        }
        let survivors = alive
            .iter()
            .map(|&x| {
                let asp = products[x].aspects[i];
                let shared = cands.iter().filter(|c| c.slot == asp.slot).count() > 1;
                Survivor {
                    product: x,
                    slot: asp.slot,
                    ord_p: asp.ord_p - tp,
                    discriminator: if shared { Discriminator::Order } else { Discriminator::Slot },
                }
            })
            .collect();
        let undetermined = open.clone();
        open.retain(|x| !alive.contains(x));
        passes.push(Pass { component: i, undetermined, survivors, unresolved, eliminated: alive });
    }
    if !open.is_empty() {
        return Err(CertifyError::Incomplete { remaining: open });
    }
    Ok(Certificate { products: products.len(), passes })
}
