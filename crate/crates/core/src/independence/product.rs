use alloc::vec::Vec;

use crate::chain::{ChainError, GluingData, LimitLinearSeries, NodeGluing};
use crate::elliptic::{BundleOnComponent, EllipticError, SectionSymbol, VanishingTable};

/// Restriction of a product section to one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductAspect {
    /// First slot of the block `slot_a (x) slot_b` in the expanded product bundle.
    pub slot: usize,
    /// Number of slots in that block.
    pub width: usize,
    pub ord_p: i64,
    pub ord_q: i64,
    pub exact_p: bool,
    pub exact_q: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductSection {
    /// Section indices in the two factor series.
    pub factors: (usize, usize),
    pub aspects: Vec<ProductAspect>,
}

/// The products together with the product series they live in.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductSeries {
    pub series: LimitLinearSeries,
    pub products: Vec<ProductSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("factor series live on different chains")]
    MismatchedChains,
    #[error("pair ({0}, {1}) names a section outside the factor series")]
    PairOutOfRange(usize, usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

fn glue(
    g: (&NodeGluing, &NodeGluing),
    blocks: (&[core::ops::Range<usize>], &[core::ops::Range<usize>]),
    nb: (usize, usize),
) -> NodeGluing {
    let (NodeGluing::SlotMatching { map: ma }, NodeGluing::SlotMatching { map: mb }) = g else {
        return NodeGluing::generic();
    };
    let (here, there) = blocks;
    let mut map = alloc::vec![0; here.last().map_or(0, |r| r.end)];
    for (sa, &ta) in ma.iter().enumerate() {
        for (sb, &tb) in mb.iter().enumerate() {
            let from = &here[sa * nb.0 + sb];
            let to = &there[ta * nb.1 + tb];
            if from.len() != to.len() {
                return NodeGluing::generic();
            }
            for (x, y) in from.clone().zip(to.clone()) {
                map[x] = y;
            }
        }
    }
    NodeGluing::SlotMatching { map }
}

/// Products `a_s (x) b_t` for the requested `(s, t)` pairs.
pub fn product_sections(
    a: &LimitLinearSeries,
    b: &LimitLinearSeries,
    pairs: &[(usize, usize)],
) -> Result<ProductSeries, ProductError> {
    if a.chain != b.chain {
        return Err(ProductError::MismatchedChains);
    }
    let ta = a.section_tracks()?;
    let tb = b.section_tracks()?;
    let m = a.chain.components();
    let mut bundles = Vec::with_capacity(m);
    let mut blocks = Vec::with_capacity(m);
    for (ea, eb) in a.bundles.iter().zip(&b.bundles) {
        let (e, bl) = ea.tensor(eb)?;
        bundles.push(e);
        blocks.push(bl);
    }
    let mut products = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        let (Some(x), Some(y)) = (ta.get(s), tb.get(t)) else {
            return Err(ProductError::PairOutOfRange(s, t));
        };
        let aspects = (0..m)
            .map(|i| {
                let (u, v): (&SectionSymbol, &SectionSymbol) = (&x[i], &y[i]);
                let block = &blocks[i][u.slot * b.bundles[i].slots.len() + v.slot];
                ProductAspect {
                    slot: block.start,
                    width: block.len(),
                    ord_p: u.ord_p + v.ord_p,
                    ord_q: u.ord_q + v.ord_q,
                    exact_p: u.exact_p && v.exact_p,
                    exact_q: u.exact_q && v.exact_q,
                }
            })
            .collect();
        products.push(ProductSection { factors: (s, t), aspects });
    }
    let rank = a.rank * b.rank;
    let pa = a.a + b.a;
    let total: i64 = bundles.iter().map(BundleOnComponent::degree).sum();
    let degree = total - i64::from(rank) * (m as i64 - 1) * pa;
    let tables = (0..m)
        .map(|i| {
            VanishingTable::new(
                products
                    .iter()
                    .map(|p: &ProductSection| {
                        let x = p.aspects[i];
                        SectionSymbol { slot: x.slot, ord_p: x.ord_p, ord_q: x.ord_q, exact_p: x.exact_p, exact_q: x.exact_q }
                    })
                    .collect(),
            )
        })
        .collect();
    let nodes = (0..m.saturating_sub(1))
        .map(|n| {
            glue(
                (&a.gluing.nodes[n], &b.gluing.nodes[n]),
                (&blocks[n], &blocks[n + 1]),
                (b.bundles[n].slots.len(), b.bundles[n + 1].slots.len()),
            )
        })
        .collect();
    let series = LimitLinearSeries {
        chain: a.chain.clone(),
        rank,
        degree,
        dimension: products.len(),
        a: pa,
        bundles,
        tables,
        pairings: LimitLinearSeries::aligned_pairings(m, products.len()),
        gluing: GluingData { nodes },
    };
    Ok(ProductSeries { series, products })
}
