use alloc::vec::Vec;

use super::series::LimitLinearSeries;
use super::ChainError;
use crate::elliptic::{BundleOnComponent, SectionSymbol, VanishingTable};

/// A limit series twisted at the nodes so that `C_i` carries degree `d'_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Redistribution {
    pub rank: u32,
    pub degree: i64,
    pub target_degrees: Vec<i64>,
    /// `a_i` with `d'_i = a_i r + dbar_i`.
    pub shifts: Vec<i64>,
    /// `dbar_i = d_i - a r`.
    pub residues: Vec<i64>,
    /// `sum_{j<i} a_j`: minimal order at `P_i` of a section alive on `C_i`.
    pub p_thresholds: Vec<i64>,
    /// `sum_{j>i} a_j`.
    pub q_thresholds: Vec<i64>,
    pub bundles: Vec<BundleOnComponent>,
    pub tables: Vec<VanishingTable>,
    /// Indices of the rows of `V_i` that survive on `C_i`.
    pub kept_rows: Vec<Vec<usize>>,
    pub empty_components: Vec<usize>,
}

impl Redistribution {
    /// The twisted series with `a = 0`, when no row is lost on any component.
    pub fn series(&self, original: &LimitLinearSeries) -> Option<LimitLinearSeries> {
        if self.kept_rows.iter().any(|k| k.len() != original.dimension) {
            return None;
        }
        Some(LimitLinearSeries {
            a: 0,
            bundles: self.bundles.clone(),
            tables: self.tables.clone(),
            ..original.clone()
        })
    }
}

pub fn redistribute(s: &LimitLinearSeries, dprime: &[i64]) -> Result<Redistribution, ChainError> {
    let m = s.chain.components();
    if dprime.len() != m || s.bundles.len() != m || s.tables.len() != m {
        return Err(ChainError::ComponentCount { expected: m, got: dprime.len() });
    }
    let r = i64::from(s.rank);
    let total: i64 = dprime.iter().sum();
    if total != s.degree {
        return Err(ChainError::DegreeSum { expected: s.degree, got: total });
    }
    let degrees = s.component_degrees();
    for (i, (&t, &d)) in dprime.iter().zip(&degrees).enumerate() {
        if r == 0 || (t - d).rem_euclid(r) != 0 {
            return Err(ChainError::Congruence { component: i, target: t, degree: d, rank: s.rank });
        }
    }
    let residues: Vec<i64> = degrees.iter().map(|d| d - s.a * r).collect();
    let shifts: Vec<i64> = dprime.iter().zip(&residues).map(|(t, b)| (t - b) / r).collect();
    let sum_shift: i64 = shifts.iter().sum();
    let mut p_thresholds = Vec::with_capacity(m);
    let mut acc = 0;
    for &x in &shifts {
        p_thresholds.push(acc);
        acc += x;
    }
    let q_thresholds: Vec<i64> = (0..m).map(|i| sum_shift - p_thresholds[i] - shifts[i]).collect();

    let mut bundles = Vec::with_capacity(m);
    let mut tables = Vec::with_capacity(m);
    let mut kept_rows = Vec::with_capacity(m);
    for i in 0..m {
        let (tp, tq) = (p_thresholds[i], q_thresholds[i]);
        let e = s.bundles[i].twisted(tp, tq);
        let others = sum_shift - shifts[i];
        let rest_residues: i64 = residues.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b).sum();
        let rest_targets: i64 = dprime.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t).sum();
        let steps = [
            e.degree(),
            degrees[i] - others * r,
            residues[i] + s.a * r - others * r,
            s.degree - rest_residues - r * others,
            dprime[i],
        ];
        if steps.iter().any(|&x| x != steps[0]) || s.degree - rest_targets != dprime[i] {
            return Err(ChainError::IdentityChain { component: i, steps });
        }
        let mut rows = Vec::new();
        let mut kept = Vec::new();
        for (t, row) in s.tables[i].rows.iter().enumerate() {
            if row.ord_p >= tp && row.ord_q >= tq {
                kept.push(t);
                rows.push(SectionSymbol { ord_p: row.ord_p - tp, ord_q: row.ord_q - tq, ..*row });
            }
        }
        bundles.push(e);
        tables.push(VanishingTable::new(rows));
        kept_rows.push(kept);
    }
    let empty_components = (0..m).filter(|&i| tables[i].rows.is_empty()).collect();
    Ok(Redistribution {
        rank: s.rank,
        degree: s.degree,
        target_degrees: dprime.to_vec(),
        shifts,
        residues,
        p_thresholds,
        q_thresholds,
        bundles,
        tables,
        kept_rows,
        empty_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::canonical_series;

    #[test]
    fn canonical_single_peak() {
        let g = 5usize;
        let s = canonical_series(g).unwrap();
        let mut dp = alloc::vec![0i64; g];
        dp[0] = 2 * g as i64 - 2;
        let red = redistribute(&s, &dp).unwrap();
        assert_eq!(red.shifts, [2 * g as i64 - 2, 0, 0, 0, 0]);
        assert_eq!(red.tables[0].dimension(), g);
        assert_eq!(red.p_thresholds[1], 2 * g as i64 - 2);
        // only sections reaching order 2g-2 at P_i live on later components
        for i in 1..g {
            let n = s.tables[i].rows.iter().filter(|r| r.ord_p >= 2 * g as i64 - 2).count();
            assert_eq!(red.tables[i].dimension(), n);
        }
        assert_eq!(red.bundles.iter().map(BundleOnComponent::degree).collect::<Vec<_>>(), dp);
    }

    #[test]
    fn rejects_bad_targets() {
        let s = canonical_series(3).unwrap();
        assert!(matches!(redistribute(&s, &[4, 0, 1]), Err(ChainError::DegreeSum { .. })));
        assert!(matches!(redistribute(&s, &[4, 0]), Err(ChainError::ComponentCount { .. })));
    }

    #[test]
    fn own_degrees_are_identity_when_a_is_zero() {
        use crate::chain::{ChainCurve, GluingData, NodeGluing};
        use crate::elliptic::{Degree0Class, LineBundleClass, Slot};
        let line = |a, b, id| Slot::Line(LineBundleClass::with_twist(a, b, Degree0Class::generic(id)));
        let s = LimitLinearSeries {
            chain: ChainCurve::elliptic(2),
            rank: 1,
            degree: 3,
            dimension: 1,
            a: 0,
            bundles: alloc::vec![BundleOnComponent::new(alloc::vec![line(2, 0, 0)]), BundleOnComponent::new(alloc::vec![line(0, 1, 1)])],
            tables: alloc::vec![
                VanishingTable::new(alloc::vec![SectionSymbol::exact(0, 0, 1)]),
                VanishingTable::new(alloc::vec![SectionSymbol::exact(0, 0, 0)]),
            ],
            pairings: LimitLinearSeries::aligned_pairings(2, 1),
            gluing: GluingData { nodes: alloc::vec![NodeGluing::identity(1)] },
        };
        let red = redistribute(&s, &[2, 1]).unwrap();
        assert_eq!(red.series(&s).unwrap(), s);
    }
}
