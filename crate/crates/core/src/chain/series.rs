use alloc::vec::Vec;

use super::curve::{ChainCurve, ComponentKind, GluingData, NodeGluing};
use super::ChainError;
use crate::elliptic::{BundleOnComponent, SectionSymbol, Slot, VanishingTable};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitLinearSeries {
    pub chain: ChainCurve,
    pub rank: u32,
    pub degree: i64,
    pub dimension: usize,
    pub a: i64,
    pub bundles: Vec<BundleOnComponent>,
    pub tables: Vec<VanishingTable>,
    /// `pairings[i][t]` is the row of `V_{i+1}` paired with row `t` of `V_i`.
    pub pairings: Vec<Vec<usize>>,
    pub gluing: GluingData,
}

impl LimitLinearSeries {
    pub fn component_degrees(&self) -> Vec<i64> {
        self.bundles.iter().map(BundleOnComponent::degree).collect()
    }

    /// Identity pairings for tables listed in section order.
    pub fn aligned_pairings(components: usize, dimension: usize) -> Vec<Vec<usize>> {
        (1..components).map(|_| (0..dimension).collect()).collect()
    }

    /// For each global section, its row on every component, following the pairings.
    pub fn section_tracks(&self) -> Result<Vec<Vec<SectionSymbol>>, ChainError> {
        if let Some(issue) = structural_issues(self).into_iter().next() {
            return Err(ChainError::Structural(issue));
        }
        let mut tracks = Vec::with_capacity(self.dimension);
        for t in 0..self.dimension {
            let mut idx = t;
            let mut track = Vec::with_capacity(self.tables.len());
            for (i, table) in self.tables.iter().enumerate() {
                if i > 0 {
                    idx = self.pairings[i - 1][idx];
                }
                track.push(table.rows[idx]);
            }
            tracks.push(track);
        }
        Ok(tracks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "issue", rename_all = "snake_case"))]
pub enum StructuralIssue {
    ComponentCount { components: usize, bundles: usize, tables: usize },
    Dimension { component: usize, rows: usize },
    Rank { component: usize, rank: u32 },
    SlotIndex { component: usize, row: usize },
    NegativeOrder { component: usize, row: usize },
    /// Rows of one slot exceed the sections available with those orders.
    Overfull { component: usize, slot: usize, ord_p: i64, ord_q: i64 },
    /// Two rows of one line slot share a `P`-order.
    CoincidentRows { component: usize, slot: usize, ord_p: i64 },
    /// No section of the slot has these exact orders.
    ImpossibleOrders { component: usize, row: usize },
    Pairing { node: usize },
    Gluing { node: usize },
}

impl core::fmt::Display for StructuralIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub structural: Vec<StructuralIssue>,
    /// `sum d_i - r (M - 1) a = d`.
    pub degree_sum: bool,
    /// Paired rows satisfy `ord_{Q_i} + ord_{P_{i+1}} >= a` at every node.
    pub node_orders: bool,
    /// `a r <= d_i < (a + 1) r` on every elliptic component.
    pub degree_window: bool,
    pub failing_nodes: Vec<usize>,
    pub failing_components: Vec<usize>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.structural.is_empty() && self.degree_sum && self.node_orders && self.degree_window
    }
}

fn slot_checks(component: usize, slot_idx: usize, slot: &Slot, rows: &[(usize, SectionSymbol)], elliptic: bool, out: &mut Vec<StructuralIssue>) {
    let line = slot.rank() == 1;
    if line {
        for (i, (_, x)) in rows.iter().enumerate() {
            if rows[..i].iter().any(|(_, y)| y.ord_p == x.ord_p) {
                out.push(StructuralIssue::CoincidentRows { component, slot: slot_idx, ord_p: x.ord_p });
                return;
            }
        }
    }
    let h0 = |p: i64, q: i64| -> i64 {
        if elliptic {
            slot.twisted(p, q).h0()
        } else {
            (slot.degree() - i64::from(slot.rank()) * (p + q) + i64::from(slot.rank())).max(0)
        }
    };
    for (_, x) in rows {
        let (p, q) = (x.ord_p, x.ord_q);
        let count = rows.iter().filter(|(_, y)| y.ord_p >= p && y.ord_q >= q).count() as i64;
        if count > h0(p, q) {
            out.push(StructuralIssue::Overfull { component, slot: slot_idx, ord_p: p, ord_q: q });
            return;
        }
    }
    if !(line && elliptic) {
        return;
    }
    for &(row, x) in rows {
        let (p, q) = (x.ord_p, x.ord_q);
        let whole = h0(p, q);
        let bad = whole == 0
            || (x.exact_p && h0(p + 1, q) >= whole)
            || (x.exact_q && h0(p, q + 1) >= whole);
        if bad {
            out.push(StructuralIssue::ImpossibleOrders { component, row });
        }
    }
}

pub(crate) fn structural_issues(s: &LimitLinearSeries) -> Vec<StructuralIssue> {
    let mut out = Vec::new();
    let m = s.chain.components();
    if s.bundles.len() != m || s.tables.len() != m {
        out.push(StructuralIssue::ComponentCount { components: m, bundles: s.bundles.len(), tables: s.tables.len() });
        return out;
    }
    for (i, (e, v)) in s.bundles.iter().zip(&s.tables).enumerate() {
        if e.rank() != s.rank {
            out.push(StructuralIssue::Rank { component: i, rank: e.rank() });
        }
        if v.dimension() != s.dimension {
            out.push(StructuralIssue::Dimension { component: i, rows: v.dimension() });
        }
        let mut ok = true;
        for (t, r) in v.rows.iter().enumerate() {
            if r.slot >= e.slots.len() {
                out.push(StructuralIssue::SlotIndex { component: i, row: t });
                ok = false;
            } else if r.ord_p < 0 || r.ord_q < 0 {
                out.push(StructuralIssue::NegativeOrder { component: i, row: t });
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let elliptic = s.chain.kinds[i] == ComponentKind::Elliptic;
        for (j, slot) in e.slots.iter().enumerate() {
            let rows: Vec<(usize, SectionSymbol)> =
                v.rows.iter().copied().enumerate().filter(|(_, r)| r.slot == j).collect();
            slot_checks(i, j, slot, &rows, elliptic, &mut out);
        }
    }
    if s.pairings.len() != m.saturating_sub(1) {
        out.push(StructuralIssue::Pairing { node: s.pairings.len() });
    }
    for (n, p) in s.pairings.iter().enumerate() {
        if !is_permutation(p, s.dimension) {
            out.push(StructuralIssue::Pairing { node: n });
        }
    }
    if s.gluing.nodes.len() != m.saturating_sub(1) {
        out.push(StructuralIssue::Gluing { node: s.gluing.nodes.len() });
    }
    for (n, g) in s.gluing.nodes.iter().enumerate() {
        let (Some(e0), Some(e1)) = (s.bundles.get(n), s.bundles.get(n + 1)) else { break };
        let legal = match g {
            NodeGluing::SlotMatching { map } => {
                map.len() == e0.slots.len()
                    && is_permutation(map, e1.slots.len())
                    && map.iter().enumerate().all(|(j, &k)| e0.slots[j].rank() == e1.slots[k].rank())
            }
            NodeGluing::Generic { distinguished } => distinguished
                .iter()
                .all(|&(x, y)| x < s.tables[n].dimension() && y < s.tables[n + 1].dimension()),
        };
        if !legal {
            out.push(StructuralIssue::Gluing { node: n });
        }
    }
    out
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    p.iter().all(|&x| x < n && !core::mem::replace(&mut seen[x], true))
}

pub fn validate_lls(s: &LimitLinearSeries) -> ValidationReport {
    let structural = structural_issues(s);
    let m = s.chain.components() as i64;
    let r = i64::from(s.rank);
    let degrees = s.component_degrees();
    let degree_sum = degrees.iter().sum::<i64>() - r * (m - 1) * s.a == s.degree;

    let mut failing_nodes = Vec::new();
    for (n, pairing) in s.pairings.iter().enumerate() {
        let (Some(v0), Some(v1)) = (s.tables.get(n), s.tables.get(n + 1)) else { continue };
        let ok = pairing.iter().enumerate().all(|(t, &u)| match (v0.rows.get(t), v1.rows.get(u)) {
            (Some(x), Some(y)) => x.ord_q + y.ord_p >= s.a,
            _ => false,
        });
        if !ok {
            failing_nodes.push(n);
        }
    }
    let failing_components: Vec<usize> = degrees
        .iter()
        .enumerate()
        .filter(|&(i, &d)| {
            s.chain.kinds.get(i) == Some(&ComponentKind::Elliptic) && !(s.a * r <= d && d < (s.a + 1) * r)
        })
        .map(|(i, _)| i)
        .collect();
    ValidationReport {
        structural,
        degree_sum,
        node_orders: failing_nodes.is_empty(),
        degree_window: failing_components.is_empty(),
        failing_nodes,
        failing_components,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodeRank1 {
    /// Vanishing sequence of `V_i` at `Q_i`, increasing.
    pub at_q: Vec<i64>,
    /// Vanishing sequence of `V_{i+1}` at `P_{i+1}`, increasing.
    pub at_p: Vec<i64>,
    pub crude: bool,
    pub refined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rank1Report {
    pub crude: bool,
    pub refined: bool,
    pub nodes: Vec<NodeRank1>,
}

/// Checks `a^{Q_i}_j + a^{P_{i+1}}_{k-j+1} >= a` at every node, and equality.
pub fn validate_rank1(s: &LimitLinearSeries) -> Result<Rank1Report, ChainError> {
    if s.rank != 1 {
        return Err(ChainError::NotRankOne(s.rank));
    }
    let sorted = |v: &VanishingTable, q: bool| {
        let mut x: Vec<i64> = v.rows.iter().map(|r| if q { r.ord_q } else { r.ord_p }).collect();
        x.sort_unstable();
        x
    };
    let mut nodes = Vec::new();
    for w in s.tables.windows(2) {
        let at_q = sorted(&w[0], true);
        let at_p = sorted(&w[1], false);
        let k = at_q.len().min(at_p.len());
        let sums = (0..k).map(|j| at_q[j] + at_p[k - 1 - j]);
        let crude = at_q.len() == at_p.len() && sums.clone().all(|x| x >= s.a);
        let refined = crude && sums.clone().all(|x| x == s.a);
        nodes.push(NodeRank1 { at_q, at_p, crude, refined });
    }
    Ok(Rank1Report {
        crude: nodes.iter().all(|n| n.crude),
        refined: nodes.iter().all(|n| n.refined),
        nodes,
    })
}
