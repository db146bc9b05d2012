use alloc::string::ToString;
use alloc::vec::Vec;

use super::verdict::{DimensionAudit, DistributionAudit, SeriesSummary, Status, Verdict, VerdictParams};
use super::TheoremError;
use crate::chain::{canonical_class, redistribute, ChainCurve, GluingData, LimitLinearSeries, NodeGluing};
use crate::elliptic::{
    atom_rows, section_basis, BundleOnComponent, Degree0Class, EllipticError, IndecomposableSlot, LineBundleClass,
    SectionSymbol, Slot, VanishingTable,
};
use crate::independence::{certify_independence, oracle_rank, product_sections, OracleConfig};
use crate::util::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PetriCase {
    /// `d2 >= k2`, `d2 != 0`.
    #[cfg_attr(feature = "serde", serde(rename = "d2>=k2,d2!=0"))]
    DegreeResidue,
    /// `d2 = k2 = 0`.
    #[cfg_attr(feature = "serde", serde(rename = "d2=k2=0"))]
    NoResidue,
    /// `d2 < k2`.
    #[cfg_attr(feature = "serde", serde(rename = "d2<k2"))]
    SectionResidue,
}

impl PetriCase {
    pub fn label(self) -> &'static str {
        match self {
            PetriCase::DegreeResidue => "d2>=k2,d2!=0",
            PetriCase::NoResidue => "d2=k2=0",
            PetriCase::SectionResidue => "d2<k2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetriParams {
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub k: i64,
    pub d1: i64,
    pub d2: i64,
    pub k1: i64,
    pub k2: i64,
    /// `g + k1 - d1 - 1`.
    pub alpha: i64,
    pub case: PetriCase,
    /// The case's bound reads `bound_lhs <= bound_rhs`.
    pub bound_lhs: i64,
    pub bound_rhs: i64,
}

impl PetriParams {
    /// Derived quantities without checking the hypothesis.
    pub fn derive(g: i64, r: i64, d: i64, k: i64) -> Result<Self, TheoremError> {
        if g < 2 {
            return Err(TheoremError::Range("genus must be at least 2"));
        }
        if r < 1 {
            return Err(TheoremError::Range("rank must be positive"));
        }
        if d < 0 {
            return Err(TheoremError::Range("degree must be nonnegative"));
        }
        if k < 1 {
            return Err(TheoremError::Range("at least one section is required"));
        }
        let (d1, d2) = (d.div_euclid(r), d.rem_euclid(r));
        let (k1, k2) = (k.div_euclid(r), k.rem_euclid(r));
        let alpha = g + k1 - d1 - 1;
        let (case, bound_lhs, bound_rhs) = if d2 >= k2 && d2 != 0 {
            (PetriCase::DegreeResidue, (k1 + 1) * alpha, g - 1)
        } else if d2 == 0 && k2 == 0 {
            (PetriCase::NoResidue, k1 * alpha, g - 2)
        } else {
            (PetriCase::SectionResidue, (k1 + 1) * (alpha + 1), g - 1)
        };
        Ok(PetriParams { g, r, d, k, d1, d2, k1, k2, alpha, case, bound_lhs, bound_rhs })
    }

    pub fn new(g: i64, r: i64, d: i64, k: i64) -> Result<Self, TheoremError> {
        let p = Self::derive(g, r, d, k)?;
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<(), TheoremError> {
        if self.alpha < 1 {
            return Err(TheoremError::Hypothesis { case: "g+k1-d1-1 >= 1", lhs: 1, rhs: self.alpha });
        }
        if self.bound_lhs > self.bound_rhs {
            return Err(TheoremError::Hypothesis { case: self.case.label(), lhs: self.bound_lhs, rhs: self.bound_rhs });
        }
        Ok(())
    }

    pub fn hypothesis_holds(&self) -> bool {
        self.check().is_ok()
    }

    /// `r (k1 - d1 + g - 1)`.
    pub fn kbar(&self) -> i64 {
        self.r * self.alpha
    }

    /// Sections and special components of slot `c`: `(rows, specials, top row in V)`.
    fn slot_plan(&self, c: i64) -> (i64, i64, bool) {
        let (k1, a) = (self.k1, self.alpha);
        match self.case {
            PetriCase::DegreeResidue if c < self.d2 => (k1 + 1, a, c < self.k2),
            PetriCase::SectionResidue if c < self.d2 => (k1 + 1, a, true),
            PetriCase::SectionResidue if c < self.k2 => (k1 + 1, a + 1, true),
            _ => (k1, a, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PetriBuild {
    pub params: PetriParams,
    pub e_series: LimitLinearSeries,
    pub dual_series: LimitLinearSeries,
    /// `h^0(E)` of the constructed bundle: rows before restricting to `V`.
    pub e_sections: usize,
    /// Components per cycle of special line bundles.
    pub cycle: i64,
    /// Last component whose slots are glued slot to slot.
    pub glued_range: i64,
}

const ATOM: u32 = 0;

struct Ids(u32);

impl Ids {
    fn fresh(&mut self) -> Degree0Class {
        self.0 += 1;
        Degree0Class::generic(self.0)
    }
}

/// Row of `l` reached from nominal order `p`; degree-0 slots carry only the constant section.
fn slot_row(l: &LineBundleClass, p: i64, slot: usize) -> Result<SectionSymbol, EllipticError> {
    if l.degree() == 0 && l.is_trivial() && p <= 0 {
        return Ok(SectionSymbol::exact(slot, 0, 0));
    }
    Ok(section_basis(l)?.at_least(p)?.in_slot(slot))
}

/// Carries the rows of each slot along `C_1..C_{g-1}`; returns per-component rows, slot-major.
fn line_rows(
    classes: &[Vec<LineBundleClass>],
    starts: &[Vec<i64>],
    a: i64,
) -> Result<Vec<Vec<SectionSymbol>>, TheoremError> {
    let mut nominal: Vec<Vec<i64>> = starts.to_vec();
    let mut out = Vec::with_capacity(classes.len());
    for (i, comp) in classes.iter().enumerate() {
        let mut rows = Vec::new();
        for (c, l) in comp.iter().enumerate() {
            for p in nominal[c].iter_mut() {
                let row = slot_row(l, *p, c).map_err(|_| TheoremError::Inconsistent {
                    component: i,
                    reason: "section space not constructible",
                })?;
                *p = a - row.ord_q;
                rows.push(row);
            }
        }
        out.push(rows);
    }
    Ok(out)
}

fn last_node(v_prev: &VanishingTable, v_g: &VanishingTable, top: i64) -> NodeGluing {
    let distinguished = (0..v_g.dimension())
        .filter(|&t| v_g.rows[t].ord_p == top && v_prev.rows[t].ord_q == 0)
        .map(|t| (t, t))
        .collect();
    NodeGluing::Generic { distinguished }
}

/// The series `E` with `k` sections and the series `K (x) E*` with `kbar` sections.
pub fn petri_build(p: &PetriParams) -> Result<PetriBuild, TheoremError> {
    p.check()?;
    let (g, r, d1) = (p.g, p.r, p.d1);
    let gu = g as usize;
    let plans: Vec<(i64, i64, bool)> = (0..r).map(|c| p.slot_plan(c)).collect();
    let cycle = plans.iter().map(|x| x.0).max().unwrap_or(0).max(1);
    let cycles = plans.iter().map(|x| x.1).max().unwrap_or(0);
    let glued_range = cycle * cycles;
    let mut ids = Ids(0);

    // E on C_1..C_{g-1}: one line slot per c; row j2 of slot c is special on C_i
    // for the first `specials` cycles.
    let mut e_classes: Vec<Vec<LineBundleClass>> = Vec::with_capacity(gu - 1);
    let mut nominal: Vec<Vec<i64>> = plans.iter().map(|x| (0..x.0).collect()).collect();
    let mut used = alloc::vec![alloc::vec![0i64; 0]; r as usize];
    for (c, x) in plans.iter().enumerate() {
        used[c] = alloc::vec![0; x.0 as usize];
    }
    for i in 1..g {
        let (j1, j2) = ((i - 1) / cycle, (i - 1) % cycle + 1);
        let mut comp = Vec::with_capacity(r as usize);
        for (c, &(rows, specials, _)) in plans.iter().enumerate() {
            let l = if j2 <= rows && j1 < specials {
                let x = nominal[c][(j2 - 1) as usize];
                used[c][(j2 - 1) as usize] += 1;
                LineBundleClass::new(x, d1 - x)
            } else {
                LineBundleClass::with_twist(d1, 0, ids.fresh())
            };
            for q in nominal[c].iter_mut() {
                *q = slot_row(&l, *q, c).map(|s| d1 - s.ord_q).unwrap_or(i64::MIN);
            }
            comp.push(l);
        }
        e_classes.push(comp);
    }
    if used.iter().zip(&plans).any(|(u, x)| u.iter().any(|&n| n != x.1)) {
        return Err(TheoremError::Inconsistent { component: glued_range as usize, reason: "special cycles do not fit" });
    }
    let starts: Vec<Vec<i64>> = plans.iter().map(|x| (0..x.0).collect()).collect();
    let e_rows = line_rows(&e_classes, &starts, d1)?;
    let in_v: Vec<bool> =
        plans.iter().flat_map(|&(rows, _, top)| (0..rows).map(move |m| top || m + 1 < rows)).collect();

    // C_g: h atoms of rank r/h and degree d/h, generically twisted.
    let h = gcd(r, p.d);
    let e_g = BundleOnComponent::new(
        (0..h)
            .map(|_| Slot::Indecomposable(IndecomposableSlot::atom((r / h) as u32, p.d / h, ATOM, ids.fresh())))
            .collect(),
    );
    let last = e_rows.last().expect("g >= 2");
    let p_g: Vec<i64> = last.iter().map(|s| d1 - s.ord_q).collect();
    let rows_g = atom_rows(&e_g, &p_g).map_err(|_| TheoremError::Inconsistent {
        component: gu - 1,
        reason: "sections exceed the atoms on the last component",
    })?;

    let keep = |rows: &[SectionSymbol]| -> VanishingTable {
        VanishingTable::new(rows.iter().zip(&in_v).filter(|(_, &v)| v).map(|(s, _)| *s).collect())
    };
    let mut e_tables: Vec<VanishingTable> = e_rows.iter().map(|x| keep(x)).collect();
    e_tables.push(keep(&rows_g));
    let mut e_bundles: Vec<BundleOnComponent> = e_classes
        .iter()
        .map(|c| BundleOnComponent::new(c.iter().cloned().map(Slot::Line).collect()))
        .collect();
    e_bundles.push(e_g.clone());

    let glue_nodes = |tables: &[VanishingTable], top: i64| -> GluingData {
        let mut nodes: Vec<NodeGluing> = (0..gu - 1)
            .map(|n| if (n as i64) + 2 <= glued_range { NodeGluing::identity(r as usize) } else { NodeGluing::generic() })
            .collect();
        nodes[gu - 2] = last_node(&tables[gu - 2], &tables[gu - 1], top);
        GluingData { nodes }
    };
    let k = p.k as usize;
    let e_series = LimitLinearSeries {
        chain: ChainCurve::elliptic(gu),
        rank: r as u32,
        degree: p.d,
        dimension: k,
        a: d1,
        gluing: glue_nodes(&e_tables, d1),
        bundles: e_bundles,
        tables: e_tables,
        pairings: LimitLinearSeries::aligned_pairings(gu, k),
    };
    if e_series.tables.iter().any(|t| t.dimension() != k) {
        return Err(TheoremError::Inconsistent { component: 0, reason: "table dimension differs from k" });
    }

    // K (x) E*: slot c on C_i is K_i (x) L_c^{-1}, alpha rows per slot.
    let dbar = 2 * g - 2 - d1;
    let dual_classes: Vec<Vec<LineBundleClass>> = e_classes
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let kc = canonical_class(g, i as i64 + 1);
            comp.iter().map(|l| kc.tensor(&l.dual())).collect()
        })
        .collect();
    let dual_starts: Vec<Vec<i64>> = (0..r).map(|_| (0..p.alpha).collect()).collect();
    let dual_rows = line_rows(&dual_classes, &dual_starts, dbar)?;
    let dual_g = e_g.dual().tensor_line(&canonical_class(g, g));
    let last = dual_rows.last().expect("g >= 2");
    let pbar_g: Vec<i64> = last.iter().map(|s| dbar - s.ord_q).collect();
    let dual_rows_g = atom_rows(&dual_g, &pbar_g).map_err(|_| TheoremError::Inconsistent {
        component: gu - 1,
        reason: "dual sections exceed the atoms on the last component",
    })?;
    let mut dual_tables: Vec<VanishingTable> = dual_rows.into_iter().map(VanishingTable::new).collect();
    dual_tables.push(VanishingTable::new(dual_rows_g));
    let mut dual_bundles: Vec<BundleOnComponent> = dual_classes
        .iter()
        .map(|c| BundleOnComponent::new(c.iter().cloned().map(Slot::Line).collect()))
        .collect();
    dual_bundles.push(dual_g);
    let kbar = p.kbar() as usize;
    let dual_series = LimitLinearSeries {
        chain: ChainCurve::elliptic(gu),
        rank: r as u32,
        degree: r * (2 * g - 2) - p.d,
        dimension: kbar,
        a: dbar,
        gluing: glue_nodes(&dual_tables, dbar),
        bundles: dual_bundles,
        tables: dual_tables,
        pairings: LimitLinearSeries::aligned_pairings(gu, kbar),
    };
    let e_sections = plans.iter().map(|x| x.0 as usize).sum();
    Ok(PetriBuild { params: *p, e_series, dual_series, e_sections, cycle, glued_range })
}

/// Every pair `(t, l)` of a section of `V` and a section of `K (x) E*`.
pub fn petri_pairs(b: &PetriBuild) -> Vec<(usize, usize)> {
    let (k, kbar) = (b.e_series.dimension, b.dual_series.dimension);
    (0..k).flat_map(|t| (0..kbar).map(move |l| (t, l))).collect()
}

/// Builds both series, forms the `k kbar` products, redistributes the product
/// series to degree `r^2` on the end components and `2r^2` in between, and
/// certifies the products independent.
pub fn petri_certificate(p: &PetriParams, cfg: &OracleConfig) -> Verdict {
    let mut v = Verdict::empty(VerdictParams::Petri(*p), Some(p.case), Status::NotProven);
    if let Err(e) = p.check() {
        v.status = Status::HypothesisNotMet;
        v.diagnostics.push(e.to_string());
        return v;
    }
    let b = match petri_build(p) {
        Ok(b) => b,
        Err(e) => {
            v.diagnostics.push(e.to_string());
            return v;
        }
    };
    let (g, r) = (p.g, p.r);
    let gu = g as usize;
    v.series.push(SeriesSummary::of("E", &b.e_series));
    v.series.push(SeriesSummary::of("K(x)E*", &b.dual_series));
    let mut ok_series = v.series[0].validation.passes();
    let dv = &v.series[1].validation;
    ok_series &= dv.structural.is_empty() && dv.degree_sum && dv.node_orders;
    if !dv.degree_window {
        v.diagnostics.push(alloc::format!(
            "K(x)E* has degree r*a - d2 = {} on the last component, below the window for a = {}",
            b.dual_series.component_degrees()[gu - 1],
            b.dual_series.a
        ));
    }
    let dual_h0 = b.e_sections as i64 - p.d + r * (g - 1);
    let expected = (p.k * p.kbar()) as usize;
    let pairs = petri_pairs(&b);
    let prod = match product_sections(&b.e_series, &b.dual_series, &pairs) {
        Ok(x) => x,
        Err(e) => {
            v.diagnostics.push(e.to_string());
            return v;
        }
    };
    let r2 = r * r;
    let targets: Vec<i64> =
        (0..gu).map(|i| if i == 0 || i == gu - 1 { r2 } else { 2 * r2 }).collect();
    let mut audit = DimensionAudit {
        expected,
        expected_independent: b.e_series.dimension * b.dual_series.dimension,
        products: prod.products.len(),
        certified: 0,
        domain: (p.k * dual_h0) as usize,
        excess: p.k * dual_h0 - expected as i64,
        ambient: (r2 * (g - 1) + 1) as usize,
    };
    if audit.excess != 0 {
        v.diagnostics.push(alloc::format!(
            "h0(K(x)E*) = {dual_h0} exceeds kbar = {}; the Petri domain has {} extra dimensions",
            p.kbar(),
            audit.excess
        ));
    }
    let red = match redistribute(&prod.series, &targets) {
        Ok(x) => x,
        Err(e) => {
            v.status = Status::Inconsistent;
            v.diagnostics.push(e.to_string());
            v.dimension = Some(audit);
            return v;
        }
    };
    let dist = DistributionAudit::new(&red, &prod.series.component_degrees(), |i| {
        let i = i as i64 + 1;
        ((i >= 2).then_some(2 * i - 3), (i < g).then_some(2 * g - 2 * i - 1))
    });
    let consistent = dist.consistent() && audit.consistent();
    v.distribution = Some(dist);
    match certify_independence(&prod.products, &red) {
        Ok(c) => {
            audit.certified = c.eliminated();
            v.certificate = Some(c);
        }
        Err(e) => v.diagnostics.push(e.to_string()),
    }
    let oracle = oracle_rank(&prod.products, &red, cfg);
    v.status = finish(consistent, ok_series, &audit, v.certificate.is_some(), oracle.as_ref().ok().map(|o| o.rank));
    match oracle {
        Ok(o) => v.oracle = Some(o),
        Err(e) => v.diagnostics.push(e.to_string()),
    }
    v.dimension = Some(audit);
    v.diagnostics.push("certifies the chain-level statement; passage to nearby smooth curves is not checked".into());
    v
}

pub(crate) fn finish(
    consistent: bool,
    series_ok: bool,
    audit: &DimensionAudit,
    certified: bool,
    oracle: Option<usize>,
) -> Status {
    if !consistent {
        return Status::Inconsistent;
    }
    let full = certified && audit.certified == audit.expected;
    match oracle {
        Some(rank) if full && rank != audit.expected => Status::Inconsistent,
        Some(_) if full && series_ok => Status::Proven,
        _ => Status::NotProven,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(g: i64, r: i64, d: i64, k: i64) -> Verdict {
        petri_certificate(&PetriParams::new(g, r, d, k).unwrap(), &OracleConfig::default())
    }

    #[test]
    fn cases_and_bounds() {
        let p = PetriParams::derive(5, 2, 7, 3).unwrap();
        assert_eq!((p.d1, p.d2, p.k1, p.k2, p.alpha), (3, 1, 1, 1, 2));
        assert_eq!(p.case, PetriCase::DegreeResidue);
        assert!(p.hypothesis_holds());
        assert_eq!(PetriParams::derive(4, 2, 6, 2).unwrap().case, PetriCase::NoResidue);
        assert_eq!(PetriParams::derive(6, 2, 6, 3).unwrap().case, PetriCase::SectionResidue);
        assert!(matches!(PetriParams::new(3, 2, 7, 3), Err(TheoremError::Hypothesis { .. })));
        assert!(PetriParams::derive(5, 2, 7, 0).is_err());
    }

    #[test]
    fn spot_instances() {
        let v = run(5, 2, 7, 3);
        assert_eq!(v.status, Status::Proven, "{:?}", v.diagnostics);
        assert_eq!(v.certified(), 12);
        assert_eq!(v.oracle.unwrap().rank, 12);
        let v = run(4, 2, 6, 2);
        assert_eq!(v.status, Status::Proven, "{:?}", v.diagnostics);
        assert_eq!(v.certified(), 4);
    }

    #[test]
    fn quoted_thresholds_agree() {
        let v = run(7, 3, 13, 4);
        let d = v.distribution.unwrap();
        assert!(d.thresholds.iter().all(|t| t.matches));
        assert_eq!(d.sum, d.expected_sum);
    }

    #[test]
    fn e_series_is_valid() {
        let b = petri_build(&PetriParams::new(5, 2, 7, 3).unwrap()).unwrap();
        assert!(crate::chain::validate_lls(&b.e_series).passes());
        assert_eq!(b.dual_series.dimension, 4);
        assert_eq!(petri_pairs(&b).len(), 12);
    }

    #[test]
    fn hypothesis_failure_reported() {
        let p = PetriParams::derive(3, 2, 7, 3).unwrap();
        let v = petri_certificate(&p, &OracleConfig::default());
        assert_eq!(v.status, Status::HypothesisNotMet);
        assert!(v.certificate.is_none());
    }
}
