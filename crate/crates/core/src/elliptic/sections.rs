use alloc::vec::Vec;

use super::bundle::{BundleOnComponent, Slot};
use super::class::LineBundleClass;
use super::EllipticError;

/// A section, up to scalar, by slot and vanishing orders at `P` and `Q`.
///
/// An inexact order is only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectionSymbol {
    pub slot: usize,
    pub ord_p: i64,
    pub ord_q: i64,
    pub exact_p: bool,
    pub exact_q: bool,
}

impl SectionSymbol {
    pub fn exact(slot: usize, ord_p: i64, ord_q: i64) -> Self {
        SectionSymbol { slot, ord_p, ord_q, exact_p: true, exact_q: true }
    }

    pub fn in_slot(self, slot: usize) -> Self {
        SectionSymbol { slot, ..self }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VanishingTable {
    pub rows: Vec<SectionSymbol>,
}

impl VanishingTable {
    pub fn new(rows: Vec<SectionSymbol>) -> Self {
        VanishingTable { rows }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn in_slot(mut self, slot: usize) -> Self {
        for r in &mut self.rows {
            r.slot = slot;
        }
        self
    }

    pub fn p_orders(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.ord_p).collect()
    }

    pub fn q_orders(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.ord_q).collect()
    }
}

/// The sections `s_0..s_{d-1}` of a line bundle, with `s_k` vanishing to order
/// `k` at `P` and maximally at `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionBasis {
    pub degree: i64,
    /// Distinct sections in increasing `P`-order.
    pub rows: Vec<SectionSymbol>,
    /// `(k - 1, k)` when `s_{k-1} = s_k`.
    pub coincidence: Option<(i64, i64)>,
}

impl SectionBasis {
    /// The section `s_k`.
    pub fn section(&self, k: i64) -> Result<SectionSymbol, EllipticError> {
        if k < 0 || k >= self.degree {
            return Err(EllipticError::NominalOutOfRange { k, degree: self.degree });
        }
        let idx = match self.coincidence {
            Some((_, hi)) if k >= hi => k - 1,
            _ => k,
        };
        Ok(self.rows[idx as usize])
    }
}

pub fn section_basis(l: &LineBundleClass) -> Result<SectionBasis, EllipticError> {
    let d = l.degree();
    if d <= 0 {
        return Err(EllipticError::NonPositiveDegree(d));
    }
    let special = l.special_index().filter(|a| (0..=d).contains(a));
    let mut rows = Vec::with_capacity(d as usize);
    let mut coincidence = None;
    let mut k = 0;
    while k < d {
        match special {
            Some(a) if a >= 1 && a < d && k == a - 1 => {
                rows.push(SectionSymbol::exact(0, a, d - a));
                coincidence = Some((a - 1, a));
                k += 2;
                continue;
            }
            Some(0) if k == 0 => rows.push(SectionSymbol::exact(0, 0, d)),
            Some(a) if a == d && k == d - 1 => rows.push(SectionSymbol::exact(0, d, 0)),
            _ => rows.push(SectionSymbol::exact(0, k, d - 1 - k)),
        }
        k += 1;
    }
    Ok(SectionBasis { degree: d, rows, coincidence })
}

/// A basis of `H^0(l)` adapted to both `P` and `Q`: for every `(p, q)` the rows with
/// `ord_p >= p` and `ord_q >= q` span `H^0(l(-pP - qQ))`.
pub fn adapted_basis(l: &LineBundleClass) -> Result<Vec<SectionSymbol>, EllipticError> {
    let b = section_basis(l)?;
    let mut rows = b.rows;
    if let Some((lo, hi)) = b.coincidence {
        let d = b.degree;
        rows.insert(lo as usize, SectionSymbol::exact(0, lo, d - 1 - hi));
    }
    Ok(rows)
}

/// The `t`-dimensional space spanned by consecutive sections `s_u, s_{u+1}, ...`.
pub fn section_space(l: &LineBundleClass, u: i64, t: i64) -> Result<VanishingTable, EllipticError> {
    let d = l.degree();
    let bad = |reason| Err(EllipticError::SectionRange { u, t, degree: d, reason });
    if t < 0 || u < 0 {
        return bad("negative parameter");
    }
    if t == 0 {
        return Ok(VanishingTable::default());
    }
    let basis = section_basis(l)?;
    let hi = match basis.coincidence {
        Some((_, a)) if a == u => return bad("special index equals the first order"),
        Some((_, a)) if a > u && a <= u + t => {
            if u + t > d - 1 {
                return bad("window runs past the top section");
            }
            u + t
        }
        _ => {
            if u + t > d {
                return bad("window runs past the degree");
            }
            u + t - 1
        }
    };
    let mut rows = Vec::with_capacity(t as usize);
    for k in u..=hi {
        let s = basis.section(k)?;
        if rows.last() != Some(&s) {
            rows.push(s);
        }
    }
    debug_assert_eq!(rows.len() as i64, t);
    Ok(VanishingTable::new(rows))
}

/// Assigns rows with the given `P`-orders to the slots of `e`, round-robin in
/// decreasing order of vanishing, and checks that no slot receives more
/// sections than it has.
pub fn atom_rows(e: &BundleOnComponent, p_orders: &[i64]) -> Result<Vec<SectionSymbol>, EllipticError> {
    let h = e.slots.len();
    if h == 0 {
        return if p_orders.is_empty() { Ok(Vec::new()) } else { Err(EllipticError::NonUniform) };
    }
    let mut order: Vec<usize> = (0..p_orders.len()).collect();
    order.sort_by(|&x, &y| p_orders[y].cmp(&p_orders[x]));
    let mut rows = alloc::vec![SectionSymbol::exact(0, 0, 0); p_orders.len()];
    for (pos, &x) in order.iter().enumerate() {
        rows[x] = SectionSymbol { slot: pos % h, ord_p: p_orders[x], ord_q: 0, exact_p: true, exact_q: false };
    }
    for (slot, s) in e.slots.iter().enumerate() {
        let mut ps: Vec<i64> = rows.iter().filter(|r| r.slot == slot).map(|r| r.ord_p).collect();
        ps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &p) in ps.iter().enumerate() {
            let bound = s.twisted(p, 0).h0();
            if (i as i64 + 1) > bound {
                return Err(EllipticError::Filtration { slot, order: p, rows: i + 1, bound });
            }
        }
    }
    Ok(rows)
}

/// Sections of `e(-alpha P)` for a uniform sum of atoms, as orders at `P`.
pub fn twist_sections(e: &BundleOnComponent, alpha: i64) -> Result<VanishingTable, EllipticError> {
    let first = e.slots.first().ok_or(EllipticError::NonUniform)?;
    let (r1, d1_slot) = (first.rank(), first.degree());
    if e.slots.iter().any(|s| s.rank() != r1 || s.degree() != d1_slot) {
        return Err(EllipticError::NonUniform);
    }
    if let Slot::Indecomposable(x) = first {
        if x.gcd() != 1 {
            return Err(EllipticError::NotCoprime { rank: x.rank, degree: x.degree });
        }
    }
    let r = i64::from(e.rank());
    let d = e.degree();
    let (d1, d2) = (d.div_euclid(r), d.rem_euclid(r));
    if alpha < 0 || alpha > d1 {
        return Err(EllipticError::TwistRange { alpha, d1 });
    }
    let mut ps = Vec::new();
    ps.extend(core::iter::repeat_n(d1, d2 as usize));
    for p in (alpha..d1).rev() {
        ps.extend(core::iter::repeat_n(p, r as usize));
    }
    Ok(VanishingTable::new(atom_rows(e, &ps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{Degree0Class, IndecomposableSlot};

    fn pairs(rows: &[SectionSymbol]) -> Vec<(i64, i64)> {
        rows.iter().map(|r| (r.ord_p, r.ord_q)).collect()
    }

    #[test]
    fn basis_generic_and_special() {
        let g = LineBundleClass::with_twist(2, 3, Degree0Class::generic(0));
        let b = section_basis(&g).unwrap();
        assert_eq!(pairs(&b.rows), [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]);
        assert_eq!(b.coincidence, None);

        let s = section_basis(&LineBundleClass::new(3, 2)).unwrap();
        assert_eq!(pairs(&s.rows), [(0, 4), (1, 3), (3, 2), (4, 0)]);
        assert_eq!(s.coincidence, Some((2, 3)));
        assert_eq!(s.section(2).unwrap(), s.section(3).unwrap());

        let p = section_basis(&LineBundleClass::new(1, 0)).unwrap();
        assert_eq!(pairs(&p.rows), [(1, 0)]);
        assert!(section_basis(&LineBundleClass::new(0, 0)).is_err());
    }

    #[test]
    fn boundary_special_classes() {
        let q = section_basis(&LineBundleClass::new(0, 3)).unwrap();
        assert_eq!(pairs(&q.rows), [(0, 3), (1, 1), (2, 0)]);
        let p = section_basis(&LineBundleClass::new(3, 0)).unwrap();
        assert_eq!(pairs(&p.rows), [(0, 2), (1, 1), (3, 0)]);
    }

    #[test]
    fn adapted_basis_has_extra_row() {
        let a = adapted_basis(&LineBundleClass::new(3, 2)).unwrap();
        assert_eq!(pairs(&a), [(0, 4), (1, 3), (2, 1), (3, 2), (4, 0)]);
    }

    #[test]
    fn corollary_examples() {
        let t = section_space(&LineBundleClass::new(3, 2), 1, 3).unwrap();
        assert_eq!(t.p_orders(), [1, 3, 4]);
        assert_eq!(t.q_orders(), [3, 2, 0]);
        let g = LineBundleClass::with_twist(2, 3, Degree0Class::generic(0));
        let t = section_space(&g, 1, 3).unwrap();
        assert_eq!(t.p_orders(), [1, 2, 3]);
        assert_eq!(t.q_orders(), [3, 2, 1]);
        let t = section_space(&g, 0, 5).unwrap();
        assert_eq!(t.p_orders(), [0, 1, 2, 3, 4]);
        assert!(section_space(&LineBundleClass::new(3, 2), 3, 1).is_err());
        assert!(section_space(&g, 3, 3).is_err());
    }

    fn atoms(h: usize, r: u32, d: i64) -> BundleOnComponent {
        BundleOnComponent::new(
            (0..h)
                .map(|j| {
                    Slot::Indecomposable(IndecomposableSlot::atom(
                        r,
                        d,
                        0,
                        Degree0Class::generic(j as u32),
                    ))
                })
                .collect(),
        )
    }

    #[test]
    fn twist_sections_examples() {
        let t = twist_sections(&atoms(1, 2, 5), 1).unwrap();
        assert_eq!(t.p_orders(), [2, 1, 1]);
        assert!(t.rows.iter().all(|r| r.exact_p && !r.exact_q));
        let t = twist_sections(&atoms(3, 1, 1), 0).unwrap();
        assert_eq!(t.p_orders(), [0, 0, 0]);
        assert_eq!(twist_sections(&atoms(3, 1, 1), 1).unwrap().dimension(), 0);
        assert!(twist_sections(&atoms(1, 2, 5), 3).is_err());
    }
}
