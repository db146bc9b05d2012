use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use super::EllipticError;

/// A torsion symbol of declared order `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TorsionSymbol {
    pub id: u32,
    pub order: u32,
}

impl TorsionSymbol {
    pub fn new(id: u32, order: u32) -> Result<Self, EllipticError> {
        if order < 2 {
            return Err(EllipticError::TorsionOrder(order));
        }
        Ok(TorsionSymbol { id, order })
    }
}

/// Formal degree-0 class: `pq (P - Q) + sum of generic symbols + sum of torsion symbols`.
///
/// Generic symbols are free, `P - Q` is non-torsion, and neither cancels against the
/// other parts. Zero coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Degree0Class {
    pq: i64,
    generic: BTreeMap<u32, i64>,
    #[cfg_attr(feature = "serde", serde(with = "crate::util::pairs"))]
    torsion: BTreeMap<TorsionSymbol, u32>,
}

impl Degree0Class {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn pq(n: i64) -> Self {
        Degree0Class { pq: n, ..Self::default() }
    }

    pub fn generic(id: u32) -> Self {
        let mut c = Self::default();
        c.generic.insert(id, 1);
        c
    }

    pub fn torsion(sym: TorsionSymbol, residue: i64) -> Self {
        let mut c = Self::default();
        c.add_torsion(sym, residue);
        c
    }

    pub fn pq_coeff(&self) -> i64 {
        self.pq
    }

    pub fn generic_part(&self) -> &BTreeMap<u32, i64> {
        &self.generic
    }

    pub fn torsion_part(&self) -> &BTreeMap<TorsionSymbol, u32> {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.pq == 0 && self.generic.is_empty() && self.torsion.is_empty()
    }

    /// True when the class is a multiple of `P - Q`.
    pub fn is_pure_pq(&self) -> bool {
        self.generic.is_empty() && self.torsion.is_empty()
    }

    fn add_generic(&mut self, id: u32, n: i64) {
        let e = self.generic.entry(id).or_insert(0);
        *e += n;
        if *e == 0 {
            self.generic.remove(&id);
        }
    }

    fn add_torsion(&mut self, sym: TorsionSymbol, n: i64) {
        let m = i64::from(sym.order);
        let cur = i64::from(self.torsion.get(&sym).copied().unwrap_or(0));
        let r = (cur + n).rem_euclid(m) as u32;
        if r == 0 {
            self.torsion.remove(&sym);
        } else {
            self.torsion.insert(sym, r);
        }
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::pq(self.pq * n);
        for (&id, &c) in &self.generic {
            out.add_generic(id, c * n);
        }
        for (&s, &r) in &self.torsion {
            out.add_torsion(s, i64::from(r) * n);
        }
        out
    }
}

impl Add for &Degree0Class {
    type Output = Degree0Class;
    fn add(self, rhs: &Degree0Class) -> Degree0Class {
        let mut out = self.clone();
        out.pq += rhs.pq;
        for (&id, &c) in &rhs.generic {
            out.add_generic(id, c);
        }
        for (&s, &r) in &rhs.torsion {
            out.add_torsion(s, i64::from(r));
        }
        out
    }
}

impl Neg for &Degree0Class {
    type Output = Degree0Class;
    fn neg(self) -> Degree0Class {
        self.scale(-1)
    }
}

impl Sub for &Degree0Class {
    type Output = Degree0Class;
    fn sub(self, rhs: &Degree0Class) -> Degree0Class {
        self + &(-rhs)
    }
}

impl fmt::Display for Degree0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, name: &dyn fmt::Display| {
            let sep = if first { "" } else { " + " };
            first = false;
            if c == 1 {
                write!(f, "{sep}{name}")
            } else {
                write!(f, "{sep}{c}{name}")
            }
        };
        if self.pq != 0 {
            term(f, self.pq, &"(P-Q)")?;
        }
        for (id, &c) in &self.generic {
            term(f, c, &format_args!("g{id}"))?;
        }
        for (s, &r) in &self.torsion {
            term(f, i64::from(r), &format_args!("t{}/{}", s.id, s.order))?;
        }
        Ok(())
    }
}

/// Line bundle class `O(aP + bQ) (x) twist`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineBundleClass {
    pub a: i64,
    pub b: i64,
    pub twist: Degree0Class,
}

impl LineBundleClass {
    pub fn new(a: i64, b: i64) -> Self {
        LineBundleClass { a, b, twist: Degree0Class::trivial() }
    }

    pub fn with_twist(a: i64, b: i64, twist: Degree0Class) -> Self {
        LineBundleClass { a, b, twist }
    }

    pub fn degree(&self) -> i64 {
        self.a + self.b
    }

    /// The `k` with `self = O(kP + (d-k)Q)`, if any.
    pub fn special_index(&self) -> Option<i64> {
        self.twist.is_pure_pq().then(|| self.a + self.twist.pq_coeff())
    }

    /// Class of `self (x) O(-aP - bQ)` relative to the trivial bundle, valid for equal degrees.
    pub fn difference(&self, other: &LineBundleClass) -> Degree0Class {
        &Degree0Class::pq(self.a - other.a) + &(&self.twist - &other.twist)
    }

    pub fn tensor(&self, other: &LineBundleClass) -> LineBundleClass {
        LineBundleClass {
            a: self.a + other.a,
            b: self.b + other.b,
            twist: &self.twist + &other.twist,
        }
    }

    pub fn dual(&self) -> LineBundleClass {
        LineBundleClass { a: -self.a, b: -self.b, twist: -&self.twist }
    }

    /// `self (x) O(-xP - yQ)`.
    pub fn twisted(&self, x: i64, y: i64) -> LineBundleClass {
        LineBundleClass { a: self.a - x, b: self.b - y, twist: self.twist.clone() }
    }

    /// Degree-0 part after moving all degree onto `P`: `self = O(deg P) (x) rel`.
    pub fn relative_to_p(&self) -> Degree0Class {
        &Degree0Class::pq(-self.b) + &self.twist
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 0 && self.relative_to_p().is_trivial()
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}P{:+}Q)", self.a, self.b)?;
        if !self.twist.is_trivial() {
            write!(f, "({})", self.twist)?;
        }
        Ok(())
    }
}

pub fn class_isomorphic(l1: &LineBundleClass, l2: &LineBundleClass) -> bool {
    l1.degree() == l2.degree() && l1.difference(l2).is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_examples() {
        let a = LineBundleClass::new(3, 2);
        assert!(class_isomorphic(&a, &LineBundleClass::new(3, 2)));
        assert!(!class_isomorphic(&a, &LineBundleClass::new(2, 3)));
        let g1 = LineBundleClass::with_twist(2, 2, Degree0Class::generic(1));
        let g2 = LineBundleClass::with_twist(2, 2, Degree0Class::generic(2));
        assert!(!class_isomorphic(&g1, &g2));
        // O(2P + 3Q) (x) (P - Q) is O(3P + 2Q)
        let shifted = LineBundleClass::with_twist(2, 3, Degree0Class::pq(1));
        assert!(class_isomorphic(&a, &shifted));
    }

    #[test]
    fn torsion_residues_reduce() {
        let s = TorsionSymbol::new(7, 3).unwrap();
        let c = &Degree0Class::torsion(s, 2) + &Degree0Class::torsion(s, 1);
        assert!(c.is_trivial());
        assert_eq!(Degree0Class::torsion(s, -1).torsion_part()[&s], 2);
        assert!(TorsionSymbol::new(1, 1).is_err());
    }

    #[test]
    fn pq_never_cancels_generic() {
        let c = &Degree0Class::pq(2) + &Degree0Class::generic(4);
        assert!(!c.is_trivial());
        assert!(!c.is_pure_pq());
        assert!((&c - &c).is_trivial());
    }

    #[test]
    fn special_index_tracks_pq() {
        assert_eq!(LineBundleClass::new(3, 2).special_index(), Some(3));
        let l = LineBundleClass::with_twist(2, 3, Degree0Class::pq(1));
        assert_eq!(l.special_index(), Some(3));
        let g = LineBundleClass::with_twist(2, 3, Degree0Class::generic(0));
        assert_eq!(g.special_index(), None);
    }
}
