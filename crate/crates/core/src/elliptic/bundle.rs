use alloc::vec::Vec;
use core::fmt;

use super::class::{Degree0Class, LineBundleClass, TorsionSymbol};
use super::EllipticError;
use crate::util::gcd;

/// Torsion symbols of an atom's `F* (x) F` lattice live above this id.
pub(crate) const LATTICE_BASE: u32 = 0x8000_0000;

/// `F_atom (x) twist`, or its dual when `conjugate` is set.
///
/// `degree` is the slot's full degree; atoms are identified by id, so two slots
/// over the same atom differ only by a line bundle twist.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndecomposableSlot {
    pub rank: u32,
    pub degree: i64,
    pub atom: u32,
    pub conjugate: bool,
    pub twist: Degree0Class,
}

impl IndecomposableSlot {
    pub fn atom(rank: u32, degree: i64, atom: u32, twist: Degree0Class) -> Self {
        IndecomposableSlot { rank, degree, atom, conjugate: false, twist }
    }

    pub fn gcd(&self) -> i64 {
        gcd(i64::from(self.rank), self.degree)
    }

    fn lattice(&self) -> Result<[TorsionSymbol; 2], EllipticError> {
        let base = LATTICE_BASE | (self.atom << 1);
        Ok([TorsionSymbol::new(base, self.rank)?, TorsionSymbol::new(base | 1, self.rank)?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Slot {
    Line(LineBundleClass),
    Indecomposable(IndecomposableSlot),
}

impl Slot {
    pub fn rank(&self) -> u32 {
        match self {
            Slot::Line(_) => 1,
            Slot::Indecomposable(s) => s.rank,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Slot::Line(l) => l.degree(),
            Slot::Indecomposable(s) => s.degree,
        }
    }

    /// The slot as a line class, for line slots and rank-1 atoms.
    pub fn as_line(&self) -> Option<LineBundleClass> {
        match self {
            Slot::Line(l) => Some(l.clone()),
            Slot::Indecomposable(s) if s.rank == 1 => {
                Some(LineBundleClass::with_twist(s.degree, 0, s.twist.clone()))
            }
            Slot::Indecomposable(_) => None,
        }
    }

    pub fn h0(&self) -> i64 {
        let d = self.degree();
        if d > 0 {
            return d;
        }
        if d < 0 {
            return 0;
        }
        let trivial = match self {
            Slot::Line(l) => l.is_trivial(),
            Slot::Indecomposable(s) => s.twist.is_trivial(),
        };
        i64::from(trivial)
    }

    /// `self (x) O(-xP - yQ)`.
    pub fn twisted(&self, x: i64, y: i64) -> Slot {
        match self {
            Slot::Line(l) => Slot::Line(l.twisted(x, y)),
            Slot::Indecomposable(s) => {
                let mut s = s.clone();
                s.degree -= i64::from(s.rank) * (x + y);
                s.twist = &s.twist + &Degree0Class::pq(y);
                Slot::Indecomposable(s)
            }
        }
    }

    pub fn dual(&self) -> Slot {
        match self {
            Slot::Line(l) => Slot::Line(l.dual()),
            Slot::Indecomposable(s) => Slot::Indecomposable(IndecomposableSlot {
                rank: s.rank,
                degree: -s.degree,
                atom: s.atom,
                conjugate: !s.conjugate,
                twist: -&s.twist,
            }),
        }
    }

    pub fn tensor_line(&self, l: &LineBundleClass) -> Slot {
        match self {
            Slot::Line(m) => Slot::Line(m.tensor(l)),
            Slot::Indecomposable(s) => {
                let mut s = s.clone();
                s.degree += i64::from(s.rank) * l.degree();
                s.twist = &s.twist + &l.relative_to_p();
                Slot::Indecomposable(s)
            }
        }
    }

    /// Direct-sum expansion of `self (x) other`.
    pub fn tensor(&self, other: &Slot) -> Result<Vec<Slot>, EllipticError> {
        match (self.as_line(), other.as_line()) {
            (Some(a), Some(b)) => Ok(alloc::vec![Slot::Line(a.tensor(&b))]),
            (Some(a), None) => Ok(alloc::vec![other.tensor_line(&a)]),
            (None, Some(b)) => Ok(alloc::vec![self.tensor_line(&b)]),
            (None, None) => {
                let (Slot::Indecomposable(x), Slot::Indecomposable(y)) = (self, other) else {
                    unreachable!("non-line slots are indecomposable")
                };
                atom_pair(x, y)
            }
        }
    }
}

/// `F (x) F*` up to twists: the `r'^2` classes of the formal `r'`-torsion lattice.
fn atom_pair(x: &IndecomposableSlot, y: &IndecomposableSlot) -> Result<Vec<Slot>, EllipticError> {
    for s in [x, y] {
        if s.gcd() != 1 {
            return Err(EllipticError::NotCoprime { rank: s.rank, degree: s.degree });
        }
    }
    let r = i64::from(x.rank);
    if x.atom != y.atom || x.rank != y.rank || x.conjugate == y.conjugate {
        return Err(EllipticError::UnsupportedTensor);
    }
    let total = x.degree + y.degree;
    if total % r != 0 {
        return Err(EllipticError::UnsupportedTensor);
    }
    let base = LineBundleClass::with_twist(total / r, 0, &x.twist + &y.twist);
    let [t0, t1] = x.lattice()?;
    let mut out = Vec::with_capacity((r * r) as usize);
    for u in 0..r {
        for v in 0..r {
            let tor = &Degree0Class::torsion(t0, u) + &Degree0Class::torsion(t1, v);
            let mut l = base.clone();
            l.twist = &l.twist + &tor;
            out.push(Slot::Line(l));
        }
    }
    Ok(out)
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Line(l) => write!(f, "{l}"),
            Slot::Indecomposable(s) => {
                let star = if s.conjugate { "*" } else { "" };
                write!(f, "F{}{star}[r={},d={}]", s.atom, s.rank, s.degree)?;
                if !s.twist.is_trivial() {
                    write!(f, "({})", s.twist)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BundleOnComponent {
    pub slots: Vec<Slot>,
}

impl BundleOnComponent {
    pub fn new(slots: Vec<Slot>) -> Self {
        BundleOnComponent { slots }
    }

    pub fn rank(&self) -> u32 {
        self.slots.iter().map(Slot::rank).sum()
    }

    pub fn degree(&self) -> i64 {
        self.slots.iter().map(Slot::degree).sum()
    }

    pub fn twisted(&self, x: i64, y: i64) -> Self {
        BundleOnComponent { slots: self.slots.iter().map(|s| s.twisted(x, y)).collect() }
    }

    pub fn dual(&self) -> Self {
        BundleOnComponent { slots: self.slots.iter().map(Slot::dual).collect() }
    }

    pub fn tensor_line(&self, l: &LineBundleClass) -> Self {
        BundleOnComponent { slots: self.slots.iter().map(|s| s.tensor_line(l)).collect() }
    }

    /// Slot-wise tensor product. Returns the expanded bundle and, for each pair
    /// `(i, j)` in row-major order, the range of output slots it occupies.
    pub fn tensor(
        &self,
        other: &BundleOnComponent,
    ) -> Result<(BundleOnComponent, Vec<core::ops::Range<usize>>), EllipticError> {
        let mut slots = Vec::new();
        let mut blocks = Vec::with_capacity(self.slots.len() * other.slots.len());
        for a in &self.slots {
            for b in &other.slots {
                let start = slots.len();
                slots.extend(a.tensor(b)?);
                blocks.push(start..slots.len());
            }
        }
        Ok((BundleOnComponent { slots }, blocks))
    }
}

pub fn h0_component(e: &BundleOnComponent) -> i64 {
    e.slots.iter().map(Slot::h0).sum()
}

/// `Hom(e, e) = e* (x) e`, ordered by (source slot, target slot).
pub fn end_decomposition(e: &BundleOnComponent) -> Result<BundleOnComponent, EllipticError> {
    for s in &e.slots {
        if let Slot::Indecomposable(x) = s {
            if x.gcd() != 1 {
                return Err(EllipticError::NotCoprime { rank: x.rank, degree: x.degree });
            }
        }
    }
    let (out, _) = e.dual().tensor(e)?;
    Ok(out)
}
