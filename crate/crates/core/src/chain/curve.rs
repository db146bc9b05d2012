use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ComponentKind {
    Elliptic,
    Rational,
}

/// Components `C_1..C_M` with `Q_i` glued to `P_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainCurve {
    pub kinds: Vec<ComponentKind>,
}

impl ChainCurve {
    pub fn elliptic(g: usize) -> Self {
        ChainCurve { kinds: alloc::vec![ComponentKind::Elliptic; g] }
    }

    pub fn components(&self) -> usize {
        self.kinds.len()
    }

    pub fn nodes(&self) -> usize {
        self.kinds.len().saturating_sub(1)
    }

    pub fn genus(&self) -> usize {
        self.kinds.iter().filter(|k| **k == ComponentKind::Elliptic).count()
    }
}

/// Gluing at the node `Q_i ~ P_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NodeGluing {
    /// Slot `j` of `E_i` is glued to slot `map[j]` of `E_{i+1}`.
    SlotMatching { map: Vec<usize> },
    /// Generic identification, optionally matching some rows of `V_i` to rows
    /// of `V_{i+1}` as `(row on C_i, row on C_{i+1})`.
    Generic { distinguished: Vec<(usize, usize)> },
}

impl NodeGluing {
    pub fn generic() -> Self {
        NodeGluing::Generic { distinguished: Vec::new() }
    }

    pub fn identity(slots: usize) -> Self {
        NodeGluing::SlotMatching { map: (0..slots).collect() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GluingData {
    pub nodes: Vec<NodeGluing>,
}
