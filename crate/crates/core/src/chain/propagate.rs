//! Carrying sections across nodes: a row with `Q`-order `q` on `C_i` continues
//! on `C_{i+1}` as the basis row of least `P`-order at least `a - q`.

use alloc::vec::Vec;

use crate::elliptic::{section_basis, EllipticError, LineBundleClass, SectionBasis, SectionSymbol};

impl SectionBasis {
    /// The distinct basis row of least `P`-order `>= p`.
    pub fn at_least(&self, p: i64) -> Result<SectionSymbol, EllipticError> {
        self.rows
            .iter()
            .find(|r| r.ord_p >= p.max(0))
            .copied()
            .ok_or(EllipticError::NominalOutOfRange { k: p, degree: self.degree })
    }
}

/// Rows of a single line slot along a chain, starting from nominal `P`-orders on
/// the first component. `out[i][t]` is row `t` on component `i`.
pub(crate) fn line_chain(
    classes: &[LineBundleClass],
    start: &[i64],
    a: i64,
) -> Result<Vec<Vec<SectionSymbol>>, EllipticError> {
    let mut out = Vec::with_capacity(classes.len());
    let mut nominal = start.to_vec();
    for l in classes {
        let basis = section_basis(l)?;
        let rows = nominal.iter().map(|&p| basis.at_least(p)).collect::<Result<Vec<_>, _>>()?;
        nominal = rows.iter().map(|r| a - r.ord_q).collect();
        out.push(rows);
    }
    Ok(out)
}
