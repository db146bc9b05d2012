use alloc::string::String;
use alloc::vec::Vec;

use super::endo::PoinParams;
use super::petri::{PetriCase, PetriParams};
use crate::chain::{LimitLinearSeries, Redistribution, ValidationReport};
use crate::independence::{Certificate, OracleReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Status {
    Proven,
    NotProven,
    HypothesisNotMet,
    Vacuous,
    /// An arithmetic audit disagrees with the construction.
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "theorem", rename_all = "snake_case"))]
pub enum VerdictParams {
    Petri(PetriParams),
    Onto(PoinParams),
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesSummary {
    pub name: String,
    pub rank: u32,
    pub degree: i64,
    pub dimension: usize,
    pub a: i64,
    pub component_degrees: Vec<i64>,
    pub validation: ValidationReport,
}

impl SeriesSummary {
    pub fn of(name: &str, s: &LimitLinearSeries) -> Self {
        SeriesSummary {
            name: name.into(),
            rank: s.rank,
            degree: s.degree,
            dimension: s.dimension,
            a: s.a,
            component_degrees: s.component_degrees(),
            validation: crate::chain::validate_lls(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DimensionAudit {
    /// Dimension the certificate must reach.
    pub expected: usize,
    /// Same target from an independent count.
    pub expected_independent: usize,
    pub products: usize,
    pub certified: usize,
    /// Dimension of the source of the product map, when it differs from `expected`.
    pub domain: usize,
    pub excess: i64,
    /// Upper bound for the image.
    pub ambient: usize,
}

impl DimensionAudit {
    pub fn consistent(&self) -> bool {
        self.expected == self.expected_independent && self.products == self.expected && self.expected <= self.ambient
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdAudit {
    pub component: usize,
    pub computed_p: i64,
    pub computed_q: i64,
    /// Thresholds as stated for the construction; `None` where nothing is stated.
    pub quoted_p: Option<i64>,
    pub quoted_q: Option<i64>,
    /// A negative quoted order is vacuous and compares as 0.
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistributionAudit {
    pub targets: Vec<i64>,
    pub sum: i64,
    pub expected_sum: i64,
    pub congruent: bool,
    pub thresholds: Vec<ThresholdAudit>,
}

impl DistributionAudit {
    pub(crate) fn new(
        red: &Redistribution,
        product_degrees: &[i64],
        quoted: impl Fn(usize) -> (Option<i64>, Option<i64>),
    ) -> Self {
        let r = i64::from(red.rank);
        let thresholds = (0..red.target_degrees.len())
            .map(|i| {
                let (qp, qq) = quoted(i);
                let (cp, cq) = (red.p_thresholds[i], red.q_thresholds[i]);
                let eq = |q: Option<i64>, c: i64| q.is_none_or(|q| q.max(0) == c);
                ThresholdAudit { component: i, computed_p: cp, computed_q: cq, quoted_p: qp, quoted_q: qq, matches: eq(qp, cp) && eq(qq, cq) }
            })
            .collect();
        DistributionAudit {
            targets: red.target_degrees.clone(),
            sum: red.target_degrees.iter().sum(),
            expected_sum: red.degree,
            congruent: red.target_degrees.iter().zip(product_degrees).all(|(t, d)| (t - d).rem_euclid(r) == 0),
            thresholds,
        }
    }

    pub fn consistent(&self) -> bool {
        self.sum == self.expected_sum && self.congruent && self.thresholds.iter().all(|t| t.matches)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub params: VerdictParams,
    pub case: Option<PetriCase>,
    pub status: Status,
    pub series: Vec<SeriesSummary>,
    pub dimension: Option<DimensionAudit>,
    pub distribution: Option<DistributionAudit>,
    pub certificate: Option<Certificate>,
    pub oracle: Option<OracleReport>,
    /// Global sections of the endomorphism series, for the surjectivity pipeline.
    pub endo_h0: Option<usize>,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    pub(crate) fn empty(params: VerdictParams, case: Option<PetriCase>, status: Status) -> Self {
        Verdict {
            params,
            case,
            status,
            series: Vec::new(),
            dimension: None,
            distribution: None,
            certificate: None,
            oracle: None,
            endo_h0: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn certified(&self) -> usize {
        self.dimension.as_ref().map_or(0, |d| d.certified)
    }
}
