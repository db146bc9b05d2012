use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::Liveness;
use super::field::{is_prime, mul_mod, rank_mod_p, DEFAULT_PRIME};
use super::product::ProductSection;
use crate::chain::Redistribution;
use crate::elliptic::adapted_basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleConfig {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { prime: DEFAULT_PRIME, seed: 0, trials: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("at least one trial is required")]
    NoTrials,
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !is_prime(self.prime) {
            return Err(OracleError::NotPrime(self.prime));
        }
        if self.trials == 0 {
            return Err(OracleError::NoTrials);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleReport {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    /// Rank found in each trial.
    pub ranks: Vec<usize>,
    /// Maximum over the trials.
    pub rank: usize,
}

/// Column of the oracle matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Coord {
    /// Coefficient on a basis row `(p, q)` of a line slot.
    Window { component: usize, slot: usize, p: i64, q: i64 },
    /// Fibre coordinate `f` of the `P`-jet of order `p` in a block.
    Jet { component: usize, slot: usize, p: i64, f: usize },
}

pub(crate) fn stream(cfg: &OracleConfig, trial: u32, tag: u32, x: u64, y: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&cfg.seed.to_le_bytes());
    seed[8..12].copy_from_slice(&trial.to_le_bytes());
    seed[12..16].copy_from_slice(&tag.to_le_bytes());
    seed[16..24].copy_from_slice(&x.to_le_bytes());
    seed[24..32].copy_from_slice(&y.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

fn nonzero(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    rng.next_u64() % (p - 1) + 1
}

/// Rank of the products' coordinate matrix with every generic scalar drawn at
/// random mod `cfg.prime`, maximized over `cfg.trials` independent draws.
///
/// Coefficients are keyed by factor ids, so repeated products give repeated rows.
pub fn oracle_rank(
    products: &[ProductSection],
    redist: &Redistribution,
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    cfg.validate()?;
    let p = cfg.prime;
    let m = redist.p_thresholds.len();
    let mut ranks = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let mut rows = Vec::with_capacity(products.len());
        let mut cols: BTreeMap<Coord, usize> = BTreeMap::new();
        for prod in products {
            let (fa, fb) = (prod.factors.0 as u64, prod.factors.1 as u64);
            let mut coeffs = stream(cfg, trial, 0, fa, fb);
            let mut glue_a = stream(cfg, trial, 1, fa, 0);
            let mut glue_b = stream(cfg, trial, 2, fb, 0);
            let mut row = BTreeMap::new();
            for i in 0..m.min(prod.aspects.len()) {
                // drawn for every component so the stream layout is fixed
                let scale = mul_mod(nonzero(&mut glue_a, p), nonzero(&mut glue_b, p), p);
                let x = prod.aspects[i];
                let (tp, tq) = (redist.p_thresholds[i], redist.q_thresholds[i]);
                if Liveness::of(&x, tp, tq) == Liveness::Dead {
                    continue;
                }
                let (op, oq) = ((x.ord_p - tp).max(0), (x.ord_q - tq).max(0));
                let line = redist.bundles[i].slots.get(x.slot).and_then(|s| s.as_line());
                let window = match (x.width, line) {
                    (1, Some(l)) if x.exact_p && x.exact_q && l.degree() > 0 => adapted_basis(&l)
                        .ok()
                        .map(|b| b.into_iter().filter(|r| r.ord_p >= op && r.ord_q >= oq).collect::<Vec<_>>())
                        .filter(|w| !w.is_empty()),
                    _ => None,
                };
                let coords: Vec<Coord> = match window {
                    Some(w) => w
                        .iter()
                        .map(|r| Coord::Window { component: i, slot: x.slot, p: r.ord_p, q: r.ord_q })
                        .collect(),
                    None => (0..x.width)
                        .map(|f| Coord::Jet { component: i, slot: x.slot, p: op, f })
                        .collect(),
                };
                for c in coords {
                    let n = cols.len();
                    let col = *cols.entry(c).or_insert(n);
                    row.insert(col, mul_mod(scale, nonzero(&mut coeffs, p), p));
                }
            }
            rows.push(row);
        }
        ranks.push(rank_mod_p(&rows, p));
    }
    let rank = ranks.iter().copied().max().unwrap_or(0);
    Ok(OracleReport { prime: p, seed: cfg.seed, trials: cfg.trials, ranks, rank })
}
