//! Maps a stake distribution and stake-denominated threshold pairs to small
//! integer weights and weight thresholds.
//!
//! A returned profile guarantees, for the pair `(t_sec, t_rec)` it was built
//! for:
//!
//! * **G1** — every subset of parties with combined stake `< t_sec` has
//!   combined weight `< w`, so it cannot reconstruct;
//! * **G2** — every subset with combined stake `>= t_rec` has combined weight
//!   `>= w`, so it always can.
//!
//! Subsets with stake inside `[t_sec, t_rec)` are intentionally
//! unconstrained. Weights come from scaling stakes by a rational factor and
//! rounding half-up; the threshold is chosen as the largest value every
//! `t_rec`-stake coalition still clears, which maximizes the secrecy margin.
//! If no threshold separates the two subset families the scale is doubled and
//! the procedure retried, up to a bound, after which the inputs are reported
//! infeasible — never silently weakened.
//!
//! For up to 20 parties the separating bounds are computed exactly by subset
//! enumeration (the same enumeration the exhaustive verifier uses). Beyond
//! that, certified analytic bounds on the rounding error take over and the
//! sampled verifier provides probabilistic assurance only.

mod round;
mod verify;

pub use round::{round, round_dual, ScaleHint, MAX_ESCALATIONS};
pub use verify::{verify_profile, Guarantee, VerifyMode, VerifyOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-party stakes, as used by consensus voting. Positive, nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StakeProfile {
    stakes: Vec<u64>,
}

impl StakeProfile {
    pub fn new(stakes: Vec<u64>) -> Result<Self, RoundingError> {
        if stakes.is_empty() {
            return Err(RoundingError::InvalidStakes("empty stake list".into()));
        }
        if stakes.iter().any(|&s| s == 0) {
            return Err(RoundingError::InvalidStakes(
                "stakes must be positive".into(),
            ));
        }
        Ok(StakeProfile { stakes })
    }

    pub fn stakes(&self) -> &[u64] {
        &self.stakes
    }

    pub fn len(&self) -> usize {
        self.stakes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stakes.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.stakes.iter().map(|&s| s as u128).sum()
    }
}

/// A stake-denominated threshold pair, strict ramp by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub t_sec: u128,
    pub t_rec: u128,
}

impl ThresholdPair {
    pub fn new(t_sec: u128, t_rec: u128, total: u128) -> Result<Self, RoundingError> {
        if !(0 < t_sec && t_sec < t_rec && t_rec <= total) {
            return Err(RoundingError::InvalidThresholds(format!(
                "need 0 < t_sec < t_rec <= total stake, got ({t_sec}, {t_rec}) of {total}"
            )));
        }
        Ok(ThresholdPair { t_sec, t_rec })
    }
}

/// Rounded weights plus the weight threshold(s) the guarantees hold for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub weights: Vec<u64>,
    pub total_weight: u64,
    pub w_slow: u64,
    pub w_fast: Option<u64>,
    /// Escalations of the scale factor that were needed.
    pub escalations: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoundingError {
    #[error("invalid stake profile: {0}")]
    InvalidStakes(String),
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("invalid scale hint: {0}")]
    InvalidScaleHint(String),
    #[error("no feasible weight threshold after {escalations} scale escalations")]
    Infeasible { escalations: u32 },
    #[error("exhaustive verification is bounded at 20 parties, got {0}")]
    ExhaustiveTooLarge(usize),
}
