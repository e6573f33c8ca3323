//! Per-protocol threshold wiring and its validity rules.

use crate::BtcError;
use serde::{Deserialize, Serialize};
use tc_core::ThresholdParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    Slow,
    Tight,
    Fast,
}

/// What the evaluation input binds to. Omitting the message is safe when at
/// most one message can be prefinalized per round, and is what a
/// randomness-beacon deployment does; binding the message is the general
/// case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EvalInputMode {
    #[default]
    RoundAndMessage,
    RoundOnly,
}

/// The evaluation input a round/value pair maps to under `mode`.
pub fn eval_input_for(
    mode: EvalInputMode,
    round: consensus_mbb::Round,
    value: &consensus_mbb::Value,
) -> tc_core::EvalInput {
    match mode {
        EvalInputMode::RoundAndMessage => tc_core::EvalInput {
            round,
            message: value.clone(),
        },
        EvalInputMode::RoundOnly => tc_core::EvalInput::bot(round),
    }
}

/// One sharing: the stake-denominated thresholds the guarantees are stated
/// against, and the unit-denominated parameters the dealer actually used.
/// With exact weights (one unit per stake) the two coincide; with rounded
/// weights the unit thresholds come out of the rounding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingSpec {
    pub stake_sec: u128,
    pub stake_rec: u128,
    pub unit_params: ThresholdParams,
}

/// Threshold inequalities per protocol, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathConfig {
    Slow { primary: SharingSpec },
    Tight { primary: SharingSpec },
    Fast { primary: SharingSpec, fast: SharingSpec },
}

impl PathConfig {
    pub fn kind(&self) -> ProtocolKind {
        match self {
            PathConfig::Slow { .. } => ProtocolKind::Slow,
            PathConfig::Tight { .. } => ProtocolKind::Tight,
            PathConfig::Fast { .. } => ProtocolKind::Fast,
        }
    }

    pub fn primary(&self) -> &SharingSpec {
        match self {
            PathConfig::Slow { primary }
            | PathConfig::Tight { primary }
            | PathConfig::Fast { primary, .. } => primary,
        }
    }

    pub fn fast(&self) -> Option<&SharingSpec> {
        match self {
            PathConfig::Fast { fast, .. } => Some(fast),
            _ => None,
        }
    }

    /// Checks the stake-level inequalities against the consensus thresholds.
    pub fn validate(
        &self,
        total_stake: u128,
        fault_bound: u128,
        t_fin: u128,
    ) -> Result<(), BtcError> {
        let t = fault_bound;
        let n = total_stake;
        match self {
            PathConfig::Slow { primary } => {
                let (sec, rec) = (primary.stake_sec, primary.stake_rec);
                if !(t + 1 <= sec && sec <= rec && rec <= n - t) {
                    return Err(BtcError::InvalidPathConfig(format!(
                        "slow sharing needs t+1 <= t_sec <= t_rec <= n-t, got ({sec}, {rec}) with t={t}, n={n}"
                    )));
                }
            }
            PathConfig::Tight { primary } => {
                if !(primary.stake_sec == t_fin && primary.stake_rec == t_fin) {
                    return Err(BtcError::InvalidPathConfig(format!(
                        "tight sharing needs t_sec = t_rec = t_fin = {t_fin}, got ({}, {})",
                        primary.stake_sec, primary.stake_rec
                    )));
                }
                if t_fin > n - t {
                    return Err(BtcError::InvalidPathConfig(
                        "tight sharing needs t_fin <= n - t for termination".into(),
                    ));
                }
            }
            PathConfig::Fast { primary, fast } => {
                let (sec, rec) = (primary.stake_sec, primary.stake_rec);
                if !(t + 1 <= sec && sec < rec && rec <= n - t) {
                    return Err(BtcError::InvalidPathConfig(format!(
                        "fast protocol's slow sharing needs t+1 <= t_sec < t_rec <= n-t, got ({sec}, {rec})"
                    )));
                }
                if !(fast.stake_sec == t_fin && t_fin < fast.stake_rec && fast.stake_rec <= n) {
                    return Err(BtcError::InvalidPathConfig(format!(
                        "fast sharing needs t_sec' = t_fin < t_rec' <= n, got ({}, {}) with t_fin={t_fin}",
                        fast.stake_sec, fast.stake_rec
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(sec: u128, rec: u128, units: (u64, u64, u64)) -> SharingSpec {
        SharingSpec {
            stake_sec: sec,
            stake_rec: rec,
            unit_params: ThresholdParams::new(units.0, units.1, units.2).unwrap(),
        }
    }

    #[test]
    fn slow_bounds() {
        let ok = PathConfig::Slow {
            primary: spec(2, 3, (4, 2, 3)),
        };
        assert!(ok.validate(4, 1, 3).is_ok());
        let bad = PathConfig::Slow {
            primary: spec(1, 3, (4, 1, 3)),
        };
        assert!(bad.validate(4, 1, 3).is_err(), "t_sec below t+1");
        let bad = PathConfig::Slow {
            primary: spec(2, 4, (4, 2, 4)),
        };
        assert!(bad.validate(4, 1, 3).is_err(), "t_rec above n-t");
    }

    #[test]
    fn tight_requires_all_three_equal() {
        let ok = PathConfig::Tight {
            primary: spec(3, 3, (4, 3, 3)),
        };
        assert!(ok.validate(4, 1, 3).is_ok());
        let bad = PathConfig::Tight {
            primary: spec(3, 4, (4, 3, 4)),
        };
        assert!(bad.validate(4, 1, 3).is_err());
    }

    #[test]
    fn fast_pins_secrecy_to_t_fin() {
        let ok = PathConfig::Fast {
            primary: spec(3, 5, (7, 3, 5)),
            fast: spec(5, 7, (7, 5, 7)),
        };
        assert!(ok.validate(7, 2, 5).is_ok());
        let bad = PathConfig::Fast {
            primary: spec(3, 5, (7, 3, 5)),
            fast: spec(4, 7, (7, 4, 7)),
        };
        assert!(bad.validate(7, 2, 5).is_err(), "t_sec' must equal t_fin");
        let bad = PathConfig::Fast {
            primary: spec(3, 5, (7, 3, 5)),
            fast: spec(5, 5, (7, 5, 5)),
        };
        assert!(bad.validate(7, 2, 5).is_err(), "t_rec' must exceed t_fin");
    }
}
