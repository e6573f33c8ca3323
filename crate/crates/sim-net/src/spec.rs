//! Validated runtime description of one simulation run.

use crate::adversary::{AdversaryPolicy, Behavior};
use crate::delay::DelayModelCfg;
use crate::TimeUs;
use btc_protocols::{EvalInputMode, PathConfig, ProtocolKind};
use consensus_mbb::ConsensusConfig;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub name: String,
    pub seed: u64,
    pub rounds: u64,
    pub horizon: TimeUs,
    pub consensus: ConsensusConfig,
    pub protocol: ProtocolKind,
    #[serde(default)]
    pub eval_mode: EvalInputMode,
    pub path_config: PathConfig,
    /// Share units per party; must sum to each sharing's unit count.
    pub weights: Vec<u64>,
    pub secret: u64,
    pub dealer_seed: u64,
    pub delay: DelayModelCfg,
    /// Known post-stabilization delay bound.
    pub delta_cap: TimeUs,
    pub gst: TimeUs,
    #[serde(default)]
    pub adversary: AdversaryPolicy,
    /// Keep the full event log in memory (summaries are always produced).
    #[serde(default)]
    pub record_events: bool,
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidScenario(m));
        self.consensus
            .validate()
            .map_err(|e| SimError::InvalidScenario(e.to_string()))?;
        let n = self.consensus.n_parties();
        let total = self.consensus.total_stake() as u128;
        let t = self.consensus.fault_bound as u128;
        let t_fin = self.consensus.t_fin as u128;

        if self.path_config.kind() != self.protocol {
            return bad("path config does not match the protocol".into());
        }
        self.path_config
            .validate(total, t, t_fin)
            .map_err(|e| SimError::InvalidScenario(e.to_string()))?;

        if self.weights.len() != n {
            return bad(format!("{} weights for {} parties", self.weights.len(), n));
        }
        let weight_sum: u64 = self.weights.iter().sum();
        for spec in [Some(self.path_config.primary()), self.path_config.fast()]
            .into_iter()
            .flatten()
        {
            if spec.unit_params.n_units != weight_sum {
                return bad(format!(
                    "sharing expects {} units, weights sum to {}",
                    spec.unit_params.n_units, weight_sum
                ));
            }
        }
        if self.protocol == ProtocolKind::Tight {
            if self.weights != self.consensus.party_stakes {
                return bad("tight protocol requires exact weights (units = stakes)".into());
            }
        }

        let corrupt_stake: u64 = self
            .adversary
            .corrupt
            .iter()
            .map(|&p| {
                self.consensus
                    .party_stakes
                    .get(p)
                    .copied()
                    .unwrap_or(u64::MAX)
            })
            .sum();
        if self.adversary.corrupt.iter().any(|&p| p >= n) {
            return bad("corrupt set names an unknown party".into());
        }
        if corrupt_stake > self.consensus.fault_bound {
            return bad(format!(
                "corrupt stake {corrupt_stake} exceeds the fault bound {}",
                self.consensus.fault_bound
            ));
        }
        for (p, b) in &self.adversary.behaviors {
            if !self.adversary.is_corrupt(*p) {
                return bad(format!("behavior assigned to honest party {p}: {b:?}"));
            }
        }
        for fb in &self.adversary.forced_bot {
            if fb.party >= n {
                return bad("forced transition names an unknown party".into());
            }
        }
        if self.rounds == 0 || self.horizon == 0 || self.delta_cap == 0 {
            return bad("rounds, horizon and delay bound must be positive".into());
        }
        if tc_core::Scalar::checked(self.secret).is_none() {
            return bad("secret outside the scalar field".into());
        }
        Ok(())
    }

    pub fn corrupt_stake(&self) -> u64 {
        self.adversary
            .corrupt
            .iter()
            .map(|&p| self.consensus.party_stakes[p])
            .sum()
    }

    pub fn corrupt_units(&self) -> u64 {
        self.adversary
            .corrupt
            .iter()
            .map(|&p| self.weights[p])
            .sum()
    }

    pub fn is_honest(&self, party: usize) -> bool {
        !self.adversary.is_corrupt(party)
    }

    /// Convenience for tests: a fully honest spec is valid with no behaviors.
    pub fn has_crashes(&self) -> bool {
        self.adversary
            .behaviors
            .iter()
            .any(|(_, b)| matches!(b, Behavior::CrashAt { .. }))
    }
}
