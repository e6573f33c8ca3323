use crate::{PartyId, Round, Stake, TimeUs};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConsensusError {
    #[error("invalid consensus config: {0}")]
    InvalidConfig(String),
    #[error("party {party} is not the designated broadcaster of round {round}")]
    NotBroadcaster { party: PartyId, round: Round },
}

/// Stake table and thresholds of one consensus instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsensusConfig {
    pub party_stakes: Vec<Stake>,
    /// Maximum corruptible stake `t`.
    pub fault_bound: Stake,
    /// Finalization threshold in stake.
    pub t_fin: Stake,
    /// Local per-round timeout, measured from the round's scheduled start.
    pub round_timeout: TimeUs,
    /// Pacing between scheduled round starts.
    pub round_interval: TimeUs,
}

impl ConsensusConfig {
    pub fn validate(&self) -> Result<(), ConsensusError> {
        let n = self.total_stake();
        if self.party_stakes.is_empty() || self.party_stakes.iter().any(|&s| s == 0) {
            return Err(ConsensusError::InvalidConfig(
                "party stakes must be nonempty and positive".into(),
            ));
        }
        let t = self.fault_bound;
        if 3 * t >= n {
            return Err(ConsensusError::InvalidConfig(format!(
                "fault bound {t} must satisfy 3t < total stake {n}"
            )));
        }
        if !(t + 1 <= self.t_fin && self.t_fin <= n - t) {
            return Err(ConsensusError::InvalidConfig(format!(
                "finalization threshold {} outside [t+1, n-t] = [{}, {}]",
                self.t_fin,
                t + 1,
                n - t
            )));
        }
        // Finalization of distinct values must be mutually exclusive: with
        // honest prefinalize sets for a message and for the empty outcome
        // disjoint, both can reach t_fin only if 2*t_fin <= n + t.
        if 2 * self.t_fin <= n + t {
            return Err(ConsensusError::InvalidConfig(format!(
                "finalization threshold {} too low for unique finalization; need 2*t_fin > n + t = {}",
                self.t_fin,
                n + t
            )));
        }
        if self.round_timeout == 0 || self.round_interval == 0 {
            return Err(ConsensusError::InvalidConfig(
                "round timeout and interval must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn n_parties(&self) -> usize {
        self.party_stakes.len()
    }

    pub fn total_stake(&self) -> Stake {
        self.party_stakes.iter().sum()
    }

    pub fn stake_of(&self, party: PartyId) -> Stake {
        self.party_stakes[party.0]
    }

    /// Vote stake required for a quorum certificate.
    pub fn vote_quorum(&self) -> Stake {
        self.total_stake() - self.fault_bound
    }

    /// Designated broadcaster, round-robin by party index.
    pub fn leader(&self, round: Round) -> PartyId {
        PartyId((round % self.n_parties() as u64) as usize)
    }

    pub fn round_start(&self, round: Round) -> TimeUs {
        round * self.round_interval
    }

    /// Jolteon-style default: `2t + 1` when stakes are `3t + 1`, and the
    /// matching `n - t` in general.
    pub fn default_t_fin(party_stakes: &[Stake], fault_bound: Stake) -> Stake {
        party_stakes.iter().sum::<Stake>() - fault_bound
    }
}
