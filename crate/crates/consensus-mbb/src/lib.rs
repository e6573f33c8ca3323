//! A minimal two-phase, leader-based multi-shot broadcast: one single-shot
//! instance per round with a rotating broadcaster, no chaining or pipelining.
//!
//! Round flow: the round's leader proposes; parties vote once for the first
//! proposal they see; a quorum certificate of vote stake makes a party
//! *prefinalize* the value and announce that with a `PREFIN` message; a party
//! *finalizes* the first value for which it holds `t_fin` stake worth of
//! `PREFIN` messages. A local per-round timeout covers dead rounds: a party
//! that never prefinalized a proposal prefinalizes the empty outcome instead,
//! and a round finalizes empty when `t_fin` stake says so. Finalize events
//! are released strictly in round order.
//!
//! A party may transition from having prefinalized a message to prefinalizing
//! the empty outcome, never the reverse; the reverse attempt is suppressed
//! and logged. The honest timeout policy never takes the forward transition
//! on its own (that keeps finalization of distinct values mutually exclusive
//! under the stake bounds checked at config validation); scripted schedules
//! can force it through [`Party::force_bot_prefinalize`].

mod config;
mod message;
mod party;

pub use config::{ConsensusConfig, ConsensusError};
pub use message::{value_label, ConsensusMsg, MsgKind, Recipients, Value};
pub use party::{ConsensusEvent, Party, PrefinState, RoundState, StepOutput, Violation};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Index of a party; stakes and leader rotation key off this.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct PartyId(pub usize);

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

pub type Round = u64;
pub type Stake = u64;
/// Simulated time, microseconds.
pub type TimeUs = u64;
