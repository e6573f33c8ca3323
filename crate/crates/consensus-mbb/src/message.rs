use crate::{PartyId, Round};
use serde::{Deserialize, Serialize};

/// A round's decided content: a broadcast message, or `None` for the empty
/// outcome a timed-out round settles on.
pub type Value = Option<Vec<u8>>;

/// Short human-readable tag for trace output.
pub fn value_label(v: &Value) -> String {
    match v {
        None => "bot".to_string(),
        Some(bytes) => {
            let s = String::from_utf8_lossy(bytes);
            if s.len() <= 24 {
                s.into_owned()
            } else {
                format!("{}..", &s[..22])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MsgKind {
    Propose,
    Vote,
    Prefin,
    /// Local timer expiry, delivered by the scheduler to its owner.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsensusMsg {
    pub kind: MsgKind,
    pub round: Round,
    pub value: Value,
    pub sender: PartyId,
}

impl ConsensusMsg {
    pub fn propose(round: Round, payload: Vec<u8>, sender: PartyId) -> Self {
        ConsensusMsg {
            kind: MsgKind::Propose,
            round,
            value: Some(payload),
            sender,
        }
    }

    pub fn vote(round: Round, payload: Vec<u8>, sender: PartyId) -> Self {
        ConsensusMsg {
            kind: MsgKind::Vote,
            round,
            value: Some(payload),
            sender,
        }
    }

    pub fn prefin(round: Round, value: Value, sender: PartyId) -> Self {
        ConsensusMsg {
            kind: MsgKind::Prefin,
            round,
            value,
            sender,
        }
    }

    pub fn timeout(round: Round, owner: PartyId) -> Self {
        ConsensusMsg {
            kind: MsgKind::Timeout,
            round,
            value: None,
            sender: owner,
        }
    }
}

/// Where an outgoing message goes. Fan-out is the transport's job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipients {
    All,
    Only(Vec<PartyId>),
}

impl Recipients {
    pub fn expand(&self, n_parties: usize) -> Vec<PartyId> {
        match self {
            Recipients::All => (0..n_parties).map(PartyId).collect(),
            Recipients::Only(v) => v.clone(),
        }
    }
}
