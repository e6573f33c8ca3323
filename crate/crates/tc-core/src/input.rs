//! Evaluation inputs and their canonical byte encoding.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The value a threshold evaluation binds to: a round number plus either a
/// finalized message or the distinguished empty outcome.
///
/// The encoding is injective: 8-byte big-endian round, a one-byte tag
/// (`0` for the empty outcome, `1` for a message), then the message bytes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EvalInput {
    pub round: u64,
    pub message: Option<Vec<u8>>,
}

impl EvalInput {
    pub fn message(round: u64, message: impl Into<Vec<u8>>) -> Self {
        EvalInput {
            round,
            message: Some(message.into()),
        }
    }

    /// Input for a round that settled on the empty outcome.
    pub fn bot(round: u64) -> Self {
        EvalInput {
            round,
            message: None,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(9 + self.message.as_ref().map_or(0, Vec::len));
        out.extend_from_slice(&self.round.to_be_bytes());
        match &self.message {
            None => out.push(0u8),
            Some(m) => {
                out.push(1u8);
                out.extend_from_slice(m);
            }
        }
        out
    }
}

impl fmt::Debug for EvalInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.message {
            None => write!(f, "EvalInput(r={}, ⊥)", self.round),
            Some(m) => write!(
                f,
                "EvalInput(r={}, {:?})",
                self.round,
                String::from_utf8_lossy(m)
            ),
        }
    }
}
