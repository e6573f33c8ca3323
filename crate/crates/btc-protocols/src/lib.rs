//! Three ways to attach a threshold evaluation to every finalized consensus
//! round, each producing a totally ordered stream of
//! `(round, value, output)` triples:
//!
//! * **slow** — reveal output shares only after local finalization; one
//!   extra message delay, works for any thresholds inside the fault bounds;
//! * **tight** — reveal at prefinalization with the reconstruction threshold
//!   equal to the finalization threshold; zero overhead when everyone is
//!   honest, requires exact (unrounded) weights;
//! * **fast** — share the secret twice: a fast sharing revealed at
//!   prefinalization (secrecy threshold pinned to the finalization
//!   threshold) plus the slow sharing as fallback, first to reconstruct
//!   wins.
//!
//! Output order is enforced with a FIFO of finalized rounds: a round's
//! triple is emitted only once every earlier round has been, no matter in
//! which order reconstructions land.

mod config;
mod party;

pub use config::{eval_input_for, EvalInputMode, PathConfig, ProtocolKind, SharingSpec};
pub use party::{
    BtcOutput, BtcParty, BtcStep, BtcViolation, PathTag, ShareMsg, SharePath, SharingKeys,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BtcError {
    #[error("invalid path configuration: {0}")]
    InvalidPathConfig(String),
    #[error("key material does not match the path configuration: {0}")]
    KeyMismatch(String),
}
