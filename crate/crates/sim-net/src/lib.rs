//! Deterministic discrete-event simulation of the protocol stack.
//!
//! One `World` owns every party's consensus and protocol state machines, an
//! event queue ordered by `(time, sequence)`, a delay model with a global
//! stabilization time, an adversary policy fixed before event zero, and an
//! information-flow ledger.
//!
//! The ledger computes two global quantities per round from message traffic
//! alone, independent of what any party reports:
//!
//! * **global finalization time** — the earliest instant at which honest
//!   prefinalizations for one value, together with the full corrupt stake,
//!   reach the finalization threshold: from then on no other outcome is
//!   possible;
//! * **global reconstruction time** — the earliest instant at which the
//!   adversary's visible share units (its own from the start, plus every
//!   unit an honest party has sent, seen at send time) cover a
//!   reconstruction threshold for the round's finalized input.
//!
//! Messages emitted by one handler invocation toward the same destination
//! are delivered together with a single sampled delay; the zero-overhead
//! claims of the share-at-prefinalize protocols are exact statements about
//! such paired deliveries, and the simulator makes them assertable as exact
//! equalities in simulated time.

mod adversary;
mod delay;
mod ledger;
mod oracle;
mod spec;
mod summary;
mod trace;
mod world;

pub use adversary::{AdversaryPolicy, Behavior, ForcedBot, PathFilter, ScheduleRule, WireKindSel};
pub use delay::{DelayModelCfg, SampledDist};
pub use ledger::{FlowLedger, RevealSnapshot};
pub use oracle::{
    check_agreement_and_total_order, check_lemma_grt_not_before_gft, check_output_correctness,
    check_secrecy_accounting, check_unique_qc, OracleReport,
};
pub use spec::{RunSpec, SimError};
pub use summary::{ExecutionTrace, OutputRecord, RoundSummary, RunSummary};
pub use trace::TraceEvent;
pub use world::run;

pub use consensus_mbb::TimeUs;
