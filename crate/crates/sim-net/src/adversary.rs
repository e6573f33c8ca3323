//! Static adversary: the corrupt set is fixed before event zero, behaviors
//! are per corrupt party, and a pre-stabilization scheduling function may
//! stretch specific deliveries.

use crate::TimeUs;
use btc_protocols::SharePath;
use consensus_mbb::{MsgKind, Round};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdversaryPolicy {
    pub corrupt: BTreeSet<usize>,
    #[serde(default)]
    pub behaviors: Vec<(usize, Behavior)>,
    /// Extra pre-stabilization delivery delays; additive across matches.
    #[serde(default)]
    pub schedule: Vec<ScheduleRule>,
    /// Scripted message-to-empty prefinalize transitions at honest parties,
    /// modelling locked parties that give up on a round.
    #[serde(default)]
    pub forced_bot: Vec<ForcedBot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Behavior {
    /// Stops sending and processing at the given time.
    CrashAt { at: TimeUs },
    /// Never sends share messages on the matching path.
    Withhold { path: PathFilter },
    /// Sends matching share messages only to the target set.
    SelectiveSend {
        path: PathFilter,
        targets: BTreeSet<usize>,
    },
    /// As the round's leader, proposes different payloads to different halves.
    Equivocate { round: Round },
    /// Broadcasts its own output shares the moment it sees the proposal.
    EarlyReveal { round: Round },
    /// Sends syntactically valid share messages with corrupted values.
    GarbleShares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathFilter {
    Fast,
    Slow,
    Share,
    All,
}

impl PathFilter {
    pub fn matches(&self, path: SharePath) -> bool {
        match self {
            PathFilter::All => true,
            PathFilter::Fast => path == SharePath::FastShare,
            PathFilter::Slow => path == SharePath::SlowShare,
            PathFilter::Share => path == SharePath::Share,
        }
    }
}

/// Message selector for pre-stabilization delivery stretching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRule {
    pub round: Option<Round>,
    #[serde(default)]
    pub kinds: Vec<WireKindSel>,
    pub to: Option<BTreeSet<usize>>,
    pub from: Option<BTreeSet<usize>>,
    pub extra_delay: TimeUs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireKindSel {
    Propose,
    Vote,
    Prefin,
    Share,
    FastShare,
    SlowShare,
}

impl WireKindSel {
    pub fn matches_consensus(&self, kind: MsgKind) -> bool {
        matches!(
            (self, kind),
            (WireKindSel::Propose, MsgKind::Propose)
                | (WireKindSel::Vote, MsgKind::Vote)
                | (WireKindSel::Prefin, MsgKind::Prefin)
        )
    }

    pub fn matches_share(&self, path: SharePath) -> bool {
        matches!(
            (self, path),
            (WireKindSel::Share, SharePath::Share)
                | (WireKindSel::FastShare, SharePath::FastShare)
                | (WireKindSel::SlowShare, SharePath::SlowShare)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedBot {
    pub party: usize,
    pub round: Round,
    pub at: TimeUs,
}

impl AdversaryPolicy {
    pub fn honest() -> Self {
        AdversaryPolicy::default()
    }

    pub fn is_corrupt(&self, party: usize) -> bool {
        self.corrupt.contains(&party)
    }

    pub fn behaviors_of(&self, party: usize) -> impl Iterator<Item = &Behavior> {
        self.behaviors
            .iter()
            .filter(move |(p, _)| *p == party)
            .map(|(_, b)| b)
    }

    pub fn crash_time(&self, party: usize) -> Option<TimeUs> {
        self.behaviors_of(party).find_map(|b| match b {
            Behavior::CrashAt { at } => Some(*at),
            _ => None,
        })
    }
}
