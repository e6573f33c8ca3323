//! Per-party protocol layer: consumes prefinalize/finalize hooks, emits and
//! consumes share messages, drains ordered outputs.

use crate::{EvalInputMode, ProtocolKind};
use consensus_mbb::{PartyId, Round, TimeUs, Value};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use tc_core::{comb, peval, pver, EvalInput, OutputShare, PublicCommitments, SecretShareBundle, TcOutput};

/// Wire families for output shares. `Share` is the single family of the slow
/// and tight protocols; the fast protocol uses the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharePath {
    Share,
    FastShare,
    SlowShare,
}

/// Which reconstruction produced a round's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathTag {
    Slow,
    Tight,
    Fast,
}

/// A weighted party's units travel in one message per (round, path, value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareMsg {
    pub path: SharePath,
    pub round: Round,
    pub value: Value,
    pub sender: PartyId,
    pub shares: Vec<OutputShare>,
}

/// One drained output triple with the timestamps latency is measured from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BtcOutput {
    pub round: Round,
    pub value: Value,
    pub tc_output: TcOutput,
    pub path: PathTag,
    pub local_finalize_time: TimeUs,
    pub local_output_time: TimeUs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BtcViolation {
    /// A reconstruction bound to a different value than the finalized one.
    SigmaValueMismatch { round: Round },
    /// A share family this protocol never uses.
    UnexpectedPath { round: Round, path: SharePath },
}

#[derive(Debug, Default)]
pub struct BtcStep {
    pub shares: Vec<ShareMsg>,
    pub outputs: Vec<BtcOutput>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Accum {
    Primary,
    Fast,
}

#[derive(Debug, Default)]
struct ShareSet {
    units: BTreeMap<u64, OutputShare>,
}

#[derive(Debug)]
struct SigmaEntry {
    value: Value,
    output: TcOutput,
    path: PathTag,
}

/// Key material for one sharing as held by one party.
#[derive(Debug, Clone)]
pub struct SharingKeys {
    pub commitments: PublicCommitments,
    pub bundle: SecretShareBundle,
}

#[derive(Debug)]
pub struct BtcParty {
    me: PartyId,
    kind: ProtocolKind,
    eval_mode: EvalInputMode,
    gc_horizon: u64,
    primary: SharingKeys,
    fast: Option<SharingKeys>,
    m_map: BTreeMap<Round, Value>,
    sigma: BTreeMap<Round, SigmaEntry>,
    queue: VecDeque<Round>,
    accum: BTreeMap<(Round, Value, Accum), ShareSet>,
    sent: BTreeSet<(Round, SharePath, bool)>,
    finalize_times: BTreeMap<Round, TimeUs>,
    violations: Vec<BtcViolation>,
    dropped_invalid: u64,
    recon_log: Vec<(Round, PathTag)>,
}

impl BtcParty {
    pub fn new(
        me: PartyId,
        kind: ProtocolKind,
        eval_mode: EvalInputMode,
        primary: SharingKeys,
        fast: Option<SharingKeys>,
    ) -> Self {
        debug_assert_eq!(
            matches!(kind, ProtocolKind::Fast),
            fast.is_some(),
            "fast protocol and only it carries a second sharing"
        );
        BtcParty {
            me,
            kind,
            eval_mode,
            gc_horizon: 8,
            primary,
            fast,
            m_map: BTreeMap::new(),
            sigma: BTreeMap::new(),
            queue: VecDeque::new(),
            accum: BTreeMap::new(),
            sent: BTreeSet::new(),
            finalize_times: BTreeMap::new(),
            violations: Vec::new(),
            dropped_invalid: 0,
            recon_log: Vec::new(),
        }
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn dropped_invalid_shares(&self) -> u64 {
        self.dropped_invalid
    }

    pub fn take_violations(&mut self) -> Vec<BtcViolation> {
        std::mem::take(&mut self.violations)
    }

    /// The evaluation input a round/value pair maps to.
    pub fn input_for(&self, round: Round, value: &Value) -> EvalInput {
        crate::eval_input_for(self.eval_mode, round, value)
    }

    /// Immediate broadcast of this party's shares for a round, outside the
    /// protocol-mandated release points. Adversarial parties use this to
    /// reveal early; the dedup flags still apply.
    pub fn reveal_shares(&mut self, round: Round, value: &Value) -> Vec<ShareMsg> {
        let mut out = Vec::new();
        match self.kind {
            ProtocolKind::Slow | ProtocolKind::Tight => {
                out.extend(self.emit_share(SharePath::Share, round, value));
            }
            ProtocolKind::Fast => {
                out.extend(self.emit_share(SharePath::FastShare, round, value));
                out.extend(self.emit_share(SharePath::SlowShare, round, value));
            }
        }
        out
    }

    /// Reconstructions since the last call, for trace timelines.
    pub fn take_reconstructions(&mut self) -> Vec<(Round, PathTag)> {
        std::mem::take(&mut self.recon_log)
    }

    /// Share release at the prefinalize hook. The slow protocol stays quiet
    /// here; tight releases its single sharing, fast releases the fast one.
    pub fn on_prefinalize(&mut self, round: Round, value: &Value, _now: TimeUs) -> Vec<ShareMsg> {
        match self.kind {
            ProtocolKind::Slow => Vec::new(),
            ProtocolKind::Tight => self.emit_share(SharePath::Share, round, value),
            ProtocolKind::Fast => self.emit_share(SharePath::FastShare, round, value),
        }
    }

    /// Finalize hook: record the round, push it on the FIFO, release the
    /// finalize-time shares, then drain whatever is ready.
    pub fn on_finalize(&mut self, round: Round, value: &Value, now: TimeUs) -> BtcStep {
        let mut step = BtcStep::default();
        if self.m_map.contains_key(&round) {
            return step; // duplicate finalize, write-once
        }
        self.m_map.insert(round, value.clone());
        self.finalize_times.insert(round, now);
        self.queue.push_back(round);

        match self.kind {
            ProtocolKind::Slow => {
                step.shares = self.emit_share(SharePath::Share, round, value);
            }
            ProtocolKind::Tight => {
                // only if no share for this round left yet (any value)
                let sent_any = self.sent.contains(&(round, SharePath::Share, false))
                    || self.sent.contains(&(round, SharePath::Share, true));
                if !sent_any {
                    step.shares = self.emit_share(SharePath::Share, round, value);
                }
            }
            ProtocolKind::Fast => {
                // always reveal the slow-sharing share, even if the fast
                // path already reconstructed locally; others may need it
                step.shares = self.emit_share(SharePath::SlowShare, round, value);
            }
        }
        step.outputs = self.drain(now);
        step
    }

    /// Handles a received share message: verify units, accumulate, maybe
    /// reconstruct, drain.
    pub fn on_share(&mut self, msg: &ShareMsg, now: TimeUs) -> Vec<BtcOutput> {
        let which = match (self.kind, msg.path) {
            (ProtocolKind::Slow, SharePath::Share) | (ProtocolKind::Tight, SharePath::Share) => {
                Accum::Primary
            }
            (ProtocolKind::Fast, SharePath::FastShare) => Accum::Fast,
            (ProtocolKind::Fast, SharePath::SlowShare) => Accum::Primary,
            (_, path) => {
                self.violations.push(BtcViolation::UnexpectedPath {
                    round: msg.round,
                    path,
                });
                return Vec::new();
            }
        };
        let keys = match which {
            Accum::Primary => &self.primary,
            Accum::Fast => self.fast.as_ref().expect("fast sharing present"),
        };
        let input = self.input_for(msg.round, &msg.value);
        let mut accepted = Vec::new();
        for share in &msg.shares {
            if pver(&keys.commitments, &input, share) {
                accepted.push(share.clone());
            } else {
                self.dropped_invalid += 1;
            }
        }
        if accepted.is_empty() {
            return Vec::new();
        }

        let t_rec = keys.commitments.params.t_rec;
        let set = self
            .accum
            .entry((msg.round, msg.value.clone(), which))
            .or_default();
        for share in accepted {
            set.units.entry(share.unit_index).or_insert(share);
        }
        if set.units.len() as u64 >= t_rec && !self.sigma.contains_key(&msg.round) {
            let shares: Vec<OutputShare> = set.units.values().cloned().collect();
            let keys = match which {
                Accum::Primary => &self.primary,
                Accum::Fast => self.fast.as_ref().expect("fast sharing present"),
            };
            if let Ok(output) = comb(&keys.commitments, &input, &shares) {
                let path = match (self.kind, which) {
                    (ProtocolKind::Tight, _) => PathTag::Tight,
                    (_, Accum::Fast) => PathTag::Fast,
                    (_, Accum::Primary) => PathTag::Slow,
                };
                self.sigma.insert(
                    msg.round,
                    SigmaEntry {
                        value: msg.value.clone(),
                        output,
                        path,
                    },
                );
                self.recon_log.push((msg.round, path));
            }
        }
        self.drain(now)
    }

    fn emit_share(&mut self, path: SharePath, round: Round, value: &Value) -> Vec<ShareMsg> {
        // one share message per (round, path) for a real message, plus at
        // most one for the empty outcome
        if !self.sent.insert((round, path, value.is_none())) {
            return Vec::new();
        }
        let keys = match path {
            SharePath::FastShare => self.fast.as_ref().expect("fast sharing present"),
            SharePath::Share | SharePath::SlowShare => &self.primary,
        };
        let input = self.input_for(round, value);
        let shares = peval(&keys.bundle, &input);
        vec![ShareMsg {
            path,
            round,
            value: value.clone(),
            sender: self.me,
            shares,
        }]
    }

    /// Pops the FIFO while the head round has a reconstruction, emitting
    /// outputs in strict round order.
    fn drain(&mut self, now: TimeUs) -> Vec<BtcOutput> {
        let mut out = Vec::new();
        while let Some(&round) = self.queue.front() {
            let Some(sig) = self.sigma.get(&round) else {
                break;
            };
            let value = self.m_map.get(&round).expect("queued rounds are mapped");
            if self.input_for(round, &sig.value) != self.input_for(round, value) {
                // cannot happen while the threshold bounds hold
                self.violations
                    .push(BtcViolation::SigmaValueMismatch { round });
                break;
            }
            let sig = self.sigma.remove(&round).expect("just observed");
            out.push(BtcOutput {
                round,
                value: value.clone(),
                tc_output: sig.output,
                path: sig.path,
                local_finalize_time: self.finalize_times[&round],
                local_output_time: now,
            });
            self.queue.pop_front();
            self.gc(round);
        }
        out
    }

    fn gc(&mut self, drained: Round) {
        let Some(cutoff) = drained.checked_sub(self.gc_horizon) else {
            return;
        };
        self.m_map.retain(|&r, _| r > cutoff);
        self.finalize_times.retain(|&r, _| r > cutoff);
        self.accum.retain(|(r, _, _), _| *r > cutoff);
        self.sent.retain(|(r, _, _)| *r > cutoff);
    }
}
