//! The honest per-party state machine: `(state, input) -> (state', outputs)`.

use crate::{
    ConsensusConfig, ConsensusError, ConsensusMsg, MsgKind, PartyId, Recipients, Round, Stake,
    TimeUs, Value,
};
use std::collections::{BTreeMap, BTreeSet};

/// Prefinalization progress of one round at one party. The only legal
/// forward transition out of a message is to the empty outcome.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PrefinState {
    #[default]
    None,
    Msg(Vec<u8>),
    MsgThenBot(Vec<u8>),
    Bot,
}

impl PrefinState {
    pub fn message(&self) -> Option<&Vec<u8>> {
        match self {
            PrefinState::Msg(m) | PrefinState::MsgThenBot(m) => Some(m),
            _ => None,
        }
    }

    pub fn has_bot(&self) -> bool {
        matches!(self, PrefinState::Bot | PrefinState::MsgThenBot(_))
    }
}

#[derive(Debug, Clone, Default)]
pub struct RoundState {
    pub proposal: Option<Vec<u8>>,
    pub voted: bool,
    /// Distinct voters per candidate message.
    pub votes: BTreeMap<Vec<u8>, BTreeSet<PartyId>>,
    pub qc: Option<Vec<u8>>,
    pub prefin: PrefinState,
    /// Distinct `PREFIN` senders per candidate value.
    pub prefin_senders: BTreeMap<Value, BTreeSet<PartyId>>,
    /// First value whose `PREFIN` stake crossed `t_fin` here.
    pub crossed: Option<Value>,
    /// Write-once, set when the ordered finalize event is released.
    pub finalized: Option<Value>,
    pub timer_fired: bool,
}

/// Hook events handed to whatever protocol is mounted on the machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsensusEvent {
    Prefinalized { round: Round, value: Value },
    Finalized { round: Round, value: Value },
}

/// Protocol anomalies observed by an honest party; these feed the
/// adversary-behavior oracles, they are not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EquivocationObserved { round: Round, sender: PartyId },
    NonLeaderPropose { round: Round, sender: PartyId },
    MsgAfterBotSuppressed { round: Round },
    DoubleQcObserved { round: Round },
    MalformedMessage { round: Round, sender: PartyId },
}

#[derive(Debug, Default)]
pub struct StepOutput {
    pub outgoing: Vec<(Recipients, ConsensusMsg)>,
    pub events: Vec<ConsensusEvent>,
}

impl StepOutput {
    fn broadcast(&mut self, msg: ConsensusMsg) {
        self.outgoing.push((Recipients::All, msg));
    }
}

#[derive(Debug)]
pub struct Party {
    id: PartyId,
    cfg: ConsensusConfig,
    rounds: BTreeMap<Round, RoundState>,
    /// Rounds whose threshold crossed, awaiting ordered release.
    ready: BTreeMap<Round, Value>,
    next_finalize: Round,
    violations: Vec<Violation>,
}

impl Party {
    pub fn new(id: PartyId, cfg: ConsensusConfig) -> Result<Self, ConsensusError> {
        cfg.validate()?;
        if id.0 >= cfg.n_parties() {
            return Err(ConsensusError::InvalidConfig(format!(
                "party {id} out of range for {} stakes",
                cfg.n_parties()
            )));
        }
        Ok(Party {
            id,
            cfg,
            rounds: BTreeMap::new(),
            ready: BTreeMap::new(),
            next_finalize: 0,
            violations: Vec::new(),
        })
    }

    pub fn id(&self) -> PartyId {
        self.id
    }

    pub fn config(&self) -> &ConsensusConfig {
        &self.cfg
    }

    pub fn round_state(&self, round: Round) -> Option<&RoundState> {
        self.rounds.get(&round)
    }

    pub fn take_violations(&mut self) -> Vec<Violation> {
        std::mem::take(&mut self.violations)
    }

    /// Broadcast a proposal. Only the round's designated broadcaster may;
    /// adversarial parties bypass this API by injecting raw messages.
    pub fn bcast(&mut self, round: Round, payload: Vec<u8>) -> Result<StepOutput, ConsensusError> {
        if self.cfg.leader(round) != self.id {
            return Err(ConsensusError::NotBroadcaster {
                party: self.id,
                round,
            });
        }
        let mut out = StepOutput::default();
        out.broadcast(ConsensusMsg::propose(round, payload, self.id));
        Ok(out)
    }

    pub fn on_message(&mut self, msg: &ConsensusMsg, _now: TimeUs) -> StepOutput {
        let mut out = StepOutput::default();
        match msg.kind {
            MsgKind::Propose => self.on_propose(msg, &mut out),
            MsgKind::Vote => self.on_vote(msg, &mut out),
            MsgKind::Prefin => self.on_prefin(msg, &mut out),
            MsgKind::Timeout => self.on_timeout(msg.round, &mut out),
        }
        out
    }

    /// Forces the message-to-empty prefinalize transition (used by scripted
    /// schedules; the honest timeout policy does not take it by itself).
    pub fn force_bot_prefinalize(&mut self, round: Round) -> StepOutput {
        let mut out = StepOutput::default();
        let rs = self.rounds.entry(round).or_default();
        match std::mem::take(&mut rs.prefin) {
            PrefinState::Msg(m) => {
                rs.prefin = PrefinState::MsgThenBot(m);
                out.events.push(ConsensusEvent::Prefinalized { round, value: None });
                out.broadcast(ConsensusMsg::prefin(round, None, self.id));
            }
            other => rs.prefin = other,
        }
        out
    }

    fn on_propose(&mut self, msg: &ConsensusMsg, out: &mut StepOutput) {
        let Some(payload) = msg.value.as_ref() else {
            self.violations.push(Violation::MalformedMessage {
                round: msg.round,
                sender: msg.sender,
            });
            return;
        };
        if self.cfg.leader(msg.round) != msg.sender {
            self.violations.push(Violation::NonLeaderPropose {
                round: msg.round,
                sender: msg.sender,
            });
            return;
        }
        let rs = self.rounds.entry(msg.round).or_default();
        match &rs.proposal {
            None => rs.proposal = Some(payload.clone()),
            Some(existing) if existing != payload => {
                self.violations.push(Violation::EquivocationObserved {
                    round: msg.round,
                    sender: msg.sender,
                });
                return; // first received wins
            }
            Some(_) => {}
        }
        if !rs.voted {
            rs.voted = true;
            let vote_for = rs.proposal.clone().expect("just recorded");
            out.broadcast(ConsensusMsg::vote(msg.round, vote_for, self.id));
        }
    }

    fn on_vote(&mut self, msg: &ConsensusMsg, out: &mut StepOutput) {
        let Some(payload) = msg.value.as_ref() else {
            self.violations.push(Violation::MalformedMessage {
                round: msg.round,
                sender: msg.sender,
            });
            return;
        };
        let rs = self.rounds.entry(msg.round).or_default();
        // one vote per sender per round, first one counts
        if rs.votes.values().any(|set| set.contains(&msg.sender)) {
            return;
        }
        rs.votes
            .entry(payload.clone())
            .or_default()
            .insert(msg.sender);
        let stake: Stake = rs.votes[payload]
            .iter()
            .map(|p| self.cfg.stake_of(*p))
            .sum();
        if stake >= self.cfg.vote_quorum() {
            match &rs.qc {
                None => {
                    rs.qc = Some(payload.clone());
                    self.prefinalize_from_qc(msg.round, payload.clone(), out);
                }
                Some(existing) if existing != payload => {
                    // impossible with vote-once honest parties and <= t corrupt
                    self.violations
                        .push(Violation::DoubleQcObserved { round: msg.round });
                }
                Some(_) => {}
            }
        }
    }

    fn prefinalize_from_qc(&mut self, round: Round, payload: Vec<u8>, out: &mut StepOutput) {
        let rs = self.rounds.entry(round).or_default();
        match &rs.prefin {
            PrefinState::None => {
                rs.prefin = PrefinState::Msg(payload.clone());
                out.events.push(ConsensusEvent::Prefinalized {
                    round,
                    value: Some(payload.clone()),
                });
                out.broadcast(ConsensusMsg::prefin(round, Some(payload), self.id));
            }
            PrefinState::Bot | PrefinState::MsgThenBot(_) => {
                self.violations
                    .push(Violation::MsgAfterBotSuppressed { round });
            }
            PrefinState::Msg(_) => {} // QC is unique per round; nothing to do
        }
    }

    fn on_prefin(&mut self, msg: &ConsensusMsg, out: &mut StepOutput) {
        let rs = self.rounds.entry(msg.round).or_default();
        let senders = rs.prefin_senders.entry(msg.value.clone()).or_default();
        if !senders.insert(msg.sender) {
            return; // duplicate from same sender
        }
        let stake: Stake = senders.iter().map(|p| self.cfg.stake_of(*p)).sum();
        if stake >= self.cfg.t_fin && rs.crossed.is_none() {
            rs.crossed = Some(msg.value.clone());
            self.ready.insert(msg.round, msg.value.clone());
            self.release_finalizes(out);
        }
    }

    fn on_timeout(&mut self, round: Round, out: &mut StepOutput) {
        let rs = self.rounds.entry(round).or_default();
        rs.timer_fired = true;
        if rs.finalized.is_some() || rs.crossed.is_some() {
            return;
        }
        if matches!(rs.prefin, PrefinState::None) {
            rs.prefin = PrefinState::Bot;
            out.events.push(ConsensusEvent::Prefinalized { round, value: None });
            out.broadcast(ConsensusMsg::prefin(round, None, self.id));
        }
        // A party already holding a quorum certificate keeps its
        // prefinalization; see crate docs.
    }

    /// Total Order gate: finalize events leave strictly in round order.
    fn release_finalizes(&mut self, out: &mut StepOutput) {
        while let Some(value) = self.ready.remove(&self.next_finalize) {
            let round = self.next_finalize;
            let rs = self.rounds.entry(round).or_default();
            debug_assert!(rs.finalized.is_none());
            rs.finalized = Some(value.clone());
            out.events.push(ConsensusEvent::Finalized { round, value });
            self.next_finalize += 1;
        }
    }
}
