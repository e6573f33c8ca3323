//! The information-flow ledger: global finalization from prefinalize
//! accounting, global reconstruction from adversary-visible share units.

use crate::TimeUs;
use btc_protocols::PathTag;
use consensus_mbb::{value_label, Round, Stake, Value};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use tc_core::EvalInput;

/// Which sharing a reveal belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub(crate) enum LedgerPath {
    Primary,
    Fast,
}

#[derive(Debug, Default)]
struct RevealEntry {
    units: BTreeSet<u64>,
    revealers: BTreeSet<usize>,
    revealer_stake: Stake,
    crossed: Option<TimeUs>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RevealSnapshot {
    pub round: Round,
    pub input_is_finalized: bool,
    pub path: String,
    pub distinct_honest_units: u64,
    pub revealer_stake: Stake,
    pub crossed: Option<TimeUs>,
    pub unit_threshold: u64,
    pub stake_secrecy_threshold: u128,
}

#[derive(Debug)]
pub struct FlowLedger {
    t_fin: Stake,
    corrupt_stake: Stake,
    corrupt_units: u64,
    /// Unit reconstruction thresholds per sharing.
    w_primary: u64,
    w_fast: Option<u64>,
    /// Stake secrecy thresholds per sharing.
    sec_primary: u128,
    sec_fast: Option<u128>,
    /// Honest prefinalize stake per (round, value), plus first crossing.
    prefin_stake: BTreeMap<(Round, Value), (Stake, BTreeSet<usize>)>,
    gft: BTreeMap<Round, (TimeUs, Value)>,
    reveals: BTreeMap<(Round, EvalInput, LedgerPath), RevealEntry>,
}

impl FlowLedger {
    pub(crate) fn new(
        t_fin: Stake,
        corrupt_stake: Stake,
        corrupt_units: u64,
        w_primary: u64,
        w_fast: Option<u64>,
        sec_primary: u128,
        sec_fast: Option<u128>,
    ) -> Self {
        FlowLedger {
            t_fin,
            corrupt_stake,
            corrupt_units,
            w_primary,
            w_fast,
            sec_primary,
            sec_fast,
            prefin_stake: BTreeMap::new(),
            gft: BTreeMap::new(),
            reveals: BTreeMap::new(),
        }
    }

    /// Records an honest prefinalize call. The corrupt stake counts toward
    /// every value, so the crossing rule is `t_fin - corrupt` honest stake.
    pub(crate) fn record_prefinalize(
        &mut self,
        party: usize,
        stake: Stake,
        round: Round,
        value: &Value,
        now: TimeUs,
    ) {
        let entry = self
            .prefin_stake
            .entry((round, value.clone()))
            .or_default();
        if !entry.1.insert(party) {
            return;
        }
        entry.0 += stake;
        let needed = self.t_fin.saturating_sub(self.corrupt_stake);
        if entry.0 >= needed {
            self.gft.entry(round).or_insert((now, value.clone()));
        }
    }

    /// Records an honest share broadcast at send time; the adversary sees
    /// every message the instant it leaves the sender.
    pub(crate) fn record_reveal(
        &mut self,
        party: usize,
        stake: Stake,
        path: LedgerPath,
        round: Round,
        input: &EvalInput,
        units: impl Iterator<Item = u64>,
        now: TimeUs,
    ) {
        let threshold = match path {
            LedgerPath::Primary => self.w_primary,
            LedgerPath::Fast => self.w_fast.expect("fast reveals only with a fast sharing"),
        };
        let entry = self
            .reveals
            .entry((round, input.clone(), path))
            .or_default();
        for u in units {
            entry.units.insert(u);
        }
        if entry.revealers.insert(party) {
            entry.revealer_stake += stake;
        }
        if entry.crossed.is_none()
            && entry.units.len() as u64 + self.corrupt_units >= threshold
        {
            entry.crossed = Some(now);
        }
    }

    pub(crate) fn gft(&self, round: Round) -> Option<(TimeUs, &Value)> {
        self.gft.get(&round).map(|(t, v)| (*t, v))
    }

    /// Earliest adversary reconstruction for the round's finalized input,
    /// minimized over the applicable sharings.
    pub(crate) fn grt(&self, round: Round, input: &EvalInput) -> Option<(TimeUs, PathTag)> {
        let mut best: Option<(TimeUs, PathTag)> = None;
        let candidates = [
            (LedgerPath::Fast, PathTag::Fast),
            (LedgerPath::Primary, PathTag::Slow),
        ];
        for (path, tag) in candidates {
            let threshold = match path {
                LedgerPath::Primary => Some(self.w_primary),
                LedgerPath::Fast => self.w_fast,
            };
            let Some(threshold) = threshold else { continue };
            // the adversary's own units never suffice in a valid config, but
            // account for it anyway
            let crossed = if self.corrupt_units >= threshold {
                Some(0)
            } else {
                self.reveals
                    .get(&(round, input.clone(), path))
                    .and_then(|e| e.crossed)
            };
            if let Some(t) = crossed {
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, tag));
                }
            }
        }
        best
    }

    /// Reveal-map snapshot for the secrecy oracle. `finalized_input_of`
    /// says which input, if any, a round settled on.
    pub(crate) fn secrecy_snapshot(
        &self,
        finalized_input_of: &BTreeMap<Round, EvalInput>,
    ) -> Vec<RevealSnapshot> {
        self.reveals
            .iter()
            .map(|((round, input, path), entry)| {
                let (threshold, sec) = match path {
                    LedgerPath::Primary => (self.w_primary, self.sec_primary),
                    LedgerPath::Fast => (
                        self.w_fast.unwrap_or(u64::MAX),
                        self.sec_fast.unwrap_or(u128::MAX),
                    ),
                };
                RevealSnapshot {
                    round: *round,
                    input_is_finalized: finalized_input_of.get(round) == Some(input),
                    path: format!("{path:?}").to_lowercase(),
                    distinct_honest_units: entry.units.len() as u64,
                    revealer_stake: entry.revealer_stake,
                    crossed: entry.crossed,
                    unit_threshold: threshold,
                    stake_secrecy_threshold: sec,
                }
            })
            .collect()
    }

    pub(crate) fn corrupt_stake(&self) -> Stake {
        self.corrupt_stake
    }

    pub(crate) fn corrupt_units(&self) -> u64 {
        self.corrupt_units
    }

    pub(crate) fn gft_label(&self, round: Round) -> Option<String> {
        self.gft.get(&round).map(|(_, v)| value_label(v))
    }
}
