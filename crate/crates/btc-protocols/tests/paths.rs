//! Direct-drive tests of the three protocol layers against a dealt fixture.

use btc_protocols::{
    BtcParty, EvalInputMode, PathTag, ProtocolKind, ShareMsg, SharePath, SharingKeys,
};
use consensus_mbb::PartyId;
use tc_core::{double_share_gen, eval, share_gen, EvalInput, OutputShare, Scalar, ThresholdParams};

const SECRET: u64 = 7;

fn deal(params: ThresholdParams, weights: &[u64]) -> Vec<SharingKeys> {
    let (coms, bundles) = share_gen(SECRET, &params, weights, 42).unwrap();
    bundles
        .into_iter()
        .map(|bundle| SharingKeys {
            commitments: coms.clone(),
            bundle,
        })
        .collect()
}

/// Tight fixture: 4 parties, unit weights, thresholds (4, 3, 3).
fn tight_party(i: usize) -> BtcParty {
    let keys = deal(ThresholdParams::new(4, 3, 3).unwrap(), &[1, 1, 1, 1]);
    BtcParty::new(
        PartyId(i),
        ProtocolKind::Tight,
        EvalInputMode::RoundAndMessage,
        keys[i].clone(),
        None,
    )
}

/// Slow fixture with a weighted party: weights [2, 1, 1], t_rec = 3 units.
fn slow_parties() -> Vec<BtcParty> {
    let keys = deal(ThresholdParams::new(4, 2, 3).unwrap(), &[2, 1, 1]);
    keys.into_iter()
        .enumerate()
        .map(|(i, k)| {
            BtcParty::new(
                PartyId(i),
                ProtocolKind::Slow,
                EvalInputMode::RoundAndMessage,
                k,
                None,
            )
        })
        .collect()
}

/// Fast fixture: 7 parties unit weights, slow (7,3,5), fast (7,5,7).
fn fast_parties() -> Vec<BtcParty> {
    let slow = ThresholdParams::new(7, 3, 5).unwrap();
    let fast = ThresholdParams::new(7, 5, 7).unwrap();
    let weights = vec![1u64; 7];
    let ((coms_s, bundles_s), (coms_f, bundles_f)) =
        double_share_gen(SECRET, &slow, &fast, &weights, 42).unwrap();
    bundles_s
        .into_iter()
        .zip(bundles_f)
        .enumerate()
        .map(|(i, (bs, bf))| {
            BtcParty::new(
                PartyId(i),
                ProtocolKind::Fast,
                EvalInputMode::RoundAndMessage,
                SharingKeys {
                    commitments: coms_s.clone(),
                    bundle: bs,
                },
                Some(SharingKeys {
                    commitments: coms_f.clone(),
                    bundle: bf,
                }),
            )
        })
        .collect()
}

fn msg(v: &str) -> Option<Vec<u8>> {
    Some(v.as_bytes().to_vec())
}

fn expected(round: u64, value: &Option<Vec<u8>>) -> Scalar {
    eval(
        Scalar::reduce(SECRET),
        &EvalInput {
            round,
            message: value.clone(),
        },
    )
    .value
}

#[test]
fn weighted_party_emits_all_its_units_in_one_share_message() {
    let mut parties = slow_parties();
    let step = parties[0].on_finalize(0, &msg("blk0"), 100);
    assert_eq!(step.shares.len(), 1);
    assert_eq!(step.shares[0].shares.len(), 2, "weight-2 party, two units");
    assert_eq!(step.shares[0].path, SharePath::Share);
    let mut indices: Vec<u64> = step.shares[0].shares.iter().map(|s| s.unit_index).collect();
    indices.dedup();
    assert_eq!(indices.len(), 2, "distinct unit indices");
}

#[test]
fn bot_rounds_are_evaluated_on_the_encoded_empty_outcome() {
    let mut parties = slow_parties();
    let step = parties[1].on_finalize(0, &None, 100);
    assert_eq!(step.shares[0].shares[0].input, EvalInput::bot(0));
}

#[test]
fn slow_reconstruction_crosses_threshold_once_and_matches_eval() {
    let mut parties = slow_parties();
    let value = msg("blk0");
    let mut all_shares: Vec<ShareMsg> = Vec::new();
    for p in parties.iter_mut() {
        all_shares.extend(p.on_finalize(0, &value, 100).shares);
    }
    // deliver everything to party 1; duplicate the first message too
    let mut outputs = Vec::new();
    for sm in all_shares.iter().chain(std::iter::once(&all_shares[0])) {
        outputs.extend(parties[1].on_share(sm, 200));
    }
    assert_eq!(outputs.len(), 1, "single output despite duplicates");
    assert_eq!(outputs[0].tc_output.value, expected(0, &value));
    assert_eq!(outputs[0].path, PathTag::Slow);
    assert_eq!(outputs[0].local_finalize_time, 100);
    assert_eq!(outputs[0].local_output_time, 200);
}

#[test]
fn invalid_shares_are_dropped_and_counted_without_affecting_the_result() {
    let mut parties = slow_parties();
    let value = msg("blk0");
    let mut all_shares = Vec::new();
    for p in parties.iter_mut() {
        all_shares.extend(p.on_finalize(0, &value, 0).shares);
    }
    // garbage first: must not poison the accumulator
    let garbage = ShareMsg {
        path: SharePath::Share,
        round: 0,
        value: value.clone(),
        sender: PartyId(2),
        shares: vec![OutputShare {
            unit_index: 3,
            value: Scalar::reduce(12345),
            input: EvalInput {
                round: 0,
                message: value.clone(),
            },
        }],
    };
    let mut outputs = Vec::new();
    outputs.extend(parties[1].on_share(&garbage, 1));
    for sm in &all_shares {
        outputs.extend(parties[1].on_share(sm, 2));
    }
    assert_eq!(outputs.len(), 1);
    assert_eq!(outputs[0].tc_output.value, expected(0, &value));
    assert_eq!(parties[1].dropped_invalid_shares(), 1);
}

#[test]
fn outputs_wait_for_earlier_rounds_to_drain() {
    let mut parties = slow_parties();
    let v0 = msg("r0");
    let v1 = msg("r1");
    let mut shares_r0 = Vec::new();
    let mut shares_r1 = Vec::new();
    for p in parties.iter_mut() {
        shares_r0.extend(p.on_finalize(0, &v0, 10).shares);
        shares_r1.extend(p.on_finalize(1, &v1, 11).shares);
    }
    // round 1 reconstructs first: held until round 0 drains
    let mut outputs = Vec::new();
    for sm in &shares_r1 {
        outputs.extend(parties[2].on_share(sm, 20));
    }
    assert!(outputs.is_empty(), "round 1 held at queue head");
    for sm in &shares_r0 {
        outputs.extend(parties[2].on_share(sm, 30));
    }
    assert_eq!(
        outputs.iter().map(|o| o.round).collect::<Vec<_>>(),
        vec![0, 1]
    );
    assert_eq!(outputs[0].local_output_time, 30);
    assert_eq!(outputs[1].local_output_time, 30, "released together");
}

#[test]
fn empty_queue_produces_no_output() {
    let mut parties = slow_parties();
    let value = msg("x");
    let mut shares = Vec::new();
    for p in parties.iter_mut() {
        shares.extend(p.on_finalize(0, &value, 0).shares);
    }
    // deliver to a party that never finalized: reconstruction happens but
    // nothing drains
    let keys = deal(ThresholdParams::new(4, 2, 3).unwrap(), &[2, 1, 1]);
    let mut fresh = BtcParty::new(
        PartyId(1),
        ProtocolKind::Slow,
        EvalInputMode::RoundAndMessage,
        keys[1].clone(),
        None,
    );
    for sm in &shares {
        assert!(fresh.on_share(sm, 5).is_empty());
    }
}

#[test]
fn tight_releases_its_share_at_prefinalize() {
    let mut p = tight_party(0);
    let value = msg("blk");
    let shares = p.on_prefinalize(0, &value, 50);
    assert_eq!(shares.len(), 1);
    assert_eq!(shares[0].path, SharePath::Share);
    // finalize afterwards must not re-send
    let step = p.on_finalize(0, &value, 60);
    assert!(step.shares.is_empty(), "share already out");
}

#[test]
fn tight_sends_at_finalize_when_prefinalize_never_fired() {
    // finalize reached via the prefin flood before this party's own QC
    let mut p = tight_party(0);
    let value = msg("blk");
    let step = p.on_finalize(0, &value, 60);
    assert_eq!(step.shares.len(), 1, "late share at finalize");
}

#[test]
fn tight_bot_after_message_emits_a_second_share_with_separate_accounting() {
    let mut p = tight_party(0);
    let value = msg("blk");
    let first = p.on_prefinalize(0, &value, 10);
    assert_eq!(first.len(), 1);
    let second = p.on_prefinalize(0, &None, 20);
    assert_eq!(second.len(), 1, "one more share for the empty outcome");
    assert_eq!(second[0].value, None);
    assert_ne!(
        first[0].shares[0].input, second[0].shares[0].input,
        "distinct inputs, distinct secrecy accounting"
    );
    // a third message-valued prefinalize stays deduplicated
    assert!(p.on_prefinalize(0, &value, 30).is_empty());
}

#[test]
fn tight_reconstructs_with_t_fin_shares_and_tags_tight() {
    let mut parties: Vec<BtcParty> = (0..4).map(tight_party).collect();
    let value = msg("blk");
    let mut shares = Vec::new();
    for p in parties.iter_mut() {
        shares.extend(p.on_prefinalize(0, &value, 10));
    }
    let mut outputs = Vec::new();
    outputs.extend(parties[0].on_finalize(0, &value, 20).outputs);
    for sm in shares.iter().take(3) {
        outputs.extend(parties[0].on_share(sm, 20));
    }
    assert_eq!(outputs.len(), 1, "3 of 4 units suffice");
    assert_eq!(outputs[0].path, PathTag::Tight);
    assert_eq!(outputs[0].tc_output.value, expected(0, &value));
    assert_eq!(outputs[0].local_finalize_time, 20);
    assert_eq!(outputs[0].local_output_time, 20);
}

#[test]
fn fast_releases_fast_share_at_prefinalize_and_slow_share_at_finalize() {
    let mut parties = fast_parties();
    let value = msg("blk");
    let fast_shares = parties[0].on_prefinalize(0, &value, 10);
    assert_eq!(fast_shares.len(), 1);
    assert_eq!(fast_shares[0].path, SharePath::FastShare);
    let step = parties[0].on_finalize(0, &value, 20);
    assert_eq!(step.shares.len(), 1);
    assert_eq!(step.shares[0].path, SharePath::SlowShare);
}

#[test]
fn fast_still_reveals_slow_share_after_fast_reconstruction() {
    let mut parties = fast_parties();
    let value = msg("blk");
    let mut fast_shares = Vec::new();
    for p in parties.iter_mut() {
        fast_shares.extend(p.on_prefinalize(0, &value, 10));
    }
    // party 0 reconstructs via the fast sharing before finalizing
    for sm in &fast_shares {
        parties[0].on_share(sm, 15);
    }
    let step = parties[0].on_finalize(0, &value, 20);
    assert_eq!(
        step.shares.len(),
        1,
        "slow share goes out regardless; others may depend on it"
    );
    assert_eq!(step.shares[0].path, SharePath::SlowShare);
    // and the buffered fast reconstruction drains now
    assert_eq!(step.outputs.len(), 1);
    assert_eq!(step.outputs[0].path, PathTag::Fast);
    assert_eq!(step.outputs[0].tc_output.value, expected(0, &value));
}

#[test]
fn fast_and_slow_accumulators_are_independent_and_agree_on_the_value() {
    let mut parties = fast_parties();
    let value = msg("blk");
    let mut fast_shares = Vec::new();
    let mut slow_shares = Vec::new();
    for p in parties.iter_mut() {
        fast_shares.extend(p.on_prefinalize(0, &value, 10));
        slow_shares.extend(p.on_finalize(0, &value, 20).shares);
    }

    // party A: only slow shares -> slow path tag
    let mut a = fast_parties().remove(0);
    a.on_finalize(0, &value, 20);
    let mut outs_a = Vec::new();
    for sm in &slow_shares {
        outs_a.extend(a.on_share(sm, 30));
    }
    assert_eq!(outs_a.len(), 1);
    assert_eq!(outs_a[0].path, PathTag::Slow);

    // party B: only fast shares, needs all 7 units -> fast path tag
    let mut b = fast_parties().remove(1);
    b.on_finalize(0, &value, 20);
    let mut outs_b = Vec::new();
    for (i, sm) in fast_shares.iter().enumerate() {
        let produced = b.on_share(sm, 30);
        if i + 1 < 7 {
            assert!(produced.is_empty(), "t_rec' = all units");
        }
        outs_b.extend(produced);
    }
    assert_eq!(outs_b.len(), 1);
    assert_eq!(outs_b[0].path, PathTag::Fast);

    // identical output value either way
    assert_eq!(outs_a[0].tc_output.value, outs_b[0].tc_output.value);
    assert_eq!(outs_a[0].tc_output.value, expected(0, &value));
}

#[test]
fn fast_bot_prefinalize_after_message_also_ships_a_fast_share() {
    let mut parties = fast_parties();
    let value = msg("blk");
    assert_eq!(parties[0].on_prefinalize(0, &value, 10).len(), 1);
    let bot_shares = parties[0].on_prefinalize(0, &None, 15);
    assert_eq!(bot_shares.len(), 1);
    assert_eq!(bot_shares[0].path, SharePath::FastShare);
    assert_eq!(bot_shares[0].value, None);
}

#[test]
fn round_only_mode_binds_the_round_number_alone() {
    let slow = ThresholdParams::new(7, 3, 5).unwrap();
    let fast = ThresholdParams::new(7, 5, 7).unwrap();
    let weights = vec![1u64; 7];
    let ((coms_s, bundles_s), _) = double_share_gen(SECRET, &slow, &fast, &weights, 42).unwrap();
    let mut p = BtcParty::new(
        PartyId(0),
        ProtocolKind::Slow,
        EvalInputMode::RoundOnly,
        SharingKeys {
            commitments: coms_s,
            bundle: bundles_s[0].clone(),
        },
        None,
    );
    let step = p.on_finalize(3, &msg("whatever"), 0);
    assert_eq!(step.shares[0].shares[0].input, EvalInput::bot(3));
}

#[test]
fn hundred_round_ordered_drain() {
    let mut parties = slow_parties();
    let mut per_round_shares: Vec<Vec<ShareMsg>> = Vec::new();
    for r in 0..100u64 {
        let value = msg(&format!("blk{r}"));
        let mut shares = Vec::new();
        for p in parties.iter_mut() {
            shares.extend(p.on_finalize(r, &value, r * 10).shares);
        }
        per_round_shares.push(shares);
    }
    // deliver rounds in a scrambled order to a fresh observer that finalized all
    let keys = deal(ThresholdParams::new(4, 2, 3).unwrap(), &[2, 1, 1]);
    let mut obs = BtcParty::new(
        PartyId(2),
        ProtocolKind::Slow,
        EvalInputMode::RoundAndMessage,
        keys[2].clone(),
        None,
    );
    for r in 0..100u64 {
        obs.on_finalize(r, &msg(&format!("blk{r}")), r * 10);
    }
    let mut order: Vec<usize> = (0..100).collect();
    // deterministic scramble
    for i in 0..100 {
        let j = (i * 37 + 11) % 100;
        order.swap(i, j);
    }
    let mut drained = Vec::new();
    for &r in &order {
        for sm in &per_round_shares[r] {
            drained.extend(obs.on_share(sm, 5000));
        }
    }
    assert_eq!(drained.len(), 100);
    let rounds: Vec<u64> = drained.iter().map(|o| o.round).collect();
    assert_eq!(rounds, (0..100).collect::<Vec<_>>(), "strict round order");
}
