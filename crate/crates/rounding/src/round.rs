//! The scale-round-verify-escalate procedure.

use crate::{RoundingError, StakeProfile, ThresholdPair, WeightProfile};

pub const MAX_ESCALATIONS: u32 = 16;
const EXACT_BOUNDS_LIMIT: usize = 20;

/// Initial weight-per-party scale, as a positive rational. The effective
/// stake-to-weight factor is `hint * n_parties / total_stake`, so a hint of 1
/// targets an average weight of 1 per party regardless of stake magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleHint {
    pub num: u64,
    pub den: u64,
}

impl ScaleHint {
    pub fn new(num: u64, den: u64) -> Result<Self, RoundingError> {
        if num == 0 || den == 0 || num > 1_000_000 || den > 1_000_000 {
            return Err(RoundingError::InvalidScaleHint(format!(
                "need 0 < num, den <= 10^6, got {num}/{den}"
            )));
        }
        Ok(ScaleHint { num, den })
    }

    pub const ONE: ScaleHint = ScaleHint { num: 1, den: 1 };
}

/// Stake-to-weight factor as an exact rational.
#[derive(Debug, Clone, Copy)]
struct Alpha {
    num: u128,
    den: u128,
}

/// Rounds stakes to weights for a single ramp pair.
pub fn round(
    stakes: &StakeProfile,
    t_sec: u128,
    t_rec: u128,
    scale_hint: ScaleHint,
) -> Result<WeightProfile, RoundingError> {
    let pair = ThresholdPair::new(t_sec, t_rec, stakes.total())?;
    solve(stakes, &[pair], scale_hint).map(|(weights, ws, escalations)| WeightProfile {
        total_weight: weights.iter().sum(),
        weights,
        w_slow: ws[0],
        w_fast: None,
        escalations,
    })
}

/// Rounds once and derives thresholds for two pairs over the same weights.
pub fn round_dual(
    stakes: &StakeProfile,
    slow: ThresholdPair,
    fast: ThresholdPair,
    scale_hint: ScaleHint,
) -> Result<WeightProfile, RoundingError> {
    let total = stakes.total();
    ThresholdPair::new(slow.t_sec, slow.t_rec, total)?;
    ThresholdPair::new(fast.t_sec, fast.t_rec, total)?;
    solve(stakes, &[slow, fast], scale_hint).map(|(weights, ws, escalations)| WeightProfile {
        total_weight: weights.iter().sum(),
        weights,
        w_slow: ws[0],
        w_fast: Some(ws[1]),
        escalations,
    })
}

fn solve(
    stakes: &StakeProfile,
    pairs: &[ThresholdPair],
    scale_hint: ScaleHint,
) -> Result<(Vec<u64>, Vec<u64>, u32), RoundingError> {
    let n = stakes.len() as u128;
    let total = stakes.total();
    let mut alpha = Alpha {
        num: scale_hint.num as u128 * n,
        den: scale_hint.den as u128 * total,
    };

    for escalation in 0..=MAX_ESCALATIONS {
        let weights = scale_weights(stakes.stakes(), alpha);
        if let Some(ws) = pairs
            .iter()
            .map(|p| choose_threshold(stakes.stakes(), &weights, alpha, *p))
            .collect::<Option<Vec<u64>>>()
        {
            return Ok((weights, ws, escalation));
        }
        alpha.num = alpha
            .num
            .checked_mul(2)
            .ok_or(RoundingError::Infeasible { escalations: escalation })?;
    }
    Err(RoundingError::Infeasible {
        escalations: MAX_ESCALATIONS,
    })
}

/// `w_i = round_half_up(stake_i * alpha)`.
fn scale_weights(stakes: &[u64], alpha: Alpha) -> Vec<u64> {
    stakes
        .iter()
        .map(|&s| {
            let num = 2 * s as u128 * alpha.num + alpha.den;
            (num / (2 * alpha.den)) as u64
        })
        .collect()
}

/// Picks the largest `w` with both guarantees, or `None` if the subset
/// families are not separable at these weights.
///
/// `w` is feasible iff `w1 < w <= w2`, where `w1` is the best weight a
/// below-`t_sec` coalition can reach and `w2` the worst weight an
/// at-least-`t_rec` coalition can be forced down to. We return `w2`.
fn choose_threshold(
    stakes: &[u64],
    weights: &[u64],
    alpha: Alpha,
    pair: ThresholdPair,
) -> Option<u64> {
    let total_weight: u64 = weights.iter().sum();
    let (w1, w2) = if stakes.len() <= EXACT_BOUNDS_LIMIT {
        exact_bounds(stakes, weights, pair)
    } else {
        analytic_bounds(stakes, weights, alpha, pair)
    };
    let w2 = w2.min(total_weight);
    (w1 < w2 && w2 >= 1).then_some(w2)
}

/// Exact separating bounds by enumeration of all `2^n` subsets.
fn exact_bounds(stakes: &[u64], weights: &[u64], pair: ThresholdPair) -> (u64, u64) {
    let n = stakes.len();
    let mut w1 = 0u64; // max weight with stake < t_sec (empty subset included)
    let mut w2 = u64::MAX; // min weight with stake >= t_rec
    for mask in 0u32..(1u32 << n) {
        let mut stake = 0u128;
        let mut weight = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            stake += stakes[i] as u128;
            weight += weights[i];
            bits &= bits - 1;
        }
        if stake < pair.t_sec {
            w1 = w1.max(weight);
        }
        if stake >= pair.t_rec {
            w2 = w2.min(weight);
        }
    }
    (w1, w2)
}

/// Certified bounds from the aggregate rounding error: a subset's weight is
/// within `[alpha*stake - delta_down, alpha*stake + delta_up]`, where the
/// deltas sum each party's signed rounding error.
fn analytic_bounds(
    stakes: &[u64],
    weights: &[u64],
    alpha: Alpha,
    pair: ThresholdPair,
) -> (u64, u64) {
    let mut delta_up = 0u128; // sum over parties of max(0, w_i*den - s_i*num)
    let mut delta_down = 0u128;
    for (&s, &w) in stakes.iter().zip(weights) {
        let ideal = s as u128 * alpha.num;
        let got = w as u128 * alpha.den;
        if got >= ideal {
            delta_up += got - ideal;
        } else {
            delta_down += ideal - got;
        }
    }
    // w1: any subset with stake <= t_sec - 1 has weight <= alpha*(t_sec-1) + delta_up
    let w1 = ((pair.t_sec - 1) * alpha.num + delta_up) / alpha.den;
    // w2: any subset with stake >= t_rec has weight >= alpha*t_rec - delta_down
    let lower = pair.t_rec * alpha.num;
    let w2 = if lower > delta_down {
        (lower - delta_down) / alpha.den
    } else {
        0
    };
    (w1 as u64, w2 as u64)
}
