//! Subset verifier for weight profiles: exhaustive for small party counts,
//! seeded-random plus greedy-adversarial sampling otherwise.

use crate::{RoundingError, StakeProfile, ThresholdPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// G1: combined stake below `t_sec` must keep combined weight below `w`.
    SecrecyBound,
    /// G2: combined stake at or above `t_rec` must reach weight `w`.
    ReconstructionBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// All `2^n` subsets; requires at most 20 parties.
    Exhaustive,
    /// Seeded random subsets plus greedy adversarial coalitions.
    Sampled { seed: u64, samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass,
    Counterexample {
        guarantee: Guarantee,
        subset: Vec<usize>,
        subset_stake: u128,
        subset_weight: u64,
    },
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, VerifyOutcome::Pass)
    }
}

impl fmt::Display for VerifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyOutcome::Pass => write!(f, "pass"),
            VerifyOutcome::Counterexample {
                guarantee,
                subset,
                subset_stake,
                subset_weight,
            } => write!(
                f,
                "{} violated by subset {:?} (stake {}, weight {})",
                match guarantee {
                    Guarantee::SecrecyBound => "G1",
                    Guarantee::ReconstructionBound => "G2",
                },
                subset,
                subset_stake,
                subset_weight
            ),
        }
    }
}

/// Checks G1/G2 for `(weights, w)` against `pair` over `stakes`.
pub fn verify_profile(
    stakes: &StakeProfile,
    weights: &[u64],
    w: u64,
    pair: ThresholdPair,
    mode: VerifyMode,
) -> Result<VerifyOutcome, RoundingError> {
    if weights.len() != stakes.len() {
        return Err(RoundingError::InvalidStakes(format!(
            "{} weights for {} stakes",
            weights.len(),
            stakes.len()
        )));
    }
    match mode {
        VerifyMode::Exhaustive => {
            if stakes.len() > 20 {
                return Err(RoundingError::ExhaustiveTooLarge(stakes.len()));
            }
            Ok(exhaustive(stakes.stakes(), weights, w, pair))
        }
        VerifyMode::Sampled { seed, samples } => {
            Ok(sampled(stakes.stakes(), weights, w, pair, seed, samples))
        }
    }
}

fn classify(
    stakes: &[u64],
    weights: &[u64],
    w: u64,
    pair: ThresholdPair,
    subset: &[usize],
) -> Option<VerifyOutcome> {
    let stake: u128 = subset.iter().map(|&i| stakes[i] as u128).sum();
    let weight: u64 = subset.iter().map(|&i| weights[i]).sum();
    if stake < pair.t_sec && weight >= w {
        return Some(VerifyOutcome::Counterexample {
            guarantee: Guarantee::SecrecyBound,
            subset: subset.to_vec(),
            subset_stake: stake,
            subset_weight: weight,
        });
    }
    if stake >= pair.t_rec && weight < w {
        return Some(VerifyOutcome::Counterexample {
            guarantee: Guarantee::ReconstructionBound,
            subset: subset.to_vec(),
            subset_stake: stake,
            subset_weight: weight,
        });
    }
    None
}

fn exhaustive(stakes: &[u64], weights: &[u64], w: u64, pair: ThresholdPair) -> VerifyOutcome {
    let n = stakes.len();
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(cx) = classify(stakes, weights, w, pair, &subset) {
            return cx;
        }
    }
    VerifyOutcome::Pass
}

fn sampled(
    stakes: &[u64],
    weights: &[u64],
    w: u64,
    pair: ThresholdPair,
    seed: u64,
    samples: u64,
) -> VerifyOutcome {
    let n = stakes.len();

    // Greedy adversarial coalitions first: they find violations far more
    // often than uniform sampling does.
    for subset in greedy_coalitions(stakes, weights, pair) {
        if let Some(cx) = classify(stakes, weights, w, pair, &subset) {
            return cx;
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let density: f64 = rng.gen_range(0.05..0.95);
        let subset: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
        if let Some(cx) = classify(stakes, weights, w, pair, &subset) {
            return cx;
        }
    }
    VerifyOutcome::Pass
}

/// Coalitions an adversary would pick: maximum weight under the secrecy
/// stake budget, and minimum weight at the reconstruction stake floor.
fn greedy_coalitions(stakes: &[u64], weights: &[u64], pair: ThresholdPair) -> Vec<Vec<usize>> {
    let n = stakes.len();
    let mut out = Vec::new();

    // weight-per-stake descending, then raw weight descending
    let mut by_ratio: Vec<usize> = (0..n).collect();
    by_ratio.sort_by(|&a, &b| {
        let lhs = weights[a] as u128 * stakes[b] as u128;
        let rhs = weights[b] as u128 * stakes[a] as u128;
        rhs.cmp(&lhs).then(weights[b].cmp(&weights[a]))
    });
    let mut by_weight: Vec<usize> = (0..n).collect();
    by_weight.sort_by_key(|&i| std::cmp::Reverse(weights[i]));

    for order in [&by_ratio, &by_weight] {
        // G1 attack: pack weight while staying under t_sec
        let mut subset = Vec::new();
        let mut stake = 0u128;
        for &i in order.iter() {
            if stake + (stakes[i] as u128) < pair.t_sec {
                stake += stakes[i] as u128;
                subset.push(i);
            }
        }
        out.push(subset);

        // G2 attack: shed weight while keeping stake >= t_rec
        let mut keep = vec![true; n];
        let mut stake: u128 = stakes.iter().map(|&s| s as u128).sum();
        for &i in order.iter() {
            if stake - stakes[i] as u128 >= pair.t_rec {
                stake -= stakes[i] as u128;
                keep[i] = false;
            }
        }
        out.push((0..n).filter(|&i| keep[i]).collect());
    }
    out
}
