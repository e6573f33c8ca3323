//! Dealer, evaluation, verification and combination algorithms.

use crate::error::TcError;
use crate::field::{lagrange_at_zero, GroupElement, Scalar};
use crate::hash::hash_to_field;
use crate::input::EvalInput;
use crate::params::{setup, PublicParameters, SecurityToggle, ThresholdParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// One share unit: an evaluation point of the sharing polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitShare {
    pub unit_index: u64,
    pub value: Scalar,
}

/// The units one party holds. Weighted parties own several contiguous units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretShareBundle {
    pub params: ThresholdParams,
    pub party: usize,
    pub units: Vec<UnitShare>,
}

impl SecretShareBundle {
    pub fn unit_indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.units.iter().map(|u| u.unit_index)
    }
}

/// Per-unit exponent commitments `g^f(i)` plus the group description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicCommitments {
    pub group: PublicParameters,
    pub params: ThresholdParams,
    /// Commitment for unit `i` lives at position `i - 1`.
    pub per_unit: Vec<GroupElement>,
}

impl PublicCommitments {
    pub fn commitment_for(&self, unit_index: u64) -> Option<GroupElement> {
        if unit_index == 0 || unit_index > self.per_unit.len() as u64 {
            return None;
        }
        Some(self.per_unit[(unit_index - 1) as usize])
    }
}

/// An output share: one unit's contribution to `Eval(s, input)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputShare {
    pub unit_index: u64,
    pub value: Scalar,
    pub input: EvalInput,
}

/// A combined evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcOutput {
    pub value: Scalar,
    pub input: EvalInput,
}

/// Everything the dealer hands out for one sharing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMaterial {
    pub format: String,
    pub commitments: PublicCommitments,
    pub bundles: Vec<SecretShareBundle>,
}

/// Two independent sharings of the same secret at different threshold pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleKeyMaterial {
    pub format: String,
    pub slow: KeyMaterial,
    pub fast: KeyMaterial,
}

pub const KEY_FORMAT: &str = "tc-keys/v1";
pub const DOUBLE_KEY_FORMAT: &str = "tc-double-keys/v1";

/// Deals `secret` at `params` over `weights` (unit counts per party).
///
/// Samples a degree-`t_rec - 1` polynomial `f` with `f(0) = secret`; unit `i`
/// receives `f(i)` and the commitment `g^f(i)`. Unit indices are assigned to
/// parties contiguously in party order. Deterministic for a fixed seed.
pub fn share_gen(
    secret: u64,
    params: &ThresholdParams,
    weights: &[u64],
    rng_seed: u64,
) -> Result<(PublicCommitments, Vec<SecretShareBundle>), TcError> {
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    deal_with_rng(secret, params, weights, &mut rng)
}

/// Deals the same secret twice with independent polynomial randomness drawn
/// from disjoint streams of the seed.
#[allow(clippy::type_complexity)]
pub fn double_share_gen(
    secret: u64,
    params_slow: &ThresholdParams,
    params_fast: &ThresholdParams,
    weights: &[u64],
    rng_seed: u64,
) -> Result<
    (
        (PublicCommitments, Vec<SecretShareBundle>),
        (PublicCommitments, Vec<SecretShareBundle>),
    ),
    TcError,
> {
    let mut rng_slow = ChaCha20Rng::seed_from_u64(rng_seed);
    rng_slow.set_stream(1);
    let mut rng_fast = ChaCha20Rng::seed_from_u64(rng_seed);
    rng_fast.set_stream(2);
    let slow = deal_with_rng(secret, params_slow, weights, &mut rng_slow)?;
    let fast = deal_with_rng(secret, params_fast, weights, &mut rng_fast)?;
    Ok((slow, fast))
}

fn deal_with_rng(
    secret: u64,
    params: &ThresholdParams,
    weights: &[u64],
    rng: &mut ChaCha20Rng,
) -> Result<(PublicCommitments, Vec<SecretShareBundle>), TcError> {
    let secret = Scalar::checked(secret).ok_or(TcError::SecretOutOfField(secret))?;
    let weight_sum: u64 = weights.iter().sum();
    if weight_sum != params.n_units {
        return Err(TcError::WeightSumMismatch {
            expected: params.n_units,
            got: weight_sum,
        });
    }

    let q = setup(SecurityToggle::DeskScale).subgroup_order;
    let mut coeffs = Vec::with_capacity(params.t_rec as usize);
    coeffs.push(secret);
    for _ in 1..params.t_rec {
        coeffs.push(Scalar::reduce(rng.gen_range(0..q)));
    }

    let eval_poly = |x: u64| {
        let xs = Scalar::reduce(x);
        let mut acc = Scalar::ZERO;
        for &c in coeffs.iter().rev() {
            acc = acc.mul(xs).add(c);
        }
        acc
    };

    let g = GroupElement::generator();
    let mut per_unit = Vec::with_capacity(params.n_units as usize);
    for i in 1..=params.n_units {
        per_unit.push(g.pow(eval_poly(i)));
    }

    let mut bundles = Vec::with_capacity(weights.len());
    let mut next_unit = 1u64;
    for (party, &w) in weights.iter().enumerate() {
        let units = (0..w)
            .map(|k| {
                let idx = next_unit + k;
                UnitShare {
                    unit_index: idx,
                    value: eval_poly(idx),
                }
            })
            .collect();
        next_unit += w;
        bundles.push(SecretShareBundle {
            params: *params,
            party,
            units,
        });
    }

    let commitments = PublicCommitments {
        group: setup(SecurityToggle::DeskScale),
        params: *params,
        per_unit,
    };
    Ok((commitments, bundles))
}

/// The function the system threshold-computes: `s * H(encode(input))` in `Z_q`.
pub fn eval(secret: Scalar, input: &EvalInput) -> TcOutput {
    TcOutput {
        value: secret.mul(hash_to_field(&input.encode())),
        input: input.clone(),
    }
}

/// Partial evaluation: one output share per owned unit.
pub fn peval(bundle: &SecretShareBundle, input: &EvalInput) -> Vec<OutputShare> {
    let h = hash_to_field(&input.encode());
    bundle
        .units
        .iter()
        .map(|u| OutputShare {
            unit_index: u.unit_index,
            value: u.value.mul(h),
            input: input.clone(),
        })
        .collect()
}

/// Accepts iff `g^share = commitment[unit]^H(encode(input))` in the group.
/// Out-of-range unit indices reject rather than error.
pub fn pver(commitments: &PublicCommitments, input: &EvalInput, share: &OutputShare) -> bool {
    let Some(com) = commitments.commitment_for(share.unit_index) else {
        return false;
    };
    if share.input != *input {
        return false;
    }
    let h = hash_to_field(&input.encode());
    GroupElement::generator().pow(share.value) == com.pow(h)
}

/// Lagrange interpolation at zero over the first `t_rec` distinct units in
/// ascending unit order. Shares are expected to have passed [`pver`];
/// duplicate units are collapsed, and fewer than `t_rec` distinct units is an
/// error.
pub fn comb(
    commitments: &PublicCommitments,
    input: &EvalInput,
    shares: &[OutputShare],
) -> Result<TcOutput, TcError> {
    let t_rec = commitments.params.t_rec;
    let mut by_unit = std::collections::BTreeMap::new();
    for s in shares {
        by_unit.entry(s.unit_index).or_insert(s.value);
    }
    if (by_unit.len() as u64) < t_rec {
        return Err(TcError::InsufficientShares {
            needed: t_rec,
            got: by_unit.len() as u64,
        });
    }
    let chosen: Vec<(u64, Scalar)> = by_unit.into_iter().take(t_rec as usize).collect();
    let xs: Vec<u64> = chosen.iter().map(|(x, _)| *x).collect();
    let mut acc = Scalar::ZERO;
    for (j, (_, y)) in chosen.iter().enumerate() {
        acc = acc.add(lagrange_at_zero(&xs, j).mul(*y));
    }
    Ok(TcOutput {
        value: acc,
        input: input.clone(),
    })
}

impl KeyMaterial {
    pub fn new(commitments: PublicCommitments, bundles: Vec<SecretShareBundle>) -> Self {
        KeyMaterial {
            format: KEY_FORMAT.to_string(),
            commitments,
            bundles,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("key material serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, TcError> {
        let km: KeyMaterial =
            serde_json::from_str(s).map_err(|e| TcError::MalformedKeyMaterial(e.to_string()))?;
        if km.format != KEY_FORMAT {
            return Err(TcError::MalformedKeyMaterial(format!(
                "unknown format tag {:?}",
                km.format
            )));
        }
        Ok(km)
    }
}

impl DoubleKeyMaterial {
    pub fn new(slow: KeyMaterial, fast: KeyMaterial) -> Self {
        DoubleKeyMaterial {
            format: DOUBLE_KEY_FORMAT.to_string(),
            slow,
            fast,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("key material serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, TcError> {
        let km: DoubleKeyMaterial =
            serde_json::from_str(s).map_err(|e| TcError::MalformedKeyMaterial(e.to_string()))?;
        if km.format != DOUBLE_KEY_FORMAT {
            return Err(TcError::MalformedKeyMaterial(format!(
                "unknown format tag {:?}",
                km.format
            )));
        }
        Ok(km)
    }
}
