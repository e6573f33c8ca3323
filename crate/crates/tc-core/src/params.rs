//! Fixed desk-scale group parameters and threshold configuration.

use crate::error::TcError;
use serde::{Deserialize, Serialize};

/// Prime modulus `p = 4q + 1` of the ambient group (63 bits).
pub(crate) const GROUP_PRIME: u64 = 9_223_372_036_854_774_893;
/// Prime order `q` of the designated subgroup (61 bits).
pub(crate) const SUBGROUP_ORDER: u64 = 2_305_843_009_213_693_723;
/// Generator of the order-`q` subgroup (`2^4 mod p`).
pub(crate) const GENERATOR: u64 = 16;
/// Domain prefix of the hash-to-field construction.
pub(crate) const HASH_DOMAIN: &str = "tc-hash-to-field/v1";

/// Selects a parameter set. Only one exists: small constants whose security
/// is measured in seconds, intended for simulation and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecurityToggle {
    DeskScale,
}

/// Group description plus the hash construction identifier, embedded in
/// serialized key material so files are self-describing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicParameters {
    #[serde(with = "crate::serial::dec_u64")]
    pub group_prime: u64,
    #[serde(with = "crate::serial::dec_u64")]
    pub subgroup_order: u64,
    #[serde(with = "crate::serial::dec_u64")]
    pub generator: u64,
    pub hash_domain: String,
}

/// Deterministic for a fixed toggle; returns the published constants.
pub fn setup(toggle: SecurityToggle) -> PublicParameters {
    match toggle {
        SecurityToggle::DeskScale => PublicParameters {
            group_prime: GROUP_PRIME,
            subgroup_order: SUBGROUP_ORDER,
            generator: GENERATOR,
            hash_domain: HASH_DOMAIN.to_string(),
        },
    }
}

/// Unit-denominated thresholds of one sharing: `n_units` total share units,
/// secrecy threshold `t_sec`, reconstruction threshold `t_rec`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub n_units: u64,
    pub t_sec: u64,
    pub t_rec: u64,
}

impl ThresholdParams {
    pub fn new(n_units: u64, t_sec: u64, t_rec: u64) -> Result<Self, TcError> {
        if n_units == 0 || t_sec == 0 {
            return Err(TcError::InvalidParams(
                "thresholds and unit count must be positive".into(),
            ));
        }
        if !(t_sec <= t_rec && t_rec <= n_units) {
            return Err(TcError::InvalidParams(format!(
                "need 1 <= t_sec <= t_rec <= n_units, got ({n_units}, {t_sec}, {t_rec})"
            )));
        }
        Ok(ThresholdParams {
            n_units,
            t_sec,
            t_rec,
        })
    }

    pub fn is_tight(&self) -> bool {
        self.t_sec == self.t_rec
    }

    pub fn is_ramp(&self) -> bool {
        self.t_sec < self.t_rec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setup_is_deterministic() {
        assert_eq!(
            setup(SecurityToggle::DeskScale),
            setup(SecurityToggle::DeskScale)
        );
    }

    #[test]
    fn group_constants_are_consistent() {
        // p = 4q + 1 and g generates the order-q subgroup.
        assert_eq!(GROUP_PRIME, 4 * SUBGROUP_ORDER + 1);
        assert!(crate::GroupElement::generator().is_in_subgroup());
        assert!(miller_rabin(GROUP_PRIME));
        assert!(miller_rabin(SUBGROUP_ORDER));
    }

    #[test]
    fn params_validation() {
        assert!(ThresholdParams::new(3, 2, 2).is_ok());
        assert!(ThresholdParams::new(3, 2, 3).unwrap().is_ramp());
        assert!(ThresholdParams::new(3, 2, 2).unwrap().is_tight());
        assert!(ThresholdParams::new(3, 0, 2).is_err());
        assert!(ThresholdParams::new(3, 3, 2).is_err());
        assert!(ThresholdParams::new(3, 2, 4).is_err());
    }

    fn miller_rabin(n: u64) -> bool {
        if n < 4 {
            return n == 2 || n == 3;
        }
        if n % 2 == 0 {
            return false;
        }
        let mut d = n - 1;
        let mut r = 0;
        while d % 2 == 0 {
            d /= 2;
            r += 1;
        }
        // deterministic witness set for u64
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if a % n == 0 {
                continue;
            }
            let mut x = powmod(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 0..r - 1 {
                x = powmod(x, 2, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
        let mut acc: u64 = 1;
        base %= m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = ((acc as u128 * base as u128) % m as u128) as u64;
            }
            base = ((base as u128 * base as u128) % m as u128) as u64;
            exp >>= 1;
        }
        acc
    }
}
