//! Arithmetic in the two fields of the desk-scale group: the scalar field
//! `Z_q` (exponents, shares, outputs) and the group field `Z_p` in which the
//! order-`q` subgroup lives. All products go through `u128`, so no reduction
//! tricks are needed at this size.

use crate::params::{GROUP_PRIME, SUBGROUP_ORDER};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Element of the scalar field `Z_q`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Scalar(#[serde(with = "crate::serial::dec_u64")] u64);

/// Element of `Z_p`; group operations stay inside the order-`q` subgroup.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(#[serde(with = "crate::serial::dec_u64")] u64);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({})", self.0)
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    /// Reduces an arbitrary integer into the field.
    pub fn reduce(v: u64) -> Scalar {
        Scalar(v % SUBGROUP_ORDER)
    }

    /// Accepts only canonical representatives, i.e. `v < q`.
    pub fn checked(v: u64) -> Option<Scalar> {
        (v < SUBGROUP_ORDER).then_some(Scalar(v))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn add(self, rhs: Scalar) -> Scalar {
        let s = self.0 as u128 + rhs.0 as u128;
        Scalar((s % SUBGROUP_ORDER as u128) as u64)
    }

    pub fn sub(self, rhs: Scalar) -> Scalar {
        let s = self.0 as u128 + (SUBGROUP_ORDER - rhs.0) as u128;
        Scalar((s % SUBGROUP_ORDER as u128) as u64)
    }

    pub fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(mulmod(self.0, rhs.0, SUBGROUP_ORDER))
    }

    pub fn pow(self, mut exp: u64) -> Scalar {
        let mut base = self.0;
        let mut acc: u64 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, SUBGROUP_ORDER);
            }
            base = mulmod(base, base, SUBGROUP_ORDER);
            exp >>= 1;
        }
        Scalar(acc)
    }

    /// Multiplicative inverse via Fermat; zero has none.
    pub fn inv(self) -> Option<Scalar> {
        (self.0 != 0).then(|| self.pow(SUBGROUP_ORDER - 2))
    }
}

impl GroupElement {
    /// The subgroup generator from the public parameters.
    pub fn generator() -> GroupElement {
        GroupElement(crate::params::GENERATOR)
    }

    pub fn from_raw(v: u64) -> GroupElement {
        GroupElement(v % GROUP_PRIME)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// `self^e` with the exponent taken in the scalar field.
    pub fn pow(self, e: Scalar) -> GroupElement {
        let mut exp = e.value();
        let mut base = self.0;
        let mut acc: u64 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, GROUP_PRIME);
            }
            base = mulmod(base, base, GROUP_PRIME);
            exp >>= 1;
        }
        GroupElement(acc)
    }

    /// Membership in the designated prime-order subgroup.
    pub fn is_in_subgroup(self) -> bool {
        if self.0 == 0 {
            return false;
        }
        let mut exp = SUBGROUP_ORDER;
        let mut base = self.0;
        let mut acc: u64 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, GROUP_PRIME);
            }
            base = mulmod(base, base, GROUP_PRIME);
            exp >>= 1;
        }
        acc == 1
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Lagrange coefficient at zero for position `x_j` over the positions `xs`.
/// Positions must be distinct and nonzero (unit indices start at 1).
pub(crate) fn lagrange_at_zero(xs: &[u64], j: usize) -> Scalar {
    let xj = Scalar::reduce(xs[j]);
    let mut num = Scalar::ONE;
    let mut den = Scalar::ONE;
    for (k, &x) in xs.iter().enumerate() {
        if k == j {
            continue;
        }
        let xk = Scalar::reduce(x);
        num = num.mul(xk);
        den = den.mul(xk.sub(xj));
    }
    num.mul(den.inv().expect("distinct evaluation points"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for v in [1u64, 2, 7, 12345, SUBGROUP_ORDER - 1] {
            let s = Scalar::reduce(v);
            assert_eq!(s.mul(s.inv().unwrap()), Scalar::ONE);
        }
        assert_eq!(Scalar::ZERO.inv(), None);
    }

    #[test]
    fn generator_is_in_subgroup() {
        let g = GroupElement::generator();
        assert!(g.is_in_subgroup());
        assert_ne!(g.value(), 1);
    }

    #[test]
    fn lagrange_reconstructs_constant_term() {
        // f(x) = 5 + 3x + 11x^2 over Z_q, points x = 1, 2, 3
        let f = |x: u64| {
            Scalar::reduce(5)
                .add(Scalar::reduce(3).mul(Scalar::reduce(x)))
                .add(Scalar::reduce(11).mul(Scalar::reduce(x).mul(Scalar::reduce(x))))
        };
        let xs = [1u64, 2, 3];
        let mut acc = Scalar::ZERO;
        for j in 0..3 {
            acc = acc.add(lagrange_at_zero(&xs, j).mul(f(xs[j])));
        }
        assert_eq!(acc, Scalar::reduce(5));
    }
}
