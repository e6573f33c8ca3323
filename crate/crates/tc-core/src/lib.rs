//! A non-interactive `(n, t_sec, t_rec)`-threshold cryptosystem over a small
//! Schnorr group, built for deterministic protocol simulation rather than for
//! real-world security.
//!
//! The backend evaluates `Eval(s, val) = s * H(val)` in the exponent field of
//! a prime-order subgroup, shares the secret with a Shamir polynomial of
//! degree `t_rec - 1`, and publishes Feldman-style per-unit commitments
//! `g^f(i)` so that output shares can be verified individually. Weighted
//! parties hold several contiguous share units. The same secret can be shared
//! twice at two threshold pairs with independent polynomial randomness.
//!
//! The group parameters are deliberately tiny (61-bit subgroup order). They
//! make every algebraic claim checkable by brute force on a desk machine and
//! are **not** suitable for protecting anything.

mod error;
mod field;
mod hash;
mod input;
mod params;
mod scheme;
mod serial;

pub use error::TcError;
pub use field::{GroupElement, Scalar};
pub use hash::hash_to_field;
pub use input::EvalInput;
pub use params::{setup, PublicParameters, SecurityToggle, ThresholdParams};
pub use scheme::{
    comb, double_share_gen, eval, peval, pver, share_gen, DoubleKeyMaterial, KeyMaterial,
    OutputShare, PublicCommitments, SecretShareBundle, TcOutput, UnitShare,
};
