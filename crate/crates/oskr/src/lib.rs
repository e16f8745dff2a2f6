//! OSKR / OKAI module-lattice key-encapsulation mechanisms.
//!
//! This crate provides:
//!
//! * nine instantiated parameter sets (`oskr512/768/1024`, `okai512/768/1024`,
//!   and the three 512-bit-secret constructions `approach1/2/3`) built on
//!   module learning-with-errors over `Z_q[x]/(x^n + 1)` for
//!   `q ∈ {3329, 7681}` and `n ∈ {256, 512}`,
//! * a four-variant number-theoretic-transform engine — classic full NTT,
//!   truncated NTT, part-split NTT and hybrid NTT — with exact operation
//!   counting and closed-form complexity predictions,
//! * a decryption-failure-probability calculator that reproduces the design
//!   `log2 δ` targets of every parameter set by exact probability-mass-function
//!   convolution, and
//! * a CLI (`oskr`) exposing key generation, encapsulation, decapsulation,
//!   KAT generation, failure-rate evaluation, NTT cost reports and benches.
//!
//! The `oskr512`/`oskr768` parameter sets are byte-compatible with the
//! widely deployed round-3 Kyber-512/768 reference implementation: key
//! generation and encryption produce identical outputs for identical coins.
//!
//! # Security caveat
//!
//! This is a research-grade implementation aimed at correctness, exact
//! operation accounting and failure-rate analysis. It is not hardened
//! (no constant-time guarantees beyond the structural ones inherited from
//! the arithmetic) and must not be used to protect real traffic.

pub mod codec;
pub mod cpapke;
pub mod failure;
pub mod kem;
pub mod modring;
pub mod ntt;
pub mod params;
pub mod poly;
pub mod symmetric;

/// Crate-wide error type.
///
/// `Malformed*` variants indicate caller-supplied data that cannot be parsed
/// (CLI exit code 1); `Invariant*` variants indicate an internal consistency
/// check failed (CLI exit code 2).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown parameter set `{0}`")]
    UnknownPreset(String),
    #[error("malformed {what}: expected {expected} bytes, got {got}")]
    MalformedLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no suitable primitive root: q = {q} has no primitive {order}-th root of unity")]
    RootUnavailable { q: u16, order: usize },
    #[error("unsupported transform shape: {0}")]
    UnsupportedShape(String),
    #[error("operand out of verified range for exact division: {0}")]
    RangeExceeded(u64),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use kem::{decaps, encaps, kem_keygen};
pub use params::{preset, ParamSet};
