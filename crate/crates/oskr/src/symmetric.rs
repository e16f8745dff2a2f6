//! Symmetric primitives (SHA-3 family) with per-parameter-set output sizes.
//!
//! The `n = 256` sets use the deployed Kyber instantiation:
//!
//! * `H  = SHA3-256` (32 bytes), `G = SHA3-512` (32 ‖ 32),
//! * `XOF = SHAKE-128(ρ ‖ col ‖ row)` for matrix expansion,
//! * `PRF = SHAKE-256(σ ‖ nonce)` for noise sampling,
//! * `KDF = SHAKE-256` for the shared secret.
//!
//! The `n = 512` sets need 64-byte seeds and hashes, so `H` widens to
//! SHA3-512 and `G` to SHAKE-256 with 128 bytes of output split in half;
//! `XOF`/`PRF`/`KDF` keep their sponges with longer reads.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Sha3_512, Shake128, Shake128Reader, Shake256};

use crate::params::ParamSet;

/// `H`: hash to `seed_bytes` (32 or 64) bytes.
pub fn h(p: &ParamSet, data: &[u8]) -> Vec<u8> {
    if p.seed_bytes == 32 {
        Sha3_256::digest(data).to_vec()
    } else {
        Sha3_512::digest(data).to_vec()
    }
}

/// Message-width hash: like [`h`] but sized to `key_bytes`. For most sets
/// `key_bytes == seed_bytes` and this coincides with `H`; the wide-message
/// set carries 64-byte messages alongside 32-byte seeds.
pub fn msg_hash(p: &ParamSet, data: &[u8]) -> Vec<u8> {
    if p.key_bytes == 32 {
        Sha3_256::digest(data).to_vec()
    } else {
        Sha3_512::digest(data).to_vec()
    }
}

/// `G`: hash to two `seed_bytes` halves `(a, b)`.
pub fn g(p: &ParamSet, data: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let out = if p.seed_bytes == 32 {
        Sha3_512::digest(data).to_vec()
    } else {
        let mut hasher = Shake256::default();
        hasher.update(data);
        let mut out = vec![0u8; 128];
        hasher.finalize_xof().read(&mut out);
        out
    };
    let (a, b) = out.split_at(p.seed_bytes);
    (a.to_vec(), b.to_vec())
}

/// `XOF(ρ, col, row)`: the rejection-sampling stream for matrix entry
/// `A[row][col]` (the column index is absorbed first, matching the deployed
/// convention).
pub fn xof(rho: &[u8], col: u8, row: u8) -> Shake128Reader {
    let mut hasher = Shake128::default();
    hasher.update(rho);
    hasher.update(&[col, row]);
    hasher.finalize_xof()
}

/// `PRF(σ, nonce)`: `outlen` bytes of noise-sampling randomness.
pub fn prf(sigma: &[u8], nonce: u8, outlen: usize) -> Vec<u8> {
    let mut hasher = Shake256::default();
    hasher.update(sigma);
    hasher.update(&[nonce]);
    let mut out = vec![0u8; outlen];
    hasher.finalize_xof().read(&mut out);
    out
}

/// `KDF`: derive the `key_bytes`-byte shared secret.
pub fn kdf(p: &ParamSet, data: &[u8]) -> Vec<u8> {
    let mut hasher = Shake256::default();
    hasher.update(data);
    let mut out = vec![0u8; p.key_bytes];
    hasher.finalize_xof().read(&mut out);
    out
}

/// A deterministic SHAKE-256 byte stream, used for `--seed`-driven CLI
/// randomness and KAT generation.
pub struct SeedStream {
    reader: sha3::Shake256Reader,
}

impl SeedStream {
    pub fn new(seed: &[u8]) -> Self {
        let mut hasher = Shake256::default();
        hasher.update(seed);
        SeedStream {
            reader: hasher.finalize_xof(),
        }
    }

    pub fn fill(&mut self, buf: &mut [u8]) {
        self.reader.read(buf);
    }

    pub fn take(&mut self, n: usize) -> Vec<u8> {
        let mut out = vec![0u8; n];
        self.fill(&mut out);
        out
    }
}

impl rand_core::RngCore for SeedStream {
    fn next_u32(&mut self) -> u32 {
        let mut b = [0u8; 4];
        self.fill(&mut b);
        u32::from_le_bytes(b)
    }
    fn next_u64(&mut self) -> u64 {
        let mut b = [0u8; 8];
        self.fill(&mut b);
        u64::from_le_bytes(b)
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.fill(dest);
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.fill(dest);
        Ok(())
    }
}

impl rand_core::CryptoRng for SeedStream {}
