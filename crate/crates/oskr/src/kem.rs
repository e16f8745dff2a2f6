//! IND-CCA KEM layer: Fujisaki–Okamoto transform with implicit rejection.
//!
//! Secret keys are the concatenation `sk_cpa ‖ pk ‖ H(pk) ‖ z` where `z`
//! is the rejection secret. Encapsulation hashes the caller's randomness
//! before use, binds the public key through `G`, and derives the shared
//! secret from `KDF(K̄ ‖ H(ct))`; decapsulation re-encrypts and falls back
//! to `KDF(z ‖ H(ct))` on mismatch without an observable branch in the
//! output path.
//!
//! [`encaps_approach1`]/[`decaps_approach1`] realize the
//! double-encapsulation construction for 256-bit keys: two independent
//! sessions under the same public key, shared secret and ciphertext being
//! the concatenations. Approaches 2 and 3 are ordinary single sessions of
//! the `approach2`/`approach3` parameter sets and have thin wrappers here.

use crate::cpapke;
use crate::params::ParamSet;
use crate::symmetric::{g, h, kdf, msg_hash, SeedStream};
use crate::{Error, Result};

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::MalformedLength { what, expected, got });
    }
    Ok(())
}

/// Deterministic key generation from the keygen coins `d` and the implicit-
/// rejection secret `z`, both `seed_bytes` long. Returns `(pk, sk)`.
pub fn kem_keygen_deterministic(
    p: &'static ParamSet,
    d: &[u8],
    z: &[u8],
) -> Result<(Vec<u8>, Vec<u8>)> {
    check_len("keygen coins", p.seed_bytes, d.len())?;
    check_len("rejection secret", p.seed_bytes, z.len())?;
    let (pk, sk_cpa) = cpapke::keygen(p, d)?;
    let mut sk = sk_cpa;
    sk.extend_from_slice(&pk);
    sk.extend_from_slice(&h(p, &pk));
    sk.extend_from_slice(z);
    debug_assert_eq!(sk.len(), p.sk_bytes());
    Ok((pk, sk))
}

/// Key generation drawing `d ‖ z` from the caller's stream.
pub fn kem_keygen(p: &'static ParamSet, rng: &mut SeedStream) -> Result<(Vec<u8>, Vec<u8>)> {
    let d = rng.take(p.seed_bytes);
    let z = rng.take(p.seed_bytes);
    kem_keygen_deterministic(p, &d, &z)
}

/// Deterministic encapsulation from caller randomness `m0` (`key_bytes`
/// long, the message width). Returns `(ct, shared_secret)`.
pub fn encaps_deterministic(
    p: &'static ParamSet,
    pk: &[u8],
    m0: &[u8],
) -> Result<(Vec<u8>, Vec<u8>)> {
    check_len("public key", p.pk_bytes(), pk.len())?;
    check_len("encaps randomness", p.key_bytes, m0.len())?;
    // Hash the input randomness so a biased caller RNG cannot leak into the
    // session directly.
    let m = msg_hash(p, m0);
    let mut buf = m.clone();
    buf.extend_from_slice(&h(p, pk));
    let (kbar, coins) = g(p, &buf);
    let ct = cpapke::encrypt(p, pk, &m, &coins)?;
    let mut kin = kbar;
    kin.extend_from_slice(&h(p, &ct));
    Ok((ct, kdf(p, &kin)))
}

/// Encapsulation: draws the session randomness from `rng`.
pub fn encaps(p: &'static ParamSet, pk: &[u8], rng: &mut SeedStream) -> Result<(Vec<u8>, Vec<u8>)> {
    let m0 = rng.take(p.key_bytes);
    encaps_deterministic(p, pk, &m0)
}

/// Constant-shape byte comparison (no early exit).
fn ct_eq(a: &[u8], b: &[u8]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0u8;
    for (x, y) in a.iter().zip(b) {
        acc |= x ^ y;
    }
    acc == 0
}

/// Decapsulation with implicit rejection: a malformed-but-well-sized
/// ciphertext yields the pseudorandom secret `KDF(z ‖ H(ct))` instead of
/// an error.
pub fn decaps(p: &'static ParamSet, sk: &[u8], ct: &[u8]) -> Result<Vec<u8>> {
    check_len("secret key", p.sk_bytes(), sk.len())?;
    check_len("ciphertext", p.ct_bytes(), ct.len())?;
    let sk_cpa_len = p.l * p.poly_bytes();
    let (sk_cpa, rest) = sk.split_at(sk_cpa_len);
    let (pk, rest) = rest.split_at(p.pk_bytes());
    let (pk_hash, z) = rest.split_at(p.seed_bytes);

    let m = cpapke::decrypt(p, sk_cpa, ct)?;
    let mut gbuf = m.clone();
    gbuf.extend_from_slice(pk_hash);
    let (kbar, coins) = g(p, &gbuf);
    let ct_cmp = cpapke::encrypt(p, pk, &m, &coins)?;

    let ok = ct_eq(ct, &ct_cmp);
    let mut kin = if ok { kbar } else { z.to_vec() };
    kin.extend_from_slice(&h(p, ct));
    Ok(kdf(p, &kin))
}

/// Double encapsulation: two independent sessions under one public key.
/// Ciphertext is `ct_a ‖ ct_b`, the shared secret `K_a ‖ K_b`.
pub fn encaps_approach1(
    p: &'static ParamSet,
    pk: &[u8],
    rng: &mut SeedStream,
) -> Result<(Vec<u8>, Vec<u8>)> {
    let (mut ct, mut key) = encaps(p, pk, rng)?;
    let (ct_b, key_b) = encaps(p, pk, rng)?;
    ct.extend_from_slice(&ct_b);
    key.extend_from_slice(&key_b);
    Ok((ct, key))
}

/// Decapsulates a double-session ciphertext (`2·ct_bytes` long).
pub fn decaps_approach1(p: &'static ParamSet, sk: &[u8], ct: &[u8]) -> Result<Vec<u8>> {
    check_len("ciphertext", 2 * p.ct_bytes(), ct.len())?;
    let (ct_a, ct_b) = ct.split_at(p.ct_bytes());
    let mut key = decaps(p, sk, ct_a)?;
    key.extend_from_slice(&decaps(p, sk, ct_b)?);
    Ok(key)
}

/// 256-bit-secret session on the widened-modulus single-ciphertext set.
pub fn encaps_approach2(
    p: &'static ParamSet,
    pk: &[u8],
    rng: &mut SeedStream,
) -> Result<(Vec<u8>, Vec<u8>)> {
    expect_preset(p, "approach2")?;
    encaps(p, pk, rng)
}

/// 256-bit-secret session on the doubled-dimension single-ciphertext set.
pub fn encaps_approach3(
    p: &'static ParamSet,
    pk: &[u8],
    rng: &mut SeedStream,
) -> Result<(Vec<u8>, Vec<u8>)> {
    expect_preset(p, "approach3")?;
    encaps(p, pk, rng)
}

fn expect_preset(p: &ParamSet, want: &str) -> Result<()> {
    if p.name != want {
        return Err(Error::Invariant(format!(
            "operation is defined for preset {want}, got {}",
            p.name
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{preset, PRESETS};

    #[test]
    fn roundtrip_all_presets() {
        for p in PRESETS {
            let mut rng = SeedStream::new(p.name.as_bytes());
            let (pk, sk) = kem_keygen(p, &mut rng).unwrap();
            assert_eq!(sk.len(), p.sk_bytes());
            for _ in 0..4 {
                let (ct, k1) = encaps(p, &pk, &mut rng).unwrap();
                let k2 = decaps(p, &sk, &ct).unwrap();
                assert_eq!(k1, k2, "{}", p.name);
                assert_eq!(k1.len(), p.key_bytes);
            }
        }
    }

    #[test]
    fn tampered_ciphertext_implicitly_rejected() {
        let p = preset("oskr512").unwrap();
        let mut rng = SeedStream::new(b"tamper");
        let (pk, sk) = kem_keygen(p, &mut rng).unwrap();
        let (mut ct, k1) = encaps(p, &pk, &mut rng).unwrap();
        ct[5] ^= 0x40;
        let k2 = decaps(p, &sk, &ct).unwrap();
        assert_ne!(k1, k2);
        assert_eq!(k2.len(), p.key_bytes);
        // Deterministic pseudorandom rejection output.
        assert_eq!(k2, decaps(p, &sk, &ct).unwrap());
    }

    #[test]
    fn approach1_doubles_key_and_ciphertext() {
        let p = preset("approach1").unwrap();
        let mut rng = SeedStream::new(b"a1");
        let (pk, sk) = kem_keygen(p, &mut rng).unwrap();
        let (ct, k1) = encaps_approach1(p, &pk, &mut rng).unwrap();
        assert_eq!(ct.len(), 2 * p.ct_bytes());
        assert_eq!(k1.len(), 64);
        assert_eq!(decaps_approach1(p, &sk, &ct).unwrap(), k1);
    }

    #[test]
    fn approach_wrappers_enforce_preset() {
        let p = preset("oskr512").unwrap();
        let mut rng = SeedStream::new(b"w");
        let (pk, _) = kem_keygen(p, &mut rng).unwrap();
        assert!(matches!(
            encaps_approach2(p, &pk, &mut rng),
            Err(Error::Invariant(_))
        ));
    }
}
