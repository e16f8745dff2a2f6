//! Rounding (compression) and byte serialization.
//!
//! # Rounding
//!
//! `compress(x, d)` maps a canonical coefficient to `⌈(2^d / q)·x⌋ mod 2^d`
//! and `decompress(y, d)` maps back via `⌈(q / 2^d)·y⌋`, where `⌈·⌋` is
//! round-half-up (`⌈z⌋ = ⌊z + 1/2⌋`). Both are implemented without any CPU
//! division: the only division by `q` goes through the exact multiply-shift
//! of [`Ring::div_floor_by_q`], using
//!
//! ```text
//! ⌈(2^d/q)·x⌋ = ⌊(2^{d+1}·x + q) / (2q)⌋ = ⌊⌊(2^{d+1}·x + q)/q⌋ / 2⌋.
//! ```
//!
//! The round trip error is at most `⌈q / 2^{d+1}⌋` in centered distance,
//! which the tests check exhaustively for every `(q, d)` pair in use.
//!
//! # Serialization
//!
//! All polynomial packing is little-endian at the bit level: coefficient `i`
//! occupies bits `[i·d, (i+1)·d)` of the byte stream, least significant bit
//! first. This matches the deployed Kyber byte formats for every depth
//! (12-bit raw, 10/11-bit `u`, 4/5-bit `v`, 1-bit messages).
//!
//! Wire layouts:
//!
//! * `pk = pack(key vector) ‖ ρ` — the key vector is the raw NTT-domain
//!   vector at `d = ⌈log2 q⌉` when `d_k = ⌈log2 q⌉`, otherwise the
//!   compressed normal-domain vector at `d = d_k`;
//! * `ct = pack_{d_u}(compress(u)) ‖ pack_{d_v}(compress(v))`;
//! * `sk = pack(ŝ) ‖ pk ‖ H(pk) ‖ z` (assembled in the KEM layer).

use crate::modring::{Ring, Zq};
use crate::params::ParamSet;
use crate::{Error, Result};

/// `⌈(2^d / q)·x⌋ mod 2^d` for canonical `x ∈ [0, q)`.
#[inline]
pub fn compress(ring: &Ring, x: Zq, d: u8) -> u16 {
    debug_assert!((0..ring.q as i16).contains(&x), "compress needs canonical input");
    let num = ((x as u64) << (d + 1)) + ring.q as u64;
    ((ring.div_floor_unchecked(num) >> 1) & ((1 << d) - 1)) as u16
}

/// `⌈(q / 2^d)·y⌋` for `y ∈ [0, 2^d)`; the result is canonical.
#[inline]
pub fn decompress(ring: &Ring, y: u16, d: u8) -> Zq {
    debug_assert!((y as u32) < (1u32 << d));
    (((ring.q as u32 * y as u32) + (1 << (d - 1))) >> d) as Zq
}

/// Packs `coeffs` (each `< 2^d`) into `⌈len·d/8⌉` bytes, little-endian
/// bit order.
pub fn pack_poly(coeffs: &[u16], d: u8) -> Vec<u8> {
    debug_assert!(coeffs.len() * d as usize % 8 == 0, "non-byte-aligned packing");
    let mut out = Vec::with_capacity(coeffs.len() * d as usize / 8);
    let mut acc: u64 = 0;
    let mut bits: u32 = 0;
    for &c in coeffs {
        debug_assert!((c as u32) < (1u32 << d));
        acc |= (c as u64) << bits;
        bits += d as u32;
        while bits >= 8 {
            out.push(acc as u8);
            acc >>= 8;
            bits -= 8;
        }
    }
    out
}

/// Inverse of [`pack_poly`]: reads `n` words of `d` bits each.
pub fn unpack_poly(bytes: &[u8], d: u8, n: usize) -> Result<Vec<u16>> {
    let need = n * d as usize / 8;
    if bytes.len() != need {
        return Err(Error::MalformedLength {
            what: "packed polynomial",
            expected: need,
            got: bytes.len(),
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut acc: u64 = 0;
    let mut bits: u32 = 0;
    let mut it = bytes.iter();
    let mask = (1u64 << d) - 1;
    for _ in 0..n {
        while bits < d as u32 {
            acc |= (*it.next().expect("length checked") as u64) << bits;
            bits += 8;
        }
        out.push((acc & mask) as u16);
        acc >>= d;
        bits -= d as u32;
    }
    Ok(out)
}

/// Packs a slice of canonical coefficients at the raw depth `⌈log2 q⌉`.
pub fn pack_raw(ring: &Ring, coeffs: &[Zq], qbits: u8) -> Vec<u8> {
    let words: Vec<u16> = coeffs
        .iter()
        .map(|&c| {
            debug_assert!((0..ring.q as i16).contains(&c));
            c as u16
        })
        .collect();
    pack_poly(&words, qbits)
}

/// Unpacks raw coefficients and canonicalizes them into `[0, q)`.
///
/// Values in `[q, 2^⌈log2 q⌉)` are accepted and reduced — mirroring the
/// deployed format, which does not reject such encodings.
pub fn unpack_raw(ring: &Ring, bytes: &[u8], qbits: u8, n: usize) -> Result<Vec<Zq>> {
    let words = unpack_poly(bytes, qbits, n)?;
    Ok(words
        .into_iter()
        .map(|w| ring.barrett_reduce(w as i16))
        .collect())
}

/// Compresses a whole polynomial to depth `d` and packs it.
pub fn compress_poly(ring: &Ring, coeffs: &[Zq], d: u8) -> Vec<u8> {
    let words: Vec<u16> = coeffs.iter().map(|&c| compress(ring, c, d)).collect();
    pack_poly(&words, d)
}

/// Unpacks a depth-`d` polynomial and decompresses it to canonical
/// coefficients.
pub fn decompress_poly(ring: &Ring, bytes: &[u8], d: u8, n: usize) -> Result<Vec<Zq>> {
    let words = unpack_poly(bytes, d, n)?;
    Ok(words.into_iter().map(|w| decompress(ring, w, d)).collect())
}

/// Expands message bytes into a polynomial: each `log2 m`-bit symbol `k`
/// becomes `decompress(k, log2 m) = ⌈(q/m)·k⌋`.
pub fn msg_to_poly(ring: &Ring, p: &ParamSet, msg: &[u8]) -> Result<Vec<Zq>> {
    let words = unpack_poly(msg, p.d_m(), p.n)?;
    Ok(words
        .into_iter()
        .map(|w| decompress(ring, w, p.d_m()))
        .collect())
}

/// Recovers message bytes from a polynomial by `compress(·, log2 m)`.
pub fn poly_to_msg(ring: &Ring, p: &ParamSet, coeffs: &[Zq]) -> Vec<u8> {
    let words: Vec<u16> = coeffs.iter().map(|&c| compress(ring, c, p.d_m())).collect();
    pack_poly(&words, p.d_m())
}

/// Encodes a public key: the key vector (raw NTT-domain or compressed,
/// depending on `d_k`) followed by the matrix seed `ρ`.
pub fn encode_pk(ring: &Ring, p: &ParamSet, t: &[Vec<Zq>], rho: &[u8]) -> Vec<u8> {
    debug_assert_eq!(t.len(), p.l);
    debug_assert_eq!(rho.len(), p.seed_bytes);
    let mut out = Vec::with_capacity(p.pk_bytes());
    for poly in t {
        if p.pk_is_ntt_domain() {
            out.extend_from_slice(&pack_raw(ring, poly, p.d_k));
        } else {
            out.extend_from_slice(&compress_poly(ring, poly, p.d_k));
        }
    }
    out.extend_from_slice(rho);
    out
}

/// Decodes a public key into `(key vector, ρ)`. When `d_k < ⌈log2 q⌉` the
/// vector is returned decompressed (normal domain); otherwise it is the raw
/// NTT-domain vector.
pub fn decode_pk(ring: &Ring, p: &ParamSet, pk: &[u8]) -> Result<(Vec<Vec<Zq>>, Vec<u8>)> {
    if pk.len() != p.pk_bytes() {
        return Err(Error::MalformedLength {
            what: "public key",
            expected: p.pk_bytes(),
            got: pk.len(),
        });
    }
    let per = p.n * p.d_k as usize / 8;
    let mut t = Vec::with_capacity(p.l);
    for i in 0..p.l {
        let chunk = &pk[i * per..(i + 1) * per];
        let poly = if p.pk_is_ntt_domain() {
            unpack_raw(ring, chunk, p.d_k, p.n)?
        } else {
            decompress_poly(ring, chunk, p.d_k, p.n)?
        };
        t.push(poly);
    }
    Ok((t, pk[p.l * per..].to_vec()))
}

/// Encodes a ciphertext from canonical `u` (vector) and `v` (scalar) parts.
pub fn encode_ct(ring: &Ring, p: &ParamSet, u: &[Vec<Zq>], v: &[Zq]) -> Vec<u8> {
    let mut out = Vec::with_capacity(p.ct_bytes());
    for poly in u {
        out.extend_from_slice(&compress_poly(ring, poly, p.d_u));
    }
    out.extend_from_slice(&compress_poly(ring, v, p.d_v));
    out
}

/// Decodes a ciphertext into the *compressed words* `(u words, v words)`.
///
/// The `v` words are returned still compressed because the single-rounding
/// decryption rule consumes them directly; use [`decompress`] where the
/// decompressed value is wanted.
pub fn decode_ct(p: &ParamSet, ct: &[u8]) -> Result<(Vec<Vec<u16>>, Vec<u16>)> {
    if ct.len() != p.ct_bytes() {
        return Err(Error::MalformedLength {
            what: "ciphertext",
            expected: p.ct_bytes(),
            got: ct.len(),
        });
    }
    let per = p.n * p.d_u as usize / 8;
    let mut u = Vec::with_capacity(p.l);
    for i in 0..p.l {
        u.push(unpack_poly(&ct[i * per..(i + 1) * per], p.d_u, p.n)?);
    }
    let v = unpack_poly(&ct[p.l * per..], p.d_v, p.n)?;
    Ok((u, v))
}

/// Encodes the secret (CPA) key: the raw NTT-domain secret vector.
pub fn encode_sk_cpa(ring: &Ring, p: &ParamSet, s_hat: &[Vec<Zq>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(p.l * p.poly_bytes());
    for poly in s_hat {
        out.extend_from_slice(&pack_raw(ring, poly, p.qbits()));
    }
    out
}

/// Decodes the secret (CPA) key.
pub fn decode_sk_cpa(ring: &Ring, p: &ParamSet, sk: &[u8]) -> Result<Vec<Vec<Zq>>> {
    let per = p.poly_bytes();
    if sk.len() != p.l * per {
        return Err(Error::MalformedLength {
            what: "secret key (cpa part)",
            expected: p.l * per,
            got: sk.len(),
        });
    }
    (0..p.l)
        .map(|i| unpack_raw(ring, &sk[i * per..(i + 1) * per], p.qbits(), p.n))
        .collect()
}
