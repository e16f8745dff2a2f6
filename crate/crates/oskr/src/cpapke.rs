//! IND-CPA public-key encryption core.
//!
//! One code path serves every parameter set; two points vary by preset:
//!
//! * **Public-key convention.** When `d_k` equals the bit width of `q` the
//!   key vector `t̂` is kept in the transform domain and packed raw (the
//!   deployed 3329-family layout). Otherwise `t` is brought back to the
//!   normal domain and stored compressed to `d_k` bits; encryption then
//!   re-applies the transform after decompression.
//! * **Decryption rule.** [`decrypt`] recovers the message with the
//!   single-rounding decoder that consumes the compressed `v` words
//!   directly (the scheme's defining rule); [`decrypt_original`] is the
//!   conventional decompress-subtract-round decoder, kept for side-by-side
//!   failure-rate comparisons.
//!
//! All routines are deterministic given their coin inputs; the KEM layer
//! owns randomness and the FO transform.

use crate::codec::{
    compress, decode_ct, decode_pk, decode_sk_cpa, decompress, encode_ct, encode_pk,
    encode_sk_cpa, msg_to_poly, pack_poly,
};
use crate::modring::Zq;
use crate::ntt::{self, NttPlan, OpCounter};
use crate::params::ParamSet;
use crate::poly::{add, canon, cbd_input_len, cbd_sample, fix_mont, gen_matrix, pointwise_acc};
use crate::symmetric::{g, prf};
use crate::{Error, Result};

/// Samples the noise polynomial for PRF nonce `nonce` at width `eta`,
/// returning centered coefficients.
fn getnoise(p: &ParamSet, sigma: &[u8], nonce: u8, eta: u8) -> Vec<Zq> {
    let bytes = prf(sigma, nonce, cbd_input_len(p.n, eta));
    cbd_sample(&bytes, eta, p.n).expect("prf length matches cbd input")
}

/// Key generation from a `seed_bytes`-long coin string.
/// Returns `(pk, sk_cpa)`.
pub fn keygen(p: &'static ParamSet, coins: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    if coins.len() != p.seed_bytes {
        return Err(Error::MalformedLength {
            what: "keygen coins",
            expected: p.seed_bytes,
            got: coins.len(),
        });
    }
    let plan = NttPlan::for_params(p)?;
    let ring = plan.ring();
    let mut ctr = OpCounter::default();
    let (rho, sigma) = g(p, coins);

    let a = gen_matrix(ring, p, &rho, false);
    let s: Vec<Vec<Zq>> = (0..p.l)
        .map(|i| getnoise(p, &sigma, i as u8, p.eta_s))
        .collect();
    let e: Vec<Vec<Zq>> = (0..p.l)
        .map(|i| getnoise(p, &sigma, (p.l + i) as u8, p.eta_keygen_e))
        .collect();

    let s_hat: Vec<Vec<Zq>> = s.iter().map(|f| ntt::ntt(&plan, &canon(ring, f), &mut ctr)).collect();

    let t: Vec<Vec<Zq>> = if p.pk_is_ntt_domain() {
        // t̂ = Â∘ŝ + ê, all kept in the transform domain.
        (0..p.l)
            .map(|i| {
                let acc = pointwise_acc(&plan, &a[i], &s_hat, &mut ctr);
                let e_hat = ntt::ntt(&plan, &canon(ring, &e[i]), &mut ctr);
                add(ring, &fix_mont(ring, &acc), &e_hat)
            })
            .collect()
    } else {
        // t = INTT(Â∘ŝ) + e, stored compressed in the normal domain.
        (0..p.l)
            .map(|i| {
                let acc = pointwise_acc(&plan, &a[i], &s_hat, &mut ctr);
                add(ring, &ntt::intt_after_mul(&plan, &acc, &mut ctr), &canon(ring, &e[i]))
            })
            .collect()
    };

    let pk = encode_pk(ring, p, &t, &rho);
    let sk = encode_sk_cpa(ring, p, &s_hat);
    Ok((pk, sk))
}

/// Encrypts `msg` (`key_bytes` long) under `pk` with coin string `coins`.
pub fn encrypt(p: &'static ParamSet, pk: &[u8], msg: &[u8], coins: &[u8]) -> Result<Vec<u8>> {
    if msg.len() != p.key_bytes {
        return Err(Error::MalformedLength {
            what: "message",
            expected: p.key_bytes,
            got: msg.len(),
        });
    }
    if coins.len() != p.seed_bytes {
        return Err(Error::MalformedLength {
            what: "encrypt coins",
            expected: p.seed_bytes,
            got: coins.len(),
        });
    }
    let plan = NttPlan::for_params(p)?;
    let ring = plan.ring();
    let mut ctr = OpCounter::default();

    let (t, rho) = decode_pk(ring, p, pk)?;
    let t_hat: Vec<Vec<Zq>> = if p.pk_is_ntt_domain() {
        t
    } else {
        t.iter().map(|f| ntt::ntt(&plan, f, &mut ctr)).collect()
    };

    let at = gen_matrix(ring, p, &rho, true);
    let r: Vec<Vec<Zq>> = (0..p.l)
        .map(|i| getnoise(p, coins, i as u8, p.eta_s))
        .collect();
    let e1: Vec<Vec<Zq>> = (0..p.l)
        .map(|i| getnoise(p, coins, (p.l + i) as u8, p.eta_e))
        .collect();
    let e2 = getnoise(p, coins, (2 * p.l) as u8, p.eta_e);

    let r_hat: Vec<Vec<Zq>> = r.iter().map(|f| ntt::ntt(&plan, &canon(ring, f), &mut ctr)).collect();

    let u: Vec<Vec<Zq>> = (0..p.l)
        .map(|i| {
            let acc = pointwise_acc(&plan, &at[i], &r_hat, &mut ctr);
            add(ring, &ntt::intt_after_mul(&plan, &acc, &mut ctr), &canon(ring, &e1[i]))
        })
        .collect();

    let acc = pointwise_acc(&plan, &t_hat, &r_hat, &mut ctr);
    let mut v = add(ring, &ntt::intt_after_mul(&plan, &acc, &mut ctr), &canon(ring, &e2));
    v = add(ring, &v, &msg_to_poly(ring, p, msg)?);

    Ok(encode_ct(ring, p, &u, &v))
}

/// Single-rounding decoder for one coefficient: recovers the `d_m`-bit
/// symbol from the still-compressed word `v ∈ [0, 2^{d_v})` and the
/// canonical inner-product coefficient `sigma1`, via
/// `⌊(2m(v·q − σ1·g) + g·q) / (2·g·q)⌋ mod m` with `g = 2^{d_v}`,
/// computed division-free through the Barrett floor-by-`q` helper.
fn akcn_decode_coeff(p: &ParamSet, ring: &crate::modring::Ring, v: u16, sigma1: Zq) -> u16 {
    let m = 1u64 << p.d_m();
    let g = 1u64 << p.d_v;
    let num = 2 * m as i64 * (v as i64 * p.q as i64 - sigma1 as i64 * g as i64)
        + (g * p.q as u64) as i64;
    // Shift into the positive range by a multiple of the divisor 2·g·q
    // (harmless mod m), then reduce with the division-free floor.
    let shifted = (num + (2 * g * p.q as u64 * m) as i64) as u64;
    let quot = ring.div_floor_unchecked(shifted) >> (p.d_v + 1);
    (quot % m) as u16
}

/// Decrypts with the single-rounding rule (the schemes' decoder).
pub fn decrypt(p: &'static ParamSet, sk_cpa: &[u8], ct: &[u8]) -> Result<Vec<u8>> {
    let plan = NttPlan::for_params(p)?;
    let ring = plan.ring();
    let mut ctr = OpCounter::default();

    let s_hat = decode_sk_cpa(ring, p, sk_cpa)?;
    let (u_words, v_words) = decode_ct(p, ct)?;

    let u_hat: Vec<Vec<Zq>> = u_words
        .iter()
        .map(|w| {
            let u: Vec<Zq> = w.iter().map(|&y| decompress(ring, y, p.d_u)).collect();
            ntt::ntt(&plan, &u, &mut ctr)
        })
        .collect();
    let acc = pointwise_acc(&plan, &s_hat, &u_hat, &mut ctr);
    let sigma1 = ntt::intt_after_mul(&plan, &acc, &mut ctr);

    let symbols: Vec<u16> = v_words
        .iter()
        .zip(&sigma1)
        .map(|(&v, &s1)| akcn_decode_coeff(p, ring, v, s1))
        .collect();
    Ok(pack_poly(&symbols, p.d_m()))
}

/// Decrypts with the conventional two-rounding rule
/// (`compress(decompress(v) − σ1, d_m)`), for comparison work.
pub fn decrypt_original(p: &'static ParamSet, sk_cpa: &[u8], ct: &[u8]) -> Result<Vec<u8>> {
    let plan = NttPlan::for_params(p)?;
    let ring = plan.ring();
    let mut ctr = OpCounter::default();

    let s_hat = decode_sk_cpa(ring, p, sk_cpa)?;
    let (u_words, v_words) = decode_ct(p, ct)?;

    let u_hat: Vec<Vec<Zq>> = u_words
        .iter()
        .map(|w| {
            let u: Vec<Zq> = w.iter().map(|&y| decompress(ring, y, p.d_u)).collect();
            ntt::ntt(&plan, &u, &mut ctr)
        })
        .collect();
    let acc = pointwise_acc(&plan, &s_hat, &u_hat, &mut ctr);
    let sigma1 = ntt::intt_after_mul(&plan, &acc, &mut ctr);

    let symbols: Vec<u16> = v_words
        .iter()
        .zip(&sigma1)
        .map(|(&v, &s1)| {
            let w = ring.caddq(decompress(ring, v, p.d_v) - s1);
            compress(ring, w, p.d_m())
        })
        .collect();
    Ok(pack_poly(&symbols, p.d_m()))
}
