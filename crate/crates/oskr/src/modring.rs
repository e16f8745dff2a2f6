//! Arithmetic in `Z_q` for the NTT-friendly moduli used by the schemes.
//!
//! Three primitives carry the whole crate:
//!
//! * [`Ring::montgomery_reduce`] — signed Montgomery reduction with
//!   `R = 2^16`, the workhorse of every butterfly and pointwise product;
//! * [`Ring::barrett_reduce`] — canonical reduction of any `i16` into
//!   `[0, q)`, used to tame lazy coefficient growth between NTT levels;
//! * [`Ring::div_floor_by_q`] — an exact multiply-shift replacement for
//!   `⌊a / q⌋`, which lets rounding (compression) run without any CPU
//!   division instruction.
//!
//! Coefficients are held as `i16`. Inside a transform they are allowed to
//! grow beyond `[0, q)` (lazy reduction); the growth budget per modulus is
//! checked in the tests by worst-case interval arithmetic: for `q = 3329`
//! all eight levels fit, while `q = 7681` (13 bits) must be re-reduced
//! every two levels.

use crate::{Error, Result};

/// A coefficient of `R_q`; canonical range `[0, q)` unless a function
/// documents a wider (lazy) range.
pub type Zq = i16;

/// Montgomery radix: all `*_mont` values are stored multiplied by `R mod q`.
pub const MONT_R_BITS: u32 = 16;

/// Precomputed constants for one modulus.
#[derive(Debug, Clone, Copy)]
pub struct Ring {
    /// The modulus (odd, < 2^14).
    pub q: u16,
    /// `q^{-1} mod 2^16` (for Montgomery reduction).
    qinv: u16,
    /// `⌊(2^26 + q/2) / q⌋` (for Barrett reduction).
    barrett_v: i32,
    /// `R^2 mod q` — multiply by this (Montgomery) to enter the domain.
    r2: u16,
    /// Multiply-shift magic for `⌊a/q⌋`: `b = ⌈2^s / q⌉`.
    div_b: u64,
    /// Shift for the floor-divide magic.
    div_s: u32,
    /// Largest operand for which the magic division is proven exact.
    div_max: u64,
}

const fn newton_inv_2_16(q: u16) -> u16 {
    // 2-adic Newton iteration: x ← x(2 − qx) doubles the correct low bits.
    // Odd q has q·q ≡ 1 (mod 8), so four rounds exceed 16 bits.
    let mut x = q;
    let mut i = 0;
    while i < 4 {
        x = x.wrapping_mul(2u16.wrapping_sub(q.wrapping_mul(x)));
        i += 1;
    }
    x
}

const fn div_magic(q: u16) -> (u64, u32, u64) {
    // Find the smallest shift s with b = ⌈2^s/q⌉ and e = b·q − 2^s satisfying
    // e · 2^32 ≤ 2^s. Then for all 0 ≤ a < 2^32:
    //     a·b / 2^s = a/q + a·e/(q·2^s),  with  0 ≤ a·e/2^s < 1,
    // so the floor of the left side equals ⌊a/q⌋ (the fractional part of a/q
    // is at most (q−1)/q and the perturbation is below 1/q).
    let max = u32::MAX as u64;
    let mut s = 33u32;
    loop {
        let pow = 1u128 << s;
        let b = (pow + q as u128 - 1) / q as u128;
        let e = b * q as u128 - pow;
        if e <= pow >> 32 {
            return (b as u64, s, max);
        }
        s += 1;
    }
}

impl Ring {
    pub const fn new(q: u16) -> Self {
        let (div_b, div_s, div_max) = div_magic(q);
        let r_mod_q = ((1u32 << MONT_R_BITS) % q as u32) as u64;
        Ring {
            q,
            qinv: newton_inv_2_16(q),
            barrett_v: (((1i64 << 26) + q as i64 / 2) / q as i64) as i32,
            r2: ((r_mod_q * r_mod_q) % q as u64) as u16,
            div_b,
            div_s,
            div_max,
        }
    }

    /// Signed Montgomery reduction: for `|a| ≤ q·2^15` returns `r` with
    /// `r ≡ a·2^{-16} (mod q)` and `|r| < q`.
    #[inline(always)]
    pub fn montgomery_reduce(&self, a: i32) -> Zq {
        debug_assert!(
            (a as i64).unsigned_abs() <= (self.q as u64) << 15,
            "montgomery_reduce operand out of range"
        );
        let t = (a as u32).wrapping_mul(self.qinv as u32) as u16 as i16;
        let mut r = ((a as i64 - (t as i64) * (self.q as i64)) >> 16) as i32;
        // The raw quotient lies in [−q, q]; the endpoints are ≡ 0 (mod q).
        let qi = self.q as i32;
        if r >= qi {
            r -= qi;
        } else if r <= -qi {
            r += qi;
        }
        r as Zq
    }

    /// Barrett reduction: maps any `i16` to its canonical representative in
    /// `[0, q)`.
    #[inline(always)]
    pub fn barrett_reduce(&self, a: Zq) -> Zq {
        // Centered quotient estimate t ≈ round(a/q), then a − t·q ∈ (−q, q),
        // fixed up into [0, q) with one conditional add. The subtraction is
        // widened: for the 14-bit moduli, t·q can sit a full q beyond i16.
        let t = (self.barrett_v * a as i32 + (1 << 25)) >> 26;
        let r = (a as i32 - t * self.q as i32) as i16;
        self.caddq(r)
    }

    /// Adds `q` when negative: maps `(−q, q) → [0, q)`.
    #[inline(always)]
    pub fn caddq(&self, a: Zq) -> Zq {
        a + ((a >> 15) & self.q as i16)
    }

    /// Subtracts `q` when `a ≥ q`: maps `[0, 2q) → [0, q)`.
    #[inline(always)]
    pub fn csubq(&self, a: Zq) -> Zq {
        let t = a - self.q as i16;
        t + ((t >> 15) & self.q as i16)
    }

    /// Montgomery product: `a·b·2^{-16} mod q`, `|result| < q`.
    ///
    /// Callers must keep `|a·b| ≤ q·2^15`; with one canonical operand (for
    /// example a twiddle factor in `[0, q)`) the other may be lazy up to
    /// `8q` for `q = 3329` and `3q` for `q = 7681`.
    #[inline(always)]
    pub fn fqmul(&self, a: Zq, b: Zq) -> Zq {
        self.montgomery_reduce(a as i32 * b as i32)
    }

    /// Brings a plain value into the Montgomery domain (`a ↦ a·2^16 mod q`).
    #[inline(always)]
    pub fn to_mont(&self, a: Zq) -> Zq {
        self.fqmul(a, self.r2 as i16)
    }

    /// `R^2 mod q`, exposed for fused "multiply and fix Montgomery factor"
    /// scalings.
    #[inline(always)]
    pub fn r2(&self) -> Zq {
        self.r2 as i16
    }

    /// Exact `⌊a / q⌋` by multiply-and-shift; rejects operands beyond the
    /// proven range (`a > 2^32 − 1`).
    #[inline]
    pub fn div_floor_by_q(&self, a: u64) -> Result<u64> {
        if a > self.div_max {
            return Err(Error::RangeExceeded(a));
        }
        Ok(self.div_floor_unchecked(a))
    }

    /// The unchecked core of [`Self::div_floor_by_q`]; all in-crate call
    /// sites pass operands bounded by construction.
    #[inline(always)]
    pub(crate) fn div_floor_unchecked(&self, a: u64) -> u64 {
        debug_assert!(a <= self.div_max);
        ((a as u128 * self.div_b as u128) >> self.div_s) as u64
    }

    /// Plain square-and-multiply exponentiation (not Montgomery); used for
    /// twiddle-table generation, including moduli the KEM core never
    /// multiplies in (e.g. 12289 when accounting table footprints).
    pub fn pow_mod(&self, base: u32, mut exp: u32) -> u32 {
        let q = self.q as u64;
        let mut b = base as u64 % q;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            exp >>= 1;
        }
        acc as u32
    }
}

/// Ring constants for the two KEM moduli.
pub const R3329: Ring = Ring::new(3329);
pub const R7681: Ring = Ring::new(7681);
/// Reference modulus for twiddle-table footprint comparisons and the
/// failure calculator's baseline rows; the KEM core never multiplies in it.
pub const R12289: Ring = Ring::new(12289);

/// Ring lookup by modulus value.
pub fn ring_for(q: u16) -> Result<&'static Ring> {
    match q {
        3329 => Ok(&R3329),
        7681 => Ok(&R7681),
        12289 => Ok(&R12289),
        _ => Err(Error::Malformed(format!("unsupported modulus {q}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RINGS: [&Ring; 3] = [&R3329, &R7681, &R12289];

    #[test]
    fn qinv_is_inverse() {
        for r in RINGS {
            assert_eq!((r.q as u32).wrapping_mul(r.qinv as u32) as u16, 1);
        }
    }

    #[test]
    fn barrett_exhaustive() {
        for r in RINGS {
            for a in i16::MIN..=i16::MAX {
                let want = (a as i32).rem_euclid(r.q as i32) as i16;
                assert_eq!(r.barrett_reduce(a), want, "q={} a={}", r.q, a);
            }
        }
    }

    #[test]
    fn montgomery_congruence_and_range() {
        // r ≡ a·2^{-16} (mod q) and |r| < q over a stratified operand sweep,
        // including the extreme corners ±q·2^15.
        for r in RINGS {
            let q = r.q as i64;
            let rinv = {
                // 2^{-16} mod q via Fermat.
                let r_mod = (1i64 << 16) % q;
                let mut inv = 1i64;
                let mut b = r_mod;
                let mut e = q - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        inv = inv * b % q;
                    }
                    b = b * b % q;
                    e >>= 1;
                }
                inv
            };
            let corner = (q << 15) as i32;
            let mut probes: Vec<i32> = vec![0, 1, -1, corner, -corner, corner - 1, 1 - corner];
            for k in 1..2000 {
                probes.push(corner / 2000 * k);
                probes.push(-(corner / 2000 * k) - 17 * k);
            }
            for a in probes {
                let out = r.montgomery_reduce(a) as i64;
                assert!(out.abs() < q, "q={} a={} out={}", r.q, a, out);
                assert_eq!(
                    out.rem_euclid(q),
                    ((a as i64 % q) * rinv).rem_euclid(q),
                    "q={} a={}",
                    r.q,
                    a
                );
            }
        }
    }

    #[test]
    fn montgomery_corner_is_zero() {
        for r in RINGS {
            assert_eq!(r.montgomery_reduce((r.q as i32) << 15), 0);
            assert_eq!(r.montgomery_reduce(-((r.q as i32) << 15)), 0);
        }
    }

    #[test]
    fn to_mont_round_trip() {
        for r in RINGS {
            for a in 0..r.q as i16 {
                let m = r.to_mont(a);
                let back = r.montgomery_reduce(m as i32);
                assert_eq!(r.caddq(back), a);
            }
        }
    }

    #[test]
    fn div_floor_matches_hardware_division() {
        for r in RINGS {
            let q = r.q as u64;
            // Dense sweep over the range the compressors actually use…
            for a in 0..(1u64 << 22) {
                assert_eq!(r.div_floor_unchecked(a), a / q);
            }
            // …plus every multiple-of-q boundary across the full proven range.
            let mut a = q * 997;
            while a + 1 <= u32::MAX as u64 {
                for d in [a - 1, a, a + 1] {
                    assert_eq!(r.div_floor_unchecked(d), d / q, "q={} a={}", r.q, d);
                }
                a += q * 997; // stride through boundaries
            }
            for d in [u32::MAX as u64 - 1, u32::MAX as u64] {
                assert_eq!(r.div_floor_by_q(d).unwrap(), d / q);
            }
            assert!(r.div_floor_by_q(u32::MAX as u64 + 1).is_err());
        }
    }

    #[test]
    fn lazy_growth_budget_by_interval_arithmetic() {
        // Worst-case coefficient magnitude after k butterfly levels starting
        // from canonical inputs: bound_{k+1} = bound_k + q (the Montgomery
        // product contributes |t| < q). The product fed to fqmul is
        // zeta · coefficient with zeta canonical in [0, q).
        for (ring, levels_before_reduce, total_levels) in
            [(&R3329, 8u32, 8u32), (&R7681, 2, 9), (&R12289, 1, 9)]
        {
            let q = ring.q as i64;
            let mut bound = q - 1; // canonical start
            let mut since_reduce = 0;
            for _ in 0..total_levels {
                // fqmul precondition: |zeta·x| ≤ q·2^15.
                assert!((q - 1) * bound <= q << 15, "q={} bound={}", ring.q, bound);
                bound += q; // add/sub of a fresh |t| < q
                assert!(bound < i16::MAX as i64, "q={} bound={}", ring.q, bound);
                since_reduce += 1;
                if since_reduce == levels_before_reduce {
                    bound = q - 1;
                    since_reduce = 0;
                }
            }
        }
    }
}
