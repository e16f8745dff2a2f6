//! Decryption-failure-probability calculator.
//!
//! Works with exact integer-supported probability mass functions in `f64`.
//! The per-coefficient error of a decryption is modelled as
//!
//! ```text
//! Err = Σ_{n·l} (e − ε1)·r  +  Σ_{n·l} s·(e1 − ε2)  +  e2  +  ε_v
//! ```
//!
//! where `ε1` is the public-key rounding error (zero when the key is stored
//! at full width), `ε2` the `u`-vector rounding error, and `ε_v` the
//! `v`-rounding error. The summands of a single coefficient involve each
//! secret coordinate exactly once, so they are mutually independent and the
//! marginal law is an exact convolution; the failure estimate
//! `δ = n · P[Err ∉ W]` is then a union bound over the `n` message slots.
//!
//! The decoding window `W` is asymmetric: with `ε′ = q/m − round(q/m)`,
//!
//! ```text
//! ε′ ≥ 0:  W = [−q/2m + ε′(m−1),  q/2m)
//! ε′ < 0:  W = [−q/2m,  q/2m + ε′(m−1))
//! ```
//!
//! bracketed to integers as `[round(W_lo), round(W_hi))` with round-half-up,
//! matching the published evaluation scripts.
//!
//! The two decoders differ only in the `ε_v` law:
//!
//! * **original** (two roundings): the `decompress(compress(·))` error on a
//!   uniform value — the same law as `ε2`;
//! * **single-rounding**: the error `v′ − (q/g)·round(g·v′/q)` is rational
//!   with denominator `g = 2^{d_v}`; the published evaluation keeps the
//!   integer-valued slice of that law (a sub-distribution of total mass
//!   ≈ 1/g), and the failure probabilities printed for the deployed sets
//!   are reproduced by exactly that convention.

use std::str::FromStr;

use crate::params::ParamSet;
use crate::{Error, Result};

/// Upper bound on dense convolution support; protects the CLI from absurd
/// parameter combinations. Real parameter sets stay below ~10^5 entries.
const SUPPORT_CAP: usize = 1 << 22;

/// Which decryption rule to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecVariant {
    /// Single-rounding decoder (the schemes' rule).
    Akcn,
    /// Conventional decompress-subtract-round decoder.
    Original,
}

impl FromStr for DecVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "akcn" | "single" | "single-rounding" => Ok(DecVariant::Akcn),
            "original" | "two-rounding" => Ok(DecVariant::Original),
            other => Err(Error::Malformed(format!("unknown variant `{other}`"))),
        }
    }
}

impl DecVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            DecVariant::Akcn => "akcn",
            DecVariant::Original => "original",
        }
    }
}

/// Round-half-up of `num/den` for `den > 0`, exact in integers.
fn rhu(num: i64, den: i64) -> i64 {
    (2 * num + den).div_euclid(2 * den)
}

fn compress_int(x: i64, d: u32, q: i64) -> i64 {
    rhu(x << d, q).rem_euclid(1 << d)
}

fn decompress_int(y: i64, d: u32, q: i64) -> i64 {
    rhu(q * y, 1 << d)
}

/// Neumaier-compensated sum.
fn neumaier<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// A probability mass function (possibly a sub-distribution) on a dense
/// integer support `min..min+probs.len()`.
#[derive(Debug, Clone)]
pub struct Pmf {
    min: i64,
    probs: Vec<f64>,
}

impl Pmf {
    /// Point mass at `v`.
    pub fn point(v: i64) -> Pmf {
        Pmf { min: v, probs: vec![1.0] }
    }

    /// Centered binomial law: difference of two `Binomial(η, 1/2)` draws,
    /// support `[−η, η]` with mass `C(2η, η+k)/4^η`.
    pub fn cbd(eta: u32) -> Pmf {
        let two_eta = 2 * eta;
        // Pascal row 2η in f64 (exact up to η = 12 and far beyond).
        let mut row = vec![1.0f64];
        for _ in 0..two_eta {
            let mut next = vec![1.0; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        let scale = 4.0f64.powi(eta as i32);
        Pmf {
            min: -(eta as i64),
            probs: row.into_iter().map(|c| c / scale).collect(),
        }
    }

    pub fn min_support(&self) -> i64 {
        self.min
    }

    pub fn max_support(&self) -> i64 {
        self.min + self.probs.len() as i64 - 1
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    /// Probability (or sub-probability) mass at `v`.
    pub fn mass_at(&self, v: i64) -> f64 {
        let idx = v - self.min;
        if idx < 0 || idx >= self.probs.len() as i64 {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    /// Total mass (1 for a proper law, < 1 for a slice).
    pub fn total(&self) -> f64 {
        neumaier(self.probs.iter().copied())
    }

    fn trim(mut self) -> Pmf {
        let lead = self.probs.iter().take_while(|&&p| p == 0.0).count();
        if lead == self.probs.len() {
            return Pmf { min: 0, probs: vec![0.0] };
        }
        let tail = self.probs.iter().rev().take_while(|&&p| p == 0.0).count();
        self.probs.drain(..lead);
        self.probs.truncate(self.probs.len() - tail);
        self.min += lead as i64;
        self
    }

    /// Law of `−X`.
    pub fn neg(&self) -> Pmf {
        let mut probs = self.probs.clone();
        probs.reverse();
        Pmf { min: -self.max_support(), probs }
    }

    /// Law of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Pmf) -> Result<Pmf> {
        let n = self.probs.len() + other.probs.len() - 1;
        if n > SUPPORT_CAP {
            return Err(Error::RangeExceeded(n as u64));
        }
        let mut out = vec![0.0f64; n];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.probs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Pmf { min: self.min + other.min, probs: out }.trim())
    }

    /// Law of `X · Y` for independent `X ~ self`, `Y ~ other`.
    pub fn product(&self, other: &Pmf) -> Pmf {
        let corners = [
            self.min * other.min,
            self.min * other.max_support(),
            self.max_support() * other.min,
            self.max_support() * other.max_support(),
        ];
        let lo = *corners.iter().min().unwrap();
        let hi = *corners.iter().max().unwrap();
        let mut out = vec![0.0f64; (hi - lo + 1) as usize];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let x = self.min + i as i64;
            for (j, &b) in other.probs.iter().enumerate() {
                let y = other.min + j as i64;
                out[(x * y - lo) as usize] += a * b;
            }
        }
        Pmf { min: lo, probs: out }.trim()
    }

    /// Law of the sum of `k` independent copies, by binary doubling.
    pub fn iterated_sum(&self, k: u64) -> Result<Pmf> {
        assert!(k >= 1, "iterated_sum needs k >= 1");
        let mut k = k;
        let mut out: Option<Pmf> = None;
        let mut sq = self.clone();
        loop {
            if k & 1 == 1 {
                out = Some(match out {
                    None => sq.clone(),
                    Some(o) => o.convolve(&sq)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.convolve(&sq)?;
        }
        Ok(out.expect("k >= 1"))
    }

    /// Mass outside the half-open window `[lo, hi)`.
    pub fn tail_outside(&self, lo: i64, hi: i64) -> f64 {
        neumaier(self.probs.iter().enumerate().filter_map(|(i, &p)| {
            let x = self.min + i as i64;
            if x < lo || x >= hi {
                Some(p)
            } else {
                None
            }
        }))
    }
}

/// Law of `x − decompress(compress(x, d), d)` for `x` uniform on `Z_q`,
/// centered to `(−q/2, q/2]` — the error of a compress/decompress round
/// trip (two roundings).
pub fn round_error_law(q: i64, d: u32) -> Pmf {
    let half = q / 2;
    let mut mass = std::collections::BTreeMap::new();
    for x in 0..q {
        let e = x - decompress_int(compress_int(x, d, q), d, q);
        let e = (e + half).rem_euclid(q) - half;
        *mass.entry(e).or_insert(0.0) += 1.0 / q as f64;
    }
    densify(mass)
}

/// Integer-valued slice of the single-rounding error law: for uniform
/// `v′ ∈ Z_q` and `g = 2^d`, the error `v′ − (q/g)·round(g·v′/q)` equals
/// `num/g` with `num = g·v′ − q·round(g·v′/q)`; only the integer values
/// (`g | num`) are kept, each with mass `1/q`. A sub-distribution of total
/// mass ≈ `1/g`.
pub fn eps_v_slice_law(q: i64, d: u32) -> Pmf {
    let g = 1i64 << d;
    let mut mass = std::collections::BTreeMap::new();
    for v in 0..q {
        let num = g * v - q * rhu(g * v, q);
        if num % g == 0 {
            *mass.entry(num / g).or_insert(0.0) += 1.0 / q as f64;
        }
    }
    densify(mass)
}

fn densify(mass: std::collections::BTreeMap<i64, f64>) -> Pmf {
    let (&lo, _) = mass.iter().next().expect("non-empty law");
    let (&hi, _) = mass.iter().next_back().expect("non-empty law");
    let mut probs = vec![0.0f64; (hi - lo + 1) as usize];
    for (k, v) in mass {
        probs[(k - lo) as usize] = v;
    }
    Pmf { min: lo, probs }
}

/// Integer-bracketed decoding window `[lo, hi)` (success region) for the
/// per-coefficient error, in error units.
pub fn decode_window(q: i64, m: i64) -> (i64, i64) {
    let rq = rhu(q, m);
    let epsp = q - m * rq; // ε′ = epsp/m
    let (lo_num, hi_num) = if epsp >= 0 {
        (-q + 2 * (m - 1) * epsp, q)
    } else {
        (-q, q + 2 * (m - 1) * epsp)
    };
    (rhu(lo_num, 2 * m), rhu(hi_num, 2 * m))
}

/// The marginal per-coefficient error law for a parameter set under the
/// given decoder.
pub fn error_law(p: &ParamSet, variant: DecVariant) -> Result<Pmf> {
    let q = p.q as i64;
    let nl = (p.n * p.l) as u64;
    let chi_s = Pmf::cbd(p.eta_s as u32);
    let chi_e = Pmf::cbd(p.eta_e as u32);
    let chi_kg = Pmf::cbd(p.eta_keygen_e as u32);
    let eps1 = if p.d_k < p.qbits() {
        round_error_law(q, p.d_k as u32)
    } else {
        Pmf::point(0)
    };
    let eps2 = round_error_law(q, p.d_u as u32);
    let b1 = chi_kg.convolve(&eps1.neg())?.product(&chi_s);
    let b2 = chi_s.product(&chi_e.convolve(&eps2.neg())?);
    let c = b1.iterated_sum(nl)?.convolve(&b2.iterated_sum(nl)?)?;
    let c = c.convolve(&chi_e)?;
    let eps_v = match variant {
        DecVariant::Akcn => eps_v_slice_law(q, p.d_v as u32),
        DecVariant::Original => round_error_law(q, p.d_v as u32),
    };
    c.convolve(&eps_v)
}

/// `log2` of the failure probability `δ = n·P[Err ∉ W]` for one session.
/// Returns `−∞` when the mass outside the window is zero.
pub fn delta_log2(p: &ParamSet, variant: DecVariant) -> Result<f64> {
    let law = error_law(p, variant)?;
    let (lo, hi) = decode_window(p.q as i64, p.m as i64);
    let fail = law.tail_outside(lo, hi);
    let total = p.n as f64 * fail;
    if total <= 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(total.log2())
    }
}

/// `log2` failure probability of the double-encapsulation construction:
/// two independent sessions, `1 − (1 − δ)² ≈ 2δ`, i.e. one extra bit.
pub fn delta_log2_doubled(p: &ParamSet, variant: DecVariant) -> Result<f64> {
    Ok(delta_log2(p, variant)? + 1.0)
}
