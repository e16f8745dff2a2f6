//! Four-variant negacyclic NTT engine with exact operation accounting.
//!
//! All multiplication strategies for `Z_q[x]/(x^n + 1)` implemented here are
//! instances of one two-parameter scheme `(α, β)`:
//!
//! * the input is **part-split** into `k = 2^α` sub-polynomials
//!   `f̃_i(y) = Σ_j f_{i+jk} y^j` of length `z = n/2^α` (so
//!   `f(x) = Σ_i x^i f̃_i(x^k)`),
//! * each sub-polynomial is pushed through a **truncated** NTT: `log2(z) − β`
//!   butterfly levels that stop at residues of width `2^β`, i.e. the slot `t`
//!   holds `f̃_i mod (y^{2^β} − w_t)`.
//!
//! | variant            | α | β | transform                          |
//! |--------------------|---|---|------------------------------------|
//! | classic (full) NTT | 0 | 0 | complete split to linear factors   |
//! | truncated NTT      | 0 | β | stop β levels early                |
//! | part-split NTT     | α | 0 | split, then complete sub-NTTs      |
//! | hybrid NTT         | α | β | split, then truncated sub-NTTs     |
//!
//! The twiddle domain of a sub-transform has order `M = 2·z/2^β`; a primitive
//! `M`-th root of unity mod `q` must exist (`M | q − 1`). This is exactly what
//! makes the shallower variants valuable: `q = 3329` has no 512-th root, so
//! `n = 256` cannot use the classic NTT at all, and `n = 512` reuses the
//! `q = 7681`, `M = 256` tables that the `n = 256` schemes already carry.
//!
//! # Products
//!
//! Multiplication of two transformed operands is organized as a Karatsuba
//! layer over the `k` sub-polynomial vectors: the `k` diagonal products
//! `F_i ∘ G_i` plus the `k(k−1)/2` pair products
//! `(F_i + F_j) ∘ (G_i + G_j) − F_i∘G_i − F_j∘G_j`, each contribution routed
//! to output slot `(i + j) mod k`, and every *wrapped* contribution
//! (`i + j ≥ k`) multiplied by `y` — one multiplication per residue slot.
//! The per-slot product `∘` (`mod y^{2^β} − w_t`) uses the same
//! diagonals-plus-pairs organization over scalars with wrap constant `w_t`,
//! costing `3·4^{β−1} + 2^{β−1}` multiplications and
//! `5(2^{2β−1} − 2^{β−1})` additions per slot for `β ≥ 1` (a single
//! multiplication for `β = 0`).
//!
//! # Operation counters
//!
//! Every `Z_q` multiplication and addition/subtraction *attributable to the
//! algorithm* ticks the [`OpCounter`] passed in. Montgomery/Barrett
//! internals and lazy-reduction maintenance are bookkeeping, not ring
//! operations, and are not counted. Inverse transforms count their final
//! `z` scaling multiplications. With these conventions the measured counts
//! of [`mul`] equal [`complexity_formula`] exactly — see the tests and the
//! acceptance suite.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::modring::{ring_for, Ring, Zq};
use crate::{Error, Result};

/// Counts ring operations (`Z_q` multiplications, additions/subtractions).
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounter {
    pub muls: u64,
    pub adds: u64,
}

impl OpCounter {
    pub fn reset(&mut self) {
        *self = OpCounter::default();
    }
    pub fn as_pair(&self) -> (u64, u64) {
        (self.muls, self.adds)
    }
}

/// Smallest primitive `M`-th roots of unity for the supported moduli,
/// `M` a power of two. Baked as constants; `tests::roots_are_smallest`
/// re-derives every entry by brute force.
const ROOT_TABLE: &[(u16, &[(usize, u32)])] = &[
    (3329, &[(256, 17), (128, 33), (64, 56), (32, 69)]),
    (7681, &[(512, 62), (256, 198), (128, 202), (64, 330), (32, 97)]),
    (12289, &[(1024, 49), (512, 3), (256, 9)]),
];

/// Looks up the smallest primitive `order`-th root of unity mod `q`.
pub fn root_of_unity(q: u16, order: usize) -> Result<u32> {
    ROOT_TABLE
        .iter()
        .find(|(qq, _)| *qq == q)
        .and_then(|(_, rows)| rows.iter().find(|(m, _)| *m == order))
        .map(|&(_, g)| g)
        .ok_or(Error::RootUnavailable { q, order })
}

/// Bit-reversal of the low `bits` bits of `x`.
fn brv(x: usize, bits: u32) -> usize {
    x.reverse_bits() >> (usize::BITS - bits)
}

/// How many butterfly levels may elapse between Barrett maintenance passes
/// while keeping every intermediate inside the `fqmul`/`i16` budget
/// (worst-case interval arithmetic; see `modring::tests`).
fn lazy_interval(q: u16) -> u32 {
    match q {
        3329 => 8, // all levels fit without maintenance
        7681 => 2,
        _ => 1, // 12289: 14 bits, reduce every level
    }
}

/// An immutable, shareable transform plan: shape, twiddle tables and scale
/// constants for one `(n, q, α, β)`.
pub struct NttPlan {
    pub n: usize,
    pub q: u16,
    pub alpha: u8,
    pub beta: u8,
    /// Sub-polynomial length `z = n / 2^α`.
    pub sub_len: usize,
    /// Butterfly levels per sub-transform: `log2(z) − β`.
    pub levels: u32,
    /// Residue slots per sub-transform: `z / 2^β`.
    pub slots: usize,
    /// Residue width `2^β`.
    pub width: usize,
    /// Twiddle-domain order `M = 2·z/2^β`.
    pub m_order: usize,
    /// Bit-reversed twiddles `γ^{brv(i)}·R mod q`, canonical, `M/2` entries.
    /// Shared (`Arc`) between every plan with the same `(q, M)`.
    zetas: Arc<Vec<Zq>>,
    /// Residue/evaluation constants `w_t = γ^{brv(S + t)}` (Montgomery).
    /// A sign-adjusted view of `zetas[S/2..S]`, materialized for direct
    /// indexing; the shared `zetas` table remains the stored footprint and
    /// `tests::w_is_a_view_of_the_shared_table` checks the identity.
    w: Vec<Zq>,
    /// `2^{-levels}·R mod q`: inverse scaling for plain (round-trip) use.
    inv_scale: Zq,
    /// `2^{-levels}·R^2 mod q`: inverse scaling that simultaneously repairs
    /// the single `R^{-1}` factor every product-layer output carries.
    inv_scale_prod: Zq,
    ring: &'static Ring,
}

fn zeta_table(ring: &'static Ring, m_order: usize) -> Result<Arc<Vec<Zq>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u16, usize), Arc<Vec<Zq>>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    if let Some(t) = cache.get(&(ring.q, m_order)) {
        return Ok(t.clone());
    }
    let g = root_of_unity(ring.q, m_order)?;
    let half = m_order / 2;
    let bits = half.trailing_zeros();
    let table: Vec<Zq> = (0..half)
        .map(|i| {
            let e = brv(i, bits) as u32;
            ring.to_mont(ring.pow_mod(g, e) as i16)
        })
        .map(|v| ring.caddq(v))
        .collect();
    let arc = Arc::new(table);
    cache.insert((ring.q, m_order), arc.clone());
    Ok(arc)
}

impl NttPlan {
    /// Fetches (or builds) the cached plan for `(n, q, α, β)`.
    pub fn get(n: usize, q: u16, alpha: u8, beta: u8) -> Result<Arc<NttPlan>> {
        static CACHE: OnceLock<Mutex<HashMap<(u16, usize, u8, u8), Arc<NttPlan>>>> =
            OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
        if let Some(p) = cache.get(&(q, n, alpha, beta)) {
            return Ok(p.clone());
        }
        let plan = Arc::new(NttPlan::build(n, q, alpha, beta)?);
        cache.insert((q, n, alpha, beta), plan.clone());
        Ok(plan)
    }

    fn build(n: usize, q: u16, alpha: u8, beta: u8) -> Result<NttPlan> {
        if !n.is_power_of_two() || !(32..=1024).contains(&n) {
            return Err(Error::UnsupportedShape(format!("n = {n}")));
        }
        if alpha > 2 {
            // Deeper splits would need wider lazy-accumulation budgets.
            return Err(Error::UnsupportedShape(format!("alpha = {alpha}")));
        }
        if q == 12289 && (alpha > 0 || beta > 0) {
            // Product layers form operand sums up to 2q, and
            // (2·12289)² exceeds the q·2^15 reduction precondition; the
            // reference modulus is supported for the classic shape only.
            return Err(Error::UnsupportedShape(format!(
                "q = {q} supports only the classic shape (alpha = beta = 0)"
            )));
        }
        let sub_len = n >> alpha;
        if beta as usize >= sub_len.trailing_zeros() as usize {
            return Err(Error::UnsupportedShape(format!(
                "beta = {beta} leaves no butterfly level at sub-length {sub_len}"
            )));
        }
        let ring = ring_for(q)?;
        let width = 1usize << beta;
        let slots = sub_len / width;
        let m_order = 2 * slots;
        let levels = sub_len.trailing_zeros() - beta as u32;
        let zetas = zeta_table(ring, m_order)?;
        let g = root_of_unity(q, m_order)?;
        let wbits = slots.trailing_zeros() + 1;
        let w: Vec<Zq> = (0..slots)
            .map(|t| {
                let e = brv(slots + t, wbits) as u32;
                ring.caddq(ring.to_mont(ring.pow_mod(g, e) as i16))
            })
            .collect();
        // 2^{-levels} mod q, then the two Montgomery-adjusted scale factors.
        let two_pow = ring.pow_mod(2, levels);
        let inv = ring.pow_mod(two_pow, q as u32 - 2);
        let inv_scale = ring.caddq(ring.to_mont(inv as i16));
        let inv_scale_prod = ring.caddq(ring.to_mont(inv_scale));
        Ok(NttPlan {
            n,
            q,
            alpha,
            beta,
            sub_len,
            levels,
            slots,
            width,
            m_order,
            zetas,
            w,
            inv_scale,
            inv_scale_prod,
            ring,
        })
    }

    /// Plan for the transform a parameter set's KEM uses.
    pub fn for_params(p: &crate::params::ParamSet) -> Result<Arc<NttPlan>> {
        NttPlan::get(p.n, p.q, p.ntt_alpha, p.ntt_beta)
    }

    pub fn ring(&self) -> &'static Ring {
        self.ring
    }

    /// Bytes of precomputed twiddle storage this plan relies on (the shared
    /// bit-reversed table).
    pub fn table_bytes(&self) -> usize {
        self.zetas.len() * std::mem::size_of::<Zq>()
    }

    /// Identity of the shared table, for deduplicated footprint accounting.
    pub fn table_key(&self) -> (u16, usize) {
        (self.q, self.m_order)
    }

    // ------------------------------------------------------------------
    // Sub-transform cores
    // ------------------------------------------------------------------

    /// Forward truncated NTT of one sub-polynomial (in place, canonical in,
    /// canonical out).
    fn forward_sub(&self, f: &mut [Zq], ctr: &mut OpCounter) {
        debug_assert_eq!(f.len(), self.sub_len);
        let ring = self.ring;
        let maint = lazy_interval(self.q);
        let mut k = 1usize;
        let mut len = self.sub_len / 2;
        let mut level = 0u32;
        while len >= self.width {
            for start in (0..self.sub_len).step_by(2 * len) {
                let zeta = self.zetas[k];
                k += 1;
                for j in start..start + len {
                    let t = ring.fqmul(zeta, f[j + len]);
                    ctr.muls += 1;
                    f[j + len] = f[j] - t;
                    f[j] += t;
                    ctr.adds += 2;
                }
            }
            level += 1;
            len >>= 1;
            // Uncounted maintenance: tame lazy growth where the modulus
            // needs it, and canonicalize at the end.
            let last = len < self.width;
            if (level % maint == 0 && !last) || last {
                for c in f.iter_mut() {
                    *c = ring.barrett_reduce(*c);
                }
            }
        }
    }

    /// Inverse truncated NTT of one sub-polynomial (in place, canonical in,
    /// canonical out). `scale` repairs both the `2^{levels}` growth and,
    /// for pipeline use, the product layer's Montgomery drift.
    fn inverse_sub(&self, f: &mut [Zq], scale: Zq, ctr: &mut OpCounter) {
        debug_assert_eq!(f.len(), self.sub_len);
        let ring = self.ring;
        let mut k = self.slots - 1;
        let mut len = self.width;
        while len <= self.sub_len / 2 {
            for start in (0..self.sub_len).step_by(2 * len) {
                // Twiddles walk the shared table in reverse: the required
                // γ^{-brv(k_fwd)} equals −γ^{brv(k)} at the mirrored index k,
                // and the sign is absorbed by multiplying (b − a) instead of
                // (a − b).
                let zeta = self.zetas[k];
                k = k.wrapping_sub(1);
                for j in start..start + len {
                    let t = f[j];
                    f[j] = ring.barrett_reduce(t + f[j + len]);
                    ctr.adds += 1;
                    f[j + len] -= t;
                    ctr.adds += 1;
                    f[j + len] = ring.fqmul(zeta, f[j + len]);
                    ctr.muls += 1;
                }
            }
            len <<= 1;
        }
        for c in f.iter_mut() {
            *c = ring.caddq(ring.fqmul(*c, scale));
            ctr.muls += 1;
        }
    }

    // ------------------------------------------------------------------
    // Residue-slot product (the `∘` of the Karatsuba layer)
    // ------------------------------------------------------------------

    /// Product of two residue vectors slot-by-slot:
    /// `out[t] = a[t]·b[t] mod (y^{2^β} − w_t)`.
    ///
    /// Outputs carry one Montgomery `R^{-1}` factor (repaired later by
    /// `inv_scale_prod` or a `to_mont` fix-up), and are canonicalized.
    fn circ_mul(&self, a: &[Zq], b: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
        debug_assert_eq!(a.len(), self.sub_len);
        debug_assert_eq!(b.len(), self.sub_len);
        let ring = self.ring;
        let wd = self.width;
        let mut out = vec![0 as Zq; self.sub_len];
        if wd == 1 {
            for t in 0..self.slots {
                out[t] = ring.caddq(ring.fqmul(a[t], b[t]));
                ctr.muls += 1;
            }
            return out;
        }
        if wd == 2 {
            // Straight-line degree-2 Karatsuba: c0 = a0·b0 + w·a1·b1,
            // c1 = (a0+a1)(b0+b1) − a0·b0 − a1·b1. Four multiplications
            // (three products + the wrap twist) and five additions per
            // slot, exactly the β = 1 basecase cost.
            for t in 0..self.slots {
                let (a0, a1) = (a[2 * t], a[2 * t + 1]);
                let (b0, b1) = (b[2 * t], b[2 * t + 1]);
                let d0 = ring.fqmul(a0, b0);
                let d1 = ring.fqmul(a1, b1);
                let s = ring.fqmul(a0 + a1, b0 + b1);
                ctr.muls += 3;
                ctr.adds += 2;
                // |s − d0 − d1| < 3q and |d0 + wrap| < 2q: both inside i16,
                // canonicalized by the output reduction below.
                let c1 = s - d0 - d1;
                let wrap = ring.fqmul(self.w[t], d1);
                let c0 = d0 + wrap;
                ctr.muls += 1;
                ctr.adds += 3;
                out[2 * t] = ring.barrett_reduce(c0);
                out[2 * t + 1] = ring.barrett_reduce(c1);
            }
            return out;
        }
        // Scalar contribution routing: wrap (×w_t) when σ spills past the
        // residue width, then move-or-accumulate.
        fn route_scalar(
            ring: &Ring,
            wt: Zq,
            wd: usize,
            acc: &mut [Zq; 4],
            filled: &mut [bool; 4],
            val: Zq,
            sigma: usize,
            ctr: &mut OpCounter,
        ) {
            let (pos, wrapped) = if sigma >= wd { (sigma - wd, true) } else { (sigma, false) };
            let val = if wrapped {
                ctr.muls += 1;
                ring.barrett_reduce(ring.fqmul(wt, val))
            } else {
                val
            };
            if filled[pos] {
                acc[pos] += val;
                ctr.adds += 1;
            } else {
                acc[pos] = val;
                filled[pos] = true;
            }
        }
        for t in 0..self.slots {
            let av = &a[t * wd..(t + 1) * wd];
            let bv = &b[t * wd..(t + 1) * wd];
            let wt = self.w[t];
            let mut acc = [0 as Zq; 4]; // width ≤ 4 (β ≤ 2)
            let mut filled = [false; 4];
            // Diagonal scalar products a_u·b_u → slot 2u.
            let mut diag = [0 as Zq; 4];
            for u in 0..wd {
                diag[u] = ring.caddq(ring.fqmul(av[u], bv[u]));
                ctr.muls += 1;
                route_scalar(ring, wt, wd, &mut acc, &mut filled, diag[u], 2 * u, ctr);
            }
            // Karatsuba pairs (u < v): (a_u + a_v)(b_u + b_v) − d_u − d_v.
            for u in 0..wd {
                for v in u + 1..wd {
                    let sa = av[u] + av[v];
                    let sb = bv[u] + bv[v];
                    ctr.adds += 2;
                    let mut p = ring.fqmul(sa, sb);
                    ctr.muls += 1;
                    p -= diag[u];
                    p -= diag[v];
                    ctr.adds += 2;
                    // Maintenance: keep contributions canonical so slot
                    // accumulation stays inside i16 for every modulus.
                    p = ring.barrett_reduce(p);
                    route_scalar(ring, wt, wd, &mut acc, &mut filled, p, u + v, ctr);
                }
            }
            let ov = &mut out[t * wd..(t + 1) * wd];
            for (c, &v) in ov.iter_mut().zip(acc.iter()) {
                *c = ring.barrett_reduce(v);
            }
        }
        out
    }

    /// Fused Karatsuba layer for the `α = 1, β = 1` shape (the scheme the
    /// 512-degree parameter sets deploy): both vector cross terms and all
    /// three residue products of one slot are computed in registers, with
    /// no intermediate vectors. Operation totals are identical to the
    /// generic path — per slot 13 multiplications (3 degree-2 kernels of 4
    /// plus the wrap twist) and 25 additions (3×5 kernel, 4 pair sums, 4
    /// corrections, 2 accumulations) — only the uncounted bookkeeping
    /// (allocations, routing passes) is gone.
    fn fused_mul_2x2(&self, a: &[Zq], b: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
        debug_assert!(self.alpha == 1 && self.width == 2);
        let ring = self.ring;
        let z = self.sub_len;
        let (a0, a1) = a.split_at(z);
        let (b0, b1) = b.split_at(z);
        let mut out = vec![0 as Zq; self.n];
        let (o0, o1) = out.split_at_mut(z);

        /// Canonical degree-2 residue product `(u0 + u1 y)(v0 + v1 y)
        /// mod (y² − w)`: 4 multiplications, 5 additions.
        #[inline(always)]
        fn slot2(ring: &Ring, w: Zq, u: (Zq, Zq), v: (Zq, Zq), ctr: &mut OpCounter) -> (Zq, Zq) {
            let d0 = ring.fqmul(u.0, v.0);
            let d1 = ring.fqmul(u.1, v.1);
            let s = ring.fqmul(u.0 + u.1, v.0 + v.1);
            ctr.muls += 3;
            ctr.adds += 2;
            let wrap = ring.fqmul(w, d1);
            ctr.muls += 1;
            ctr.adds += 3;
            // |s − d0 − d1| < 3q, |d0 + wrap| < 2q: both inside i16.
            (ring.barrett_reduce(d0 + wrap), ring.barrett_reduce(s - d0 - d1))
        }

        for t in 0..self.slots {
            let w = self.w[t];
            let i = 2 * t;
            let x0 = (a0[i], a0[i + 1]);
            let x1 = (a1[i], a1[i + 1]);
            let y0 = (b0[i], b0[i + 1]);
            let y1 = (b1[i], b1[i + 1]);
            let d0 = slot2(ring, w, x0, y0, ctr);
            let d1 = slot2(ring, w, x1, y1, ctr);
            // Cross term via the vector-level Karatsuba identity.
            let sx = (ring.csubq(x0.0 + x1.0), ring.csubq(x0.1 + x1.1));
            let sy = (ring.csubq(y0.0 + y1.0), ring.csubq(y0.1 + y1.1));
            ctr.adds += 4;
            let p = slot2(ring, w, sx, sy, ctr);
            o1[i] = ring.barrett_reduce(p.0 - d0.0 - d1.0);
            o1[i + 1] = ring.barrett_reduce(p.1 - d0.1 - d1.1);
            ctr.adds += 4;
            // Wrapped diagonal: y·d1 twists within the slot, then folds
            // onto the first output sub-vector.
            let hi = ring.caddq(ring.fqmul(w, d1.1));
            ctr.muls += 1;
            o0[i] = ring.csubq(d0.0 + hi);
            o0[i + 1] = ring.csubq(d0.1 + d1.0);
            ctr.adds += 2;
        }
        out
    }

    /// Multiplies a wrapped sub-vector contribution by `y` in every residue
    /// slot: one rotation and one multiplication by `w_t` per slot.
    fn twist_wrap(&self, v: &mut [Zq], ctr: &mut OpCounter) {
        let ring = self.ring;
        let wd = self.width;
        for t in 0..self.slots {
            let sl = &mut v[t * wd..(t + 1) * wd];
            let hi = ring.fqmul(self.w[t], sl[wd - 1]);
            ctr.muls += 1;
            for i in (1..wd).rev() {
                sl[i] = sl[i - 1];
            }
            sl[0] = ring.caddq(hi);
        }
    }
}

// ----------------------------------------------------------------------
// Layout helpers (free of ring operations)
// ----------------------------------------------------------------------

/// Natural order → sub-concatenated domain layout (`sub_i[j] = f[i + j·k]`).
fn split(plan: &NttPlan, f: &[Zq]) -> Vec<Zq> {
    let k = 1usize << plan.alpha;
    if k == 1 {
        return f.to_vec();
    }
    let z = plan.sub_len;
    let mut out = vec![0 as Zq; plan.n];
    for i in 0..k {
        for j in 0..z {
            out[i * z + j] = f[i + j * k];
        }
    }
    out
}

/// Sub-concatenated layout → natural order.
fn unsplit(plan: &NttPlan, s: &[Zq]) -> Vec<Zq> {
    let k = 1usize << plan.alpha;
    if k == 1 {
        return s.to_vec();
    }
    let z = plan.sub_len;
    let mut out = vec![0 as Zq; plan.n];
    for i in 0..k {
        for j in 0..z {
            out[i + j * k] = s[i * z + j];
        }
    }
    out
}

// ----------------------------------------------------------------------
// Public transform API
// ----------------------------------------------------------------------

/// Forward transform: natural-order coefficients → domain representation
/// (sub-concatenated layout; for `α = 0` the layouts coincide).
pub fn ntt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
    assert_eq!(f.len(), plan.n, "polynomial length must match plan");
    let mut s = split(plan, f);
    for sub in s.chunks_mut(plan.sub_len) {
        plan.forward_sub(sub, ctr);
    }
    s
}

/// Inverse transform of a *transform-domain representation* (round-trip
/// inverse of [`ntt`]).
pub fn intt(plan: &NttPlan, fhat: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
    assert_eq!(fhat.len(), plan.n);
    let mut s = fhat.to_vec();
    for sub in s.chunks_mut(plan.sub_len) {
        plan.inverse_sub(sub, plan.inv_scale, ctr);
    }
    if plan.alpha == 0 {
        s
    } else {
        unsplit(plan, &s)
    }
}

/// Inverse transform of a *product-layer output* (repairs the Montgomery
/// drift of [`domain_mul`] while scaling).
pub fn intt_after_mul(plan: &NttPlan, fhat: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
    assert_eq!(fhat.len(), plan.n);
    let mut s = fhat.to_vec();
    for sub in s.chunks_mut(plan.sub_len) {
        plan.inverse_sub(sub, plan.inv_scale_prod, ctr);
    }
    if plan.alpha == 0 {
        s
    } else {
        unsplit(plan, &s)
    }
}

/// Product of two domain representations (Karatsuba layer over the `2^α`
/// sub-vectors, residue products within each slot). The result is a domain
/// representation carrying one `R^{-1}` factor; follow with
/// [`intt_after_mul`] (or a `to_mont` fix-up when staying in the domain).
pub fn domain_mul(plan: &NttPlan, a: &[Zq], b: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
    assert_eq!(a.len(), plan.n);
    assert_eq!(b.len(), plan.n);
    let ring = plan.ring;
    let k = 1usize << plan.alpha;
    let z = plan.sub_len;
    if k == 1 {
        // No Karatsuba layer: the residue products are the whole story.
        return plan.circ_mul(a, b, ctr);
    }
    if k == 2 && plan.width == 2 {
        return plan.fused_mul_2x2(a, b, ctr);
    }

    // Diagonal products (canonical, like every circ_mul output).
    let diag: Vec<Vec<Zq>> = (0..k)
        .map(|i| plan.circ_mul(&a[i * z..(i + 1) * z], &b[i * z..(i + 1) * z], ctr))
        .collect();

    // Contributions are canonical on arrival; folding csubq into the
    // accumulation keeps every slot canonical throughout, so no final
    // normalization pass is needed.
    let mut out: Vec<Option<Vec<Zq>>> = (0..k).map(|_| None).collect();
    let route = |out: &mut Vec<Option<Vec<Zq>>>, mut v: Vec<Zq>, sigma: usize, ctr: &mut OpCounter| {
        let (pos, wrapped) = if sigma >= k { (sigma - k, true) } else { (sigma, false) };
        if wrapped {
            plan.twist_wrap(&mut v, ctr);
        }
        match &mut out[pos] {
            Some(acc) => {
                for (x, y) in acc.iter_mut().zip(v) {
                    *x = ring.csubq(*x + y);
                    ctr.adds += 1;
                }
            }
            None => out[pos] = Some(v),
        }
    };

    // Cross terms first (they only borrow the diagonals)…
    for i in 0..k {
        for j in i + 1..k {
            let mut sa = a[i * z..(i + 1) * z].to_vec();
            let mut sb = b[i * z..(i + 1) * z].to_vec();
            for (x, &y) in sa.iter_mut().zip(&a[j * z..(j + 1) * z]) {
                *x += y;
                ctr.adds += 1;
                // Maintenance: circ_mul expects canonical operands (its own
                // Karatsuba layer forms sums of them again).
                *x = ring.csubq(*x);
            }
            for (x, &y) in sb.iter_mut().zip(&b[j * z..(j + 1) * z]) {
                *x += y;
                ctr.adds += 1;
                *x = ring.csubq(*x);
            }
            let mut p = plan.circ_mul(&sa, &sb, ctr);
            for (x, (di, dj)) in p.iter_mut().zip(diag[i].iter().zip(&diag[j])) {
                *x -= di + dj;
                ctr.adds += 2;
                *x = ring.barrett_reduce(*x); // maintenance
            }
            route(&mut out, p, i + j, ctr);
        }
    }
    // …then the diagonals move into place without cloning.
    for (i, d) in diag.into_iter().enumerate() {
        route(&mut out, d, 2 * i, ctr);
    }

    let mut flat = Vec::with_capacity(plan.n);
    for slot in out {
        flat.extend(slot.expect("every output slot receives a contribution"));
    }
    flat
}

/// Full counted multiplication pipeline: transform both operands, multiply
/// in the domain, inverse-transform. Natural order in and out.
pub fn mul(plan: &NttPlan, f: &[Zq], g: &[Zq], ctr: &mut OpCounter) -> Vec<Zq> {
    let fh = ntt(plan, f, ctr);
    let gh = ntt(plan, g, ctr);
    let hh = domain_mul(plan, &fh, &gh, ctr);
    intt_after_mul(plan, &hh, ctr)
}

// Named wrappers for the four variants -------------------------------------

/// Classic full NTT (`α = β = 0`); errors unless the plan shape matches.
pub fn classic_ntt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, 0, 0)?;
    Ok(ntt(plan, f, ctr))
}

/// Inverse of [`classic_ntt`].
pub fn classic_intt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, 0, 0)?;
    Ok(intt(plan, f, ctr))
}

/// Truncated NTT (`α = 0`, `β ≥ 1`).
pub fn t_ntt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, 0, plan.beta.max(1))?;
    Ok(ntt(plan, f, ctr))
}

/// Inverse of [`t_ntt`].
pub fn t_intt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, 0, plan.beta.max(1))?;
    Ok(intt(plan, f, ctr))
}

/// Slotwise residue product of two truncated-NTT representations.
pub fn t_basemul(plan: &NttPlan, a: &[Zq], b: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, 0, plan.beta)?;
    Ok(domain_mul(plan, a, b, ctr))
}

/// Part-split NTT (`α ≥ 1`, `β = 0`): classic sub-transforms.
pub fn pt_ntt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, plan.alpha.max(1), 0)?;
    Ok(ntt(plan, f, ctr))
}

/// Full part-split multiplication pipeline.
pub fn pt_mul(plan: &NttPlan, f: &[Zq], g: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, plan.alpha.max(1), 0)?;
    Ok(mul(plan, f, g, ctr))
}

/// Hybrid NTT (`α ≥ 1`, `β ≥ 1`): truncated sub-transforms.
pub fn h_ntt(plan: &NttPlan, f: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, plan.alpha.max(1), plan.beta.max(1))?;
    Ok(ntt(plan, f, ctr))
}

/// Full hybrid multiplication pipeline.
pub fn h_mul(plan: &NttPlan, f: &[Zq], g: &[Zq], ctr: &mut OpCounter) -> Result<Vec<Zq>> {
    expect_shape(plan, plan.alpha.max(1), plan.beta.max(1))?;
    Ok(mul(plan, f, g, ctr))
}

fn expect_shape(plan: &NttPlan, alpha: u8, beta: u8) -> Result<()> {
    if plan.alpha == alpha && plan.beta == beta {
        Ok(())
    } else {
        Err(Error::UnsupportedShape(format!(
            "plan is (α={}, β={}), wrapper expects (α={alpha}, β={beta})",
            plan.alpha, plan.beta
        )))
    }
}

/// A single scalar Karatsuba cross term: computes `a·d + b·c` from the two
/// sums and the reusable diagonal products,
/// `(a + b)(c + d) − ac − bd`. The vector paths inline this identity; the
/// free function documents and tests it.
pub fn karatsuba_pair(ring: &Ring, a: Zq, b: Zq, c: Zq, d: Zq) -> Zq {
    let s = ring.to_mont(ring.fqmul(a + b, c + d));
    let ac = ring.to_mont(ring.fqmul(a, c));
    let bd = ring.to_mont(ring.fqmul(b, d));
    ring.barrett_reduce(s - ac - bd)
}

// ----------------------------------------------------------------------
// Closed-form complexity
// ----------------------------------------------------------------------

/// Transform family selector for [`complexity_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NttVariant {
    Classic,
    Truncated,
    PartSplit,
    Hybrid,
}

impl std::str::FromStr for NttVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(NttVariant::Classic),
            "t" | "truncated" => Ok(NttVariant::Truncated),
            "pt" | "part-split" => Ok(NttVariant::PartSplit),
            "h" | "hybrid" => Ok(NttVariant::Hybrid),
            other => Err(Error::Malformed(format!("unknown NTT variant `{other}`"))),
        }
    }
}

/// Exact operation counts `(T_m, T_a)` of one full multiplication in
/// `Z_q[x]/(x^n + 1)` under the `(α, β)` scheme: two forward transforms,
/// the product layer, one inverse transform (its `n` scaling
/// multiplications included).
///
/// For `α ≥ 1, β ≥ 1` this equals the published hybrid closed form
/// `T_m = (3/2)n·log2(n) + (3·2^{α+β−3} + 2^{α−2} + 3·2^{β−3} + 2^{α−β−2}
/// − (3/2)(α+β) + 5/4)·n` (and its `T_a` counterpart); for `β = 0` it
/// equals the part-split closed form, which at `α = 0` degenerates to the
/// classic pipeline `(3/2)n·log2(n) + 2n`. The degenerate edges replace the
/// fractional basecase/twist terms by their exact values (a slot product of
/// width 1 costs one multiplication, and `α = 0` has no wrapped products),
/// which is what the measured counters produce. `tests::formula_matches_*`
/// pin both readings.
pub fn complexity_formula(variant: NttVariant, n: usize, alpha: u8, beta: u8) -> (u64, u64) {
    let (alpha, beta) = match variant {
        NttVariant::Classic => (0, 0),
        NttVariant::Truncated => (0, beta),
        NttVariant::PartSplit => (alpha, 0),
        NttVariant::Hybrid => (alpha, beta),
    };
    let n64 = n as u64;
    let k = 1u64 << alpha;
    let z = n64 >> alpha;
    let levels = z.trailing_zeros() as u64 - beta as u64;
    let slots = z >> beta;
    // Basecase cost per residue slot.
    let (bm, ba) = if beta == 0 {
        (1u64, 0u64)
    } else {
        (
            3 * 4u64.pow(beta as u32 - 1) + (1 << (beta - 1)),
            5 * ((1 << (2 * beta - 1)) - (1 << (beta as u32 - 1))),
        )
    };
    let products = k * (k + 1) / 2;
    let twists = if alpha >= 1 { (k * k / 4) * slots } else { 0 };
    let t_m = 3 * k * (z * levels / 2)      // 2 forward + 1 inverse transform
        + products * slots * bm             // residue products
        + twists                            // wrap twists (1 mul per slot)
        + n64;                              // inverse scaling
    let t_a = 3 * k * z * levels
        + products * slots * ba
        + (k * (k - 1) / 2) * 4 * z         // pair sums + corrections
        + (products - k) * z;               // contribution accumulation
    (t_m, t_a)
}

/// Deduplicated twiddle-table footprint (bytes) of a set of plans: tables
/// are shared by `(q, M)`, so e.g. every scheme living on `q = 7681` with
/// `M = 256` — the 256-degree truncated transforms *and* the 512-degree
/// hybrid sub-transforms — accounts one 128-entry table.
pub fn plan_set_table_bytes(plans: &[Arc<NttPlan>]) -> usize {
    let mut seen = std::collections::HashSet::new();
    let mut bytes = 0usize;
    for p in plans {
        if seen.insert(p.table_key()) {
            bytes += p.table_bytes();
        }
    }
    bytes
}
