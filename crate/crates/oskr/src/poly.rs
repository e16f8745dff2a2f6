//! Polynomial sampling and vector arithmetic helpers.
//!
//! * [`cbd_sample`] — centered binomial noise from a PRF stream, bit-exact
//!   with the deployed sampler for every width `η ∈ {1, 2, 3, 4}`;
//! * [`gen_matrix`] — rejection-sampled uniform matrix `Â` in the transform
//!   domain, driven by `XOF(ρ, col, row)`;
//! * small canonical-arithmetic helpers (`add`, `sub`, [`pointwise_acc`]).
//!
//! Noise polynomials are returned *centered* (coefficients in `[−η, η]`);
//! [`canon`] lifts them to canonical `[0, q)` representatives before any
//! transform.

use sha3::digest::XofReader;

use crate::modring::{Ring, Zq};
use crate::ntt::{domain_mul, NttPlan, OpCounter};
use crate::params::ParamSet;
use crate::symmetric::xof;
use crate::{Error, Result};

/// Bytes of PRF output one `cbd_sample` of width `eta` consumes for `n`
/// coefficients: `2·η` bits each.
pub fn cbd_input_len(n: usize, eta: u8) -> usize {
    n * eta as usize / 4
}

/// Centered binomial sampler: coefficient `i` is
/// `Σ_{k<η} bit(2ηi + k) − Σ_{k<η} bit(2ηi + η + k)` over the little-endian
/// bit stream of `bytes`. Output range `[−η, η]`.
pub fn cbd_sample(bytes: &[u8], eta: u8, n: usize) -> Result<Vec<Zq>> {
    if bytes.len() != cbd_input_len(n, eta) {
        return Err(Error::MalformedLength {
            what: "cbd input",
            expected: cbd_input_len(n, eta),
            got: bytes.len(),
        });
    }
    let bit = |i: usize| -> i16 { ((bytes[i >> 3] >> (i & 7)) & 1) as i16 };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let base = 2 * eta as usize * i;
        let mut a = 0i16;
        let mut b = 0i16;
        for k in 0..eta as usize {
            a += bit(base + k);
            b += bit(base + eta as usize + k);
        }
        out.push(a - b);
    }
    Ok(out)
}

/// Lifts centered coefficients to canonical `[0, q)`.
pub fn canon(ring: &Ring, f: &[Zq]) -> Vec<Zq> {
    f.iter().map(|&c| ring.caddq(c)).collect()
}

/// Canonical addition of two polynomials.
pub fn add(ring: &Ring, a: &[Zq], b: &[Zq]) -> Vec<Zq> {
    a.iter().zip(b).map(|(&x, &y)| ring.csubq(x + y)).collect()
}

/// Canonical subtraction `a − b`.
pub fn sub(ring: &Ring, a: &[Zq], b: &[Zq]) -> Vec<Zq> {
    a.iter().zip(b).map(|(&x, &y)| ring.caddq(x - y)).collect()
}

/// Uniform rejection sampling of `n` canonical coefficients from an XOF
/// stream. `q = 3329` consumes byte triples carrying two 12-bit candidates;
/// the 13-bit moduli consume little-endian byte pairs masked to 13 bits.
fn rej_uniform(reader: &mut impl XofReader, ring: &Ring, n: usize) -> Vec<Zq> {
    let q = ring.q;
    let mut out = Vec::with_capacity(n);
    if q == 3329 {
        let mut buf = [0u8; 3];
        while out.len() < n {
            reader.read(&mut buf);
            let d1 = (buf[0] as u16) | ((buf[1] as u16 & 0x0F) << 8);
            let d2 = ((buf[1] as u16) >> 4) | ((buf[2] as u16) << 4);
            if d1 < q {
                out.push(d1 as Zq);
            }
            if d2 < q && out.len() < n {
                out.push(d2 as Zq);
            }
        }
    } else {
        let mut buf = [0u8; 2];
        while out.len() < n {
            reader.read(&mut buf);
            let d = ((buf[0] as u16) | ((buf[1] as u16) << 8)) & 0x1FFF;
            if d < q {
                out.push(d as Zq);
            }
        }
    }
    out
}

/// Expands the public seed into the `l×l` matrix `Â` (transform domain,
/// canonical coefficients). Entry `A[i][j]` draws from `XOF(ρ, j, i)`;
/// `transposed` swaps the indices, so
/// `gen_matrix(ρ, p, false)[i][j] == gen_matrix(ρ, p, true)[j][i]`.
pub fn gen_matrix(
    ring: &'static Ring,
    p: &ParamSet,
    rho: &[u8],
    transposed: bool,
) -> Vec<Vec<Vec<Zq>>> {
    let mut a = Vec::with_capacity(p.l);
    for i in 0..p.l {
        let mut row = Vec::with_capacity(p.l);
        for j in 0..p.l {
            let (x, y) = if transposed {
                (i as u8, j as u8)
            } else {
                (j as u8, i as u8)
            };
            let mut reader = xof(rho, x, y);
            row.push(rej_uniform(&mut reader, ring, p.n));
        }
        a.push(row);
    }
    a
}

/// Transform-domain inner product `Σ_i a_i ∘ b_i` of two polynomial vectors.
/// The result carries the product layer's single `R^{-1}` factor; follow
/// with an `intt_after_mul` or a Montgomery fix-up.
pub fn pointwise_acc(
    plan: &NttPlan,
    a: &[Vec<Zq>],
    b: &[Vec<Zq>],
    ctr: &mut OpCounter,
) -> Vec<Zq> {
    debug_assert_eq!(a.len(), b.len());
    let ring = plan.ring();
    let mut acc = domain_mul(plan, &a[0], &b[0], ctr);
    for i in 1..a.len() {
        let t = domain_mul(plan, &a[i], &b[i], ctr);
        for (x, y) in acc.iter_mut().zip(t) {
            *x = ring.csubq(*x + y);
            ctr.adds += 1;
        }
    }
    acc
}

/// Repairs the `R^{-1}` factor of a transform-domain product, returning
/// plain canonical coefficients (used when the result stays in the domain,
/// e.g. the public-key vector).
pub fn fix_mont(ring: &Ring, f: &[Zq]) -> Vec<Zq> {
    f.iter()
        .map(|&c| ring.caddq(ring.fqmul(c, ring.r2())))
        .collect()
}
