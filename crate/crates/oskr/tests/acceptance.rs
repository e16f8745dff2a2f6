//! Release acceptance suite: ten criteria, one verdict line each.
//!
//! Runs as a plain binary (`harness = false`) so every verdict line is
//! printed regardless of outcome; the process exits nonzero if any
//! criterion fails. Each criterion is independent: a failure (including a
//! panic) in one does not stop the others.
//!
//! | # | check                                                                |
//! |---|----------------------------------------------------------------------|
//! | 1 | encoded pk/ct byte lengths equal the published tables                |
//! | 2 | failure rates match published log2 δ within ±0.15; AKCN ≤ original   |
//! | 3 | oskr512/768 byte-match the deployed round-3 reference, ≥25 vectors   |
//! | 4 | all NTT pipelines == schoolbook oracle, 10^4 pairs per shape         |
//! | 5 | measured op counters == closed-form formula on the (α, β) grid       |
//! | 6 | truncated/part-split interleaving identity; α=β=2 product equality   |
//! | 7 | compression error bound verified exhaustively for every (q, d)       |
//! | 8 | 10^4 KEM round trips and 10^3 tamper rejections per preset           |
//! | 9 | unified-q root tables ≤ 20% of the dual-q baseline                   |
//! | 10| H-NTT multiplication faster than classic at (n=256, q=7681)          |

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use oskr::codec;
use oskr::failure::{delta_log2, delta_log2_doubled, DecVariant};
use oskr::kem;
use oskr::modring::{ring_for, Zq};
use oskr::ntt::{self, complexity_formula, plan_set_table_bytes, NttPlan, NttVariant, OpCounter};
use oskr::params::{self, preset, PRESETS};
use oskr::symmetric::SeedStream;

type Verdict = Result<String, String>;

fn main() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("encoded sizes", c1_sizes),
        ("failure rates", c2_failure_rates),
        ("reference KATs", c3_reference_kats),
        ("schoolbook oracle", c4_schoolbook_oracle),
        ("complexity formula", c5_complexity_formula),
        ("transform identities", c6_transform_identities),
        ("compression bound", c7_compression_bound),
        ("KEM soak", c8_kem_soak),
        ("root-table footprint", c9_table_footprint),
        ("H-NTT vs classic bench", c10_directional_bench),
    ];
    let mut failures = 0usize;
    for (i, (title, f)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic with non-string payload".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:2} PASS  {title}: {detail}  [{secs:.1}s]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:2} FAIL  {title}: {msg}  [{secs:.1}s]", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures}/10 criteria FAILED");
        std::process::exit(1);
    }
    println!("acceptance: 10/10 criteria passed");
}

// ----------------------------------------------------------------------
// shared helpers
// ----------------------------------------------------------------------

/// Deterministic canonical polynomial (uniformity is irrelevant for the
/// equality checks these feed; `% q` bias is fine).
fn rand_poly(rng: &mut SeedStream, q: u16, n: usize) -> Vec<Zq> {
    let mut buf = vec![0u8; 2 * n];
    rng.fill(&mut buf);
    buf.chunks_exact(2)
        .map(|c| (u16::from_le_bytes([c[0], c[1]]) % q) as Zq)
        .collect()
}

/// O(n²) negacyclic schoolbook product over i64, output canonical.
fn schoolbook(q: u16, f: &[Zq], g: &[Zq]) -> Vec<Zq> {
    let n = f.len();
    let qi = q as i64;
    let mut acc = vec![0i64; n];
    for i in 0..n {
        let fi = f[i] as i64;
        for j in 0..n {
            let v = fi * g[j] as i64;
            if i + j < n {
                acc[i + j] += v;
            } else {
                acc[i + j - n] -= v;
            }
        }
    }
    acc.iter().map(|&v| v.rem_euclid(qi) as Zq).collect()
}

/// Round-half-up of `num/den` for positive `den`.
fn rhu(num: i128, den: i128) -> i128 {
    (2 * num + den).div_euclid(2 * den)
}

// ----------------------------------------------------------------------
// criterion 1: encoded sizes
// ----------------------------------------------------------------------

fn c1_sizes() -> Verdict {
    // (name, pk bytes, single-shot ct bytes) — published wire sizes.
    let table = [
        ("oskr512", 800usize, 768usize),
        ("oskr768", 1184, 1088),
        ("oskr1024", 1600, 1728),
        ("okai512", 608, 640),
        ("okai768", 896, 992),
        ("okai1024", 1344, 1472),
        ("approach1", 1568, 1568),
        ("approach2", 1696, 1632),
        ("approach3", 1600, 1728),
    ];
    let mut rng = SeedStream::new(b"acceptance-sizes");
    for (name, want_pk, want_ct) in table {
        let p = preset(name).map_err(|e| e.to_string())?;
        let (fpk, fct, _) = params::encoded_sizes(p);
        if (fpk, fct) != (want_pk, want_ct) {
            return Err(format!("{name}: formula says pk={fpk} ct={fct}, table says pk={want_pk} ct={want_ct}"));
        }
        // Sizes must hold for real artifacts, not just the formulas.
        let (pk, sk) = kem::kem_keygen(p, &mut rng).map_err(|e| e.to_string())?;
        let (ct, _) = if name == "approach1" {
            kem::encaps_approach1(p, &pk, &mut rng).map_err(|e| e.to_string())?
        } else {
            kem::encaps(p, &pk, &mut rng).map_err(|e| e.to_string())?
        };
        let want_kem_ct = if name == "approach1" { 2 * want_ct } else { want_ct };
        if pk.len() != want_pk || ct.len() != want_kem_ct || sk.len() != p.sk_bytes() {
            return Err(format!(
                "{name}: generated pk={} ct={} sk={} (want pk={want_pk} ct={want_kem_ct} sk={})",
                pk.len(),
                ct.len(),
                sk.len(),
                p.sk_bytes()
            ));
        }
    }
    Ok("9/9 presets match the published pk/ct tables (formulas and generated artifacts)".into())
}

// ----------------------------------------------------------------------
// criterion 2: failure rates
// ----------------------------------------------------------------------

fn c2_failure_rates() -> Verdict {
    const TOL: f64 = 0.15;
    // Published log2 δ values. `paired = true` rows are the two-session
    // construction, whose published figure is for the pair (one bit above
    // the single-session value); its published two-rounding figure is a
    // single-session comparison number and is not doubled.
    let printed: &[(&str, DecVariant, f64, bool)] = &[
        ("oskr512", DecVariant::Akcn, -142.8, false),
        ("oskr512", DecVariant::Original, -138.9, false),
        ("oskr768", DecVariant::Akcn, -168.8, false),
        ("oskr768", DecVariant::Original, -165.0, false),
        ("oskr1024", DecVariant::Akcn, -178.7, false),
        ("okai512", DecVariant::Akcn, -85.3, false),
        ("okai768", DecVariant::Akcn, -132.7, false),
        ("okai768", DecVariant::Original, -128.7, false),
        ("okai1024", DecVariant::Akcn, -216.2, false),
        ("approach1", DecVariant::Akcn, -178.7, true),
        ("approach1", DecVariant::Original, -174.9, false),
        ("approach2", DecVariant::Akcn, -182.9, false),
        ("approach3", DecVariant::Akcn, -178.7, false),
    ];
    let mut worst: f64 = 0.0;
    let mut computed: BTreeMap<(String, &'static str), f64> = BTreeMap::new();
    for &(name, variant, want, paired) in printed {
        let p = preset(name).map_err(|e| e.to_string())?;
        let got = if paired {
            delta_log2_doubled(p, variant).map_err(|e| e.to_string())?
        } else {
            delta_log2(p, variant).map_err(|e| e.to_string())?
        };
        let dev = (got - want).abs();
        worst = worst.max(dev);
        if dev > TOL {
            return Err(format!(
                "{name}/{}: computed {got:.3}, published {want}, |Δ| = {dev:.3} > {TOL}",
                variant.as_str()
            ));
        }
        computed.insert((name.to_string(), variant.as_str()), got);
    }
    // Baseline rows published for the dual-modulus design this work replaces.
    for (p, want) in [
        (params::aigis512_reference(), -81.9f64),
        (params::aigis1024_reference(), -211.8),
    ] {
        let got = delta_log2(&p, DecVariant::Original).map_err(|e| e.to_string())?;
        let dev = (got - want).abs();
        worst = worst.max(dev);
        if dev > TOL {
            return Err(format!(
                "{}/original: computed {got:.3}, published {want}, |Δ| = {dev:.3} > {TOL}",
                p.name
            ));
        }
    }
    // The single-rounding reconciliation must never fail more often than
    // two-sided rounding on the same parameters.
    for p in PRESETS {
        let akcn = delta_log2(p, DecVariant::Akcn).map_err(|e| e.to_string())?;
        let orig = delta_log2(p, DecVariant::Original).map_err(|e| e.to_string())?;
        if akcn > orig {
            return Err(format!(
                "{}: log2 δ akcn {akcn:.3} > original {orig:.3}",
                p.name
            ));
        }
    }
    Ok(format!(
        "15 published log2 δ values reproduced (worst |Δ| = {worst:.3} ≤ {TOL}); akcn ≤ original on all 9 presets"
    ))
}

// ----------------------------------------------------------------------
// criterion 3: byte compatibility with the deployed reference
// ----------------------------------------------------------------------

/// Serves queued bytes to the reference implementation's RNG interface.
struct FixedRng(Vec<u8>, usize);

impl rand_core::CryptoRng for FixedRng {}
impl rand_core::RngCore for FixedRng {
    fn next_u32(&mut self) -> u32 {
        unimplemented!("reference KEM draws via fill_bytes only")
    }
    fn next_u64(&mut self) -> u64 {
        unimplemented!("reference KEM draws via fill_bytes only")
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        dest.copy_from_slice(&self.0[self.1..self.1 + dest.len()]);
        self.1 += dest.len();
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

fn c3_reference_kats() -> Verdict {
    const VECTORS: usize = 25;
    let mut rng = SeedStream::new(b"acceptance-kat");

    let p512 = preset("oskr512").map_err(|e| e.to_string())?;
    for i in 0..VECTORS {
        let d = rng.take(32);
        let z = rng.take(32);
        let m0 = rng.take(32);

        let (pk, sk) = kem::kem_keygen_deterministic(p512, &d, &z).map_err(|e| e.to_string())?;
        let mut seed = d.clone();
        seed.extend_from_slice(&z);
        let kp = pqc_kyber::keypair(&mut FixedRng(seed, 0))
            .map_err(|e| format!("reference keypair: {e:?}"))?;
        if pk.as_slice() != &kp.public[..] || sk.as_slice() != &kp.secret[..] {
            return Err(format!("512 vector {i}: keypair bytes diverge"));
        }

        let (ct, ss) = kem::encaps_deterministic(p512, &pk, &m0).map_err(|e| e.to_string())?;
        let (rct, rss) = pqc_kyber::encapsulate(&kp.public, &mut FixedRng(m0.clone(), 0))
            .map_err(|e| format!("reference encapsulate: {e:?}"))?;
        if ct.as_slice() != &rct[..] || ss.as_slice() != &rss[..] {
            return Err(format!("512 vector {i}: encapsulation bytes diverge"));
        }

        let dss = kem::decaps(p512, &sk, &ct).map_err(|e| e.to_string())?;
        let rdss = pqc_kyber::decapsulate(&ct, &kp.secret)
            .map_err(|e| format!("reference decapsulate: {e:?}"))?;
        if dss != ss || &rdss[..] != ss.as_slice() {
            return Err(format!("512 vector {i}: decapsulation diverges"));
        }
    }

    let p768 = preset("oskr768").map_err(|e| e.to_string())?;
    for i in 0..VECTORS {
        let d = rng.take(32);
        let z = rng.take(32);
        let m0 = rng.take(32);

        let (pk, sk) = kem::kem_keygen_deterministic(p768, &d, &z).map_err(|e| e.to_string())?;
        let mut seed = d.clone();
        seed.extend_from_slice(&z);
        let kp = pqc_kyber_768::keypair(&mut FixedRng(seed, 0));
        if pk.as_slice() != &kp.public[..] || sk.as_slice() != &kp.secret[..] {
            return Err(format!("768 vector {i}: keypair bytes diverge"));
        }

        let (ct, ss) = kem::encaps_deterministic(p768, &pk, &m0).map_err(|e| e.to_string())?;
        let (rct, rss) = pqc_kyber_768::encapsulate(&kp.public, &mut FixedRng(m0.clone(), 0))
            .map_err(|e| format!("reference encapsulate: {e:?}"))?;
        if ct.as_slice() != &rct[..] || ss.as_slice() != &rss[..] {
            return Err(format!("768 vector {i}: encapsulation bytes diverge"));
        }

        let dss = kem::decaps(p768, &sk, &ct).map_err(|e| e.to_string())?;
        let rdss = pqc_kyber_768::decapsulate(&ct, &kp.secret)
            .map_err(|e| format!("reference decapsulate: {e:?}"))?;
        if dss != ss || &rdss[..] != ss.as_slice() {
            return Err(format!("768 vector {i}: decapsulation diverges"));
        }
    }

    Ok(format!(
        "{VECTORS} vectors each for oskr512/oskr768 byte-match the deployed reference (keygen pk+sk, encaps ct+ss, decaps ss)"
    ))
}

// ----------------------------------------------------------------------
// criterion 4: schoolbook oracle equivalence
// ----------------------------------------------------------------------

fn c4_schoolbook_oracle() -> Verdict {
    const PAIRS: usize = 10_000;
    // Every (n, q, α, β) a preset runs on, plus classic and part-split
    // shapes on the same bases so all four transform families face the
    // oracle. (256, 3329) has no 512th root of unity, so its classic
    // shape does not exist.
    let shapes: &[(usize, u16, u8, u8)] = &[
        (256, 3329, 0, 1),
        (256, 3329, 1, 0),
        (256, 7681, 0, 0),
        (256, 7681, 0, 1),
        (256, 7681, 1, 0),
        (512, 3329, 1, 1),
        (512, 7681, 1, 1),
    ];
    for &(n, q, alpha, beta) in shapes {
        let plan = NttPlan::get(n, q, alpha, beta)
            .map_err(|e| format!("plan ({n},{q},{alpha},{beta}): {e}"))?;
        let mut rng = SeedStream::new(format!("acceptance-oracle-{n}-{q}-{alpha}-{beta}").as_bytes());
        let mut ctr = OpCounter::default();
        for i in 0..PAIRS {
            let f = rand_poly(&mut rng, q, n);
            let g = rand_poly(&mut rng, q, n);
            let got = ntt::mul(&plan, &f, &g, &mut ctr);
            let want = schoolbook(q, &f, &g);
            if got != want {
                return Err(format!("({n},{q},α={alpha},β={beta}) pair {i}: product differs from schoolbook"));
            }
        }
    }
    Ok(format!(
        "{PAIRS} random pairs × {} shapes bit-equal the negacyclic schoolbook oracle",
        shapes.len()
    ))
}

// ----------------------------------------------------------------------
// criterion 5: measured counters == closed-form complexity
// ----------------------------------------------------------------------

fn c5_complexity_formula() -> Verdict {
    let mut checked = 0usize;
    for q in [3329u16, 7681] {
        // Part-split column (β = 0) and the full hybrid grid.
        let mut grid: Vec<(NttVariant, u8, u8)> = Vec::new();
        for a in 0..=2u8 {
            grid.push((NttVariant::PartSplit, a, 0));
            for b in 0..=2u8 {
                grid.push((NttVariant::Hybrid, a, b));
            }
        }
        for (variant, alpha, beta) in grid {
            let plan = match NttPlan::get(256, q, alpha, beta) {
                Ok(p) => p,
                // "roots permitting": (α=0, β=0) needs a 512th root,
                // which q = 3329 lacks.
                Err(_) if q == 3329 && alpha == 0 && beta == 0 => continue,
                Err(e) => return Err(format!("plan (256,{q},{alpha},{beta}): {e}")),
            };
            let want = complexity_formula(variant, 256, alpha, beta);
            let mut rng = SeedStream::new(format!("acceptance-grid-{q}-{alpha}-{beta}").as_bytes());
            for _ in 0..3 {
                let f = rand_poly(&mut rng, q, 256);
                let g = rand_poly(&mut rng, q, 256);
                let mut ctr = OpCounter::default();
                let _ = ntt::mul(&plan, &f, &g, &mut ctr);
                if ctr.as_pair() != want {
                    return Err(format!(
                        "(256,{q},α={alpha},β={beta}): measured {:?}, formula {:?}",
                        ctr.as_pair(),
                        want
                    ));
                }
            }
            checked += 1;
        }
    }
    // The headline optimum: hybrid (α=1, β=1) at n=256.
    let head = complexity_formula(NttVariant::Hybrid, 256, 1, 1);
    if head != (3392, 6208) {
        return Err(format!("hybrid (1,1) formula gives {head:?}, want (3392, 6208)"));
    }
    Ok(format!(
        "{checked} grid points measured == formula exactly; hybrid (α=β=1, n=256) = (3392 muls, 6208 adds)"
    ))
}

// ----------------------------------------------------------------------
// criterion 6: structural transform identities
// ----------------------------------------------------------------------

fn c6_transform_identities() -> Verdict {
    const INPUTS: usize = 50;
    const PRODUCTS: usize = 200;
    for q in [3329u16, 7681] {
        // (a) slot t of the β = 1 truncated transform holds
        //     (f_even(w_t), f_odd(w_t)), i.e. exactly the two part-split
        //     sub-transforms (each a half-size classic NTT), elementwise.
        let tplan = NttPlan::get(256, q, 0, 1).map_err(|e| e.to_string())?;
        let pplan = NttPlan::get(256, q, 1, 0).map_err(|e| e.to_string())?;
        let cplan = NttPlan::get(128, q, 0, 0).map_err(|e| e.to_string())?;
        let mut rng = SeedStream::new(format!("acceptance-ident-{q}").as_bytes());
        let mut ctr = OpCounter::default();
        for i in 0..INPUTS {
            let f = rand_poly(&mut rng, q, 256);
            let th = ntt::t_ntt(&tplan, &f, &mut ctr).map_err(|e| e.to_string())?;
            let ph = ntt::pt_ntt(&pplan, &f, &mut ctr).map_err(|e| e.to_string())?;
            let even: Vec<Zq> = (0..128).map(|j| f[2 * j]).collect();
            let odd: Vec<Zq> = (0..128).map(|j| f[2 * j + 1]).collect();
            let eh = ntt::classic_ntt(&cplan, &even, &mut ctr).map_err(|e| e.to_string())?;
            let oh = ntt::classic_ntt(&cplan, &odd, &mut ctr).map_err(|e| e.to_string())?;
            for t in 0..128 {
                if th[2 * t] != eh[t] || th[2 * t + 1] != oh[t] {
                    return Err(format!("q={q} input {i}: truncated slot {t} ≠ half-size classics"));
                }
                if ph[t] != eh[t] || ph[128 + t] != oh[t] {
                    return Err(format!("q={q} input {i}: part-split sub-transform slot {t} ≠ half-size classics"));
                }
            }
        }
        // (b) full products agree at α = β = 2.
        let hplan = NttPlan::get(256, q, 2, 2).map_err(|e| e.to_string())?;
        for i in 0..PRODUCTS {
            let f = rand_poly(&mut rng, q, 256);
            let g = rand_poly(&mut rng, q, 256);
            let got = ntt::h_mul(&hplan, &f, &g, &mut ctr).map_err(|e| e.to_string())?;
            if got != schoolbook(q, &f, &g) {
                return Err(format!("q={q} pair {i}: hybrid (2,2) product differs"));
            }
        }
    }
    Ok(format!(
        "truncated ≡ de-interleaved part-split sub-transforms ({INPUTS} inputs × 2 moduli); hybrid (2,2) products exact ({PRODUCTS} pairs × 2 moduli)"
    ))
}

// ----------------------------------------------------------------------
// criterion 7: compression error bound
// ----------------------------------------------------------------------

fn c7_compression_bound() -> Verdict {
    // Every (q, d) depth any preset compresses at (vector, key, cipher
    // and message words).
    let mut pairs: BTreeSet<(u16, u8)> = BTreeSet::new();
    for p in PRESETS {
        for d in [p.d_k, p.d_u, p.d_v, p.d_m()] {
            pairs.insert((p.q, d));
        }
    }
    let mut words = 0u64;
    for &(q, d) in &pairs {
        let ring = ring_for(q).map_err(|e| e.to_string())?;
        let qi = q as i128;
        let two_d = 1i128 << d;
        // Worst-case reconstruction error ⌈q/2^(d+1)⌋.
        let bound = rhu(qi, 2 * two_d);
        for x in 0..q {
            let y = codec::compress(ring, x as Zq, d);
            let y_oracle = (rhu((x as i128) * two_d, qi) % two_d) as u16;
            if y != y_oracle {
                return Err(format!("q={q} d={d} x={x}: compress {y} ≠ oracle {y_oracle}"));
            }
            let xr = codec::decompress(ring, y, d);
            let xr_oracle = rhu(y as i128 * qi, two_d) as i16;
            if xr != xr_oracle {
                return Err(format!("q={q} d={d} y={y}: decompress {xr} ≠ oracle {xr_oracle}"));
            }
            // Centered distance |xr − x mod± q|.
            let mut diff = (xr as i128 - x as i128).rem_euclid(qi);
            if diff > qi / 2 {
                diff -= qi;
            }
            if diff.abs() > bound {
                return Err(format!(
                    "q={q} d={d} x={x}: |error| {} exceeds bound {bound}",
                    diff.abs()
                ));
            }
            words += 1;
        }
    }
    Ok(format!(
        "{words} (x, q, d) words exhaustively within ⌈q/2^(d+1)⌋ across {} (q, d) depths; zero violations",
        pairs.len()
    ))
}

// ----------------------------------------------------------------------
// criterion 8: KEM soak + tamper rejection
// ----------------------------------------------------------------------

fn c8_kem_soak() -> Verdict {
    const TRIPS: usize = 10_000;
    const TAMPERS: usize = 1_000;
    const TRIPS_PER_KEY: usize = 100;
    for p in PRESETS {
        let paired = p.name == "approach1";
        let mut rng = SeedStream::new(format!("acceptance-soak-{}", p.name).as_bytes());
        let mut keys = (Vec::new(), Vec::new());
        for i in 0..TRIPS {
            if i % TRIPS_PER_KEY == 0 {
                keys = kem::kem_keygen(p, &mut rng).map_err(|e| e.to_string())?;
            }
            let (ct, ss) = if paired {
                kem::encaps_approach1(p, &keys.0, &mut rng).map_err(|e| e.to_string())?
            } else {
                kem::encaps(p, &keys.0, &mut rng).map_err(|e| e.to_string())?
            };
            let got = if paired {
                kem::decaps_approach1(p, &keys.1, &ct).map_err(|e| e.to_string())?
            } else {
                kem::decaps(p, &keys.1, &ct).map_err(|e| e.to_string())?
            };
            if got != ss {
                return Err(format!("{}: shared-key mismatch at round trip {i}", p.name));
            }
        }
        // Single-bit tampers on a fresh valid session must all be
        // implicitly rejected (different key, no error).
        let (pk, sk) = kem::kem_keygen(p, &mut rng).map_err(|e| e.to_string())?;
        let (ct, ss) = if paired {
            kem::encaps_approach1(p, &pk, &mut rng).map_err(|e| e.to_string())?
        } else {
            kem::encaps(p, &pk, &mut rng).map_err(|e| e.to_string())?
        };
        for t in 0..TAMPERS {
            let pos = {
                let b = rng.take(4);
                u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as usize % (8 * ct.len())
            };
            let mut bad = ct.clone();
            bad[pos / 8] ^= 1 << (pos % 8);
            let got = if paired {
                kem::decaps_approach1(p, &sk, &bad)
            } else {
                kem::decaps(p, &sk, &bad)
            }
            .map_err(|e| format!("{} tamper {t}: decaps errored ({e}) instead of rejecting implicitly", p.name))?;
            if got == ss {
                return Err(format!("{}: tampered ciphertext {t} (bit {pos}) yielded the honest key", p.name));
            }
        }
    }
    Ok(format!(
        "{TRIPS} round trips and {TAMPERS} single-bit tamper rejections per preset × 9 presets, zero anomalies"
    ))
}

// ----------------------------------------------------------------------
// criterion 9: root-table footprint
// ----------------------------------------------------------------------

fn c9_table_footprint() -> Verdict {
    // All OKAI sets live on q = 7681 and share one M = 256 table: the
    // 256-degree truncated plans and the 512-degree hybrid's half-size
    // sub-transforms hit the same (q, M) key.
    let okai: Vec<Arc<NttPlan>> = vec![
        NttPlan::for_params(preset("okai512").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        NttPlan::for_params(preset("okai768").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        NttPlan::for_params(preset("okai1024").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
    ];
    // The dual-modulus baseline needs that table *and* a full classic
    // table for (n = 512, q = 12289).
    let baseline: Vec<Arc<NttPlan>> = vec![
        okai[0].clone(),
        NttPlan::get(512, 12289, 0, 0).map_err(|e| e.to_string())?,
    ];
    let okai_bytes = plan_set_table_bytes(&okai);
    let base_bytes = plan_set_table_bytes(&baseline);
    if okai_bytes != 256 || base_bytes != 1280 {
        return Err(format!(
            "unexpected footprints: unified {okai_bytes} B (want 256), dual-modulus {base_bytes} B (want 1280)"
        ));
    }
    if okai_bytes * 5 > base_bytes {
        return Err(format!(
            "unified tables {okai_bytes} B exceed 20% of dual-modulus {base_bytes} B"
        ));
    }
    Ok(format!(
        "unified-q tables {okai_bytes} B vs dual-q {base_bytes} B — {:.1}% reduction (≤ 20% retained)",
        100.0 * (1.0 - okai_bytes as f64 / base_bytes as f64)
    ))
}

// ----------------------------------------------------------------------
// criterion 10: directional speed of H-NTT over classic
// ----------------------------------------------------------------------

fn c10_directional_bench() -> Verdict {
    const ITERS: usize = 5_000;
    const INPUTS: usize = 64;
    let q = 7681u16;
    let classic = NttPlan::get(256, q, 0, 0).map_err(|e| e.to_string())?;
    let hybrid = NttPlan::get(256, q, 1, 1).map_err(|e| e.to_string())?;
    let mut rng = SeedStream::new(b"acceptance-bench");
    let inputs: Vec<(Vec<Zq>, Vec<Zq>)> = (0..INPUTS)
        .map(|_| (rand_poly(&mut rng, q, 256), rand_poly(&mut rng, q, 256)))
        .collect();

    let median_ns = |plan: &NttPlan| -> u64 {
        let mut ctr = OpCounter::default();
        // Warm-up pass (page/cache effects, branch predictors).
        for (f, g) in &inputs {
            std::hint::black_box(ntt::mul(plan, f, g, &mut ctr));
        }
        let mut samples = Vec::with_capacity(ITERS);
        for i in 0..ITERS {
            let (f, g) = &inputs[i % INPUTS];
            let t = Instant::now();
            std::hint::black_box(ntt::mul(plan, f, g, &mut ctr));
            samples.push(t.elapsed().as_nanos() as u64);
        }
        samples.sort_unstable();
        samples[samples.len() / 2]
    };

    // Interleaved A/B/A/B passes so background load hits both evenly.
    let (mut cls, mut hyb) = (Vec::new(), Vec::new());
    for _ in 0..2 {
        cls.push(median_ns(&classic));
        hyb.push(median_ns(&hybrid));
    }
    let c = *cls.iter().min().unwrap();
    let h = *hyb.iter().min().unwrap();
    let gain = 100.0 * (1.0 - h as f64 / c as f64);
    if h >= c {
        return Err(format!(
            "hybrid multiplication {h} ns ≥ classic {c} ns at (n=256, q={q}) over {ITERS} iterations (deployed figure: 18.55% faster on vectorized hardware)"
        ));
    }
    Ok(format!(
        "hybrid mul {h} ns < classic {c} ns at (n=256, q={q}) — {gain:.1}% faster (medians over {ITERS} iters; direction matches the published vectorized speedup)"
    ))
}
