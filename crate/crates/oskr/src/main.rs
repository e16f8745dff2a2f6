//! Command-line interface: parameter inspection, KEM operations, KAT
//! generation, the failure-probability calculator, transform
//! operation-count reports, and micro-benchmarks.
//!
//! Exit codes: `0` success, `1` malformed input (unknown preset, bad hex,
//! unreadable file, wrong length), `2` violated invariant (impossible
//! transform shape, missing root of unity, range overflow).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use oskr::failure::{delta_log2, delta_log2_doubled, DecVariant};
use oskr::kem;
use oskr::modring::Zq;
use oskr::ntt::{self, complexity_formula, plan_set_table_bytes, NttPlan, NttVariant, OpCounter};
use oskr::params::{aigis1024_reference, aigis512_reference, bandwidth, preset, Approach, ParamSet, PRESETS};
use oskr::symmetric::SeedStream;
use oskr::{Error, Result};

#[derive(Parser)]
#[command(
    name = "oskr",
    version,
    about = "Module-lattice KEM suite with a four-variant NTT engine and a decryption-failure calculator"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Show parameter sets and derived encoding sizes
    Params {
        /// Preset name (default: all)
        #[arg(long)]
        preset: Option<String>,
        /// Emit JSON
        #[arg(long)]
        json: bool,
    },
    /// Generate a keypair
    Keygen {
        #[arg(long)]
        preset: String,
        /// Hex seed for deterministic output (any length)
        #[arg(long)]
        seed: Option<String>,
        /// Output path prefix; writes `<out>.pk` and `<out>.sk`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encapsulate to a public key
    Encaps {
        #[arg(long)]
        preset: String,
        /// Public-key file
        #[arg(long = "in", value_name = "PK_FILE")]
        input: PathBuf,
        #[arg(long)]
        seed: Option<String>,
        /// Output path prefix; writes `<out>.ct` and `<out>.ss`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decapsulate a ciphertext
    Decaps {
        #[arg(long)]
        preset: String,
        /// Secret-key file
        #[arg(long)]
        sk: PathBuf,
        /// Ciphertext file
        #[arg(long)]
        ct: PathBuf,
    },
    /// Deterministic known-answer vectors (NIST-style response text)
    Kat {
        #[arg(long)]
        preset: String,
        /// Number of vectors
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Hex master seed (default: preset name)
        #[arg(long)]
        seed: Option<String>,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decryption-failure probability, log2
    Delta {
        /// Preset name, `aigis512`/`aigis1024` reference rows, or `all`
        #[arg(long)]
        preset: String,
        /// `akcn`, `original`, or `both`
        #[arg(long, default_value = "both")]
        variant: String,
        #[arg(long)]
        json: bool,
    },
    /// Transform operation counts against the closed-form predictions
    NttReport {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        json: bool,
    },
    /// Median wall-clock timings (nanoseconds)
    Bench {
        #[arg(long)]
        preset: String,
        /// Iterations per measurement
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownPreset(_) | Error::Malformed(_) | Error::MalformedLength { .. } => 1,
        Error::RootUnavailable { .. }
        | Error::UnsupportedShape(_)
        | Error::RangeExceeded(_)
        | Error::Invariant(_) => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Params { preset, json } => cmd_params(preset.as_deref(), json),
        Cmd::Keygen { preset, seed, out } => cmd_keygen(&preset, seed.as_deref(), out.as_deref()),
        Cmd::Encaps { preset, input, seed, out } => {
            cmd_encaps(&preset, &input, seed.as_deref(), out.as_deref())
        }
        Cmd::Decaps { preset, sk, ct } => cmd_decaps(&preset, &sk, &ct),
        Cmd::Kat { preset, count, seed, out } => {
            cmd_kat(&preset, count, seed.as_deref(), out.as_deref())
        }
        Cmd::Delta { preset, variant, json } => cmd_delta(&preset, &variant, json),
        Cmd::NttReport { preset, json } => cmd_ntt_report(&preset, json),
        Cmd::Bench { preset, count, json } => cmd_bench(&preset, count, json),
    }
}

fn rng_from(seed: Option<&str>) -> Result<SeedStream> {
    match seed {
        Some(hexstr) => {
            let bytes = hex::decode(hexstr)
                .map_err(|e| Error::Malformed(format!("--seed is not valid hex: {e}")))?;
            Ok(SeedStream::new(&bytes))
        }
        None => {
            use rand::RngCore;
            let mut buf = [0u8; 64];
            rand::rngs::OsRng.fill_bytes(&mut buf);
            Ok(SeedStream::new(&buf))
        }
    }
}

fn read_file(path: &Path, what: &str) -> Result<Vec<u8>> {
    fs::read(path)
        .map_err(|e| Error::Malformed(format!("cannot read {what} {}: {e}", path.display())))
}

fn write_file(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data)
        .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}

/// Presets the failure calculator accepts: the KEM presets plus the two
/// published reference rows it is compared against.
fn delta_preset(name: &str) -> Result<ParamSet> {
    match name {
        "aigis512" => Ok(aigis512_reference()),
        "aigis1024" => Ok(aigis1024_reference()),
        other => preset(other).map(|p| *p),
    }
}

fn cmd_params(name: Option<&str>, json: bool) -> Result<()> {
    let rows: Vec<&'static ParamSet> = match name {
        Some(n) => vec![preset(n)?],
        None => PRESETS.to_vec(),
    };
    if json {
        let objs: Vec<serde_json::Value> = rows
            .iter()
            .map(|p| {
                serde_json::json!({
                    "params": p,
                    "sizes": {
                        "pk": p.pk_bytes(),
                        "ct": p.ct_bytes(),
                        "sk": p.sk_bytes(),
                        "shared_secret": p.key_bytes,
                    },
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&objs).expect("serialize"));
        return Ok(());
    }
    println!(
        "{:<10} {:>4} {:>5} {:>2} {:>2} {:>9} {:>10} {:>7} {:>5} {:>5} {:>5} {:>4}",
        "preset", "n", "q", "m", "l", "eta(s/e/k)", "d(k/u/v)", "ntt", "pk", "ct", "sk", "ss"
    );
    for p in rows {
        println!(
            "{:<10} {:>4} {:>5} {:>2} {:>2} {:>9} {:>10} {:>7} {:>5} {:>5} {:>5} {:>4}",
            p.name,
            p.n,
            p.q,
            p.m,
            p.l,
            format!("{}/{}/{}", p.eta_s, p.eta_e, p.eta_keygen_e),
            format!("{}/{}/{}", p.d_k, p.d_u, p.d_v),
            format!("a{}b{}", p.ntt_alpha, p.ntt_beta),
            p.pk_bytes(),
            p.ct_bytes(),
            p.sk_bytes(),
            p.key_bytes,
        );
        if p.name == "approach1" {
            for (label, a) in [
                ("twice", Approach::Twice),
                ("wide-message", Approach::WideMessage),
                ("double-dimension", Approach::DoubleDim),
            ] {
                println!(
                    "           256-bit-secret bandwidth, {label:<17}: {:>5} bytes",
                    bandwidth(p, a)
                );
            }
        }
    }
    Ok(())
}

fn cmd_keygen(name: &str, seed: Option<&str>, out: Option<&Path>) -> Result<()> {
    let p = preset(name)?;
    let mut rng = rng_from(seed)?;
    let (pk, sk) = kem::kem_keygen(p, &mut rng)?;
    match out {
        Some(prefix) => {
            let pk_path = prefix.with_extension("pk");
            let sk_path = prefix.with_extension("sk");
            write_file(&pk_path, &pk)?;
            write_file(&sk_path, &sk)?;
            println!("pk: {} ({} bytes)", pk_path.display(), pk.len());
            println!("sk: {} ({} bytes)", sk_path.display(), sk.len());
        }
        None => {
            println!("pk = {}", hex::encode(&pk));
            println!("sk = {}", hex::encode(&sk));
        }
    }
    Ok(())
}

/// The double-encapsulation preset routes through the paired construction.
fn kem_encaps(p: &'static ParamSet, pk: &[u8], rng: &mut SeedStream) -> Result<(Vec<u8>, Vec<u8>)> {
    if p.name == "approach1" {
        kem::encaps_approach1(p, pk, rng)
    } else {
        kem::encaps(p, pk, rng)
    }
}

fn kem_decaps(p: &'static ParamSet, sk: &[u8], ct: &[u8]) -> Result<Vec<u8>> {
    if p.name == "approach1" {
        kem::decaps_approach1(p, sk, ct)
    } else {
        kem::decaps(p, sk, ct)
    }
}

fn cmd_encaps(name: &str, pk_path: &Path, seed: Option<&str>, out: Option<&Path>) -> Result<()> {
    let p = preset(name)?;
    let pk = read_file(pk_path, "public key")?;
    let mut rng = rng_from(seed)?;
    let (ct, ss) = kem_encaps(p, &pk, &mut rng)?;
    match out {
        Some(prefix) => {
            let ct_path = prefix.with_extension("ct");
            let ss_path = prefix.with_extension("ss");
            write_file(&ct_path, &ct)?;
            write_file(&ss_path, &ss)?;
            println!("ct: {} ({} bytes)", ct_path.display(), ct.len());
            println!("ss: {} ({} bytes)", ss_path.display(), ss.len());
        }
        None => {
            println!("ct = {}", hex::encode(&ct));
            println!("ss = {}", hex::encode(&ss));
        }
    }
    Ok(())
}

fn cmd_decaps(name: &str, sk_path: &Path, ct_path: &Path) -> Result<()> {
    let p = preset(name)?;
    let sk = read_file(sk_path, "secret key")?;
    let ct = read_file(ct_path, "ciphertext")?;
    let ss = kem_decaps(p, &sk, &ct)?;
    println!("ss = {}", hex::encode(&ss));
    Ok(())
}

fn cmd_kat(name: &str, count: usize, seed: Option<&str>, out: Option<&Path>) -> Result<()> {
    let p = preset(name)?;
    let master_seed: Vec<u8> = match seed {
        Some(hexstr) => hex::decode(hexstr)
            .map_err(|e| Error::Malformed(format!("--seed is not valid hex: {e}")))?,
        None => name.as_bytes().to_vec(),
    };
    let mut master = SeedStream::new(&master_seed);
    let mut text = format!("# {} ({} vectors)\n\n", p.name, count);
    for i in 0..count {
        // 48-byte per-vector seed in the response-file layout; the
        // per-vector randomness is a SHAKE-256 stream of that seed (not the
        // AES-CTR DRBG of the original harness — layout-compatible, not
        // byte-compatible with it).
        let vseed = master.take(48);
        let mut rng = SeedStream::new(&vseed);
        let (pk, sk) = kem::kem_keygen(p, &mut rng)?;
        let (ct, ss) = kem_encaps(p, &pk, &mut rng)?;
        let check = kem_decaps(p, &sk, &ct)?;
        if check != ss {
            return Err(Error::Invariant(format!(
                "KAT vector {i}: decapsulation mismatch"
            )));
        }
        text.push_str(&format!("count = {i}\n"));
        text.push_str(&format!("seed = {}\n", hex::encode(&vseed).to_uppercase()));
        text.push_str(&format!("pk = {}\n", hex::encode(&pk).to_uppercase()));
        text.push_str(&format!("sk = {}\n", hex::encode(&sk).to_uppercase()));
        text.push_str(&format!("ct = {}\n", hex::encode(&ct).to_uppercase()));
        text.push_str(&format!("ss = {}\n\n", hex::encode(&ss).to_uppercase()));
    }
    match out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            println!("wrote {count} vectors to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_variants(s: &str) -> Result<Vec<DecVariant>> {
    match s {
        "both" => Ok(vec![DecVariant::Akcn, DecVariant::Original]),
        other => Ok(vec![other.parse()?]),
    }
}

fn cmd_delta(name: &str, variant: &str, json: bool) -> Result<()> {
    let rows: Vec<ParamSet> = if name == "all" {
        let mut v: Vec<ParamSet> = PRESETS.iter().map(|p| **p).collect();
        v.push(aigis512_reference());
        v.push(aigis1024_reference());
        v
    } else {
        vec![delta_preset(name)?]
    };
    let variants = parse_variants(variant)?;
    let mut objs = Vec::new();
    for p in &rows {
        for &v in &variants {
            let d = delta_log2(p, v)?;
            let doubled = if p.name == "approach1" {
                Some(delta_log2_doubled(p, v)?)
            } else {
                None
            };
            if json {
                objs.push(serde_json::json!({
                    "preset": p.name,
                    "variant": v.as_str(),
                    "log2_delta": if d.is_finite() { serde_json::json!(d) } else { serde_json::json!("-inf") },
                    "log2_delta_two_sessions": doubled,
                }));
            } else {
                let val = if d.is_finite() { format!("{d:9.3}") } else { "     -inf".into() };
                print!("{:<10} {:<9} log2(delta) = {val}", p.name, v.as_str());
                if let Some(dd) = doubled {
                    print!("   (two sessions: {dd:9.3})");
                }
                println!();
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&objs).expect("serialize"));
    }
    Ok(())
}

fn variant_label(alpha: u8, beta: u8) -> (&'static str, NttVariant) {
    match (alpha, beta) {
        (0, 0) => ("classic", NttVariant::Classic),
        (0, _) => ("truncated", NttVariant::Truncated),
        (_, 0) => ("part-split", NttVariant::PartSplit),
        _ => ("hybrid", NttVariant::Hybrid),
    }
}

fn random_canonical(p: &ParamSet, rng: &mut SeedStream) -> Vec<Zq> {
    (0..p.n)
        .map(|_| {
            let mut b = [0u8; 2];
            rng.fill(&mut b);
            (u16::from_le_bytes(b) % p.q) as Zq
        })
        .collect()
}

fn cmd_ntt_report(name: &str, json: bool) -> Result<()> {
    let p = preset(name)?;
    let mut shapes: Vec<(u8, u8)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
    if !shapes.contains(&(p.ntt_alpha, p.ntt_beta)) {
        shapes.push((p.ntt_alpha, p.ntt_beta));
    }
    let mut rng = SeedStream::new(b"ntt-report");
    let f = random_canonical(p, &mut rng);
    let g = random_canonical(p, &mut rng);
    let mut objs = Vec::new();
    let mut plans = Vec::new();
    if !json {
        println!(
            "full polynomial multiplication in Z_{}[x]/(x^{} + 1), counted vs. predicted:",
            p.q, p.n
        );
        println!(
            "{:<12} {:>5} {:>5} {:>9} {:>9} {:>9} {:>9} {:>6} {:>7}",
            "plan", "alpha", "beta", "muls", "adds", "pred.mul", "pred.add", "match", "tables"
        );
    }
    for (alpha, beta) in shapes {
        let (label, variant) = variant_label(alpha, beta);
        let is_preset_plan = (alpha, beta) == (p.ntt_alpha, p.ntt_beta);
        match NttPlan::get(p.n, p.q, alpha, beta) {
            Ok(plan) => {
                let mut ctr = OpCounter::default();
                let _ = ntt::mul(&plan, &f, &g, &mut ctr);
                let (pm, pa) = complexity_formula(variant, p.n, alpha, beta);
                let ok = (ctr.muls, ctr.adds) == (pm, pa);
                if json {
                    objs.push(serde_json::json!({
                        "plan": label,
                        "alpha": alpha,
                        "beta": beta,
                        "preset_plan": is_preset_plan,
                        "measured": {"muls": ctr.muls, "adds": ctr.adds},
                        "predicted": {"muls": pm, "adds": pa},
                        "matches": ok,
                        "table_bytes": plan.table_bytes(),
                    }));
                } else {
                    println!(
                        "{:<12} {:>5} {:>5} {:>9} {:>9} {:>9} {:>9} {:>6} {:>7}",
                        format!("{label}{}", if is_preset_plan { "*" } else { "" }),
                        alpha,
                        beta,
                        ctr.muls,
                        ctr.adds,
                        pm,
                        pa,
                        if ok { "yes" } else { "NO" },
                        plan.table_bytes(),
                    );
                }
                plans.push(plan);
            }
            Err(e) => {
                if json {
                    objs.push(serde_json::json!({
                        "plan": label,
                        "alpha": alpha,
                        "beta": beta,
                        "preset_plan": is_preset_plan,
                        "unavailable": e.to_string(),
                    }));
                } else {
                    println!(
                        "{:<12} {:>5} {:>5} unavailable: {e}",
                        format!("{label}{}", if is_preset_plan { "*" } else { "" }),
                        alpha,
                        beta,
                    );
                }
            }
        }
    }
    let shared = plan_set_table_bytes(&plans);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "n": p.n,
                "q": p.q,
                "rows": objs,
                "shared_table_bytes": shared,
            }))
            .expect("serialize")
        );
    } else {
        println!("(* = plan used by this preset; tables shared across plans: {shared} bytes)");
    }
    Ok(())
}

fn median_ns<F: FnMut()>(iters: usize, mut f: F) -> u128 {
    let mut samples: Vec<u128> = Vec::with_capacity(iters);
    for _ in 0..iters {
        let t0 = Instant::now();
        f();
        samples.push(t0.elapsed().as_nanos());
    }
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn cmd_bench(name: &str, count: usize, json: bool) -> Result<()> {
    let p = preset(name)?;
    let iters = count.max(1000);
    let mut rng = SeedStream::new(b"bench");
    let (pk, sk) = kem::kem_keygen(p, &mut rng)?;
    let (ct, _) = kem_encaps(p, &pk, &mut rng)?;
    let plan = NttPlan::for_params(p)?;
    let f = random_canonical(p, &mut rng);
    let g = random_canonical(p, &mut rng);

    let mut results: Vec<(&str, u128)> = Vec::new();
    {
        let mut r = SeedStream::new(b"bench-keygen");
        results.push((
            "keygen",
            median_ns(iters, || {
                let _ = kem::kem_keygen(p, &mut r).unwrap();
            }),
        ));
    }
    {
        let mut r = SeedStream::new(b"bench-encaps");
        results.push((
            "encaps",
            median_ns(iters, || {
                let _ = kem_encaps(p, &pk, &mut r).unwrap();
            }),
        ));
    }
    results.push((
        "decaps",
        median_ns(iters, || {
            let _ = kem_decaps(p, &sk, &ct).unwrap();
        }),
    ));
    results.push((
        "ntt",
        median_ns(iters, || {
            let mut ctr = OpCounter::default();
            let _ = ntt::ntt(&plan, &f, &mut ctr);
        }),
    ));
    results.push((
        "poly-mul",
        median_ns(iters, || {
            let mut ctr = OpCounter::default();
            let _ = ntt::mul(&plan, &f, &g, &mut ctr);
        }),
    ));

    if json {
        let obj: serde_json::Map<String, serde_json::Value> = results
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(*v as u64)))
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "preset": p.name,
                "iterations": iters,
                "median_ns": obj,
            }))
            .expect("serialize")
        );
    } else {
        println!("{} ({iters} iterations, median wall-clock):", p.name);
        for (label, ns) in results {
            println!("  {label:<9} {ns:>10} ns");
        }
    }
    Ok(())
}
