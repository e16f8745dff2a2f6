//! Python bindings for the `oskr` crate.
//!
//! Exposes the parameter-set table, the KEM operations (including the
//! double-ciphertext construction), the decryption-failure calculator and
//! the instrumented NTT engine. Build with `cargo build -p oskr-py
//! --release`; the produced `liboskr_py.so` imports as `oskr_py` once
//! placed on the Python path under that name (`python/smoke_test.py`
//! automates this).
//!
//! All byte inputs and outputs are Python `bytes`. Operations that consume
//! randomness accept an optional `seed`; when given, coins are drawn from a
//! SHAKE-256 stream of the seed exactly as the CLI does, making the call
//! deterministic.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use oskr::failure::{self, DecVariant};
use oskr::kem;
use oskr::modring::Zq;
use oskr::ntt::{self, NttPlan, NttVariant, OpCounter};
use oskr::params as prm;
use oskr::params::ParamSet;
use oskr::symmetric::SeedStream;

fn err(e: oskr::Error) -> PyErr {
    match e {
        oskr::Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn lookup(name: &str) -> PyResult<&'static ParamSet> {
    prm::preset(name).map_err(err)
}

fn stream(seed: Option<&[u8]>) -> SeedStream {
    match seed {
        Some(s) => SeedStream::new(s),
        None => {
            use rand::RngCore;
            let mut buf = [0u8; 64];
            rand::rngs::OsRng.fill_bytes(&mut buf);
            SeedStream::new(&buf)
        }
    }
}

/// Uniform canonical polynomial from a seed stream (rejection-free:
/// 16-bit little-endian draws reduced mod q, matching the CLI's generator
/// for reports and benches).
fn random_canonical(n: usize, q: u16, rng: &mut SeedStream) -> Vec<Zq> {
    let mut buf = vec![0u8; 2 * n];
    rng.fill(&mut buf);
    buf.chunks_exact(2)
        .map(|c| (u16::from_le_bytes([c[0], c[1]]) % q) as Zq)
        .collect()
}

/// Names of the nine instantiated parameter sets.
#[pyfunction]
fn presets() -> Vec<&'static str> {
    prm::PRESETS.iter().map(|p| p.name).collect()
}

/// Full description of one parameter set, including derived encoding sizes.
#[pyfunction]
fn params<'py>(py: Python<'py>, preset: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = lookup(preset)?;
    let d = PyDict::new(py);
    d.set_item("name", p.name)?;
    d.set_item("n", p.n)?;
    d.set_item("q", p.q)?;
    d.set_item("m", p.m)?;
    d.set_item("l", p.l)?;
    d.set_item("eta_s", p.eta_s)?;
    d.set_item("eta_e", p.eta_e)?;
    d.set_item("eta_keygen_e", p.eta_keygen_e)?;
    d.set_item("d_k", p.d_k)?;
    d.set_item("d_u", p.d_u)?;
    d.set_item("d_v", p.d_v)?;
    d.set_item("seed_bytes", p.seed_bytes)?;
    d.set_item("key_bytes", p.key_bytes)?;
    d.set_item("ntt_alpha", p.ntt_alpha)?;
    d.set_item("ntt_beta", p.ntt_beta)?;
    d.set_item("pk_bytes", p.pk_bytes())?;
    d.set_item("ct_bytes", p.ct_bytes())?;
    d.set_item("sk_bytes", p.sk_bytes())?;
    Ok(d)
}

/// KEM key generation. Returns `(pk, sk)`.
#[pyfunction]
#[pyo3(signature = (preset, seed=None))]
fn keygen<'py>(
    py: Python<'py>,
    preset: &str,
    seed: Option<&[u8]>,
) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyBytes>)> {
    let p = lookup(preset)?;
    let (pk, sk) = kem::kem_keygen(p, &mut stream(seed)).map_err(err)?;
    Ok((PyBytes::new(py, &pk), PyBytes::new(py, &sk)))
}

/// Encapsulation against `pk`. Returns `(ct, shared_secret)`.
#[pyfunction]
#[pyo3(signature = (preset, pk, seed=None))]
fn encaps<'py>(
    py: Python<'py>,
    preset: &str,
    pk: &[u8],
    seed: Option<&[u8]>,
) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyBytes>)> {
    let p = lookup(preset)?;
    let (ct, ss) = kem::encaps(p, pk, &mut stream(seed)).map_err(err)?;
    Ok((PyBytes::new(py, &ct), PyBytes::new(py, &ss)))
}

/// Decapsulation with implicit rejection. Returns the shared secret.
#[pyfunction]
fn decaps<'py>(
    py: Python<'py>,
    preset: &str,
    sk: &[u8],
    ct: &[u8],
) -> PyResult<Bound<'py, PyBytes>> {
    let p = lookup(preset)?;
    let ss = kem::decaps(p, sk, ct).map_err(err)?;
    Ok(PyBytes::new(py, &ss))
}

/// Double-session encapsulation (two independent ciphertexts under one
/// public key; the 512-bit-secret `approach1` construction). Returns
/// `(ct_a ‖ ct_b, K_a ‖ K_b)`.
#[pyfunction]
#[pyo3(signature = (preset, pk, seed=None))]
fn encaps_approach1<'py>(
    py: Python<'py>,
    preset: &str,
    pk: &[u8],
    seed: Option<&[u8]>,
) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyBytes>)> {
    let p = lookup(preset)?;
    let (ct, ss) = kem::encaps_approach1(p, pk, &mut stream(seed)).map_err(err)?;
    Ok((PyBytes::new(py, &ct), PyBytes::new(py, &ss)))
}

/// Decapsulates a double-session ciphertext.
#[pyfunction]
fn decaps_approach1<'py>(
    py: Python<'py>,
    preset: &str,
    sk: &[u8],
    ct: &[u8],
) -> PyResult<Bound<'py, PyBytes>> {
    let p = lookup(preset)?;
    let ss = kem::decaps_approach1(p, sk, ct).map_err(err)?;
    Ok(PyBytes::new(py, &ss))
}

/// `log2` of the decryption-failure probability. `variant` selects the
/// decoder (`"akcn"` single-rounding or `"original"` two-rounding);
/// `paired=True` accounts two independent sessions, as used by the
/// double-ciphertext construction's published figure.
#[pyfunction]
#[pyo3(signature = (preset, variant="akcn", paired=false))]
fn delta_log2(preset: &str, variant: &str, paired: bool) -> PyResult<f64> {
    let p = lookup(preset)?;
    let v: DecVariant = variant.parse().map_err(err)?;
    if paired {
        failure::delta_log2_doubled(p, v).map_err(err)
    } else {
        failure::delta_log2(p, v).map_err(err)
    }
}

/// Measured `(muls, adds)` of one full multiplication in
/// `Z_q[x]/(x^n + 1)` under the `(alpha, beta)` plan, on seeded uniform
/// inputs. Matches `complexity_formula` for every supported shape.
#[pyfunction]
fn ntt_counts(n: usize, q: u16, alpha: u8, beta: u8) -> PyResult<(u64, u64)> {
    let plan = NttPlan::get(n, q, alpha, beta).map_err(err)?;
    let mut rng = SeedStream::new(b"oskr-py ntt-counts");
    let f = random_canonical(n, q, &mut rng);
    let g = random_canonical(n, q, &mut rng);
    let mut ctr = OpCounter::default();
    let _ = ntt::mul(&plan, &f, &g, &mut ctr);
    Ok(ctr.as_pair())
}

/// Closed-form `(T_m, T_a)` prediction for one full multiplication.
/// `variant` is one of `"classic"`, `"truncated"` (`"t"`),
/// `"part-split"` (`"pt"`), `"hybrid"` (`"h"`).
#[pyfunction]
#[pyo3(signature = (n, alpha, beta, variant="hybrid"))]
fn complexity_formula(n: usize, alpha: u8, beta: u8, variant: &str) -> PyResult<(u64, u64)> {
    let v: NttVariant = variant.parse().map_err(err)?;
    Ok(ntt::complexity_formula(v, n, alpha, beta))
}

/// Twiddle-table footprint in bytes of the `(n, q, alpha, beta)` plan.
#[pyfunction]
fn table_bytes(n: usize, q: u16, alpha: u8, beta: u8) -> PyResult<usize> {
    let plan = NttPlan::get(n, q, alpha, beta).map_err(err)?;
    Ok(plan.table_bytes())
}

#[pymodule]
fn oskr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(params, m)?)?;
    m.add_function(wrap_pyfunction!(keygen, m)?)?;
    m.add_function(wrap_pyfunction!(encaps, m)?)?;
    m.add_function(wrap_pyfunction!(decaps, m)?)?;
    m.add_function(wrap_pyfunction!(encaps_approach1, m)?)?;
    m.add_function(wrap_pyfunction!(decaps_approach1, m)?)?;
    m.add_function(wrap_pyfunction!(delta_log2, m)?)?;
    m.add_function(wrap_pyfunction!(ntt_counts, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_formula, m)?)?;
    m.add_function(wrap_pyfunction!(table_bytes, m)?)?;
    Ok(())
}
