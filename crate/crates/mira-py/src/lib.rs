//! Python bindings: key generation, signing, verification and the estimator.
//! Keys and signatures cross the boundary as `bytes` in the same encoding as
//! the CLI's files (before hex armoring).

use mira::estimator::CostReport;
use mira::{ParameterSet, PublicKey, SecretKey, Variant};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn value_error(e: mira::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(variant: &str, level: u8, published: bool) -> PyResult<ParameterSet> {
    let v: Variant = variant.parse().map_err(value_error)?;
    if published {
        ParameterSet::published(v, level)
    } else {
        ParameterSet::operational(v, level)
    }
    .map_err(value_error)
}

/// keygen(variant, level, seed) -> (pk, sk). The key pair is a deterministic
/// function of `seed`; pass fresh random bytes for real keys.
#[pyfunction]
fn keygen<'py>(
    py: Python<'py>,
    variant: &str,
    level: u8,
    seed: &[u8],
) -> PyResult<(Bound<'py, PyBytes>, Bound<'py, PyBytes>)> {
    let p = params(variant, level, false)?;
    let (pk, sk) = py
        .allow_threads(|| mira::keygen_optimized(&p, seed))
        .map_err(value_error)?;
    Ok((
        PyBytes::new_bound(py, &pk.to_bytes()),
        PyBytes::new_bound(py, &sk.to_bytes()),
    ))
}

/// sign(sk, msg, entropy=b"") -> signature bytes.
#[pyfunction]
#[pyo3(signature = (sk, msg, entropy = b"".as_slice()))]
fn sign<'py>(
    py: Python<'py>,
    sk: &[u8],
    msg: &[u8],
    entropy: &[u8],
) -> PyResult<Bound<'py, PyBytes>> {
    let sk = SecretKey::from_bytes(sk).map_err(value_error)?;
    let sig = py
        .allow_threads(|| {
            let (pk, _) = sk.expand()?;
            mira::sign(&sk, &pk, msg, entropy)
        })
        .map_err(value_error)?;
    Ok(PyBytes::new_bound(py, &sig))
}

/// verify(pk, msg, sig) -> bool. Raises ValueError on undecodable input.
#[pyfunction]
fn verify(py: Python<'_>, pk: &[u8], msg: &[u8], sig: &[u8]) -> PyResult<bool> {
    let pk = PublicKey::from_bytes(pk).map_err(value_error)?;
    py.allow_threads(|| mira::verify(&pk, msg, sig))
        .map_err(value_error)
}

/// estimate(variant, level) -> dict of the estimator's records for the
/// tabulated parameter set.
#[pyfunction]
fn estimate<'py>(py: Python<'py>, variant: &str, level: u8) -> PyResult<Bound<'py, PyDict>> {
    let p = params(variant, level, true)?;
    let out = PyDict::new_bound(py);
    for (k, v) in CostReport::new(&p).records() {
        out.set_item(k, v)?;
    }
    Ok(out)
}

/// signature_size(variant, level) -> exact byte length (additive only).
#[pyfunction]
fn signature_size(variant: &str, level: u8) -> PyResult<Option<usize>> {
    let p = params(variant, level, false)?;
    Ok((p.variant == Variant::Additive).then(|| mira::additive::signature_bytes(&p)))
}

#[pymodule]
fn mira_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(keygen, m)?)?;
    m.add_function(wrap_pyfunction!(sign, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(signature_size, m)?)?;
    Ok(())
}
