//! Python bindings: `import gntt`.
//!
//! Polynomials cross the boundary as lists of ints. Domain errors raise
//! `ValueError`.

use gntt_core::bench::{self, ParamSuite, ReportFormat};
use gntt_core::{modarith, EngineKind, NttEngine, NttVector, Polynomial};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(name: &str) -> PyResult<EngineKind> {
    name.parse().map_err(value_err)
}

fn to_residues(values: &[u64]) -> PyResult<Vec<u32>> {
    values
        .iter()
        .map(|&v| {
            u32::try_from(v)
                .map_err(|_| value_err(format!("coefficient {v} does not fit a residue")))
        })
        .collect()
}

/// Validated ring parameters (q, n) with psi, psi^-1 and n^-1.
#[pyclass(name = "NttParams", frozen, eq, hash, from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PyNttParams(modarith::NttParams);

#[pymethods]
impl PyNttParams {
    #[new]
    fn new(q: u64, n: u64) -> PyResult<Self> {
        modarith::NttParams::new(q, n).map(Self).map_err(value_err)
    }
    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }
    #[getter]
    fn psi(&self) -> u32 {
        self.0.psi()
    }
    #[getter]
    fn psi_inv(&self) -> u32 {
        self.0.psi_inv()
    }
    #[getter]
    fn n_inv(&self) -> u32 {
        self.0.n_inv()
    }
    fn __repr__(&self) -> String {
        format!(
            "NttParams(q={}, n={}, psi={})",
            self.0.q(),
            self.0.n(),
            self.0.psi()
        )
    }
}

impl PyNttParams {
    fn poly(&self, coeffs: Vec<u64>) -> PyResult<Polynomial> {
        Polynomial::new(to_residues(&coeffs)?, self.0).map_err(value_err)
    }
}

/// A transform engine with its precomputed tables.
#[pyclass(name = "Engine", frozen)]
pub struct PyEngine(gntt_core::Engine);

#[pymethods]
impl PyEngine {
    #[new]
    fn new(kind: &str, q: u64, n: u64) -> PyResult<Self> {
        gntt_core::make_engine_for(parse_kind(kind)?, q, n)
            .map(Self)
            .map_err(value_err)
    }
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().name()
    }
    #[getter]
    fn params(&self) -> PyNttParams {
        PyNttParams(*self.0.params())
    }
    #[getter]
    fn precompute_s(&self) -> f64 {
        self.0.precompute_time().as_secs_f64()
    }
    #[getter]
    fn accounted_bytes(&self) -> u64 {
        self.0.accounted_bytes()
    }
    fn forward(&self, py: Python<'_>, a: Vec<u64>) -> PyResult<Vec<u32>> {
        let a = PyNttParams(*self.0.params()).poly(a)?;
        py.detach(|| self.0.forward(&a))
            .map(NttVector::into_values)
            .map_err(value_err)
    }
    fn inverse(&self, py: Python<'_>, a_hat: Vec<u64>) -> PyResult<Vec<u32>> {
        let a_hat = NttVector::new(to_residues(&a_hat)?, *self.0.params()).map_err(value_err)?;
        py.detach(|| self.0.inverse(&a_hat))
            .map(Polynomial::into_coeffs)
            .map_err(value_err)
    }
    fn polymul(&self, py: Python<'_>, a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u32>> {
        let p = PyNttParams(*self.0.params());
        let (a, b) = (p.poly(a)?, p.poly(b)?);
        py.detach(|| self.0.polymul(&a, &b))
            .map(Polynomial::into_coeffs)
            .map_err(value_err)
    }
    fn __repr__(&self) -> String {
        format!(
            "Engine({:?}, q={}, n={})",
            self.0.kind().name(),
            self.0.params().q(),
            self.0.params().n()
        )
    }
}

#[pyfunction]
fn make_engine(kind: &str, q: u64, n: u64) -> PyResult<PyEngine> {
    PyEngine::new(kind, q, n)
}

#[pyfunction]
fn engine_kinds() -> Vec<&'static str> {
    EngineKind::ALL.iter().map(|k| k.name()).collect()
}

#[pyfunction]
fn mod_pow(base: u32, exp: u64, q: u32) -> PyResult<u32> {
    if q < 2 || base >= q {
        return Err(value_err(format!("base {base} is not a residue mod {q}")));
    }
    Ok(modarith::mod_pow(base, exp, q))
}

#[pyfunction]
fn mod_inv(x: u32, q: u32) -> PyResult<u32> {
    if q < 2 || x >= q {
        return Err(value_err(format!("{x} is not a residue mod {q}")));
    }
    modarith::mod_inv(x, q).map_err(value_err)
}

#[pyfunction]
fn validate_params(q: u64, n: u64) -> PyResult<()> {
    modarith::validate_params(q, n).map_err(value_err)
}

#[pyfunction]
fn find_psi(q: u64, n: u64) -> PyResult<u32> {
    Ok(PyNttParams::new(q, n)?.0.psi())
}

#[pyfunction]
fn build_params(q: u64, n: u64) -> PyResult<PyNttParams> {
    PyNttParams::new(q, n)
}

#[pyfunction]
fn nwc_schoolbook(py: Python<'_>, a: Vec<u64>, b: Vec<u64>, q: u64) -> PyResult<Vec<u32>> {
    let params = PyNttParams::new(q, a.len() as u64)?;
    let (a, b) = (params.poly(a)?, params.poly(b)?);
    py.detach(|| gntt_core::nwc_schoolbook(&a, &b))
        .map(Polynomial::into_coeffs)
        .map_err(value_err)
}

#[pyfunction]
fn random_polynomial(q: u64, n: u64, seed: u64) -> PyResult<Vec<u32>> {
    let params = PyNttParams::new(q, n)?;
    Ok(gntt_core::random_polynomial(&params.0, seed).into_coeffs())
}

#[pyfunction]
fn speedup(t_ntt_ref: f64, t_intt_ref: f64, t_ntt: f64, t_intt: f64) -> PyResult<f64> {
    bench::speedup(t_ntt_ref, t_intt_ref, t_ntt, t_intt).map_err(value_err)
}

#[pyfunction]
fn score(s_l: f64, s_baseline: f64, m_baseline: f64, m_l: f64) -> PyResult<f64> {
    bench::score(s_l, s_baseline, m_baseline, m_l).map_err(value_err)
}

#[pyfunction]
fn memory_account(kind: &str, q: u64, n: u64) -> PyResult<u64> {
    Ok(bench::memory_account(
        parse_kind(kind)?,
        &PyNttParams::new(q, n)?.0,
    ))
}

/// Runs the benchmark and returns the report rendered as `format`
/// (`"json"`, `"csv"` or `"table"`).
#[pyfunction]
#[pyo3(signature = (suite = "pqc", engines = None, iters = bench::DEFAULT_ITERS, seed = 1, format = "json"))]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    engines: Option<Vec<String>>,
    iters: usize,
    seed: u64,
    format: &str,
) -> PyResult<String> {
    let suite: ParamSuite = suite.parse().map_err(value_err)?;
    let format: ReportFormat = format.parse().map_err(value_err)?;
    let kinds = match engines {
        Some(names) => names
            .iter()
            .map(|s| parse_kind(s))
            .collect::<PyResult<Vec<_>>>()?,
        None => EngineKind::ALL.to_vec(),
    };
    let report = py
        .detach(|| bench::run_suite(&suite, &kinds, iters, seed))
        .map_err(value_err)?;
    Ok(bench::emit_report(&report, format))
}

#[pymodule]
fn gntt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNttParams>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(make_engine, m)?)?;
    m.add_function(wrap_pyfunction!(engine_kinds, m)?)?;
    m.add_function(wrap_pyfunction!(mod_pow, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inv, m)?)?;
    m.add_function(wrap_pyfunction!(validate_params, m)?)?;
    m.add_function(wrap_pyfunction!(find_psi, m)?)?;
    m.add_function(wrap_pyfunction!(build_params, m)?)?;
    m.add_function(wrap_pyfunction!(nwc_schoolbook, m)?)?;
    m.add_function(wrap_pyfunction!(random_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(speedup, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(memory_account, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
