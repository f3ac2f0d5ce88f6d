//! Python bindings: models, certificates, the characteristic polynomial and
//! the numerical oracle.

use blochcert_core::laurent::variable_names;
use blochcert_core::oracle::{self, CMatrix};
use blochcert_core::{Error, FloquetSystem, GaussianRational, OperatorModel, Preset};
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyString, PyTuple};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(m) => PyOSError::new_err(m),
        Error::NumericFailure(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(BigRational::from_integer(n.into()));
    }
    if let Ok(s) = obj.downcast::<PyString>() {
        return blochcert_core::model::parse_rational(s.to_str()?).map_err(PyValueError::new_err);
    }
    if let Ok(x) = obj.extract::<f64>() {
        return BigRational::from_float(x).ok_or_else(|| PyValueError::new_err(format!("{x} is not finite")));
    }
    Err(PyValueError::new_err(
        "expected an int, a float or a rational string such as \"-2/5\"",
    ))
}

/// `3`, `"1/2"`, `0.25`, `2+1j` or a pair `(re, im)`; floats are taken exactly.
fn gaussian(obj: &Bound<'_, PyAny>) -> PyResult<GaussianRational> {
    if let Ok(t) = obj.downcast::<PyTuple>() {
        if t.len() != 2 {
            return Err(PyValueError::new_err("complex entries are (re, im) pairs"));
        }
        return Ok(GaussianRational::new(
            rational(&t.get_item(0)?)?,
            rational(&t.get_item(1)?)?,
        ));
    }
    if let Ok(c) = obj.downcast::<PyComplex>() {
        let re = BigRational::from_float(c.real());
        let im = BigRational::from_float(c.imag());
        return match (re, im) {
            (Some(re), Some(im)) => Ok(GaussianRational::new(re, im)),
            _ => Err(PyValueError::new_err("complex entry is not finite")),
        };
    }
    Ok(GaussianRational::real(rational(obj)?))
}

fn lifted_names(q: &[u32]) -> Vec<String> {
    let z = variable_names(q.len(), "z", true);
    let w = variable_names(q.len(), "w", true);
    let mut names: Vec<String> = (0..q.len())
        .map(|j| if q[j] > 1 { w[j].clone() } else { z[j].clone() })
        .collect();
    names.push(z[q.len()].clone());
    names
}

/// A periodic operator `H = A + V` on `Z^d`.
#[pyclass(name = "Model", module = "blochcert", frozen)]
struct PyModel {
    inner: OperatorModel,
}

#[pymethods]
impl PyModel {
    /// Reads a `.toml` or `.json` model file.
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyModel {
            inner: OperatorModel::load(path).map_err(to_py)?,
        })
    }

    /// Parses model text, TOML or JSON.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: OperatorModel::from_text(text).map_err(to_py)?,
        })
    }

    /// Built-in lattice (`square`, `triangular`, `extended-harper`) with
    /// period `q`; the potential defaults to zero.
    #[staticmethod]
    #[pyo3(signature = (name, q, potential=None))]
    fn preset(name: &str, q: Vec<u32>, potential: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let preset = Preset::from_name(name, q.len()).map_err(to_py)?;
        let inner = match potential {
            None => OperatorModel::preset_free(preset, q),
            Some(v) => {
                let v = v.iter().map(gaussian).collect::<PyResult<Vec<_>>>()?;
                OperatorModel::from_preset(preset, q, v)
            }
        }
        .map_err(to_py)?;
        Ok(PyModel { inner })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn q(&self) -> Vec<u32> {
        self.inner.q().to_vec()
    }

    #[getter]
    fn cells(&self) -> usize {
        self.inner.cells()
    }

    #[getter]
    fn sha256(&self) -> String {
        self.inner.sha256()
    }

    #[getter]
    fn is_self_adjoint(&self) -> bool {
        self.inner.is_self_adjoint()
    }

    fn to_json(&self) -> String {
        self.inner.to_canonical_json()
    }

    /// The symbol `p(z)` as text.
    fn symbol(&self) -> PyResult<String> {
        let p = self.inner.symbol().map_err(to_py)?;
        Ok(p.to_compact(&variable_names(self.inner.d(), "z", false)))
    }

    /// Lowest-degree component `h` of the symbol.
    fn lowest_component(&self) -> PyResult<String> {
        let h = self
            .inner
            .symbol()
            .and_then(|p| p.lowest_component())
            .map_err(to_py)?;
        Ok(h.to_compact(&variable_names(self.inner.d(), "z", false)))
    }

    fn gamma_profile(&self) -> PyResult<Vec<u32>> {
        self.inner.symbol().and_then(|p| p.gamma_profile()).map_err(to_py)
    }

    /// `det(D(z) + B - lambda I)` in `z` and `lam`.
    #[pyo3(signature = (budget=blochcert_core::floquet::DEFAULT_BUDGET))]
    fn char_poly(&self, budget: usize) -> PyResult<String> {
        let mut sys = FloquetSystem::new(&self.inner)
            .map_err(to_py)?
            .with_budget(budget);
        let p = sys.char_poly().map_err(to_py)?;
        Ok(p.to_compact(&variable_names(self.inner.d(), "z", true)))
    }

    /// The characteristic polynomial written in `w_j = z_j^q_j`.
    #[pyo3(signature = (budget=blochcert_core::floquet::DEFAULT_BUDGET))]
    fn lifted_char_poly(&self, budget: usize) -> PyResult<String> {
        let mut sys = FloquetSystem::new(&self.inner)
            .map_err(to_py)?
            .with_budget(budget);
        let p = sys.lift_char().map_err(to_py)?;
        Ok(p.to_compact(&lifted_names(self.inner.q())))
    }

    /// `D(z) + B` as a list of rows.
    fn floquet_matrix(&self, z: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(oracle::floquet_matrix_at(&self.inner, &z).map_err(to_py)?.rows())
    }

    /// Eigenvalues of `D(z) + B`, sorted by real then imaginary part.
    fn spectrum(&self, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        oracle::NumericFloquet::new(&self.inner)
            .and_then(|nf| nf.spectrum_at(&z))
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(d={}, q={:?}, sha256={}...)",
            self.inner.d(),
            self.inner.q(),
            &self.inner.sha256()[..12]
        )
    }
}

#[pyclass(name = "Certificate", module = "blochcert", frozen)]
struct PyCertificate {
    inner: blochcert_core::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.as_str()
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.verdict.is_certified()
    }

    #[getter]
    fn a1(&self) -> bool {
        self.inner.a1.pass
    }

    #[getter]
    fn a2(&self) -> bool {
        self.inner.a2.pass
    }

    #[getter]
    fn deg_h(&self) -> i64 {
        self.inner.a1.deg_h
    }

    /// `(n, n')` with coinciding twisted components, if (A2) fails.
    #[getter]
    fn witness(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        self.inner
            .a2
            .witness
            .as_ref()
            .map(|w| (w.n.clone(), w.n_prime.clone()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    fn __repr__(&self) -> String {
        format!("Certificate({})", self.inner.verdict.as_str())
    }
}

#[pyclass(name = "MonodromyReport", module = "blochcert", frozen)]
struct PyMonodromyReport {
    inner: oracle::MonodromyReport,
}

#[pymethods]
impl PyMonodromyReport {
    #[getter]
    fn verdict(&self) -> String {
        verdict_name(&self.inner)
    }

    /// Orbits of the sheets, 1-based.
    #[getter]
    fn orbits(&self) -> Vec<Vec<usize>> {
        self.inner.orbits.clone()
    }

    #[getter]
    fn permutations(&self) -> Vec<Vec<usize>> {
        self.inner.permutations.clone()
    }

    #[getter]
    fn loop_count(&self) -> usize {
        self.inner.loop_count
    }

    #[getter]
    fn base_eigenvalues(&self) -> Vec<Complex64> {
        self.inner
            .base_eigenvalues
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    fn __repr__(&self) -> String {
        format!(
            "MonodromyReport({}, orbits={:?})",
            verdict_name(&self.inner),
            self.inner.orbits
        )
    }
}

fn verdict_name(r: &oracle::MonodromyReport) -> String {
    match r.verdict {
        oracle::MonodromyVerdict::Transitive => "TRANSITIVE",
        oracle::MonodromyVerdict::IntransitiveStable => "INTRANSITIVE_STABLE",
        oracle::MonodromyVerdict::Inconclusive => "INCONCLUSIVE",
    }
    .to_string()
}

/// Checks the two sufficient conditions and returns the certificate.
#[pyfunction]
fn certify(model: &PyModel) -> PyResult<PyCertificate> {
    Ok(PyCertificate {
        inner: blochcert_core::certify(&model.inner).map_err(to_py)?,
    })
}

/// Tracks the eigenvalues around seeded random loops in `w`.
#[pyfunction]
#[pyo3(signature = (model, loops=32, seed=0))]
fn monodromy(model: &PyModel, loops: usize, seed: u64) -> PyResult<PyMonodromyReport> {
    Ok(PyMonodromyReport {
        inner: oracle::monodromy_run(&model.inner, loops, seed).map_err(to_py)?,
    })
}

/// Band structure along a piecewise-linear path in `k`; returns
/// `(rows, csv)` with rows `(t, k, eigenvalues)`.
#[pyfunction]
#[pyo3(signature = (model, path, samples=64))]
#[allow(clippy::type_complexity)]
fn bands(
    model: &PyModel,
    path: Vec<Vec<f64>>,
    samples: usize,
) -> PyResult<(Vec<(f64, Vec<f64>, Vec<Complex64>)>, String)> {
    let table = oracle::band_path(&model.inner, &path, samples).map_err(to_py)?;
    let csv = table.to_csv();
    Ok((
        table
            .rows
            .into_iter()
            .map(|r| (r.t, r.k, r.eigenvalues))
            .collect(),
        csv,
    ))
}

/// Grid points of `[0,1)^d` where some eigenvalue equals `lam`; returns
/// `(points, csv)` with points `(k, eigenvalue)`.
#[pyfunction]
#[pyo3(signature = (model, lam, grid=32, tol=oracle::DEFAULT_FERMI_TOL))]
#[allow(clippy::type_complexity)]
fn fermi(
    model: &PyModel,
    lam: Complex64,
    grid: usize,
    tol: f64,
) -> PyResult<(Vec<(Vec<f64>, Complex64)>, String)> {
    let slice = oracle::fermi_slice(&model.inner, lam, grid, tol).map_err(to_py)?;
    let csv = slice.to_csv();
    Ok((
        slice.points.into_iter().map(|p| (p.k, p.eigenvalue)).collect(),
        csv,
    ))
}

/// Eigenvalues of a square complex matrix (Hessenberg reduction and
/// shifted QR), sorted.
#[pyfunction]
fn eigenvalues(rows: Vec<Vec<Complex64>>) -> PyResult<Vec<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let mut eigs = oracle::eigenvalues(&CMatrix::from_rows(&rows)).map_err(to_py)?;
    oracle::sort_spectrum(&mut eigs);
    Ok(eigs)
}

#[pymodule]
fn blochcert(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyMonodromyReport>()?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(bands, m)?)?;
    m.add_function(wrap_pyfunction!(fermi, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
