//! Python bindings for `arcmilnor`.
//!
//! Bad input raises `ValueError`. Computations that hit a limit (work bound,
//! blowup budget, a cover class with no polynomial form) raise
//! `arcmilnor.Aborted`, a `RuntimeError` subclass.

use std::collections::BTreeMap;

use arcmilnor::formulas::{self, ClassValue, CoverMode, FormulaError};
use arcmilnor::jets::{self, CountOptions, JetError};
use arcmilnor::poly::PolyError;
use arcmilnor::resolve::{ResolutionData, ResolveError};
use arcmilnor::verify::{self, VerifyError};
use num_bigint::BigInt;
use num_integer::Integer;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;

create_exception!(arcmilnor, Aborted, PyRuntimeError, "A computation stopped at a limit.");

struct Error(PyErr);

impl From<Error> for PyErr {
    fn from(e: Error) -> Self {
        e.0
    }
}

fn invalid(e: impl ToString) -> Error {
    Error(PyValueError::new_err(e.to_string()))
}

fn aborted(e: impl ToString) -> Error {
    Error(Aborted::new_err(e.to_string()))
}

impl From<PolyError> for Error {
    fn from(e: PolyError) -> Self {
        invalid(e)
    }
}

impl From<ResolveError> for Error {
    fn from(e: ResolveError) -> Self {
        match e {
            ResolveError::NonRationalCenter(_) | ResolveError::MaxBlowupsExceeded(_) | ResolveError::ChartCheck(_) => {
                aborted(e)
            }
            _ => invalid(e),
        }
    }
}

impl From<JetError> for Error {
    fn from(e: JetError) -> Self {
        match e {
            JetError::WorkBoundExceeded(_) | JetError::Overflow | JetError::Interpolation(_) => aborted(e),
            _ => invalid(e),
        }
    }
}

impl From<FormulaError> for Error {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::MissingCoverClass(_) => aborted(e),
            _ => invalid(e),
        }
    }
}

impl From<VerifyError> for Error {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Poly(e) => e.into(),
            VerifyError::Resolve(e) => e.into(),
            VerifyError::Jets(e) => e.into(),
            VerifyError::Formula(e) => e.into(),
            VerifyError::Precondition(m) => invalid(m),
        }
    }
}

type Result<T> = std::result::Result<T, Error>;

fn cover_mode(mode: &str) -> Result<CoverMode> {
    match mode {
        "chi" => Ok(CoverMode::Chi),
        "split" => Ok(CoverMode::Split),
        other => Err(invalid(format!("unknown mode {other:?}, expected \"chi\" or \"split\""))),
    }
}

fn count_options(work_bound: Option<u64>) -> CountOptions {
    work_bound.map_or_else(CountOptions::default, |work_bound| CountOptions { work_bound })
}

/// A polynomial germ at the origin with named variables.
#[pyclass(frozen, module = "arcmilnor")]
struct Germ {
    inner: verify::Germ,
}

#[pymethods]
impl Germ {
    #[new]
    #[pyo3(signature = (f, vars = vec!["x".to_string(), "y".to_string()]))]
    fn new(f: &str, vars: Vec<String>) -> Result<Self> {
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        Ok(Germ {
            inner: verify::Germ::parse(f, &names)?,
        })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars.clone()
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    #[pyo3(signature = (max_blowups = 64))]
    fn resolve(&self, max_blowups: usize) -> Result<Resolution> {
        let data = arcmilnor::resolve::resolve_germ(&self.inner.poly, max_blowups)?;
        Ok(Resolution { data })
    }

    /// `#X_{n,1}(F_q)` by searching truncated arcs.
    #[pyo3(signature = (n, q, work_bound = None))]
    fn count(&self, py: Python<'_>, n: u64, q: u64, work_bound: Option<u64>) -> Result<u128> {
        let opts = count_options(work_bound);
        Ok(py.detach(|| jets::count_points_xn1(&self.inner.poly, n, q, &opts))?)
    }

    /// Points of `X_{n,1}(F_q)` fixed by `t -> zeta t` with `zeta` of order `n / gcd(n, d)`.
    #[pyo3(signature = (n, d, q, work_bound = None))]
    fn count_fixed(&self, py: Python<'_>, n: u64, d: u64, q: u64, work_bound: Option<u64>) -> Result<u128> {
        let opts = count_options(work_bound);
        Ok(py.detach(|| jets::count_fixed_locus(&self.inner.poly, n, d, q, &opts))?)
    }

    fn __repr__(&self) -> String {
        format!("Germ({:?})", self.inner.label())
    }
}

/// Numerical data of an embedded resolution.
#[pyclass(frozen, module = "arcmilnor")]
struct Resolution {
    data: ResolutionData,
}

#[pymethods]
impl Resolution {
    #[staticmethod]
    fn from_json(text: &str) -> Result<Self> {
        Ok(Resolution {
            data: arcmilnor::resolve::load_resolution(text.as_bytes())?,
        })
    }

    fn to_json(&self) -> String {
        self.data.to_json()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.data.ambient_dim
    }

    /// `(id, N, nu, chi_open)` for each divisor.
    #[getter]
    fn divisors(&self) -> Vec<(u32, u64, u64, i64)> {
        self.data.divisors.iter().map(|d| (d.id, d.n, d.nu, d.chi_open)).collect()
    }

    fn lefschetz(&self, n: u64) -> i64 {
        formulas::lefschetz_acampo(&self.data, n)
    }

    fn lefschetz_table(&self, max_n: u64) -> BTreeMap<u64, i64> {
        formulas::lefschetz_table(&self.data, max_n).into_iter().collect()
    }

    /// The monodromy zeta function as `{i: e_i}` for `prod (1 - t^i)^(e_i)`.
    fn zeta(&self) -> BTreeMap<u64, i64> {
        formulas::zeta_monodromy(&self.data).exponents().into_iter().collect()
    }

    fn zeta_text(&self) -> String {
        formulas::zeta_monodromy(&self.data).to_string()
    }

    /// s-invariants over `1..=max_n`; defaults to one period.
    #[pyo3(signature = (max_n = None))]
    fn s_invariants(&self, max_n: Option<u64>) -> Result<BTreeMap<u64, i64>> {
        let period = self.data.divisors.iter().fold(1u64, |l, d| l.lcm(&d.n));
        let table = formulas::lefschetz_table(&self.data, max_n.unwrap_or(period));
        Ok(formulas::s_invariants(&table)?)
    }

    /// The class of `X_{n,1}`: an integer in "chi" mode, a polynomial in `L`
    /// rendered as text in "split" mode.
    #[pyo3(signature = (n, mode = "chi"))]
    fn class_xn1(&self, py: Python<'_>, n: u64, mode: &str) -> Result<Py<PyAny>> {
        Ok(match formulas::class_xn1(&self.data, n, cover_mode(mode)?)? {
            ClassValue::Euler(e) => e.into_pyobject(py).map_err(Error)?.into_any().unbind(),
            ClassValue::Class(c) => PyString::new(py, &c.to_string()).into_any().unbind(),
        })
    }

    fn euler_xn1(&self, n: u64) -> i64 {
        formulas::chi_xn1(&self.data, n)
    }

    fn equivariant_euler_xn1(&self, n: u64, d: u64) -> Result<i64> {
        Ok(formulas::equivariant_chi_xn1(&self.data, n, d)?)
    }

    /// `#X_{n,1}(F_q)` from the closed formula.
    fn count_formula(&self, n: u64, q: u64) -> Result<BigInt> {
        Ok(formulas::count_xn1_formula(&self.data, n, q)?)
    }

    #[pyo3(signature = (mode = "chi"))]
    fn series(&self, mode: &str) -> Result<String> {
        Ok(formulas::motivic_series_p(&self.data, cover_mode(mode)?)?.to_string())
    }

    #[pyo3(signature = (n, mode = "chi"))]
    fn series_coefficient(&self, n: u64, mode: &str) -> Result<String> {
        let p = formulas::motivic_series_p(&self.data, cover_mode(mode)?)?;
        Ok(p.coefficient(n).to_string())
    }

    #[pyo3(signature = (mode = "chi"))]
    fn volume(&self, mode: &str) -> Result<String> {
        Ok(match cover_mode(mode)? {
            CoverMode::Chi => formulas::motivic_volume_chi(&self.data).to_string(),
            CoverMode::Split => formulas::motivic_volume_s(&self.data)?.to_string(),
        })
    }

    fn degree_bound(&self, n: u64) -> u64 {
        jets::degree_bound(&self.data, n)
    }

    #[pyo3(signature = (n, d = None, bound = 31))]
    fn admissible_primes(&self, n: u64, d: Option<u64>, bound: u64) -> Vec<u64> {
        jets::admissible_primes(&self.data, n, d, bound)
    }

    fn __repr__(&self) -> String {
        format!("Resolution(ambient_dim={}, divisors={})", self.data.ambient_dim, self.data.divisors.len())
    }
}

/// Outcome of one verification.
#[pyclass(frozen, get_all, module = "arcmilnor")]
struct Report {
    theorem: String,
    germ: String,
    params: BTreeMap<String, String>,
    lhs: Vec<String>,
    rhs: Vec<String>,
    verdict: String,
    ms: u64,
    json: String,
}

impl From<verify::VerificationReport> for Report {
    fn from(r: verify::VerificationReport) -> Self {
        Report {
            theorem: r.theorem.tag().to_string(),
            verdict: if r.passed() { "pass" } else { "fail" }.to_string(),
            json: r.to_json(),
            germ: r.germ,
            params: r.params,
            lhs: r.lhs,
            rhs: r.rhs,
            ms: r.ms,
        }
    }
}

#[pymethods]
impl Report {
    #[getter]
    fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __bool__(&self) -> bool {
        self.passed()
    }

    fn __repr__(&self) -> String {
        format!("Report({} {} -> {})", self.theorem, self.germ, self.verdict)
    }
}

#[pyfunction]
#[pyo3(signature = (germ, n, primes = None, work_bound = None))]
fn verify_mt(py: Python<'_>, germ: &Germ, n: u64, primes: Option<Vec<u64>>, work_bound: Option<u64>) -> Result<Report> {
    let opts = count_options(work_bound);
    let r = py.detach(|| verify::verify_mt(&germ.inner, n, primes.as_deref(), &opts))?;
    Ok(r.into())
}

#[pyfunction]
#[pyo3(signature = (germ, n, primes, work_bound = None))]
fn verify_pt(py: Python<'_>, germ: &Germ, n: u64, primes: Vec<u64>, work_bound: Option<u64>) -> Result<Report> {
    let opts = count_options(work_bound);
    let r = py.detach(|| verify::verify_pt_counts(&germ.inner, n, &primes, &opts))?;
    Ok(r.into())
}

#[pyfunction]
#[pyo3(signature = (germ, n, d, primes = None, work_bound = None))]
fn verify_sec(
    py: Python<'_>,
    germ: &Germ,
    n: u64,
    d: u64,
    primes: Option<Vec<u64>>,
    work_bound: Option<u64>,
) -> Result<Report> {
    let opts = count_options(work_bound);
    let r = py.detach(|| verify::verify_sec(&germ.inner, n, d, primes.as_deref(), &opts))?;
    Ok(r.into())
}

/// Monomial germ `prod y_i^(N_i)` in `m` variables against the arc weights `k`.
#[pyfunction]
fn verify_triv(exponents: Vec<u64>, k: Vec<u64>, m: usize, n: u64, q: u64) -> Result<Report> {
    Ok(verify::verify_triv(&exponents, &k, m, n, q)?.into())
}

#[pymodule]
#[pyo3(name = "arcmilnor")]
pub fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("Aborted", m.py().get_type::<Aborted>())?;
    m.add_class::<Germ>()?;
    m.add_class::<Resolution>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(verify_mt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_pt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sec, m)?)?;
    m.add_function(wrap_pyfunction!(verify_triv, m)?)?;
    Ok(())
}
