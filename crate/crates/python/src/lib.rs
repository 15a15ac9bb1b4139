//! Python bindings. Integers cross as Python `int`, rationals as
//! `fractions.Fraction`.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use umbral_lab::identities::{self, IdentityId};
use umbral_lab::{lacasse, polynomial, umbra};
use umbral_lab::{Int, Rat, Sequences};

fn value_error(e: umbral_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

/// Accepts `int`, `fractions.Fraction`, or anything with integral
/// `numerator` and `denominator`.
fn from_number(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    let num: BigInt = x.getattr("numerator")?.extract()?;
    let den: BigInt = x.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Runs `f` against the global cache, or a forked copy with `D_k + 1`.
fn with_sequences<T>(inject_fault: Option<usize>, f: impl FnOnce(&Sequences) -> T) -> T {
    match inject_fault {
        Some(k) => {
            let mut seq = Sequences::global().fork();
            seq.inject_derangement_fault(k, Int::from(1));
            f(&seq)
        }
        None => f(Sequences::global()),
    }
}

/// Dense polynomial with integer coefficients, lowest degree first.
#[pyclass(name = "IntPoly", module = "pyumbral", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyIntPoly(polynomial::IntPoly);

#[pymethods]
impl PyIntPoly {
    #[new]
    fn new(coeffs: Vec<BigInt>) -> Self {
        Self(polynomial::IntPoly::from_coeffs(coeffs))
    }

    #[getter]
    fn coeffs(&self) -> Vec<BigInt> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> isize {
        self.0.degree()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __call__<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.0.eval(&from_number(x)?))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("IntPoly({})", self.0)
    }
}

/// Result of checking one identity at one `n`.
#[pyclass(name = "VerifyReport", module = "pyumbral", frozen, get_all)]
struct PyVerifyReport {
    identity: String,
    n: usize,
    passed: bool,
    /// `(point, lhs, rhs)` for each recorded failure.
    witnesses: Vec<(String, BigInt, BigInt)>,
    json: String,
}

#[pymethods]
impl PyVerifyReport {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __repr__(&self) -> String {
        format!(
            "VerifyReport(identity={:?}, n={}, passed={}, witnesses={})",
            self.identity,
            self.n,
            self.passed,
            self.witnesses.len()
        )
    }
}

impl From<identities::VerifyReport> for PyVerifyReport {
    fn from(r: identities::VerifyReport) -> Self {
        Self {
            identity: r.identity.tag().to_string(),
            n: r.n,
            passed: r.passed,
            json: r.to_json(),
            witnesses: r
                .witnesses
                .into_iter()
                .map(|w| (w.point, w.lhs, w.rhs))
                .collect(),
        }
    }
}

#[pyfunction]
fn derangement(n: usize) -> BigInt {
    Sequences::global().derangement(n)
}

#[pyfunction]
fn factorial(n: usize) -> BigInt {
    Sequences::global().factorial(n)
}

#[pyfunction]
fn binomial(n: usize, k: i64) -> BigInt {
    Sequences::global().binomial(n, k)
}

/// `(x + c)^m`.
#[pyfunction]
fn binomial_power(c: BigInt, m: usize) -> PyIntPoly {
    PyIntPoly(polynomial::binomial_power(Sequences::global(), &c, m))
}

#[pyfunction]
fn derangement_poly(n: usize) -> PyIntPoly {
    PyIntPoly(umbra::derangement_poly(Sequences::global(), n))
}

#[pyfunction]
fn derangement_poly_eval<'py>(py: Python<'py>, n: usize, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let value = umbra::derangement_poly_eval(Sequences::global(), n, &from_number(x)?);
    to_fraction(py, &value)
}

/// Applies `D^i -> D_i` to a polynomial read in the umbra `D`.
#[pyfunction]
fn umbral_eval(p: &PyIntPoly) -> BigInt {
    umbra::umbral_eval(Sequences::global(), &p.0.clone().into())
}

/// Expands `p(D + s)` as a polynomial in `D`.
#[pyfunction]
fn substitute_shift(p: &PyIntPoly, s: BigInt) -> PyIntPoly {
    PyIntPoly(umbra::substitute_shift(&p.0, &s).into_poly())
}

#[pyfunction]
fn xi<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_fraction(py, &lacasse::xi(Sequences::global(), n).map_err(value_error)?)
}

#[pyfunction]
fn xi2<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_fraction(py, &lacasse::xi2(Sequences::global(), n).map_err(value_error)?)
}

#[pyfunction]
fn xi_scaled(n: usize) -> PyResult<BigInt> {
    lacasse::xi_scaled(Sequences::global(), n).map_err(value_error)
}

#[pyfunction]
fn xi2_scaled(n: usize) -> PyResult<BigInt> {
    lacasse::xi2_scaled(Sequences::global(), n).map_err(value_error)
}

#[pyfunction]
fn xi2_via_derangement_scaled(n: usize) -> PyResult<BigInt> {
    lacasse::xi2_via_derangement_scaled(Sequences::global(), n).map_err(value_error)
}

#[pyfunction]
fn xi2_closed_scaled(n: usize) -> PyResult<BigInt> {
    lacasse::xi2_closed_scaled(Sequences::global(), n).map_err(value_error)
}

/// `identity` is a short name (`eq22`, `umbral`, `chain`, ...) or a tag
/// (`EQ22`, `UMBRAL_PROPERTY`, ...).
#[pyfunction]
#[pyo3(signature = (identity, n, inject_fault=None))]
fn verify(py: Python<'_>, identity: &str, n: usize, inject_fault: Option<usize>) -> PyResult<PyVerifyReport> {
    let id: IdentityId = identity.parse().map_err(value_error)?;
    if n < id.min_n() {
        return Err(PyValueError::new_err(format!("{id} is defined for n >= {}", id.min_n())));
    }
    let report = py.detach(|| with_sequences(inject_fault, |seq| identities::verify(seq, id, n)));
    Ok(report.map_err(value_error)?.into())
}

/// The six derivation lines as `(label, value)` pairs.
#[pyfunction]
fn replay_proof(n: usize) -> PyResult<Vec<(String, BigInt)>> {
    let trace = identities::replay_proof(Sequences::global(), n).map_err(value_error)?;
    Ok(trace
        .lines
        .into_iter()
        .map(|line| (line.label.to_string(), line.value))
        .collect())
}

#[pymodule]
fn pyumbral(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIntPoly>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_function(wrap_pyfunction!(derangement, m)?)?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_power, m)?)?;
    m.add_function(wrap_pyfunction!(derangement_poly, m)?)?;
    m.add_function(wrap_pyfunction!(derangement_poly_eval, m)?)?;
    m.add_function(wrap_pyfunction!(umbral_eval, m)?)?;
    m.add_function(wrap_pyfunction!(substitute_shift, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(xi2, m)?)?;
    m.add_function(wrap_pyfunction!(xi_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(xi2_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(xi2_via_derangement_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(xi2_closed_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(replay_proof, m)?)?;
    Ok(())
}
