//! Python bindings: `nonarch.Field`, `nonarch.Element` and the calculus and
//! demo entry points. Rationals cross the boundary as `fractions.Fraction`.

use std::cmp::Ordering;

use nonarch::calculus::{self, LimitOutcome};
use nonarch::lab::{self, SequenceSpec};
use nonarch::order::FieldKind;
use nonarch::series::Precision;
use nonarch::syntax::parse_fn;
use nonarch::{parse_element, Element, Error, FieldContext, Rational};
use pyo3::basic::CompareOp;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(nonarch, NonarchError, PyValueError, "Error raised by the field library.");
create_exception!(nonarch, UnresolvedError, NonarchError, "The answer depends on terms beyond the cutoff.");

fn to_py(err: Error) -> PyErr {
    if err.is_unresolved() {
        UnresolvedError::new_err(err.to_string())
    } else {
        NonarchError::new_err(err.to_string())
    }
}

/// Accepts `int`, `Fraction` or `str`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    obj.str()?.to_str()?.parse().map_err(to_py)
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

fn precision(cutoff: Option<&Bound<'_, PyAny>>, terms: usize) -> PyResult<Precision> {
    let cutoff = match cutoff {
        Some(c) => rational(c)?,
        None => Rational::from(16),
    };
    if !cutoff.is_positive() || terms == 0 {
        return Err(NonarchError::new_err("cutoff and terms must be positive"));
    }
    Ok(Precision { cutoff, max_terms: terms })
}

/// A field context: `Field("levicivita", cutoff=16, terms=512)`.
#[pyclass(name = "Field", frozen)]
struct PyField {
    kind: FieldKind,
    prec: Precision,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (name, cutoff=None, terms=512))]
    fn new(name: &str, cutoff: Option<&Bound<'_, PyAny>>, terms: usize) -> PyResult<Self> {
        Ok(PyField {
            kind: name.parse().map_err(to_py)?,
            prec: precision(cutoff, terms)?,
        })
    }

    fn __call__(&self, text: &str) -> PyResult<PyElement> {
        self.parse(text)
    }

    fn parse(&self, text: &str) -> PyResult<PyElement> {
        let ctx = FieldContext::with_precision(self.kind, self.prec.clone());
        Ok(PyElement {
            inner: parse_element(text, &ctx).map_err(to_py)?,
            prec: self.prec.clone(),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.kind.name()
    }

    fn __repr__(&self) -> String {
        format!("Field({:?}, cutoff={}, terms={})", self.kind.name(), self.prec.cutoff, self.prec.max_terms)
    }
}

#[pyclass(name = "Element", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    inner: Element,
    prec: Precision,
}

impl PyElement {
    fn wrap(&self, inner: Element) -> PyElement {
        PyElement { inner, prec: self.prec.clone() }
    }

    /// Other operand as an element of the same field; plain rationals embed.
    fn operand(&self, other: &Bound<'_, PyAny>) -> PyResult<Element> {
        if let Ok(e) = other.cast::<PyElement>() {
            return Ok(e.get().inner.clone());
        }
        Ok(Element::from_rational(self.inner.field(), rational(other)?))
    }
}

#[pymethods]
impl PyElement {
    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.add(&self.operand(other)?).map_err(to_py)?))
    }

    fn __radd__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        self.__add__(other)
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.sub(&self.operand(other)?).map_err(to_py)?))
    }

    fn __rsub__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.operand(other)?.sub(&self.inner).map_err(to_py)?))
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.mul(&self.operand(other)?).map_err(to_py)?))
    }

    fn __rmul__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        self.__mul__(other)
    }

    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.div(&self.operand(other)?, &self.prec).map_err(to_py)?))
    }

    fn __rtruediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(self.wrap(self.operand(other)?.div(&self.inner, &self.prec).map_err(to_py)?))
    }

    fn __neg__(&self) -> PyElement {
        self.wrap(self.inner.neg())
    }

    fn __pow__(&self, exponent: &Bound<'_, PyAny>, _modulo: Option<&Bound<'_, PyAny>>) -> PyResult<PyElement> {
        let e = rational(exponent)?;
        Ok(self.wrap(self.inner.pow(&e, &self.prec).map_err(to_py)?))
    }

    fn __abs__(&self) -> PyResult<PyElement> {
        Ok(self.wrap(self.inner.abs().map_err(to_py)?))
    }

    fn __richcmp__(&self, other: &Bound<'_, PyAny>, op: CompareOp) -> PyResult<bool> {
        let ord = self.inner.compare(&self.operand(other)?).map_err(to_py)?;
        Ok(op.matches(ord))
    }

    /// -1, 0 or 1.
    fn sign(&self) -> PyResult<i32> {
        let s = self.inner.sign().map_err(to_py)?;
        Ok(match s.to_ordering() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        })
    }

    fn classify(&self) -> PyResult<String> {
        Ok(format!("{:?}", self.inner.classify().map_err(to_py)?))
    }

    fn st<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.st().map_err(to_py)?)
    }

    /// Fraction, or `None` for zero (valuation infinity).
    fn valuation<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        match self.inner.valuation().map_err(to_py)? {
            nonarch::ExtRational::Finite(v) => Ok(Some(fraction(py, &v)?)),
            nonarch::ExtRational::Infinity => Ok(None),
        }
    }

    /// `e^(-v)` as a float, display only.
    fn norm(&self) -> PyResult<f64> {
        Ok(self.inner.norm().map_err(to_py)?.display)
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().name()
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json(py, &self.inner.to_json())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?}, field={:?})", self.inner.to_string(), self.inner.field().name())
    }
}

fn fn_and_point(f: &str, at: &Bound<'_, PyAny>) -> PyResult<(calculus::FnExpr, Rational)> {
    Ok((parse_fn(f).map_err(to_py)?, rational(at)?))
}

/// `derivative("x^3", 2)` is `Fraction(12)`.
#[pyfunction]
#[pyo3(signature = (f, at, cutoff=None, terms=512))]
fn derivative<'py>(py: Python<'py>, f: &str, at: &Bound<'py, PyAny>, cutoff: Option<&Bound<'py, PyAny>>, terms: usize) -> PyResult<Bound<'py, PyAny>> {
    let (f, r) = fn_and_point(f, at)?;
    let d = calculus::derivative(&f, &r, &precision(cutoff, terms)?).map_err(to_py)?;
    fraction(py, &d)
}

/// The limit as a Fraction, or `None` when the tested perturbations disagree.
#[pyfunction]
fn limit<'py>(py: Python<'py>, f: &str, at: &Bound<'py, PyAny>) -> PyResult<Option<Bound<'py, PyAny>>> {
    let (f, r) = fn_and_point(f, at)?;
    match calculus::limit(&f, &r, &Precision::default()).map_err(to_py)? {
        LimitOutcome::Limit(v) => Ok(Some(fraction(py, &v)?)),
        LimitOutcome::NoLimit(_) => Ok(None),
        LimitOutcome::Unresolved(_) => Err(UnresolvedError::new_err("limit unresolved at the current cutoff")),
    }
}

#[pyfunction]
fn taylor<'py>(py: Python<'py>, f: &str, at: &Bound<'py, PyAny>, n: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let (f, r) = fn_and_point(f, at)?;
    let coeffs = calculus::taylor(&f, &r, n, &Precision::default()).map_err(to_py)?;
    coeffs.iter().map(|c| fraction(py, c)).collect()
}

/// Runs a demo by name and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (name, n=None, field="levicivita"))]
fn demo<'py>(py: Python<'py>, name: &str, n: Option<u64>, field: &str) -> PyResult<Bound<'py, PyAny>> {
    let kind: FieldKind = field.parse().map_err(to_py)?;
    let report = match name {
        "non-archimedean" => lab::demo_non_archimedean(kind, n.unwrap_or(1000)),
        "weierstrass" => lab::demo_weierstrass_failure(kind, n.unwrap_or(100)),
        "monotone" => lab::demo_monotone_failure(kind, n.unwrap_or(50)),
        "cauchy" => lab::demo_cauchy_completeness(n.unwrap_or(50)),
        "cantor" => lab::demo_cantor_gap(n.unwrap_or(12)),
        "frechet" => Ok(lab::demo_frechet()),
        other => return Err(NonarchError::new_err(format!("unknown demo {other:?}"))),
    }
    .map_err(to_py)?;
    json(py, &report.to_json())
}

/// "Less", "Greater", "Equal" or "Incomparable" modulo the Frechet filter.
#[pyfunction]
fn frechet_compare(a: &str, b: &str) -> PyResult<String> {
    let (a, b) = (SequenceSpec::parse(a).map_err(to_py)?, SequenceSpec::parse(b).map_err(to_py)?);
    Ok(format!("{:?}", lab::frechet_compare(&a, &b).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (field, cases=1000, seed=0))]
fn check_axioms<'py>(py: Python<'py>, field: &str, cases: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let kind: FieldKind = field.parse().map_err(to_py)?;
    json(py, &lab::check_axioms(kind, cases, seed, &Precision::default()).to_json())
}

#[pymodule]
#[pyo3(name = "nonarch")]
fn nonarch_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(derivative, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(taylor, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_compare, m)?)?;
    m.add_function(wrap_pyfunction!(check_axioms, m)?)?;
    m.add("NonarchError", m.py().get_type::<NonarchError>())?;
    m.add("UnresolvedError", m.py().get_type::<UnresolvedError>())?;
    Ok(())
}
