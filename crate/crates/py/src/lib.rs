//! Python bindings. Reports come back as plain dicts and lists; matrices
//! are `Matrix` objects or their bracketed literals.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use cuntz_core::cu::{check_cu_axioms, lambda_of_ring, FiniteMonoid, Range, Symbolic};
use cuntz_core::ring::{check_weakly_s_unital, SUnitalOptions};
use cuntz_core::seq::{
    idem_to_seq, is_compact_seq, parse_sequence, seq_leq, seq_sup, seq_to_idem, splitting_check, validate_seq,
    ColIdem, SeqElem,
};
use cuntz_core::shift::{self, CompactSearch, Monomial, ShiftBounds};
use cuntz_core::states::{state_polytope, Variant};
use cuntz_core::subequiv::{equivalent1, precsim1_with, Sub1Options};
use cuntz_core::uniserial::diagonalize_seeded;
use cuntz_core::verdict::DEFAULT_BUDGET;
use cuntz_core::wr::{build_v, build_w, TruncatedPoM, WOptions};
use cuntz_core::{Error, FiniteRing, Idem, Mat, RingSpec};

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) | Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn opts(budget: Option<u64>) -> Sub1Options {
    Sub1Options {
        budget: budget.unwrap_or(DEFAULT_BUDGET),
        ..Sub1Options::default()
    }
}

/// A finite ring from an inline spec such as `zmod4`, `gf3`,
/// `matrix(gf2,2)` or `product(gf2,gf3)`.
#[pyclass(frozen, skip_from_py_object, module = "cuntz")]
#[derive(Clone)]
struct Ring {
    inner: cuntz_core::Ring,
}

#[pymethods]
impl Ring {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec = RingSpec::parse(spec).map_err(err)?;
        Ok(Ring {
            inner: FiniteRing::construct(&spec).map_err(err)?,
        })
    }

    /// Ring from the key/value file form.
    #[staticmethod]
    fn from_file_text(text: &str) -> PyResult<Self> {
        let spec = RingSpec::parse_file(text).map_err(err)?;
        Ok(Ring {
            inner: FiniteRing::construct(&spec).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn is_unital(&self) -> bool {
        self.inner.is_unital()
    }

    fn file_text(&self) -> String {
        self.inner.spec().to_file_string()
    }

    fn matrix(&self, literal: &str) -> PyResult<Matrix> {
        Matrix::new(self, literal)
    }

    fn __repr__(&self) -> String {
        format!("Ring({:?})", self.inner.spec().to_string())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "cuntz")]
#[derive(Clone)]
struct Matrix {
    inner: Mat,
}

#[pymethods]
impl Matrix {
    #[new]
    fn new(ring: &Ring, literal: &str) -> PyResult<Self> {
        Ok(Matrix {
            inner: Mat::parse(&ring.inner, literal).map_err(err)?,
        })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    /// Entries as element ids, row by row.
    fn tolist(&self) -> Vec<Vec<u16>> {
        (0..self.inner.rows())
            .map(|i| (0..self.inner.cols()).map(|j| self.inner.get(i, j).0).collect())
            .collect()
    }

    fn is_idempotent(&self) -> bool {
        self.inner.is_idempotent()
    }

    fn __mul__(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    fn __add__(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &Matrix) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({})", self.inner)
    }
}

/// Decides `a ≼₁ b`; returns `verdict`, `certificate` and the witness
/// `(r, t)` with `a = r·b·t` when found.
#[pyfunction]
#[pyo3(signature = (a, b, budget=None))]
fn precsim(py: Python<'_>, a: &Matrix, b: &Matrix, budget: Option<u64>) -> PyResult<Py<PyAny>> {
    let d = precsim1_with(&a.inner, &b.inner, &opts(budget)).map_err(err)?;
    to_py(py, &d)
}

/// `a ∼₁ b` as `"true"`, `"false"` or `"unknown"`.
#[pyfunction]
#[pyo3(signature = (a, b, budget=None))]
fn equivalent(a: &Matrix, b: &Matrix, budget: Option<u64>) -> PyResult<String> {
    Ok(equivalent1(&a.inner, &b.inner, &opts(budget)).map_err(err)?.to_string())
}

/// Truncated `W(R)` of matrices up to `k_max × k_max`.
#[pyclass(frozen, module = "cuntz")]
struct W {
    inner: TruncatedPoM,
}

#[pymethods]
impl W {
    #[new]
    #[pyo3(signature = (ring, k_max, budget=None))]
    fn new(ring: &Ring, k_max: usize, budget: Option<u64>) -> PyResult<Self> {
        let o = WOptions {
            search: opts(budget),
            ..WOptions::default()
        };
        Ok(W {
            inner: build_w(&ring.inner, k_max, &o).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Canonical representatives, as literals.
    #[getter]
    fn classes(&self) -> Vec<String> {
        self.inner.classes.iter().map(|m| m.to_string()).collect()
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        self.inner.leq(i, j)
    }

    fn add(&self, i: usize, j: usize) -> Option<usize> {
        self.inner.add(i, j)
    }

    fn class_of(&self, m: &Matrix) -> Option<usize> {
        self.inner.class_of(&m.inner)
    }

    fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.incomparable_pairs()
    }

    fn is_chain(&self) -> bool {
        self.inner.is_chain()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner)
    }

    /// `V(R)` on the same truncation, with the comparison map `ι`.
    fn v(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &build_v(&self.inner, &Sub1Options::default()).map_err(err)?)
    }

    /// Interval completion of the truncation.
    fn lambda_model(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &lambda_of_ring(&self.inner))
    }

    /// O1–O4 evidence on the interval completion.
    fn check_cu(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &lambda_of_ring(&self.inner).check(&self.inner))
    }

    /// State polytope at the class of `[1]` (or `unit`); `variant` is
    /// `"dimension"` or `"sylvester"`.
    #[pyo3(signature = (unit=None, variant="dimension"))]
    fn states(&self, py: Python<'_>, unit: Option<usize>, variant: &str) -> PyResult<Py<PyAny>> {
        let u = unit
            .or(self.inner.unit)
            .ok_or_else(|| PyValueError::new_err("non-unital ring: give unit"))?;
        let v = match variant {
            "dimension" => Variant::Dimension,
            "sylvester" => Variant::Sylvester {
                w: &self.inner,
                sampling: Default::default(),
            },
            _ => return Err(PyValueError::new_err(format!("unknown variant {variant:?}"))),
        };
        let m = FiniteMonoid::from_truncated(&self.inner);
        to_py(py, &state_polytope(&m, u, &v).map_err(err)?)
    }
}

/// O1–O4 on a built-in symbolic monoid (`N`, `Nbar`, `Nbar^2`, `0inf`,
/// `nsd`, `lambda(N)`).
#[pyfunction]
#[pyo3(signature = (monoid, bound=2, slope=1))]
fn check_cu(py: Python<'_>, monoid: &str, bound: u64, slope: u64) -> PyResult<Py<PyAny>> {
    let s = Symbolic::parse(monoid).map_err(err)?;
    to_py(py, &check_cu_axioms(&s, &Range { bound, slope }))
}

/// State polytope of a symbolic monoid truncated at `bound`, at the point
/// labelled `unit`.
#[pyfunction]
#[pyo3(signature = (monoid, unit, bound=3))]
fn symbolic_states(py: Python<'_>, monoid: &str, unit: &str, bound: u64) -> PyResult<Py<PyAny>> {
    let m = Symbolic::parse(monoid).map_err(err)?.truncation(bound);
    let want: String = unit.chars().filter(|c| !c.is_whitespace()).collect();
    let u = m
        .labels
        .iter()
        .position(|l| *l == want)
        .ok_or_else(|| PyValueError::new_err(format!("{want} is not in the fragment")))?;
    to_py(py, &state_polytope(&m, u, &Variant::Dimension).map_err(err)?)
}

/// A stored sequence, parsed from `stages | witnesses | tail`.
#[pyclass(frozen, from_py_object, module = "cuntz")]
#[derive(Clone)]
struct Sequence {
    inner: SeqElem,
}

#[pymethods]
impl Sequence {
    #[new]
    #[pyo3(signature = (ring, literal, budget=None))]
    fn new(ring: &Ring, literal: &str, budget: Option<u64>) -> PyResult<Self> {
        Ok(Sequence {
            inner: parse_sequence(&ring.inner, literal, &opts(budget)).map_err(err)?,
        })
    }

    /// Sequence of a finite idempotent matrix.
    #[staticmethod]
    fn from_idempotent(e: &Matrix) -> PyResult<Self> {
        let idem = Idem::new(e.inner.clone()).map_err(err)?;
        Ok(Sequence {
            inner: idem_to_seq(&ColIdem::Finite(idem)).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_valid(&self) -> bool {
        validate_seq(&self.inner).verdict.is_true()
    }

    fn violations(&self) -> Vec<String> {
        validate_seq(&self.inner).violations
    }

    /// `self ≤ other` as a dict with `verdict` and `certificate`.
    fn leq(&self, py: Python<'_>, other: &Sequence) -> PyResult<Py<PyAny>> {
        to_py(py, &seq_leq(&self.inner, &other.inner, &Sub1Options::default()).map_err(err)?)
    }

    #[pyo3(signature = (extra=1))]
    fn to_idempotent(&self, py: Python<'_>, extra: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &seq_to_idem(&self.inner, extra).map_err(err)?)
    }

    #[pyo3(signature = (extra=1))]
    fn splitting(&self, py: Python<'_>, extra: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &splitting_check(&self.inner, extra).map_err(err)?)
    }

    #[pyo3(signature = (bound=2))]
    fn compactness(&self, py: Python<'_>, bound: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &is_compact_seq(&self.inner, bound, &Sub1Options::default()).map_err(err)?)
    }

    fn __str__(&self) -> String {
        self.inner.describe()
    }
}

/// Supremum of an increasing chain; `close` keeps the last member's tail.
#[pyfunction]
#[pyo3(signature = (chain, close=true))]
fn sequence_sup(chain: Vec<Sequence>, close: bool) -> PyResult<Sequence> {
    let members: Vec<SeqElem> = chain.into_iter().map(|s| s.inner).collect();
    Ok(Sequence {
        inner: seq_sup(&members, &[], close, &Sub1Options::default()).map_err(err)?,
    })
}

/// `U·A·V = D` over `ℤ/p^k`, with the elementary operations.
#[pyfunction]
#[pyo3(signature = (a, seed=None))]
fn diagonalize(py: Python<'_>, a: &Matrix, seed: Option<u64>) -> PyResult<Py<PyAny>> {
    let c = diagonalize_seeded(&a.inner, seed).map_err(err)?;
    c.verify().map_err(err)?;
    to_py(py, &c)
}

/// Weak s-unitality up to size `n`.
#[pyfunction]
#[pyo3(signature = (ring, n=2))]
fn weakly_s_unital(py: Python<'_>, ring: &Ring, n: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &check_weakly_s_unital(&ring.inner, n, &SUnitalOptions::default()).map_err(err)?)
}

/// Normal form of a word such as `x2 x0 x1`.
#[pyfunction]
fn normal_form(word: &str) -> PyResult<String> {
    let w = shift::parse_word(word).map_err(err)?;
    Ok(Monomial::from_word(&w).map_err(err)?.to_string())
}

/// Smallest variable index of a monomial.
#[pyfunction]
fn st(monomial: &str) -> PyResult<usize> {
    Ok(Monomial::parse(monomial).map_err(err)?.st())
}

/// Product of two polynomials under the given bounds.
#[pyfunction]
#[pyo3(signature = (p, q, vars=4, degree=6, field="gf2"))]
fn shift_mul(p: &str, q: &str, vars: usize, degree: usize, field: &str) -> PyResult<String> {
    let f = Ring::new(field)?;
    let b = ShiftBounds::new(&f.inner, vars, degree).map_err(err)?;
    let (p, q) = (b.parse(p).map_err(err)?, b.parse(q).map_err(err)?);
    Ok(p.mul(&q).map_err(err)?.to_string())
}

/// Nonzero solutions of `z = s·z²` (or `z = z²·s`) within bounds.
#[pyfunction]
#[pyo3(signature = (vars=3, degree=3, size=1, z_degree=None, mirrored=false, budget=1 << 22, field="gf2"))]
fn compact_search(
    py: Python<'_>,
    vars: usize,
    degree: usize,
    size: usize,
    z_degree: Option<usize>,
    mirrored: bool,
    budget: u64,
    field: &str,
) -> PyResult<Py<PyAny>> {
    let f = Ring::new(field)?;
    let search = CompactSearch {
        vars,
        degree,
        size,
        z_degree: z_degree.unwrap_or(degree),
        mirrored,
        budget,
    };
    let rep = py.detach(|| shift::search_compact_solutions(&f.inner, &search)).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
fn cuntz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Matrix>()?;
    m.add_class::<W>()?;
    m.add_class::<Sequence>()?;
    m.add_function(wrap_pyfunction!(precsim, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(check_cu, m)?)?;
    m.add_function(wrap_pyfunction!(symbolic_states, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_sup, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(weakly_s_unital, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(st, m)?)?;
    m.add_function(wrap_pyfunction!(shift_mul, m)?)?;
    m.add_function(wrap_pyfunction!(compact_search, m)?)?;
    Ok(())
}
