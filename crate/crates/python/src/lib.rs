//! Python bindings for the characteristic-two involution toolkit.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use charkummer::involution::{InvolutionData, PointCount};
use charkummer::kummer::{run_pipeline, ScenarioCase};
use charkummer::lattice::{parse_graph, CurveConfig};
use charkummer::localring::tjurina_number;
use charkummer::rdp::RdpDatabase;
use charkummer::serre::{sym_depth_report, SymDepthQuery};
use charkummer::verify::{run_criterion, VerifyOptions, DEFAULT_PRECISION};
use charkummer::{GaloisField, Length, TruncatedSeries};

fn err(e: charkummer::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn finite(l: Length) -> Option<usize> {
    l.finite()
}

/// A finite field GF(p^k), written "2" or "2^4".
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: GaloisField,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (spec = "2"))]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyField {
            inner: GaloisField::parse(spec).map_err(err)?,
        })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    /// Elements in the `g^j` notation.
    fn elements(&self) -> Vec<String> {
        self.inner
            .elements()
            .map(|e| self.inner.format(e))
            .collect()
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (
            self.inner.parse_elem(a).map_err(err)?,
            self.inner.parse_elem(b).map_err(err)?,
        );
        Ok(self.inner.format(self.inner.mul(a, b)))
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let (a, b) = (
            self.inner.parse_elem(a).map_err(err)?,
            self.inner.parse_elem(b).map_err(err)?,
        );
        Ok(self.inner.format(self.inner.add(a, b)))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.order())
    }
}

/// A polynomial or truncated power series.
#[pyclass(name = "Series", frozen)]
struct PySeries {
    inner: TruncatedSeries,
}

#[pymethods]
impl PySeries {
    #[new]
    #[pyo3(signature = (text, vars, field = None))]
    fn new(text: &str, vars: Vec<String>, field: Option<PyRef<'_, PyField>>) -> PyResult<Self> {
        let f = match field {
            Some(f) => f.inner.clone(),
            None => GaloisField::binary(1).map_err(err)?,
        };
        let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
        Ok(PySeries {
            inner: TruncatedSeries::parse(text, &f, &vars).map_err(err)?,
        })
    }

    fn __add__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.add(&other.inner).map_err(err)?,
        })
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    fn __pow__(&self, e: u32, _modulo: Option<Bound<'_, PyAny>>) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.pow(e).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    /// Order of vanishing, or None for zero.
    fn order(&self) -> Option<u32> {
        self.inner.order()
    }

    /// Tjurina number, or None when it is not finite at this precision.
    #[pyo3(signature = (precision = DEFAULT_PRECISION))]
    fn tjurina(&self, precision: u32) -> PyResult<Option<usize>> {
        Ok(finite(tjurina_number(&self.inner, precision).map_err(err)?))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series({:?})", self.inner.to_string())
    }
}

/// Artin's involution x -> x + a*u, y -> y + b*v given by the pair (a, b).
#[pyclass(name = "Involution", frozen)]
struct PyInvolution {
    inner: InvolutionData,
}

#[pymethods]
impl PyInvolution {
    #[new]
    #[pyo3(signature = (a, b, field = "2"))]
    fn new(a: &str, b: &str, field: &str) -> PyResult<Self> {
        let f = GaloisField::parse(field).map_err(err)?;
        Ok(PyInvolution {
            inner: InvolutionData::parse(a, b, &f).map_err(err)?,
        })
    }

    /// Equation of the quotient in x, y, z.
    fn equation(&self) -> PyResult<String> {
        Ok(self.inner.invariant_equation().map_err(err)?.to_string())
    }

    /// Number of singular points on the exceptional curve, or None when
    /// the blow-up is not normal.
    fn singular_points(&self) -> Option<usize> {
        match self.inner.count_singular_chart_points() {
            PointCount::Finite(n) => Some(n),
            PointCount::NonNormal => None,
        }
    }

    #[pyo3(signature = (precision = DEFAULT_PRECISION))]
    fn verify_identity(&self, precision: u32) -> PyResult<bool> {
        Ok(self
            .inner
            .verify_invariant_identity(precision)
            .map_err(err)?
            .passes())
    }

    #[pyo3(signature = (precision = DEFAULT_PRECISION))]
    fn has_embedded_component(&self, precision: u32) -> PyResult<bool> {
        Ok(self
            .inner
            .has_embedded_component(precision)
            .map_err(err)?
            .embedded)
    }
}

/// A configuration of exceptional curves.
#[pyclass(name = "CurveConfig", frozen)]
struct PyCurveConfig {
    inner: CurveConfig,
}

#[pymethods]
impl PyCurveConfig {
    /// Parses the `curve` / `edge` / `cycle` graph format.
    #[staticmethod]
    fn from_graph(text: &str) -> PyResult<Self> {
        Ok(PyCurveConfig {
            inner: parse_graph(text).map_err(err)?.config,
        })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix()
    }

    fn fundamental_cycle(&self) -> PyResult<Vec<i64>> {
        Ok(self.inner.fundamental_cycle().map_err(err)?.0)
    }

    /// Canonical cycle coefficients as strings such as "-1/2".
    fn canonical_cycle(&self) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .canonical_cycle()
            .map_err(err)?
            .0
            .iter()
            .map(|q| q.to_string())
            .collect())
    }

    fn dynkin(&self) -> Option<String> {
        self.inner.dynkin_recognize().map(|t| t.to_string())
    }
}

/// Tjurina number of a polynomial over GF(2^k).
#[pyfunction]
#[pyo3(signature = (poly, vars = "x,y,z", field = "2", precision = DEFAULT_PRECISION))]
fn tjurina(poly: &str, vars: &str, field: &str, precision: u32) -> PyResult<Option<usize>> {
    let f = GaloisField::parse(field).map_err(err)?;
    let vars: Vec<&str> = vars.split(',').map(str::trim).collect();
    let s = TruncatedSeries::parse(poly, &f, &vars).map_err(err)?;
    Ok(finite(tjurina_number(&s, precision).map_err(err)?))
}

/// Depth data for Sym^n of a g-fold in characteristic p.
#[pyfunction]
fn sym_depth(g: u32, n: u32, p: u32) -> PyResult<(Option<u32>, u32, Option<u32>, String)> {
    let r = sym_depth_report(SymDepthQuery::new(g, n, p).map_err(err)?).map_err(err)?;
    Ok((
        r.depth,
        r.guaranteed_level,
        r.failing_level,
        r.cohen_macaulay.to_string(),
    ))
}

/// Runs a scenario and returns its assertion records as
/// `(id, passed, expected, got)`.
#[pyfunction]
#[pyo3(signature = (p_rank, a_number = None, q = None, precision = DEFAULT_PRECISION))]
fn scenario(
    p_rank: u8,
    a_number: Option<u8>,
    q: Option<&str>,
    precision: u32,
) -> PyResult<Vec<(String, bool, String, String)>> {
    let f = charkummer::kummer::gf16();
    let q = q.map(|q| f.parse_elem(q)).transpose().map_err(err)?;
    let case = ScenarioCase::new(p_rank, a_number, q).map_err(err)?;
    let db = RdpDatabase::builtin().map_err(err)?;
    let r = run_pipeline(&case, &db, precision).map_err(err)?;
    Ok(r.records
        .into_iter()
        .map(|r| (r.id, r.pass, r.expected, r.got))
        .collect())
}

/// Runs one acceptance criterion (1 to 15) and returns its records.
#[pyfunction]
fn verify(criterion: usize) -> PyResult<Vec<(String, bool, String, String)>> {
    let opts = VerifyOptions::new(RdpDatabase::builtin().map_err(err)?);
    let c = run_criterion(criterion, &opts).map_err(err)?;
    Ok(c.records
        .into_iter()
        .map(|r| (r.id, r.pass, r.expected, r.got))
        .collect())
}

#[pymodule]
fn charkummer_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySeries>()?;
    m.add_class::<PyInvolution>()?;
    m.add_class::<PyCurveConfig>()?;
    m.add_function(wrap_pyfunction!(tjurina, m)?)?;
    m.add_function(wrap_pyfunction!(sym_depth, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
