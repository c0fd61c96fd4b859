//! Python bindings: sampling, exact geometry, analytic densities and moments,
//! and the claim runner.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cyclicpoly::analytic::{self, AnalyticDensity, AnalyticError};
use cyclicpoly::claims::{self, ClaimError, ClaimResult, RunOptions};
use cyclicpoly::polygon::{self, Branch, PolygonMeasurements, RngStream};
use cyclicpoly::special::QuadratureSpec;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn analytic_error(e: AnalyticError) -> PyErr {
    match e {
        AnalyticError::UnknownDensity(_) | AnalyticError::UnknownMoment(_) => PyKeyError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn claim_error(e: ClaimError) -> PyErr {
    match e {
        ClaimError::UnknownClaim(_) => PyKeyError::new_err(e.to_string()),
        other => value_error(other),
    }
}

/// Vertex angles θ₁ < … < θₙ in [0, 2π) of a cyclic polygon.
#[pyclass(name = "CentralAngles", module = "cyclicpoly", frozen)]
struct PyCentralAngles {
    inner: polygon::CentralAngles,
}

#[pymethods]
impl PyCentralAngles {
    #[new]
    fn new(theta: Vec<f64>) -> PyResult<Self> {
        polygon::CentralAngles::new(theta)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.inner.theta().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Successive arc lengths θₖ₊₁ − θₖ, the last one wrapping through 2π.
    fn gaps(&self) -> Vec<f64> {
        self.inner.gaps().g
    }

    fn vertices(&self) -> Vec<(f64, f64)> {
        self.inner.vertices().collect()
    }

    fn measure(&self) -> PyMeasurements {
        polygon::measure(&self.inner).into()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("CentralAngles({:?})", self.inner.theta())
    }
}

#[pyclass(name = "PolygonMeasurements", module = "cyclicpoly", frozen, get_all)]
struct PyMeasurements {
    sides: Vec<f64>,
    angles: Vec<f64>,
    diagonals: Option<(f64, f64)>,
    omega: Option<f64>,
    omega_min: Option<f64>,
    trig_area: Option<f64>,
    perimeter: f64,
    area: f64,
}

impl From<PolygonMeasurements> for PyMeasurements {
    fn from(m: PolygonMeasurements) -> Self {
        Self {
            diagonals: m.diagonals.map(|[a, b]| (a, b)),
            omega: m.omega,
            omega_min: m.omega_min(),
            trig_area: m.trig_area(),
            perimeter: m.perimeter,
            area: m.area,
            sides: m.sides,
            angles: m.angles,
        }
    }
}

#[pymethods]
impl PyMeasurements {
    fn __repr__(&self) -> String {
        format!(
            "PolygonMeasurements(sides={:?}, angles={:?}, area={})",
            self.sides, self.angles, self.area
        )
    }
}

/// Draws one uniform random cyclic polygon from stream `(seed, stream)`.
#[pyfunction]
#[pyo3(signature = (order, seed, stream = 0))]
fn sample_polygon(order: usize, seed: u64, stream: u64) -> PyResult<PyCentralAngles> {
    let mut rng = RngStream::new(seed, stream).generator();
    polygon::sample_central_angles(order, &mut rng)
        .map(|inner| PyCentralAngles { inner })
        .map_err(value_error)
}

/// Draws `count` polygons in sequence from one stream.
#[pyfunction]
#[pyo3(signature = (order, count, seed, stream = 0))]
fn sample_polygons(order: usize, count: usize, seed: u64, stream: u64) -> PyResult<Vec<PyCentralAngles>> {
    let mut rng = RngStream::new(seed, stream).generator();
    (0..count)
        .map(|_| {
            polygon::sample_central_angles(order, &mut rng)
                .map(|inner| PyCentralAngles { inner })
                .map_err(value_error)
        })
        .collect()
}

#[pyfunction]
fn measure(angles: &PyCentralAngles) -> PyMeasurements {
    angles.measure()
}

/// `(α, β, ω)` of the cyclic quadrilateral with successive sides a, b, c, d.
#[pyfunction]
fn angles_from_sides(a: f64, b: f64, c: f64, d: f64) -> PyResult<(f64, f64, f64)> {
    polygon::angles_from_sides(a, b, c, d).map_err(value_error)
}

/// Third side of a cyclic triangle; `branch` is "plus" or "minus".
#[pyfunction]
fn third_side_triangle(a: f64, b: f64, branch: &str) -> PyResult<f64> {
    let branch = match branch {
        "plus" => Branch::Plus,
        "minus" => Branch::Minus,
        other => return Err(value_error(format!("branch must be 'plus' or 'minus', got {other:?}"))),
    };
    polygon::third_side_triangle(a, b, branch).map_err(value_error)
}

#[pyfunction]
fn density_names() -> Vec<&'static str> {
    analytic::densities().iter().map(|d| d.name()).collect()
}

/// Density `name` at `point`; a float for 1-D laws, a sequence otherwise.
#[pyfunction]
fn pdf(name: &str, point: &Bound<'_, PyAny>) -> PyResult<f64> {
    let density = analytic::density_by_name(name).map_err(analytic_error)?;
    let coords: Vec<f64> = match point.extract::<f64>() {
        Ok(x) => vec![x],
        Err(_) => point.extract()?,
    };
    if coords.len() != density.dim() {
        return Err(value_error(format!(
            "{name} is {}-dimensional, got {} coordinates",
            density.dim(),
            coords.len()
        )));
    }
    Ok(match density {
        AnalyticDensity::D1(d) => d.pdf(coords[0]),
        AnalyticDensity::D2(d) => d.pdf([coords[0], coords[1]]),
        AnalyticDensity::D3(d) => d.pdf([coords[0], coords[1], coords[2]]),
    })
}

fn one_dimensional(name: &str) -> PyResult<analytic::Density1d> {
    match analytic::density_by_name(name).map_err(analytic_error)? {
        AnalyticDensity::D1(d) => Ok(d),
        _ => Err(value_error(format!("{name} is not a one-dimensional density"))),
    }
}

#[pyfunction]
#[pyo3(signature = (name, x, tol = 1e-10))]
fn cdf(name: &str, x: f64, tol: f64) -> PyResult<f64> {
    one_dimensional(name)?
        .cdf(x, &QuadratureSpec::with_tolerance(tol))
        .map_err(analytic_error)
}

/// `E[X^k]` by quadrature: `(value, truncated_integral, tail_estimate)`.
#[pyfunction]
#[pyo3(signature = (name, k, tol = 1e-10))]
fn density_moment(name: &str, k: i32, tol: f64) -> PyResult<(f64, f64, f64)> {
    let m = one_dimensional(name)?
        .moment(k, &QuadratureSpec::with_tolerance(tol))
        .map_err(analytic_error)?;
    Ok((m.value, m.truncated, m.tail))
}

#[pyfunction]
fn closed_form_moment(id: &str) -> PyResult<f64> {
    analytic::closed_form_moment(id).map_err(analytic_error)
}

#[pyfunction]
fn moments(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    analytic::MOMENTS
        .iter()
        .map(|m| {
            let d = PyDict::new(py);
            d.set_item("id", m.id)?;
            d.set_item("expression", m.expression)?;
            d.set_item("location", m.location)?;
            d.set_item("conjecture", m.conjecture)?;
            d.set_item("value", m.value())?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn list_claims(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    claims::list_claims()
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("id", c.id)?;
            d.set_item("description", c.description)?;
            d.set_item("paper_location", c.paper_location)?;
            d.set_item("kind", c.kind.as_str())?;
            d.set_item("conjecture", c.conjecture)?;
            d.set_item("default_samples", c.default_samples)?;
            Ok(d)
        })
        .collect()
}

fn result_dict<'py>(py: Python<'py>, r: &ClaimResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("claim_id", &r.claim_id)?;
    d.set_item("description", &r.description)?;
    d.set_item("paper_location", &r.paper_location)?;
    d.set_item("conjecture", r.conjecture)?;
    d.set_item("kind", r.kind.as_str())?;
    d.set_item("analytic", r.analytic)?;
    d.set_item("estimate", r.estimate)?;
    d.set_item("stderr", r.stderr)?;
    d.set_item("statistic", r.statistic)?;
    d.set_item("pass", r.pass)?;
    d.set_item("n_samples", r.n_samples)?;
    d.set_item("seed", r.seed)?;
    d.set_item("workers", r.workers)?;
    d.set_item("elapsed_seconds", r.elapsed_seconds)?;
    d.set_item("notes", r.notes.as_deref())?;
    Ok(d)
}

/// Runs one claim and returns its result record. `n_samples` defaults to
/// the claim's registry size.
#[pyfunction]
#[pyo3(signature = (claim_id, n_samples = None, seed = 20_161_003, workers = 1, record_timing = true))]
fn run_claim<'py>(
    py: Python<'py>,
    claim_id: &str,
    n_samples: Option<usize>,
    seed: u64,
    workers: usize,
    record_timing: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let n = match n_samples {
        Some(n) => n,
        None => claims::find_claim(claim_id).map_err(claim_error)?.default_samples,
    };
    let opts = RunOptions {
        seed,
        workers,
        record_timing,
        ..RunOptions::default()
    };
    let result = py
        .detach(|| claims::run_claim(claim_id, n, &opts))
        .map_err(claim_error)?;
    result_dict(py, &result)
}

#[pymodule]
#[pyo3(name = "cyclicpoly")]
fn cyclicpoly_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCentralAngles>()?;
    m.add_class::<PyMeasurements>()?;
    m.add_function(wrap_pyfunction!(sample_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(sample_polygons, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(angles_from_sides, m)?)?;
    m.add_function(wrap_pyfunction!(third_side_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(density_names, m)?)?;
    m.add_function(wrap_pyfunction!(pdf, m)?)?;
    m.add_function(wrap_pyfunction!(cdf, m)?)?;
    m.add_function(wrap_pyfunction!(density_moment, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_moment, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(list_claims, m)?)?;
    m.add_function(wrap_pyfunction!(run_claim, m)?)?;
    Ok(())
}
