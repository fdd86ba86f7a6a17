//! Python bindings: the tensor type plus the classification, fitting,
//! decomposition, and pencil operations.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gsdfit::classify::{classify_square, RankRegionOptions};
use gsdfit::gen::{generate_instance, InstanceKind};
use gsdfit::gsd::{best_gsd_fit, extract_cp_interior, full_gsd_singular_pencil, FitOptions};
use gsdfit::pencil::{generalized_eigenvalues, is_singular_pencil as core_is_singular, real_qz,
                     QzOptions};
use gsdfit::{frobenius_distance, multilinear_multiply, slicemix, DenseMatrix};

fn core_err(e: gsdfit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(&rows).map_err(core_err)
}

fn matrix_to_rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

/// Dense real I x J x 2 array.
#[pyclass(name = "Tensor3")]
#[derive(Clone)]
struct PyTensor3 {
    inner: gsdfit::Tensor3,
}

#[pymethods]
impl PyTensor3 {
    /// Build from two I x J slices given as nested lists.
    #[new]
    fn new(slice1: Vec<Vec<f64>>, slice2: Vec<Vec<f64>>) -> PyResult<Self> {
        let s1 = matrix_from_rows(slice1)?;
        let s2 = matrix_from_rows(slice2)?;
        Ok(Self {
            inner: gsdfit::Tensor3::from_slices(&s1, &s2).map_err(core_err)?,
        })
    }

    /// (I, J, K) with K = 2.
    #[getter]
    fn dims(&self) -> (usize, usize, usize) {
        self.inner.dims()
    }

    fn slices(&self) -> PyResult<Vec<Vec<Vec<f64>>>> {
        let s1 = self.inner.frontal_slice(0).map_err(core_err)?;
        let s2 = self.inner.frontal_slice(1).map_err(core_err)?;
        Ok(vec![matrix_to_rows(&s1), matrix_to_rows(&s2)])
    }

    fn get(&self, i: usize, j: usize, k: usize) -> PyResult<f64> {
        let (di, dj, dk) = self.inner.dims();
        if i >= di || j >= dj || k >= dk {
            return Err(PyValueError::new_err(format!(
                "index ({i}, {j}, {k}) out of range for dims {:?}",
                self.inner.dims()
            )));
        }
        Ok(self.inner.get(i, j, k))
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn __repr__(&self) -> String {
        let (i, j, k) = self.inner.dims();
        format!("Tensor3(dims=({i}, {j}, {k}))")
    }
}

/// Multilinear multiplication (S, T, U) . Y with nested-list factors.
#[pyfunction]
fn multilinear(
    y: &PyTensor3,
    s: Vec<Vec<f64>>,
    t: Vec<Vec<f64>>,
    u: Vec<Vec<f64>>,
) -> PyResult<PyTensor3> {
    let s = matrix_from_rows(s)?;
    let t = matrix_from_rows(t)?;
    let u = matrix_from_rows(u)?;
    Ok(PyTensor3 {
        inner: multilinear_multiply(&y.inner, &s, &t, &u).map_err(core_err)?,
    })
}

/// Slicemix (I, I, U) . Y with a 2x2 matrix U.
#[pyfunction(name = "slicemix")]
fn py_slicemix(y: &PyTensor3, u: Vec<Vec<f64>>) -> PyResult<PyTensor3> {
    let u = matrix_from_rows(u)?;
    Ok(PyTensor3 {
        inner: slicemix(&y.inner, &u).map_err(core_err)?,
    })
}

/// Frobenius distance ||Y - Z||.
#[pyfunction]
fn distance(y: &PyTensor3, z: &PyTensor3) -> PyResult<f64> {
    frobenius_distance(&y.inner, &z.inner).map_err(core_err)
}

/// Interior/boundary/exterior classification of a square-slice array.
#[pyfunction(signature = (y, tol = 1e-8, sing_tol = 1e-10))]
fn classify<'py>(
    py: Python<'py>,
    y: &PyTensor3,
    tol: f64,
    sing_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = RankRegionOptions { tol, sing_tol };
    let c = classify_square(&y.inner, &opts).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item(
        "label",
        match c.label {
            gsdfit::classify::RegionLabel::Interior => "interior",
            gsdfit::classify::RegionLabel::Boundary => "boundary",
            gsdfit::classify::RegionLabel::Exterior => "exterior",
        },
    )?;
    d.set_item(
        "case",
        match c.case {
            gsdfit::classify::RegionCase::A1 => "a1",
            gsdfit::classify::RegionCase::A2 => "a2",
            gsdfit::classify::RegionCase::A3 => "a3",
            gsdfit::classify::RegionCase::B => "b",
        },
    )?;
    d.set_item("margin", c.margin)?;
    let eigs: Vec<(f64, f64)> = c.eigenvalues.iter().map(|e| e.value()).collect();
    d.set_item("eigenvalues", eigs)?;
    Ok(d)
}

/// Best-fitting GSD at the given rank.
#[pyfunction(signature = (y, rank, max_sweeps = 500, restarts = 8, seed = 0))]
fn fit_gsd<'py>(
    py: Python<'py>,
    y: &PyTensor3,
    rank: usize,
    max_sweeps: usize,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = FitOptions {
        max_sweeps,
        tol: 1e-12,
        restarts,
        seed,
    };
    let (gsd, report) = best_gsd_fit(&y.inner, rank, &opts).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("qa", matrix_to_rows(gsd.qa()))?;
    d.set_item("qb", matrix_to_rows(gsd.qb()))?;
    d.set_item("r1", matrix_to_rows(gsd.r1()))?;
    d.set_item("r2", matrix_to_rows(gsd.r2()))?;
    d.set_item("residual", report.final_residual)?;
    d.set_item("converged", report.converged)?;
    d.set_item("sweeps", report.sweeps)?;
    d.set_item("trace", report.trace.clone())?;
    Ok(d)
}

/// Constructive full GSD of an identically singular square-slice array.
#[pyfunction(signature = (y, tol = 1e-10))]
fn full_gsd<'py>(py: Python<'py>, y: &PyTensor3, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let gsd = full_gsd_singular_pencil(&y.inner, tol).map_err(core_err)?;
    let residual =
        frobenius_distance(&y.inner, &gsd.reconstruct()).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("qa", matrix_to_rows(gsd.qa()))?;
    d.set_item("qb", matrix_to_rows(gsd.qb()))?;
    d.set_item("r1", matrix_to_rows(gsd.r1()))?;
    d.set_item("r2", matrix_to_rows(gsd.r2()))?;
    d.set_item("residual", residual)?;
    Ok(d)
}

/// CP factors of an interior point (I = J = R).
#[pyfunction(signature = (y, tol = 1e-8))]
fn extract_cp<'py>(py: Python<'py>, y: &PyTensor3, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let f = extract_cp_interior(&y.inner, tol).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("a", matrix_to_rows(&f.a))?;
    d.set_item("b", matrix_to_rows(&f.b))?;
    d.set_item("c", matrix_to_rows(&f.c))?;
    Ok(d)
}

/// Real generalized Schur decomposition of a square pair (A, B).
#[pyfunction]
fn qz<'py>(
    py: Python<'py>,
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let a = matrix_from_rows(a)?;
    let b = matrix_from_rows(b)?;
    let qz = real_qz(&a, &b, &QzOptions::default()).map_err(core_err)?;
    let d = PyDict::new(py);
    d.set_item("q", matrix_to_rows(&qz.q))?;
    d.set_item("z", matrix_to_rows(&qz.z))?;
    d.set_item("f", matrix_to_rows(&qz.f))?;
    d.set_item("g", matrix_to_rows(&qz.g))?;
    d.set_item(
        "block_sizes",
        qz.blocks.iter().map(|blk| blk.size).collect::<Vec<_>>(),
    )?;
    Ok(d)
}

/// Generalized eigenvalues of a regular pair, as (re, im) tuples.
#[pyfunction(signature = (a, b, sing_tol = 1e-10))]
fn eigenvalues(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, sing_tol: f64) -> PyResult<Vec<(f64, f64)>> {
    let a = matrix_from_rows(a)?;
    let b = matrix_from_rows(b)?;
    let eigs = generalized_eigenvalues(&a, &b, sing_tol).map_err(core_err)?;
    Ok(eigs.iter().map(|e| e.value()).collect())
}

/// True iff det(mu A + lambda B) vanishes identically.
#[pyfunction(signature = (a, b, tol = 1e-10))]
fn is_singular_pencil(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    let a = matrix_from_rows(a)?;
    let b = matrix_from_rows(b)?;
    core_is_singular(&a, &b, tol).map_err(core_err)
}

/// Seeded instance generator; kinds: interior, boundary-a2, exterior,
/// singular-pencil, gsd-random, cp-random.
#[pyfunction]
fn generate(kind: &str, i: usize, j: usize, rank: usize, seed: u64) -> PyResult<PyTensor3> {
    let kind = InstanceKind::parse(kind)
        .ok_or_else(|| PyValueError::new_err(format!("unknown instance kind {kind:?}")))?;
    Ok(PyTensor3 {
        inner: generate_instance(kind, i, j, rank, seed).map_err(core_err)?,
    })
}

#[pymodule]
fn gsdfit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor3>()?;
    m.add_function(wrap_pyfunction!(multilinear, m)?)?;
    m.add_function(wrap_pyfunction!(py_slicemix, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(fit_gsd, m)?)?;
    m.add_function(wrap_pyfunction!(full_gsd, m)?)?;
    m.add_function(wrap_pyfunction!(extract_cp, m)?)?;
    m.add_function(wrap_pyfunction!(qz, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(is_singular_pencil, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
