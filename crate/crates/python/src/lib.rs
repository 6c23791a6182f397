//! Python module `holocap_py`. Bloch vectors cross the boundary as `(x, y, z)` tuples.

use holocap::product::{self, ScanConfig};
use holocap::relent::CensusOptions;
use holocap::{BlochVector, CapacityConfig, Ensemble, EnsembleEntry, QubitChannel};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Vec3 = (f64, f64, f64);

fn err(e: holocap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bloch(v: Vec3) -> PyResult<BlochVector> {
    BlochVector::new(v.0, v.1, v.2).map_err(err)
}

fn tuple(r: BlochVector) -> Vec3 {
    (r.x, r.y, r.z)
}

/// Affine qubit channel `r -> (lambda_k r_k + t_k)`.
#[pyclass(name = "Channel", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyChannel {
    inner: QubitChannel,
}

#[pymethods]
impl PyChannel {
    #[new]
    fn new(lambdas: Vec3, t: Vec3) -> Self {
        Self {
            inner: QubitChannel::new([lambdas.0, lambdas.1, lambdas.2], [t.0, t.1, t.2]),
        }
    }

    /// Parse the `lambda = ...` / `t = ...` channel-file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        holocap::parse_channel(text)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[getter]
    fn lambdas(&self) -> Vec3 {
        let l = self.inner.lambda;
        (l[0], l[1], l[2])
    }

    #[getter]
    fn t(&self) -> Vec3 {
        let t = self.inner.t;
        (t[0], t[1], t[2])
    }

    fn apply(&self, r: Vec3) -> PyResult<Vec3> {
        Ok(tuple(self.inner.apply(bloch(r)?)))
    }

    /// `(completely_positive, smallest Choi eigenvalue)`.
    fn is_cp(&self) -> (bool, f64) {
        let c = self.inner.is_cp();
        (c.completely_positive, c.margin)
    }

    fn __repr__(&self) -> String {
        let (l, t) = (self.inner.lambda, self.inner.t);
        format!(
            "Channel(({}, {}, {}), ({}, {}, {}))",
            l[0], l[1], l[2], t[0], t[1], t[2]
        )
    }
}

#[pyclass(name = "CapacityResult", frozen, skip_from_py_object)]
pub struct PyCapacityResult {
    inner: holocap::CapacityResult,
}

#[pymethods]
impl PyCapacityResult {
    #[getter]
    fn capacity(&self) -> f64 {
        self.inner.capacity
    }

    #[getter]
    fn probabilities(&self) -> Vec<f64> {
        self.inner.ensemble.probabilities()
    }

    #[getter]
    fn inputs(&self) -> Vec<Vec3> {
        self.inner
            .ensemble
            .inputs()
            .into_iter()
            .map(tuple)
            .collect()
    }

    #[getter]
    fn average(&self) -> Vec3 {
        tuple(self.inner.ensemble.average())
    }

    #[getter]
    fn xi(&self) -> Vec3 {
        let x = self.inner.xi;
        (x[0], x[1], x[2])
    }

    #[getter]
    fn xi0(&self) -> f64 {
        self.inner.xi0
    }

    #[getter]
    fn dual_gap(&self) -> f64 {
        self.inner.dual_gap
    }

    #[getter]
    fn max_violation(&self) -> f64 {
        self.inner.max_violation
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.certified
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "CapacityResult(capacity={}, support={}, certified={})",
            self.inner.capacity,
            self.inner.ensemble.len(),
            self.inner.certified
        )
    }
}

/// Holevo capacity; `k` is the finest starting mesh.
#[pyfunction]
#[pyo3(signature = (channel, k=40, tol=1e-8, starts=5, seed=0, allow_noncp=false))]
fn capacity(
    py: Python<'_>,
    channel: PyChannel,
    k: usize,
    tol: f64,
    starts: usize,
    seed: u64,
    allow_noncp: bool,
) -> PyResult<PyCapacityResult> {
    let cfg = CapacityConfig {
        tolerance: tol,
        rotations: starts,
        seed,
        allow_non_cp: allow_noncp,
        ..CapacityConfig::default()
    }
    .with_mesh(k);
    let inner = py
        .detach(|| holocap::capacity(&channel.inner, &cfg))
        .map_err(err)?;
    Ok(PyCapacityResult { inner })
}

/// Von Neumann entropy in bits of the state with Bloch vector `r`.
#[pyfunction]
fn entropy(r: Vec3) -> PyResult<f64> {
    Ok(holocap::entropy(bloch(r)?))
}

/// Relative entropy `S(w || r)` in bits; infinite off the support.
#[pyfunction]
fn relative_entropy(w: Vec3, r: Vec3) -> PyResult<f64> {
    Ok(holocap::relative_entropy_bloch(bloch(w)?, bloch(r)?))
}

#[pyfunction]
fn holevo_chi(channel: PyChannel, probabilities: Vec<f64>, inputs: Vec<Vec3>) -> PyResult<f64> {
    if probabilities.len() != inputs.len() {
        return Err(PyValueError::new_err(
            "probabilities and inputs differ in length",
        ));
    }
    let entries = probabilities
        .into_iter()
        .zip(inputs)
        .map(|(p, r)| Ok(EnsembleEntry::new(p, bloch(r)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let e = Ensemble::new(entries).map_err(err)?;
    Ok(holocap::holevo_chi(&channel.inner, &e))
}

/// `(value, [(x, y, z), ...])`: the largest relative entropy to the average
/// output and where it is attained.
#[pyfunction]
#[pyo3(signature = (channel, average, grid_k=200))]
fn sup_relent(channel: PyChannel, average: Vec3, grid_k: usize) -> PyResult<(f64, Vec<Vec3>)> {
    let s = holocap::sup_relent(&channel.inner, bloch(average)?, grid_k, 1e-12).map_err(err)?;
    Ok((
        s.value,
        s.maxima.iter().map(|m| tuple(m.location)).collect(),
    ))
}

/// Critical points as `(location, value, kind)`.
#[pyfunction]
#[pyo3(signature = (channel, average, phi_steps=400, theta_steps=800))]
fn critical_census(
    py: Python<'_>,
    channel: PyChannel,
    average: Vec3,
    phi_steps: usize,
    theta_steps: usize,
) -> PyResult<Vec<(Vec3, f64, String)>> {
    let opts = CensusOptions {
        phi_steps,
        theta_steps,
        ..Default::default()
    };
    let avg = bloch(average)?;
    let pts = py
        .detach(|| holocap::critical_census(&channel.inner, avg, &opts))
        .map_err(err)?;
    Ok(pts
        .into_iter()
        .map(|p| {
            (
                tuple(p.location),
                p.value,
                format!("{:?}", p.kind).to_lowercase(),
            )
        })
        .collect())
}

/// `(max_g, margin)` of the two-use scan against `2 * capacity`.
#[pyfunction]
#[pyo3(signature = (channel, average, capacity, samples=100_000, ascents=50, seed=0))]
fn additivity_scan(
    py: Python<'_>,
    channel: PyChannel,
    average: Vec3,
    capacity: f64,
    samples: usize,
    ascents: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let cfg = ScanConfig {
        samples,
        ascents,
        seed,
    };
    let avg = bloch(average)?;
    let r = py
        .detach(|| product::additivity_scan(&channel.inner, avg, capacity, &cfg))
        .map_err(err)?;
    Ok((r.max_g, r.margin))
}

/// `[(p, f_numeric, f_closed_form), ...]` for the mu-channel on a uniform p grid.
#[pyfunction]
#[pyo3(signature = (mu, steps=100))]
fn concavity_curve(mu: f64, steps: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    let c = holocap::concavity_curve(mu, &product::uniform_p_grid(steps)).map_err(err)?;
    Ok(c.points
        .iter()
        .map(|p| (p.p, p.f_numeric, p.f_closed_form))
        .collect())
}

#[pymodule]
fn holocap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyCapacityResult>()?;
    m.add_function(wrap_pyfunction!(capacity, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(holevo_chi, m)?)?;
    m.add_function(wrap_pyfunction!(sup_relent, m)?)?;
    m.add_function(wrap_pyfunction!(critical_census, m)?)?;
    m.add_function(wrap_pyfunction!(additivity_scan, m)?)?;
    m.add_function(wrap_pyfunction!(concavity_curve, m)?)?;
    Ok(())
}
