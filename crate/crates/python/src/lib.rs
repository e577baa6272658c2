//! Python bindings for `hopf_noise`.
//!
//! ```python
//! import hopf_noise_py as hn
//! hopf = hn.solve_hopf(12.0)
//! base = hn.OperatingPoint(-0.05, 60.0, 12.0)
//! est = base.sigma2(1e-5)
//! mean, se = base.ensemble(-0.05, 1e-5, n_trials=100)
//! ```

use hopf_noise::experiments::{self, amplitude_of, EnsembleConfig};
use hopf_noise::noise_correction::estimate_sigma2_direct;
use hopf_noise::{
    Error, ExperimentConfig, HistoryInit, Seed, Sigma2Config, SystemParams, SystemSpec,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Diverged { .. } | Error::NoConvergence { .. } | Error::NoOnsetInRange => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

/// Hopf point of `u' = -u + η u(t-τ)`.
#[pyclass(
    frozen,
    skip_from_py_object,
    name = "HopfPoint",
    module = "hopf_noise_py"
)]
#[derive(Clone)]
struct PyHopfPoint(hopf_noise::HopfPoint);

#[pymethods]
impl PyHopfPoint {
    #[getter]
    fn tau(&self) -> f64 {
        self.0.tau
    }
    #[getter]
    fn eta_c(&self) -> f64 {
        self.0.eta_c
    }
    #[getter]
    fn w_c(&self) -> f64 {
        self.0.w_c
    }
    /// Normalization constant `d` as a Python complex.
    #[getter]
    fn d(&self) -> num_complex::Complex64 {
        self.0.d
    }
    /// Modulus of the characteristic function at `i w_c`.
    fn residual(&self) -> f64 {
        self.0.residual()
    }
    fn __repr__(&self) -> String {
        format!(
            "HopfPoint(tau={}, eta_c={}, w_c={})",
            self.0.tau, self.0.eta_c, self.0.w_c
        )
    }
}

/// Fixed point and Taylor coefficients of the sigmoid loop.
#[pyclass(
    frozen,
    skip_from_py_object,
    name = "ExpansionPoint",
    module = "hopf_noise_py"
)]
#[derive(Clone)]
struct PyExpansionPoint(hopf_noise::ExpansionPoint);

#[pymethods]
impl PyExpansionPoint {
    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }
    #[getter]
    fn slope(&self) -> f64 {
        self.0.slope
    }
    #[getter]
    fn x_o(&self) -> f64 {
        self.0.x_o
    }
    #[getter]
    fn f_x_o(&self) -> f64 {
        self.0.f_x_o
    }
    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }
    #[getter]
    fn nu(&self) -> f64 {
        self.0.nu
    }
    fn __repr__(&self) -> String {
        format!(
            "ExpansionPoint(x_o={}, eta={}, kappa={}, nu={})",
            self.0.x_o, self.0.eta, self.0.kappa, self.0.nu
        )
    }
}

#[pyclass(
    frozen,
    skip_from_py_object,
    name = "Sigma2Estimate",
    module = "hopf_noise_py"
)]
#[derive(Clone)]
struct PySigma2Estimate(hopf_noise::Sigma2Estimate);

#[pymethods]
impl PySigma2Estimate {
    #[getter]
    fn noise(&self) -> f64 {
        self.0.noise
    }
    #[getter]
    fn sigma2(&self) -> f64 {
        self.0.sigma2
    }
    #[getter]
    fn std_error(&self) -> f64 {
        self.0.std_error
    }
    #[getter]
    fn skewness(&self) -> f64 {
        self.0.skewness
    }
    #[getter]
    fn n_real(&self) -> usize {
        self.0.n_real
    }
    fn __repr__(&self) -> String {
        format!(
            "Sigma2Estimate(noise={}, sigma2={}, std_error={})",
            self.0.noise, self.0.sigma2, self.0.std_error
        )
    }
}

#[pyclass(
    frozen,
    skip_from_py_object,
    name = "NoiseCorrection",
    module = "hopf_noise_py"
)]
#[derive(Clone)]
struct PyNoiseCorrection(hopf_noise::NoiseCorrection);

#[pymethods]
impl PyNoiseCorrection {
    #[getter]
    fn sigma2(&self) -> f64 {
        self.0.sigma2
    }
    #[getter]
    fn c_o(&self) -> f64 {
        self.0.c_o
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu
    }
    #[getter]
    fn eps(&self) -> f64 {
        self.0.eps
    }
    #[getter]
    fn eps_eff(&self) -> f64 {
        self.0.eps_eff
    }
    fn __repr__(&self) -> String {
        format!(
            "NoiseCorrection(sigma2={}, c_o={}, mu={}, eps_eff={})",
            self.0.sigma2, self.0.c_o, self.0.mu, self.0.eps_eff
        )
    }
}

#[pyfunction]
fn solve_hopf(tau: f64) -> PyResult<PyHopfPoint> {
    hopf_noise::solve_hopf(tau).map(PyHopfPoint).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (gamma=-0.05, slope=60.0))]
fn expand(gamma: f64, slope: f64) -> PyResult<PyExpansionPoint> {
    hopf_noise::expand(gamma, slope)
        .map(PyExpansionPoint)
        .map_err(to_py)
}

#[pyfunction]
fn effective_params(sigma2: f64, kappa: f64, nu: f64, eps: f64) -> PyResult<PyNoiseCorrection> {
    hopf_noise::effective_params(sigma2, kappa, nu, eps)
        .map(PyNoiseCorrection)
        .map_err(to_py)
}

/// Variance of the fast fluctuations for noise intensity `noise`.
///
/// `method` is "formula" (default) or "projection".
#[pyfunction]
#[pyo3(signature = (tau, noise, horizon=1000.0, n_real=200, dt=0.1, seed=0, method="formula"))]
#[allow(clippy::too_many_arguments)]
fn estimate_sigma2(
    py: Python<'_>,
    tau: f64,
    noise: f64,
    horizon: f64,
    n_real: usize,
    dt: f64,
    seed: u64,
    method: &str,
) -> PyResult<PySigma2Estimate> {
    let hopf = hopf_noise::solve_hopf(tau).map_err(to_py)?;
    let cfg = Sigma2Config {
        horizon,
        n_real,
        dt,
        master_seed: seed,
    };
    let est = match method {
        "formula" => py.detach(|| hopf_noise::estimate_sigma2(&hopf, noise, &cfg)),
        "projection" => py.detach(|| estimate_sigma2_direct(&hopf, noise, &cfg)),
        other => {
            return Err(PyValueError::new_err(format!(
                "method must be 'formula' or 'projection', got {other:?}"
            )))
        }
    };
    est.map(PySigma2Estimate).map_err(to_py)
}

fn params_from(variant: &str, p: &Bound<'_, PyDict>) -> PyResult<SystemParams> {
    let variant: hopf_noise::Variant = variant.parse().map_err(to_py)?;
    let get = |k: &str| -> PyResult<Option<f64>> {
        match p.get_item(k)? {
            Some(v) => Ok(Some(v.extract()?)),
            None => Ok(None),
        }
    };
    let set = hopf_noise::trajectory::ParamSet {
        gamma: get("gamma")?,
        slope: get("slope")?,
        eta: get("eta")?,
        kappa: get("kappa")?,
        nu: get("nu")?,
        eta_c: get("eta_c")?,
        eps_eff: get("eps_eff")?,
        c_o: get("c_o")?,
    };
    SystemParams::from_parts(variant, &set).map_err(to_py)
}

/// Integrate one variant ("original", "polynomial", "corrected",
/// "linear_critical") from a constant history; returns the samples.
#[pyfunction]
#[pyo3(signature = (variant, params, tau=12.0, noise=0.0, n_steps=10_000, dt=0.1, seed=0, stream=0, u_init=0.01))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    py: Python<'_>,
    variant: &str,
    params: &Bound<'_, PyDict>,
    tau: f64,
    noise: f64,
    n_steps: usize,
    dt: f64,
    seed: u64,
    stream: u64,
    u_init: f64,
) -> PyResult<Vec<f64>> {
    let spec = SystemSpec::new(params_from(variant, params)?, noise, tau).map_err(to_py)?;
    py.detach(|| {
        hopf_noise::integrate(
            &spec,
            &HistoryInit::Constant(u_init),
            n_steps,
            dt,
            Seed::new(seed, stream),
        )
    })
    .map(|t| t.samples)
    .map_err(to_py)
}

/// Half peak-to-peak over the trailing `fraction` of `samples`.
#[pyfunction]
#[pyo3(signature = (samples, dt, fraction=0.25, min_time=0.0))]
fn amplitude(samples: Vec<f64>, dt: f64, fraction: f64, min_time: f64) -> PyResult<f64> {
    let w = hopf_noise::AmplitudeWindow { fraction, min_time };
    amplitude_of(&samples, dt, &w).map_err(to_py)
}

/// Expansion around the sigmoid fixed point, unfolded at a Hopf point.
#[pyclass(frozen, name = "OperatingPoint", module = "hopf_noise_py")]
struct PyOperatingPoint {
    inner: hopf_noise::OperatingPoint,
    cfg: ExperimentConfig,
}

#[pymethods]
impl PyOperatingPoint {
    #[new]
    #[pyo3(signature = (gamma=-0.05, slope=60.0, tau=12.0, dt=0.1, n_steps=10_000, seed=0, u_init=0.01))]
    fn new(
        gamma: f64,
        slope: f64,
        tau: f64,
        dt: f64,
        n_steps: usize,
        seed: u64,
        u_init: f64,
    ) -> PyResult<Self> {
        let inner = hopf_noise::OperatingPoint::new(gamma, slope, tau).map_err(to_py)?;
        let cfg = ExperimentConfig {
            dt,
            n_steps,
            master_seed: seed,
            u_init,
            ..ExperimentConfig::default()
        };
        Ok(PyOperatingPoint { inner, cfg })
    }

    #[getter]
    fn hopf(&self) -> PyHopfPoint {
        PyHopfPoint(self.inner.hopf)
    }

    #[getter]
    fn expansion(&self) -> PyExpansionPoint {
        PyExpansionPoint(self.inner.expansion)
    }

    /// σ² with the configured horizon and realization count.
    fn sigma2(&self, py: Python<'_>, noise: f64) -> PyResult<PySigma2Estimate> {
        py.detach(|| experiments::sigma2_for(&self.inner, noise, &self.cfg))
            .map(PySigma2Estimate)
            .map_err(to_py)
    }

    fn correction(&self, estimate: &PySigma2Estimate, eps: f64) -> PyResult<PyNoiseCorrection> {
        self.inner
            .correction(&estimate.0, eps)
            .map(PyNoiseCorrection)
            .map_err(to_py)
    }

    /// Polynomial trajectory at `η = η_c + eps`.
    #[pyo3(signature = (eps, noise=0.0, stream=0))]
    fn simulate(&self, py: Python<'_>, eps: f64, noise: f64, stream: u64) -> PyResult<Vec<f64>> {
        let spec = self.inner.polynomial(eps, noise).map_err(to_py)?;
        let c = self.cfg;
        py.detach(|| {
            hopf_noise::integrate(
                &spec,
                &c.history(),
                c.n_steps,
                c.dt,
                Seed::new(c.master_seed, stream),
            )
        })
        .map(|t| t.samples)
        .map_err(to_py)
    }

    /// Deterministic corrected trajectory for a given correction.
    fn corrected(&self, py: Python<'_>, correction: &PyNoiseCorrection) -> PyResult<Vec<f64>> {
        let spec = self.inner.corrected(&correction.0).map_err(to_py)?;
        let c = self.cfg;
        py.detach(|| {
            hopf_noise::integrate(
                &spec,
                &c.history(),
                c.n_steps,
                c.dt,
                Seed::new(c.master_seed, 0),
            )
        })
        .map(|t| t.samples)
        .map_err(to_py)
    }

    /// Pointwise ensemble mean and its standard error.
    #[pyo3(signature = (eps, noise, n_trials=500))]
    fn ensemble(
        &self,
        py: Python<'_>,
        eps: f64,
        noise: f64,
        n_trials: usize,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let spec = self.inner.polynomial(eps, noise).map_err(to_py)?;
        let c = self.cfg;
        let ecfg = EnsembleConfig {
            n_trials,
            n_steps: c.n_steps,
            dt: c.dt,
            master_seed: c.master_seed,
            trial_amplitudes: None,
        };
        py.detach(|| hopf_noise::ensemble_average(&spec, &c.history(), &ecfg))
            .map(|r| (r.mean_trajectory.samples, r.std_error))
            .map_err(to_py)
    }

    /// Amplitude sweep; one dict per (eps, D) cell.
    #[pyo3(signature = (eps_grid, noise_grid, n_trials=500))]
    fn scan<'py>(
        &self,
        py: Python<'py>,
        eps_grid: Vec<f64>,
        noise_grid: Vec<f64>,
        n_trials: usize,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let cfg = ExperimentConfig {
            n_trials,
            ..self.cfg
        };
        let table = py
            .detach(|| hopf_noise::scan(&eps_grid, &noise_grid, &self.inner, &cfg))
            .map_err(to_py)?;
        table
            .rows
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("eps", r.eps)?;
                d.set_item("D", r.noise)?;
                d.set_item("amp_noise_free", r.amp_noise_free)?;
                d.set_item("amp_ensemble", r.amp_ensemble)?;
                d.set_item("amp_corrected", r.amp_corrected)?;
                d.set_item("sigma2", r.sigma2)?;
                d.set_item("mu", r.mu)?;
                d.set_item("eps_eff", r.eps_eff)?;
                d.set_item("error", r.error.clone())?;
                Ok(d)
            })
            .collect()
    }

    /// Amplitude of a trajectory sampled with this point's step, using the
    /// default trailing window.
    fn amplitude(&self, samples: Vec<f64>) -> PyResult<f64> {
        amplitude_of(&samples, self.cfg.dt, &self.cfg.window(&self.inner.hopf)).map_err(to_py)
    }
}

#[pymodule]
fn hopf_noise_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHopfPoint>()?;
    m.add_class::<PyExpansionPoint>()?;
    m.add_class::<PySigma2Estimate>()?;
    m.add_class::<PyNoiseCorrection>()?;
    m.add_class::<PyOperatingPoint>()?;
    m.add_function(wrap_pyfunction!(solve_hopf, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(effective_params, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_sigma2, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude, m)?)?;
    Ok(())
}
