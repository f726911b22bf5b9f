//! Python bindings: model, contract valuation, premium search and the
//! Monte Carlo default transform.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use swapgame::{
    equilibrium_premium, ContractTerms, Error, GameValuation, McConfig, ModelParams, PremiumTemplate,
    ScaleCoefficients, SolverOptions, StepDirection,
};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::NoConvergence(_) | Error::Bracket(_) | Error::Io(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn solver(eps: f64, max_iter: usize) -> SolverOptions {
    SolverOptions { eps, max_iter, ..SolverOptions::default() }
}

/// Drift that makes the discounted asset value a martingale.
#[pyfunction]
#[pyo3(signature = (r, nu, lambda_, eta))]
fn calibrate_drift(r: f64, nu: f64, lambda_: f64, eta: f64) -> f64 {
    swapgame::calibrate_drift(r, nu, lambda_, eta)
}

/// Log-asset model. `mu=None` calibrates the drift.
#[pyclass(name = "Model", frozen, from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: ModelParams,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (r=0.03, nu=0.2, lambda_=1.0, eta=2.0, mu=None))]
    fn new(r: f64, nu: f64, lambda_: f64, eta: f64, mu: Option<f64>) -> PyResult<Self> {
        let inner = match mu {
            Some(mu) => ModelParams::new(r, mu, nu, lambda_, eta),
            None => ModelParams::calibrated(r, nu, lambda_, eta),
        }
        .map_err(to_py)?;
        Ok(PyModel { inner })
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.r
    }
    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }
    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu
    }
    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda
    }
    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    fn laplace_exponent(&self, s: f64) -> PyResult<f64> {
        self.inner.laplace_exponent(s).map_err(to_py)
    }

    /// Analytic `E[e^{-r τ}]` for the default time started at `x`.
    fn default_transform(&self, x: f64) -> PyResult<f64> {
        Ok(ScaleCoefficients::build(&self.inner).map_err(to_py)?.zeta(x))
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!("Model(r={}, mu={}, nu={}, lambda_={}, eta={})", m.r, m.mu, m.nu, m.lambda, m.eta)
    }
}

/// Contract terms. Give either `q` or both of `p_hat` and `alpha_hat`.
#[pyclass(name = "Contract", frozen, from_py_object)]
#[derive(Clone)]
struct PyContract {
    inner: ContractTerms,
}

#[pymethods]
impl PyContract {
    #[new]
    #[pyo3(signature = (p, alpha=1.0, q=None, p_hat=None, alpha_hat=None, gamma_b=0.1, gamma_s=0.1))]
    fn new(
        p: f64,
        alpha: f64,
        q: Option<f64>,
        p_hat: Option<f64>,
        alpha_hat: Option<f64>,
        gamma_b: f64,
        gamma_s: f64,
    ) -> PyResult<Self> {
        let inner = match (q, p_hat, alpha_hat) {
            (Some(q), None, None) => ContractTerms::with_ratio(p, alpha, q, gamma_b, gamma_s),
            (None, Some(ph), Some(ah)) => ContractTerms::new(p, alpha, ph, ah, gamma_b, gamma_s),
            (None, None, None) => ContractTerms::with_ratio(p, alpha, 0.5, gamma_b, gamma_s),
            _ => return Err(PyValueError::new_err("give either q or both p_hat and alpha_hat")),
        };
        if inner.direction().map_err(to_py)? != StepDirection::Vanilla {
            inner.canonical().map_err(to_py)?;
        }
        Ok(PyContract { inner })
    }

    #[getter]
    fn direction(&self) -> &'static str {
        match self.inner.direction() {
            Ok(StepDirection::Down) => "down",
            Ok(StepDirection::Up) => "up",
            _ => "vanilla",
        }
    }

    fn __repr__(&self) -> String {
        let t = &self.inner;
        format!(
            "Contract(p={}, alpha={}, p_hat={}, alpha_hat={}, gamma_b={}, gamma_s={})",
            t.p, t.alpha, t.p_hat, t.alpha_hat, t.gamma_b, t.gamma_s
        )
    }
}

/// A contract priced at its equilibrium exercise levels.
#[pyclass(name = "Valuation", frozen)]
struct PyValuation {
    inner: GameValuation,
}

#[pymethods]
impl PyValuation {
    #[new]
    #[pyo3(signature = (model, contract, eps=1e-8, max_iter=200))]
    fn new(py: Python<'_>, model: PyModel, contract: PyContract, eps: f64, max_iter: usize) -> PyResult<Self> {
        let opts = solver(eps, max_iter);
        let inner = py
            .detach(|| GameValuation::solve(&model.inner, &contract.inner, &opts))
            .map_err(to_py)?;
        Ok(PyValuation { inner })
    }

    /// Case number 1 to 4, `None` for a vanilla contract.
    #[getter]
    fn case(&self) -> Option<u8> {
        self.inner.case().map(|c| c.id())
    }

    /// Seller's exercise level (`inf` if never).
    #[getter]
    fn a_star(&self) -> Option<f64> {
        self.inner.levels().map(|l| l.seller.value())
    }

    /// Buyer's exercise level (`inf` if never).
    #[getter]
    fn b_star(&self) -> Option<f64> {
        self.inner.levels().map(|l| l.buyer.value())
    }

    #[getter]
    fn nash(&self) -> Option<bool> {
        self.inner.solution().map(|s| s.nash)
    }

    #[getter]
    fn note(&self) -> Option<String> {
        self.inner.solution().and_then(|s| s.note.clone())
    }

    fn value(&self, x: f64) -> PyResult<f64> {
        self.inner.value(x).map_err(to_py)
    }

    fn game_value(&self, x: f64) -> PyResult<f64> {
        self.inner.game_value(x).map_err(to_py)
    }

    fn region(&self, x: f64) -> &'static str {
        self.inner.region(x).label()
    }

    fn curve(&self, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.curve(&xs).map_err(to_py)?.values)
    }
}

/// Premium `p*` with zero buyer value at `x`; returns `(p_star, value)`.
#[pyfunction]
#[pyo3(signature = (model, x=1.5, alpha=1.0, q=0.5, gamma_b=0.1, gamma_s=0.1, eps=1e-8, max_iter=200))]
#[allow(clippy::too_many_arguments)]
fn premium(
    py: Python<'_>,
    model: PyModel,
    x: f64,
    alpha: f64,
    q: f64,
    gamma_b: f64,
    gamma_s: f64,
    eps: f64,
    max_iter: usize,
) -> PyResult<(f64, f64)> {
    let template = PremiumTemplate { alpha, q, gamma_b, gamma_s };
    let opts = solver(eps, max_iter);
    let sol = py
        .detach(|| equilibrium_premium(&model.inner, x, &template, &opts))
        .map_err(to_py)?;
    Ok((sol.p_star, sol.value))
}

/// Monte Carlo `E[e^{-r τ}]` from `x0`; returns `(mean, stderr)`.
#[pyfunction]
#[pyo3(signature = (model, x0, n_paths=100_000, seed=42, antithetic=false, dt=None))]
fn mc_default_transform(
    py: Python<'_>,
    model: PyModel,
    x0: f64,
    n_paths: usize,
    seed: u64,
    antithetic: bool,
    dt: Option<f64>,
) -> PyResult<(f64, f64)> {
    let mut cfg = McConfig::for_rate(model.inner.r, n_paths, seed);
    cfg.antithetic = antithetic;
    if let Some(dt) = dt {
        cfg.dt = dt;
    }
    let e = py
        .detach(|| swapgame::mc::estimate_default_transform(&model.inner, x0, &cfg))
        .map_err(to_py)?;
    Ok((e.mean, e.stderr))
}

#[pymodule(name = "swapgame")]
fn swapgame_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyContract>()?;
    m.add_class::<PyValuation>()?;
    m.add_function(wrap_pyfunction!(calibrate_drift, m)?)?;
    m.add_function(wrap_pyfunction!(premium, m)?)?;
    m.add_function(wrap_pyfunction!(mc_default_transform, m)?)?;
    Ok(())
}
