//! Python bindings: parameters, closed-form and solver amplitudes, regime
//! approximations and sweeps.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use mazer::sweep::{self, Axis, AxisRange, Engine, Overrides, SweepSpec};
use mazer::{MazerError, ModeProfile};

create_exception!(mazer, NumericalError, PyArithmeticError);

fn to_pyerr(err: MazerError) -> PyErr {
    match err {
        MazerError::InvalidParams(_) | MazerError::Precondition(_) | MazerError::ProfileParse { .. } => {
            PyValueError::new_err(err.to_string())
        }
        MazerError::Io(_) => PyIOError::new_err(err.to_string()),
        _ => NumericalError::new_err(err.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, z: Complex64) -> Bound<'py, PyComplex> {
    PyComplex::from_doubles(py, z.re, z.im)
}

/// Dimensionless parameters (n, k/κ, δ/g, κL).
#[pyclass(name = "MazerParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyParams {
    inner: mazer::MazerParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (n, k_over_kappa, delta_over_g, kappa_l))]
    fn new(n: u32, k_over_kappa: f64, delta_over_g: f64, kappa_l: f64) -> PyResult<Self> {
        mazer::MazerParams::new(n, k_over_kappa, delta_over_g, kappa_l)
            .map(|inner| PyParams { inner })
            .map_err(to_pyerr)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn k_over_kappa(&self) -> f64 {
        self.inner.k_over_kappa
    }

    #[getter]
    fn delta_over_g(&self) -> f64 {
        self.inner.delta_over_g
    }

    #[getter]
    fn kappa_l(&self) -> f64 {
        self.inner.kappa_l
    }

    fn with_kappa_l(&self, kappa_l: f64) -> PyResult<Self> {
        let inner = self.inner.with_kappa_l(kappa_l);
        inner.validate().map_err(to_pyerr)?;
        Ok(PyParams { inner })
    }

    /// "blocked", "cold", "intermediate" or "hot".
    fn regime(&self) -> &'static str {
        mazer::classify_regime(&self.inner).as_str()
    }

    fn emission_allowed(&self) -> bool {
        self.inner.emission_allowed()
    }

    fn transit_time_g(&self) -> f64 {
        self.inner.transit_time_g()
    }

    /// Channel wavenumbers k, k_b, k⁺, k⁻ in units of κ.
    fn wavenumbers<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let w = mazer::channel_wavenumbers(&self.inner);
        let d = PyDict::new(py);
        d.set_item("k", w.k)?;
        d.set_item("k_b", to_py(py, w.k_b))?;
        d.set_item("k_plus", to_py(py, w.k_plus))?;
        d.set_item("k_minus", to_py(py, w.k_minus))?;
        d.set_item("kappa_n", w.kappa_n)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let p = self.inner;
        format!(
            "MazerParams(n={}, k_over_kappa={}, delta_over_g={}, kappa_l={})",
            p.n, p.k_over_kappa, p.delta_over_g, p.kappa_l
        )
    }
}

fn profile_from(name: &str) -> PyResult<ModeProfile> {
    match name {
        "mesa" => Ok(ModeProfile::mesa()),
        "sech2" => Ok(ModeProfile::sech2()),
        "sine2" => Ok(ModeProfile::sine2()),
        other => match other.strip_prefix("file:") {
            Some(path) => ModeProfile::load(path).map_err(to_pyerr),
            None => Err(PyValueError::new_err(format!("unknown profile `{other}`"))),
        },
    }
}

fn amplitudes_dict<'py>(
    py: Python<'py>,
    params: &mazer::MazerParams,
    amps: &mazer::ScatteringAmplitudes,
) -> PyResult<Bound<'py, PyDict>> {
    let probs = mazer::probabilities(amps, &mazer::channel_wavenumbers(params));
    let d = PyDict::new(py);
    d.set_item("rho_a", to_py(py, amps.rho_a))?;
    d.set_item("tau_a", to_py(py, amps.tau_a))?;
    d.set_item("rho_b", to_py(py, amps.rho_b))?;
    d.set_item("tau_b", to_py(py, amps.tau_b))?;
    d.set_item("r_a", probs.r_a)?;
    d.set_item("t_a", probs.t_a)?;
    d.set_item("r_b", probs.r_b)?;
    d.set_item("t_b", probs.t_b)?;
    d.set_item("p_em", probs.emission())?;
    Ok(d)
}

/// Emission probability of the square mode; exactly 0 when the lower channel is closed.
#[pyfunction]
fn emission_probability(params: &PyParams) -> PyResult<f64> {
    mazer::emission_probability(&params.inner).map_err(to_pyerr)
}

/// Closed-form amplitudes and channel probabilities of the square mode.
#[pyfunction]
fn mesa_amplitudes<'py>(py: Python<'py>, params: &PyParams) -> PyResult<Bound<'py, PyDict>> {
    let amps = mazer::mesa_amplitudes(&params.inner).map_err(to_pyerr)?;
    amplitudes_dict(py, &params.inner, &amps)
}

/// Amplitudes from the coupled-channel solver for any mode profile.
#[pyfunction]
#[pyo3(signature = (params, profile = "mesa", slices = None))]
fn solve_scattering<'py>(
    py: Python<'py>,
    params: &PyParams,
    profile: &str,
    slices: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let profile = profile_from(profile)?;
    let n = slices.unwrap_or_else(|| profile.default_slices());
    let amps = mazer::solve_scattering(&profile, &params.inner, n).map_err(to_pyerr)?;
    amplitudes_dict(py, &params.inner, &amps)
}

#[pyfunction]
fn rabi_emission(params: &PyParams) -> f64 {
    mazer::rabi_emission(&params.inner)
}

/// Returns (value, validity flags).
#[pyfunction]
fn cold_emission_approx<'py>(py: Python<'py>, params: &PyParams) -> PyResult<(f64, Bound<'py, PyDict>)> {
    let approx = mazer::cold_emission_approx(&params.inner).map_err(to_pyerr)?;
    let d = PyDict::new(py);
    d.set_item("small_detuning", approx.validity.small_detuning)?;
    d.set_item("long_cavity", approx.validity.long_cavity)?;
    d.set_item("short_cavity", approx.validity.short_cavity)?;
    Ok((approx.value, d))
}

#[pyfunction]
fn cold_emission_fit(params: &PyParams) -> f64 {
    mazer::cold_emission_fit(&params.inner)
}

#[pyfunction]
#[pyo3(signature = (n, delta_over_g, k_over_kappa, m_max = 10))]
fn peak_report<'py>(
    py: Python<'py>,
    n: u32,
    delta_over_g: f64,
    k_over_kappa: f64,
    m_max: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let r = mazer::peak_report(n, delta_over_g, k_over_kappa, m_max);
    let d = PyDict::new(py);
    d.set_item("positions_kappa_l", r.positions_kappa_l)?;
    d.set_item("amplitude", r.amplitude)?;
    d.set_item("finesse", r.finesse)?;
    d.set_item("de_broglie_kappa", r.de_broglie_kappa)?;
    Ok(d)
}

#[pyfunction]
fn critical_k_ratio(n: u32, delta_over_g: f64) -> f64 {
    mazer::critical_k_ratio(n, delta_over_g)
}

#[pyfunction]
fn critical_detuning(n: u32, k_over_kappa: f64) -> f64 {
    mazer::critical_detuning(n, k_over_kappa)
}

#[pyfunction]
fn cold_detuning_bounds(n: u32, k_over_kappa: f64) -> (f64, f64) {
    mazer::cold_detuning_bounds(n, k_over_kappa)
}

fn parse<T: std::str::FromStr<Err = String>>(text: &str) -> PyResult<T> {
    text.parse().map_err(PyValueError::new_err)
}

/// Runs a sweep and returns its CSV text. Pass `preset` or a base point plus an axis range.
#[pyfunction]
#[pyo3(signature = (
    preset = None, *, n = 0, k_over_kappa = 1.0, delta_over_g = 0.0, kappa_l = 0.0,
    axis = None, min = None, max = None, steps = 101, series_axis = None, series = None,
    engine = "closed_form", profile = "mesa", slices = None
))]
#[allow(clippy::too_many_arguments)]
fn sweep_csv(
    py: Python<'_>,
    preset: Option<&str>,
    n: u32,
    k_over_kappa: f64,
    delta_over_g: f64,
    kappa_l: f64,
    axis: Option<&str>,
    min: Option<f64>,
    max: Option<f64>,
    steps: usize,
    series_axis: Option<&str>,
    series: Option<Vec<f64>>,
    engine: &str,
    profile: &str,
    slices: Option<usize>,
) -> PyResult<String> {
    let engine: Engine = parse(engine)?;
    let mut spec = match preset {
        Some(name) => sweep::preset(name).map_err(to_pyerr)?,
        None => {
            let axis: Axis = parse(axis.ok_or_else(|| PyValueError::new_err("axis is required without a preset"))?)?;
            let (lo, hi) = match (min, max) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => return Err(PyValueError::new_err("min and max are required without a preset")),
            };
            let base = mazer::MazerParams {
                n,
                k_over_kappa,
                delta_over_g,
                kappa_l,
            };
            SweepSpec::new(base, AxisRange::new(axis, lo, hi, steps), engine)
        }
    };
    spec.engine = engine;
    if let (Some(a), Some(values)) = (series_axis, series) {
        let a: Axis = parse(a)?;
        spec.series = values.into_iter().map(|v| Overrides::single(a, v)).collect();
    }
    spec.profile = profile_from(profile)?;
    spec.slices = slices.or(spec.slices);
    py.detach(|| sweep::sweep_to_string(&spec)).map_err(to_pyerr)
}

#[pymodule]
#[pyo3(name = "mazer")]
fn mazer_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(emission_probability, m)?)?;
    m.add_function(wrap_pyfunction!(mesa_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(solve_scattering, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_emission, m)?)?;
    m.add_function(wrap_pyfunction!(cold_emission_approx, m)?)?;
    m.add_function(wrap_pyfunction!(cold_emission_fit, m)?)?;
    m.add_function(wrap_pyfunction!(peak_report, m)?)?;
    m.add_function(wrap_pyfunction!(critical_k_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(critical_detuning, m)?)?;
    m.add_function(wrap_pyfunction!(cold_detuning_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
