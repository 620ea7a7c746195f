use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyIndexError, PyValueError};
use pyo3::prelude::*;

use sho_delta::greens::{g0_eval, g_delta_eval, g_grid, GreensError};
use sho_delta::oracle::{oracle_spectrum, OracleConfig, OracleError};
use sho_delta::specfun::{hermite_nu, HermiteOrder, SpecfunError};
use sho_delta::spectra::{self, PiecewiseWavefunction, SpectraError, SpectrumResult};
use sho_delta::tables::{compute_table, TableId};
use sho_delta::units::{DeltaSpike, Epsilon, UnitsError};

create_exception!(sho_delta_py, NumericError, PyArithmeticError);

struct Error(PyErr);

impl From<Error> for PyErr {
    fn from(e: Error) -> Self {
        e.0
    }
}

fn numeric(e: impl std::fmt::Display) -> Error {
    Error(NumericError::new_err(e.to_string()))
}

fn invalid(e: impl std::fmt::Display) -> Error {
    Error(PyValueError::new_err(e.to_string()))
}

impl From<UnitsError> for Error {
    fn from(e: UnitsError) -> Self {
        invalid(e)
    }
}

impl From<SpecfunError> for Error {
    fn from(e: SpecfunError) -> Self {
        numeric(e)
    }
}

impl From<GreensError> for Error {
    fn from(e: GreensError) -> Self {
        match e {
            GreensError::InvalidInput(_) => invalid(e),
            _ => numeric(e),
        }
    }
}

impl From<SpectraError> for Error {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::InvalidInput(_) => invalid(e),
            _ => numeric(e),
        }
    }
}

impl From<OracleError> for Error {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidConfig(_) => invalid(e),
            _ => numeric(e),
        }
    }
}

type Result<T> = std::result::Result<T, Error>;

/// A point interaction λδ(ξ − a) in oscillator units.
#[pyclass(name = "Spike", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySpike(DeltaSpike);

#[pymethods]
impl PySpike {
    #[new]
    fn new(position: f64, strength: f64) -> Result<Self> {
        Ok(Self(DeltaSpike::new(position, strength)?))
    }

    #[getter]
    fn position(&self) -> f64 {
        self.0.position()
    }

    #[getter]
    fn strength(&self) -> f64 {
        self.0.strength()
    }

    fn __repr__(&self) -> String {
        format!("Spike(position={}, strength={})", self.0.position(), self.0.strength())
    }
}

fn to_core(list: &[PySpike]) -> Vec<DeltaSpike> {
    list.iter().map(|s| s.0).collect()
}

#[pyclass(name = "Wavefunction", frozen)]
struct PyWavefunction(PiecewiseWavefunction);

#[pymethods]
impl PyWavefunction {
    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon().value()
    }

    #[getter]
    fn beta(&self) -> Option<f64> {
        self.0.beta()
    }

    fn __call__(&self, x: f64) -> Result<f64> {
        Ok(self.0.try_value(x)?)
    }

    fn derivative(&self, x: f64) -> Result<f64> {
        Ok(self.0.derivative(x)?)
    }

    fn norm_integral(&self) -> Result<f64> {
        Ok(self.0.norm_integral()?)
    }

    fn overlap(&self, other: &PyWavefunction) -> Result<f64> {
        Ok(self.0.overlap(&other.0)?)
    }

    /// `count` samples (ξ, v) evenly spaced over [−range, range].
    fn samples(&self, range: f64, count: usize) -> Result<Vec<(f64, f64)>> {
        Ok(self.0.samples(range, count)?)
    }
}

#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum(SpectrumResult);

#[pymethods]
impl PySpectrum {
    #[getter]
    fn epsilons(&self) -> Vec<f64> {
        self.0.epsilons()
    }

    #[getter]
    fn epsilons_minus_half(&self) -> Vec<f64> {
        self.0.epsilons_minus_half()
    }

    /// Middle-region mixing coefficient per level (two spikes only).
    #[getter]
    fn betas(&self) -> Vec<Option<f64>> {
        self.0.levels.iter().map(|l| l.beta).collect()
    }

    fn __len__(&self) -> usize {
        self.0.levels.len()
    }

    fn wavefunction(&self, n: usize) -> PyResult<PyWavefunction> {
        if n >= self.0.levels.len() {
            return Err(PyIndexError::new_err(format!("level {n} not solved")));
        }
        Ok(PyWavefunction(spectra::wavefunction_for_level(&self.0, n).map_err(Error::from)?))
    }
}

/// Lowest `levels` bound states for one or two spikes.
#[pyfunction]
fn solve_spectrum(py: Python<'_>, spikes: Vec<PySpike>, levels: usize) -> Result<PySpectrum> {
    let s = to_core(&spikes);
    Ok(PySpectrum(py.detach(|| spectra::solve_spectrum(&s, levels))?))
}

#[pyfunction]
fn g0(xi: f64, upsilon: f64, epsilon: f64) -> Result<f64> {
    Ok(g0_eval(xi, upsilon, Epsilon::new(epsilon)?)?)
}

#[pyfunction]
fn g_delta(xi: f64, upsilon: f64, epsilon: f64, spike: PySpike) -> Result<f64> {
    Ok(g_delta_eval(xi, upsilon, Epsilon::new(epsilon)?, spike.0)?)
}

/// Square grid over [−range, range]²; returns (axis, rows) with rows[i][j] = G(axis[i], axis[j]).
#[pyfunction]
#[pyo3(signature = (epsilon, range = 5.0, points = 201, spike = None))]
fn greens_grid(
    py: Python<'_>,
    epsilon: f64,
    range: f64,
    points: usize,
    spike: Option<PySpike>,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let eps = Epsilon::new(epsilon)?;
    let grid = py.detach(|| g_grid(range, points, eps, spike.map(|s| s.0)))?;
    let rows = grid.values.chunks(points).map(|r| r.iter().map(|v| v.value).collect()).collect();
    Ok((grid.axis, rows))
}

#[pyfunction]
#[pyo3(name = "hermite_nu")]
fn py_hermite_nu(nu: f64, x: f64) -> Result<f64> {
    Ok(hermite_nu(HermiteOrder::new(nu)?, x)?)
}

/// Matrix-oracle eigenvalues ε for the lowest `levels` states.
#[pyfunction]
#[pyo3(signature = (spikes, levels, basis_size = 200, folded = true))]
fn oracle_levels(py: Python<'_>, spikes: Vec<PySpike>, levels: usize, basis_size: usize, folded: bool) -> Result<Vec<f64>> {
    let s = to_core(&spikes);
    let cfg = if folded {
        OracleConfig::folded(basis_size)
    } else {
        OracleConfig::truncated(basis_size)
    };
    Ok(py.detach(|| oracle_spectrum(&s, levels, &cfg))?)
}

/// Rows (lambda, n, epsilon_minus_half, printed, abs_diff) of table 1, 2 or 3.
#[pyfunction]
fn table(py: Python<'_>, number: u8) -> Result<Vec<(f64, usize, f64, f64, f64)>> {
    let id = TableId::from_number(number).ok_or_else(|| invalid(format!("no table {number}")))?;
    let t = py.detach(|| compute_table(id))?;
    Ok(t.entries
        .iter()
        .map(|e| (e.lambda, e.n, e.epsilon_minus_half, e.printed, e.abs_diff))
        .collect())
}

#[pymodule]
fn sho_delta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    m.add_class::<PySpike>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyWavefunction>()?;
    m.add_function(wrap_pyfunction!(solve_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(g0, m)?)?;
    m.add_function(wrap_pyfunction!(g_delta, m)?)?;
    m.add_function(wrap_pyfunction!(greens_grid, m)?)?;
    m.add_function(wrap_pyfunction!(py_hermite_nu, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_levels, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    Ok(())
}
