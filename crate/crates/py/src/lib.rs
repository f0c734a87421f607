//! Python bindings: weight lattices, the scalarization family, dominance
//! and hypervolume helpers, and a single-run optimizer entry point.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use moead_glp::algorithm::{run as run_core, AlgorithmVariant, RunConfig, Strategy};
use moead_glp::problems::{Family, ProblemSpec};
use moead_glp::scalarization::{self, Exponent};
use moead_glp::{decomposition, metrics, types};

fn err(e: moead_glp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Positive infinity selects the Chebyshev limit.
fn exponent(p: f64) -> PyResult<Exponent> {
    if p.is_infinite() && p > 0.0 {
        return Ok(Exponent::Infinity);
    }
    Exponent::finite(p).map_err(err)
}

/// Simplex-lattice weight vectors for m objectives and the given divisions.
#[pyfunction]
fn lattice_weights(m: usize, divisions: usize) -> PyResult<Vec<Vec<f64>>> {
    decomposition::simplex_lattice_weights(m, divisions).map_err(err)
}

/// Weighted p-norm of f - z (finite p >= 1).
#[pyfunction]
fn scalarize_lp(f: Vec<f64>, w: Vec<f64>, z: Vec<f64>, p: f64) -> PyResult<f64> {
    scalarization::scalarize_lp(&f, &w, &z, p).map_err(err)
}

/// Weighted Chebyshev distance between f and z.
#[pyfunction]
fn scalarize_tch(f: Vec<f64>, w: Vec<f64>, z: Vec<f64>) -> PyResult<f64> {
    scalarization::scalarize_tch(&f, &w, &z).map_err(err)
}

/// Product-normalized Lp value; p may be float("inf").
#[pyfunction]
fn scalarize_glp(f: Vec<f64>, w: Vec<f64>, z: Vec<f64>, p: f64) -> PyResult<f64> {
    scalarization::scalarize_glp(&f, &w, &z, exponent(p)?).map_err(err)
}

/// Weight correction factor (prod w_i)^(-1/m).
#[pyfunction]
fn h_weight(w: Vec<f64>) -> PyResult<f64> {
    scalarization::h_weight(&w).map_err(err)
}

/// Element-wise reciprocal direction of a weight vector.
#[pyfunction]
fn direction_vector(w: Vec<f64>) -> PyResult<Vec<f64>> {
    scalarization::direction_vector(&w).map_err(err)
}

/// True when u Pareto-dominates v (minimization).
#[pyfunction]
fn dominates(u: Vec<f64>, v: Vec<f64>) -> PyResult<bool> {
    types::dominates(&u, &v).map_err(err)
}

/// Nondominated subset of the given objective vectors, duplicates collapsed.
#[pyfunction]
fn nondominated_filter(points: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    types::nondominated_filter(&points).map_err(err)
}

/// Exact hypervolume dominated by `points` and bounded by `reference`.
#[pyfunction]
fn hypervolume(points: Vec<Vec<f64>>, reference: Vec<f64>) -> PyResult<f64> {
    metrics::hypervolume(&points, &reference).map_err(err)
}

/// Hypervolume after normalizing by the bounds, against the 1.1 reference.
#[pyfunction]
fn normalized_hypervolume(front: Vec<Vec<f64>>, lo: Vec<f64>, hi: Vec<f64>) -> PyResult<f64> {
    metrics::normalized_hypervolume(&front, &lo, &hi).map_err(err)
}

/// One optimization run. Returns a dict with the final front, evaluation
/// and generation counts, and the truncation flag.
#[pyfunction]
#[pyo3(signature = (
    problem, m, strategy, p, population, budget, seed,
    mating_size=None, replacement_size=None, instance_seed=0,
))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    problem: &str,
    m: usize,
    strategy: &str,
    p: f64,
    population: usize,
    budget: usize,
    seed: u64,
    mating_size: Option<usize>,
    replacement_size: Option<usize>,
    instance_seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let family: Family = problem.parse().map_err(err)?;
    let strategy: Strategy = strategy.parse().map_err(err)?;
    let variant = AlgorithmVariant::standard(strategy, exponent(p)?);
    let spec = ProblemSpec::new(family, m, instance_seed).map_err(err)?;
    let mut config = RunConfig::new(variant, population, budget, seed);
    if let Some(t) = mating_size {
        config.mating_size = t;
    }
    if let Some(t) = replacement_size {
        config.replacement_size = t;
    }
    let result = py
        .detach(|| {
            let built = spec.build()?;
            run_core(built.as_ref(), &config)
        })
        .map_err(err)?;

    let out = PyDict::new(py);
    out.set_item("front", result.front)?;
    out.set_item("evaluations", result.evaluations)?;
    out.set_item("generations", result.generations)?;
    out.set_item("truncated", result.truncated)?;
    Ok(out)
}

#[pymodule]
fn moead_glp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lattice_weights, m)?)?;
    m.add_function(wrap_pyfunction!(scalarize_lp, m)?)?;
    m.add_function(wrap_pyfunction!(scalarize_tch, m)?)?;
    m.add_function(wrap_pyfunction!(scalarize_glp, m)?)?;
    m.add_function(wrap_pyfunction!(h_weight, m)?)?;
    m.add_function(wrap_pyfunction!(direction_vector, m)?)?;
    m.add_function(wrap_pyfunction!(dominates, m)?)?;
    m.add_function(wrap_pyfunction!(nondominated_filter, m)?)?;
    m.add_function(wrap_pyfunction!(hypervolume, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_hypervolume, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
