//! Python bindings. Values cross the boundary as `fractions.Fraction`.

use hedonica::gadgets::{self, GadgetInstance};
use hedonica::io as hio;
use hedonica::{DictatorPolicy, Error, Limits, Property, Rational};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(hedonica, HedonicaError, PyException);
create_exception!(hedonica, ResourceExhausted, HedonicaError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => ResourceExhausted::new_err(e.to_string()),
        Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        _ => HedonicaError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let f = value.py().import("fractions")?.getattr("Fraction")?.call1((value,))?;
    let part = |name: &str| -> PyResult<BigInt> {
        let text: String = f.getattr(name)?.str()?.extract()?;
        text.parse::<BigInt>()
            .map_err(|_| PyValueError::new_err(format!("cannot read {} as a number", text)))
    };
    Ok(Rational::new(part("numerator")?, part("denominator")?))
}

fn limits(max_players: Option<usize>) -> Limits {
    max_players.map_or_else(Limits::default, Limits::new)
}

/// A hedonic game with exact rational values.
#[pyclass(name = "Game", module = "hedonica", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGame {
    inner: hedonica::Game,
}

#[pymethods]
impl PyGame {
    /// `rows[i][j]` is player i+1's value for player j+1; entries may be
    /// ints, Fractions or strings such as "3/4".
    #[new]
    #[pyo3(signature = (rows, labels = None))]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(rational).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let mut inner = hedonica::Game::new(rows).map_err(to_py_err)?;
        if let Some(l) = labels {
            inner = inner.with_labels(l).map_err(to_py_err)?;
        }
        Ok(PyGame { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGame {
            inner: hio::parse_game(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn three_player_fixture() -> Self {
        PyGame {
            inner: hedonica::Game::three_player_fixture(),
        }
    }

    fn serialize(&self) -> String {
        hio::serialize_game(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.inner.labels().map(<[String]>::to_vec)
    }

    fn value<'py>(&self, py: Python<'py>, i: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
        let n = self.inner.n();
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(PyValueError::new_err(format!("players are numbered 1..{}", n)));
        }
        fraction(py, self.inner.value(i, j))
    }

    fn utility<'py>(&self, py: Python<'py>, player: usize, coalition: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let c = hedonica::Coalition::new(coalition).map_err(to_py_err)?;
        fraction(py, &self.inner.utility(player, &c).map_err(to_py_err)?)
    }

    /// Utilitarian, egalitarian and elitist welfare plus per-player utilities.
    fn welfare<'py>(&self, py: Python<'py>, partition: &PyPartition) -> PyResult<Bound<'py, PyDict>> {
        let w = self.inner.welfare(&partition.inner).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("utilitarian", fraction(py, &w.utilitarian)?)?;
        d.set_item("egalitarian", fraction(py, &w.egalitarian)?)?;
        d.set_item("elitist", fraction(py, &w.elitist)?)?;
        let per = w
            .per_player
            .iter()
            .map(|u| fraction(py, u))
            .collect::<PyResult<Vec<_>>>()?;
        d.set_item("per_player", PyList::new(py, per)?)?;
        Ok(d)
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn is_strict(&self) -> bool {
        self.inner.is_strict()
    }

    fn __repr__(&self) -> String {
        format!("Game(n={})", self.inner.n())
    }
}

/// A partition of players `1..n` into coalitions.
#[pyclass(name = "Partition", module = "hedonica", frozen, eq, ord, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyPartition {
    inner: hedonica::Partition,
}

#[pymethods]
impl PyPartition {
    #[new]
    fn new(n: usize, blocks: Vec<Vec<usize>>) -> PyResult<Self> {
        let blocks = blocks
            .into_iter()
            .map(hedonica::Coalition::new)
            .collect::<hedonica::Result<Vec<_>>>()
            .map_err(to_py_err)?;
        Ok(PyPartition {
            inner: hedonica::Partition::new(n, blocks).map_err(to_py_err)?,
        })
    }

    /// Parses `{1,2}|{3}`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPartition {
            inner: text.parse().map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn singletons(n: usize) -> Self {
        PyPartition {
            inner: hedonica::Partition::singletons(n),
        }
    }

    #[staticmethod]
    fn grand(n: usize) -> Self {
        PyPartition {
            inner: hedonica::Partition::grand(n),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner
            .blocks()
            .iter()
            .map(|b| b.members().to_vec())
            .collect()
    }

    #[getter]
    fn rgs(&self) -> Vec<usize> {
        self.inner.rgs().to_vec()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Partition('{}')", self.inner)
    }
}

fn wrap(p: hedonica::Partition) -> PyPartition {
    PyPartition { inner: p }
}

/// Runs one checker. `prop` is one of ir, ns, is, ef, po.
#[pyfunction]
#[pyo3(signature = (game, partition, prop, budget = None, max_players = None))]
fn check<'py>(
    py: Python<'py>,
    game: &PyGame,
    partition: &PyPartition,
    prop: &str,
    budget: Option<u64>,
    max_players: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let prop: Property = prop.parse().map_err(to_py_err)?;
    let r = hedonica::check(&game.inner, &partition.inner, prop, budget, limits(max_players))
        .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("property", r.property.code())?;
    d.set_item("verdict", r.verdict.to_string())?;
    d.set_item("witness", r.witness.as_ref().map(|w| w.to_string()))?;
    d.set_item("work", r.work)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn max_utilitarian<'py>(
    py: Python<'py>,
    game: &PyGame,
    max_players: Option<usize>,
) -> PyResult<(PyPartition, Bound<'py, PyAny>, u64)> {
    let (p, v, s) = hedonica::max_utilitarian(&game.inner, limits(max_players)).map_err(to_py_err)?;
    Ok((wrap(p), fraction(py, &v)?, s.nodes_expanded))
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn max_egalitarian<'py>(
    py: Python<'py>,
    game: &PyGame,
    max_players: Option<usize>,
) -> PyResult<(PyPartition, Bound<'py, PyAny>, u64)> {
    let (p, v, s) = hedonica::max_egalitarian(&game.inner, limits(max_players)).map_err(to_py_err)?;
    Ok((wrap(p), fraction(py, &v)?, s.nodes_expanded))
}

#[pyfunction]
fn max_elitist<'py>(py: Python<'py>, game: &PyGame) -> PyResult<(PyPartition, Bound<'py, PyAny>)> {
    let (p, v) = hedonica::max_elitist(&game.inner);
    Ok((wrap(p), fraction(py, &v)?))
}

/// `order` is "index" or "min-f".
#[pyfunction]
#[pyo3(signature = (game, order = "index"))]
fn serial_dictatorship(game: &PyGame, order: &str) -> PyResult<PyPartition> {
    let policy = match order {
        "index" => DictatorPolicy::LowestIndex,
        "min-f" => DictatorPolicy::MinPositiveSum,
        other => return Err(PyValueError::new_err(format!("unknown dictator order {}", other))),
    };
    hedonica::serial_dictatorship(&game.inner, policy)
        .map(wrap)
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (game, seed = None))]
fn nash_local_search(game: &PyGame, seed: Option<&PyPartition>) -> PyResult<(PyPartition, u64)> {
    let start = seed.map_or_else(|| hedonica::Partition::singletons(game.inner.n()), |s| s.inner.clone());
    let (p, s) = hedonica::nash_local_search(&game.inner, &start).map_err(to_py_err)?;
    Ok((wrap(p), s.nodes_expanded))
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn pareto_ir_improve(game: &PyGame, max_players: Option<usize>) -> PyResult<PyPartition> {
    let (p, _) = hedonica::pareto_ir_improve(&game.inner, limits(max_players)).map_err(to_py_err)?;
    Ok(wrap(p))
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn exists_ef_ns(game: &PyGame, max_players: Option<usize>) -> PyResult<Option<PyPartition>> {
    Ok(hedonica::exists_ef_ns(&game.inner, limits(max_players))
        .map_err(to_py_err)?
        .map(wrap))
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn exists_ef_po(game: &PyGame, max_players: Option<usize>) -> PyResult<Option<PyPartition>> {
    Ok(hedonica::exists_ef_po(&game.inner, limits(max_players))
        .map_err(to_py_err)?
        .map(wrap))
}

#[pyfunction]
fn bell_number(n: usize) -> PyResult<u128> {
    u128::try_from(hedonica::bell_number(n))
        .map_err(|_| ResourceExhausted::new_err(format!("Bell number of {} overflows", n)))
}

/// Every partition of `1..n` in enumeration order.
#[pyfunction]
#[pyo3(signature = (n, max_players = None))]
fn partitions(n: usize, max_players: Option<usize>) -> PyResult<Vec<PyPartition>> {
    Ok(hedonica::enumerate_partitions(n, limits(max_players))
        .map_err(to_py_err)?
        .map(wrap)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (game, max_players = None))]
fn pareto_set(game: &PyGame, max_players: Option<usize>) -> PyResult<Vec<PyPartition>> {
    Ok(hedonica::oracle_pareto_set(&game.inner, limits(max_players))
        .map_err(to_py_err)?
        .into_iter()
        .map(wrap)
        .collect())
}

/// Builds a gadget from a source file body. `kind` is one of po-verify,
/// ef-ns, egal, po-ir, ef-po. Returns the game, the distinguished partition
/// (or None) and the role labels.
#[pyfunction]
fn gadget(kind: &str, source: &str) -> PyResult<(PyGame, Option<PyPartition>, Vec<String>)> {
    let built: hedonica::Result<GadgetInstance> = match kind {
        "po-verify" => hio::parse_e3c(source).and_then(|e| gadgets::gadget_po_verify(&e)),
        "ef-ns" => hio::parse_e3c(source).and_then(|e| gadgets::gadget_ef_ns(&e)),
        "egal" => hio::parse_scheduling(source).and_then(|s| gadgets::gadget_egalitarian(&s)),
        "po-ir" => hio::parse_subset_sum(source).and_then(|a| gadgets::gadget_po_ir(&a)),
        "ef-po" => hio::parse_allocation(source).and_then(|a| gadgets::gadget_ef_po(&a)),
        other => return Err(PyValueError::new_err(format!("unknown gadget {}", other))),
    };
    let g = built.map_err(to_py_err)?;
    Ok((
        PyGame { inner: g.game },
        g.distinguished_partition.map(wrap),
        g.role_labels,
    ))
}

/// Exact cover of the ground set by the given triples, if one exists.
#[pyfunction]
fn solve_e3c(r_size: usize, triples: Vec<[usize; 3]>) -> PyResult<Option<Vec<[usize; 3]>>> {
    let e = gadgets::E3CInstance::new(r_size, triples).map_err(to_py_err)?;
    gadgets::solve_e3c(&e).map_err(to_py_err)
}

#[pymodule(name = "hedonica")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyPartition>()?;
    m.add("HedonicaError", m.py().get_type::<HedonicaError>())?;
    m.add("ResourceExhausted", m.py().get_type::<ResourceExhausted>())?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(max_utilitarian, m)?)?;
    m.add_function(wrap_pyfunction!(max_egalitarian, m)?)?;
    m.add_function(wrap_pyfunction!(max_elitist, m)?)?;
    m.add_function(wrap_pyfunction!(serial_dictatorship, m)?)?;
    m.add_function(wrap_pyfunction!(nash_local_search, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_ir_improve, m)?)?;
    m.add_function(wrap_pyfunction!(exists_ef_ns, m)?)?;
    m.add_function(wrap_pyfunction!(exists_ef_po, m)?)?;
    m.add_function(wrap_pyfunction!(bell_number, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_set, m)?)?;
    m.add_function(wrap_pyfunction!(gadget, m)?)?;
    m.add_function(wrap_pyfunction!(solve_e3c, m)?)?;
    Ok(())
}
