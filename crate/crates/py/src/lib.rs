//! Python bindings for `mihopf`.
//!
//! Rational coefficients cross the boundary as strings such as `"-3/4"`,
//! which `fractions.Fraction` parses directly. Envelope indices and
//! characters use the same JSON encodings as the command-line tool.

use mihopf::combo::{parse_q, q_to_string, Q};
use mihopf::dict;
use mihopf::dynamics::{self, Driver, Grid, Hierarchy, Rule};
use mihopf::envelope::EnvIndex as CoreEnvIndex;
use mihopf::group::{self, Character as CoreCharacter};
use mihopf::hopf;
use mihopf::index::{self, Mode, MultiIndex as CoreMultiIndex, Params as CoreParams};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Q> {
    parse_q(s.trim()).ok_or_else(|| value_error(format!("invalid rational {s:?}")))
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Homogeneity unit, direction weights and sub-structure.
#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: CoreParams,
    mode: Mode,
    mode_name: String,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (alpha = "1/4", weights = (1, 2), mode = "full"))]
    fn new(alpha: &str, weights: (u32, u32), mode: &str) -> PyResult<Self> {
        let inner = CoreParams::new(rational(alpha)?, weights).map_err(value_error)?;
        let m = match mode {
            "full" => Mode::Full,
            "rp" => Mode::Rp,
            "rp2" => Mode::Rp2,
            "gpam" => Mode::Gpam,
            other => return Err(value_error(format!("unknown mode {other:?}: expected full, rp, rp2 or gpam"))),
        };
        Ok(PyParams { inner, mode: m, mode_name: mode.to_string() })
    }

    #[getter]
    fn alpha(&self) -> String {
        q_to_string(&self.inner.alpha)
    }

    #[getter]
    fn mode(&self) -> String {
        self.mode_name.clone()
    }

    fn __repr__(&self) -> String {
        format!("Params(alpha={:?}, mode={:?})", self.alpha(), self.mode_name)
    }
}

/// A multi-index, written like `2e0+e1` or `e(1,0)`.
#[pyclass(name = "MultiIndex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMultiIndex {
    inner: CoreMultiIndex,
}

#[pymethods]
impl PyMultiIndex {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        index::parse_multi_index(text).map(|inner| PyMultiIndex { inner }).map_err(value_error)
    }

    /// Homogeneity `|β|` as a rational string.
    fn homogeneity(&self, params: &PyParams) -> String {
        q_to_string(&index::hom_value(&self.inner, &params.inner))
    }

    /// Whether the index satisfies the model-index constraints.
    fn is_model_index(&self) -> bool {
        index::is_model_index(&self.inner)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MultiIndex({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &PyMultiIndex) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.inner)
    }
}

/// A basis element of the envelope, encoded as JSON `{"J": [...], "m": [m1, m2]}`.
#[pyclass(name = "EnvIndex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEnvIndex {
    inner: CoreEnvIndex,
}

#[pymethods]
impl PyEnvIndex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| PyEnvIndex { inner }).map_err(value_error)
    }

    /// The shift generator `D^(m1, m2)`.
    #[staticmethod]
    fn shift(m1: u32, m2: u32) -> Self {
        PyEnvIndex { inner: CoreEnvIndex::del((m1, m2)) }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    fn __len__(&self) -> usize {
        self.inner.len() as usize
    }

    fn __repr__(&self) -> String {
        format!("EnvIndex({})", self.to_json())
    }

    fn __eq__(&self, other: &PyEnvIndex) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        hash_of(&self.inner)
    }
}

/// A character of the structure group, read from JSON `{"h": [q, q], "tilt": [[γ, n, q], ...]}`.
#[pyclass(name = "Character", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCharacter {
    inner: CoreCharacter,
}

#[pymethods]
impl PyCharacter {
    #[staticmethod]
    fn from_json(text: &str, params: &PyParams) -> PyResult<Self> {
        CoreCharacter::from_json(text, &params.inner).map(|inner| PyCharacter { inner }).map_err(value_error)
    }

    /// Value `f(J)` on an envelope index.
    fn eval(&self, idx: &PyEnvIndex) -> String {
        q_to_string(&self.inner.eval(&idx.inner))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }
}

/// `Δβ` as a list of `(left, right, coefficient)`.
#[pyfunction]
fn delta(beta: &PyMultiIndex, params: &PyParams) -> PyResult<Vec<(PyEnvIndex, PyMultiIndex, String)>> {
    let d = hopf::delta(&beta.inner, params.mode, &params.inner).map_err(value_error)?;
    Ok(d.iter()
        .map(|((l, r), c)| (PyEnvIndex { inner: l.clone() }, PyMultiIndex { inner: r.clone() }, q_to_string(c)))
        .collect())
}

/// `Δ⁺J` as a list of `(left, right, coefficient)`.
#[pyfunction]
fn delta_plus(idx: &PyEnvIndex, params: &PyParams) -> Vec<(PyEnvIndex, PyEnvIndex, String)> {
    hopf::delta_plus(&idx.inner, params.mode, &params.inner)
        .iter()
        .map(|((l, r), c)| (PyEnvIndex { inner: l.clone() }, PyEnvIndex { inner: r.clone() }, q_to_string(c)))
        .collect()
}

/// The antipode of `J` as a list of `(index, coefficient)`.
#[pyfunction]
fn antipode(idx: &PyEnvIndex, params: &PyParams) -> Vec<(PyEnvIndex, String)> {
    hopf::antipode_index(&idx.inner, params.mode, &params.inner)
        .iter()
        .map(|(k, c)| (PyEnvIndex { inner: k.clone() }, q_to_string(c)))
        .collect()
}

/// `Γ_f β` as a list of `(index, coefficient)`.
#[pyfunction]
fn gamma(f: &PyCharacter, beta: &PyMultiIndex, params: &PyParams) -> PyResult<Vec<(PyMultiIndex, String)>> {
    let s = group::gamma(&f.inner, &beta.inner, &params.inner).map_err(value_error)?;
    Ok(s.iter().map(|(k, c)| (PyMultiIndex { inner: k.clone() }, q_to_string(c))).collect())
}

/// Result of an identity check: number of checks and the counterexamples found.
fn report(r: dict::Report) -> (usize, Vec<String>) {
    (r.checked, r.counterexamples)
}

/// Checks an identity on a bounded pool and returns `(checked, counterexamples)`.
///
/// Supported names: `comodule`, `hopf-rp`, `prelie-rp`, `prelie-gpam`, `sharp`.
#[pyfunction]
#[pyo3(signature = (identity, params, max_edges = 4, max_hom = "11/4", max_len = 3, max_n = 2, max_leaves = 3))]
fn verify(
    identity: &str,
    params: &PyParams,
    max_edges: u32,
    max_hom: &str,
    max_len: u32,
    max_n: i64,
    max_leaves: usize,
) -> PyResult<(usize, Vec<String>)> {
    let p = &params.inner;
    match identity {
        "comodule" => {
            let bound = rational(max_hom)?;
            let kmax = (&bound / &p.alpha).to_f64().floor().max(0.0) as u32;
            let letters = index::full_letters(kmax, max_n, p);
            let pool = index::enumerate_indices(&letters, max_len, |g| {
                index::is_model_index(g) && !g.is_one() && index::hom_value(g, p) <= bound
            });
            let mut r = dict::Report::new("comodule", format!("{} model indices", pool.len()));
            for beta in &pool {
                let ok = hopf::check_comodule(beta, Mode::Full, p).map_err(value_error)?
                    && hopf::check_counit(beta, Mode::Full, p).map_err(value_error)?;
                r.check(ok, || beta.to_string());
            }
            Ok(report(r))
        }
        "hopf-rp" => Ok(report(dict::verify_hopf_morphism_rp(max_edges, p))),
        "prelie-rp" => Ok(report(dict::verify_prelie_morphism_rp(max_edges))),
        "prelie-gpam" => Ok(report(dict::verify_prelie_morphism_gpam(max_edges, max_n, max_leaves, p))),
        "sharp" => Ok(report(dict::verify_sharp_intertwine(max_edges, max_n, max_leaves, p))),
        other => Err(value_error(format!("unknown identity {other:?}"))),
    }
}

fn driver(text: &str) -> PyResult<Driver> {
    let err = || value_error(format!("invalid driver {text:?}: expected cos, const:<c> or poly:<c0>,<c1>,…"));
    if text == "cos" {
        return Ok(Driver::Cos);
    }
    if let Some(c) = text.strip_prefix("const:") {
        return c.parse().map(Driver::Const).map_err(|_| err());
    }
    if let Some(cs) = text.strip_prefix("poly:") {
        let coeffs: Result<Vec<f64>, _> = cs.split(',').map(|c| c.trim().parse::<f64>()).collect();
        return coeffs.map(Driver::Poly).map_err(|_| err());
    }
    Err(err())
}

/// Samples `Π_β` on a grid of `[0, t]` for every populated rough-path index
/// with at most `max_edges` edges. Returns the grid, the paths keyed by index
/// and the largest defect of the tree expansion.
#[pyfunction]
#[pyo3(signature = (driver_text = "cos", t = 1.0, n = 2000, max_edges = 4))]
fn model(driver_text: &str, t: f64, n: usize, max_edges: u32) -> PyResult<(Vec<f64>, BTreeMap<String, Vec<f64>>, f64)> {
    let grid = Grid::new(t, n).map_err(value_error)?;
    let xi = driver(driver_text)?.sample(grid);
    let mut h = Hierarchy::new(xi.clone(), Rule::Simpson);
    let paths = dict::rp_pool(max_edges).into_iter().map(|b| (b.to_string(), h.model(&b).values)).collect();
    let defect = dynamics::verify_lemma_rp(&xi, max_edges, Rule::Simpson);
    Ok((grid.points(), paths, defect))
}

#[pymodule]
fn mihopf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyMultiIndex>()?;
    m.add_class::<PyEnvIndex>()?;
    m.add_class::<PyCharacter>()?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_plus, m)?)?;
    m.add_function(wrap_pyfunction!(antipode, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(model, m)?)?;
    Ok(())
}
