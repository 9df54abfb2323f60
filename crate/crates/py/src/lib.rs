//! Python bindings. Permutations cross the boundary as 0-based cycle strings,
//! words as text such as `"a b^-1"`, reports as JSON strings.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rubin_core::game as g;
use rubin_core::parse::{parse_group_spec, parse_perm, parse_word, ParsedGroup};
use rubin_core::symbolic as sym;
use rubin_core::{Membership, Perm, SymWord};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A fully enumerated permutation group.
#[pyclass(name = "FiniteGroup", module = "rubin")]
#[derive(Clone)]
struct PyFiniteGroup {
    inner: rubin_core::FiniteGroup,
}

impl PyFiniteGroup {
    fn perm(&self, text: &str) -> PyResult<Perm> {
        let p = parse_perm(text, self.inner.degree()).map_err(err)?;
        if !self.inner.contains(&p) {
            return Err(err(format!("{p} is not in the group")));
        }
        Ok(p)
    }

    fn names(&self, els: impl IntoIterator<Item = usize>) -> Vec<String> {
        els.into_iter()
            .map(|i| self.inner.element(i).to_string())
            .collect()
    }
}

#[pymethods]
impl PyFiniteGroup {
    /// `"S4"`, `"perm: (0 1), (0 1 2 3)"`, ...
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        match parse_group_spec(spec).map_err(err)? {
            ParsedGroup::Finite(inner) => Ok(PyFiniteGroup { inner }),
            ParsedGroup::Symbolic(_) => Err(err("not a finite group; use GroupExpr")),
        }
    }

    #[staticmethod]
    fn direct_product(left: &Self, right: &Self) -> PyResult<Self> {
        let (inner, _) = left.inner.direct_product(&right.inner).map_err(err)?;
        Ok(PyFiniteGroup { inner })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn elements(&self) -> Vec<String> {
        self.names(0..self.inner.order())
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn centralizer(&self, g: &str) -> PyResult<Vec<String>> {
        let c = self.inner.centralizer(&self.perm(g)?).map_err(err)?;
        Ok(self.names(c))
    }

    fn is_algebraically_disjoint(&self, g: &str, f: &str) -> PyResult<bool> {
        rubin_core::is_algebraically_disjoint(&self.inner, &self.perm(g)?, &self.perm(f)?)
            .map_err(err)
    }

    fn compute_s(&self, f: &str) -> PyResult<Vec<String>> {
        let s = rubin_core::compute_s(&self.inner, &self.perm(f)?).map_err(err)?;
        Ok(self.names(s))
    }

    fn centralizer_of_set(&self, set: Vec<String>) -> PyResult<Vec<String>> {
        let ps = set
            .iter()
            .map(|s| self.perm(s))
            .collect::<PyResult<Vec<_>>>()?;
        let c = rubin_core::centralizer_of_set(&self.inner, &ps).map_err(err)?;
        Ok(self.names(c))
    }

    /// Rows indexed by `g`, columns by `f`, in the order of `elements()`.
    fn disjointness_matrix(&self) -> Vec<Vec<bool>> {
        rubin_core::DisjointnessMatrix::compute(&self.inner).matrix
    }

    fn rubin_poset(&self) -> PyResult<PyRubinPoset> {
        let p = rubin_core::rubin_poset(&self.inner).map_err(err)?;
        Ok(PyRubinPoset {
            dot: p.to_dot(&self.inner),
            inner: p,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "FiniteGroup(order={}, degree={})",
            self.inner.order(),
            self.inner.degree()
        )
    }
}

#[pyclass(name = "RubinPoset", module = "rubin")]
struct PyRubinPoset {
    inner: rubin_core::RubinPoset,
    dot: String,
}

#[pymethods]
impl PyRubinPoset {
    /// Element-index sets of the nodes, smallest first.
    #[getter]
    fn nodes(&self) -> Vec<Vec<usize>> {
        self.inner
            .nodes
            .iter()
            .map(|n| n.elements.clone())
            .collect()
    }

    #[getter]
    fn hasse(&self) -> Vec<(usize, usize)> {
        self.inner.hasse.clone()
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        self.inner.leq(i, j)
    }

    fn is_intersection_closed(&self) -> bool {
        self.inner.is_intersection_closed()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        self.dot.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.nodes.len()
    }
}

/// A group from the torsion-free expression grammar.
#[pyclass(name = "GroupExpr", module = "rubin")]
#[derive(Clone)]
struct PyGroupExpr {
    inner: rubin_core::GroupExpr,
}

fn word(text: &str) -> PyResult<SymWord> {
    parse_word(text).map_err(err)
}

#[pymethods]
impl PyGroupExpr {
    /// `"free(g, h)"`, `"bs(2; g, h)"`, `"amalgam(free(g,h), free(g2,h2); g ~ g2)"`, ...
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        match parse_group_spec(spec).map_err(err)? {
            ParsedGroup::Symbolic(inner) => Ok(PyGroupExpr { inner }),
            ParsedGroup::Finite(_) => Err(err("not a group expression; use FiniteGroup")),
        }
    }

    fn generators(&self) -> Vec<String> {
        self.inner
            .generators()
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn is_identity(&self, w: &str) -> PyResult<bool> {
        self.inner.is_identity(&word(w)?).map_err(err)
    }

    fn commute(&self, u: &str, v: &str) -> PyResult<bool> {
        self.inner.commute(&word(u)?, &word(v)?).map_err(err)
    }

    /// `k` with `x = c^k`, or `None`.
    fn cyclic_membership(&self, x: &str, c: &str) -> PyResult<Option<i64>> {
        let m = self
            .inner
            .cyclic_membership(&word(x)?, &word(c)?)
            .map_err(err)?;
        Ok(match m {
            Membership::Member(k) => Some(k),
            Membership::NotMember => None,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "ConstructionReport", module = "rubin")]
struct PyReport {
    inner: sym::ConstructionReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn case(&self) -> String {
        self.inner.case.clone()
    }

    /// `(description, group, passed)` triples.
    #[getter]
    fn checks(&self) -> Vec<(String, String, bool)> {
        self.inner
            .checks
            .iter()
            .map(|c| (c.description.clone(), c.group.clone(), c.passed))
            .collect()
    }

    fn all_passed(&self) -> bool {
        self.inner.all_passed()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
fn build_lemma31(group: &PyGroupExpr, g: &str, h: &str) -> PyResult<PyReport> {
    let inner = sym::build_lemma31(&group.inner, &word(g)?, &word(h)?).map_err(err)?;
    Ok(PyReport { inner })
}

#[pyfunction]
fn build_lemma32(group: &PyGroupExpr, g: &str, gamma: &str) -> PyResult<PyReport> {
    let l = sym::build_lemma32(&group.inner, &word(g)?, &word(gamma)?).map_err(err)?;
    Ok(PyReport { inner: l.report })
}

#[pyfunction]
fn verify_lemma34(m: i64) -> PyResult<bool> {
    sym::verify_lemma34(m).map_err(err)
}

/// Whether `[h_1, h_2^-1 h_1]` is trivial over free factors.
#[pyfunction]
fn lemma34_control_trivial() -> PyResult<bool> {
    sym::lemma34_control().map_err(err)
}

/// JSON search report.
#[pyfunction]
#[pyo3(signature = (n, l, m, budget=None))]
fn lemma33_bounded_search(n: u32, l: u32, m: u32, budget: Option<u64>) -> PyResult<String> {
    let r = sym::lemma33_bounded_search_with_budget(n, l, m, budget).map_err(err)?;
    Ok(r.to_json())
}

/// JSON report for the cross pairs of `left x right`.
#[pyfunction]
fn product_disjointness_check(
    left: &PyFiniteGroup,
    right: &PyFiniteGroup,
) -> PyResult<(bool, String)> {
    let r = rubin_core::product_disjointness_check(&left.inner, &right.inner).map_err(err)?;
    Ok((r.holds(), r.to_json()))
}

#[pyclass(name = "GameReport", module = "rubin")]
struct PyGameReport {
    inner: g::FinalReport,
}

#[pymethods]
impl PyGameReport {
    #[getter]
    fn transcript_json(&self) -> String {
        self.inner.transcript.to_json()
    }

    #[getter]
    fn audit_passed(&self) -> bool {
        self.inner.audit.passed
    }

    #[getter]
    fn case_counts(&self) -> BTreeMap<String, u32> {
        self.inner.case_counts.clone()
    }

    #[getter]
    fn rejected_b_moves(&self) -> u32 {
        self.inner.rejected_b_moves
    }

    #[getter]
    fn witness_group(&self) -> String {
        self.inner.witness.group.clone()
    }

    #[getter]
    fn assignment(&self) -> BTreeMap<u32, String> {
        self.inner.witness.assignment.clone()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
#[pyo3(signature = (rounds=10, seed=0, strategy="passive", identity=0))]
fn run_game(rounds: u32, seed: u64, strategy: &str, identity: u32) -> PyResult<PyGameReport> {
    if identity > 1 {
        return Err(err("identity must be 0 or 1"));
    }
    let cfg = g::GameConfig {
        rounds,
        seed,
        identity,
        strategy: strategy.parse().map_err(err)?,
        ..g::GameConfig::default()
    };
    let inner = g::run_game(cfg).map_err(err)?;
    Ok(PyGameReport { inner })
}

/// `(passed, report_json)` for a transcript in JSON form.
#[pyfunction]
fn audit_transcript(transcript_json: &str) -> PyResult<(bool, String)> {
    let t = g::Transcript::from_json(transcript_json).map_err(err)?;
    let a = g::audit_transcript(&t);
    Ok((a.passed, a.to_json()))
}

#[pymodule]
fn rubin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFiniteGroup>()?;
    m.add_class::<PyRubinPoset>()?;
    m.add_class::<PyGroupExpr>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyGameReport>()?;
    m.add_function(wrap_pyfunction!(build_lemma31, m)?)?;
    m.add_function(wrap_pyfunction!(build_lemma32, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma34, m)?)?;
    m.add_function(wrap_pyfunction!(lemma34_control_trivial, m)?)?;
    m.add_function(wrap_pyfunction!(lemma33_bounded_search, m)?)?;
    m.add_function(wrap_pyfunction!(product_disjointness_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_game, m)?)?;
    m.add_function(wrap_pyfunction!(audit_transcript, m)?)?;
    Ok(())
}
