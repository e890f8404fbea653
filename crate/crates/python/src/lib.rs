//! Python bindings. Results that are records rather than objects (reports,
//! traces, search outcomes) are returned as plain dicts.

use std::hash::{Hash, Hasher};

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::{json, Value};

use ::sroiq_sigma as core;
use ::sroiq_sigma::rewrite::equiv::{equiv_check, EquivOptions};
use ::sroiq_sigma::search::DEFAULT_BUDGET;

create_exception!(sroiq_sigma, SroiqError, PyException, "Error raised by the library; `code` names the kind.");

fn err(e: core::Error) -> PyErr {
    Python::attach(|py| {
        let exc = SroiqError::new_err(e.to_string());
        let _ = exc.value(py).setattr("code", e.code());
        exc
    })
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A signature together with its role box.
#[pyclass(module = "sroiq_sigma", frozen)]
struct Ontology {
    sig: core::Signature,
    rbox: core::RBox,
}

#[pymethods]
impl Ontology {
    /// Parses the text of a signature file.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let (sig, rbox) = core::parse_signature_file(text).map_err(err)?;
        Ok(Ontology { sig, rbox })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(core::Error::Io(format!("{path}: {e}"))))?;
        Self::parse(&text)
    }

    #[getter]
    fn concepts(&self) -> Vec<String> {
        self.sig.concept_names().iter().cloned().collect()
    }

    #[getter]
    fn roles(&self) -> Vec<String> {
        self.sig.plain_role_names().cloned().collect()
    }

    #[getter]
    fn individuals(&self) -> Vec<String> {
        self.sig.individual_names().iter().cloned().collect()
    }

    #[getter]
    fn nominals(&self) -> Vec<String> {
        self.sig.nominal_names().iter().cloned().collect()
    }

    /// Regularity of the hierarchy, the simple roles and any assertion on a
    /// non-simple role.
    fn check_rbox<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let reg = core::check_regular(&self.rbox).map_err(err)?;
        let simple = core::simple_roles(&self.rbox, &self.sig);
        let violations = core::check_simple_assertions(&self.rbox, &simple);
        let axioms: Vec<Value> = reg
            .per_axiom
            .iter()
            .map(|a| {
                json!({
                    "axiom": a.axiom.to_string(),
                    "form": a.form.map(|f| f.to_string()),
                    "missing": a.missing,
                })
            })
            .collect();
        to_py(
            py,
            &json!({
                "regular": reg.regular,
                "axioms": axioms,
                "simple_roles": simple.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "assertion_violations": violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        )
    }

    fn __str__(&self) -> String {
        core::print_signature_file(&self.sig, &self.rbox)
    }
}

#[pyclass(module = "sroiq_sigma", frozen, eq)]
#[derive(PartialEq)]
struct Concept {
    inner: core::Concept,
}

#[pymethods]
impl Concept {
    /// Parses `text`. Names are checked against `ontology` when one is given.
    #[staticmethod]
    #[pyo3(signature = (text, ontology=None))]
    fn parse(text: &str, ontology: Option<&Ontology>) -> PyResult<Self> {
        let inner = match ontology {
            Some(o) => core::parse_concept(text, &o.sig),
            None => core::parse_concept_unresolved(text),
        }
        .map_err(err)?;
        Ok(Concept { inner })
    }

    fn __str__(&self) -> String {
        core::print_concept(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Concept({:?})", core::print_concept(&self.inner))
    }

    fn __hash__(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        core::print_concept(&self.inner).hash(&mut h);
        h.finish()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn is_substitution_free(&self) -> bool {
        self.inner.is_substitution_free()
    }

    /// The termination measure as a pair `(M, M')`.
    fn measure(&self) -> (u64, u64) {
        let m = core::MeasurePair::of(&self.inner);
        (m.m, m.mp)
    }

    /// Violations of well-formedness against `ontology`, as messages.
    fn violations(&self, ontology: &Ontology) -> Vec<String> {
        core::well_formed(&self.inner, &ontology.sig, &ontology.rbox)
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// Eliminates all substitutions.
    fn normalize(&self) -> PyResult<Concept> {
        let out = core::normalize(&self.inner, core::NormalizeOptions::default()).map_err(err)?;
        Ok(Concept { inner: out.concept })
    }

    /// Like `normalize`, also returning one dict per rewrite step.
    fn normalize_traced<'py>(&self, py: Python<'py>) -> PyResult<(Concept, Bound<'py, PyAny>)> {
        let opts = core::NormalizeOptions {
            audit: true,
            trace: true,
            ..Default::default()
        };
        let out = core::normalize(&self.inner, opts).map_err(err)?;
        let steps: Vec<_> = out.steps.iter().map(|s| s.to_record()).collect();
        let steps = serde_json::to_value(steps).expect("step records serialize");
        Ok((Concept { inner: out.concept }, to_py(py, &steps)?))
    }

    /// The names of the elements of `model` in this concept's extension.
    fn eval(&self, model: &Interpretation) -> PyResult<Vec<String>> {
        let set = core::eval_concept(&self.inner, &model.inner).map_err(err)?;
        Ok(model.inner.names_of(set))
    }
}

#[pyclass(module = "sroiq_sigma", frozen)]
struct Interpretation {
    inner: core::Interpretation,
}

#[pymethods]
impl Interpretation {
    /// Reads an interpretation file. With an ontology, undeclared symbols are
    /// rejected and unmentioned ones default to empty.
    #[staticmethod]
    #[pyo3(signature = (text, ontology=None))]
    fn from_json(text: &str, ontology: Option<&Ontology>) -> PyResult<Self> {
        let inner = match ontology {
            Some(o) => core::Interpretation::from_json_for(text, &o.sig),
            None => core::Interpretation::from_json(text),
        }
        .map_err(err)?;
        Ok(Interpretation { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn domain(&self) -> Vec<String> {
        self.inner.domain().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }
}

/// Compares one rewrite rule against the semantics on random instances.
/// Returns a dict with the number of counterexamples and the first one.
#[pyfunction]
#[pyo3(signature = (rule, trials=300, max_domain=5, seed=0, variant="standard"))]
fn equiv<'py>(
    py: Python<'py>,
    rule: u8,
    trials: usize,
    max_domain: usize,
    seed: u64,
    variant: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let variant: core::Variant = variant
        .parse()
        .map_err(|e: String| err(core::Error::Precondition(e)))?;
    let opts = EquivOptions {
        rule,
        trials,
        max_domain,
        seed,
        variant,
    };
    let rep = py.detach(|| equiv_check(opts)).map_err(err)?;
    let first = rep.counterexamples.first().map(|c| {
        json!({
            "trial": c.trial,
            "lhs": core::print_concept(&c.lhs),
            "rhs": core::print_concept(&c.rhs),
            "interpretation": c.interpretation.to_json_value(),
            "lhs_value": c.lhs_value,
            "rhs_value": c.rhs_value,
        })
    });
    to_py(
        py,
        &json!({ "rule": rule, "variant": variant.name(), "counterexamples": rep.counterexamples.len(), "first": first }),
    )
}

/// Bounded model search. Exhaustive unless `seed` is given, in which case
/// `trials` random interpretations of each size are tried. Returns
/// `(witness, element)` or `None` when nothing was found.
#[pyfunction]
#[pyo3(signature = (concept, ontology, max_domain=3, seed=None, trials=100_000, at=None, budget=DEFAULT_BUDGET))]
#[allow(clippy::too_many_arguments)]
fn sat(
    py: Python<'_>,
    concept: &Concept,
    ontology: &Ontology,
    max_domain: usize,
    seed: Option<u64>,
    trials: u64,
    at: Option<String>,
    budget: u64,
) -> PyResult<Option<(Interpretation, String)>> {
    let mut q = core::SatQuery::new(concept.inner.clone(), ontology.rbox.clone(), ontology.sig.clone(), max_domain);
    if let Some(seed) = seed {
        q.mode = core::SearchMode::Randomized { seed, trials };
    }
    q.at = at;
    q.budget = budget;
    let res = py.detach(|| core::sat_bounded(&q)).map_err(err)?;
    Ok(match res.verdict {
        core::Verdict::Sat { witness, element } => {
            let name = witness.element_name(element).to_string();
            Some((Interpretation { inner: witness }, name))
        }
        core::Verdict::Unknown => None,
    })
}

/// Validates a model: extension, role box axioms and name coherence.
#[pyfunction]
#[pyo3(signature = (concept, model, ontology, at=None))]
fn check_model<'py>(
    py: Python<'py>,
    concept: &Concept,
    model: &Interpretation,
    ontology: &Ontology,
    at: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = core::check_model(&concept.inner, &model.inner, &ontology.rbox, at).map_err(err)?;
    let axioms: Vec<Value> = rep
        .rbox
        .inclusions
        .iter()
        .map(|(a, ok)| json!([a.to_string(), ok]))
        .chain(rep.rbox.assertions.iter().map(|(a, ok)| json!([a.to_string(), ok])))
        .collect();
    to_py(
        py,
        &json!({
            "extension": rep.members,
            "at": rep.at.as_ref().map(|(_, hit)| hit),
            "axioms": axioms,
            "coherence": rep.coherence,
            "accepted": rep.accepted(),
        }),
    )
}

#[pymodule]
#[pyo3(name = "sroiq_sigma")]
fn bindings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ontology>()?;
    m.add_class::<Concept>()?;
    m.add_class::<Interpretation>()?;
    m.add_function(wrap_pyfunction!(equiv, m)?)?;
    m.add_function(wrap_pyfunction!(sat, m)?)?;
    m.add_function(wrap_pyfunction!(check_model, m)?)?;
    m.add("SroiqError", m.py().get_type::<SroiqError>())?;
    Ok(())
}
