//! Finite interpretations and the valuation of concepts, roles, role words
//! and role boxes.
//!
//! Domain elements are dense indices `0..n` (with display names) and sets of
//! elements are 64-bit masks, so domains hold at most [`MAX_DOMAIN`]
//! elements. This module is the reference semantics: the rewrite engine and
//! the model search are both checked against it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{
    canonical_nominal, Concept, RBox, Role, RoleAssertion, RoleInclusion, Signature, Substitution,
    UNIVERSAL,
};

pub const MAX_DOMAIN: usize = 64;

/// A set of domain elements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }
    pub fn bits(self) -> u64 {
        self.0
    }
    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }
    pub fn singleton(e: usize) -> Self {
        ElementSet(1u64 << e)
    }
    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }
    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }
    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u64 << e);
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn union(self, o: Self) -> Self {
        ElementSet(self.0 | o.0)
    }
    pub fn intersection(self, o: Self) -> Self {
        ElementSet(self.0 & o.0)
    }
    pub fn difference(self, o: Self) -> Self {
        ElementSet(self.0 & !o.0)
    }
    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&e| self.contains(e))
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ElementSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// A binary relation over `0..n`, stored as one successor mask per element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    succ: Vec<ElementSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            succ: vec![ElementSet::EMPTY; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Relation {
            succ: vec![ElementSet::full(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn domain_size(&self) -> usize {
        self.succ.len()
    }
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.succ.get(a).is_some_and(|s| s.contains(b))
    }
    pub fn insert(&mut self, a: usize, b: usize) {
        self.succ[a].insert(b);
    }
    pub fn remove(&mut self, a: usize, b: usize) {
        self.succ[a].remove(b);
    }
    pub fn successors(&self, a: usize) -> ElementSet {
        self.succ[a]
    }
    pub fn len(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(|s| s.is_empty())
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(self.succ.len());
        for (a, b) in self.pairs() {
            r.insert(b, a);
        }
        r
    }

    /// `{(x, y) | ∃z. (x, z) ∈ self ∧ (z, y) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let succ = self
            .succ
            .iter()
            .map(|s| {
                s.iter()
                    .fold(ElementSet::EMPTY, |acc, z| acc.union(other.succ[z]))
            })
            .collect();
        Relation { succ }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.succ
            .iter()
            .zip(&other.succ)
            .all(|(a, b)| a.is_subset(*b))
    }

    pub fn intersects(&self, other: &Relation) -> bool {
        self.succ
            .iter()
            .zip(&other.succ)
            .any(|(a, b)| !a.intersection(*b).is_empty())
    }

    /// Elements `x` with `(x, x)` in the relation.
    pub fn diagonal(&self) -> ElementSet {
        (0..self.succ.len()).filter(|&x| self.contains(x, x)).collect()
    }
}

/// A finite interpretation. The universal role is never stored; it always
/// denotes `Δ × Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    domain: Vec<String>,
    concepts: BTreeMap<String, ElementSet>,
    roles: BTreeMap<String, Relation>,
    nominals: BTreeMap<String, usize>,
    individuals: BTreeMap<String, usize>,
}

impl Interpretation {
    /// An interpretation over the named domain with every valuation empty.
    pub fn new<S: Into<String>>(domain: impl IntoIterator<Item = S>) -> Result<Self> {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if domain.len() > MAX_DOMAIN {
            return Err(Error::Interpretation(format!(
                "domain has {} elements; at most {MAX_DOMAIN} are supported",
                domain.len()
            )));
        }
        let unique: BTreeSet<&String> = domain.iter().collect();
        if unique.len() != domain.len() {
            return Err(Error::Interpretation("duplicate domain element".into()));
        }
        Ok(Interpretation {
            domain,
            concepts: BTreeMap::new(),
            roles: BTreeMap::new(),
            nominals: BTreeMap::new(),
            individuals: BTreeMap::new(),
        })
    }

    /// Domain `{e0, .., e(n-1)}`.
    pub fn with_size(n: usize) -> Result<Self> {
        Interpretation::new((0..n).map(|i| format!("e{i}")))
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }
    pub fn domain(&self) -> &[String] {
        &self.domain
    }
    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.domain.len())
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.domain
            .iter()
            .position(|d| d == name)
            .ok_or_else(|| Error::Interpretation(format!("`{name}` is not a domain element")))
    }

    pub fn element_name(&self, e: usize) -> &str {
        &self.domain[e]
    }

    pub fn names_of(&self, set: ElementSet) -> Vec<String> {
        set.iter()
            .take_while(|&e| e < self.domain.len())
            .map(|e| self.domain[e].clone())
            .collect()
    }

    fn check_element(&self, e: usize) -> Result<()> {
        if e < self.domain.len() {
            Ok(())
        } else {
            Err(Error::Interpretation(format!("element index {e} out of range")))
        }
    }

    pub fn set_concept(&mut self, name: impl Into<String>, set: ElementSet) -> Result<()> {
        if !set.is_subset(self.full_set()) {
            return Err(Error::Interpretation("concept valuation outside the domain".into()));
        }
        self.concepts.insert(name.into(), set);
        Ok(())
    }

    pub fn set_role(&mut self, name: impl Into<String>, rel: Relation) -> Result<()> {
        let name = name.into();
        if name == UNIVERSAL {
            return Err(Error::UniversalRole(
                "the universal role has a fixed valuation".into(),
            ));
        }
        if rel.domain_size() != self.domain.len() {
            return Err(Error::Interpretation(format!(
                "relation for `{name}` has the wrong domain size"
            )));
        }
        self.roles.insert(name, rel);
        Ok(())
    }

    pub fn set_nominal(&mut self, name: impl Into<String>, e: usize) -> Result<()> {
        self.check_element(e)?;
        self.nominals.insert(name.into(), e);
        Ok(())
    }

    /// Assigns an individual and its canonical nominal.
    pub fn set_individual(&mut self, name: impl Into<String>, e: usize) -> Result<()> {
        self.check_element(e)?;
        let name = name.into();
        self.nominals.insert(canonical_nominal(&name), e);
        self.individuals.insert(name, e);
        Ok(())
    }

    pub fn concept(&self, name: &str) -> Result<ElementSet> {
        self.concepts.get(name).copied().ok_or_else(|| Error::UnknownName {
            kind: "concept name",
            name: name.into(),
        })
    }

    pub fn role(&self, name: &str) -> Result<&Relation> {
        self.roles.get(name).ok_or_else(|| Error::UnknownName {
            kind: "role",
            name: name.into(),
        })
    }

    pub fn nominal(&self, name: &str) -> Result<usize> {
        self.nominals.get(name).copied().ok_or_else(|| Error::UnknownName {
            kind: "nominal",
            name: name.into(),
        })
    }

    pub fn individual(&self, name: &str) -> Result<usize> {
        self.individuals.get(name).copied().ok_or_else(|| Error::UnknownName {
            kind: "individual",
            name: name.into(),
        })
    }

    pub fn concepts(&self) -> &BTreeMap<String, ElementSet> {
        &self.concepts
    }
    pub fn roles(&self) -> &BTreeMap<String, Relation> {
        &self.roles
    }
    pub fn nominals(&self) -> &BTreeMap<String, usize> {
        &self.nominals
    }
    pub fn individuals(&self) -> &BTreeMap<String, usize> {
        &self.individuals
    }

    /// Violations of the canonical-nominal coherence `o_i^I = i^I`.
    pub fn coherence_issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (ind, &e) in &self.individuals {
            let o = canonical_nominal(ind);
            match self.nominals.get(&o) {
                Some(&oe) if oe == e => {}
                Some(&oe) => out.push(format!(
                    "nominal `{o}` denotes `{}` but individual `{ind}` denotes `{}`",
                    self.domain[oe], self.domain[e]
                )),
                None => out.push(format!("canonical nominal `{o}` has no valuation")),
            }
        }
        out
    }

    /// Gives every concept and role name of `sig` a valuation (empty when
    /// absent) and checks that all stored names belong to `sig` with the right
    /// kind and that every nominal and individual of `sig` is assigned.
    pub fn complete_for(&mut self, sig: &Signature) -> Result<()> {
        for name in self.concepts.keys() {
            if !sig.is_concept(name) {
                return Err(unknown_in_sig("concept name", name, sig));
            }
        }
        for name in self.roles.keys() {
            if !sig.is_role(name) {
                return Err(unknown_in_sig("role", name, sig));
            }
        }
        for name in self.individuals.keys() {
            if !sig.is_individual(name) {
                return Err(unknown_in_sig("individual", name, sig));
            }
        }
        for name in self.nominals.keys() {
            if !sig.is_nominal(name) {
                return Err(unknown_in_sig("nominal", name, sig));
            }
        }
        for c in sig.concept_names() {
            self.concepts.entry(c.clone()).or_default();
        }
        let n = self.domain.len();
        for r in sig.plain_role_names() {
            self.roles.entry(r.clone()).or_insert_with(|| Relation::empty(n));
        }
        for i in sig.individual_names() {
            if !self.individuals.contains_key(i) {
                return Err(Error::Interpretation(format!("individual `{i}` has no valuation")));
            }
        }
        for o in sig.nominal_names() {
            if !self.nominals.contains_key(o) {
                return Err(Error::Interpretation(format!("nominal `{o}` has no valuation")));
            }
        }
        Ok(())
    }

    /// Parses the JSON interpretation format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InterpretationFile =
            serde_json::from_str(text).map_err(|e| Error::Interpretation(e.to_string()))?;
        file.into_interpretation()
    }

    /// Parses the JSON format and completes it against `sig`.
    pub fn from_json_for(text: &str, sig: &Signature) -> Result<Self> {
        let mut i = Interpretation::from_json(text)?;
        i.complete_for(sig)?;
        Ok(i)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("interpretation serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("interpretation serializes")
    }

    fn to_file(&self) -> InterpretationFile {
        let name = |e: usize| self.domain[e].clone();
        InterpretationFile {
            domain: self.domain.clone(),
            concepts: self
                .concepts
                .iter()
                .map(|(k, v)| (k.clone(), self.names_of(*v)))
                .collect(),
            roles: self
                .roles
                .iter()
                .map(|(k, r)| (k.clone(), r.pairs().into_iter().map(|(a, b)| (name(a), name(b))).collect()))
                .collect(),
            nominals: self.nominals.iter().map(|(k, &e)| (k.clone(), name(e))).collect(),
            individuals: self
                .individuals
                .iter()
                .map(|(k, &e)| (k.clone(), name(e)))
                .collect(),
        }
    }
}

fn unknown_in_sig(kind: &'static str, name: &str, sig: &Signature) -> Error {
    match sig.kind_of(name) {
        Some(actual) => Error::NameConfusion {
            name: name.into(),
            expected: kind,
            actual,
        },
        None => Error::UnknownName {
            kind,
            name: name.into(),
        },
    }
}

/// On-disk interpretation layout.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterpretationFile {
    domain: Vec<String>,
    #[serde(default)]
    concepts: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    roles: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    nominals: BTreeMap<String, String>,
    #[serde(default)]
    individuals: BTreeMap<String, String>,
}

impl InterpretationFile {
    fn into_interpretation(self) -> Result<Interpretation> {
        let mut i = Interpretation::new(self.domain)?;
        for (c, elems) in self.concepts {
            let set = elems
                .iter()
                .map(|e| i.element(e))
                .collect::<Result<ElementSet>>()?;
            i.set_concept(c, set)?;
        }
        for (r, pairs) in self.roles {
            if r == UNIVERSAL {
                return Err(Error::UniversalRole(
                    "the universal role must not be listed under `roles`".into(),
                ));
            }
            let mut rel = Relation::empty(i.size());
            for (a, b) in &pairs {
                rel.insert(i.element(a)?, i.element(b)?);
            }
            i.set_role(r, rel)?;
        }
        for (o, e) in self.nominals {
            let e = i.element(&e)?;
            i.set_nominal(o, e)?;
        }
        for (ind, e) in self.individuals {
            let e = i.element(&e)?;
            let o = canonical_nominal(&ind);
            if let Some(&oe) = i.nominals.get(&o) {
                if oe != e {
                    return Err(Error::Interpretation(format!(
                        "canonical nominal `{o}` must denote the same element as `{ind}`"
                    )));
                }
            }
            i.set_individual(ind, e)?;
        }
        Ok(i)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// `R^I`, `(R⁻)^I`, or `Δ × Δ` for the universal role.
pub fn eval_role(r: &Role, i: &Interpretation) -> Result<Relation> {
    match r {
        Role::Universal => Ok(Relation::full(i.size())),
        Role::Named(n) => i.role(n).cloned(),
        Role::Inverse(n) => Ok(i.role(n)?.inverse()),
    }
}

/// Left-to-right relational composition of a nonempty role word.
pub fn eval_role_word(w: &[Role], i: &Interpretation) -> Result<Relation> {
    let (first, rest) = w
        .split_first()
        .ok_or_else(|| Error::Precondition("role word must be nonempty".into()))?;
    let mut acc = eval_role(first, i)?;
    for r in rest {
        acc = acc.compose(&eval_role(r, i)?);
    }
    Ok(acc)
}

/// `C^I`.
pub fn eval_concept(c: &Concept, i: &Interpretation) -> Result<ElementSet> {
    let n = i.size();
    Ok(match c {
        Concept::Bot => ElementSet::EMPTY,
        Concept::Name(name) => i.concept(name)?,
        Concept::Nominal(o) => ElementSet::singleton(i.nominal(o)?),
        Concept::Not(inner) => i.full_set().difference(eval_concept(inner, i)?),
        Concept::And(a, b) => eval_concept(a, i)?.intersection(eval_concept(b, i)?),
        Concept::Or(a, b) => eval_concept(a, i)?.union(eval_concept(b, i)?),
        Concept::AtLeast(k, r, inner) => {
            let rel = eval_role(r, i)?;
            let filler = eval_concept(inner, i)?;
            (0..n)
                .filter(|&x| rel.successors(x).intersection(filler).len() >= *k as usize)
                .collect()
        }
        Concept::LessThan(k, r, inner) => {
            let rel = eval_role(r, i)?;
            let filler = eval_concept(inner, i)?;
            (0..n)
                .filter(|&x| rel.successors(x).intersection(filler).len() < *k as usize)
                .collect()
        }
        Concept::Exists(r, inner) => {
            let rel = eval_role(r, i)?;
            let filler = eval_concept(inner, i)?;
            (0..n)
                .filter(|&x| !rel.successors(x).intersection(filler).is_empty())
                .collect()
        }
        Concept::Forall(r, inner) => {
            let rel = eval_role(r, i)?;
            let filler = eval_concept(inner, i)?;
            (0..n)
                .filter(|&x| rel.successors(x).is_subset(filler))
                .collect()
        }
        Concept::SelfLoop(r) => eval_role(r, i)?.diagonal(),
        Concept::Subst(inner, s) => eval_concept(inner, &apply_subst(i, s)?)?,
    })
}

/// The interpretation obtained by performing the update `s`.
pub fn apply_subst(i: &Interpretation, s: &Substitution) -> Result<Interpretation> {
    let mut out = i.clone();
    match s {
        Substitution::Epsilon => {}
        Substitution::ConceptAdd { concept, ind } | Substitution::ConceptDel { concept, ind } => {
            let e = i.individual(ind)?;
            let mut set = i.concept(concept)?;
            if matches!(s, Substitution::ConceptAdd { .. }) {
                set.insert(e);
            } else {
                set.remove(e);
            }
            out.concepts.insert(concept.clone(), set);
        }
        Substitution::RoleAdd { role, from, to } | Substitution::RoleDel { role, from, to } => {
            if role == UNIVERSAL {
                return Err(Error::UniversalRole(
                    "substitutions cannot update the universal role".into(),
                ));
            }
            let (a, b) = (i.individual(from)?, i.individual(to)?);
            let mut rel = i.role(role)?.clone();
            if matches!(s, Substitution::RoleAdd { .. }) {
                rel.insert(a, b);
            } else {
                rel.remove(a, b);
            }
            out.roles.insert(role.clone(), rel);
        }
    }
    Ok(out)
}

/// Per-axiom satisfaction of a role box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBoxReport {
    pub inclusions: Vec<(RoleInclusion, bool)>,
    pub assertions: Vec<(RoleAssertion, bool)>,
}

impl RBoxReport {
    pub fn all_satisfied(&self) -> bool {
        self.inclusions.iter().all(|(_, ok)| *ok) && self.assertions.iter().all(|(_, ok)| *ok)
    }
}

pub fn inclusion_holds(ax: &RoleInclusion, i: &Interpretation) -> Result<bool> {
    let lhs = eval_role_word(&ax.word, i)?;
    let rhs = eval_role(&Role::named(ax.rhs.clone()), i)?;
    Ok(lhs.is_subset(&rhs))
}

pub fn assertion_holds(a: &RoleAssertion, i: &Interpretation) -> Result<bool> {
    let n = i.size();
    Ok(match a {
        RoleAssertion::Ref(r) => eval_role(r, i)?.diagonal() == ElementSet::full(n),
        RoleAssertion::Irr(r) => eval_role(r, i)?.diagonal().is_empty(),
        RoleAssertion::Sym(r) => {
            let rel = eval_role(r, i)?;
            rel.is_subset(&rel.inverse())
        }
        RoleAssertion::Asy(r) => {
            let rel = eval_role(r, i)?;
            !rel.intersects(&rel.inverse())
        }
        RoleAssertion::Tra(r) => {
            let rel = eval_role(r, i)?;
            rel.compose(&rel).is_subset(&rel)
        }
        RoleAssertion::Dis(r, s) => !eval_role(r, i)?.intersects(&eval_role(s, i)?),
    })
}

/// Checks every inclusion axiom and role assertion of `rbox` in `i`.
pub fn rbox_satisfied(i: &Interpretation, rbox: &RBox) -> Result<RBoxReport> {
    Ok(RBoxReport {
        inclusions: rbox
            .hierarchy
            .iter()
            .map(|ax| Ok((ax.clone(), inclusion_holds(ax, i)?)))
            .collect::<Result<_>>()?,
        assertions: rbox
            .assertions
            .iter()
            .map(|a| Ok((a.clone(), assertion_holds(a, i)?)))
            .collect::<Result<_>>()?,
    })
}
