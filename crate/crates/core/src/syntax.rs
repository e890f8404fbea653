//! Abstract syntax for roles, concepts, substitutions and role boxes.
//!
//! Concepts follow the SROIQ grammar extended with one postfix constructor,
//! the explicit substitution `C[σ]`. `⊤` has no node of its own: it is
//! represented as `¬⊥` (see [`Concept::top`]).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Name of the universal role.
pub const UNIVERSAL: &str = "U";

const RESERVED: &[&str] = &["bot", "top", "exists", "forall", "self", "eps"];

/// Name of the nominal pinned to individual `ind`.
pub fn canonical_nominal(ind: &str) -> String {
    format!("o_{ind}")
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The four name spaces of a signature. `U` is always a role name and every
/// individual `i` brings its canonical nominal `o_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    concept_names: BTreeSet<String>,
    nominal_names: BTreeSet<String>,
    role_names: BTreeSet<String>,
    individual_names: BTreeSet<String>,
}

impl Signature {
    pub fn new<I, S>(concepts: I, nominals: I, roles: I, individuals: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let collect = |it: I| -> BTreeSet<String> { it.into_iter().map(Into::into).collect() };
        let concept_names = collect(concepts);
        let mut nominal_names = collect(nominals);
        let mut role_names = collect(roles);
        let individual_names = collect(individuals);

        for (kind, set) in [
            ("concept", &concept_names),
            ("nominal", &nominal_names),
            ("role", &role_names),
            ("individual", &individual_names),
        ] {
            for name in set {
                if !is_identifier(name) || RESERVED.contains(&name.as_str()) {
                    return Err(Error::Signature(format!("invalid {kind} name `{name}`")));
                }
                if name == UNIVERSAL && kind != "role" {
                    return Err(Error::Signature(format!(
                        "`{UNIVERSAL}` is reserved for the universal role"
                    )));
                }
            }
        }
        role_names.insert(UNIVERSAL.to_string());
        for ind in &individual_names {
            nominal_names.insert(canonical_nominal(ind));
        }
        if let Some(clash) = concept_names.intersection(&nominal_names).next() {
            return Err(Error::Signature(format!(
                "`{clash}` is declared both as a concept name and as a nominal"
            )));
        }
        Ok(Signature {
            concept_names,
            nominal_names,
            role_names,
            individual_names,
        })
    }

    pub fn concept_names(&self) -> &BTreeSet<String> {
        &self.concept_names
    }
    pub fn nominal_names(&self) -> &BTreeSet<String> {
        &self.nominal_names
    }
    pub fn role_names(&self) -> &BTreeSet<String> {
        &self.role_names
    }
    pub fn individual_names(&self) -> &BTreeSet<String> {
        &self.individual_names
    }

    pub fn is_concept(&self, name: &str) -> bool {
        self.concept_names.contains(name)
    }
    pub fn is_nominal(&self, name: &str) -> bool {
        self.nominal_names.contains(name)
    }
    pub fn is_role(&self, name: &str) -> bool {
        self.role_names.contains(name)
    }
    pub fn is_individual(&self, name: &str) -> bool {
        self.individual_names.contains(name)
    }

    /// What kind of symbol `name` is, if any. Used for error messages.
    pub fn kind_of(&self, name: &str) -> Option<&'static str> {
        if self.is_concept(name) {
            Some("concept name")
        } else if self.is_nominal(name) {
            Some("nominal")
        } else if self.is_individual(name) {
            Some("individual")
        } else if self.is_role(name) {
            Some("role")
        } else {
            None
        }
    }

    /// Role names other than `U`.
    pub fn plain_role_names(&self) -> impl Iterator<Item = &String> {
        self.role_names.iter().filter(|r| r.as_str() != UNIVERSAL)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Named(String),
    Inverse(String),
    Universal,
}

impl Role {
    pub fn named(name: impl Into<String>) -> Role {
        let name = name.into();
        if name == UNIVERSAL {
            Role::Universal
        } else {
            Role::Named(name)
        }
    }

    /// `R⁻`. The universal role has no inverse form.
    pub fn inverse(name: impl Into<String>) -> Result<Role> {
        let name = name.into();
        if name == UNIVERSAL {
            return Err(Error::UniversalRole("the inverse of U is not a role".into()));
        }
        Ok(Role::Inverse(name))
    }

    /// The underlying role name (`U` for the universal role).
    pub fn name(&self) -> &str {
        match self {
            Role::Named(n) | Role::Inverse(n) => n,
            Role::Universal => UNIVERSAL,
        }
    }

    pub fn is_inverse(&self) -> bool {
        matches!(self, Role::Inverse(_))
    }

    /// `R ↦ R⁻`, `R⁻ ↦ R`, `U ↦ U`.
    pub fn inverted(&self) -> Role {
        match self {
            Role::Named(n) => Role::Inverse(n.clone()),
            Role::Inverse(n) => Role::Named(n.clone()),
            Role::Universal => Role::Universal,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Named(n) => write!(f, "{n}"),
            Role::Inverse(n) => write!(f, "{n}-"),
            Role::Universal => write!(f, "{UNIVERSAL}"),
        }
    }
}

/// Add or delete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Add,
    Del,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Add => Polarity::Del,
            Polarity::Del => Polarity::Add,
        }
    }
}

/// An update of one concept name or one role name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Substitution {
    Epsilon,
    ConceptAdd { concept: String, ind: String },
    ConceptDel { concept: String, ind: String },
    RoleAdd { role: String, from: String, to: String },
    RoleDel { role: String, from: String, to: String },
}

impl Substitution {
    pub fn concept(polarity: Polarity, concept: impl Into<String>, ind: impl Into<String>) -> Self {
        let (concept, ind) = (concept.into(), ind.into());
        match polarity {
            Polarity::Add => Substitution::ConceptAdd { concept, ind },
            Polarity::Del => Substitution::ConceptDel { concept, ind },
        }
    }

    pub fn role(
        polarity: Polarity,
        role: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        let (role, from, to) = (role.into(), from.into(), to.into());
        match polarity {
            Polarity::Add => Substitution::RoleAdd { role, from, to },
            Polarity::Del => Substitution::RoleDel { role, from, to },
        }
    }

    /// The role name this substitution updates, if any.
    pub fn target_role(&self) -> Option<&str> {
        match self {
            Substitution::RoleAdd { role, .. } | Substitution::RoleDel { role, .. } => Some(role),
            _ => None,
        }
    }

    /// The concept name this substitution updates, if any.
    pub fn target_concept(&self) -> Option<&str> {
        match self {
            Substitution::ConceptAdd { concept, .. } | Substitution::ConceptDel { concept, .. } => {
                Some(concept)
            }
            _ => None,
        }
    }

    pub fn polarity(&self) -> Option<Polarity> {
        match self {
            Substitution::Epsilon => None,
            Substitution::ConceptAdd { .. } | Substitution::RoleAdd { .. } => Some(Polarity::Add),
            Substitution::ConceptDel { .. } | Substitution::RoleDel { .. } => Some(Polarity::Del),
        }
    }

    pub fn individuals(&self) -> Vec<&str> {
        match self {
            Substitution::Epsilon => vec![],
            Substitution::ConceptAdd { ind, .. } | Substitution::ConceptDel { ind, .. } => {
                vec![ind]
            }
            Substitution::RoleAdd { from, to, .. } | Substitution::RoleDel { from, to, .. } => {
                vec![from, to]
            }
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Substitution::Epsilon => write!(f, "eps"),
            Substitution::ConceptAdd { concept, ind } => write!(f, "{concept} := {concept} + {ind}"),
            Substitution::ConceptDel { concept, ind } => write!(f, "{concept} := {concept} - {ind}"),
            Substitution::RoleAdd { role, from, to } => {
                write!(f, "{role} := {role} + ({from}, {to})")
            }
            Substitution::RoleDel { role, from, to } => {
                write!(f, "{role} := {role} - ({from}, {to})")
            }
        }
    }
}

/// A SROIQ concept, possibly carrying explicit substitutions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Bot,
    Name(String),
    Nominal(String),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    AtLeast(u32, Role, Box<Concept>),
    LessThan(u32, Role, Box<Concept>),
    Exists(Role, Box<Concept>),
    Forall(Role, Box<Concept>),
    SelfLoop(Role),
    Subst(Box<Concept>, Substitution),
}

impl Concept {
    pub fn top() -> Concept {
        Concept::Not(Box::new(Concept::Bot))
    }
    pub fn name(n: impl Into<String>) -> Concept {
        Concept::Name(n.into())
    }
    pub fn nominal(n: impl Into<String>) -> Concept {
        Concept::Nominal(n.into())
    }
    /// The canonical nominal `o_i` of individual `i`.
    pub fn nominal_of(ind: &str) -> Concept {
        Concept::Nominal(canonical_nominal(ind))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }
    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Concept, b: Concept) -> Concept {
        Concept::Or(Box::new(a), Box::new(b))
    }
    /// `a ⇒ b`, expanded to `¬a ⊔ b`.
    pub fn implies(a: Concept, b: Concept) -> Concept {
        Concept::or(Concept::not(a), b)
    }
    pub fn at_least(n: u32, r: Role, c: Concept) -> Concept {
        Concept::AtLeast(n, r, Box::new(c))
    }
    pub fn less_than(n: u32, r: Role, c: Concept) -> Concept {
        Concept::LessThan(n, r, Box::new(c))
    }
    pub fn exists(r: Role, c: Concept) -> Concept {
        Concept::Exists(r, Box::new(c))
    }
    pub fn forall(r: Role, c: Concept) -> Concept {
        Concept::Forall(r, Box::new(c))
    }
    pub fn subst(c: Concept, s: Substitution) -> Concept {
        Concept::Subst(Box::new(c), s)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Concept::Not(b) if **b == Concept::Bot)
    }

    /// Immediate subconcepts, in child-index order.
    pub fn children(&self) -> Vec<&Concept> {
        match self {
            Concept::Bot | Concept::Name(_) | Concept::Nominal(_) | Concept::SelfLoop(_) => vec![],
            Concept::Not(c)
            | Concept::AtLeast(_, _, c)
            | Concept::LessThan(_, _, c)
            | Concept::Exists(_, c)
            | Concept::Forall(_, c)
            | Concept::Subst(c, _) => vec![c],
            Concept::And(a, b) | Concept::Or(a, b) => vec![a, b],
        }
    }

    pub fn child_mut(&mut self, index: usize) -> Option<&mut Concept> {
        match (self, index) {
            (
                Concept::Not(c)
                | Concept::AtLeast(_, _, c)
                | Concept::LessThan(_, _, c)
                | Concept::Exists(_, c)
                | Concept::Forall(_, c)
                | Concept::Subst(c, _),
                0,
            ) => Some(c),
            (Concept::And(a, _) | Concept::Or(a, _), 0) => Some(a),
            (Concept::And(_, b) | Concept::Or(_, b), 1) => Some(b),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Concept> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn subterm_mut(&mut self, path: &[usize]) -> Option<&mut Concept> {
        let mut cur = self;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// True iff no `Subst` node occurs anywhere in the term.
    pub fn is_substitution_free(&self) -> bool {
        match self {
            Concept::Subst(..) => false,
            _ => self.children().iter().all(|c| c.is_substitution_free()),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn count_substitutions(&self) -> usize {
        let own = usize::from(matches!(self, Concept::Subst(..)));
        own + self.children().iter().map(|c| c.count_substitutions()).sum::<usize>()
    }

    /// Every symbol occurring in the term, substitutions included.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        self.collect_vocabulary(&mut v);
        v
    }

    fn collect_vocabulary(&self, v: &mut Vocabulary) {
        match self {
            Concept::Name(n) => {
                v.concepts.insert(n.clone());
            }
            Concept::Nominal(n) => {
                v.nominals.insert(n.clone());
            }
            Concept::AtLeast(_, r, _)
            | Concept::LessThan(_, r, _)
            | Concept::Exists(r, _)
            | Concept::Forall(r, _)
            | Concept::SelfLoop(r) => {
                if *r != Role::Universal {
                    v.roles.insert(r.name().to_string());
                }
            }
            Concept::Subst(_, s) => {
                if let Some(c) = s.target_concept() {
                    v.concepts.insert(c.to_string());
                }
                if let Some(r) = s.target_role() {
                    v.roles.insert(r.to_string());
                }
                for i in s.individuals() {
                    v.individuals.insert(i.to_string());
                }
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_vocabulary(v);
        }
    }
}

/// Symbols occurring in a term.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub concepts: BTreeSet<String>,
    pub nominals: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

/// A role inclusion axiom `w ⊆ R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleInclusion {
    pub word: Vec<Role>,
    pub rhs: String,
}

impl fmt::Display for RoleInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.word {
            write!(f, "{r} ")?;
        }
        write!(f, "<= {}", self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoleAssertion {
    Ref(Role),
    Irr(Role),
    Sym(Role),
    Asy(Role),
    Tra(Role),
    Dis(Role, Role),
}

impl RoleAssertion {
    pub fn roles(&self) -> Vec<&Role> {
        match self {
            RoleAssertion::Ref(r)
            | RoleAssertion::Irr(r)
            | RoleAssertion::Sym(r)
            | RoleAssertion::Asy(r)
            | RoleAssertion::Tra(r) => vec![r],
            RoleAssertion::Dis(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for RoleAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleAssertion::Ref(r) => write!(f, "Ref {r}"),
            RoleAssertion::Irr(r) => write!(f, "Irr {r}"),
            RoleAssertion::Sym(r) => write!(f, "Sym {r}"),
            RoleAssertion::Asy(r) => write!(f, "Asy {r}"),
            RoleAssertion::Tra(r) => write!(f, "Tra {r}"),
            RoleAssertion::Dis(a, b) => write!(f, "Dis {a} {b}"),
        }
    }
}

/// Role hierarchy, role assertions, and the user-supplied order `≺` on role
/// names (pairs `(S, R)` meaning `S ≺ R`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RBox {
    pub hierarchy: Vec<RoleInclusion>,
    pub assertions: Vec<RoleAssertion>,
    pub order: BTreeSet<(String, String)>,
}

impl RBox {
    /// Role names mentioned anywhere in the box, `U` excluded.
    pub fn role_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for ax in &self.hierarchy {
            out.insert(ax.rhs.clone());
            out.extend(ax.word.iter().map(|r| r.name().to_string()));
        }
        for a in &self.assertions {
            out.extend(a.roles().into_iter().map(|r| r.name().to_string()));
        }
        for (s, r) in &self.order {
            out.insert(s.clone());
            out.insert(r.clone());
        }
        out.remove(UNIVERSAL);
        out
    }
}
