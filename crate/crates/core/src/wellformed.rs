use std::collections::BTreeSet;
use std::fmt;

use crate::rbox::simple_roles;
use crate::syntax::{Concept, RBox, Role, Signature, Substitution, UNIVERSAL};

/// A reason a concept is not well formed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    UnresolvedName { kind: &'static str, name: String },
    WrongKind { name: String, expected: &'static str, actual: &'static str },
    UniversalSubstitution,
    InverseUniversal,
    UniversalSelf,
    NonSimpleCounting(Role),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnresolvedName { kind, name } => write!(f, "unresolved {kind} `{name}`"),
            Violation::WrongKind { name, expected, actual } => {
                write!(f, "`{name}` is a {actual}, expected a {expected}")
            }
            Violation::UniversalSubstitution => {
                write!(f, "substitution targets the universal role")
            }
            Violation::InverseUniversal => write!(f, "the universal role has no inverse"),
            Violation::UniversalSelf => write!(f, "self restriction over the universal role"),
            Violation::NonSimpleCounting(r) => {
                write!(f, "counting restriction over non-simple role `{r}`")
            }
        }
    }
}

/// Every violation of the concept invariants, in traversal order.
pub fn well_formed(c: &Concept, sig: &Signature, rbox: &RBox) -> Vec<Violation> {
    let simple = simple_roles(rbox, sig);
    let mut out = Vec::new();
    walk(c, sig, &simple, &mut out);
    out
}

fn name_check(
    name: &str,
    expected: &'static str,
    ok: bool,
    sig: &Signature,
    out: &mut Vec<Violation>,
) {
    if ok {
        return;
    }
    out.push(match sig.kind_of(name) {
        Some(actual) => Violation::WrongKind {
            name: name.into(),
            expected,
            actual,
        },
        None => Violation::UnresolvedName {
            kind: expected,
            name: name.into(),
        },
    });
}

fn role_check(r: &Role, sig: &Signature, out: &mut Vec<Violation>) {
    match r {
        Role::Universal => {}
        Role::Inverse(n) if n == UNIVERSAL => out.push(Violation::InverseUniversal),
        Role::Named(n) | Role::Inverse(n) => name_check(n, "role", sig.is_role(n), sig, out),
    }
}

fn walk(c: &Concept, sig: &Signature, simple: &BTreeSet<Role>, out: &mut Vec<Violation>) {
    match c {
        Concept::Name(n) => name_check(n, "concept name", sig.is_concept(n), sig, out),
        Concept::Nominal(n) => name_check(n, "nominal", sig.is_nominal(n), sig, out),
        Concept::AtLeast(_, r, _) | Concept::LessThan(_, r, _) => {
            role_check(r, sig, out);
            if !simple.contains(r) {
                out.push(Violation::NonSimpleCounting(r.clone()));
            }
        }
        Concept::Exists(r, _) | Concept::Forall(r, _) => role_check(r, sig, out),
        Concept::SelfLoop(r) => {
            if *r == Role::Universal {
                out.push(Violation::UniversalSelf);
            } else {
                role_check(r, sig, out);
            }
        }
        Concept::Subst(_, s) => subst_check(s, sig, out),
        _ => {}
    }
    for child in c.children() {
        walk(child, sig, simple, out);
    }
}

fn subst_check(s: &Substitution, sig: &Signature, out: &mut Vec<Violation>) {
    if let Some(c) = s.target_concept() {
        name_check(c, "concept name", sig.is_concept(c), sig, out);
    }
    if let Some(r) = s.target_role() {
        if r == UNIVERSAL {
            out.push(Violation::UniversalSubstitution);
        } else {
            name_check(r, "role", sig.is_role(r), sig, out);
        }
    }
    for i in s.individuals() {
        name_check(i, "individual", sig.is_individual(i), sig, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Polarity, RoleInclusion};

    fn family() -> (Signature, RBox) {
        let sig = Signature::new(
            vec!["Female"],
            vec![],
            vec!["Brother", "FamilyMember", "Father"],
            vec!["i", "j"],
        )
        .unwrap();
        let rbox = RBox {
            hierarchy: vec![
                RoleInclusion {
                    word: vec![Role::named("Brother")],
                    rhs: "FamilyMember".into(),
                },
                RoleInclusion {
                    word: vec![Role::named("Father"), Role::named("Brother")],
                    rhs: "Father".into(),
                },
            ],
            ..RBox::default()
        };
        (sig, rbox)
    }

    #[test]
    fn counting_over_simple_role_is_fine() {
        let (sig, rbox) = family();
        let c = Concept::at_least(1, Role::named("FamilyMember"), Concept::top());
        assert!(well_formed(&c, &sig, &rbox).is_empty());
        let c = Concept::at_least(1, Role::named("Father"), Concept::top());
        assert_eq!(
            well_formed(&c, &sig, &rbox),
            vec![Violation::NonSimpleCounting(Role::named("Father"))]
        );
    }

    #[test]
    fn universal_substitution_is_one_violation() {
        let (sig, rbox) = family();
        let c = Concept::subst(Concept::Bot, Substitution::role(Polarity::Add, "U", "i", "j"));
        assert_eq!(well_formed(&c, &sig, &rbox), vec![Violation::UniversalSubstitution]);
    }

    #[test]
    fn unresolved_and_misused_names() {
        let (sig, rbox) = family();
        let c = Concept::name("unknownName");
        assert_eq!(
            well_formed(&c, &sig, &rbox),
            vec![Violation::UnresolvedName {
                kind: "concept name",
                name: "unknownName".into()
            }]
        );
        let c = Concept::name("o_i");
        assert!(matches!(
            well_formed(&c, &sig, &rbox)[..],
            [Violation::WrongKind { .. }]
        ));
    }

    #[test]
    fn universal_self_and_inverse() {
        let (sig, rbox) = family();
        let c = Concept::and(
            Concept::SelfLoop(Role::Universal),
            Concept::exists(Role::Inverse("U".into()), Concept::top()),
        );
        assert_eq!(
            well_formed(&c, &sig, &rbox),
            vec![Violation::UniversalSelf, Violation::InverseUniversal]
        );
    }
}
