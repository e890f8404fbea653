//! The 41 rewrite rules, plus deliberately altered variants used to show
//! that the differential harness detects broken rules.

use std::fmt;
use std::str::FromStr;

use crate::syntax::{Concept, Role, Substitution};

/// Which version of the rule table to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Standard,
    /// Rule 27 with the inverse dropped on the right-hand side.
    Literal27,
    /// Rule 29 with the inverse dropped on the right-hand side.
    Literal29,
    /// Rule 5 producing `c ⊓ o_i`.
    Rule5Conjunction,
    /// Rule 6 producing `c ⊔ ¬o_i`.
    Rule6Disjunction,
    /// Rule 15 guarding with `¬o_i ⊓ ¬o_j`.
    Rule15OperatorFlip,
    /// Rule 22 with `i` and `j` exchanged.
    Rule22SwappedIndividuals,
    /// Rule 24 counting `n - 1` instead of `n + 1`.
    Rule24WrongOffset,
    /// Rule 30 with `i` and `j` exchanged.
    Rule30SwappedIndividuals,
    /// Rule 38 without the `∃U.(o_j ⊓ Cθ)` witness.
    Rule38MissingWitness,
    /// Rule 40 exempting `o_i` instead of `o_j`.
    Rule40WrongNominal,
}

impl Variant {
    pub const ALL: [Variant; 11] = [
        Variant::Standard,
        Variant::Literal27,
        Variant::Literal29,
        Variant::Rule5Conjunction,
        Variant::Rule6Disjunction,
        Variant::Rule15OperatorFlip,
        Variant::Rule22SwappedIndividuals,
        Variant::Rule24WrongOffset,
        Variant::Rule30SwappedIndividuals,
        Variant::Rule38MissingWitness,
        Variant::Rule40WrongNominal,
    ];

    /// The rule a non-standard variant alters.
    pub fn rule(self) -> Option<u8> {
        Some(match self {
            Variant::Standard => return None,
            Variant::Literal27 => 27,
            Variant::Literal29 => 29,
            Variant::Rule5Conjunction => 5,
            Variant::Rule6Disjunction => 6,
            Variant::Rule15OperatorFlip => 15,
            Variant::Rule22SwappedIndividuals => 22,
            Variant::Rule24WrongOffset => 24,
            Variant::Rule30SwappedIndividuals => 30,
            Variant::Rule38MissingWitness => 38,
            Variant::Rule40WrongNominal => 40,
        })
    }

    pub fn is_mutant(self) -> bool {
        !matches!(self, Variant::Standard | Variant::Literal27 | Variant::Literal29)
    }

    pub fn mutants() -> impl Iterator<Item = Variant> {
        Variant::ALL.into_iter().filter(|v| v.is_mutant())
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Literal27 => "literal-27",
            Variant::Literal29 => "literal-29",
            Variant::Rule5Conjunction => "mutant-5-conjunction",
            Variant::Rule6Disjunction => "mutant-6-disjunction",
            Variant::Rule15OperatorFlip => "mutant-15-operator-flip",
            Variant::Rule22SwappedIndividuals => "mutant-22-swap-ij",
            Variant::Rule24WrongOffset => "mutant-24-offset",
            Variant::Rule30SwappedIndividuals => "mutant-30-swap-ij",
            Variant::Rule38MissingWitness => "mutant-38-no-witness",
            Variant::Rule40WrongNominal => "mutant-40-wrong-nominal",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Variant::ALL.iter().map(|v| v.name()).collect();
                format!("unknown variant `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// How a substitution relates to the role of a Self, counting or
/// quantifier node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RoleCase {
    /// ε or a concept update.
    Untouched,
    /// An update of a different role name.
    OtherRole,
    SameAdd,
    SameDel,
}

fn role_case(r: &Role, s: &Substitution) -> RoleCase {
    match s {
        Substitution::RoleAdd { role, .. } if *r != Role::Universal && r.name() == role => {
            RoleCase::SameAdd
        }
        Substitution::RoleDel { role, .. } if *r != Role::Universal && r.name() == role => {
            RoleCase::SameDel
        }
        Substitution::RoleAdd { .. } | Substitution::RoleDel { .. } => RoleCase::OtherRole,
        _ => RoleCase::Untouched,
    }
}

/// Number of the rule matching the redex `body θ`, or `None` if `body` is
/// itself a substitution.
pub fn rule_for(body: &Concept, s: &Substitution) -> Option<u8> {
    let offset = |r: &Role, base: u8| base + u8::from(r.is_inverse());
    Some(match body {
        Concept::Bot => 1,
        Concept::Nominal(_) => 2,
        Concept::Name(c) => match s {
            Substitution::RoleAdd { .. } | Substitution::RoleDel { .. } => 3,
            Substitution::ConceptAdd { concept, .. } if concept == c => 5,
            Substitution::ConceptDel { concept, .. } if concept == c => 6,
            _ => 4,
        },
        Concept::Not(_) => 7,
        Concept::Or(..) => 8,
        Concept::And(..) => 9,
        Concept::SelfLoop(r) => match (role_case(r, s), r.is_inverse()) {
            (RoleCase::Untouched, _) => offset(r, 10),
            (RoleCase::OtherRole, _) => offset(r, 12),
            (RoleCase::SameAdd, false) => 14,
            (RoleCase::SameDel, false) => 15,
            (RoleCase::SameDel, true) => 16,
            (RoleCase::SameAdd, true) => 17,
        },
        Concept::AtLeast(_, r, _) | Concept::LessThan(_, r, _) => quantifier_rule(r, s, 18),
        Concept::Exists(r, _) => quantifier_rule(r, s, 26),
        Concept::Forall(r, _) => quantifier_rule(r, s, 34),
        Concept::Subst(..) => return None,
    })
}

fn quantifier_rule(r: &Role, s: &Substitution, base: u8) -> u8 {
    let family = match role_case(r, s) {
        RoleCase::Untouched => 0,
        RoleCase::OtherRole => 2,
        RoleCase::SameAdd => 4,
        RoleCase::SameDel => 6,
    };
    base + family + u8::from(r.is_inverse())
}

/// Applies the matching rule at the root of `redex`.
pub fn contract(redex: &Concept) -> Option<(u8, Concept)> {
    contract_variant(redex, Variant::Standard)
}

/// As [`contract`], with one rule possibly replaced by an altered version.
pub fn contract_variant(redex: &Concept, variant: Variant) -> Option<(u8, Concept)> {
    let Concept::Subst(body, s) = redex else {
        return None;
    };
    let rule = rule_for(body, s)?;
    let v = if variant.rule() == Some(rule) { variant } else { Variant::Standard };
    Some((rule, rhs(rule, body, s, v)))
}

/// `(≥ n r c)` or `(< n r c)` with out-of-range bounds folded to constants.
fn counting(at_least: bool, n: i64, r: &Role, c: Concept) -> Concept {
    if n <= 0 {
        if at_least { Concept::top() } else { Concept::Bot }
    } else if n > i64::from(u32::MAX) {
        if at_least { Concept::Bot } else { Concept::top() }
    } else if at_least {
        Concept::at_least(n as u32, r.clone(), c)
    } else {
        Concept::less_than(n as u32, r.clone(), c)
    }
}

fn rhs(rule: u8, body: &Concept, s: &Substitution, v: Variant) -> Concept {
    use Concept as K;
    let th = |c: &Concept| K::subst(c.clone(), s.clone());
    let o = K::nominal_of;
    let not = K::not;
    // Individuals of a role update: (i, j) = (from, to).
    let (i, j) = match s {
        Substitution::RoleAdd { from, to, .. } | Substitution::RoleDel { from, to, .. } => {
            (from.as_str(), to.as_str())
        }
        _ => ("", ""),
    };
    // The individual whose edge changes, seen from the node's own direction.
    let dir = |r: &Role| if r.is_inverse() { (j, i) } else { (i, j) };
    let u = || Role::Universal;

    match (rule, body) {
        (1, _) | (2, _) | (3, _) | (4, _) => body.clone(),
        (5, K::Name(c)) => {
            let ind = s.individuals()[0];
            if v == Variant::Rule5Conjunction {
                K::and(K::name(c), o(ind))
            } else {
                K::or(K::name(c), o(ind))
            }
        }
        (6, K::Name(c)) => {
            let ind = s.individuals()[0];
            if v == Variant::Rule6Disjunction {
                K::or(K::name(c), not(o(ind)))
            } else {
                K::and(K::name(c), not(o(ind)))
            }
        }
        (7, K::Not(c)) => not(th(c)),
        (8, K::Or(c, d)) => K::or(th(c), th(d)),
        (9, K::And(c, d)) => K::and(th(c), th(d)),
        (10..=13, K::SelfLoop(_)) => body.clone(),
        (14 | 17, K::SelfLoop(_)) => K::or(K::and(o(i), o(j)), body.clone()),
        (15 | 16, K::SelfLoop(_)) => {
            let guard = if v == Variant::Rule15OperatorFlip {
                K::and(not(o(i)), not(o(j)))
            } else {
                K::or(not(o(i)), not(o(j)))
            };
            K::and(guard, body.clone())
        }
        (18..=21, K::AtLeast(n, r, c)) => K::at_least(*n, r.clone(), th(c)),
        (18..=21, K::LessThan(n, r, c)) => K::less_than(*n, r.clone(), th(c)),
        (22..=25, K::AtLeast(n, r, c) | K::LessThan(n, r, c)) => {
            let at_least = matches!(body, K::AtLeast(..));
            let (mut a, mut b) = dir(r);
            if v == Variant::Rule22SwappedIndividuals {
                std::mem::swap(&mut a, &mut b);
            }
            let cth = th(c);
            let n = i64::from(*n);
            let witness = K::exists(u(), K::and(o(b), cth.clone()));
            let no_witness = K::forall(u(), K::or(not(o(b)), not(cth.clone())));
            let edge = K::exists(r.clone(), o(b));
            let no_edge = K::forall(r.clone(), not(o(b)));
            let adding = rule <= 23;
            let (guard_edge, unguard_edge, shifted) = if adding {
                (no_edge, edge, n - 1)
            } else if v == Variant::Rule24WrongOffset {
                (edge, no_edge, n - 1)
            } else {
                (edge, no_edge, n + 1)
            };
            let guard = K::and(K::and(o(a), witness), guard_edge);
            let unguard = K::or(K::or(not(o(a)), no_witness), unguard_edge);
            K::and(
                K::implies(guard, counting(at_least, shifted, r, cth.clone())),
                K::implies(unguard, counting(at_least, n, r, cth)),
            )
        }
        (26..=29, K::Exists(r, c)) => {
            let literal = (rule == 27 && v == Variant::Literal27)
                || (rule == 29 && v == Variant::Literal29);
            let r = if literal { Role::named(r.name()) } else { r.clone() };
            K::exists(r, th(c))
        }
        (30 | 31, K::Exists(r, c)) => {
            let (mut a, mut b) = dir(r);
            if v == Variant::Rule30SwappedIndividuals {
                std::mem::swap(&mut a, &mut b);
            }
            let cth = th(c);
            K::and(
                K::implies(
                    o(a),
                    K::or(
                        K::exists(u(), K::and(o(b), cth.clone())),
                        K::exists(r.clone(), cth.clone()),
                    ),
                ),
                K::implies(not(o(a)), K::exists(r.clone(), cth)),
            )
        }
        (32 | 33, K::Exists(r, c)) => {
            let (a, b) = dir(r);
            let cth = th(c);
            K::and(
                K::implies(o(a), K::exists(r.clone(), K::and(cth.clone(), not(o(b))))),
                K::implies(not(o(a)), K::exists(r.clone(), cth)),
            )
        }
        (34..=37, K::Forall(r, c)) => K::forall(r.clone(), th(c)),
        (38 | 39, K::Forall(r, c)) => {
            let (a, b) = dir(r);
            let cth = th(c);
            let all = K::forall(r.clone(), cth.clone());
            let guarded = if v == Variant::Rule38MissingWitness {
                all.clone()
            } else {
                K::and(all.clone(), K::exists(u(), K::and(o(b), cth)))
            };
            K::and(K::implies(o(a), guarded), K::implies(not(o(a)), all))
        }
        (40 | 41, K::Forall(r, c)) => {
            let (a, b) = dir(r);
            let exempt = if v == Variant::Rule40WrongNominal { a } else { b };
            let cth = th(c);
            K::and(
                K::implies(o(a), K::forall(r.clone(), K::or(cth.clone(), o(exempt)))),
                K::implies(not(o(a)), K::forall(r.clone(), cth)),
            )
        }
        _ => unreachable!("rule {rule} does not match {body:?}"),
    }
}
