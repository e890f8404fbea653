//! Differential testing of single rules against the reference semantics.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rules::{contract_variant, rule_for, Variant};
use crate::error::{Error, Result};
use crate::gen::{random_concept, random_interpretation, ConceptShape, InterpretationSpace, Vocab};
use crate::parse::{parse_concept_unresolved, print_concept};
use crate::semantics::{eval_concept, Interpretation};
use crate::syntax::{Concept, Polarity, Role, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivOptions {
    pub rule: u8,
    pub trials: usize,
    pub max_domain: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl EquivOptions {
    pub fn new(rule: u8, trials: usize, max_domain: usize, seed: u64) -> Self {
        EquivOptions {
            rule,
            trials,
            max_domain,
            seed,
            variant: Variant::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub lhs: Concept,
    pub rhs: Concept,
    pub interpretation: Interpretation,
    pub lhs_value: Vec<String>,
    pub rhs_value: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivReport {
    pub options: EquivOptions,
    pub counterexamples: Vec<Counterexample>,
}

impl EquivReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn sub_shape() -> ConceptShape {
    ConceptShape {
        max_depth: 3,
        subst_prob: 0.15,
        ..ConceptShape::default()
    }
}

fn polarity<R: Rng>(rng: &mut R) -> Polarity {
    if rng.gen() {
        Polarity::Add
    } else {
        Polarity::Del
    }
}

/// A random left-hand side `body θ` to which exactly rule `rule` applies.
pub fn random_instance<R: Rng>(rule: u8, rng: &mut R, vocab: &Vocab) -> Result<Concept> {
    if !(1..=41).contains(&rule) {
        return Err(Error::Precondition(format!("rule must be in 1..=41, got {rule}")));
    }
    let pick = |rng: &mut R, xs: &[String]| xs.choose(rng).expect("nonempty").clone();
    let sub = |rng: &mut R| random_concept(rng, vocab, &sub_shape());
    let ind = |rng: &mut R| pick(rng, &vocab.individuals);
    let any_subst = |rng: &mut R| crate::gen::random_substitution(rng, vocab);
    // ε or an update of some concept name.
    let concept_subst = |rng: &mut R| {
        if rng.gen_range(0..5) == 0 {
            Substitution::Epsilon
        } else {
            let pol = polarity(rng);
            Substitution::concept(pol, pick(rng, &vocab.concepts), ind(rng))
        }
    };
    let role_subst = |rng: &mut R, pol: Polarity, role: &str| {
        let (i, j) = (ind(rng), ind(rng));
        Substitution::role(pol, role, i, j)
    };

    let (body, s) = match rule {
        1 => (Concept::Bot, any_subst(rng)),
        2 => {
            let mut noms = vocab.nominals.clone();
            noms.extend(vocab.individuals.iter().map(|i| crate::syntax::canonical_nominal(i)));
            (Concept::nominal(pick(rng, &noms)), any_subst(rng))
        }
        3 => {
            let pol = polarity(rng);
            let r = pick(rng, &vocab.roles);
            (Concept::name(pick(rng, &vocab.concepts)), role_subst(rng, pol, &r))
        }
        4 => {
            let c = pick(rng, &vocab.concepts);
            let others: Vec<String> = vocab.concepts.iter().filter(|x| **x != c).cloned().collect();
            let s = if others.is_empty() || rng.gen_range(0..4) == 0 {
                Substitution::Epsilon
            } else {
                let pol = polarity(rng);
                Substitution::concept(pol, pick(rng, &others), ind(rng))
            };
            (Concept::name(c), s)
        }
        5 | 6 => {
            let c = pick(rng, &vocab.concepts);
            let pol = if rule == 5 { Polarity::Add } else { Polarity::Del };
            let s = Substitution::concept(pol, c.clone(), ind(rng));
            (Concept::name(c), s)
        }
        7 => (Concept::not(sub(rng)), any_subst(rng)),
        8 => (Concept::or(sub(rng), sub(rng)), any_subst(rng)),
        9 => (Concept::and(sub(rng), sub(rng)), any_subst(rng)),
        10..=41 => {
            let (family_base, kind) = match rule {
                10..=17 => (10, 0),
                18..=25 => (18, 1),
                26..=33 => (26, 2),
                _ => (34, 3),
            };
            let offset = rule - family_base;
            let name = pick(rng, &vocab.roles);
            // Self rules are numbered differently from the others.
            let (inverse, case) = if kind == 0 {
                match offset {
                    0 => (false, 0),
                    1 => (true, 0),
                    2 => (false, 1),
                    3 => (true, 1),
                    4 => (false, 2),
                    5 => (false, 3),
                    6 => (true, 3),
                    _ => (true, 2),
                }
            } else {
                (offset % 2 == 1, offset / 2)
            };
            let role = if inverse {
                Role::Inverse(name.clone())
            } else if kind >= 2 && case == 1 && rng.gen_range(0..6) == 0 {
                Role::Universal
            } else {
                Role::Named(name.clone())
            };
            let s = match case {
                0 => concept_subst(rng),
                1 => {
                    let others: Vec<String> = vocab.roles.iter().filter(|x| **x != name).cloned().collect();
                    let target = if role == Role::Universal || others.is_empty() {
                        name.clone()
                    } else {
                        pick(rng, &others)
                    };
                    let pol = polarity(rng);
                    role_subst(rng, pol, &target)
                }
                2 => role_subst(rng, Polarity::Add, &name),
                _ => role_subst(rng, Polarity::Del, &name),
            };
            let n = rng.gen_range(0..=3);
            let body = match kind {
                0 => Concept::SelfLoop(role),
                1 => {
                    if rng.gen() {
                        Concept::at_least(n, role, sub(rng))
                    } else {
                        Concept::less_than(n, role, sub(rng))
                    }
                }
                2 => Concept::exists(role, sub(rng)),
                _ => Concept::forall(role, sub(rng)),
            };
            (body, s)
        }
        _ => unreachable!(),
    };
    debug_assert_eq!(rule_for(&body, &s), Some(rule));
    Ok(Concept::subst(body, s))
}

fn compare(lhs: &Concept, rhs: &Concept, i: &Interpretation) -> Result<Option<(Vec<String>, Vec<String>)>> {
    let l = eval_concept(lhs, i)?;
    let r = eval_concept(rhs, i)?;
    Ok((l != r).then(|| (i.names_of(l), i.names_of(r))))
}

/// Runs `trials` independent trials; trial `k` draws its instance, domain
/// size and interpretation from its own ChaCha stream, so the report does not
/// depend on scheduling.
pub fn equiv_check(opts: EquivOptions) -> Result<EquivReport> {
    if !(1..=41).contains(&opts.rule) {
        return Err(Error::Precondition(format!("rule must be in 1..=41, got {}", opts.rule)));
    }
    if opts.max_domain == 0 || opts.max_domain > crate::semantics::MAX_DOMAIN {
        return Err(Error::Precondition(format!(
            "max domain must be in 1..={}",
            crate::semantics::MAX_DOMAIN
        )));
    }
    let vocab = Vocab::small();
    let outcomes: Vec<Option<Counterexample>> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(trial as u64);
            let lhs = random_instance(opts.rule, &mut rng, &vocab)?;
            let (_, rhs) = contract_variant(&lhs, opts.variant)
                .ok_or_else(|| Error::Internal("instance is not a redex".into()))?;
            let size = rng.gen_range(1..=opts.max_domain);
            let interp = random_interpretation(&mut rng, &vocab, size)?;
            Ok(compare(&lhs, &rhs, &interp)?.map(|(lhs_value, rhs_value)| Counterexample {
                trial,
                lhs,
                rhs,
                interpretation: interp,
                lhs_value,
                rhs_value,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(EquivReport {
        options: opts,
        counterexamples: outcomes.into_iter().flatten().collect(),
    })
}

/// Hand-picked instances with a small vocabulary, three per rule, for the
/// exhaustive check. Available for rules 1-9 and 22.
pub fn fixed_instances(rule: u8) -> Option<[Concept; 3]> {
    let texts: [&str; 3] = match rule {
        1 => ["bot[A := A + a]", "bot[R := R - (a, b)]", "bot[eps]"],
        2 => ["{n}[A := A + a]", "{o_a}[R := R + (a, b)]", "{n}[R := R - (b, a)]"],
        3 => ["A[R := R + (a, b)]", "A[R := R - (a, a)]", "B[S := S + (b, a)]"],
        4 => ["A[B := B + a]", "A[B := B - b]", "A[eps]"],
        5 => ["A[A := A + a]", "B[B := B + b]", "(A[A := A + b])"],
        6 => ["A[A := A - a]", "B[B := B - b]", "(A[A := A - b])"],
        7 => ["(!A)[A := A + a]", "(!(exists R.A))[R := R + (a, b)]", "(!{o_b})[A := A - a]"],
        8 => [
            "(A | B)[A := A + a]",
            "(A | exists R.B)[R := R - (a, b)]",
            "({n} | B)[B := B - b]",
        ],
        9 => [
            "(A & B)[B := B + a]",
            "(A & forall R.A)[R := R + (a, b)]",
            "(!A & {o_a})[A := A - a]",
        ],
        22 => [
            "(<2 R A)[R := R + (a, b)]",
            "(>=1 R A)[R := R + (a, b)]",
            "(<1 R top)[R := R + (a, a)]",
        ],
        _ => return None,
    };
    Some(texts.map(|t| parse_concept_unresolved(t).expect("fixed instance parses")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub lhs: Concept,
    pub rhs: Concept,
    pub interpretations: u64,
    pub counterexample: Option<Interpretation>,
}

/// Compares `lhs` with its contractum on every interpretation of the
/// symbols occurring in `lhs`, for every domain size up to `max_domain`.
pub fn exhaustive_check(lhs: &Concept, max_domain: usize) -> Result<ExhaustiveReport> {
    let (_, rhs) = contract_variant(lhs, Variant::Standard)
        .ok_or_else(|| Error::Precondition(format!("{} is not a redex", print_concept(lhs))))?;
    let vocab = Vocab::of_concept(lhs);
    let mut total = 0u64;
    for size in 1..=max_domain {
        let space = InterpretationSpace::new(&vocab, size)?;
        total += space.len();
        let hit = (0..space.len())
            .into_par_iter()
            .map(|k| -> Result<Option<Interpretation>> {
                let i = space.get(k)?;
                Ok(compare(lhs, &rhs, &i)?.map(|_| i))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(found) = hit {
            return Ok(ExhaustiveReport {
                lhs: lhs.clone(),
                rhs,
                interpretations: total,
                counterexample: found?,
            });
        }
    }
    Ok(ExhaustiveReport {
        lhs: lhs.clone(),
        rhs,
        interpretations: total,
        counterexample: None,
    })
}
