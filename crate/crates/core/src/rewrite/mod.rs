//! Elimination of explicit substitutions.
//!
//! Every redex is a substitution node `Cθ` whose body `C` is not itself a
//! substitution; exactly one rule of [`rules`] applies to it. Normalization
//! contracts the innermost-leftmost redex until none is left.

pub mod equiv;
pub mod measure;
pub mod rules;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parse::print_concept;
use crate::syntax::Concept;

pub use measure::{measure_m, measure_mp, MeasurePair};
pub use rules::{contract, contract_variant, rule_for, Variant};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// One contraction. `before` and `after` are the redex and its contractum,
/// not the whole term; [`RewriteStep::apply_to`] rebuilds the whole term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: u8,
    pub redex_path: Vec<usize>,
    pub before: Concept,
    pub after: Concept,
    pub measure_before: MeasurePair,
    pub measure_after: MeasurePair,
}

impl RewriteStep {
    /// Replaces the subterm at `redex_path` in `whole` by the contractum.
    pub fn apply_to(&self, whole: &Concept) -> Result<Concept> {
        let mut out = whole.clone();
        let slot = out
            .subterm_mut(&self.redex_path)
            .ok_or_else(|| Error::Internal("redex path does not exist".into()))?;
        if *slot != self.before {
            return Err(Error::Internal("redex path points at a different term".into()));
        }
        *slot = self.after.clone();
        Ok(out)
    }

    pub fn decreases(&self) -> bool {
        self.measure_after < self.measure_before
    }

    pub fn to_record(&self) -> StepRecord {
        StepRecord {
            rule: self.rule,
            redex_path: self.redex_path.clone(),
            before: print_concept(&self.before),
            after: print_concept(&self.after),
            measure_before: self.measure_before,
            measure_after: self.measure_after,
        }
    }
}

/// Printable form of a [`RewriteStep`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub rule: u8,
    pub redex_path: Vec<usize>,
    pub before: String,
    pub after: String,
    pub measure_before: MeasurePair,
    pub measure_after: MeasurePair,
}

fn make_step(rule: u8, path: Vec<usize>, before: Concept, after: Concept) -> RewriteStep {
    RewriteStep {
        rule,
        redex_path: path,
        measure_before: MeasurePair::of(&before),
        measure_after: MeasurePair::of(&after),
        before,
        after,
    }
}

fn find_redex(c: &Concept, path: &mut Vec<usize>) -> bool {
    if let Concept::Subst(body, _) = c {
        if body.is_substitution_free() {
            return true;
        }
    }
    for (k, child) in c.children().into_iter().enumerate() {
        path.push(k);
        if find_redex(child, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Contracts the innermost-leftmost redex of `c`, if there is one.
pub fn rewrite_step(c: &Concept) -> Result<Option<RewriteStep>> {
    let mut path = Vec::new();
    if !find_redex(c, &mut path) {
        return Ok(None);
    }
    let redex = c
        .subterm(&path)
        .ok_or_else(|| Error::Internal("lost redex".into()))?;
    let (rule, after) = contract(redex)
        .ok_or_else(|| Error::Internal(format!("no rule matches {}", print_concept(redex))))?;
    Ok(Some(make_step(rule, path, redex.clone(), after)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Fail as soon as a step does not decrease `(M, M')`.
    pub audit: bool,
    /// Keep every step in the result.
    pub trace: bool,
    pub step_limit: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            audit: false,
            trace: false,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub concept: Concept,
    /// Empty unless tracing was requested.
    pub steps: Vec<RewriteStep>,
    pub step_count: usize,
}

/// Normalizes `c`, contracting redexes in innermost-leftmost order.
///
/// The sequence of contractions is the same as repeatedly calling
/// [`rewrite_step`], but each subterm is visited only once.
pub fn normalize(c: &Concept, opts: NormalizeOptions) -> Result<Normalized> {
    let mut run = Run {
        opts,
        steps: Vec::new(),
        count: 0,
        path: Vec::new(),
    };
    let concept = run.norm(c.clone())?;
    debug_assert!(concept.is_substitution_free());
    Ok(Normalized {
        concept,
        steps: run.steps,
        step_count: run.count,
    })
}

/// Normal form with default options.
pub fn normal_form(c: &Concept) -> Result<Concept> {
    Ok(normalize(c, NormalizeOptions::default())?.concept)
}

struct Run {
    opts: NormalizeOptions,
    steps: Vec<RewriteStep>,
    count: usize,
    path: Vec<usize>,
}

impl Run {
    fn norm(&mut self, c: Concept) -> Result<Concept> {
        Ok(match c {
            Concept::Subst(body, s) => {
                self.path.push(0);
                let body = self.norm(*body)?;
                self.path.pop();
                let redex = Concept::Subst(Box::new(body), s);
                let (rule, after) = contract(&redex).ok_or_else(|| {
                    Error::Internal(format!("no rule matches {}", print_concept(&redex)))
                })?;
                self.record(rule, redex, &after)?;
                self.norm(after)?
            }
            Concept::Not(a) => Concept::Not(self.child(0, *a)?),
            Concept::And(a, b) => {
                let a = self.child(0, *a)?;
                Concept::And(a, self.child(1, *b)?)
            }
            Concept::Or(a, b) => {
                let a = self.child(0, *a)?;
                Concept::Or(a, self.child(1, *b)?)
            }
            Concept::AtLeast(n, r, a) => Concept::AtLeast(n, r, self.child(0, *a)?),
            Concept::LessThan(n, r, a) => Concept::LessThan(n, r, self.child(0, *a)?),
            Concept::Exists(r, a) => Concept::Exists(r, self.child(0, *a)?),
            Concept::Forall(r, a) => Concept::Forall(r, self.child(0, *a)?),
            leaf => leaf,
        })
    }

    fn child(&mut self, k: usize, c: Concept) -> Result<Box<Concept>> {
        if c.is_substitution_free() {
            return Ok(Box::new(c));
        }
        self.path.push(k);
        let out = self.norm(c);
        self.path.pop();
        Ok(Box::new(out?))
    }

    fn record(&mut self, rule: u8, before: Concept, after: &Concept) -> Result<()> {
        self.count += 1;
        if self.count > self.opts.step_limit {
            return Err(Error::StepLimit(self.opts.step_limit));
        }
        if !(self.opts.audit || self.opts.trace) {
            return Ok(());
        }
        let step = make_step(rule, self.path.clone(), before, after.clone());
        if self.opts.audit && !step.decreases() {
            return Err(Error::MeasureViolation {
                rule,
                before: (step.measure_before.m, step.measure_before.mp),
                after: (step.measure_after.m, step.measure_after.mp),
            });
        }
        if self.opts.trace {
            self.steps.push(step);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_concept_unresolved;

    fn p(s: &str) -> Concept {
        parse_concept_unresolved(s).unwrap()
    }

    fn traced() -> NormalizeOptions {
        NormalizeOptions {
            audit: true,
            trace: true,
            ..NormalizeOptions::default()
        }
    }

    #[test]
    fn sister_example() {
        let out = normalize(&p("(exists Sister.Female)[Female := Female + Alice]"), traced()).unwrap();
        assert_eq!(print_concept(&out.concept), "exists Sister.(Female | {o_Alice})");
        let rules: Vec<u8> = out.steps.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![26, 5]);
        assert_eq!(out.steps[1].redex_path, vec![0]);
    }

    #[test]
    fn substitution_free_terms_are_fixed_points() {
        let c = p("exists R.(A & !{o}) | <2 S top");
        let out = normalize(&c, traced()).unwrap();
        assert_eq!(out.concept, c);
        assert!(out.steps.is_empty());
        assert_eq!(rewrite_step(&c).unwrap(), None);
    }

    #[test]
    fn single_steps_match_normalize() {
        let terms = [
            "(exists R.(A | B[A := A - x]))[R := R + (x, y)]",
            "((<2 S A)[S := S - (x, y)] & forall R-.B)[B := B + y][R := R + (y, x)]",
            "!(self R)[R := R + (x, x)] | (exists U.{o})[eps]",
            "(<3 S (<3 S top))[S := S + (i, j)]",
        ];
        for t in terms {
            let c = p(t);
            let fast = normalize(&c, traced()).unwrap();
            let mut cur = c.clone();
            let mut slow = Vec::new();
            while let Some(step) = rewrite_step(&cur).unwrap() {
                let next = step.apply_to(&cur).unwrap();
                assert!(measure_m(&next) <= measure_m(&cur));
                cur = next;
                slow.push(step);
            }
            assert_eq!(fast.steps, slow, "{t}");
            assert_eq!(fast.concept, cur);
            assert_eq!(fast.step_count, slow.len());
        }
    }

    #[test]
    fn step_limit_is_enforced() {
        let c = p("(<3 S (<3 S top))[S := S + (i, j)]");
        let opts = NormalizeOptions {
            step_limit: 3,
            ..NormalizeOptions::default()
        };
        assert_eq!(normalize(&c, opts), Err(Error::StepLimit(3)));
    }

    #[test]
    fn apply_to_rejects_wrong_paths() {
        let c = p("(A & B[eps])");
        let step = rewrite_step(&c).unwrap().unwrap();
        assert_eq!(step.redex_path, vec![1]);
        assert!(step.apply_to(&p("A & B")).is_err());
    }
}
