//! The lexicographic termination measure `(M, M')`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::syntax::Concept;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MeasurePair {
    pub m: u64,
    pub mp: u64,
}

impl MeasurePair {
    pub fn of(c: &Concept) -> Self {
        MeasurePair {
            m: measure_m(c),
            mp: measure_mp(c),
        }
    }
}

impl PartialOrd for MeasurePair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasurePair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.mp).cmp(&(other.m, other.mp))
    }
}

impl fmt::Display for MeasurePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={} M'={}", self.m, self.mp)
    }
}

/// `M`: quantifier depth, where a substitution counts as one more level.
pub fn measure_m(c: &Concept) -> u64 {
    match c {
        Concept::Bot | Concept::Name(_) | Concept::Nominal(_) | Concept::SelfLoop(_) => 0,
        Concept::Not(d) => measure_m(d),
        Concept::And(a, b) | Concept::Or(a, b) => measure_m(a).max(measure_m(b)),
        Concept::AtLeast(_, _, d)
        | Concept::LessThan(_, _, d)
        | Concept::Exists(_, d)
        | Concept::Forall(_, d)
        | Concept::Subst(d, _) => measure_m(d) + 1,
    }
}

/// `M'`: how far substitutions still have to be pushed.
pub fn measure_mp(c: &Concept) -> u64 {
    match c {
        Concept::Bot | Concept::Name(_) | Concept::Nominal(_) | Concept::SelfLoop(_) => 0,
        Concept::Not(d)
        | Concept::AtLeast(_, _, d)
        | Concept::LessThan(_, _, d)
        | Concept::Exists(_, d)
        | Concept::Forall(_, d) => measure_mp(d),
        Concept::And(a, b) | Concept::Or(a, b) => measure_mp(a).max(measure_mp(b)),
        Concept::Subst(body, _) => mp_under_subst(body),
    }
}

/// `M'(Cθ)` as a function of `C`.
fn mp_under_subst(c: &Concept) -> u64 {
    match c {
        Concept::Bot | Concept::Name(_) | Concept::Nominal(_) | Concept::SelfLoop(_) => 0,
        Concept::Not(d)
        | Concept::AtLeast(_, _, d)
        | Concept::LessThan(_, _, d)
        | Concept::Exists(_, d)
        | Concept::Forall(_, d) => mp_under_subst(d) + 1,
        Concept::And(a, b) | Concept::Or(a, b) => mp_under_subst(a).max(mp_under_subst(b)) + 1,
        // a stacked substitution (Dσ)θ
        Concept::Subst(..) => measure_mp(c) + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Polarity, Role, Substitution};

    fn theta() -> Substitution {
        Substitution::concept(Polarity::Add, "c", "i")
    }

    #[test]
    fn leaf_cases() {
        assert_eq!(measure_m(&Concept::Bot), 0);
        let bt = Concept::subst(Concept::Bot, theta());
        assert_eq!(MeasurePair::of(&bt), MeasurePair { m: 1, mp: 0 });
        let c_or_o = Concept::or(Concept::name("c"), Concept::nominal_of("i"));
        assert_eq!(MeasurePair::of(&c_or_o), MeasurePair { m: 0, mp: 0 });
    }

    #[test]
    fn composite_cases() {
        let ex = Concept::exists(Role::named("R"), Concept::subst(Concept::name("c"), theta()));
        assert_eq!(measure_m(&ex), 2);
        let neg = Concept::subst(Concept::not(Concept::name("c")), theta());
        assert_eq!(measure_mp(&neg), 1);
        let and = Concept::subst(
            Concept::and(Concept::not(Concept::name("c")), Concept::Bot),
            theta(),
        );
        assert_eq!(measure_mp(&and), 2);
        let stacked = Concept::subst(neg.clone(), theta());
        assert_eq!(measure_m(&stacked), 2);
        assert_eq!(measure_mp(&stacked), 2);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = MeasurePair { m: 1, mp: 9 };
        let b = MeasurePair { m: 2, mp: 0 };
        assert!(a < b);
        assert!(MeasurePair { m: 2, mp: 1 } > b);
    }
}
