use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sroiq_sigma::gen::{random_concept, random_interpretation, random_substitution, ConceptShape, Vocab};
use sroiq_sigma::rewrite::equiv::random_instance;
use sroiq_sigma::rewrite::rules::rule_for;
use sroiq_sigma::{
    apply_subst, eval_concept, normalize, parse_concept_unresolved, print_concept, Concept,
    ElementSet, NormalizeOptions, Role, Substitution,
};

fn shape(depth: usize) -> ConceptShape {
    ConceptShape {
        max_depth: depth,
        ..ConceptShape::default()
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complement relative to the domain, computed on bitmasks.
fn complement(s: ElementSet, n: usize) -> ElementSet {
    ElementSet::full(n).difference(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &Vocab::small(), &shape(10));
        let printed = print_concept(&c);
        let back = parse_concept_unresolved(&printed).unwrap();
        prop_assert_eq!(&back, &c, "{}", printed);
        prop_assert_eq!(print_concept(&back), printed);
    }

    /// Evaluating `C` after updating the interpretation agrees with
    /// evaluating the normal form of `Cσ` in the original one.
    #[test]
    fn substitution_commutes_with_normalization(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = Vocab::small();
        let c = random_concept(&mut r, &vocab, &ConceptShape { subst_prob: 0.0, ..shape(4) });
        let s = random_substitution(&mut r, &vocab);
        let size = r.gen_range(1..=6);
        let i = random_interpretation(&mut r, &vocab, size).unwrap();
        let updated = eval_concept(&c, &apply_subst(&i, &s).unwrap()).unwrap();
        let nf = normalize(&Concept::subst(c, s), NormalizeOptions::default()).unwrap().concept;
        prop_assert!(nf.is_substitution_free());
        prop_assert_eq!(eval_concept(&nf, &i).unwrap(), updated);
    }

    #[test]
    fn de_morgan_and_quantifier_dualities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = Vocab::small();
        let a = random_concept(&mut r, &vocab, &shape(3));
        let b = random_concept(&mut r, &vocab, &shape(3));
        let role = if r.gen_bool(0.5) { Role::named("R") } else { Role::Inverse("S".into()) };
        let size = r.gen_range(1..=5);
        let i = random_interpretation(&mut r, &vocab, size).unwrap();
        let ev = |c: &Concept| eval_concept(c, &i).unwrap();

        prop_assert_eq!(
            ev(&Concept::not(Concept::and(a.clone(), b.clone()))),
            ev(&Concept::or(Concept::not(a.clone()), Concept::not(b.clone())))
        );
        prop_assert_eq!(
            ev(&Concept::not(Concept::or(a.clone(), b.clone()))),
            ev(&Concept::and(Concept::not(a.clone()), Concept::not(b.clone())))
        );
        prop_assert_eq!(ev(&Concept::not(Concept::not(a.clone()))), ev(&a));
        prop_assert_eq!(ev(&Concept::exists(role.clone(), a.clone())), ev(&Concept::at_least(1, role.clone(), a.clone())));
        prop_assert_eq!(
            ev(&Concept::forall(role.clone(), a.clone())),
            ev(&Concept::less_than(1, role.clone(), Concept::not(a.clone())))
        );
        prop_assert_eq!(
            ev(&Concept::less_than(2, role.clone(), a.clone())),
            complement(ev(&Concept::at_least(2, role, a)), size)
        );
    }

    #[test]
    fn normalization_preserves_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = Vocab::small();
        let mut c = random_concept(&mut r, &vocab, &ConceptShape { subst_prob: 0.25, ..shape(5) });
        for _ in 0..r.gen_range(0..=2) {
            c = Concept::subst(c, random_substitution(&mut r, &vocab));
        }
        let out = normalize(&c, NormalizeOptions { audit: true, ..NormalizeOptions::default() }).unwrap();
        prop_assert!(out.concept.is_substitution_free());
        for _ in 0..3 {
            let size = r.gen_range(1..=5);
            let i = random_interpretation(&mut r, &vocab, size).unwrap();
            prop_assert_eq!(eval_concept(&out.concept, &i).unwrap(), eval_concept(&c, &i).unwrap());
        }
    }

    #[test]
    fn some_rule_applies_to_every_redex(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vocab = Vocab::small();
        let body = random_concept(&mut r, &vocab, &ConceptShape { subst_prob: 0.0, ..shape(2) });
        let s = if r.gen_bool(0.1) { Substitution::Epsilon } else { random_substitution(&mut r, &vocab) };
        prop_assert!(rule_for(&body, &s).is_some(), "{}", print_concept(&Concept::subst(body, s)));
    }
}

#[test]
fn every_rule_is_reachable() {
    let vocab = Vocab::small();
    let mut r = rng(11);
    for rule in 1..=41u8 {
        for _ in 0..20 {
            let c = random_instance(rule, &mut r, &vocab).unwrap();
            let Concept::Subst(body, s) = &c else {
                panic!("instance of rule {rule} is not a substitution: {}", print_concept(&c));
            };
            assert_eq!(rule_for(body, s), Some(rule), "{}", print_concept(&c));
        }
    }
}

#[test]
fn stacked_substitutions_update_outer_first() {
    let c = parse_concept_unresolved("A[A := A + a][A := A - a]").unwrap();
    let mut i = sroiq_sigma::Interpretation::with_size(2).unwrap();
    i.set_concept("A", ElementSet::EMPTY).unwrap();
    i.set_individual("a", 1).unwrap();
    // The outer deletion updates the interpretation first, then the inner
    // addition is applied on top of it.
    assert_eq!(eval_concept(&c, &i).unwrap(), ElementSet::singleton(1));
    let nf = normalize(&c, NormalizeOptions::default()).unwrap().concept;
    assert_eq!(eval_concept(&nf, &i).unwrap(), ElementSet::singleton(1));
}
