use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sroiq_sigma::gen::{random_concept, random_substitution, ConceptShape, Vocab};
use sroiq_sigma::{
    check_model, eval_concept, normalize, parse_concept, parse_signature_file, sat_bounded, Error,
    Interpretation, NormalizeOptions, RBox, SatQuery, SearchMode, Signature, Verdict,
};

fn ijk() -> Signature {
    Signature::new(Vec::<String>::new(), vec![], vec!["S".into()], vec!["i".into(), "j".into(), "k".into()]).unwrap()
}

fn witness(q: &SatQuery) -> Option<(Interpretation, usize)> {
    match sat_bounded(q).unwrap().verdict {
        Verdict::Sat { witness, element } => Some((witness, element)),
        Verdict::Unknown => None,
    }
}

#[test]
fn graph_update_conjunction_is_satisfiable() {
    let sig = ijk();
    let text = "{o_i} & (<3 S (<3 S top))[S := S + (i, j)] & (<3 S (<3 S top)) \
                & exists S.{o_i} & exists S.{o_k} & forall S.!{o_j} \
                & exists U.({o_j} & (<1 S top) & !{o_i}) & exists U.({o_k} & (<1 S top) & !{o_i})";
    let c = parse_concept(text, &sig).unwrap();
    let nf = normalize(&c, NormalizeOptions::default()).unwrap().concept;
    let q = SatQuery::new(nf.clone(), RBox::default(), sig, 3);
    let (w, e) = witness(&q).expect("satisfiable within three elements");

    assert!(check_model(&nf, &w, &RBox::default(), None).unwrap().accepted());
    assert!(eval_concept(&c, &w).unwrap().contains(e));
    // The witness is the left-hand graph: i loops and points at k, j and k
    // are distinct sinks.
    let (i, j, k) = (w.individual("i").unwrap(), w.individual("j").unwrap(), w.individual("k").unwrap());
    assert_eq!(e, i);
    assert!(i != j && i != k);
    let s = w.role("S").unwrap();
    let mut edges = s.pairs();
    edges.sort();
    let mut expected = vec![(i, i), (i, k)];
    expected.sort();
    assert_eq!(edges, expected);
}

#[test]
fn bottom_is_never_satisfied() {
    for bound in 1..=3 {
        let q = SatQuery::new(sroiq_sigma::Concept::Bot, RBox::default(), ijk(), bound);
        let r = sat_bounded(&q).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(r.stats.interpretations > 0);
    }
}

#[test]
fn validator_trivial_cases() {
    let sig = ijk();
    let mut i = Interpretation::with_size(2).unwrap();
    for (n, ind) in ["i", "j", "k"].iter().enumerate() {
        i.set_individual(*ind, n % 2).unwrap();
    }
    i.complete_for(&sig).unwrap();
    for text in ["bot", "{o_i} & !{o_i}"] {
        let rep = check_model(&parse_concept(text, &sig).unwrap(), &i, &RBox::default(), None).unwrap();
        assert!(rep.members.is_empty());
        assert!(!rep.accepted());
    }
}

#[test]
fn exhaustive_search_is_deterministic_and_monotone() {
    let (sig, rbox) = parse_signature_file("concepts: A\nroles: R\nindividuals: a\n").unwrap();
    let c = parse_concept("exists R.(A & !{o_a}) & (>=2 R top)", &sig).unwrap();
    let mut first = None;
    for bound in 1..=4 {
        let q = SatQuery::new(c.clone(), rbox.clone(), sig.clone(), bound);
        let found = witness(&q);
        assert_eq!(found, witness(&q), "same query, same witness");
        if first.is_some() {
            assert!(found.is_some(), "SAT at a smaller bound but not at {bound}");
        } else if found.is_some() {
            first = Some(bound);
        }
    }
    assert_eq!(first, Some(2));
}

#[test]
fn random_mode_finds_easy_models() {
    let (sig, rbox) = parse_signature_file("concepts: A B\nroles: R\n").unwrap();
    let c = parse_concept("A & exists R.B", &sig).unwrap();
    let mut q = SatQuery::new(c.clone(), rbox.clone(), sig, 3);
    q.mode = SearchMode::Randomized { seed: 5, trials: 500 };
    let (w, e) = witness(&q).unwrap();
    assert!(eval_concept(&c, &w).unwrap().contains(e));
    assert!(check_model(&c, &w, &rbox, None).unwrap().accepted());
}

#[test]
fn at_individual_is_honoured() {
    let (sig, rbox) = parse_signature_file("concepts: A\nindividuals: a b\n").unwrap();
    let c = parse_concept("A & !{o_a}", &sig).unwrap();
    let mut q = SatQuery::new(c, rbox, sig, 2);
    q.at = Some("a".into());
    assert_eq!(sat_bounded(&q).unwrap().verdict, Verdict::Unknown);
    q.at = Some("b".into());
    let (w, e) = witness(&q).unwrap();
    assert_eq!(e, w.individual("b").unwrap());
}

#[test]
fn rbox_axioms_constrain_witnesses() {
    let (sig, rbox) = parse_signature_file(
        "roles: R S T\nhierarchy:\n  R S <= T\nassertions:\n  Irr S\norder:\n  R < T\n  S < T\n",
    )
    .unwrap();
    let c = parse_concept("exists R.exists S.top & forall T.bot", &sig).unwrap();
    let q = SatQuery::new(c.clone(), rbox.clone(), sig.clone(), 2);
    assert_eq!(sat_bounded(&q).unwrap().verdict, Verdict::Unknown);

    let c = parse_concept("exists R.exists S.top", &sig).unwrap();
    let (w, _) = witness(&SatQuery::new(c.clone(), rbox.clone(), sig, 2)).unwrap();
    let rep = check_model(&c, &w, &rbox, None).unwrap();
    assert!(rep.rbox.all_satisfied());
}

#[test]
fn preconditions_are_distinct_errors() {
    let (sig, cyclic) = parse_signature_file("roles: R S\nhierarchy:\n  R S <= S\n  S R <= R\n").unwrap();
    let c = parse_concept("exists R.top", &sig).unwrap();
    let e1 = sat_bounded(&SatQuery::new(c.clone(), cyclic, sig.clone(), 2)).unwrap_err();

    let (sig2, nonsimple) = parse_signature_file("roles: R S\nhierarchy:\n  R R <= S\nassertions:\n  Irr S\norder:\n  R < S\n").unwrap();
    let e2 = sat_bounded(&SatQuery::new(c.clone(), nonsimple, sig2, 2)).unwrap_err();

    let with_subst = parse_concept("(exists R.top)[R := R - (x, x)]", &Signature::new(
        Vec::<String>::new(), vec![], vec!["R".into()], vec!["x".into()]).unwrap()).unwrap();
    let e3 = sat_bounded(&SatQuery::new(with_subst, RBox::default(), sig, 2)).unwrap_err();

    let msgs = [e1.to_string(), e2.to_string(), e3.to_string()];
    assert!(matches!(e1, Error::Precondition(_)), "{e1}");
    assert!(matches!(e2, Error::Precondition(_)), "{e2}");
    assert!(matches!(e3, Error::Precondition(_)), "{e3}");
    assert!(msgs[0].contains("regular"), "{}", msgs[0]);
    assert!(msgs[1].contains("simple"), "{}", msgs[1]);
    assert!(msgs[2].contains("substitution"), "{}", msgs[2]);
}

/// Searching over a normal form and searching over the original term
/// (evaluated through updated interpretations) agree at every small bound.
#[test]
fn normalization_invariance_of_search() {
    let vocab = Vocab {
        concepts: vec!["A".into()],
        nominals: vec![],
        roles: vec!["R".into()],
        individuals: vec!["a".into(), "b".into()],
    };
    let sig = vocab.signature().unwrap();
    let shape = ConceptShape {
        max_depth: 3,
        inverse_prob: 0.2,
        universal_prob: 0.1,
        ..ConceptShape::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sat_count = 0;
    for _ in 0..40 {
        let mut c = random_concept(&mut rng, &vocab, &shape);
        for _ in 0..rng.gen_range(1..=2) {
            c = sroiq_sigma::Concept::subst(c, random_substitution(&mut rng, &vocab));
        }
        let nf = normalize(&c, NormalizeOptions::default()).unwrap().concept;
        for bound in 1..=2 {
            let normal = sat_bounded(&SatQuery::new(nf.clone(), RBox::default(), sig.clone(), bound)).unwrap();
            let mut direct = SatQuery::new(c.clone(), RBox::default(), sig.clone(), bound);
            direct.allow_substitutions = true;
            let direct = sat_bounded(&direct).unwrap();
            assert_eq!(normal.is_sat(), direct.is_sat(), "bound {bound}: {c}");
            sat_count += usize::from(normal.is_sat());
        }
    }
    assert!(sat_count > 10, "too few satisfiable samples: {sat_count}");
}
