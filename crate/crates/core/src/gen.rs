//! Random and exhaustive generation of concepts, substitutions and
//! interpretations, for differential testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::semantics::{ElementSet, Interpretation, Relation};
use crate::syntax::{canonical_nominal, Concept, Polarity, Role, Signature, Substitution, Vocabulary};

/// The symbols generated terms and interpretations draw from. `nominals`
/// lists only the free nominals; canonical ones come with `individuals`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    pub concepts: Vec<String>,
    pub nominals: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
}

impl Vocab {
    /// Concept names `A, B`, roles `R, S`, individuals `a, b`, nominal `n`.
    pub fn small() -> Vocab {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Vocab {
            concepts: v(&["A", "B"]),
            nominals: v(&["n"]),
            roles: v(&["R", "S"]),
            individuals: v(&["a", "b"]),
        }
    }

    pub fn from_signature(sig: &Signature) -> Vocab {
        let canonical: Vec<String> = sig.individual_names().iter().map(|i| canonical_nominal(i)).collect();
        Vocab {
            concepts: sig.concept_names().iter().cloned().collect(),
            nominals: sig
                .nominal_names()
                .iter()
                .filter(|n| !canonical.contains(n))
                .cloned()
                .collect(),
            roles: sig.plain_role_names().cloned().collect(),
            individuals: sig.individual_names().iter().cloned().collect(),
        }
    }

    /// The symbols occurring in a term. Canonical nominals are mapped back to
    /// their individuals.
    pub fn of_concept(c: &Concept) -> Vocab {
        Vocab::from_vocabulary(&c.vocabulary())
    }

    pub fn from_vocabulary(v: &Vocabulary) -> Vocab {
        let mut individuals = v.individuals.clone();
        let mut nominals = Vec::new();
        for n in &v.nominals {
            match n.strip_prefix("o_") {
                Some(ind) if !ind.is_empty() => {
                    individuals.insert(ind.to_string());
                }
                _ => nominals.push(n.clone()),
            }
        }
        Vocab {
            concepts: v.concepts.iter().cloned().collect(),
            nominals,
            roles: v.roles.iter().cloned().collect(),
            individuals: individuals.into_iter().collect(),
        }
    }

    pub fn signature(&self) -> Result<Signature> {
        Signature::new(
            self.concepts.clone(),
            self.nominals.clone(),
            self.roles.clone(),
            self.individuals.clone(),
        )
    }

    fn all_nominals(&self) -> Vec<String> {
        let mut out = self.nominals.clone();
        out.extend(self.individuals.iter().map(|i| canonical_nominal(i)));
        out
    }
}

/// Shape parameters for random concepts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConceptShape {
    pub max_depth: usize,
    /// Chance that a non-leaf position becomes a substitution node.
    pub subst_prob: f64,
    /// Chance of stopping early at a leaf.
    pub leaf_prob: f64,
    pub max_count: u32,
    pub inverse_prob: f64,
    /// Chance that an existential or universal restriction uses `U`.
    pub universal_prob: f64,
}

impl Default for ConceptShape {
    fn default() -> Self {
        ConceptShape {
            max_depth: 3,
            subst_prob: 0.1,
            leaf_prob: 0.3,
            max_count: 3,
            inverse_prob: 0.3,
            universal_prob: 0.05,
        }
    }
}

fn pick<'a, R: Rng>(rng: &mut R, xs: &'a [String]) -> &'a str {
    xs.choose(rng).expect("vocabulary slot must be nonempty")
}

pub fn random_role<R: Rng>(rng: &mut R, vocab: &Vocab, inverse_prob: f64) -> Role {
    let name = pick(rng, &vocab.roles).to_string();
    if rng.gen_bool(inverse_prob) {
        Role::Inverse(name)
    } else {
        Role::Named(name)
    }
}

/// A random substitution; ε is drawn rarely.
pub fn random_substitution<R: Rng>(rng: &mut R, vocab: &Vocab) -> Substitution {
    let pol = if rng.gen() { Polarity::Add } else { Polarity::Del };
    match rng.gen_range(0..9) {
        0 => Substitution::Epsilon,
        1..=4 => Substitution::concept(pol, pick(rng, &vocab.concepts), pick(rng, &vocab.individuals)),
        _ => Substitution::role(
            pol,
            pick(rng, &vocab.roles),
            pick(rng, &vocab.individuals),
            pick(rng, &vocab.individuals),
        ),
    }
}

pub fn random_leaf<R: Rng>(rng: &mut R, vocab: &Vocab, shape: &ConceptShape) -> Concept {
    match rng.gen_range(0..10) {
        0 => Concept::Bot,
        1 => Concept::top(),
        2..=5 => Concept::name(pick(rng, &vocab.concepts)),
        6..=8 => Concept::nominal(pick(rng, &vocab.all_nominals())),
        _ => Concept::SelfLoop(random_role(rng, vocab, shape.inverse_prob)),
    }
}

/// A random concept of depth at most `shape.max_depth` (leaves at depth 1).
/// Counting restrictions only use plain or inverse role names.
pub fn random_concept<R: Rng>(rng: &mut R, vocab: &Vocab, shape: &ConceptShape) -> Concept {
    gen(rng, vocab, shape, shape.max_depth)
}

fn gen<R: Rng>(rng: &mut R, vocab: &Vocab, shape: &ConceptShape, depth: usize) -> Concept {
    if depth <= 1 || rng.gen_bool(shape.leaf_prob) {
        return random_leaf(rng, vocab, shape);
    }
    if rng.gen_bool(shape.subst_prob) {
        let body = gen(rng, vocab, shape, depth - 1);
        return Concept::subst(body, random_substitution(rng, vocab));
    }
    let d = depth - 1;
    let quant_role = |rng: &mut R| {
        if rng.gen_bool(shape.universal_prob) {
            Role::Universal
        } else {
            random_role(rng, vocab, shape.inverse_prob)
        }
    };
    match rng.gen_range(0..8) {
        0 => Concept::not(gen(rng, vocab, shape, d)),
        1 => Concept::and(gen(rng, vocab, shape, d), gen(rng, vocab, shape, d)),
        2 => Concept::or(gen(rng, vocab, shape, d), gen(rng, vocab, shape, d)),
        3 => {
            let n = rng.gen_range(0..=shape.max_count);
            Concept::at_least(n, random_role(rng, vocab, shape.inverse_prob), gen(rng, vocab, shape, d))
        }
        4 => {
            let n = rng.gen_range(0..=shape.max_count);
            Concept::less_than(n, random_role(rng, vocab, shape.inverse_prob), gen(rng, vocab, shape, d))
        }
        5 => {
            let r = quant_role(rng);
            Concept::exists(r, gen(rng, vocab, shape, d))
        }
        6 => {
            let r = quant_role(rng);
            Concept::forall(r, gen(rng, vocab, shape, d))
        }
        _ => Concept::not(gen(rng, vocab, shape, d)),
    }
}

/// A random interpretation over `vocab` with `size` elements. Each concept
/// and role gets its own density, so near-empty and near-full valuations
/// both occur.
pub fn random_interpretation<R: Rng>(rng: &mut R, vocab: &Vocab, size: usize) -> Result<Interpretation> {
    let mut i = Interpretation::with_size(size)?;
    for c in &vocab.concepts {
        let p: f64 = rng.gen();
        let set = (0..size).filter(|_| rng.gen_bool(p)).collect::<ElementSet>();
        i.set_concept(c.clone(), set)?;
    }
    for r in &vocab.roles {
        let p: f64 = rng.gen::<f64>() * 0.7;
        let mut rel = Relation::empty(size);
        for a in 0..size {
            for b in 0..size {
                if rng.gen_bool(p) {
                    rel.insert(a, b);
                }
            }
        }
        i.set_role(r.clone(), rel)?;
    }
    for n in &vocab.nominals {
        i.set_nominal(n.clone(), rng.gen_range(0..size))?;
    }
    for ind in &vocab.individuals {
        i.set_individual(ind.clone(), rng.gen_range(0..size))?;
    }
    Ok(i)
}

/// Every interpretation over `vocab` with exactly `size` elements, indexed
/// by a mixed-radix counter.
#[derive(Debug, Clone)]
pub struct InterpretationSpace {
    vocab: Vocab,
    size: usize,
    concept_bits: u32,
    role_bits: u32,
    total: u64,
}

impl InterpretationSpace {
    pub fn new(vocab: &Vocab, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyDomain);
        }
        let concept_bits = (vocab.concepts.len() * size) as u32;
        let role_bits = (vocab.roles.len() * size * size) as u32;
        let pinned = (vocab.nominals.len() + vocab.individuals.len()) as u32;
        let placements = (size as u64).checked_pow(pinned);
        let total = placements
            .and_then(|p| 1u64.checked_shl(concept_bits + role_bits).filter(|_| concept_bits + role_bits < 63).and_then(|b| b.checked_mul(p)))
            .ok_or_else(|| Error::Precondition("interpretation space too large to enumerate".into()))?;
        Ok(InterpretationSpace {
            vocab: vocab.clone(),
            size,
            concept_bits,
            role_bits,
            total,
        })
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn get(&self, index: u64) -> Result<Interpretation> {
        let n = self.size;
        let mut i = Interpretation::with_size(n)?;
        let mut bits = index & ((1u64 << (self.concept_bits + self.role_bits)) - 1);
        let mut rest = index >> (self.concept_bits + self.role_bits);
        let full = (1u64 << n) - 1;
        for c in &self.vocab.concepts {
            i.set_concept(c.clone(), ElementSet::from_bits(bits & full))?;
            bits >>= n;
        }
        for r in &self.vocab.roles {
            let mut rel = Relation::empty(n);
            for a in 0..n {
                for b in 0..n {
                    if bits & 1 == 1 {
                        rel.insert(a, b);
                    }
                    bits >>= 1;
                }
            }
            i.set_role(r.clone(), rel)?;
        }
        let mut next = || {
            let e = (rest % n as u64) as usize;
            rest /= n as u64;
            e
        };
        for o in &self.vocab.nominals {
            i.set_nominal(o.clone(), next())?;
        }
        for ind in &self.vocab.individuals {
            i.set_individual(ind.clone(), next())?;
        }
        Ok(i)
    }
}
