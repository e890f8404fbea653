//! Bounded finite-model search. Sound but incomplete: a positive answer
//! always carries a checked witness, and failure to find one is reported as
//! unknown, never as unsatisfiable.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gen::Vocab;
use crate::rbox::{check_regular, check_simple_assertions, simple_roles};
use crate::semantics::{eval_concept, rbox_satisfied, ElementSet, Interpretation, RBoxReport, Relation};
use crate::syntax::{Concept, RBox, Signature};
use crate::wellformed::well_formed;

pub const DEFAULT_BUDGET: u64 = 20_000_000;
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// All interpretations of each size, in a canonical order.
    Exhaustive,
    /// `trials` random interpretations of each size.
    Randomized { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatQuery {
    pub concept: Concept,
    pub rbox: RBox,
    pub sig: Signature,
    pub max_domain: usize,
    pub mode: SearchMode,
    /// Require this individual, rather than just some element, to satisfy
    /// the concept.
    pub at: Option<String>,
    /// Maximum number of interpretations examined overall.
    pub budget: u64,
    /// Accept concepts that still contain substitutions and evaluate them
    /// directly. Used to cross-check normalization.
    pub allow_substitutions: bool,
}

impl SatQuery {
    pub fn new(concept: Concept, rbox: RBox, sig: Signature, max_domain: usize) -> Self {
        SatQuery {
            concept,
            rbox,
            sig,
            max_domain,
            mode: SearchMode::Exhaustive,
            at: None,
            budget: DEFAULT_BUDGET,
            allow_substitutions: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat { witness: Interpretation, element: usize },
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub interpretations: u64,
    /// Largest domain size looked at.
    pub max_size_reached: usize,
    pub budget_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat { .. })
    }
}

/// Outcome of checking a concept and a role box against an interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub extension: ElementSet,
    pub members: Vec<String>,
    pub rbox: RBoxReport,
    pub coherence: Vec<String>,
    /// The designated individual and whether it lies in the extension.
    pub at: Option<(String, bool)>,
}

impl ModelReport {
    pub fn nonempty(&self) -> bool {
        !self.extension.is_empty()
    }

    /// The concept is satisfied (at the designated individual if any), every
    /// axiom holds and nominals agree with their individuals.
    pub fn accepted(&self) -> bool {
        let hit = match &self.at {
            Some((_, ok)) => *ok,
            None => self.nonempty(),
        };
        hit && self.rbox.all_satisfied() && self.coherence.is_empty()
    }
}

/// Evaluates `c` in `i` and checks `rbox` and nominal coherence. Uses only
/// the reference semantics.
pub fn check_model(c: &Concept, i: &Interpretation, rbox: &RBox, at: Option<&str>) -> Result<ModelReport> {
    let extension = eval_concept(c, i)?;
    let at = match at {
        Some(ind) => Some((ind.to_string(), extension.contains(i.individual(ind)?))),
        None => None,
    };
    Ok(ModelReport {
        members: i.names_of(extension),
        extension,
        rbox: rbox_satisfied(i, rbox)?,
        coherence: i.coherence_issues(),
        at,
    })
}

fn check_preconditions(q: &SatQuery) -> Result<()> {
    if q.max_domain == 0 || q.max_domain > crate::semantics::MAX_DOMAIN {
        return Err(Error::Precondition(format!(
            "max domain must be in 1..={}",
            crate::semantics::MAX_DOMAIN
        )));
    }
    if !q.allow_substitutions && !q.concept.is_substitution_free() {
        return Err(Error::Precondition(
            "concept contains substitutions; normalize it first".into(),
        ));
    }
    let report = check_regular(&q.rbox)?;
    if !report.regular {
        return Err(Error::Precondition("role hierarchy is not regular".into()));
    }
    let simple = simple_roles(&q.rbox, &q.sig);
    if let Some(v) = check_simple_assertions(&q.rbox, &simple).first() {
        return Err(Error::Precondition(v.to_string()));
    }
    if let Some(v) = well_formed(&q.concept, &q.sig, &q.rbox).first() {
        return Err(Error::Precondition(format!("concept is not well formed: {v}")));
    }
    for name in q.rbox.role_names() {
        if !q.sig.is_role(&name) {
            return Err(Error::UnknownName { kind: "role", name });
        }
    }
    if let Some(ind) = &q.at {
        if !q.sig.is_individual(ind) {
            return Err(Error::UnknownName {
                kind: "individual",
                name: ind.clone(),
            });
        }
    }
    Ok(())
}

/// What the search enumerates: symbols that can affect the answer.
struct Layout {
    concepts: Vec<String>,
    roles: Vec<String>,
    /// Free nominals followed by individuals.
    pinned: Vec<Pinned>,
}

enum Pinned {
    Nominal(String),
    Individual(String),
}

impl Layout {
    fn new(q: &SatQuery) -> Layout {
        let v = Vocab::of_concept(&q.concept);
        let mut roles: BTreeSet<String> = v.roles.into_iter().collect();
        roles.extend(q.rbox.role_names());
        let mut inds: BTreeSet<String> = v.individuals.into_iter().collect();
        inds.extend(q.at.clone());
        let mut pinned: Vec<Pinned> = v.nominals.into_iter().map(Pinned::Nominal).collect();
        pinned.extend(inds.into_iter().map(Pinned::Individual));
        Layout {
            concepts: v.concepts,
            roles: roles.into_iter().collect(),
            pinned,
        }
    }

    fn bits(&self, n: usize) -> u32 {
        (self.concepts.len() * n + self.roles.len() * n * n) as u32
    }

    /// Builds the interpretation for one placement and one bit pattern.
    /// Symbols of `sig` outside the layout get empty valuations or element 0.
    fn decode(&self, sig: &Signature, n: usize, placement: &[usize], mut bits: u64) -> Result<Interpretation> {
        let mut i = Interpretation::with_size(n)?;
        let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        for c in &self.concepts {
            i.set_concept(c.clone(), ElementSet::from_bits(bits & full))?;
            bits = bits.checked_shr(n as u32).unwrap_or(0);
        }
        for r in &self.roles {
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
        for (p, &e) in self.pinned.iter().zip(placement) {
            match p {
                Pinned::Nominal(o) => i.set_nominal(o.clone(), e)?,
                Pinned::Individual(ind) => i.set_individual(ind.clone(), e)?,
            }
        }
        for ind in sig.individual_names() {
            if i.individual(ind).is_err() {
                i.set_individual(ind.clone(), 0)?;
            }
        }
        for o in sig.nominal_names() {
            if i.nominal(o).is_err() {
                i.set_nominal(o.clone(), 0)?;
            }
        }
        i.complete_for(sig)?;
        Ok(i)
    }
}

/// Placements of `p` pinned symbols on `n` elements up to renaming of
/// elements: restricted growth strings (each symbol takes a used element or
/// the next fresh one).
fn placements(p: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(p: usize, n: usize, cur: &mut Vec<usize>, fresh: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for e in 0..=fresh.min(n - 1) {
            cur.push(e);
            go(p, n, cur, fresh.max(e + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, n, &mut Vec::with_capacity(p), 0, &mut out);
    out
}

fn test_candidate(q: &SatQuery, i: &Interpretation) -> Result<Option<usize>> {
    let ext = eval_concept(&q.concept, i)?;
    let element = match &q.at {
        Some(ind) => {
            let e = i.individual(ind)?;
            if !ext.contains(e) {
                return Ok(None);
            }
            e
        }
        None => match ext.iter().next() {
            Some(e) => e,
            None => return Ok(None),
        },
    };
    if !rbox_satisfied(i, &q.rbox)?.all_satisfied() {
        return Ok(None);
    }
    Ok(Some(element))
}

/// Searches domains of size `1..=q.max_domain` for an interpretation that
/// satisfies the concept and the role box.
pub fn sat_bounded(q: &SatQuery) -> Result<SatResult> {
    check_preconditions(q)?;
    let layout = Layout::new(q);
    let mut stats = SearchStats::default();
    for n in 1..=q.max_domain {
        stats.max_size_reached = n;
        let found = match q.mode {
            SearchMode::Exhaustive => search_exhaustive(q, &layout, n, &mut stats)?,
            SearchMode::Randomized { seed, trials } => search_random(q, &layout, n, seed, trials, &mut stats)?,
        };
        if let Some((witness, element)) = found {
            let report = check_model(&q.concept, &witness, &q.rbox, q.at.as_deref())?;
            if !report.accepted() || !report.extension.contains(element) {
                return Err(Error::Internal("search produced a witness the validator rejects".into()));
            }
            return Ok(SatResult {
                verdict: Verdict::Sat { witness, element },
                stats,
            });
        }
        if stats.budget_exhausted {
            break;
        }
    }
    Ok(SatResult {
        verdict: Verdict::Unknown,
        stats,
    })
}

type Found = Option<(Interpretation, usize)>;

fn search_exhaustive(q: &SatQuery, layout: &Layout, n: usize, stats: &mut SearchStats) -> Result<Found> {
    let bits = layout.bits(n);
    let space: u64 = if bits >= 64 { u64::MAX } else { 1u64 << bits };
    for placement in placements(layout.pinned.len(), n) {
        let remaining = q.budget.saturating_sub(stats.interpretations);
        let limit = space.min(remaining);
        if limit < space {
            stats.budget_exhausted = true;
        }
        let chunks = limit.div_ceil(CHUNK);
        let hit = (0..chunks)
            .into_par_iter()
            .map(|ch| -> Result<Option<(u64, Interpretation, usize)>> {
                let end = ((ch + 1) * CHUNK).min(limit);
                for idx in ch * CHUNK..end {
                    let i = layout.decode(&q.sig, n, &placement, idx)?;
                    if let Some(e) = test_candidate(q, &i)? {
                        return Ok(Some((idx, i, e)));
                    }
                }
                Ok(None)
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        match hit {
            Some(r) => {
                let (idx, i, e) = r?.expect("filtered");
                stats.interpretations += idx + 1;
                return Ok(Some((i, e)));
            }
            None => stats.interpretations += limit,
        }
        if stats.budget_exhausted {
            return Ok(None);
        }
    }
    Ok(None)
}

fn search_random(
    q: &SatQuery,
    layout: &Layout,
    n: usize,
    seed: u64,
    trials: u64,
    stats: &mut SearchStats,
) -> Result<Found> {
    let remaining = q.budget.saturating_sub(stats.interpretations);
    let limit = trials.min(remaining);
    if limit < trials {
        stats.budget_exhausted = true;
    }
    let bits = layout.bits(n);
    let mask = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let hit = (0..limit)
        .into_par_iter()
        .map(|t| -> Result<Option<(u64, Interpretation, usize)>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((n as u64) << 40) | t);
            let placement: Vec<usize> = (0..layout.pinned.len()).map(|_| rng.gen_range(0..n)).collect();
            let i = layout.decode(&q.sig, n, &placement, rng.gen::<u64>() & mask)?;
            Ok(test_candidate(q, &i)?.map(|e| (t, i, e)))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match hit {
        Some(r) => {
            let (t, i, e) = r?.expect("filtered");
            stats.interpretations += t + 1;
            Ok(Some((i, e)))
        }
        None => {
            stats.interpretations += limit;
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_concept;

    fn sig() -> Signature {
        Signature::new(vec!["A"], vec![], vec!["R"], vec!["i", "j"]).unwrap()
    }

    #[test]
    fn restricted_growth_counts() {
        // Bell numbers truncated by the domain size
        assert_eq!(placements(3, 3).len(), 5);
        assert_eq!(placements(3, 2).len(), 4);
        assert_eq!(placements(0, 2), vec![Vec::<usize>::new()]);
        assert_eq!(placements(2, 1), vec![vec![0, 0]]);
    }

    #[test]
    fn bot_is_unknown() {
        let q = SatQuery::new(Concept::Bot, RBox::default(), sig(), 3);
        let r = sat_bounded(&q).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(!r.stats.budget_exhausted);
    }

    #[test]
    fn finds_small_witness() {
        let c = parse_concept("{o_i} & !{o_j} & exists R.({o_j} & A)", &sig()).unwrap();
        let q = SatQuery::new(c.clone(), RBox::default(), sig(), 3);
        let r = sat_bounded(&q).unwrap();
        let Verdict::Sat { witness, element } = r.verdict else { panic!("expected sat") };
        assert_eq!(witness.size(), 2);
        assert_eq!(element, witness.individual("i").unwrap());
        assert!(check_model(&c, &witness, &RBox::default(), None).unwrap().accepted());
        assert_eq!(sat_bounded(&q).unwrap().stats, r.stats);
    }

    #[test]
    fn designated_individual() {
        let c = parse_concept("!{o_i}", &sig()).unwrap();
        let mut q = SatQuery::new(c, RBox::default(), sig(), 3);
        q.at = Some("i".into());
        assert_eq!(sat_bounded(&q).unwrap().verdict, Verdict::Unknown);
        q.at = Some("j".into());
        assert!(sat_bounded(&q).unwrap().is_sat());
    }

    #[test]
    fn rejects_substitutions_unless_allowed() {
        let c = parse_concept("A[A := A + i]", &sig()).unwrap();
        let mut q = SatQuery::new(c, RBox::default(), sig(), 2);
        assert!(matches!(sat_bounded(&q), Err(Error::Precondition(_))));
        q.allow_substitutions = true;
        assert!(sat_bounded(&q).unwrap().is_sat());
    }

    #[test]
    fn budget_limits_the_search() {
        let c = parse_concept("A & !A", &sig()).unwrap();
        let mut q = SatQuery::new(c, RBox::default(), sig(), 4);
        q.budget = 10;
        let r = sat_bounded(&q).unwrap();
        assert!(r.stats.budget_exhausted);
        assert_eq!(r.stats.interpretations, 10);
    }

    #[test]
    fn randomized_mode_is_reproducible() {
        let c = parse_concept("exists R.A & forall R.A & !A", &sig()).unwrap();
        let mut q = SatQuery::new(c, RBox::default(), sig(), 3);
        q.mode = SearchMode::Randomized { seed: 5, trials: 2000 };
        let a = sat_bounded(&q).unwrap();
        assert!(a.is_sat());
        assert_eq!(a, sat_bounded(&q).unwrap());
    }

    #[test]
    fn contradiction_is_empty() {
        let c = parse_concept("{o_i} & !{o_i}", &sig()).unwrap();
        let mut i = Interpretation::with_size(2).unwrap();
        i.set_individual("i", 1).unwrap();
        let rep = check_model(&c, &i, &RBox::default(), None).unwrap();
        assert!(!rep.nonempty() && !rep.accepted());
    }
}
