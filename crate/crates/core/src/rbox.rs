//! Static analysis of role boxes: regularity of the hierarchy with respect to
//! a user-supplied order, the simple-role computation, and simplicity of the
//! assertion set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{RBox, Role, RoleAssertion, RoleInclusion, Signature, UNIVERSAL};

/// The five admissible shapes of a role inclusion `w ⊆ R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegularForm {
    /// `R R ⊆ R`
    RR,
    /// `R⁻ ⊆ R`
    Rinv,
    /// `S1 … Sn ⊆ R`, every `Si ≺ R`
    Chain,
    /// `R S1 … Sn ⊆ R`
    RPrefix,
    /// `S1 … Sn R ⊆ R`
    RSuffix,
}

impl fmt::Display for RegularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegularForm::RR => "RR",
            RegularForm::Rinv => "Rinv",
            RegularForm::Chain => "chain",
            RegularForm::RPrefix => "R-prefix",
            RegularForm::RSuffix => "R-suffix",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: RoleInclusion,
    /// `None` when no form matches.
    pub form: Option<RegularForm>,
    /// Order pairs `(S, R)` that would have to hold for the closest form.
    pub missing: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub per_axiom: Vec<AxiomReport>,
}

/// Transitive closure of `order`, rejecting `U` and cycles.
pub fn close_order(order: &BTreeSet<(String, String)>) -> Result<BTreeSet<(String, String)>> {
    if order.iter().any(|(s, r)| s == UNIVERSAL || r == UNIVERSAL) {
        return Err(Error::UniversalRole("U cannot occur in the role order".into()));
    }
    let closed = transitive_closure(order);
    if let Some((s, _)) = closed.iter().find(|(s, r)| s == r) {
        return Err(Error::InvalidOrder(format!(
            "`{s}` precedes itself after transitive closure"
        )));
    }
    Ok(closed)
}

fn transitive_closure(order: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (s, r) in order {
        succ.entry(s).or_default().insert(r);
    }
    let mut out = BTreeSet::new();
    for &start in succ.keys() {
        let mut stack: Vec<&str> = succ[start].iter().copied().collect();
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                if let Some(next) = succ.get(x) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        out.extend(seen.into_iter().map(|x| (start.to_string(), x.to_string())));
    }
    out
}

fn check_no_universal(rbox: &RBox) -> Result<()> {
    for ax in &rbox.hierarchy {
        if ax.rhs == UNIVERSAL || ax.word.contains(&Role::Universal) {
            return Err(Error::UniversalRole(format!("in inclusion `{ax}`")));
        }
    }
    Ok(())
}

/// Order pairs a form needs, or `None` if the word does not have its shape.
fn required_pairs(ax: &RoleInclusion, form: RegularForm) -> Option<Vec<(String, String)>> {
    let r = Role::Named(ax.rhs.clone());
    let w = &ax.word;
    let below = |roles: &[Role]| -> Vec<(String, String)> {
        roles
            .iter()
            .map(|s| (s.name().to_string(), ax.rhs.clone()))
            .collect()
    };
    match form {
        RegularForm::RR => (w.len() == 2 && w[0] == r && w[1] == r).then(Vec::new),
        RegularForm::Rinv => (w.len() == 1 && w[0] == r.inverted()).then(Vec::new),
        RegularForm::Chain => Some(below(w)),
        RegularForm::RPrefix => (w.len() >= 2 && w[0] == r).then(|| below(&w[1..])),
        RegularForm::RSuffix => (w.len() >= 2 && w[w.len() - 1] == r).then(|| below(&w[..w.len() - 1])),
    }
}

const FORMS: [RegularForm; 5] = [
    RegularForm::RR,
    RegularForm::Rinv,
    RegularForm::Chain,
    RegularForm::RPrefix,
    RegularForm::RSuffix,
];

/// Classifies every inclusion axiom against the (closed) order.
///
/// The order is stored on role names, so `S⁻ ≺ R` holds exactly when
/// `S ≺ R` does.
pub fn check_regular(rbox: &RBox) -> Result<RegularityReport> {
    check_no_universal(rbox)?;
    let order = close_order(&rbox.order)?;
    let per_axiom: Vec<AxiomReport> = rbox
        .hierarchy
        .iter()
        .map(|ax| classify(ax, &order))
        .collect();
    Ok(RegularityReport {
        regular: per_axiom.iter().all(|a| a.form.is_some()),
        per_axiom,
    })
}

fn classify(ax: &RoleInclusion, order: &BTreeSet<(String, String)>) -> AxiomReport {
    let mut best: Option<Vec<(String, String)>> = None;
    for form in FORMS {
        let Some(pairs) = required_pairs(ax, form) else {
            continue;
        };
        let missing: Vec<_> = pairs.into_iter().filter(|p| !order.contains(p)).collect();
        if missing.is_empty() {
            return AxiomReport {
                axiom: ax.clone(),
                form: Some(form),
                missing,
            };
        }
        if best.as_ref().is_none_or(|b| missing.len() < b.len()) {
            best = Some(missing);
        }
    }
    let mut missing = best.unwrap_or_default();
    missing.dedup();
    AxiomReport {
        axiom: ax.clone(),
        form: None,
        missing,
    }
}

/// Searches for some strict order under which every axiom is regular, by
/// trying every combination of per-axiom forms. Exponential in the number of
/// axioms; limited to boxes over at most eight role names.
pub fn find_regular_order(rbox: &RBox) -> Result<Option<BTreeSet<(String, String)>>> {
    check_no_universal(rbox)?;
    let names = rbox.role_names();
    if names.len() > 8 {
        return Err(Error::Precondition(format!(
            "order search supports at most 8 role names, found {}",
            names.len()
        )));
    }
    let options: Vec<Vec<Vec<(String, String)>>> = rbox
        .hierarchy
        .iter()
        .map(|ax| {
            let mut opts: Vec<_> = FORMS.iter().filter_map(|&f| required_pairs(ax, f)).collect();
            opts.sort();
            opts.dedup();
            opts
        })
        .collect();
    let mut chosen = Vec::new();
    Ok(search_orders(&options, &mut chosen))
}

fn search_orders(
    options: &[Vec<Vec<(String, String)>>],
    chosen: &mut Vec<(String, String)>,
) -> Option<BTreeSet<(String, String)>> {
    let closed = transitive_closure(&chosen.iter().cloned().collect());
    if closed.iter().any(|(s, r)| s == r) {
        return None;
    }
    let Some((first, rest)) = options.split_first() else {
        return Some(closed);
    };
    for pairs in first {
        let mark = chosen.len();
        chosen.extend(pairs.iter().cloned());
        if let Some(found) = search_orders(rest, chosen) {
            return Some(found);
        }
        chosen.truncate(mark);
    }
    None
}

/// All simple roles over the names of `sig` and `rbox`, in both directions.
///
/// Least fixed point: a role name is simple if no axiom targets it, or if
/// every axiom targeting it has a one-letter word whose role is already
/// simple. `U` is never simple.
pub fn simple_roles(rbox: &RBox, sig: &Signature) -> BTreeSet<Role> {
    let mut names: BTreeSet<String> = sig.plain_role_names().cloned().collect();
    names.extend(rbox.role_names());

    let mut targeting: BTreeMap<&str, Vec<&RoleInclusion>> = BTreeMap::new();
    for ax in &rbox.hierarchy {
        targeting.entry(&ax.rhs).or_default().push(ax);
    }
    let mut simple: BTreeSet<&str> = names
        .iter()
        .map(String::as_str)
        .filter(|n| !targeting.contains_key(n))
        .collect();
    loop {
        let grown: Vec<&str> = names
            .iter()
            .map(String::as_str)
            .filter(|n| !simple.contains(n))
            .filter(|n| {
                targeting[n].iter().all(|ax| {
                    ax.word.len() == 1
                        && ax.word[0] != Role::Universal
                        && simple.contains(ax.word[0].name())
                })
            })
            .collect();
        if grown.is_empty() {
            break;
        }
        simple.extend(grown);
    }
    simple.remove(UNIVERSAL);
    simple
        .into_iter()
        .flat_map(|n| [Role::Named(n.to_string()), Role::Inverse(n.to_string())])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityViolation {
    pub assertion: RoleAssertion,
    pub non_simple: Vec<Role>,
}

impl fmt::Display for SimplicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roles: Vec<String> = self.non_simple.iter().map(ToString::to_string).collect();
        write!(f, "`{}` mentions non-simple role {}", self.assertion, roles.join(", "))
    }
}

/// One violation per assertion that mentions a role outside `simple`.
pub fn check_simple_assertions(rbox: &RBox, simple: &BTreeSet<Role>) -> Vec<SimplicityViolation> {
    rbox.assertions
        .iter()
        .filter_map(|a| {
            let non_simple: Vec<Role> = a
                .roles()
                .into_iter()
                .filter(|r| !simple.contains(*r))
                .cloned()
                .collect();
            (!non_simple.is_empty()).then(|| SimplicityViolation {
                assertion: a.clone(),
                non_simple,
            })
        })
        .collect()
}
