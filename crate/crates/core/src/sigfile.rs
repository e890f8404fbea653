//! Plain-text signature and role box declarations.
//!
//! ```text
//! # comment
//! concepts: Animal Female Male
//! nominals: Alice Bob Charles
//! roles: Brother Sister FamilyMember Father
//! individuals: Alice
//! hierarchy:
//!   Brother <= FamilyMember
//!   Father Brother <= Father
//! assertions:
//!   Tra FamilyMember
//!   Dis Brother Sister-
//! order:
//!   Brother < FamilyMember
//! ```
//!
//! Names in the four name sections may be separated by whitespace or commas
//! and may continue on following lines.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::parse::parse_role;
use crate::syntax::{Role, RoleAssertion, RoleInclusion, RBox, Signature, UNIVERSAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Concepts,
    Nominals,
    Roles,
    Individuals,
    Hierarchy,
    Assertions,
    Order,
}

fn section_of(header: &str) -> Option<Section> {
    Some(match header {
        "concepts" => Section::Concepts,
        "nominals" => Section::Nominals,
        "roles" => Section::Roles,
        "individuals" => Section::Individuals,
        "hierarchy" => Section::Hierarchy,
        "assertions" => Section::Assertions,
        "order" => Section::Order,
        _ => return None,
    })
}

fn line_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Signature(format!("line {line}: {msg}"))
}

fn role_at(text: &str, line: usize) -> Result<Role> {
    parse_role(text).map_err(|e| line_err(line, format!("bad role `{text}`: {e}")))
}

/// Parses a declaration file into a signature and a role box.
///
/// Role names used in the hierarchy, assertions or order must be declared in
/// the `roles:` section.
pub fn parse_signature_file(text: &str) -> Result<(Signature, RBox)> {
    let mut names: [Vec<String>; 4] = Default::default();
    let mut rbox = RBox::default();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut body = line;
        if let Some((head, rest)) = line.split_once(':') {
            if !rest.starts_with('=') {
                if let Some(s) = section_of(head.trim()) {
                    section = Some(s);
                    body = rest.trim();
                    if body.is_empty() {
                        continue;
                    }
                } else {
                    return Err(line_err(lineno, format!("unknown section `{}`", head.trim())));
                }
            }
        }
        let Some(sec) = section else {
            return Err(line_err(lineno, "content before any section header"));
        };
        match sec {
            Section::Concepts | Section::Nominals | Section::Roles | Section::Individuals => {
                let slot = sec as usize;
                names[slot].extend(
                    body.split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::to_string),
                );
            }
            Section::Hierarchy => {
                let (lhs, rhs) = body
                    .split_once("<=")
                    .ok_or_else(|| line_err(lineno, "expected `R1 ... Rn <= R`"))?;
                let word = lhs
                    .split_whitespace()
                    .map(|t| role_at(t, lineno))
                    .collect::<Result<Vec<_>>>()?;
                if word.is_empty() {
                    return Err(line_err(lineno, "empty left-hand side"));
                }
                if word.contains(&Role::Universal) {
                    return Err(Error::UniversalRole(format!(
                        "line {lineno}: U cannot occur in a role inclusion"
                    )));
                }
                let rhs = rhs.trim();
                match role_at(rhs, lineno)? {
                    Role::Named(n) => rbox.hierarchy.push(RoleInclusion { word, rhs: n }),
                    Role::Universal => {
                        return Err(Error::UniversalRole(format!(
                            "line {lineno}: U cannot be the right-hand side of an inclusion"
                        )))
                    }
                    Role::Inverse(_) => {
                        return Err(line_err(lineno, "right-hand side must be a role name"))
                    }
                }
            }
            Section::Assertions => {
                let toks: Vec<&str> = body.split_whitespace().collect();
                let a = match toks.as_slice() {
                    ["Ref", r] => RoleAssertion::Ref(role_at(r, lineno)?),
                    ["Irr", r] => RoleAssertion::Irr(role_at(r, lineno)?),
                    ["Sym", r] => RoleAssertion::Sym(role_at(r, lineno)?),
                    ["Asy", r] => RoleAssertion::Asy(role_at(r, lineno)?),
                    ["Tra", r] => RoleAssertion::Tra(role_at(r, lineno)?),
                    ["Dis", r, s] => RoleAssertion::Dis(role_at(r, lineno)?, role_at(s, lineno)?),
                    _ => return Err(line_err(lineno, format!("bad assertion `{body}`"))),
                };
                rbox.assertions.push(a);
            }
            Section::Order => {
                let toks: Vec<&str> = body.split_whitespace().collect();
                match toks.as_slice() {
                    [s, "<", r] => {
                        rbox.order.insert((s.to_string(), r.to_string()));
                    }
                    _ => return Err(line_err(lineno, format!("expected `S < R`, found `{body}`"))),
                }
            }
        }
    }

    let [concepts, nominals, roles, individuals] = names;
    let sig = Signature::new(concepts, nominals, roles, individuals)?;
    check_rbox_names(&rbox, &sig)?;
    Ok((sig, rbox))
}

fn check_rbox_names(rbox: &RBox, sig: &Signature) -> Result<()> {
    let mut mentioned: BTreeSet<&str> = BTreeSet::new();
    for ax in &rbox.hierarchy {
        mentioned.insert(&ax.rhs);
        mentioned.extend(ax.word.iter().map(Role::name));
    }
    for a in &rbox.assertions {
        mentioned.extend(a.roles().into_iter().map(Role::name));
    }
    for (s, r) in &rbox.order {
        mentioned.insert(s);
        mentioned.insert(r);
    }
    for name in mentioned {
        if name != UNIVERSAL && !sig.is_role(name) {
            return Err(Error::UnknownName {
                kind: "role",
                name: name.to_string(),
            });
        }
    }
    Ok(())
}

/// Renders a signature and role box in the file format accepted by
/// [`parse_signature_file`]. Canonical nominals and `U` are left implicit.
pub fn print_signature_file(sig: &Signature, rbox: &RBox) -> String {
    let canonical: BTreeSet<String> = sig
        .individual_names()
        .iter()
        .map(|i| crate::syntax::canonical_nominal(i))
        .collect();
    let join = |it: &mut dyn Iterator<Item = &String>| it.cloned().collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    out += &format!("concepts: {}\n", join(&mut sig.concept_names().iter()));
    out += &format!(
        "nominals: {}\n",
        join(&mut sig.nominal_names().iter().filter(|n| !canonical.contains(*n)))
    );
    out += &format!("roles: {}\n", join(&mut sig.plain_role_names()));
    out += &format!("individuals: {}\n", join(&mut sig.individual_names().iter()));
    out += "hierarchy:\n";
    for ax in &rbox.hierarchy {
        out += &format!("  {ax}\n");
    }
    out += "assertions:\n";
    for a in &rbox.assertions {
        out += &format!("  {a}\n");
    }
    out += "order:\n";
    for (s, r) in &rbox.order {
        out += &format!("  {s} < {r}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAMILY: &str = "\
# running example
concepts: Animal, Female, Male
nominals: Alice Bob Charles
roles: Offspring Parent Owner Brother Sister
  FamilyMember Father
individuals: Alice
hierarchy:
  Brother <= FamilyMember
  Father Brother <= Father
assertions:
  Tra FamilyMember
order:
  Brother < FamilyMember
  Brother < Father
";

    #[test]
    fn parses_family_file() {
        let (sig, rbox) = parse_signature_file(FAMILY).unwrap();
        assert!(sig.is_concept("Female"));
        assert!(sig.is_nominal("o_Alice"));
        assert!(sig.is_role("U"));
        assert!(sig.is_role("Father"));
        assert_eq!(rbox.hierarchy.len(), 2);
        assert_eq!(rbox.hierarchy[1].word.len(), 2);
        assert_eq!(rbox.assertions, vec![RoleAssertion::Tra(Role::named("FamilyMember"))]);
        assert_eq!(rbox.order.len(), 2);
    }

    #[test]
    fn round_trips_through_printer() {
        let (sig, rbox) = parse_signature_file(FAMILY).unwrap();
        let again = parse_signature_file(&print_signature_file(&sig, &rbox)).unwrap();
        assert_eq!(again, (sig, rbox));
    }

    #[test]
    fn rejects_universal_rhs_and_undeclared_roles() {
        let bad = "roles: R\nhierarchy:\n R <= U\n";
        assert!(matches!(parse_signature_file(bad), Err(Error::UniversalRole(_))));
        let bad = "roles: R\nassertions:\n Tra S\n";
        assert!(matches!(parse_signature_file(bad), Err(Error::UnknownName { .. })));
        let bad = "roles: R\nbogus: x\n";
        assert!(matches!(parse_signature_file(bad), Err(Error::Signature(_))));
    }

    #[test]
    fn rejects_concept_nominal_overlap() {
        let bad = "concepts: A\nnominals: A\n";
        assert!(matches!(parse_signature_file(bad), Err(Error::Signature(_))));
    }
}
