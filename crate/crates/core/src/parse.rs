//! Concrete text syntax for concepts.
//!
//! ```text
//! C    ::= "bot" | "top" | IDENT | "{" IDENT "}" | "!" C | "(" C ")"
//!        | C "&" C | C "|" C
//!        | ">=" NAT ROLE C | "<" NAT ROLE C
//!        | "exists" ROLE "." C | "forall" ROLE "." C | "self" ROLE
//!        | C "[" SUB "]"
//! ROLE ::= IDENT | IDENT "-" | "U"
//! SUB  ::= "eps" | IDENT ":=" IDENT ("+"|"-") IDENT
//!        | IDENT ":=" IDENT ("+"|"-") "(" IDENT "," IDENT ")"
//! ```
//!
//! `&` and `|` associate to the left and `&` binds tighter. Prefix operators
//! take a unary operand, and the postfix substitution binds tightest.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Concept, Polarity, Role, Signature, Substitution, UNIVERSAL};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bang,
    Amp,
    Pipe,
    Ge,
    Lt,
    Dot,
    Comma,
    Plus,
    Minus,
    Assign,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Nat(n) => return write!(f, "`{n}`"),
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Ge => "`>=`",
            Tok::Lt => "`<`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Assign => "`:=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'<' => Tok::Lt,
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'>' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Ge
            }
            b':' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Assign
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..=i];
                let n = digits
                    .parse::<u32>()
                    .map_err(|_| Error::syntax(start, format!("number `{digits}` is too large")))?;
                Tok::Nat(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: Option<&'a Signature>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<usize> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(Error::syntax(
                self.offset(),
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn expect_closing(&mut self, want: Tok, opener: &str, open: usize) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::syntax(
                open,
                format!("unclosed `{opener}`: expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        match self.bump() {
            (Tok::Ident(s), at) => Ok((s, at)),
            (t, at) => Err(Error::syntax(at, format!("expected {what}, found {t}"))),
        }
    }

    fn or_expr(&mut self) -> Result<Concept> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and_expr()?;
            lhs = Concept::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Concept> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Concept::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Concept> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Concept::not(self.unary()?))
            }
            Tok::Ge | Tok::Lt => {
                let (op, _) = self.bump();
                let n = match self.bump() {
                    (Tok::Nat(n), _) => n,
                    (t, at) => return Err(Error::syntax(at, format!("expected a number, found {t}"))),
                };
                let role = self.role()?;
                let body = self.unary()?;
                Ok(if op == Tok::Ge {
                    Concept::at_least(n, role, body)
                } else {
                    Concept::less_than(n, role, body)
                })
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let role = self.role()?;
                self.expect(Tok::Dot)?;
                let body = self.unary()?;
                Ok(if kw == "exists" {
                    Concept::exists(role, body)
                } else {
                    Concept::forall(role, body)
                })
            }
            Tok::Ident(kw) if kw == "self" => {
                self.bump();
                let at = self.offset();
                let role = self.role()?;
                if role == Role::Universal {
                    return Err(Error::UniversalRole(format!(
                        "`self U` at offset {at} is not supported"
                    )));
                }
                Ok(Concept::SelfLoop(role))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Concept> {
        let mut c = self.primary()?;
        while *self.peek() == Tok::LBracket {
            let (_, open) = self.bump();
            let s = self.substitution()?;
            self.expect_closing(Tok::RBracket, "[", open)?;
            c = Concept::subst(c, s);
        }
        Ok(c)
    }

    fn primary(&mut self) -> Result<Concept> {
        match self.bump() {
            (Tok::Ident(s), _) if s == "bot" => Ok(Concept::Bot),
            (Tok::Ident(s), _) if s == "top" => Ok(Concept::top()),
            (Tok::Ident(s), at) => {
                if ["exists", "forall", "self", "eps"].contains(&s.as_str()) {
                    return Err(Error::syntax(at, format!("unexpected keyword `{s}`")));
                }
                self.check_concept_name(&s)?;
                Ok(Concept::Name(s))
            }
            (Tok::LBrace, open) => {
                let (name, _) = self.ident("a nominal")?;
                self.expect_closing(Tok::RBrace, "{", open)?;
                self.check_nominal(&name)?;
                Ok(Concept::Nominal(name))
            }
            (Tok::LParen, open) => {
                let c = self.or_expr()?;
                self.expect_closing(Tok::RParen, "(", open)?;
                Ok(c)
            }
            (t, at) => Err(Error::syntax(at, format!("expected a concept, found {t}"))),
        }
    }

    fn role(&mut self) -> Result<Role> {
        let (name, at) = self.ident("a role")?;
        let inverse = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        if name == UNIVERSAL {
            if inverse {
                return Err(Error::UniversalRole(format!(
                    "`U-` at offset {at}: the universal role has no inverse"
                )));
            }
            return Ok(Role::Universal);
        }
        self.check_role(&name)?;
        Ok(if inverse {
            Role::Inverse(name)
        } else {
            Role::Named(name)
        })
    }

    fn substitution(&mut self) -> Result<Substitution> {
        let (target, at) = self.ident("a substitution")?;
        if target == "eps" {
            return Ok(Substitution::Epsilon);
        }
        self.expect(Tok::Assign)?;
        let (again, again_at) = self.ident("a name")?;
        if again != target {
            return Err(Error::syntax(
                again_at,
                format!("substitution must update `{target}` in terms of itself, found `{again}`"),
            ));
        }
        let polarity = match self.bump() {
            (Tok::Plus, _) => Polarity::Add,
            (Tok::Minus, _) => Polarity::Del,
            (t, at) => return Err(Error::syntax(at, format!("expected `+` or `-`, found {t}"))),
        };
        if *self.peek() == Tok::LParen {
            self.bump();
            let (from, from_at) = self.ident("an individual")?;
            self.expect(Tok::Comma)?;
            let (to, to_at) = self.ident("an individual")?;
            self.expect(Tok::RParen)?;
            if target == UNIVERSAL {
                return Err(Error::UniversalRole(format!(
                    "substitution at offset {at} updates U"
                )));
            }
            self.check_role(&target)?;
            self.check_individual(&from, from_at)?;
            self.check_individual(&to, to_at)?;
            Ok(Substitution::role(polarity, target, from, to))
        } else {
            let (ind, ind_at) = self.ident("an individual")?;
            self.check_concept_name(&target)?;
            self.check_individual(&ind, ind_at)?;
            Ok(Substitution::concept(polarity, target, ind))
        }
    }

    fn check_concept_name(&self, name: &str) -> Result<()> {
        let Some(sig) = self.sig else { return Ok(()) };
        if sig.is_concept(name) {
            return Ok(());
        }
        match sig.kind_of(name) {
            Some(actual) => Err(Error::NameConfusion {
                name: name.into(),
                expected: "concept name",
                actual,
            }),
            None => Err(Error::UnknownName {
                kind: "concept name",
                name: name.into(),
            }),
        }
    }

    fn check_nominal(&self, name: &str) -> Result<()> {
        let Some(sig) = self.sig else { return Ok(()) };
        if sig.is_nominal(name) {
            return Ok(());
        }
        match sig.kind_of(name) {
            Some(actual) => Err(Error::NameConfusion {
                name: name.into(),
                expected: "nominal",
                actual,
            }),
            None => Err(Error::UnknownName {
                kind: "nominal",
                name: name.into(),
            }),
        }
    }

    fn check_role(&self, name: &str) -> Result<()> {
        let Some(sig) = self.sig else { return Ok(()) };
        if sig.is_role(name) {
            return Ok(());
        }
        match sig.kind_of(name) {
            Some(actual) => Err(Error::NameConfusion {
                name: name.into(),
                expected: "role",
                actual,
            }),
            None => Err(Error::UnknownName {
                kind: "role",
                name: name.into(),
            }),
        }
    }

    fn check_individual(&self, name: &str, _at: usize) -> Result<()> {
        let Some(sig) = self.sig else { return Ok(()) };
        if sig.is_individual(name) {
            return Ok(());
        }
        match sig.kind_of(name) {
            Some(actual) => Err(Error::NameConfusion {
                name: name.into(),
                expected: "individual",
                actual,
            }),
            None => Err(Error::UnknownName {
                kind: "individual",
                name: name.into(),
            }),
        }
    }
}

fn run(text: &str, sig: Option<&Signature>) -> Result<Concept> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig,
    };
    let c = p.or_expr()?;
    if *p.peek() != Tok::Eof {
        return Err(Error::syntax(
            p.offset(),
            format!("unexpected {} after concept", p.peek()),
        ));
    }
    Ok(c)
}

/// Parses a concept and resolves every name against `sig`.
pub fn parse_concept(text: &str, sig: &Signature) -> Result<Concept> {
    run(text, Some(sig))
}

/// Parses a concept without name resolution: bare identifiers become
/// concept names and `{x}` becomes a nominal.
pub fn parse_concept_unresolved(text: &str) -> Result<Concept> {
    run(text, None)
}

/// Parses a role such as `R`, `R-` or `U`.
pub fn parse_role(text: &str) -> Result<Role> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig: None,
    };
    let r = p.role()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

/// Canonical printing; `parse_concept(&print_concept(c), sig) == c`.
pub fn print_concept(c: &Concept) -> String {
    c.to_string()
}

// Prints `c` so that it can stand as the operand of a prefix operator.
fn fmt_unary(c: &Concept, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // Binary nodes already print with their own parentheses.
    write!(f, "{c}")
}

// Prints `c` so that it can stand before a postfix `[...]`.
fn fmt_postfix_operand(c: &Concept, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match c {
        Concept::Bot
        | Concept::Name(_)
        | Concept::Nominal(_)
        | Concept::And(..)
        | Concept::Or(..)
        | Concept::Subst(..) => write!(f, "{c}"),
        c if c.is_top() => write!(f, "{c}"),
        _ => write!(f, "({c})"),
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Bot => f.write_str("bot"),
            c if c.is_top() => f.write_str("top"),
            Concept::Name(n) => f.write_str(n),
            Concept::Nominal(n) => write!(f, "{{{n}}}"),
            Concept::Not(c) => {
                f.write_str("!")?;
                fmt_unary(c, f)
            }
            Concept::And(a, b) => write!(f, "({a} & {b})"),
            Concept::Or(a, b) => write!(f, "({a} | {b})"),
            Concept::AtLeast(n, r, c) => {
                write!(f, ">={n} {r} ")?;
                fmt_unary(c, f)
            }
            Concept::LessThan(n, r, c) => {
                write!(f, "<{n} {r} ")?;
                fmt_unary(c, f)
            }
            Concept::Exists(r, c) => {
                write!(f, "exists {r}.")?;
                fmt_unary(c, f)
            }
            Concept::Forall(r, c) => {
                write!(f, "forall {r}.")?;
                fmt_unary(c, f)
            }
            Concept::SelfLoop(r) => write!(f, "self {r}"),
            Concept::Subst(c, s) => {
                fmt_postfix_operand(c, f)?;
                write!(f, "[{s}]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family() -> Signature {
        Signature::new(
            vec!["Animal", "Female", "Male"],
            vec!["Alice", "Bob", "Charles"],
            vec!["Offspring", "Parent", "Owner", "Brother", "Sister", "FamilyMember", "Father"],
            vec!["Alice"],
        )
        .unwrap()
    }

    #[test]
    fn substitution_on_bot() {
        let c = parse_concept("bot[Female := Female + Alice]", &family()).unwrap();
        assert_eq!(
            c,
            Concept::subst(
                Concept::Bot,
                Substitution::concept(Polarity::Add, "Female", "Alice")
            )
        );
    }

    #[test]
    fn conjunction_is_left_associative() {
        let c = parse_concept(
            "(<3 Parent top) & (>=1 Owner- Animal) & self FamilyMember",
            &family(),
        )
        .unwrap();
        let expected = Concept::and(
            Concept::and(
                Concept::less_than(3, Role::named("Parent"), Concept::top()),
                Concept::at_least(1, Role::Inverse("Owner".into()), Concept::name("Animal")),
            ),
            Concept::SelfLoop(Role::named("FamilyMember")),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn unclosed_brace_reports_offset() {
        let err = parse_concept("exists Sister.{Bob", &family()).unwrap_err();
        match err {
            Error::Syntax { offset, .. } => assert_eq!(offset, 14),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn precedence_and_over_or() {
        let c = parse_concept_unresolved("A | B & C").unwrap();
        assert_eq!(
            c,
            Concept::or(
                Concept::name("A"),
                Concept::and(Concept::name("B"), Concept::name("C"))
            )
        );
        let c = parse_concept_unresolved("exists R.A & B").unwrap();
        assert_eq!(
            c,
            Concept::and(
                Concept::exists(Role::named("R"), Concept::name("A")),
                Concept::name("B")
            )
        );
        let c = parse_concept_unresolved("!A[A := A - a]").unwrap();
        assert_eq!(
            c,
            Concept::not(Concept::subst(
                Concept::name("A"),
                Substitution::concept(Polarity::Del, "A", "a")
            ))
        );
    }

    #[test]
    fn rejects_universal_role_misuse() {
        let sig = family();
        assert!(matches!(
            parse_concept("exists U-.Male", &sig),
            Err(Error::UniversalRole(_))
        ));
        assert!(matches!(
            parse_concept("Male[U := U + (Alice, Alice)]", &sig),
            Err(Error::UniversalRole(_))
        ));
        assert!(matches!(
            parse_concept("self U", &sig),
            Err(Error::UniversalRole(_))
        ));
        assert!(parse_concept("exists U.Male", &sig).is_ok());
    }

    #[test]
    fn name_errors() {
        let sig = family();
        assert!(matches!(
            parse_concept("Unicorn", &sig),
            Err(Error::UnknownName { .. })
        ));
        assert!(matches!(
            parse_concept("Alice", &sig),
            Err(Error::NameConfusion { expected: "concept name", .. })
        ));
        assert!(matches!(
            parse_concept("{Female}", &sig),
            Err(Error::NameConfusion { expected: "nominal", .. })
        ));
        assert!(matches!(
            parse_concept("Female[Female := Female + Bob]", &sig),
            Err(Error::NameConfusion { expected: "individual", .. })
        ));
        assert!(matches!(
            parse_concept("Female[Female := Male + Alice]", &sig),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(print_concept(&Concept::Bot), "bot");
        let c = Concept::subst(
            Concept::name("c"),
            Substitution::concept(Polarity::Add, "c", "i"),
        );
        assert_eq!(print_concept(&c), "c[c := c + i]");
        let c = Concept::or(Concept::name("c"), Concept::nominal_of("i"));
        assert_eq!(print_concept(&c), "(c | {o_i})");
        let c = Concept::subst(
            Concept::exists(Role::named("R"), Concept::name("c")),
            Substitution::role(Polarity::Del, "R", "i", "j"),
        );
        assert_eq!(print_concept(&c), "(exists R.c)[R := R - (i, j)]");
        assert_eq!(print_concept(&Concept::top()), "top");
        assert_eq!(print_concept(&Concept::not(Concept::top())), "!top");
    }

    #[test]
    fn role_parsing() {
        assert_eq!(parse_role("R").unwrap(), Role::named("R"));
        assert_eq!(parse_role("R-").unwrap(), Role::Inverse("R".into()));
        assert_eq!(parse_role("U").unwrap(), Role::Universal);
        assert!(parse_role("U-").is_err());
    }
}
