//! Text grammars for fields, GW elements, Cartan types and space expressions.
//!
//! ```text
//! element := "0" | ["-"] term (("+" | "-") term)*
//! term    := [n "*"] "<" a ">"          a = integer or p/q
//! space   := atom ("*" atom)*           left associative
//! atom    := "pt" | "A^"n | "Gm" ["^"n] | "P^"n | "(" space ")"
//!          | "Flag(" type ")" | "GmodT(" type ")" | "GmodNT(" type ")"
//!          | "PartialFlag(" type ";" "{" [i ("," i)*] "}" ")"
//!          | "Strat[" list "]" | "Disjoint[" list "]"
//!          | "TorusAction[" ("T"|"N") ":" space ("," ...)* "]"
//! type    := X n ("x" X n)*             X in A..G
//! ```

use std::fmt;

use gwtrace_core::euler::{SpaceExpr, TorusStratum};
use gwtrace_core::weyl::{CartanType, Family, ParabolicSubset, SimpleType};
use gwtrace_core::{FieldSpec, GwElement, Place};
use num_rational::Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The text does not match the grammar.
    Syntax,
    /// The text parses but names an invalid object.
    Domain,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn error_at(&self, pos: usize, kind: ErrorKind, message: impl fmt::Display) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            kind,
            line,
            column,
            message: message.to_string(),
        }
    }

    fn syntax(&self, message: impl fmt::Display) -> ParseError {
        self.error_at(self.pos, ErrorKind::Syntax, message)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{token}`")))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.syntax("expected a number"));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        let start = self.pos;
        let s = self.digits()?;
        s.parse()
            .map_err(|_| self.error_at(start, ErrorKind::Syntax, "number out of range"))
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_alphanumeric).count();
        let s = &self.rest()[..len];
        self.pos += len;
        s
    }
}

pub fn parse_field(src: &str) -> Result<FieldSpec, ParseError> {
    let c = Cursor::new(src);
    match src.trim() {
        "Qbar" => Ok(FieldSpec::QuadraticallyClosed),
        "R" => Ok(FieldSpec::RealClosed),
        "Q" => Ok(FieldSpec::Rational),
        s if s.len() > 1 && s.starts_with('F') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
            let q: u64 = s[1..]
                .parse()
                .map_err(|_| c.error_at(1, ErrorKind::Syntax, "field order out of range"))?;
            FieldSpec::finite(q).map_err(|e| c.error_at(0, ErrorKind::Domain, e))
        }
        _ => Err(c.syntax(format!("unknown field `{}`; expected Qbar, R, Q or F<q>", src.trim()))),
    }
}

pub fn parse_place(src: &str) -> Result<Place, ParseError> {
    let c = Cursor::new(src);
    match src.trim() {
        "inf" | "real" => Ok(Place::Real),
        s => s
            .parse()
            .map(Place::Prime)
            .map_err(|_| c.syntax("expected a prime or `inf`")),
    }
}

fn rational(c: &mut Cursor<'_>) -> Result<Rational64, ParseError> {
    let negative = c.eat("-");
    let num: i64 = c.number()?;
    let den: i64 = if c.eat("/") { c.number()? } else { 1 };
    if den == 0 {
        return Err(c.error_at(c.pos, ErrorKind::Domain, "zero denominator"));
    }
    Ok(Rational64::new(if negative { -num } else { num }, den))
}

/// Parses an integer or a fraction `p/q`.
pub fn parse_rational(src: &str) -> Result<Rational64, ParseError> {
    let mut c = Cursor::new(src);
    let r = rational(&mut c)?;
    c.finish()?;
    Ok(r)
}

fn gw_term(c: &mut Cursor<'_>, field: FieldSpec, sign: i64) -> Result<GwElement, ParseError> {
    let n: i64 = if matches!(c.peek(), Some(d) if d.is_ascii_digit()) {
        let n = c.number()?;
        c.expect("*")?;
        n
    } else {
        1
    };
    c.expect("<")?;
    let start = c.pos;
    let a = rational(c)?;
    c.expect(">")?;
    let unit = GwElement::unit_form(field, a).map_err(|e| c.error_at(start, ErrorKind::Domain, e))?;
    Ok(unit.scale(sign * n))
}

/// Parses an element of `GW(field)`.
pub fn parse_gw(src: &str, field: FieldSpec) -> Result<GwElement, ParseError> {
    let mut c = Cursor::new(src);
    if src.trim() == "0" {
        return Ok(GwElement::zero(field));
    }
    let sign = if c.eat("-") { -1 } else { 1 };
    let mut acc = gw_term(&mut c, field, sign)?;
    loop {
        let sign = if c.eat("+") {
            1
        } else if c.eat("-") {
            -1
        } else {
            break;
        };
        let t = gw_term(&mut c, field, sign)?;
        acc = acc.add(&t).expect("same field");
    }
    c.finish()?;
    Ok(acc)
}

fn cartan(c: &mut Cursor<'_>) -> Result<CartanType, ParseError> {
    let start = c.pos;
    let mut factors = Vec::new();
    loop {
        c.skip_ws();
        let at = c.pos;
        let letter = c.rest().chars().next();
        let family = letter
            .and_then(Family::from_letter)
            .ok_or_else(|| c.syntax("expected a Cartan type such as A2 or B3"))?;
        c.pos += 1;
        let rank: u32 = c.number()?;
        factors.push(SimpleType::new(family, rank).map_err(|e| c.error_at(at, ErrorKind::Domain, e))?);
        if !c.eat("x") {
            break;
        }
    }
    CartanType::new(factors).map_err(|e| c.error_at(start, ErrorKind::Domain, e))
}

pub fn parse_cartan(src: &str) -> Result<CartanType, ParseError> {
    let mut c = Cursor::new(src);
    let t = cartan(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn index_list(c: &mut Cursor<'_>, close: &str) -> Result<Vec<u32>, ParseError> {
    let mut out = Vec::new();
    if c.eat(close) {
        return Ok(out);
    }
    loop {
        out.push(c.number()?);
        if c.eat(close) {
            return Ok(out);
        }
        c.expect(",")?;
    }
}

/// Parses `{1,3}`, `1,3` or the empty string as a subset of simple roots.
pub fn parse_parabolic(src: &str, ty: &CartanType) -> Result<ParabolicSubset, ParseError> {
    let mut c = Cursor::new(src);
    let braced = c.eat("{");
    let indices = if braced {
        index_list(&mut c, "}")?
    } else if c.peek().is_none() {
        Vec::new()
    } else {
        let mut v = vec![c.number()?];
        while c.eat(",") {
            v.push(c.number()?);
        }
        v
    };
    c.finish()?;
    ParabolicSubset::new(ty, indices).map_err(|e| c.error_at(0, ErrorKind::Domain, e))
}

fn space_list(c: &mut Cursor<'_>) -> Result<Vec<SpaceExpr>, ParseError> {
    let mut out = vec![space(c)?];
    while c.eat(",") {
        out.push(space(c)?);
    }
    c.expect("]")?;
    Ok(out)
}

fn atom(c: &mut Cursor<'_>) -> Result<SpaceExpr, ParseError> {
    if c.eat("(") {
        let inner = space(c)?;
        c.expect(")")?;
        return Ok(inner);
    }
    let start = c.pos;
    let name = c.word();
    let typed = |c: &mut Cursor<'_>| -> Result<CartanType, ParseError> {
        c.expect("(")?;
        let t = cartan(c)?;
        Ok(t)
    };
    Ok(match name {
        "pt" => SpaceExpr::Point,
        "A" => {
            c.expect("^")?;
            SpaceExpr::Affine(c.number()?)
        }
        "P" => {
            c.expect("^")?;
            SpaceExpr::Proj(c.number()?)
        }
        "Gm" => {
            if c.eat("^") {
                let at = c.pos;
                let n: u32 = c.number()?;
                if n == 0 {
                    return Err(c.error_at(at, ErrorKind::Domain, "Gm^0 is not a torus"));
                }
                SpaceExpr::Torus(n)
            } else {
                SpaceExpr::Gm
            }
        }
        "Flag" | "GmodT" | "GmodNT" => {
            let t = typed(c)?;
            c.expect(")")?;
            match name {
                "Flag" => SpaceExpr::Flag(t),
                "GmodT" => SpaceExpr::GmodT(t),
                _ => SpaceExpr::GmodNT(t),
            }
        }
        "PartialFlag" => {
            let t = typed(c)?;
            c.expect(";")?;
            c.expect("{")?;
            let at = c.pos;
            let idx = index_list(c, "}")?;
            c.expect(")")?;
            let i = ParabolicSubset::new(&t, idx).map_err(|e| c.error_at(at, ErrorKind::Domain, e))?;
            SpaceExpr::PartialFlag(t, i)
        }
        "Strat" | "Disjoint" => {
            c.expect("[")?;
            let xs = space_list(c)?;
            if name == "Strat" {
                SpaceExpr::Strat(xs)
            } else {
                SpaceExpr::Disjoint(xs)
            }
        }
        "TorusAction" => {
            c.expect("[")?;
            let mut entries = Vec::new();
            loop {
                let full = if c.eat("T") {
                    true
                } else if c.eat("N") {
                    false
                } else {
                    return Err(c.syntax("expected `T:` or `N:`"));
                };
                c.expect(":")?;
                entries.push(TorusStratum {
                    gamma_is_full_torus: full,
                    slice: space(c)?,
                });
                if c.eat("]") {
                    break;
                }
                c.expect(",")?;
            }
            SpaceExpr::TorusAction(entries)
        }
        "" => return Err(c.syntax("expected a space expression")),
        other => {
            return Err(c.error_at(start, ErrorKind::Syntax, format!("unknown space `{other}`")));
        }
    })
}

fn space(c: &mut Cursor<'_>) -> Result<SpaceExpr, ParseError> {
    let mut acc = atom(c)?;
    while c.eat("*") {
        acc = SpaceExpr::product(acc, atom(c)?);
    }
    Ok(acc)
}

pub fn parse_space(src: &str) -> Result<SpaceExpr, ParseError> {
    let mut c = Cursor::new(src);
    let s = space(&mut c)?;
    c.finish()?;
    Ok(s)
}
