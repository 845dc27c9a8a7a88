//! Syntax of the propositional language: formulas, the parser and the
//! canonical printer.
//!
//! ```text
//! formula  := disj ( "->" formula )?
//! disj     := conj ( "|" conj )*
//! conj     := unary ( "&" unary )*
//! unary    := "~" unary | "(" formula ")" | atom
//! atom     := IDENT ( "in" delta )?
//! delta    := "{}" | interval ( "u" interval )*
//! interval := ("[" | "(") bound "," bound ("]" | ")")
//! bound    := "-inf" | "+inf" | "inf" | rational
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::interval::{parse_rational, Endpoint, Interval, IntervalSet};
use crate::error::{Error, Result};

/// A primitive proposition: either an uninterpreted atom or `A in Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Atom(String),
    Quantity { name: String, delta: IntervalSet },
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Atom(a) => write!(f, "{a}"),
            Primitive::Quantity { name, delta } => write!(f, "{name} in {delta}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Prim(Primitive),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Prim(Primitive::Atom(name.to_string()))
    }

    pub fn quantity(name: &str, delta: IntervalSet) -> Formula {
        Formula::Prim(Primitive::Quantity {
            name: name.to_string(),
            delta,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn primitives(&self) -> BTreeSet<&Primitive> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut BTreeSet<&'a Primitive>) {
        match self {
            Formula::Prim(p) => {
                out.insert(p);
            }
            Formula::Not(a) => a.collect(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Prim(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            Formula::Prim(_) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Formula::Prim(p) => write!(f, "{p}")?,
            Formula::Not(a) => {
                write!(f, "~")?;
                a.write_at(f, 4)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                write!(f, " & ")?;
                b.write_at(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " | ")?;
                b.write_at(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " -> ")?;
                b.write_at(f, 1)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    In,
    Union,
    NegInf,
    PosInf,
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Empty,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '@' | '\'' | '.')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let next = bytes.get(i + 1).map(|(_, c)| *c);
        let rest = &text[pos..];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c == '-' && next == Some('>') {
            out.push((pos, Tok::Arrow));
            i += 2;
            continue;
        }
        if c == '{' {
            let close = rest[1..].trim_start();
            if close.starts_with('}') {
                let skip = rest.len() - close.len() + 1;
                out.push((pos, Tok::Empty));
                while i < bytes.len() && bytes[i].0 < pos + skip {
                    i += 1;
                }
                continue;
            }
            return Err(Error::parse(pos, "only the empty set `{}` may be written with braces"));
        }
        if rest.starts_with("-inf") || rest.starts_with("+inf") {
            out.push((pos, if c == '-' { Tok::NegInf } else { Tok::PosInf }));
            i += 4;
            continue;
        }
        if c.is_ascii_digit() || ((c == '-' || c == '+') && next.is_some_and(|n| n.is_ascii_digit())) {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j].1.is_ascii_digit() || matches!(bytes[j].1, '/' | '.')) {
                j += 1;
            }
            let end = bytes.get(j).map_or(text.len(), |(p, _)| *p);
            let lit = text[pos..end].trim_start_matches('+').to_string();
            out.push((pos, Tok::Number(lit)));
            i = j;
            continue;
        }
        if is_ident_start(c) {
            let mut j = i + 1;
            while j < bytes.len() && is_ident_char(bytes[j].1) {
                j += 1;
            }
            let end = bytes.get(j).map_or(text.len(), |(p, _)| *p);
            let word = &text[pos..end];
            out.push((
                pos,
                match word {
                    "in" => Tok::In,
                    "u" => Tok::Union,
                    "inf" => Tok::PosInf,
                    _ => Tok::Ident(word.to_string()),
                },
            ));
            i = j;
            continue;
        }
        return Err(Error::parse(pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    notes: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::parse(pos, format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Tilde) => Ok(Formula::not(self.unary()?)),
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::In) {
                    self.bump();
                    let delta = self.delta()?;
                    Ok(Formula::quantity(&name, delta))
                } else {
                    Ok(Formula::atom(&name))
                }
            }
            _ => Err(Error::parse(pos, "expected a primitive proposition, `~` or `(`")),
        }
    }

    fn delta(&mut self) -> Result<IntervalSet> {
        if self.peek() == Some(&Tok::Empty) {
            self.bump();
            return Ok(IntervalSet::empty());
        }
        let start = self.pos();
        let mut pieces = vec![self.interval()?];
        while self.peek() == Some(&Tok::Union) {
            self.bump();
            pieces.push(self.interval()?);
        }
        let set = IntervalSet::from_intervals(pieces.iter().copied());
        if !IntervalSet::is_normalized_form(&pieces) {
            self.notes.push(format!("interval set at byte {start} normalized to `{set}`"));
        }
        Ok(set)
    }

    fn interval(&mut self) -> Result<Interval> {
        let pos = self.pos();
        let lo_closed = match self.bump() {
            Some(Tok::LBrack) => true,
            Some(Tok::LParen) => false,
            _ => return Err(Error::parse(pos, "malformed interval: expected `[` or `(`")),
        };
        let lo = self.bound(lo_closed, true)?;
        self.expect(Tok::Comma, "`,` in interval")?;
        let hi_pos = self.pos();
        let hi_tok = self.peek().cloned();
        let hi_raw = match hi_tok {
            Some(Tok::PosInf) => {
                self.bump();
                Bound::PosInf
            }
            Some(Tok::NegInf) => {
                self.bump();
                Bound::NegInf
            }
            Some(Tok::Number(n)) => {
                self.bump();
                Bound::Finite(n)
            }
            _ => return Err(Error::parse(hi_pos, "malformed interval: expected a bound")),
        };
        let close_pos = self.pos();
        let hi_closed = match self.bump() {
            Some(Tok::RBrack) => true,
            Some(Tok::RParen) => false,
            _ => return Err(Error::parse(close_pos, "malformed interval: expected `]` or `)`")),
        };
        let hi = match hi_raw {
            Bound::PosInf => None,
            Bound::NegInf => return Err(Error::parse(hi_pos, "malformed interval: upper bound is -inf")),
            Bound::Finite(n) => Some(Endpoint {
                value: parse_rational(&n).ok_or_else(|| Error::parse(hi_pos, format!("bad number `{n}`")))?,
                closed: hi_closed,
            }),
        };
        Ok(Interval { lo, hi })
    }

    fn bound(&mut self, closed: bool, lower: bool) -> Result<Option<Endpoint>> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::NegInf) if lower => Ok(None),
            Some(Tok::Number(n)) => Ok(Some(Endpoint {
                value: parse_rational(&n).ok_or_else(|| Error::parse(pos, format!("bad number `{n}`")))?,
                closed,
            })),
            _ => Err(Error::parse(pos, "malformed interval: expected a bound")),
        }
    }
}

enum Bound {
    NegInf,
    PosInf,
    Finite(String),
}

/// Parses a formula; `->` associates to the right and `~` binds tightest.
pub fn parse_pl(text: &str) -> Result<Formula> {
    parse_pl_noting(text).map(|(f, _)| f)
}

/// Like [`parse_pl`], also returning a note for every interval set that
/// was not written in normal form.
pub fn parse_pl_noting(text: &str) -> Result<(Formula, Vec<String>)> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
        notes: Vec::new(),
    };
    let f = p.formula()?;
    if p.at < p.toks.len() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok((f, p.notes))
}

/// Parses a bare interval-set literal such as `[1,2) u (3,+inf)`.
pub fn parse_interval_set(text: &str) -> Result<IntervalSet> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
        notes: Vec::new(),
    };
    let d = p.delta()?;
    if p.at < p.toks.len() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok(d)
}
