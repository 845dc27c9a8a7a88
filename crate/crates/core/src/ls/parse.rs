//! Surface syntax of terms and sequents.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") IDENT ":" type "." formula
//! iff     := imp ( "<->" imp )?
//! imp     := or ( "->" (imp | quant) )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | rel
//! rel     := primary ( ("=" | "in") primary )?
//! primary := "*" | "true" | "false" | "<" terms? ">" | "proj_" N "(" formula ")"
//!          | "{" IDENT ":" type "|" formula "}" | SYMBOL "(" terms ")"
//!          | IDENT | "(" formula ")"
//! sequent := formulas? "|-" formula
//! ```
//!
//! Symbol applications to several arguments, `f(a, b)`, abbreviate
//! `f(<a, b>)`.

use super::sequent::Sequent;
use super::term::{Term, VarContext};
use super::types::{parse_ls_type, Signature, TypeExpr};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Star,
    Eq,
    Amp,
    Bar,
    Tilde,
    Arrow,
    Iff,
    Turnstile,
    LAngle,
    RAngle,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
}

const OP_CHARS: &str = "0123456789+-^/%";

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let rest = &text[pos..];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let fixed: &[(&str, Tok)] = &[
            ("<->", Tok::Iff),
            ("|-", Tok::Turnstile),
            ("->", Tok::Arrow),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((pos, t.clone()));
            i += s.chars().count();
            continue;
        }
        let single = match c {
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Eq),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '~' => Some(Tok::Tilde),
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || matches!(chars[j].1, '_' | '\'' | '@')) {
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |(p, _)| *p);
            out.push((pos, Tok::Ident(text[pos..end].to_string())));
            i = j;
            continue;
        }
        if OP_CHARS.contains(c) {
            let mut j = i + 1;
            while j < chars.len() && OP_CHARS.contains(chars[j].1) && !text[chars[j].0..].starts_with("->") {
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |(p, _)| *p);
            let all_digits = text[pos..end].bytes().all(|b| b.is_ascii_digit());
            if all_digits || text[end..].trim_start().starts_with('(') {
                out.push((pos, Tok::Ident(text[pos..end].to_string())));
                i = j;
                continue;
            }
            return Err(Error::parse(pos, format!("`{}` is not a term; symbols must be applied", &text[pos..end])));
        }
        return Err(Error::parse(pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a Signature,
    scope: Vec<(String, TypeExpr)>,
    ctx: &'a VarContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.text.len(), |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        if self.bump() == Some(want) {
            Ok(())
        } else {
            Err(Error::parse(pos, format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(x)) => Ok(x),
            _ => Err(Error::parse(pos, "expected a variable name")),
        }
    }

    /// Reads a type up to (not including) the next token that cannot
    /// continue it.
    fn type_expr(&mut self, stop: &[Tok]) -> Result<TypeExpr> {
        let start = self.pos();
        let mut depth = 0i32;
        while let Some(t) = self.peek() {
            if depth == 0 && stop.contains(t) {
                break;
            }
            match t {
                Tok::LParen => depth += 1,
                Tok::RParen => depth -= 1,
                _ => {}
            }
            self.at += 1;
        }
        let end = self.pos();
        parse_ls_type(&self.text[start..end]).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(start + pos, msg),
            other => other,
        })
    }

    fn binder(&mut self, stop: Tok) -> Result<(String, TypeExpr)> {
        let x = self.ident()?;
        self.expect(Tok::Colon, "`:` after bound variable")?;
        let t = self.type_expr(&[stop])?;
        Ok((x, t))
    }

    fn formula(&mut self) -> Result<Term> {
        if let Some(Tok::Ident(q)) = self.peek() {
            if q == "forall" || q == "exists" {
                return self.quantifier();
            }
        }
        let lhs = self.imp()?;
        if self.peek() == Some(&Tok::Iff) {
            self.bump();
            let rhs = self.imp_or_quant()?;
            return Ok(Term::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> Result<Term> {
        let q = self.ident()?;
        let (x, t) = self.binder(Tok::Dot)?;
        self.expect(Tok::Dot, "`.` after quantifier binder")?;
        self.scope.push((x.clone(), t.clone()));
        let body = self.formula();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(if q == "forall" {
            Term::Forall(x, t, body)
        } else {
            Term::Exists(x, t, body)
        })
    }

    fn imp_or_quant(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Ident(q)) if q == "forall" || q == "exists" => self.quantifier(),
            _ => self.imp(),
        }
    }

    fn imp(&mut self) -> Result<Term> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.imp_or_quant()?;
            return Ok(Term::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Term> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            lhs = Term::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Term> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            lhs = Term::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Tilde) {
            self.bump();
            return Ok(Term::Not(Box::new(self.unary()?)));
        }
        let lhs = self.primary()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.bump();
                Ok(Term::Eq(Box::new(lhs), Box::new(self.primary()?)))
            }
            Some(Tok::Ident(w)) if w == "in" => {
                self.bump();
                Ok(Term::In(Box::new(lhs), Box::new(self.primary()?)))
            }
            _ => Ok(lhs),
        }
    }

    fn terms_until(&mut self, close: Tok, what: &str) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                }
                Some(t) if *t == close => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(Error::parse(self.pos(), format!("expected `,` or {what}"))),
            }
        }
    }

    fn lookup(&self, x: &str) -> Option<TypeExpr> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, t)| t.clone())
            .or_else(|| self.ctx.get(x).cloned())
    }

    fn primary(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Star) => Ok(Term::Star),
            Some(Tok::LAngle) => Ok(Term::Tuple(self.terms_until(Tok::RAngle, "`>`")?)),
            Some(Tok::LParen) => {
                let t = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBrace) => {
                let (x, t) = self.binder(Tok::Bar)?;
                self.expect(Tok::Bar, "`|` in comprehension")?;
                self.scope.push((x.clone(), t.clone()));
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                self.expect(Tok::RBrace, "`}` closing comprehension")?;
                Ok(Term::Compr(x, t, Box::new(body)))
            }
            Some(Tok::Ident(w)) => {
                if w == "true" {
                    return Ok(Term::True);
                }
                if w == "false" {
                    return Ok(Term::False);
                }
                if let Some(n) = w.strip_prefix("proj_") {
                    let i: usize = n
                        .parse()
                        .ok()
                        .filter(|i| *i >= 1)
                        .ok_or_else(|| Error::parse(pos, format!("bad projection index in `{w}`")))?;
                    self.expect(Tok::LParen, "`(` after projection")?;
                    let t = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Term::Proj(i, Box::new(t)));
                }
                if self.peek() == Some(&Tok::LParen) && self.lookup(&w).is_none() {
                    if self.sig.symbol(&w).is_none() {
                        return Err(Error::parse(pos, format!("unknown function symbol `{w}`")));
                    }
                    self.bump();
                    let mut args = self.terms_until(Tok::RParen, "`)`")?;
                    let arg = if args.len() == 1 { args.pop().unwrap() } else { Term::Tuple(args) };
                    return Ok(Term::App(w, Box::new(arg)));
                }
                match self.lookup(&w) {
                    Some(t) => Ok(Term::Var(w, t)),
                    None if self.sig.symbol(&w).is_some() => {
                        Err(Error::parse(pos, format!("function symbol `{w}` must be applied")))
                    }
                    None => Err(Error::parse(pos, format!("unknown variable `{w}`"))),
                }
            }
            _ => Err(Error::parse(pos, "expected a term")),
        }
    }
}

fn parser<'a>(text: &'a str, sig: &'a Signature, ctx: &'a VarContext) -> Result<Parser<'a>> {
    Ok(Parser {
        text,
        toks: lex(text)?,
        at: 0,
        sig,
        scope: Vec::new(),
        ctx,
    })
}

/// Parses a term. Free variables are typed by `ctx`; symbols must be
/// declared in `sig`.
pub fn parse_ls(text: &str, sig: &Signature, ctx: &VarContext) -> Result<Term> {
    let mut p = parser(text, sig, ctx)?;
    let t = p.formula()?;
    if p.at < p.toks.len() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok(t)
}

/// Parses `a, b |- c`.
pub fn parse_sequent(text: &str, sig: &Signature, ctx: &VarContext) -> Result<Sequent> {
    let mut p = parser(text, sig, ctx)?;
    let mut context = Vec::new();
    if p.peek() != Some(&Tok::Turnstile) {
        loop {
            context.push(p.formula()?);
            match p.peek() {
                Some(Tok::Comma) => {
                    p.bump();
                }
                Some(Tok::Turnstile) => break,
                _ => return Err(Error::parse(p.pos(), "expected `,` or `|-`")),
            }
        }
    }
    p.expect(Tok::Turnstile, "`|-`")?;
    let conclusion = p.formula()?;
    if p.at < p.toks.len() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok(Sequent::new(context, conclusion))
}
