use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use super::types::{Signature, TypeExpr};
use crate::error::{Error, Result};

/// Terms of the local language. The connective and quantifier variants are
/// surface syntax; [`desugar`] rewrites them into the core constructors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, TypeExpr),
    Star,
    App(String, Box<Term>),
    Tuple(Vec<Term>),
    /// 1-based projection.
    Proj(usize, Box<Term>),
    Compr(String, TypeExpr, Box<Term>),
    Eq(Box<Term>, Box<Term>),
    In(Box<Term>, Box<Term>),
    True,
    False,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Iff(Box<Term>, Box<Term>),
    Forall(String, TypeExpr, Box<Term>),
    Exists(String, TypeExpr, Box<Term>),
}

use Term::*;

pub fn var(name: &str, t: TypeExpr) -> Term {
    Var(name.to_string(), t)
}

pub fn app(f: &str, t: Term) -> Term {
    App(f.to_string(), Box::new(t))
}

pub fn eq(a: Term, b: Term) -> Term {
    Eq(Box::new(a), Box::new(b))
}

pub fn member(a: Term, b: Term) -> Term {
    In(Box::new(a), Box::new(b))
}

pub fn compr(x: &str, t: TypeExpr, body: Term) -> Term {
    Compr(x.to_string(), t, Box::new(body))
}

pub fn and(a: Term, b: Term) -> Term {
    And(Box::new(a), Box::new(b))
}

pub fn implies(a: Term, b: Term) -> Term {
    Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Term, b: Term) -> Term {
    Iff(Box::new(a), Box::new(b))
}

pub fn proj(i: usize, t: Term) -> Term {
    Proj(i, Box::new(t))
}

impl Term {
    fn precedence(&self) -> u8 {
        match self {
            Iff(..) | Forall(..) | Exists(..) => 1,
            Implies(..) => 2,
            Or(..) => 3,
            And(..) => 4,
            Not(_) => 5,
            Eq(..) | In(..) => 6,
            _ => 7,
        }
    }

    /// `tail` is true when nothing follows this term before a closing
    /// delimiter, which is the only place a quantifier may stand bare.
    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8, tail: bool) -> fmt::Result {
        let paren = match self {
            Forall(..) | Exists(..) => !(tail && min <= 2),
            _ => self.precedence() < min,
        };
        let tail = tail || paren;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Var(x, _) => write!(f, "{x}")?,
            Star => write!(f, "*")?,
            True => write!(f, "true")?,
            False => write!(f, "false")?,
            App(s, t) => {
                write!(f, "{s}(")?;
                t.write_at(f, 0, true)?;
                write!(f, ")")?;
            }
            Tuple(ts) => {
                write!(f, "<")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    t.write_at(f, 0, true)?;
                }
                write!(f, ">")?;
            }
            Proj(i, t) => {
                write!(f, "proj_{i}(")?;
                t.write_at(f, 0, true)?;
                write!(f, ")")?;
            }
            Compr(x, t, body) => {
                write!(f, "{{ {x} : {t} | ")?;
                body.write_at(f, 0, true)?;
                write!(f, " }}")?;
            }
            Eq(a, b) | In(a, b) => {
                a.write_at(f, 7, false)?;
                write!(f, "{}", if matches!(self, Eq(..)) { " = " } else { " in " })?;
                b.write_at(f, 7, tail)?;
            }
            Not(a) => {
                write!(f, "~")?;
                a.write_at(f, if matches!(**a, Not(_)) { 5 } else { 7 }, tail)?;
            }
            And(a, b) => {
                a.write_at(f, 4, false)?;
                write!(f, " & ")?;
                b.write_at(f, 5, tail)?;
            }
            Or(a, b) => {
                a.write_at(f, 3, false)?;
                write!(f, " | ")?;
                b.write_at(f, 4, tail)?;
            }
            Implies(a, b) => {
                a.write_at(f, 3, false)?;
                write!(f, " -> ")?;
                b.write_at(f, 2, tail)?;
            }
            Iff(a, b) => {
                a.write_at(f, 2, false)?;
                write!(f, " <-> ")?;
                b.write_at(f, 2, tail)?;
            }
            Forall(x, t, body) | Exists(x, t, body) => {
                let q = if matches!(self, Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {x} : {t}. ")?;
                body.write_at(f, 0, tail)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }

    /// Free variables with their types.
    pub fn free_vars(&self) -> BTreeSet<(String, TypeExpr)> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        self.free_vars().into_iter().map(|(n, _)| n).collect()
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<(String, TypeExpr)>) {
        match self {
            Var(x, t) => {
                if !bound.contains(x) {
                    out.insert((x.clone(), t.clone()));
                }
            }
            Star | True | False => {}
            App(_, t) | Proj(_, t) | Not(t) => t.collect_free(bound, out),
            Tuple(ts) => ts.iter().for_each(|t| t.collect_free(bound, out)),
            Eq(a, b) | In(a, b) | And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Compr(x, _, body) | Forall(x, _, body) | Exists(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Var(x, _) | Compr(x, ..) | Forall(x, ..) | Exists(x, ..) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Var(..) | Star | True | False => {}
            App(_, t) | Proj(_, t) | Not(t) => t.visit(f),
            Tuple(ts) => ts.iter().for_each(|t| t.visit(f)),
            Eq(a, b) | In(a, b) | And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Compr(_, _, body) | Forall(_, _, body) | Exists(_, _, body) => body.visit(f),
        }
    }

    pub fn is_core(&self) -> bool {
        let mut core = true;
        self.visit(&mut |t| {
            if matches!(t, True | False | Not(_) | And(..) | Or(..) | Implies(..) | Iff(..) | Forall(..) | Exists(..)) {
                core = false;
            }
        });
        core
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0, true)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn type_error(t: &Term, msg: impl Into<String>) -> Error {
    Error::Type {
        subterm: t.to_string(),
        msg: msg.into(),
    }
}

/// The type of `term`. Failures name the innermost offending subterm.
pub fn infer_type(term: &Term, sig: &Signature) -> Result<TypeExpr> {
    let omega = |t: &Term| -> Result<()> {
        match infer_type(t, sig)? {
            TypeExpr::Omega => Ok(()),
            other => Err(type_error(t, format!("expected a formula of type Omega, found {other}"))),
        }
    };
    Ok(match term {
        Var(x, t) => {
            if !sig.knows_type(t) {
                return Err(type_error(term, format!("variable `{x}` has an undeclared ground type")));
            }
            t.clone()
        }
        Star => TypeExpr::Unit,
        App(s, t) => {
            let (dom, cod) = sig
                .symbol(s)
                .ok_or_else(|| type_error(term, format!("unknown function symbol `{s}`")))?;
            let got = infer_type(t, sig)?;
            if got != *dom {
                return Err(type_error(term, format!("`{s}` expects an argument of type {dom}, found {got}")));
            }
            cod.clone()
        }
        Tuple(ts) => TypeExpr::product(ts.iter().map(|t| infer_type(t, sig)).collect::<Result<_>>()?),
        Proj(i, t) => match infer_type(t, sig)? {
            TypeExpr::Product(fs) if *i >= 1 && *i <= fs.len() => fs[i - 1].clone(),
            TypeExpr::Product(fs) => {
                return Err(type_error(term, format!("projection {i} out of range for a {}-fold product", fs.len())))
            }
            other => return Err(type_error(term, format!("projection from non-product type {other}"))),
        },
        Compr(_, t, body) => {
            if !sig.knows_type(t) {
                return Err(type_error(term, "binder has an undeclared ground type"));
            }
            omega(body)?;
            TypeExpr::power(t.clone())
        }
        Eq(a, b) => {
            let (ta, tb) = (infer_type(a, sig)?, infer_type(b, sig)?);
            if ta != tb {
                return Err(type_error(term, format!("cannot equate {ta} with {tb}")));
            }
            TypeExpr::Omega
        }
        In(a, b) => {
            let (ta, tb) = (infer_type(a, sig)?, infer_type(b, sig)?);
            if tb != TypeExpr::power(ta.clone()) {
                return Err(type_error(term, format!("membership needs P({ta}) on the right, found {tb}")));
            }
            TypeExpr::Omega
        }
        True | False => TypeExpr::Omega,
        Not(a) => {
            omega(a)?;
            TypeExpr::Omega
        }
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
            omega(a)?;
            omega(b)?;
            TypeExpr::Omega
        }
        Forall(_, t, body) | Exists(_, t, body) => {
            if !sig.knows_type(t) {
                return Err(type_error(term, "binder has an undeclared ground type"));
            }
            omega(body)?;
            TypeExpr::Omega
        }
    })
}

/// A variable name not in `avoid`, derived from `base`.
pub fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .unwrap()
}

fn true_core() -> Term {
    eq(Star, Star)
}

/// Rewrites connectives and quantifiers into equality, membership,
/// tuples and comprehension:
///
/// * `true := (* = *)`
/// * `a & b := <a, b> = <true, true>`
/// * `a -> b := (a & b) = a`
/// * `forall x. a := { x | a } = { x | true }`
/// * `false := forall w : Omega. w`
/// * `~a := a -> false`
/// * `a | b := forall w : Omega. ((a -> w) & (b -> w)) -> w`
/// * `exists x. a := forall w : Omega. (forall x. (a -> w)) -> w`
/// * `a <-> b := (a = b)`
pub fn desugar(term: &Term) -> Term {
    let d = |t: &Term| Box::new(desugar(t));
    match term {
        Var(..) | Star => term.clone(),
        App(s, t) => App(s.clone(), d(t)),
        Tuple(ts) => Tuple(ts.iter().map(desugar).collect()),
        Proj(i, t) => Proj(*i, d(t)),
        Compr(x, t, body) => Compr(x.clone(), t.clone(), d(body)),
        Eq(a, b) => Eq(d(a), d(b)),
        In(a, b) => In(d(a), d(b)),
        True => true_core(),
        False => {
            let w = var("w", TypeExpr::Omega);
            forall_core("w", TypeExpr::Omega, w)
        }
        And(a, b) => and_core(desugar(a), desugar(b)),
        Implies(a, b) => implies_core(desugar(a), desugar(b)),
        Not(a) => implies_core(desugar(a), desugar(&False)),
        Iff(a, b) => Eq(d(a), d(b)),
        Forall(x, t, body) => forall_core(x, t.clone(), desugar(body)),
        Or(a, b) => {
            let (a, b) = (desugar(a), desugar(b));
            let mut avoid = a.all_names();
            avoid.extend(b.all_names());
            let w = fresh("w", &avoid);
            let wv = var(&w, TypeExpr::Omega);
            let premise = and_core(implies_core(a, wv.clone()), implies_core(b, wv.clone()));
            forall_core(&w, TypeExpr::Omega, implies_core(premise, wv))
        }
        Exists(x, t, body) => {
            let body = desugar(body);
            let mut avoid = body.all_names();
            avoid.insert(x.clone());
            let w = fresh("w", &avoid);
            let wv = var(&w, TypeExpr::Omega);
            let inner = forall_core(x, t.clone(), implies_core(body, wv.clone()));
            forall_core(&w, TypeExpr::Omega, implies_core(inner, wv))
        }
    }
}

fn and_core(a: Term, b: Term) -> Term {
    eq(Tuple(vec![a, b]), Tuple(vec![true_core(), true_core()]))
}

fn implies_core(a: Term, b: Term) -> Term {
    eq(and_core(a.clone(), b), a)
}

fn forall_core(x: &str, t: TypeExpr, body: Term) -> Term {
    eq(compr(x, t.clone(), body), compr(x, t, true_core()))
}

/// Capture-avoiding substitution of `replacement` for the free occurrences
/// of the variable `x : ty`.
pub fn substitute(term: &Term, x: &str, ty: &TypeExpr, replacement: &Term, sig: &Signature) -> Result<Term> {
    let rt = infer_type(replacement, sig)?;
    if rt != *ty {
        return Err(type_error(replacement, format!("cannot substitute a term of type {rt} for `{x}` : {ty}")));
    }
    Ok(subst(term, x, replacement, &replacement.free_names()))
}

pub(crate) fn subst(term: &Term, x: &str, r: &Term, rfree: &BTreeSet<String>) -> Term {
    let s = |t: &Term| Box::new(subst(t, x, r, rfree));
    match term {
        Var(y, _) if y == x => r.clone(),
        Var(..) | Star | True | False => term.clone(),
        App(f, t) => App(f.clone(), s(t)),
        Tuple(ts) => Tuple(ts.iter().map(|t| subst(t, x, r, rfree)).collect()),
        Proj(i, t) => Proj(*i, s(t)),
        Eq(a, b) => Eq(s(a), s(b)),
        In(a, b) => In(s(a), s(b)),
        Not(a) => Not(s(a)),
        And(a, b) => And(s(a), s(b)),
        Or(a, b) => Or(s(a), s(b)),
        Implies(a, b) => Implies(s(a), s(b)),
        Iff(a, b) => Iff(s(a), s(b)),
        Compr(y, t, body) | Forall(y, t, body) | Exists(y, t, body) => {
            let rebuild = |y: String, body: Term| match term {
                Compr(..) => Compr(y, t.clone(), Box::new(body)),
                Forall(..) => Forall(y, t.clone(), Box::new(body)),
                _ => Exists(y, t.clone(), Box::new(body)),
            };
            if y == x || !body.free_names().contains(x) {
                return term.clone();
            }
            if rfree.contains(y) {
                let mut avoid = rfree.clone();
                avoid.extend(body.all_names());
                avoid.insert(x.to_string());
                let y2 = fresh(y, &avoid);
                let renamed = subst(body, y, &Var(y2.clone(), t.clone()), &BTreeSet::from([y2.clone()]));
                return rebuild(y2, subst(&renamed, x, r, rfree));
            }
            rebuild(y.clone(), subst(body, x, r, rfree))
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (Var(x, tx), Var(y, ty)) => {
                if tx != ty {
                    return false;
                }
                let bx = env.iter().rposition(|(l, _)| l == x);
                let by = env.iter().rposition(|(_, r)| r == y);
                match (bx, by) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Star, Star) | (True, True) | (False, False) => true,
            (App(f, s), App(g, t)) => f == g && go(s, t, env),
            (Tuple(ss), Tuple(ts)) => ss.len() == ts.len() && ss.iter().zip(ts).all(|(s, t)| go(s, t, env)),
            (Proj(i, s), Proj(j, t)) => i == j && go(s, t, env),
            (Not(s), Not(t)) => go(s, t, env),
            (Eq(a1, a2), Eq(b1, b2))
            | (In(a1, a2), In(b1, b2))
            | (And(a1, a2), And(b1, b2))
            | (Or(a1, a2), Or(b1, b2))
            | (Implies(a1, a2), Implies(b1, b2))
            | (Iff(a1, a2), Iff(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
            (Compr(x, tx, s), Compr(y, ty, t))
            | (Forall(x, tx, s), Forall(y, ty, t))
            | (Exists(x, tx, s), Exists(y, ty, t)) => {
                if tx != ty {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let r = go(s, t, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Whether `right` arises from `left` by replacing some occurrences of
/// `from` with `to` (up to renaming of bound variables). Replacements are
/// not made under binders that capture a free variable of `from` or `to`.
pub fn differs_by_replacement(left: &Term, right: &Term, from: &Term, to: &Term) -> bool {
    fn go(l: &Term, r: &Term, from: &Term, to: &Term) -> bool {
        if alpha_eq(l, r) || (alpha_eq(l, from) && alpha_eq(r, to)) {
            return true;
        }
        let g = |a: &Term, b: &Term| go(a, b, from, to);
        match (l, r) {
            (App(f, s), App(h, t)) => f == h && g(s, t),
            (Tuple(ss), Tuple(ts)) => ss.len() == ts.len() && ss.iter().zip(ts).all(|(s, t)| g(s, t)),
            (Proj(i, s), Proj(j, t)) => i == j && g(s, t),
            (Not(s), Not(t)) => g(s, t),
            (Eq(a1, a2), Eq(b1, b2))
            | (In(a1, a2), In(b1, b2))
            | (And(a1, a2), And(b1, b2))
            | (Or(a1, a2), Or(b1, b2))
            | (Implies(a1, a2), Implies(b1, b2))
            | (Iff(a1, a2), Iff(b1, b2)) => g(a1, b1) && g(a2, b2),
            (Compr(x, tx, s), Compr(y, ty, t))
            | (Forall(x, tx, s), Forall(y, ty, t))
            | (Exists(x, tx, s), Exists(y, ty, t)) => {
                if tx != ty {
                    return false;
                }
                // Both binders become one fresh name, so bound occurrences
                // can never match `from` or `to`.
                let mut avoid = s.all_names();
                avoid.extend(t.all_names());
                avoid.extend(from.all_names());
                avoid.extend(to.all_names());
                let n = fresh(x, &avoid);
                let v = Var(n.clone(), tx.clone());
                let only = BTreeSet::from([n]);
                g(&subst(s, x, &v, &only), &subst(t, y, &v, &only))
            }
            _ => false,
        }
    }
    go(left, right, from, to)
}

/// Variable typing used while parsing terms.
pub type VarContext = HashMap<String, TypeExpr>;

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(
            Vec::<String>::new(),
            vec![("A".to_string(), TypeExpr::Sigma, TypeExpr::R)],
        )
        .unwrap()
    }

    fn s() -> Term {
        var("s", TypeExpr::Sigma)
    }

    fn d() -> Term {
        var("D", TypeExpr::power(TypeExpr::R))
    }

    #[test]
    fn typing() {
        let sig = sig();
        assert_eq!(infer_type(&member(app("A", s()), d()), &sig).unwrap(), TypeExpr::Omega);
        assert_eq!(infer_type(&Star, &sig).unwrap(), TypeExpr::Unit);
        assert!(matches!(infer_type(&eq(s(), d()), &sig), Err(Error::Type { .. })));
        let c = compr("s", TypeExpr::Sigma, member(app("A", s()), d()));
        assert_eq!(infer_type(&c, &sig).unwrap(), TypeExpr::power(TypeExpr::Sigma));
        let bad = proj(3, Tuple(vec![s(), Star]));
        match infer_type(&bad, &sig) {
            Err(Error::Type { subterm, .. }) => assert_eq!(subterm, "proj_3(<s, *>)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn desugaring() {
        assert_eq!(desugar(&True), eq(Star, Star));
        let a = member(app("A", s()), d());
        let b = eq(s(), s());
        let conj = desugar(&and(a.clone(), b.clone()));
        assert_eq!(conj, eq(Tuple(vec![a.clone(), b.clone()]), Tuple(vec![eq(Star, Star), eq(Star, Star)])));
        let big = Term::Or(Box::new(a.clone()), Box::new(Term::Exists("x".into(), TypeExpr::R, Box::new(Term::Not(Box::new(b))))));
        let once = desugar(&big);
        assert!(once.is_core());
        assert_eq!(desugar(&once), once);
        assert_eq!(infer_type(&once, &sig()).unwrap(), TypeExpr::Omega);
    }

    #[test]
    fn substitution() {
        let sig = sig();
        let t = var("t", TypeExpr::Sigma);
        let r = substitute(&app("A", s()), "s", &TypeExpr::Sigma, &t, &sig).unwrap();
        assert_eq!(r, app("A", t.clone()));
        let bound = compr("s", TypeExpr::Sigma, eq(s(), s()));
        assert_eq!(substitute(&bound, "s", &TypeExpr::Sigma, &t, &sig).unwrap(), bound);
        // capture: substituting x for y under a binder of x renames the binder
        let x = var("x", TypeExpr::Sigma);
        let y = var("y", TypeExpr::Sigma);
        let body = compr("x", TypeExpr::Sigma, eq(x.clone(), y.clone()));
        let out = substitute(&body, "y", &TypeExpr::Sigma, &x, &sig).unwrap();
        assert_eq!(out.free_names(), BTreeSet::from(["x".to_string()]));
        let Compr(binder, _, _) = &out else { panic!() };
        assert_ne!(binder, "x");
        assert!(substitute(&body, "y", &TypeExpr::Sigma, &Star, &sig).is_err());
    }

    #[test]
    fn alpha_equivalence() {
        let a = compr("x", TypeExpr::Sigma, eq(var("x", TypeExpr::Sigma), s()));
        let b = compr("y", TypeExpr::Sigma, eq(var("y", TypeExpr::Sigma), s()));
        let c = compr("s", TypeExpr::Sigma, eq(s(), s()));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }
}
