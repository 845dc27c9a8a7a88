//! Sequents `Γ |- α`, the basic axiom schemas, a derivation checker and
//! axiom packs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use super::term::{alpha_eq, app, compr, desugar, differs_by_replacement, eq, fresh, infer_type, member, proj, subst, substitute, var, Term};
use super::types::{Signature, TypeExpr};
use crate::error::{Error, Result};

/// A finite context of formulas and a conclusion. Free variables are read
/// universally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub context: Vec<Term>,
    pub conclusion: Term,
}

impl Sequent {
    pub fn new(context: Vec<Term>, conclusion: Term) -> Self {
        Sequent { context, conclusion }
    }

    /// A sequent with an empty context.
    pub fn bare(conclusion: Term) -> Self {
        Sequent::new(Vec::new(), conclusion)
    }

    /// Checks that every member is a formula.
    pub fn check_types(&self, sig: &Signature) -> Result<()> {
        for t in self.context.iter().chain(std::iter::once(&self.conclusion)) {
            let ty = infer_type(t, sig)?;
            if ty != TypeExpr::Omega {
                return Err(Error::Type {
                    subterm: t.to_string(),
                    msg: format!("sequent members must have type Omega, found {ty}"),
                });
            }
        }
        Ok(())
    }

    fn desugared(&self) -> Sequent {
        Sequent::new(self.context.iter().map(desugar).collect(), desugar(&self.conclusion))
    }

    pub fn free_vars(&self) -> BTreeSet<(String, TypeExpr)> {
        let mut out = self.conclusion.free_vars();
        for t in &self.context {
            out.extend(t.free_vars());
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.context.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        if !self.context.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

impl Serialize for Sequent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomSchema {
    /// `α |- α`
    Tautology,
    /// `|- x = *` for `x : 1`
    Unity,
    /// `x = y, α |- α'` where `α'` replaces some free occurrences of `x` by `y`
    Equality,
    /// `|- proj_i(<t1, ..., tn>) = ti` and `|- x = <proj_1(x), ..., proj_n(x)>`
    Products,
    /// `|- t in { x : T | α } <-> α[t/x]`
    Comprehension,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 5] = [
        AxiomSchema::Tautology,
        AxiomSchema::Unity,
        AxiomSchema::Equality,
        AxiomSchema::Products,
        AxiomSchema::Comprehension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::Tautology => "tautology",
            AxiomSchema::Unity => "unity",
            AxiomSchema::Equality => "equality",
            AxiomSchema::Products => "products",
            AxiomSchema::Comprehension => "comprehension",
        }
    }

    /// Whether `seq`, after desugaring, is an instance of this schema.
    pub fn matches(self, seq: &Sequent, sig: &Signature) -> bool {
        if seq.check_types(sig).is_err() {
            return false;
        }
        let s = seq.desugared();
        match self {
            AxiomSchema::Tautology => s.context.len() == 1 && alpha_eq(&s.context[0], &s.conclusion),
            AxiomSchema::Unity => {
                s.context.is_empty()
                    && matches!(&s.conclusion, Term::Eq(a, b)
                        if matches!(**a, Term::Var(_, TypeExpr::Unit)) && **b == Term::Star)
            }
            AxiomSchema::Equality => {
                if s.context.len() != 2 {
                    return false;
                }
                (0..2).any(|k| match &s.context[k] {
                    Term::Eq(x, y) => differs_by_replacement(&s.context[1 - k], &s.conclusion, x, y),
                    _ => false,
                })
            }
            AxiomSchema::Products => s.context.is_empty() && is_product_law(&s.conclusion, sig),
            AxiomSchema::Comprehension => {
                let Term::Eq(lhs, rhs) = &s.conclusion else {
                    return false;
                };
                let Term::In(t, set) = &**lhs else {
                    return false;
                };
                let Term::Compr(x, _, body) = &**set else {
                    return false;
                };
                s.context.is_empty() && alpha_eq(&subst(body, x, t, &t.free_names()), rhs)
            }
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn is_product_law(t: &Term, sig: &Signature) -> bool {
    let Term::Eq(a, b) = t else {
        return false;
    };
    if let Term::Proj(i, inner) = &**a {
        if let Term::Tuple(ts) = &**inner {
            return *i >= 1 && *i <= ts.len() && alpha_eq(&ts[i - 1], b);
        }
    }
    if let Term::Tuple(ts) = &**b {
        let Ok(TypeExpr::Product(factors)) = infer_type(a, sig) else {
            return false;
        };
        return factors.len() == ts.len()
            && ts
                .iter()
                .enumerate()
                .all(|(k, t)| matches!(t, Term::Proj(i, x) if *i == k + 1 && alpha_eq(x, a)));
    }
    false
}

/// The first schema `seq` is an instance of.
pub fn is_axiom_instance(seq: &Sequent, sig: &Signature) -> Option<AxiomSchema> {
    AxiomSchema::ALL.into_iter().find(|s| s.matches(seq, sig))
}

/// `α |- α`
pub fn tautology_instance(alpha: Term) -> Sequent {
    Sequent::new(vec![alpha.clone()], alpha)
}

/// `|- x = *`
pub fn unity_instance(x: &str) -> Sequent {
    Sequent::bare(eq(var(x, TypeExpr::Unit), Term::Star))
}

/// `x = y, α[x/z] |- α[y/z]` for a variable `z` of the type of `x`.
pub fn equality_instance(x: Term, y: Term, alpha: &Term, z: &str) -> Sequent {
    let at = |t: &Term| subst(alpha, z, t, &t.free_names());
    Sequent::new(vec![eq(x.clone(), y.clone()), at(&x)], at(&y))
}

/// `|- proj_i(<t1, ..., tn>) = ti`
pub fn product_beta_instance(ts: Vec<Term>, i: usize) -> Sequent {
    let ti = ts[i - 1].clone();
    Sequent::bare(eq(proj(i, Term::Tuple(ts)), ti))
}

/// `|- x = <proj_1(x), ..., proj_n(x)>`
pub fn product_eta_instance(x: Term, n: usize) -> Sequent {
    let parts = (1..=n).map(|i| proj(i, x.clone())).collect();
    Sequent::bare(eq(x, Term::Tuple(parts)))
}

/// `|- t in { x : T | α } <-> α[t/x]`
pub fn comprehension_instance(t: Term, x: &str, ty: TypeExpr, alpha: Term) -> Sequent {
    let rhs = subst(&alpha, x, &t, &t.free_names());
    Sequent::bare(Term::Iff(Box::new(member(t, compr(x, ty, alpha))), Box::new(rhs)))
}

/// How a derivation line was obtained. Line references are 1-based and
/// must point to earlier lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LsRule {
    /// An instance of a basic schema, optionally naming which.
    Axiom { schema: Option<AxiomSchema> },
    /// One of the extra axioms supplied to the checker, up to renaming of
    /// bound variables and desugaring.
    Given,
    /// Same conclusion as `from` with a larger context.
    Thinning { from: usize },
    /// From `Γ |- α` (`left`) and `Δ, α |- β` (`right`) infer `Γ, Δ |- β`.
    Cut { left: usize, right: usize },
    /// Replace a free variable throughout line `from`.
    Substitution {
        from: usize,
        var: String,
        var_type: TypeExpr,
        term: Term,
    },
    /// From `Γ |- α` (`from`) and `Δ |- a <-> b` (`equiv`) infer `Γ, Δ |- α'`
    /// where `α'` replaces occurrences of `a` by `b` or of `b` by `a`.
    Rewrite { from: usize, equiv: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsLine {
    pub sequent: Sequent,
    pub by: LsRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LsVerdict {
    Accepted { lines: usize },
    Rejected { line: usize, reason: String },
}

impl LsVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self, LsVerdict::Accepted { .. })
    }
}

fn contains(set: &[Term], t: &Term) -> bool {
    set.iter().any(|s| alpha_eq(s, t))
}

fn subset(a: &[Term], b: &[Term]) -> bool {
    a.iter().all(|t| contains(b, t))
}

fn same_set(a: &[Term], b: &[Term]) -> bool {
    subset(a, b) && subset(b, a)
}

fn same_sequent(a: &Sequent, b: &Sequent) -> bool {
    same_set(&a.context, &b.context) && alpha_eq(&a.conclusion, &b.conclusion)
}

/// Checks a derivation line by line. Contexts are compared as sets up to
/// renaming of bound variables, after desugaring.
pub fn check_ls_derivation(lines: &[LsLine], sig: &Signature, given: &[Sequent]) -> LsVerdict {
    let given: Vec<Sequent> = given.iter().map(Sequent::desugared).collect();
    let mut done: Vec<Sequent> = Vec::with_capacity(lines.len());
    for (k, line) in lines.iter().enumerate() {
        let n = k + 1;
        let reject = |reason: String| LsVerdict::Rejected { line: n, reason };
        if let Err(e) = line.sequent.check_types(sig) {
            return reject(e.to_string());
        }
        let earlier = |i: usize| -> std::result::Result<&Sequent, String> {
            if i == 0 || i >= n {
                Err(format!("cites line {i}, which is not an earlier line"))
            } else {
                Ok(&done[i - 1])
            }
        };
        let cur = line.sequent.desugared();
        let outcome: std::result::Result<(), String> = (|| match &line.by {
            LsRule::Axiom { schema: Some(s) } => {
                if s.matches(&line.sequent, sig) {
                    Ok(())
                } else {
                    Err(format!("not an instance of the {s} schema"))
                }
            }
            LsRule::Axiom { schema: None } => is_axiom_instance(&line.sequent, sig)
                .map(|_| ())
                .ok_or_else(|| "not an instance of any axiom schema".to_string()),
            LsRule::Given => {
                if given.iter().any(|g| same_sequent(g, &cur)) {
                    Ok(())
                } else {
                    Err("not one of the given axioms".into())
                }
            }
            LsRule::Thinning { from } => {
                let prev = earlier(*from)?;
                if !alpha_eq(&prev.conclusion, &cur.conclusion) {
                    return Err(format!("conclusion differs from line {from}"));
                }
                if !subset(&prev.context, &cur.context) {
                    return Err(format!("context does not contain the context of line {from}"));
                }
                Ok(())
            }
            LsRule::Cut { left, right } => {
                let l = earlier(*left)?;
                let r = earlier(*right)?;
                if !contains(&r.context, &l.conclusion) {
                    return Err(format!(
                        "the conclusion of line {left} is not in the context of line {right}"
                    ));
                }
                if !alpha_eq(&r.conclusion, &cur.conclusion) {
                    return Err(format!("conclusion differs from line {right}"));
                }
                let mut expected = l.context.clone();
                expected.extend(r.context.iter().filter(|t| !alpha_eq(t, &l.conclusion)).cloned());
                if !same_set(&expected, &cur.context) {
                    return Err("context is not the union of the cut premises".into());
                }
                Ok(())
            }
            LsRule::Substitution {
                from,
                var: x,
                var_type,
                term,
            } => {
                let prev = earlier(*from)?;
                let subst_all = |t: &Term| substitute(t, x, var_type, &desugar(term), sig).map_err(|e| e.to_string());
                let expected = Sequent::new(
                    prev.context.iter().map(subst_all).collect::<std::result::Result<_, _>>()?,
                    subst_all(&prev.conclusion)?,
                );
                if same_sequent(&expected, &cur) {
                    Ok(())
                } else {
                    Err(format!("not the result of substituting for `{x}` in line {from}"))
                }
            }
            LsRule::Rewrite { from, equiv } => {
                let prev = earlier(*from)?;
                let e = earlier(*equiv)?;
                let Term::Eq(a, b) = &e.conclusion else {
                    return Err(format!("line {equiv} does not conclude a bi-implication"));
                };
                if infer_type(a, sig).ok() != Some(TypeExpr::Omega) {
                    return Err(format!("line {equiv} does not conclude a bi-implication"));
                }
                if !differs_by_replacement(&prev.conclusion, &cur.conclusion, a, b)
                    && !differs_by_replacement(&prev.conclusion, &cur.conclusion, b, a)
                {
                    return Err(format!("conclusion is not line {from} rewritten by line {equiv}"));
                }
                let mut expected = prev.context.clone();
                expected.extend(e.context.iter().cloned());
                if !same_set(&expected, &cur.context) {
                    return Err("context is not the union of the premises' contexts".into());
                }
                Ok(())
            }
        })();
        if let Err(reason) = outcome {
            return reject(reason);
        }
        done.push(cur);
    }
    if lines.is_empty() {
        return LsVerdict::Rejected {
            line: 0,
            reason: "empty derivation".into(),
        };
    }
    LsVerdict::Accepted { lines: lines.len() }
}

/// A named set of sequents with the function symbols they use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomPack {
    pub name: String,
    pub symbols: Vec<(String, TypeExpr, TypeExpr)>,
    pub sequents: Vec<(String, Sequent)>,
}

impl AxiomPack {
    /// Adds the pack's symbols to `sig`. A symbol already present must have
    /// the same type.
    pub fn install(&self, sig: &mut Signature) -> Result<()> {
        for (name, dom, cod) in &self.symbols {
            match sig.symbol(name) {
                Some((d, c)) if d == dom && c == cod => {}
                Some((d, c)) => {
                    return Err(Error::InvalidSystem(format!(
                        "symbol `{name}` has type {d} -> {c}, but the {} pack needs {dom} -> {cod}",
                        self.name
                    )))
                }
                None => sig.add_symbol(name.clone(), dom.clone(), cod.clone())?,
            }
        }
        Ok(())
    }
}

/// Abelian group structure on `R` with `0 : 1 → R`, `+ : R * R → R` and
/// `- : R → R`. The variables `r`, `s`, `t` are free and read universally.
pub fn abelian_axiom_pack() -> AxiomPack {
    let r = || var("r", TypeExpr::R);
    let s = || var("s", TypeExpr::R);
    let t = || var("t", TypeExpr::R);
    let zero = || app("0", Term::Star);
    let plus = |a: Term, b: Term| app("+", Term::Tuple(vec![a, b]));
    let neg = |a: Term| app("-", a);
    let rr = TypeExpr::Product(vec![TypeExpr::R, TypeExpr::R]);
    AxiomPack {
        name: "abelian".into(),
        symbols: vec![
            ("0".into(), TypeExpr::Unit, TypeExpr::R),
            ("+".into(), rr, TypeExpr::R),
            ("-".into(), TypeExpr::R, TypeExpr::R),
        ],
        sequents: vec![
            ("unit".into(), Sequent::bare(eq(plus(r(), zero()), r()))),
            (
                "associativity".into(),
                Sequent::bare(eq(plus(plus(r(), s()), t()), plus(r(), plus(s(), t())))),
            ),
            ("commutativity".into(), Sequent::bare(eq(plus(r(), s()), plus(s(), r())))),
            ("inverse".into(), Sequent::bare(eq(plus(r(), neg(r())), zero()))),
        ],
    }
}

/// Looks up a pack by name.
pub fn axiom_pack(name: &str) -> Option<AxiomPack> {
    match name {
        "abelian" => Some(abelian_axiom_pack()),
        _ => None,
    }
}

/// `{ x : T | x in X & x in Y }` for `X, Y : P(T)`.
pub fn lset_intersection(x: &Term, y: &Term, sig: &Signature) -> Result<Term> {
    let tx = infer_type(x, sig)?;
    let ty = infer_type(y, sig)?;
    let TypeExpr::Power(elem) = &tx else {
        return Err(Error::Type {
            subterm: x.to_string(),
            msg: format!("intersection needs a power type, found {tx}"),
        });
    };
    if tx != ty {
        return Err(Error::Type {
            subterm: y.to_string(),
            msg: format!("cannot intersect {tx} with {ty}"),
        });
    }
    let mut avoid = x.all_names();
    avoid.extend(y.all_names());
    let v = fresh("x", &avoid);
    let xv = var(&v, (**elem).clone());
    Ok(compr(
        &v,
        (**elem).clone(),
        Term::And(Box::new(member(xv.clone(), x.clone())), Box::new(member(xv, y.clone()))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ls::parse::{parse_ls, parse_sequent};
    use crate::ls::term::VarContext;

    fn sig() -> Signature {
        let mut sig = Signature::new(
            Vec::<String>::new(),
            vec![("A".to_string(), TypeExpr::Sigma, TypeExpr::R)],
        )
        .unwrap();
        abelian_axiom_pack().install(&mut sig).unwrap();
        sig
    }

    fn ctx() -> VarContext {
        [
            ("s", TypeExpr::Sigma),
            ("D", TypeExpr::power(TypeExpr::R)),
            ("a", TypeExpr::R),
            ("b", TypeExpr::R),
            ("r", TypeExpr::R),
            ("u", TypeExpr::Unit),
            ("p", TypeExpr::Omega),
            ("q", TypeExpr::Omega),
            ("z", TypeExpr::Product(vec![TypeExpr::R, TypeExpr::Sigma])),
        ]
        .into_iter()
        .map(|(n, t)| (n.to_string(), t))
        .collect()
    }

    fn seq(text: &str) -> Sequent {
        parse_sequent(text, &sig(), &ctx()).unwrap()
    }

    fn schema(text: &str) -> Option<AxiomSchema> {
        is_axiom_instance(&seq(text), &sig())
    }

    #[test]
    fn recognises_schemas() {
        assert_eq!(schema("A(s) in D |- A(s) in D"), Some(AxiomSchema::Tautology));
        assert_eq!(schema("p & q |- p & q"), Some(AxiomSchema::Tautology));
        assert_eq!(schema("|- u = *"), Some(AxiomSchema::Unity));
        assert_eq!(schema("|- proj_2(<a, b>) = b"), Some(AxiomSchema::Products));
        assert_eq!(schema("|- z = <proj_1(z), proj_2(z)>"), Some(AxiomSchema::Products));
        assert_eq!(
            schema("|- s in { s : Sigma | A(s) in D } <-> A(s) in D"),
            Some(AxiomSchema::Comprehension)
        );
        assert_eq!(schema("a = b, +(<a, a>) = a |- +(<a, b>) = a"), Some(AxiomSchema::Equality));
        assert_eq!(schema("|- proj_1(<a, b>) = b"), None);
        assert_eq!(schema("p |- q"), None);
        assert_eq!(schema("|- s in { s : Sigma | A(s) in D } <-> A(s) = A(s)"), None);
    }

    #[test]
    fn generated_instances_are_recognised() {
        let sig = sig();
        let alpha = parse_ls("A(s) in D", &sig, &ctx()).unwrap();
        let a = var("a", TypeExpr::R);
        let b = var("b", TypeExpr::R);
        let template = parse_ls("forall a : R. +(<a, z0>) = z0", &sig, &[("z0".to_string(), TypeExpr::R)].into()).unwrap();
        let cases = [
            (tautology_instance(alpha.clone()), AxiomSchema::Tautology),
            (unity_instance("u"), AxiomSchema::Unity),
            (equality_instance(a.clone(), b.clone(), &template, "z0"), AxiomSchema::Equality),
            (product_beta_instance(vec![a.clone(), b.clone()], 1), AxiomSchema::Products),
            (product_eta_instance(var("z", TypeExpr::Product(vec![TypeExpr::R, TypeExpr::Sigma])), 2), AxiomSchema::Products),
            (
                comprehension_instance(app("A", var("s", TypeExpr::Sigma)), "a", TypeExpr::R, member(a.clone(), var("D", TypeExpr::power(TypeExpr::R)))),
                AxiomSchema::Comprehension,
            ),
        ];
        for (s, want) in cases {
            assert!(want.matches(&s, &sig), "{s}");
        }
    }

    #[test]
    fn derivations() {
        let sig = sig();
        let lines = vec![
            LsLine {
                sequent: seq("p |- p"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("p, q |- p"),
                by: LsRule::Thinning { from: 1 },
            },
        ];
        assert_eq!(check_ls_derivation(&lines, &sig, &[]), LsVerdict::Accepted { lines: 2 });

        let comp = vec![LsLine {
            sequent: seq("|- s in { s : Sigma | A(s) in D } <-> A(s) in D"),
            by: LsRule::Axiom {
                schema: Some(AxiomSchema::Comprehension),
            },
        }];
        assert!(check_ls_derivation(&comp, &sig, &[]).accepted());

        let bad_cut = vec![
            LsLine {
                sequent: seq("p |- p"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("q |- q"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("p |- q"),
                by: LsRule::Cut { left: 1, right: 2 },
            },
        ];
        assert!(matches!(
            check_ls_derivation(&bad_cut, &sig, &[]),
            LsVerdict::Rejected { line: 3, .. }
        ));
    }

    #[test]
    fn cut_substitution_and_rewrite() {
        let sig = sig();
        let pack = abelian_axiom_pack();
        let given: Vec<Sequent> = pack.sequents.iter().map(|(_, s)| s.clone()).collect();
        let zero = app("0", Term::Star);
        let lines = vec![
            LsLine {
                sequent: seq("|- +(<r, 0(*)>) = r"),
                by: LsRule::Given,
            },
            LsLine {
                sequent: seq("|- +(<0(*), 0(*)>) = 0(*)"),
                by: LsRule::Substitution {
                    from: 1,
                    var: "r".into(),
                    var_type: TypeExpr::R,
                    term: zero,
                },
            },
            LsLine {
                sequent: seq("|- s in { s : Sigma | A(s) in D } <-> A(s) in D"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("A(s) in D |- A(s) in D"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("A(s) in D |- s in { s : Sigma | A(s) in D }"),
                by: LsRule::Rewrite { from: 4, equiv: 3 },
            },
            LsLine {
                sequent: seq("p |- p"),
                by: LsRule::Axiom { schema: None },
            },
            LsLine {
                sequent: seq("p, A(s) in D |- A(s) in D"),
                by: LsRule::Thinning { from: 4 },
            },
            LsLine {
                sequent: seq("p, A(s) in D |- A(s) in D"),
                by: LsRule::Cut { left: 6, right: 7 },
            },
        ];
        assert_eq!(check_ls_derivation(&lines, &sig, &given), LsVerdict::Accepted { lines: 8 });
        // Given is checked against the supplied axioms.
        assert!(matches!(
            check_ls_derivation(&lines[..1], &sig, &[]),
            LsVerdict::Rejected { line: 1, .. }
        ));
    }

    #[test]
    fn pack_and_intersection() {
        let pack = abelian_axiom_pack();
        assert_eq!(pack.sequents.len(), 4);
        assert_eq!(pack.sequents[0].1.to_string(), "|- +(<r, 0(*)>) = r");
        let sig = sig();
        for (_, s) in &pack.sequents {
            s.check_types(&sig).unwrap();
        }
        let d = var("D", TypeExpr::power(TypeExpr::R));
        let i = lset_intersection(&d, &d, &sig).unwrap();
        assert_eq!(i.to_string(), "{ x : R | x in D & x in D }");
        assert_eq!(infer_type(&i, &sig).unwrap(), TypeExpr::power(TypeExpr::R));
        let e = var("E", TypeExpr::power(TypeExpr::Sigma));
        assert!(lset_intersection(&d, &e, &sig).is_err());
        assert!(lset_intersection(&var("a", TypeExpr::R), &d, &sig).is_err());
    }
}
