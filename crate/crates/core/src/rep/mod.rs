//! Representations of the local language in a presheaf topos: types become
//! presheaves, function symbols become natural transformations and terms
//! become arrows out of the product of their context.

mod classical;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::category::{FiniteCategory, Obj};
use crate::error::{Error, Result};
use crate::heyting::Elem;
use crate::ls::{desugar, infer_type, Sequent, Signature, Term, TypeExpr};
use crate::presheaf::{
    classifier_kit, equality_arrow, power_object, product_map, to_terminal, ClassifierKit, Exponential, GlobalElement,
    NatTransform, Omega, Presheaf, Product,
};
use crate::Limits;

pub use classical::{classical_indicator, EffectiveClassicalRep};

/// A type's interpretation, keeping the structure needed to build arrows
/// into or out of it.
#[derive(Clone, Debug)]
pub enum TypeInterp {
    Object(Arc<Presheaf>),
    Product(Product),
    Power(Exponential),
}

impl TypeInterp {
    pub fn presheaf(&self) -> &Arc<Presheaf> {
        match self {
            TypeInterp::Object(p) => p,
            TypeInterp::Product(p) => p.presheaf(),
            TypeInterp::Power(e) => e.presheaf(),
        }
    }

    /// The exponential behind a power type.
    pub fn exponential(&self) -> &Exponential {
        match self {
            TypeInterp::Power(e) => e,
            _ => panic!("not the interpretation of a power type"),
        }
    }
}

/// Variables in scope, outermost first. Later entries shadow earlier ones.
pub type Scope = [(String, TypeExpr)];

/// A representation of a local language in the presheaf topos over a
/// finite category.
#[derive(Debug)]
pub struct ToposRep {
    sig: Signature,
    base: Arc<FiniteCategory>,
    limits: Limits,
    kit: ClassifierKit,
    grounds: BTreeMap<String, Arc<Presheaf>>,
    symbols: BTreeMap<String, NatTransform>,
    axioms: Vec<(String, Sequent)>,
    types: Mutex<HashMap<TypeExpr, Arc<TypeInterp>>>,
}

fn ground_key(t: &TypeExpr) -> Option<&str> {
    match t {
        TypeExpr::Sigma => Some("Sigma"),
        TypeExpr::R => Some("R"),
        TypeExpr::Ground(g) => Some(g),
        _ => None,
    }
}

/// Where an axiom fails: a stage and an assignment of its free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub stage: String,
    pub assignment: BTreeMap<String, String>,
    /// Truth value of the conjoined context at the witness.
    pub context: String,
    /// Truth value of the conclusion at the witness.
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomOutcome {
    pub name: String,
    pub sequent: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomOutcome> {
        self.outcomes.iter().filter(|o| !o.holds)
    }
}

impl ToposRep {
    /// Starts a representation with the ground types assigned. `Sigma` and
    /// `R` are keyed by those names.
    pub fn new(
        sig: Signature,
        base: Arc<FiniteCategory>,
        grounds: BTreeMap<String, Arc<Presheaf>>,
        limits: &Limits,
    ) -> Result<Self> {
        sig.validate()?;
        for name in ["Sigma", "R"].into_iter().chain(sig.grounds().iter().map(String::as_str)) {
            if !grounds.contains_key(name) {
                return Err(Error::Unassigned {
                    kind: "ground type",
                    name: name.to_string(),
                });
            }
        }
        for (name, p) in &grounds {
            if name != "Sigma" && name != "R" && !sig.grounds().contains(name) {
                return Err(Error::ShapeMismatch(format!("`{name}` is not a ground type of the signature")));
            }
            if *p.base() != base {
                return Err(Error::ShapeMismatch(format!("ground `{name}` lives on a different category")));
            }
        }
        let kit = classifier_kit(&base, limits)?;
        Ok(ToposRep {
            sig,
            base,
            limits: limits.clone(),
            kit,
            grounds,
            symbols: BTreeMap::new(),
            axioms: Vec::new(),
            types: Mutex::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn omega(&self) -> &Omega {
        &self.kit.omega
    }

    pub fn terminal(&self) -> &Arc<Presheaf> {
        &self.kit.terminal
    }

    pub fn true_arrow(&self) -> &NatTransform {
        &self.kit.true_arrow
    }

    pub fn symbol(&self, name: &str) -> Option<&NatTransform> {
        self.symbols.get(name)
    }

    pub fn axioms(&self) -> &[(String, Sequent)] {
        &self.axioms
    }

    /// Structural interpretation: products go to products, `P(T)` to the
    /// power object, `1` to the terminal object and `Omega` to the
    /// classifier.
    pub fn interpret_type(&self, t: &TypeExpr) -> Result<Arc<TypeInterp>> {
        if let Some(hit) = self.types.lock().unwrap().get(t) {
            return Ok(hit.clone());
        }
        let interp = match t {
            TypeExpr::Unit => TypeInterp::Object(self.kit.terminal.clone()),
            TypeExpr::Omega => TypeInterp::Object(self.kit.omega.presheaf().clone()),
            TypeExpr::Product(fs) => {
                let factors = fs
                    .iter()
                    .map(|f| Ok(self.interpret_type(f)?.presheaf().clone()))
                    .collect::<Result<Vec<_>>>()?;
                TypeInterp::Product(Product::new(factors, &self.base, &self.limits)?)
            }
            TypeExpr::Power(inner) => {
                let x = self.interpret_type(inner)?;
                TypeInterp::Power(power_object(x.presheaf(), &self.kit.omega, &self.limits)?)
            }
            _ => {
                let key = ground_key(t).unwrap();
                TypeInterp::Object(
                    self.grounds
                        .get(key)
                        .cloned()
                        .ok_or_else(|| Error::Unassigned {
                            kind: "ground type",
                            name: key.to_string(),
                        })?,
                )
            }
        };
        let interp = Arc::new(interp);
        self.types.lock().unwrap().insert(t.clone(), interp.clone());
        Ok(interp)
    }

    /// The interpretation of `P(t)`; [`TypeInterp::exponential`] unwraps it.
    pub fn power(&self, t: &TypeExpr) -> Result<Arc<TypeInterp>> {
        self.interpret_type(&TypeExpr::power(t.clone()))
    }

    /// Assigns a natural transformation to a function symbol, checking that
    /// it runs between the interpretations of the declared types.
    pub fn assign_symbol(&mut self, name: &str, arrow: NatTransform) -> Result<()> {
        let (dom, cod) = self
            .sig
            .symbol(name)
            .cloned()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))?;
        let src = self.interpret_type(&dom)?;
        let tgt = self.interpret_type(&cod)?;
        if **arrow.source() != **src.presheaf() || **arrow.target() != **tgt.presheaf() {
            return Err(Error::ShapeMismatch(format!(
                "symbol `{name}` must be interpreted by an arrow {dom} → {cod}"
            )));
        }
        self.symbols.insert(name.to_string(), arrow);
        Ok(())
    }

    /// Assigns a symbol from a table `(object, [(argument label, value label)])`.
    pub fn assign_symbol_table(&mut self, name: &str, table: &[(String, Vec<(String, String)>)]) -> Result<()> {
        let (dom, cod) = self
            .sig
            .symbol(name)
            .cloned()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))?;
        let src = self.interpret_type(&dom)?.presheaf().clone();
        let tgt = self.interpret_type(&cod)?.presheaf().clone();
        let mut components: Vec<Vec<Option<u32>>> = self.base.object_ids().map(|a| vec![None; src.size(a)]).collect();
        for (object, pairs) in table {
            let a = self.base.object(object)?;
            for (x, y) in pairs {
                let i = src.find(a, x)?;
                let j = tgt.find(a, y)?;
                if components[a.0][i].replace(j as u32).is_some_and(|old| old != j as u32) {
                    return Err(Error::ShapeMismatch(format!("`{name}` gives `{x}` two values at stage `{object}`")));
                }
            }
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(a, comp)| {
                comp.into_iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.ok_or_else(|| {
                            Error::ShapeMismatch(format!(
                                "`{name}` has no value for `{}` at stage `{}`",
                                src.label(Obj(a), i),
                                self.base.object_name(Obj(a))
                            ))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let arrow = NatTransform::new(src, tgt, components)?;
        self.assign_symbol(name, arrow)
    }

    pub fn add_axiom(&mut self, name: &str, sequent: Sequent) -> Result<()> {
        sequent.check_types(&self.sig)?;
        self.axioms.push((name.to_string(), sequent));
        Ok(())
    }

    /// Every symbol is assigned and distinct quantities `Sigma → R` get
    /// distinct arrows.
    pub fn check_faithful(&self) -> Result<()> {
        for name in self.sig.symbols().keys() {
            if !self.symbols.contains_key(name) {
                return Err(Error::Unassigned {
                    kind: "function symbol",
                    name: name.clone(),
                });
            }
        }
        let quantities: Vec<&str> = self.sig.quantities().collect();
        for (i, a) in quantities.iter().enumerate() {
            for b in &quantities[i + 1..] {
                if self.symbols[*a] == self.symbols[*b] {
                    return Err(Error::NotFaithful(format!("`{a}` and `{b}` are assigned the same arrow")));
                }
            }
        }
        Ok(())
    }

    fn scope_product(&self, scope: &Scope) -> Result<Product> {
        let factors = scope
            .iter()
            .map(|(_, t)| Ok(self.interpret_type(t)?.presheaf().clone()))
            .collect::<Result<Vec<_>>>()?;
        Product::new(factors, &self.base, &self.limits)
    }

    /// The arrow `⟦scope⟧ → ⟦T⟧` interpreting a term of type `T` whose free
    /// variables are in `scope`. Connectives and quantifiers are desugared
    /// first, so equality, membership, tuples and comprehension carry all
    /// of the logic.
    pub fn interpret_term(&self, term: &Term, scope: &Scope) -> Result<NatTransform> {
        infer_type(term, &self.sig)?;
        for (x, t) in term.free_vars() {
            match scope.iter().rev().find(|(y, _)| *y == x) {
                Some((_, ty)) if *ty == t => {}
                Some((_, ty)) => {
                    return Err(Error::Type {
                        subterm: x,
                        msg: format!("variable has type {t} but the context gives {ty}"),
                    })
                }
                None => {
                    return Err(Error::Type {
                        subterm: x,
                        msg: "variable is not in the context".into(),
                    })
                }
            }
        }
        let gamma = self.scope_product(scope)?;
        self.core(&desugar(term), scope, &gamma)
    }

    fn core(&self, term: &Term, scope: &Scope, gamma: &Product) -> Result<NatTransform> {
        let ty = |t: &Term| infer_type(t, &self.sig);
        Ok(match term {
            Term::Var(x, _) => {
                let k = scope.iter().rposition(|(y, _)| y == x).expect("free variables are in scope");
                gamma.projection(k)
            }
            Term::Star => to_terminal(gamma.presheaf()),
            Term::App(f, t) => {
                let arrow = self.symbols.get(f).ok_or_else(|| Error::Unassigned {
                    kind: "function symbol",
                    name: f.clone(),
                })?;
                arrow.after(&self.core(t, scope, gamma)?)?
            }
            Term::Tuple(ts) => match ts.len() {
                0 => to_terminal(gamma.presheaf()),
                1 => self.core(&ts[0], scope, gamma)?,
                _ => {
                    let arrows = ts
                        .iter()
                        .map(|t| self.core(t, scope, gamma))
                        .collect::<Result<Vec<_>>>()?;
                    match &*self.interpret_type(&ty(term)?)? {
                        TypeInterp::Product(p) => p.pairing(&arrows)?,
                        _ => unreachable!("tuples have product types"),
                    }
                }
            },
            Term::Proj(i, t) => {
                let inner = self.core(t, scope, gamma)?;
                match &*self.interpret_type(&ty(t)?)? {
                    TypeInterp::Product(p) => p.projection(i - 1).after(&inner)?,
                    _ => unreachable!("projections apply to products"),
                }
            }
            Term::Eq(a, b) => {
                let x = self.interpret_type(&ty(a)?)?;
                let pair = Product::binary(x.presheaf(), x.presheaf(), &self.limits)?;
                let both = pair.pairing(&[self.core(a, scope, gamma)?, self.core(b, scope, gamma)?])?;
                equality_arrow(&pair, &self.kit.omega)?.after(&both)?
            }
            Term::In(a, b) => {
                let exp = self.power(&ty(a)?)?;
                let (pair, ev) = exp.exponential().eval_arrow(&self.limits)?;
                let both = pair.pairing(&[self.core(a, scope, gamma)?, self.core(b, scope, gamma)?])?;
                ev.after(&both)?
            }
            Term::Compr(x, t, body) => {
                let mut inner: Vec<(String, TypeExpr)> = scope.to_vec();
                inner.push((x.clone(), t.clone()));
                let wider = self.scope_product(&inner)?;
                let f = self.core(body, &inner, &wider)?;
                let elem = self.interpret_type(t)?;
                let pair = Product::binary(gamma.presheaf(), elem.presheaf(), &self.limits)?;
                self.power(t)?.exponential().transpose(&pair, &f.with_source(pair.presheaf().clone()))?
            }
            _ => unreachable!("desugared terms use only core constructors"),
        })
    }

    /// The global element `1 → ⟦T⟧` of a closed term.
    pub fn interpret_closed(&self, term: &Term) -> Result<GlobalElement> {
        let arrow = self.interpret_term(term, &[])?;
        GlobalElement::new(
            arrow.target().clone(),
            self.base.object_ids().map(|a| arrow.apply(a, 0)).collect(),
        )
    }

    /// The elements of `⟦T⟧_A` that belong to the element `e` of `⟦P(T)⟧_A`.
    pub fn members(&self, elem_type: &TypeExpr, a: Obj, e: usize) -> Result<Vec<String>> {
        let exp = self.power(elem_type)?;
        let exp = exp.exponential();
        let id = self.base.identity(a);
        let top = self.kit.omega.top(a);
        Ok((0..exp.exponent().size(a))
            .filter(|x| exp.value(e, id, *x) == top)
            .map(|x| exp.exponent().label(a, x).to_string())
            .collect())
    }

    /// The chain `Σ × PR → R × PR → Ω` built from the symbol `A`, the
    /// identity and evaluation.
    pub fn membership_chain(&self, quantity: &str) -> Result<NatTransform> {
        let a = self.quantity(quantity)?;
        let sigma = self.interpret_type(&TypeExpr::Sigma)?.presheaf().clone();
        let r = self.interpret_type(&TypeExpr::R)?.presheaf().clone();
        let pr = self.power(&TypeExpr::R)?;
        let pr = pr.exponential();
        let source = Product::binary(&sigma, pr.presheaf(), &self.limits)?;
        let target = Product::binary(&r, pr.presheaf(), &self.limits)?;
        let step = product_map(&source, &target, &[a.clone(), NatTransform::identity(pr.presheaf().clone())])?;
        let (_, ev) = pr.eval_arrow(&self.limits)?;
        ev.after(&step)
    }

    /// `PR → PΣ`, the power transpose of `A(s) in D` sending `D` to the
    /// states whose `A`-value lies in `D`.
    pub fn prop_family(&self, quantity: &str) -> Result<NatTransform> {
        self.quantity(quantity)?;
        let s = Term::Var("s".into(), TypeExpr::Sigma);
        let d = Term::Var("D".into(), TypeExpr::power(TypeExpr::R));
        let body = Term::In(Box::new(Term::App(quantity.into(), Box::new(s))), Box::new(d));
        let term = Term::Compr("s".into(), TypeExpr::Sigma, Box::new(body));
        let arrow = self.interpret_term(&term, &[("D".into(), TypeExpr::power(TypeExpr::R))])?;
        Ok(arrow.with_source(self.power(&TypeExpr::R)?.presheaf().clone()))
    }

    fn quantity(&self, name: &str) -> Result<&NatTransform> {
        if self.sig.symbol(name) != Some(&(TypeExpr::Sigma, TypeExpr::R)) {
            return Err(Error::UnknownQuantity(name.to_string()));
        }
        self.symbols.get(name).ok_or_else(|| Error::Unassigned {
            kind: "function symbol",
            name: name.to_string(),
        })
    }

    /// Whether the sequent holds: at every stage and for every assignment
    /// of its free variables, the meet of the context lies below the
    /// conclusion. Returns a witness when it does not.
    pub fn check_sequent(&self, seq: &Sequent) -> Result<Option<Witness>> {
        seq.check_types(&self.sig)?;
        let mut scope: Vec<(String, TypeExpr)> = Vec::new();
        for (x, t) in seq.free_vars() {
            if scope.iter().any(|(y, _)| *y == x) {
                return Err(Error::Type {
                    subterm: x,
                    msg: "variable occurs free with two different types".into(),
                });
            }
            scope.push((x, t));
        }
        let gamma = self.scope_product(&scope)?;
        let context = seq
            .context
            .iter()
            .map(|t| self.interpret_term(t, &scope))
            .collect::<Result<Vec<_>>>()?;
        let conclusion = self.interpret_term(&seq.conclusion, &scope)?;
        let omega = &self.kit.omega;
        for a in self.base.object_ids() {
            let lattice = omega.algebra(a).lattice();
            for g in 0..gamma.presheaf().size(a) {
                let hyp = context
                    .iter()
                    .fold(omega.top(a), |acc, c| lattice.meet(Elem(acc), Elem(c.apply(a, g))).0);
                let concl = conclusion.apply(a, g);
                if !lattice.leq(Elem(hyp), Elem(concl)) {
                    let coords = gamma.coords(a, g);
                    let assignment = scope
                        .iter()
                        .zip(&coords)
                        .zip(gamma.factors())
                        .map(|(((x, _), c), f)| (x.clone(), f.label(a, *c).to_string()))
                        .collect();
                    return Ok(Some(Witness {
                        stage: self.base.object_name(a).to_string(),
                        assignment,
                        context: omega.presheaf().label(a, hyp).to_string(),
                        conclusion: omega.presheaf().label(a, concl).to_string(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Checks every registered axiom. Interpretation failures are reported
    /// per axiom rather than aborting.
    pub fn validate_axioms(&self) -> AxiomReport {
        let outcomes = self
            .axioms
            .iter()
            .map(|(name, seq)| {
                let (holds, witness, error) = match self.check_sequent(seq) {
                    Ok(None) => (true, None, None),
                    Ok(Some(w)) => (false, Some(w), None),
                    Err(e) => (false, None, Some(e.to_string())),
                };
                AxiomOutcome {
                    name: name.clone(),
                    sequent: seq.to_string(),
                    holds,
                    witness,
                    error,
                }
            })
            .collect();
        AxiomReport { outcomes }
    }
}

/// Builds and validates a representation: grounds and symbols assigned
/// with matching shapes, faithful on quantities, every axiom true.
pub fn build_rep(
    sig: Signature,
    base: Arc<FiniteCategory>,
    grounds: BTreeMap<String, Arc<Presheaf>>,
    symbols: BTreeMap<String, NatTransform>,
    axioms: Vec<(String, Sequent)>,
    limits: &Limits,
) -> Result<ToposRep> {
    let mut rep = ToposRep::new(sig, base, grounds, limits)?;
    for (name, arrow) in symbols {
        rep.assign_symbol(&name, arrow)?;
    }
    for (name, seq) in axioms {
        rep.add_axiom(&name, seq)?;
    }
    finish(rep)
}

/// Runs the faithfulness and axiom checks on a fully assigned
/// representation.
pub fn finish(rep: ToposRep) -> Result<ToposRep> {
    rep.check_faithful()?;
    let report = rep.validate_axioms();
    if let Some(bad) = report.failures().next() {
        let detail = match (&bad.witness, &bad.error) {
            (Some(w), _) => format!(
                "{} `{}` at stage {} with {:?}",
                bad.name, bad.sequent, w.stage, w.assignment
            ),
            (_, Some(e)) => format!("{} `{}`: {e}", bad.name, bad.sequent),
            _ => format!("{} `{}`", bad.name, bad.sequent),
        };
        return Err(Error::AxiomFailure(detail));
    }
    Ok(rep)
}
