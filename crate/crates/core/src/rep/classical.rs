//! A classical system as a representation over the one-object category,
//! where presheaves are plain sets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::ToposRep;
use crate::category::{FiniteCategory, Obj};
use crate::error::{Error, Result};
use crate::ls::{Signature, Term, TypeExpr};
use crate::pl::{format_rational, ClassicalSystem, IntervalSet, Q};
use crate::presheaf::{char_morphism, NatTransform, Presheaf, Subobject};
use crate::Limits;

const STAGE: Obj = Obj(0);

/// `Σ` is the state set, `R` the finite set of values the quantities
/// attain and each quantity its value table. A subset `Δ` of the real line
/// enters as an interval set and is cut down to the attained values, which
/// leaves every preimage unchanged.
#[derive(Debug)]
pub struct EffectiveClassicalRep {
    system: ClassicalSystem,
    values: Vec<Q>,
    rep: ToposRep,
}

impl EffectiveClassicalRep {
    pub fn new(system: ClassicalSystem, limits: &Limits) -> Result<Self> {
        let base = Arc::new(FiniteCategory::terminal());
        let values: Vec<Q> = system
            .quantities()
            .values()
            .flatten()
            .copied()
            .collect::<BTreeSet<Q>>()
            .into_iter()
            .collect();
        let state_labels: Vec<&str> = system.states().iter().map(String::as_str).collect();
        let value_labels: Vec<String> = values.iter().map(format_rational).collect();
        let value_refs: Vec<&str> = value_labels.iter().map(String::as_str).collect();
        let sigma = Arc::new(Presheaf::constant(base.clone(), &state_labels));
        let r = Arc::new(Presheaf::constant(base.clone(), &value_refs));
        let sig = Signature::new(
            Vec::<String>::new(),
            system
                .quantities()
                .keys()
                .map(|q| (q.clone(), TypeExpr::Sigma, TypeExpr::R)),
        )?;
        let grounds = BTreeMap::from([("Sigma".to_string(), sigma.clone()), ("R".to_string(), r.clone())]);
        let mut rep = ToposRep::new(sig, base, grounds, limits)?;
        for (name, table) in system.quantities() {
            let component = table
                .iter()
                .map(|v| values.binary_search(v).unwrap() as u32)
                .collect();
            rep.assign_symbol(name, NatTransform::new(sigma.clone(), r.clone(), vec![component])?)?;
        }
        rep.check_faithful()?;
        Ok(EffectiveClassicalRep { system, values, rep })
    }

    pub fn system(&self) -> &ClassicalSystem {
        &self.system
    }

    pub fn rep(&self) -> &ToposRep {
        &self.rep
    }

    /// The attained values, sorted; these label the elements of `R`.
    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// The element of `PR` standing for `Δ`.
    pub fn delta(&self, delta: &IntervalSet) -> Result<usize> {
        let r = self.rep.interpret_type(&TypeExpr::R)?.presheaf().clone();
        let inside: Vec<usize> = (0..self.values.len())
            .filter(|i| delta.member(self.values[*i]))
            .collect();
        let chi = char_morphism(&Subobject::new(r, &[inside])?, self.rep.omega());
        let name = self.rep.power(&TypeExpr::R)?.exponential().name(&chi, self.rep.limits())?;
        Ok(name.at(STAGE))
    }

    /// `A⁻¹(Δ)` computed by applying the power transpose of `A(s) in D` to
    /// `Δ` and reading off the members.
    pub fn preimage(&self, quantity: &str, delta: &IntervalSet) -> Result<Vec<String>> {
        let family = self.rep.prop_family(quantity)?;
        let image = family.apply(STAGE, self.delta(delta)?);
        self.rep.members(&TypeExpr::Sigma, STAGE, image)
    }
}

/// `1` when `A(s) ∈ Δ` and `0` otherwise, read off the interpretation of
/// `A(s) in D` at the point `(s, Δ)`.
pub fn classical_indicator(quantity: &str, state: &str, delta: &IntervalSet, rep: &EffectiveClassicalRep) -> Result<u8> {
    let s = rep.system.state(state)?;
    if !rep.system.quantities().contains_key(quantity) {
        return Err(Error::UnknownQuantity(quantity.to_string()));
    }
    let d = rep.delta(delta)?;
    let scope = [
        ("s".to_string(), TypeExpr::Sigma),
        ("D".to_string(), TypeExpr::power(TypeExpr::R)),
    ];
    let atom = Term::In(
        Box::new(Term::App(quantity.to_string(), Box::new(Term::Var("s".into(), TypeExpr::Sigma)))),
        Box::new(Term::Var("D".into(), TypeExpr::power(TypeExpr::R))),
    );
    let arrow = rep.rep.interpret_term(&atom, &scope)?;
    let pr_size = rep.rep.power(&TypeExpr::R)?.presheaf().size(STAGE);
    let value = arrow.apply(STAGE, s * pr_size + d);
    Ok(u8::from(value == rep.rep.omega().top(STAGE)))
}
