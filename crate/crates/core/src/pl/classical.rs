//! Heyting-valued representations of formulas and the classical
//! representation over a finite state space.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::formula::{Formula, Primitive};
use super::interval::{Endpoint, Interval, IntervalSet, Q};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::heyting::{build_algebra, AlgebraSpec, Elem, HeytingAlgebra};
use crate::Limits;

/// Represents `formula` in `algebra`, given an element for each of its
/// primitives; connectives go to the algebra's operations.
pub fn pl_represent<F>(formula: &Formula, algebra: &HeytingAlgebra, assign: &F) -> Result<Elem>
where
    F: Fn(&Primitive) -> Option<Elem>,
{
    Ok(match formula {
        Formula::Prim(p) => {
            let e = assign(p).ok_or_else(|| Error::UnassignedPrimitive(p.to_string()))?;
            if e.0 >= algebra.len() {
                return Err(Error::UnknownElement(format!("#{}", e.0)));
            }
            e
        }
        Formula::Not(a) => algebra.negate(pl_represent(a, algebra, assign)?),
        Formula::And(a, b) => algebra.meet(pl_represent(a, algebra, assign)?, pl_represent(b, algebra, assign)?),
        Formula::Or(a, b) => algebra.join(pl_represent(a, algebra, assign)?, pl_represent(b, algebra, assign)?),
        Formula::Implies(a, b) => {
            algebra.implies(pl_represent(a, algebra, assign)?, pl_represent(b, algebra, assign)?)
        }
    })
}

/// A finite state space with rational-valued physical quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSystem {
    states: Vec<String>,
    quantities: BTreeMap<String, Vec<Q>>,
}

impl ClassicalSystem {
    pub fn new(states: Vec<String>, quantities: BTreeMap<String, Vec<Q>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(Error::InvalidSystem(format!("state `{s}` is declared twice")));
            }
        }
        for (name, values) in &quantities {
            if values.len() != states.len() {
                return Err(Error::InvalidSystem(format!(
                    "quantity `{name}` has {} values for {} states",
                    values.len(),
                    states.len()
                )));
            }
        }
        Ok(ClassicalSystem { states, quantities })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn quantities(&self) -> &BTreeMap<String, Vec<Q>> {
        &self.quantities
    }

    pub fn state(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn value(&self, quantity: &str, state: usize) -> Result<Q> {
        let values = self
            .quantities
            .get(quantity)
            .ok_or_else(|| Error::UnknownQuantity(quantity.to_string()))?;
        values.get(state).copied().ok_or_else(|| Error::UnknownState(format!("#{state}")))
    }

    /// `Å⁻¹(Δ)` as a set of state indices.
    pub fn preimage(&self, quantity: &str, delta: &IntervalSet) -> Result<BitSet> {
        let values = self
            .quantities
            .get(quantity)
            .ok_or_else(|| Error::UnknownQuantity(quantity.to_string()))?;
        Ok(BitSet::from_indices(
            self.states.len(),
            values.iter().enumerate().filter(|(_, v)| delta.member(**v)).map(|(i, _)| i),
        ))
    }

    fn primitive_set(&self, p: &Primitive) -> Result<BitSet> {
        match p {
            Primitive::Quantity { name, delta } => self.preimage(name, delta),
            Primitive::Atom(a) => Err(Error::UnassignedPrimitive(a.clone())),
        }
    }

    /// The subset of states at which `formula` holds, computed with set
    /// operations.
    pub fn extension(&self, formula: &Formula) -> Result<BitSet> {
        Ok(match formula {
            Formula::Prim(p) => self.primitive_set(p)?,
            Formula::Not(a) => self.extension(a)?.complement(),
            Formula::And(a, b) => self.extension(a)?.intersection(&self.extension(b)?),
            Formula::Or(a, b) => self.extension(a)?.union(&self.extension(b)?),
            Formula::Implies(a, b) => self.extension(a)?.complement().union(&self.extension(b)?),
        })
    }

    pub fn state_label(&self, set: &BitSet) -> String {
        crate::heyting::set_label(&self.states, set)
    }
}

/// The powerset of the state space together with the preimage assignment
/// of primitives.
#[derive(Clone, Debug)]
pub struct ClassicalRep<'a> {
    pub system: &'a ClassicalSystem,
    pub algebra: HeytingAlgebra,
}

impl ClassicalRep<'_> {
    /// The algebra element of a state subset; powerset elements are indexed
    /// by their bitmask.
    pub fn element(&self, set: &BitSet) -> Elem {
        Elem(set.iter().map(|i| 1usize << i).sum())
    }

    pub fn subset(&self, e: Elem) -> BitSet {
        BitSet::from_indices(self.system.states.len(), (0..self.system.states.len()).filter(|i| e.0 >> i & 1 == 1))
    }

    pub fn assign(&self, p: &Primitive) -> Option<Elem> {
        self.system.primitive_set(p).ok().map(|s| self.element(&s))
    }

    pub fn represent(&self, formula: &Formula) -> Result<BitSet> {
        for p in formula.primitives() {
            self.system.primitive_set(p)?;
        }
        let e = pl_represent(formula, &self.algebra, &|p| self.assign(p))?;
        Ok(self.subset(e))
    }
}

pub fn classical_rep<'a>(system: &'a ClassicalSystem, limits: &Limits) -> Result<ClassicalRep<'a>> {
    let algebra = build_algebra(&AlgebraSpec::Powerset(system.states.clone()), limits)?;
    Ok(ClassicalRep { system, algebra })
}

/// The classical truth value of `formula` at `state`.
pub fn truth_value(formula: &Formula, state: &str, system: &ClassicalSystem) -> Result<bool> {
    let s = system.state(state)?;
    eval_at(formula, s, system)
}

fn eval_at(formula: &Formula, s: usize, system: &ClassicalSystem) -> Result<bool> {
    Ok(match formula {
        Formula::Prim(Primitive::Quantity { name, delta }) => delta.member(system.value(name, s)?),
        Formula::Prim(Primitive::Atom(a)) => return Err(Error::UnassignedPrimitive(a.clone())),
        Formula::Not(a) => !eval_at(a, s, system)?,
        Formula::And(a, b) => eval_at(a, s, system)? & eval_at(b, s, system)?,
        Formula::Or(a, b) => eval_at(a, s, system)? | eval_at(b, s, system)?,
        Formula::Implies(a, b) => !eval_at(a, s, system)? | eval_at(b, s, system)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub quantity: String,
    pub delta1: String,
    pub delta2: String,
    pub axiom: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct OptionalAxiomReport {
    pub checked: usize,
    pub failures: Vec<AxiomCheck>,
}

impl OptionalAxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random interval sets whose endpoints sit on or between the given values,
/// so that every boundary case is exercised.
pub fn sample_interval_set(rng: &mut impl Rng, anchors: &[Q]) -> IntervalSet {
    let mut points: Vec<Q> = anchors.to_vec();
    for w in anchors.windows(2) {
        points.push((w[0] + w[1]) / Q::from_integer(2));
    }
    if points.is_empty() {
        points.push(Q::from_integer(0));
    }
    let lo_pt = |rng: &mut dyn rand::RngCore| -> Q {
        let base = points[rng.gen_range(0..points.len())];
        base + Q::new(rng.gen_range(-1..=1), 2)
    };
    let pieces = rng.gen_range(0..=2);
    let mut out = Vec::new();
    for _ in 0..pieces {
        let a = lo_pt(rng);
        let b = lo_pt(rng);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let lo = if rng.gen_bool(0.15) {
            None
        } else {
            Some(Endpoint {
                value: a,
                closed: rng.gen(),
            })
        };
        let hi = if rng.gen_bool(0.15) {
            None
        } else {
            Some(Endpoint {
                value: b,
                closed: rng.gen(),
            })
        };
        out.push(Interval { lo, hi });
    }
    IntervalSet::from_intervals(out)
}

/// Checks the optional axioms relating connectives on primitives to
/// operations on value sets: conjunction to intersection, disjunction to
/// union and negation to complement. Each is verified through preimages.
pub fn check_optional_axioms(system: &ClassicalSystem, samples: usize, seed: u64) -> OptionalAxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OptionalAxiomReport::default();
    for (name, values) in &system.quantities {
        let mut anchors = values.clone();
        anchors.sort();
        anchors.dedup();
        let mut pairs = vec![
            (IntervalSet::empty(), IntervalSet::full()),
            (IntervalSet::full(), IntervalSet::empty()),
        ];
        for _ in 0..samples {
            pairs.push((sample_interval_set(&mut rng, &anchors), sample_interval_set(&mut rng, &anchors)));
        }
        for (d1, d2) in pairs {
            let p1 = system.preimage(name, &d1).expect("declared quantity");
            let p2 = system.preimage(name, &d2).expect("declared quantity");
            let pre = |d: &IntervalSet| system.preimage(name, d).expect("declared quantity");
            let checks = [
                ("conjunction", p1.intersection(&p2) == pre(&d1.intersect(&d2))),
                ("disjunction", p1.union(&p2) == pre(&d1.union(&d2))),
                ("negation", p1.complement() == pre(&d1.complement())),
            ];
            for (axiom, holds) in checks {
                report.checked += 1;
                if !holds {
                    report.failures.push(AxiomCheck {
                        quantity: name.clone(),
                        delta1: d1.to_string(),
                        delta2: d2.to_string(),
                        axiom: axiom.to_string(),
                        holds,
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::pl::formula::parse_pl;

    pub(crate) fn fixture() -> ClassicalSystem {
        let mut q = BTreeMap::new();
        q.insert("A".to_string(), vec![Q::from_integer(1), Q::new(5, 2), Q::from_integer(4)]);
        q.insert("B".to_string(), vec![Q::from_integer(0), Q::from_integer(2), Q::new(-1, 3)]);
        ClassicalSystem::new(vec!["s1".into(), "s2".into(), "s3".into()], q).unwrap()
    }

    #[test]
    fn preimages() {
        let sys = fixture();
        let rep = classical_rep(&sys, &Limits::default()).unwrap();
        let f = parse_pl("A in [2,5]").unwrap();
        assert_eq!(sys.state_label(&rep.represent(&f).unwrap()), "{s2,s3}");
        let all = parse_pl("A in (-inf,+inf)").unwrap();
        assert_eq!(rep.represent(&all).unwrap().count(), 3);
        let none = parse_pl("A in {}").unwrap();
        assert!(rep.represent(&none).unwrap().is_empty());
        assert!(matches!(
            rep.represent(&parse_pl("C in [0,1]").unwrap()),
            Err(Error::UnknownQuantity(_))
        ));
    }

    #[test]
    fn truth_values() {
        let sys = fixture();
        let f = parse_pl("A in [2,5]").unwrap();
        assert!(!truth_value(&f, "s1", &sys).unwrap());
        assert!(truth_value(&f, "s2", &sys).unwrap());
        let lem = parse_pl("A in [2,5] | ~A in [2,5]").unwrap();
        for s in sys.states() {
            assert!(truth_value(&lem, s, &sys).unwrap());
        }
        assert!(matches!(truth_value(&f, "s9", &sys), Err(Error::UnknownState(_))));
    }

    #[test]
    fn represent_in_sierpinski() {
        let alg = build_algebra(
            &AlgebraSpec::OpenSets {
                base: vec!["1".into(), "2".into()],
                opens: vec![vec![], vec!["1".into()], vec!["1".into(), "2".into()]],
            },
            &Limits::default(),
        )
        .unwrap();
        let one = alg.find("{1}").unwrap();
        let f = parse_pl("a | ~a").unwrap();
        let v = pl_represent(&f, &alg, &|_| Some(one)).unwrap();
        assert_eq!(alg.label(v), "{1}");
        assert_ne!(v, alg.top());
        let id = parse_pl("a -> a").unwrap();
        assert_eq!(pl_represent(&id, &alg, &|_| Some(one)).unwrap(), alg.top());
        assert!(matches!(pl_represent(&id, &alg, &|_| None), Err(Error::UnassignedPrimitive(_))));
    }

    #[test]
    fn optional_axioms_hold_classically() {
        let r = check_optional_axioms(&fixture(), 50, 7);
        assert!(r.passed());
        assert!(r.checked > 0);
    }

    #[test]
    fn bad_system() {
        let mut q = BTreeMap::new();
        q.insert("A".to_string(), vec![Q::from_integer(1)]);
        assert!(ClassicalSystem::new(vec!["s1".into(), "s2".into()], q).is_err());
    }
}
