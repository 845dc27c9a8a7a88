//! Finite bounded lattices and Heyting algebras.
//!
//! Every algebra is stored as an interned carrier with precomputed
//! `leq`/`meet`/`join` (and, for Heyting algebras, `implies`) tables, so
//! every operation is a table lookup and the laws can be checked
//! exhaustively.

use std::fmt;
use std::ops::Deref;

use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitSet;
use crate::category::{FiniteCategory, Poset};
use crate::error::{Error, Result};
use crate::Limits;

/// Index of an element in a lattice's carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Elem(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: Elem,
    top: Elem,
}

impl BoundedLattice {
    /// Builds a lattice from a partial order given as a predicate on carrier
    /// indices. Meets, joins and bounds are computed from the order.
    pub fn from_order(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        limits: &Limits,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NotALattice("empty carrier".into()));
        }
        if n > limits.carrier {
            return Err(Error::cap(format!("carrier of {n} elements"), limits.carrier));
        }
        let mut table = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = leq(a, b);
            }
        }
        let le = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::NotALattice(format!("`{}` is not ≤ itself", labels[a])));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::NotALattice(format!(
                        "`{}` and `{}` are mutually below each other",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !le(a, b) {
                    continue;
                }
                for c in 0..n {
                    if le(b, c) && !le(a, c) {
                        return Err(Error::NotALattice(format!(
                            "order is not transitive at `{}` ≤ `{}` ≤ `{}`",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&a| (0..n).all(|x| le(a, x)))
            .ok_or_else(|| Error::NotALattice("no least element".into()))?;
        let top = (0..n)
            .find(|&a| (0..n).all(|x| le(x, a)))
            .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let glb = (0..n)
                    .filter(|&c| le(c, a) && le(c, b))
                    .reduce(|best, c| if le(best, c) { c } else { best })
                    .filter(|&g| (0..n).all(|c| !(le(c, a) && le(c, b)) || le(c, g)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!("`{}` and `{}` have no meet", labels[a], labels[b]))
                    })?;
                let lub = (0..n)
                    .filter(|&c| le(a, c) && le(b, c))
                    .reduce(|best, c| if le(c, best) { c } else { best })
                    .filter(|&g| (0..n).all(|c| !(le(a, c) && le(b, c)) || le(g, c)))
                    .ok_or_else(|| {
                        Error::NotALattice(format!("`{}` and `{}` have no join", labels[a], labels[b]))
                    })?;
                meet[a * n + b] = glb as u32;
                meet[b * n + a] = glb as u32;
                join[a * n + b] = lub as u32;
                join[b * n + a] = lub as u32;
            }
        }
        Ok(BoundedLattice {
            labels,
            leq: table,
            meet,
            join,
            bottom: Elem(bottom),
            top: Elem(top),
        })
    }

    /// Assembles a lattice from explicit tables without checking anything.
    /// Use [`BoundedLattice::check_laws`] to audit the result.
    pub fn from_tables(
        labels: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<u32>,
        join: Vec<u32>,
        bottom: Elem,
        top: Elem,
    ) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n * n || meet.len() != n * n || join.len() != n * n {
            return Err(Error::ShapeMismatch(format!("tables must have {} entries", n * n)));
        }
        if meet.iter().chain(&join).any(|&x| x as usize >= n) || bottom.0 >= n || top.0 >= n {
            return Err(Error::ShapeMismatch("table entry outside the carrier".into()));
        }
        Ok(BoundedLattice {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Lattice of a family of subsets ordered by inclusion.
    pub fn from_set_family(labels: Vec<String>, sets: &[BitSet], limits: &Limits) -> Result<Self> {
        BoundedLattice::from_order(labels, |a, b| sets[a].is_subset(&sets[b]), limits)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.len()).map(Elem)
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Result<Elem> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Elem)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.meet[a.0 * self.len() + b.0] as usize)
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.join[a.0 * self.len() + b.0] as usize)
    }

    pub fn check_laws(&self, opts: &LawCheck) -> LawReport {
        check_laws(self, None, opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
    Leq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpValue {
    Element(String),
    Bool(bool),
}

/// Label-level entry point for a single table lookup.
pub fn lattice_op(lattice: &BoundedLattice, op: LatticeOp, a: &str, b: &str) -> Result<OpValue> {
    let (a, b) = (lattice.find(a)?, lattice.find(b)?);
    Ok(match op {
        LatticeOp::Meet => OpValue::Element(lattice.label(lattice.meet(a, b)).to_string()),
        LatticeOp::Join => OpValue::Element(lattice.label(lattice.join(a, b)).to_string()),
        LatticeOp::Leq => OpValue::Bool(lattice.leq(a, b)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeytingAlgebra {
    lattice: BoundedLattice,
    implies: Vec<u32>,
}

impl Deref for HeytingAlgebra {
    type Target = BoundedLattice;

    fn deref(&self) -> &BoundedLattice {
        &self.lattice
    }
}

impl HeytingAlgebra {
    /// Extends a lattice with implication, `a ⇒ b = max{c : c ∧ a ≤ b}`,
    /// found by scanning the carrier. Fails when some maximum does not exist.
    pub fn from_lattice(lattice: BoundedLattice) -> Result<Self> {
        let n = lattice.len();
        let mut implies = vec![0u32; n * n];
        let mut below_a = vec![Elem(0); n];
        for a in lattice.elements() {
            for c in lattice.elements() {
                below_a[c.0] = lattice.meet(c, a);
            }
            for b in lattice.elements() {
                let mut best: Option<Elem> = None;
                for c in lattice.elements() {
                    if lattice.leq(below_a[c.0], b) {
                        best = Some(match best {
                            Some(x) => lattice.join(x, c),
                            None => c,
                        });
                    }
                }
                // best is the join of the candidates; it is the maximum only if it
                // is itself a candidate
                let best = best.expect("bottom is always a candidate");
                if !lattice.leq(lattice.meet(best, a), b) {
                    return Err(Error::NotHeyting(format!(
                        "`{}` ⇒ `{}` has no largest candidate",
                        lattice.label(a),
                        lattice.label(b)
                    )));
                }
                implies[a.0 * n + b.0] = best.0 as u32;
            }
        }
        Ok(HeytingAlgebra { lattice, implies })
    }

    pub fn from_set_family(labels: Vec<String>, sets: &[BitSet], limits: &Limits) -> Result<Self> {
        HeytingAlgebra::from_lattice(BoundedLattice::from_set_family(labels, sets, limits)?)
    }

    pub fn lattice(&self) -> &BoundedLattice {
        &self.lattice
    }

    pub fn implies(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.implies[a.0 * self.len() + b.0] as usize)
    }

    /// Pseudo-complement `a ⇒ 0`.
    pub fn negate(&self, a: Elem) -> Elem {
        self.implies(a, self.bottom())
    }

    pub fn is_boolean(&self) -> bool {
        self.elements()
            .all(|a| self.join(a, self.negate(a)) == self.top())
    }

    pub fn check_laws(&self, opts: &LawCheck) -> LawReport {
        check_laws(&self.lattice, Some(&self.implies), opts)
    }
}

/// Label-level implication.
pub fn heyting_implies(algebra: &HeytingAlgebra, a: &str, b: &str) -> Result<String> {
    let (a, b) = (algebra.find(a)?, algebra.find(b)?);
    Ok(algebra.label(algebra.implies(a, b)).to_string())
}

/// Label-level negation.
pub fn heyting_negate(algebra: &HeytingAlgebra, a: &str) -> Result<String> {
    let a = algebra.find(a)?;
    Ok(algebra.label(algebra.negate(a)).to_string())
}

/// Renders a subset of `names` as `{a,b}` in the order of `names`.
pub fn set_label<S: AsRef<str>>(names: &[S], set: &BitSet) -> String {
    let parts: Vec<&str> = set.iter().map(|i| names[i].as_ref()).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Powerset(Vec<String>),
    OpenSets { base: Vec<String>, opens: Vec<Vec<String>> },
    LowerSets(Poset),
    Sieves { category: FiniteCategory, object: String },
}

/// Builds one of the supported finite Heyting algebras. Elements are
/// subsets (of the base, of the poset, or of the morphisms) and appear in
/// canonical bitmask order.
pub fn build_algebra(spec: &AlgebraSpec, limits: &Limits) -> Result<HeytingAlgebra> {
    match spec {
        AlgebraSpec::Powerset(base) => {
            let n = base.len();
            if n >= usize::BITS as usize || (1usize << n) > limits.carrier {
                return Err(Error::cap(format!("powerset of {n} points"), limits.carrier));
            }
            let sets: Vec<BitSet> = (0..1usize << n)
                .map(|mask| BitSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
                .collect();
            family_algebra(base, sets, limits)
        }
        AlgebraSpec::OpenSets { base, opens } => {
            let n = base.len();
            let mut sets = Vec::new();
            for open in opens {
                let mut s = BitSet::new(n);
                for p in open {
                    let i = base.iter().position(|b| b == p).ok_or_else(|| {
                        Error::InvalidTopology(format!("point `{p}` is not in the base"))
                    })?;
                    s.insert(i);
                }
                sets.push(s);
            }
            sets.sort();
            sets.dedup();
            if sets.len() > limits.carrier {
                return Err(Error::cap(format!("topology of {} opens", sets.len()), limits.carrier));
            }
            if !sets.contains(&BitSet::new(n)) {
                return Err(Error::InvalidTopology("the empty set is not open".into()));
            }
            if !sets.contains(&BitSet::full(n)) {
                return Err(Error::InvalidTopology("the whole space is not open".into()));
            }
            for a in &sets {
                for b in &sets {
                    if sets.binary_search(&a.intersection(b)).is_err() {
                        return Err(Error::InvalidTopology(format!(
                            "not closed under intersection: {} ∩ {}",
                            set_label(base, a),
                            set_label(base, b)
                        )));
                    }
                    if sets.binary_search(&a.union(b)).is_err() {
                        return Err(Error::InvalidTopology(format!(
                            "not closed under union: {} ∪ {}",
                            set_label(base, a),
                            set_label(base, b)
                        )));
                    }
                }
            }
            family_algebra(base, sets, limits)
        }
        AlgebraSpec::LowerSets(poset) => {
            let sets = poset.lower_sets(limits)?;
            family_algebra(poset.elements(), sets, limits)
        }
        AlgebraSpec::Sieves { category, object } => {
            let a = category.object(object)?;
            category.sieve_algebra(a, limits)
        }
    }
}

fn family_algebra(names: &[String], sets: Vec<BitSet>, limits: &Limits) -> Result<HeytingAlgebra> {
    let labels = sets.iter().map(|s| set_label(names, s)).collect();
    HeytingAlgebra::from_set_family(labels, &sets, limits)
}

#[derive(Clone, Debug)]
pub struct LawCheck {
    /// Carriers up to this size are checked over every triple.
    pub exhaustive_limit: usize,
    /// Number of random triples drawn for larger carriers.
    pub samples: usize,
    pub seed: u64,
}

impl Default for LawCheck {
    fn default() -> Self {
        LawCheck {
            exhaustive_limit: 64,
            samples: 200_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    Bottom,
    Top,
    MeetIsGlb,
    JoinIsLub,
    Commutativity,
    Associativity,
    Absorption,
    Distributivity,
    Adjunction,
    DoubleNegation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub carrier: usize,
    pub exhaustive: bool,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

fn check_laws(l: &BoundedLattice, implies: Option<&[u32]>, opts: &LawCheck) -> LawReport {
    let n = l.len();
    let mut violations = Vec::new();
    let mut flag = |law: Law, xs: &[Elem]| {
        violations.push(Violation {
            law,
            witness: xs.iter().map(|e| l.label(*e).to_string()).collect(),
        })
    };
    let imp = |a: Elem, b: Elem| Elem(implies.unwrap()[a.0 * n + b.0] as usize);

    for a in l.elements() {
        if !l.leq(a, a) {
            flag(Law::Reflexivity, &[a]);
        }
        if !l.leq(l.bottom(), a) {
            flag(Law::Bottom, &[a]);
        }
        if !l.leq(a, l.top()) {
            flag(Law::Top, &[a]);
        }
        if implies.is_some() {
            let nn = imp(imp(a, l.bottom()), l.bottom());
            if !l.leq(a, nn) {
                flag(Law::DoubleNegation, &[a]);
            }
        }
    }
    for a in l.elements() {
        for b in l.elements() {
            if a != b && l.leq(a, b) && l.leq(b, a) {
                flag(Law::Antisymmetry, &[a, b]);
            }
            let (m, j) = (l.meet(a, b), l.join(a, b));
            if m != l.meet(b, a) || j != l.join(b, a) {
                flag(Law::Commutativity, &[a, b]);
            }
            if l.meet(a, j) != a || l.join(a, m) != a {
                flag(Law::Absorption, &[a, b]);
            }
            if !(l.leq(m, a) && l.leq(m, b)) {
                flag(Law::MeetIsGlb, &[a, b]);
            }
            if !(l.leq(a, j) && l.leq(b, j)) {
                flag(Law::JoinIsLub, &[a, b]);
            }
        }
    }

    let exhaustive = n <= opts.exhaustive_limit;
    let mut triple = |a: Elem, b: Elem, c: Elem| {
        if l.leq(a, b) && l.leq(b, c) && !l.leq(a, c) {
            flag(Law::Transitivity, &[a, b, c]);
        }
        if l.leq(c, a) && l.leq(c, b) && !l.leq(c, l.meet(a, b)) {
            flag(Law::MeetIsGlb, &[a, b, c]);
        }
        if l.leq(a, c) && l.leq(b, c) && !l.leq(l.join(a, b), c) {
            flag(Law::JoinIsLub, &[a, b, c]);
        }
        if l.meet(l.meet(a, b), c) != l.meet(a, l.meet(b, c))
            || l.join(l.join(a, b), c) != l.join(a, l.join(b, c))
        {
            flag(Law::Associativity, &[a, b, c]);
        }
        if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
            flag(Law::Distributivity, &[a, b, c]);
        }
        if implies.is_some() {
            // c ≤ (a ⇒ b)  iff  c ∧ a ≤ b
            if l.leq(c, imp(a, b)) != l.leq(l.meet(c, a), b) {
                flag(Law::Adjunction, &[c, a, b]);
            }
        }
    };
    let triples_checked = if exhaustive {
        for a in l.elements() {
            for b in l.elements() {
                for c in l.elements() {
                    triple(a, b, c);
                }
            }
        }
        n * n * n
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            triple(Elem(a), Elem(b), Elem(c));
        }
        opts.samples
    };
    LawReport {
        carrier: n,
        exhaustive,
        triples_checked,
        violations,
    }
}

/// A subspace of the rational plane: zero, a ray through a primitive
/// integer direction, or the whole plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace {
    Zero,
    /// Direction in lowest terms with positive first nonzero coordinate.
    Ray(i64, i64),
    Plane,
}

impl Subspace {
    /// The span of a rational vector. The zero vector spans [`Subspace::Zero`].
    pub fn span(x: Ratio<i64>, y: Ratio<i64>) -> Subspace {
        if *x.numer() == 0 && *y.numer() == 0 {
            return Subspace::Zero;
        }
        let l = x.denom().lcm(y.denom());
        let (mut a, mut b) = (*x.numer() * (l / x.denom()), *y.numer() * (l / y.denom()));
        let g = a.gcd(&b);
        a /= g;
        b /= g;
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
        }
        Subspace::Ray(a, b)
    }

    pub fn ray(x: i64, y: i64) -> Subspace {
        Subspace::span(Ratio::from_integer(x), Ratio::from_integer(y))
    }

    pub fn leq(self, other: Subspace) -> bool {
        match (self, other) {
            (Subspace::Zero, _) | (_, Subspace::Plane) => true,
            (a, b) => a == b,
        }
    }

    /// Intersection.
    pub fn meet(self, other: Subspace) -> Subspace {
        match (self, other) {
            (Subspace::Plane, x) | (x, Subspace::Plane) => x,
            (a, b) if a == b => a,
            _ => Subspace::Zero,
        }
    }

    /// Linear span of the union.
    pub fn join(self, other: Subspace) -> Subspace {
        match (self, other) {
            (Subspace::Zero, x) | (x, Subspace::Zero) => x,
            (a, b) if a == b => a,
            _ => Subspace::Plane,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subspace::Zero => write!(f, "0"),
            Subspace::Ray(a, b) => write!(f, "ray({a},{b})"),
            Subspace::Plane => write!(f, "plane"),
        }
    }
}

/// The sub-lattice of subspaces of the plane generated by a set of rays
/// (together with zero and the plane). Bounded lattice only: it is not
/// distributive once it has three distinct rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceLattice2D {
    elements: Vec<Subspace>,
}

impl SubspaceLattice2D {
    pub fn new(rays: impl IntoIterator<Item = Subspace>) -> Self {
        let mut elements: Vec<Subspace> = rays.into_iter().collect();
        elements.push(Subspace::Zero);
        elements.push(Subspace::Plane);
        elements.sort();
        elements.dedup();
        SubspaceLattice2D { elements }
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn elem(&self, s: Subspace) -> Option<Elem> {
        self.elements.iter().position(|x| *x == s).map(Elem)
    }

    pub fn to_lattice(&self) -> BoundedLattice {
        let els = &self.elements;
        let n = els.len();
        let idx = |s: Subspace| els.iter().position(|x| *x == s).unwrap() as u32;
        let mut leq = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in els {
            for b in els {
                leq.push(a.leq(*b));
                meet.push(idx(a.meet(*b)));
                join.push(idx(a.join(*b)));
            }
        }
        BoundedLattice::from_tables(
            els.iter().map(|s| s.to_string()).collect(),
            leq,
            meet,
            join,
            Elem(idx(Subspace::Zero) as usize),
            Elem(idx(Subspace::Plane) as usize),
        )
        .expect("tables are built over the carrier")
    }
}

/// Elements `α` with `α ∨ ¬α` below the top.
pub fn excluded_middle_failures(h: &HeytingAlgebra) -> Vec<Elem> {
    h.elements().filter(|a| h.join(*a, h.negate(*a)) != h.top()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleWitness {
    pub alpha: String,
    pub not_alpha: String,
    pub alpha_or_not_alpha: String,
    pub top: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleCase {
    pub algebra: String,
    pub carrier: usize,
    pub boolean: bool,
    pub witness: Option<MiddleWitness>,
}

fn middle_case(name: &str, h: &HeytingAlgebra) -> MiddleCase {
    let witness = excluded_middle_failures(h).first().map(|a| MiddleWitness {
        alpha: h.label(*a).to_string(),
        not_alpha: h.label(h.negate(*a)).to_string(),
        alpha_or_not_alpha: h.label(h.join(*a, h.negate(*a))).to_string(),
        top: h.label(h.top()).to_string(),
    });
    MiddleCase {
        algebra: name.to_string(),
        carrier: h.len(),
        boolean: witness.is_none(),
        witness,
    }
}

/// Excluded middle in a powerset algebra, in the Sierpinski topology and in
/// the sieves on `q` of the poset `p ≤ q`.
pub fn excluded_middle_demo(limits: &Limits) -> Result<Vec<MiddleCase>> {
    let powerset = build_algebra(&AlgebraSpec::Powerset(vec!["1".into(), "2".into(), "3".into()]), limits)?;
    let sierpinski = build_algebra(
        &AlgebraSpec::OpenSets {
            base: vec!["1".into(), "2".into()],
            opens: vec![vec![], vec!["1".into()], vec!["1".into(), "2".into()]],
        },
        limits,
    )?;
    let two = FiniteCategory::from_poset(&Poset::new(vec!["p".into(), "q".into()], vec![("p".into(), "q".into())]))?;
    let omega_q = build_algebra(
        &AlgebraSpec::Sieves {
            category: two,
            object: "q".into(),
        },
        limits,
    )?;
    Ok(vec![
        middle_case("powerset({1,2,3})", &powerset),
        middle_case("sierpinski", &sierpinski),
        middle_case("sieves on q in p<=q", &omega_q),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excluded_middle_cases() {
        let cases = excluded_middle_demo(&Limits::default()).unwrap();
        assert!(cases[0].boolean);
        let s = cases[1].witness.as_ref().unwrap();
        assert_eq!((s.alpha.as_str(), s.not_alpha.as_str(), s.alpha_or_not_alpha.as_str()), ("{1}", "{}", "{1}"));
        let q = cases[2].witness.as_ref().unwrap();
        assert_eq!(q.alpha, "{i_pq}");
        assert_eq!(q.not_alpha, "{}");
        assert_ne!(q.alpha_or_not_alpha, q.top);
    }

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn powerset(xs: &[&str]) -> HeytingAlgebra {
        build_algebra(&AlgebraSpec::Powerset(names(xs)), &Limits::default()).unwrap()
    }

    fn sierpinski() -> HeytingAlgebra {
        build_algebra(
            &AlgebraSpec::OpenSets {
                base: names(&["1", "2"]),
                opens: vec![vec![], names(&["1"]), names(&["1", "2"])],
            },
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn powerset_meet_and_join() {
        let h = powerset(&["1", "2", "3"]);
        assert_eq!(
            lattice_op(&h, LatticeOp::Meet, "{1,2}", "{2,3}").unwrap(),
            OpValue::Element("{2}".into())
        );
        for x in h.elements() {
            assert_eq!(h.join(h.bottom(), x), x);
        }
        assert_eq!(
            lattice_op(&h, LatticeOp::Leq, "{2}", "{2,3}").unwrap(),
            OpValue::Bool(true)
        );
        assert!(matches!(
            lattice_op(&h, LatticeOp::Join, "{9}", "{}"),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn implication_and_negation() {
        let h = powerset(&["1", "2"]);
        assert_eq!(heyting_implies(&h, "{1}", "{2}").unwrap(), "{2}");
        for a in h.elements() {
            assert_eq!(h.implies(a, a), h.top());
            assert_eq!(h.negate(h.negate(a)), a);
        }
        let h3 = powerset(&["1", "2", "3"]);
        assert_eq!(heyting_negate(&h3, "{1}").unwrap(), "{2,3}");

        let s = sierpinski();
        assert_eq!(heyting_implies(&s, "{1}", "{}").unwrap(), "{}");
        let one = s.find("{1}").unwrap();
        assert_eq!(s.negate(one), s.bottom());
        assert_ne!(s.join(one, s.negate(one)), s.top());
        assert!(!s.is_boolean());
    }

    #[test]
    fn builders() {
        assert_eq!(powerset(&["a", "b"]).len(), 4);
        assert!(powerset(&["a", "b"]).is_boolean());
        let chain = Poset::new(names(&["p", "q"]), vec![("p".into(), "q".into())]);
        let lower = build_algebra(&AlgebraSpec::LowerSets(chain), &Limits::default()).unwrap();
        assert_eq!(lower.labels(), &names(&["{}", "{p}", "{p,q}"])[..]);
        let s = sierpinski();
        assert_eq!(s.len(), 3);
        assert!(!s.is_boolean());
    }

    #[test]
    fn topology_must_be_closed() {
        let bad = AlgebraSpec::OpenSets {
            base: names(&["1", "2"]),
            opens: vec![vec![], names(&["1"]), names(&["2"]), names(&["1", "2"])],
        };
        // discrete topology is fine
        assert!(build_algebra(&bad, &Limits::default()).is_ok());
        let not_closed = AlgebraSpec::OpenSets {
            base: names(&["1", "2", "3"]),
            opens: vec![vec![], names(&["1"]), names(&["2"]), names(&["1", "2", "3"])],
        };
        assert!(matches!(
            build_algebra(&not_closed, &Limits::default()),
            Err(Error::InvalidTopology(_))
        ));
        let no_empty = AlgebraSpec::OpenSets {
            base: names(&["1"]),
            opens: vec![names(&["1"])],
        };
        assert!(matches!(
            build_algebra(&no_empty, &Limits::default()),
            Err(Error::InvalidTopology(_))
        ));
    }

    #[test]
    fn carrier_cap() {
        let limits = Limits {
            carrier: 8,
            ..Limits::default()
        };
        let spec = AlgebraSpec::Powerset(names(&["a", "b", "c", "d"]));
        assert!(matches!(build_algebra(&spec, &limits), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn laws_hold_on_builtins() {
        for h in [powerset(&["1", "2"]), powerset(&["1", "2", "3"]), sierpinski()] {
            let report = h.check_laws(&LawCheck::default());
            assert!(report.passed(), "{:?}", report.violations);
            assert!(report.exhaustive);
        }
    }

    #[test]
    fn randomized_law_check_above_limit() {
        let h = powerset(&["1", "2", "3", "4", "5", "6", "7"]);
        let report = h.check_laws(&LawCheck {
            exhaustive_limit: 64,
            samples: 5000,
            seed: 7,
        });
        assert!(!report.exhaustive);
        assert_eq!(report.triples_checked, 5000);
        assert!(report.passed());
    }

    #[test]
    fn non_distributive_lattice_is_not_heyting() {
        let l = SubspaceLattice2D::new([Subspace::ray(1, 0), Subspace::ray(0, 1), Subspace::ray(1, 1)])
            .to_lattice();
        assert!(matches!(HeytingAlgebra::from_lattice(l), Err(Error::NotHeyting(_))));
    }

    #[test]
    fn subspace_rays_are_canonical() {
        let r = |a: i64, b: i64| Ratio::new(a, b);
        assert_eq!(Subspace::span(r(-2, 1), r(-4, 1)), Subspace::Ray(1, 2));
        assert_eq!(Subspace::span(r(1, 2), r(1, 3)), Subspace::Ray(3, 2));
        assert_eq!(Subspace::span(r(0, 1), r(-5, 7)), Subspace::Ray(0, 1));
        assert_eq!(Subspace::span(r(0, 1), r(0, 1)), Subspace::Zero);
        let (a, b) = (Subspace::ray(1, 0), Subspace::ray(0, 1));
        assert_eq!(a.meet(b), Subspace::Zero);
        assert_eq!(a.join(b), Subspace::Plane);
    }
}
