//! The topos of presheaves on a finite category.
//!
//! A presheaf assigns a finite set of labelled elements to every object and
//! a restriction map `X(f) : X_A → X_B` to every morphism `f : B → A`.
//! Natural transformations, sub-objects and global elements are stored as
//! plain index tables over those stages.

mod search;
mod topos;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::BitSet;
use crate::category::{FiniteCategory, Mor, Obj};
use crate::error::{Error, Result};

pub use search::enumerate_nats;
pub use topos::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FiniteCategory>,
    labels: Vec<Vec<String>>,
    /// Indexed by morphism `f : B → A`; maps `X_A` into `X_B`.
    restrict: Vec<Vec<u32>>,
}

/// Raw description of a presheaf, as read from a project file. Restrictions
/// along identities may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresheafTable {
    /// `(object, element labels)`
    pub stages: Vec<(String, Vec<String>)>,
    /// `(morphism, [(element of X_cod, element of X_dom)])`
    pub restrict: Vec<(String, Vec<(String, String)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type RawMaps = Vec<Vec<Option<u32>>>;

fn resolve_table(
    base: &FiniteCategory,
    table: &PresheafTable,
) -> Result<(Vec<Vec<String>>, RawMaps, Vec<String>)> {
    let mut problems = Vec::new();
    let mut labels: Vec<Option<Vec<String>>> = vec![None; base.objects().len()];
    for (obj, elems) in &table.stages {
        let a = base.object(obj)?;
        if labels[a.0].is_some() {
            return Err(Error::InvalidPresheaf(format!("stage `{obj}` given twice")));
        }
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elems.len() {
            return Err(Error::InvalidPresheaf(format!("duplicate element at stage `{obj}`")));
        }
        labels[a.0] = Some(elems.clone());
    }
    let labels: Vec<Vec<String>> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::InvalidPresheaf(format!("stage `{}` missing", base.objects()[i]))))
        .collect::<Result<_>>()?;
    let mut maps: RawMaps = base
        .morphism_ids()
        .map(|f| vec![None; labels[base.cod(f).0].len()])
        .collect();
    let mut given = vec![false; base.morphisms().len()];
    for (mname, pairs) in &table.restrict {
        let f = base.find_morphism(mname)?;
        if given[f.0] {
            return Err(Error::InvalidPresheaf(format!("restriction along `{mname}` given twice")));
        }
        given[f.0] = true;
        let (b, a) = (base.dom(f), base.cod(f));
        for (from, to) in pairs {
            let x = labels[a.0].iter().position(|l| l == from).ok_or_else(|| {
                Error::InvalidPresheaf(format!(
                    "`{from}` is not an element of stage `{}` (restricting along `{mname}`)",
                    base.object_name(a)
                ))
            })?;
            let y = labels[b.0].iter().position(|l| l == to).ok_or_else(|| {
                Error::InvalidPresheaf(format!(
                    "`{to}` is not an element of stage `{}` (restricting along `{mname}`)",
                    base.object_name(b)
                ))
            })?;
            if maps[f.0][x].is_some_and(|old| old != y as u32) {
                problems.push(format!("restriction along `{mname}` sends `{from}` to two elements"));
            }
            maps[f.0][x] = Some(y as u32);
        }
    }
    for a in base.object_ids() {
        let id = base.identity(a);
        if !given[id.0] {
            maps[id.0] = (0..labels[a.0].len()).map(|x| Some(x as u32)).collect();
        }
    }
    Ok((labels, maps, problems))
}

fn functor_violations(base: &FiniteCategory, labels: &[Vec<String>], maps: &RawMaps) -> Vec<String> {
    let mut out = Vec::new();
    let mut total = true;
    for f in base.morphism_ids() {
        let a = base.cod(f);
        for (x, y) in maps[f.0].iter().enumerate() {
            if y.is_none() {
                total = false;
                out.push(format!(
                    "restriction along `{}` is not defined on `{}`",
                    base.morphism(f).name,
                    labels[a.0][x]
                ));
            }
        }
    }
    if !total {
        return out;
    }
    for a in base.object_ids() {
        let id = base.identity(a);
        for x in 0..labels[a.0].len() {
            if maps[id.0][x] != Some(x as u32) {
                out.push(format!(
                    "restriction along identity `{}` moves `{}`",
                    base.morphism(id).name,
                    labels[a.0][x]
                ));
            }
        }
    }
    // X(f∘g) = X(g)∘X(f) for f : B → A, g : C → B
    for f in base.morphism_ids() {
        for g in base.into_object(base.dom(f)) {
            let fg = base.compose(f, g).unwrap();
            for x in 0..labels[base.cod(f).0].len() {
                let via = maps[g.0][maps[f.0][x].unwrap() as usize];
                if maps[fg.0][x] != via {
                    out.push(format!(
                        "functor law fails: X({}∘{}) ≠ X({})∘X({}) at `{}`",
                        base.morphism(f).name,
                        base.morphism(g).name,
                        base.morphism(g).name,
                        base.morphism(f).name,
                        labels[base.cod(f).0][x]
                    ));
                }
            }
        }
    }
    out
}

/// Exhaustive check of totality and the functor laws.
pub fn validate_presheaf(base: &FiniteCategory, table: &PresheafTable) -> LawReport {
    match resolve_table(base, table) {
        Err(e) => LawReport {
            violations: vec![e.to_string()],
        },
        Ok((labels, maps, mut problems)) => {
            problems.extend(functor_violations(base, &labels, &maps));
            LawReport { violations: problems }
        }
    }
}

impl Presheaf {
    pub fn from_table(base: Arc<FiniteCategory>, table: &PresheafTable) -> Result<Self> {
        let (labels, maps, mut problems) = resolve_table(&base, table)?;
        problems.extend(functor_violations(&base, &labels, &maps));
        if !problems.is_empty() {
            return Err(Error::InvalidPresheaf(problems.join("; ")));
        }
        let restrict = maps
            .into_iter()
            .map(|m| m.into_iter().map(Option::unwrap).collect())
            .collect();
        Ok(Presheaf {
            base,
            labels,
            restrict,
        })
    }

    /// Builds a presheaf from a restriction function, trusting the caller
    /// for functoriality (checked in debug builds).
    pub(crate) fn from_fn(
        base: Arc<FiniteCategory>,
        labels: Vec<Vec<String>>,
        restrict: impl Fn(Mor, usize) -> usize,
    ) -> Self {
        let maps: Vec<Vec<u32>> = base
            .morphism_ids()
            .map(|f| {
                (0..labels[base.cod(f).0].len())
                    .map(|x| restrict(f, x) as u32)
                    .collect()
            })
            .collect();
        let p = Presheaf {
            base,
            labels,
            restrict: maps,
        };
        debug_assert!(
            p.law_violations().is_empty(),
            "{:?}",
            p.law_violations()
        );
        p
    }

    /// A presheaf whose every stage is the same set and every restriction
    /// the identity.
    pub fn constant(base: Arc<FiniteCategory>, elements: &[&str]) -> Self {
        let labels = vec![elements.iter().map(|s| s.to_string()).collect(); base.objects().len()];
        Presheaf::from_fn(base, labels, |_, x| x)
    }

    pub fn law_violations(&self) -> Vec<String> {
        let maps: RawMaps = self
            .restrict
            .iter()
            .map(|m| m.iter().map(|y| Some(*y)).collect())
            .collect();
        functor_violations(&self.base, &self.labels, &maps)
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn same_base(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base == other.base
    }

    pub fn stage(&self, a: Obj) -> &[String] {
        &self.labels[a.0]
    }

    pub fn size(&self, a: Obj) -> usize {
        self.labels[a.0].len()
    }

    pub fn total_size(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn label(&self, a: Obj, x: usize) -> &str {
        &self.labels[a.0][x]
    }

    pub fn find(&self, a: Obj, label: &str) -> Result<usize> {
        self.labels[a.0]
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(format!("{label} at stage {}", self.base.object_name(a))))
    }

    /// `X(f)(x)` for `f : B → A` and `x ∈ X_A`.
    pub fn restrict(&self, f: Mor, x: usize) -> usize {
        self.restrict[f.0][x] as usize
    }

    /// Offsets of each stage in the disjoint union of all stages.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.labels.len());
        let mut acc = 0;
        for l in &self.labels {
            out.push(acc);
            acc += l.len();
        }
        out
    }

    /// Canonical JSON-friendly summary.
    pub fn describe(&self) -> PresheafDescription {
        let base = &self.base;
        PresheafDescription {
            stages: base
                .object_ids()
                .map(|a| (base.object_name(a).to_string(), self.labels[a.0].clone()))
                .collect(),
            restrict: base
                .morphism_ids()
                .filter(|f| base.identity(base.dom(*f)) != *f)
                .map(|f| {
                    let a = base.cod(f);
                    let b = base.dom(f);
                    (
                        base.morphism(f).name.clone(),
                        (0..self.size(a))
                            .map(|x| (self.label(a, x).to_string(), self.label(b, self.restrict(f, x)).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresheafDescription {
    pub stages: Vec<(String, Vec<String>)>,
    pub restrict: Vec<(String, Vec<(String, String)>)>,
}

impl fmt::Display for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self
            .base
            .object_ids()
            .map(|a| format!("{}:{}", self.base.object_name(a), self.size(a)))
            .collect();
        write!(f, "presheaf[{}]", sizes.join(", "))
    }
}

/// A natural transformation between two presheaves on the same base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<u32>>,
}

fn nat_shape(source: &Presheaf, target: &Presheaf, components: &[Vec<u32>]) -> Result<()> {
    if !source.same_base(target) {
        return Err(Error::ShapeMismatch("presheaves live on different categories".into()));
    }
    if components.len() != source.base.objects().len() {
        return Err(Error::ShapeMismatch("one component per object required".into()));
    }
    for a in source.base.object_ids() {
        let c = &components[a.0];
        if c.len() != source.size(a) || c.iter().any(|y| *y as usize >= target.size(a)) {
            return Err(Error::ShapeMismatch(format!(
                "component at `{}` is not a map between the stages",
                source.base.object_name(a)
            )));
        }
    }
    Ok(())
}

fn naturality_violations(source: &Presheaf, target: &Presheaf, components: &[Vec<u32>]) -> Vec<String> {
    let base = &source.base;
    let mut out = Vec::new();
    for f in base.morphism_ids() {
        let (b, a) = (base.dom(f), base.cod(f));
        for x in 0..source.size(a) {
            let down_then_across = components[b.0][source.restrict(f, x)] as usize;
            let across_then_down = target.restrict(f, components[a.0][x] as usize);
            if down_then_across != across_then_down {
                out.push(format!(
                    "square for `{}` fails at `{}`",
                    base.morphism(f).name,
                    source.label(a, x)
                ));
            }
        }
    }
    out
}

/// Shape and naturality check for a candidate family of components.
pub fn validate_nat(source: &Presheaf, target: &Presheaf, components: &[Vec<u32>]) -> LawReport {
    match nat_shape(source, target, components) {
        Err(e) => LawReport {
            violations: vec![e.to_string()],
        },
        Ok(()) => LawReport {
            violations: naturality_violations(source, target, components),
        },
    }
}

impl NatTransform {
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<u32>>) -> Result<Self> {
        nat_shape(&source, &target, &components)?;
        let bad = naturality_violations(&source, &target, &components);
        if !bad.is_empty() {
            return Err(Error::NotNatural(bad.join("; ")));
        }
        Ok(NatTransform {
            source,
            target,
            components,
        })
    }

    pub(crate) fn from_fn(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        component: impl Fn(Obj, usize) -> usize,
    ) -> Self {
        let components = source
            .base
            .object_ids()
            .map(|a| (0..source.size(a)).map(|x| component(a, x) as u32).collect())
            .collect();
        let n = NatTransform {
            source,
            target,
            components,
        };
        debug_assert!(n.validate().passed(), "{:?}", n.validate());
        n
    }

    pub fn identity(x: Arc<Presheaf>) -> Self {
        NatTransform::from_fn(x.clone(), x, |_, e| e)
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn apply(&self, a: Obj, x: usize) -> usize {
        self.components[a.0][x] as usize
    }

    pub fn validate(&self) -> LawReport {
        validate_nat(&self.source, &self.target, &self.components)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NatTransform) -> Result<NatTransform> {
        if *first.target != *self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: {} does not match {}",
                first.target, self.source
            )));
        }
        Ok(NatTransform::from_fn(first.source.clone(), self.target.clone(), |a, x| {
            self.apply(a, first.apply(a, x))
        }))
    }

    /// Same components over a different but index-compatible source.
    pub(crate) fn with_source(&self, source: Arc<Presheaf>) -> NatTransform {
        debug_assert!(source
            .base
            .object_ids()
            .all(|a| source.size(a) == self.source.size(a)));
        NatTransform {
            source,
            target: self.target.clone(),
            components: self.components.clone(),
        }
    }

    pub fn describe(&self) -> Vec<(String, Vec<(String, String)>)> {
        let base = &self.source.base;
        base.object_ids()
            .map(|a| {
                (
                    base.object_name(a).to_string(),
                    (0..self.source.size(a))
                        .map(|x| {
                            (
                                self.source.label(a, x).to_string(),
                                self.target.label(a, self.apply(a, x)).to_string(),
                            )
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// A sub-presheaf, stored as a subset of the disjoint union of the stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subobject {
    ambient: Arc<Presheaf>,
    parts: BitSet,
}

impl Subobject {
    /// `parts[a]` lists the indices of `K_A`.
    pub fn new(ambient: Arc<Presheaf>, parts: &[Vec<usize>]) -> Result<Self> {
        let offsets = ambient.offsets();
        let mut bits = BitSet::new(ambient.total_size());
        for a in ambient.base.object_ids() {
            for &x in parts.get(a.0).map(Vec::as_slice).unwrap_or(&[]) {
                if x >= ambient.size(a) {
                    return Err(Error::InvalidSubobject(format!(
                        "element {x} is outside stage `{}`",
                        ambient.base.object_name(a)
                    )));
                }
                bits.insert(offsets[a.0] + x);
            }
        }
        Subobject::from_bits(ambient, bits)
    }

    pub fn from_labels(ambient: Arc<Presheaf>, parts: &[(&str, Vec<&str>)]) -> Result<Self> {
        let mut idx = vec![Vec::new(); ambient.base.objects().len()];
        for (obj, elems) in parts {
            let a = ambient.base.object(obj)?;
            for e in elems {
                idx[a.0].push(ambient.find(a, e)?);
            }
        }
        Subobject::new(ambient, &idx)
    }

    pub(crate) fn from_bits(ambient: Arc<Presheaf>, parts: BitSet) -> Result<Self> {
        let k = Subobject { ambient, parts };
        let base = k.ambient.base.clone();
        for f in base.morphism_ids() {
            let (b, a) = (base.dom(f), base.cod(f));
            for x in 0..k.ambient.size(a) {
                if k.contains(a, x) && !k.contains(b, k.ambient.restrict(f, x)) {
                    return Err(Error::InvalidSubobject(format!(
                        "`{}` ∈ K_{} restricts along `{}` outside K_{}",
                        k.ambient.label(a, x),
                        base.object_name(a),
                        base.morphism(f).name,
                        base.object_name(b)
                    )));
                }
            }
        }
        Ok(k)
    }

    pub fn whole(ambient: Arc<Presheaf>) -> Self {
        let parts = BitSet::full(ambient.total_size());
        Subobject { ambient, parts }
    }

    pub fn empty(ambient: Arc<Presheaf>) -> Self {
        let parts = BitSet::new(ambient.total_size());
        Subobject { ambient, parts }
    }

    pub fn ambient(&self) -> &Arc<Presheaf> {
        &self.ambient
    }

    pub fn bits(&self) -> &BitSet {
        &self.parts
    }

    pub fn contains(&self, a: Obj, x: usize) -> bool {
        let off: usize = (0..a.0).map(|i| self.ambient.labels[i].len()).sum();
        self.parts.contains(off + x)
    }

    pub fn part(&self, a: Obj) -> Vec<usize> {
        (0..self.ambient.size(a)).filter(|x| self.contains(a, *x)).collect()
    }

    /// `[p:{..}, q:{..}]`
    pub fn label(&self) -> String {
        let base = &self.ambient.base;
        let parts: Vec<String> = base
            .object_ids()
            .map(|a| {
                let els: Vec<&str> = self.part(a).into_iter().map(|x| self.ambient.label(a, x)).collect();
                format!("{}:{{{}}}", base.object_name(a), els.join(","))
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// A choice of one element per stage satisfying the matching condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalElement {
    of: Arc<Presheaf>,
    choice: Vec<usize>,
}

impl GlobalElement {
    pub fn new(of: Arc<Presheaf>, choice: Vec<usize>) -> Result<Self> {
        let base = of.base.clone();
        if choice.len() != base.objects().len() || base.object_ids().any(|a| choice[a.0] >= of.size(a)) {
            return Err(Error::ShapeMismatch("one element per stage required".into()));
        }
        for f in base.morphism_ids() {
            if of.restrict(f, choice[base.cod(f).0]) != choice[base.dom(f).0] {
                return Err(Error::NotNatural(format!(
                    "matching condition fails along `{}`",
                    base.morphism(f).name
                )));
            }
        }
        Ok(GlobalElement { of, choice })
    }

    pub fn of(&self) -> &Arc<Presheaf> {
        &self.of
    }

    pub fn at(&self, a: Obj) -> usize {
        self.choice[a.0]
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    pub fn labels(&self) -> Vec<(String, String)> {
        let base = &self.of.base;
        base.object_ids()
            .map(|a| (base.object_name(a).to_string(), self.of.label(a, self.at(a)).to_string()))
            .collect()
    }

    /// The same data as an arrow `1 → X`.
    pub fn as_arrow(&self, terminal: Arc<Presheaf>) -> NatTransform {
        NatTransform::from_fn(terminal, self.of.clone(), |a, _| self.choice[a.0])
    }
}

/// Index of each element of a family, used to look up restricted elements.
pub(crate) fn index_of<T: std::hash::Hash + Eq + Clone>(items: &[T]) -> HashMap<T, usize> {
    items.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()
}
