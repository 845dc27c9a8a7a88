//! Finite posets, small categories with explicit composition tables, and
//! sieves.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::heyting::HeytingAlgebra;
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    order: Vec<(String, String)>,
}

impl Poset {
    /// `order` lists generating pairs `(p, q)` meaning `p ≤ q`.
    pub fn new(elements: Vec<String>, order: Vec<(String, String)>) -> Self {
        Poset { elements, order }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    /// Reflexive-transitive closure as an `n × n` table, `[p * n + q]` iff `p ≤ q`.
    pub fn closure(&self) -> Result<Vec<bool>> {
        let n = self.elements.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (p, q) in &self.order {
            let (p, q) = (self.index(p)?, self.index(q)?);
            le[p * n + q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    return Err(Error::Cycle(self.elements[i].clone()));
                }
            }
        }
        Ok(le)
    }

    /// All down-closed subsets in canonical bitmask order.
    pub fn lower_sets(&self, limits: &Limits) -> Result<Vec<BitSet>> {
        let n = self.elements.len();
        let le = self.closure()?;
        let generators: Vec<BitSet> = (0..n)
            .map(|p| BitSet::from_indices(n, (0..n).filter(|&r| le[r * n + p])))
            .collect();
        union_closure(BitSet::new(n), &generators, limits.sieves, "lower-set enumeration")
    }
}

/// Every union of a subfamily of `generators` (including the empty union
/// `empty`), sorted in bitmask order.
pub(crate) fn union_closure(
    empty: BitSet,
    generators: &[BitSet],
    cap: usize,
    what: &str,
) -> Result<Vec<BitSet>> {
    let mut seen: HashSet<BitSet> = HashSet::new();
    seen.insert(empty.clone());
    let mut family = vec![empty];
    for g in generators {
        let mut added = Vec::new();
        for s in &family {
            let u = s.union(g);
            if !seen.contains(&u) {
                seen.insert(u.clone());
                added.push(u);
            }
        }
        family.extend(added);
        if family.len() > cap {
            return Err(Error::cap(what, cap));
        }
    }
    family.sort();
    Ok(family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Obj(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mor(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Raw, unvalidated description of a category, as read from a project file.
/// Identities not listed are added as `id_<object>`, and composites with an
/// identity default to the other factor unless given explicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryTable {
    pub objects: Vec<String>,
    /// `(name, dom, cod)`
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism name)`
    pub identities: Vec<(String, String)>,
    /// `(f, g, f∘g)`
    pub compose: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CategoryReport {
    pub violations: Vec<String>,
}

impl CategoryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Mor>,
    /// `[f * m + g] = f∘g` when `cod(g) = dom(f)`.
    compose: Vec<Option<Mor>>,
}

struct Resolved {
    cat: FiniteCategory,
    problems: Vec<String>,
}

fn resolve(table: &CategoryTable) -> Result<Resolved> {
    let mut problems = Vec::new();
    let objects = table.objects.clone();
    let mut seen = HashSet::new();
    for o in &objects {
        if !seen.insert(o) {
            return Err(Error::InvalidCategory(format!("duplicate object `{o}`")));
        }
    }
    let obj = |name: &str| {
        objects
            .iter()
            .position(|o| o == name)
            .map(Obj)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    };
    let mut morphisms = Vec::new();
    for (name, dom, cod) in &table.morphisms {
        if morphisms.iter().any(|m: &Morphism| &m.name == name) {
            return Err(Error::InvalidCategory(format!("duplicate morphism `{name}`")));
        }
        morphisms.push(Morphism {
            name: name.clone(),
            dom: obj(dom)?,
            cod: obj(cod)?,
        });
    }
    let mut identities = Vec::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        let declared = table.identities.iter().find(|(x, _)| x == o).map(|(_, m)| m.clone());
        let name = declared.clone().unwrap_or_else(|| format!("id_{o}"));
        let id = match morphisms.iter().position(|m| m.name == name) {
            Some(k) => k,
            None if declared.is_some() => return Err(Error::UnknownMorphism(name)),
            None => {
                morphisms.push(Morphism {
                    name,
                    dom: Obj(i),
                    cod: Obj(i),
                });
                morphisms.len() - 1
            }
        };
        if morphisms[id].dom != Obj(i) || morphisms[id].cod != Obj(i) {
            problems.push(format!(
                "identity `{}` of `{o}` is not an endomorphism of `{o}`",
                morphisms[id].name
            ));
        }
        identities.push(Mor(id));
    }
    let m = morphisms.len();
    let mor = |name: &str| {
        morphisms
            .iter()
            .position(|x| x.name == name)
            .map(Mor)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    };
    let mut compose = vec![None; m * m];
    for (f, g, h) in &table.compose {
        let (f, g, h) = (mor(f)?, mor(g)?, mor(h)?);
        if compose[f.0 * m + g.0].is_some_and(|old| old != h) {
            problems.push(format!(
                "conflicting composites for `{}`∘`{}`",
                morphisms[f.0].name, morphisms[g.0].name
            ));
        }
        compose[f.0 * m + g.0] = Some(h);
    }
    for f in 0..m {
        let (d, c) = (morphisms[f].dom, morphisms[f].cod);
        let (idd, idc) = (identities[d.0], identities[c.0]);
        compose[f * m + idd.0].get_or_insert(Mor(f));
        compose[idc.0 * m + f].get_or_insert(Mor(f));
    }
    Ok(Resolved {
        cat: FiniteCategory {
            objects,
            morphisms,
            identities,
            compose,
        },
        problems,
    })
}

/// Exhaustive check of the unit, closure and associativity laws. Name
/// resolution failures are reported as violations too.
pub fn validate_category(table: &CategoryTable) -> CategoryReport {
    match resolve(table) {
        Err(e) => CategoryReport {
            violations: vec![e.to_string()],
        },
        Ok(Resolved { cat, mut problems }) => {
            problems.extend(cat.law_violations());
            CategoryReport { violations: problems }
        }
    }
}

impl FiniteCategory {
    /// Resolves and validates a table.
    pub fn from_table(table: &CategoryTable) -> Result<Self> {
        let Resolved { cat, mut problems } = resolve(table)?;
        problems.extend(cat.law_violations());
        if !problems.is_empty() {
            return Err(Error::InvalidCategory(problems.join("; ")));
        }
        Ok(cat)
    }

    /// The category with one morphism `i_pq : p → q` for every `p ≤ q` in
    /// the reflexive-transitive closure of the order.
    pub fn from_poset(poset: &Poset) -> Result<Self> {
        let le = poset.closure()?;
        let els = poset.elements();
        let n = els.len();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for p in 0..n {
            for q in 0..n {
                if le[p * n + q] {
                    let name = if p == q {
                        format!("id_{}", els[p])
                    } else if els[p].chars().count() == 1 && els[q].chars().count() == 1 {
                        format!("i_{}{}", els[p], els[q])
                    } else {
                        format!("i_{}_{}", els[p], els[q])
                    };
                    index.insert((p, q), Mor(morphisms.len()));
                    morphisms.push(Morphism {
                        name,
                        dom: Obj(p),
                        cod: Obj(q),
                    });
                }
            }
        }
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                let (mf, mg) = (&morphisms[f], &morphisms[g]);
                if mg.cod == mf.dom {
                    compose[f * m + g] = Some(index[&(mg.dom.0, mf.cod.0)]);
                }
            }
        }
        let identities = (0..n).map(|p| index[&(p, p)]).collect();
        Ok(FiniteCategory {
            objects: els.to_vec(),
            morphisms,
            identities,
            compose,
        })
    }

    /// One object `*` with only its identity: presheaves on it are sets.
    pub fn terminal() -> Self {
        FiniteCategory::from_table(&CategoryTable {
            objects: vec!["*".into()],
            ..CategoryTable::default()
        })
        .expect("one-object category is valid")
    }

    fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.morphisms.len();
        let name = |f: Mor| &self.morphisms[f.0].name;
        for f in self.morphism_ids() {
            let mf = self.morphism(f);
            let idd = self.identity(mf.dom);
            let idc = self.identity(mf.cod);
            if self.compose(f, idd) != Some(f) {
                out.push(format!("unit law fails: {}∘{} ≠ {}", name(f), name(idd), name(f)));
            }
            if self.compose(idc, f) != Some(f) {
                out.push(format!("unit law fails: {}∘{} ≠ {}", name(idc), name(f), name(f)));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let (mf, mg) = (&self.morphisms[f], &self.morphisms[g]);
                let entry = self.compose[f * m + g];
                match (mg.cod == mf.dom, entry) {
                    (true, None) => out.push(format!(
                        "composite {}∘{} is missing",
                        mf.name, mg.name
                    )),
                    (false, Some(_)) => out.push(format!(
                        "composite {}∘{} given for non-composable pair",
                        mf.name, mg.name
                    )),
                    (true, Some(h)) => {
                        let mh = self.morphism(h);
                        if mh.dom != mg.dom || mh.cod != mf.cod {
                            out.push(format!(
                                "composite {}∘{} = {} has the wrong domain or codomain",
                                mf.name, mg.name, mh.name
                            ));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in 0..m {
            for g in 0..m {
                let Some(fg) = self.compose[f * m + g] else { continue };
                for h in 0..m {
                    let Some(gh) = self.compose[g * m + h] else { continue };
                    let left = self.compose[fg.0 * m + h];
                    let right = self.compose[f * m + gh.0];
                    if left != right {
                        out.push(format!(
                            "associativity fails for {}, {}, {}",
                            self.morphisms[f].name, self.morphisms[g].name, self.morphisms[h].name
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len()).map(Obj)
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(Obj)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn object_name(&self, a: Obj) -> &str {
        &self.objects[a.0]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = Mor> {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn morphism(&self, f: Mor) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn find_morphism(&self, name: &str) -> Result<Mor> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .map(Mor)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.morphisms[f.0].dom
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.morphisms[f.0].cod
    }

    pub fn identity(&self, a: Obj) -> Mor {
        self.identities[a.0]
    }

    /// `f∘g`, defined when `cod(g) = dom(f)`.
    pub fn compose(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.compose[f.0 * self.morphisms.len() + g.0]
    }

    pub fn into_object(&self, a: Obj) -> impl Iterator<Item = Mor> + '_ {
        self.morphism_ids().filter(move |f| self.cod(*f) == a)
    }

    pub fn hom(&self, b: Obj, a: Obj) -> impl Iterator<Item = Mor> + '_ {
        self.morphism_ids()
            .filter(move |f| self.dom(*f) == b && self.cod(*f) == a)
    }

    pub fn morphism_set_label(&self, set: &BitSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.morphisms[i].name.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn is_sieve_on(&self, a: Obj, members: &BitSet) -> bool {
        members.iter().all(|f| {
            let f = Mor(f);
            self.cod(f) == a
                && self
                    .into_object(self.dom(f))
                    .all(|g| members.contains(self.compose(f, g).unwrap().0))
        })
    }

    /// Checked sieve constructor.
    pub fn sieve(&self, target: Obj, members: impl IntoIterator<Item = Mor>) -> Result<Sieve> {
        let members = BitSet::from_indices(self.morphisms.len(), members.into_iter().map(|f| f.0));
        if !self.is_sieve_on(target, &members) {
            return Err(Error::NotASieve(format!(
                "{} on {}",
                self.morphism_set_label(&members),
                self.object_name(target)
            )));
        }
        Ok(Sieve { target, members })
    }

    /// All morphisms with codomain `b`.
    pub fn principal_sieve(&self, b: Obj) -> Sieve {
        Sieve {
            target: b,
            members: BitSet::from_indices(self.morphisms.len(), self.into_object(b).map(|f| f.0)),
        }
    }

    pub fn empty_sieve(&self, a: Obj) -> Sieve {
        Sieve {
            target: a,
            members: BitSet::new(self.morphisms.len()),
        }
    }

    /// The sieve generated by a single morphism: `{f∘g}` over all `g`.
    pub fn generated_sieve(&self, f: Mor) -> Sieve {
        let members = self
            .into_object(self.dom(f))
            .map(|g| self.compose(f, g).unwrap().0);
        Sieve {
            target: self.cod(f),
            members: BitSet::from_indices(self.morphisms.len(), members),
        }
    }

    /// Every sieve on `a`, in canonical bitmask order.
    pub fn sieves_on(&self, a: Obj, limits: &Limits) -> Result<Vec<Sieve>> {
        let generators: Vec<BitSet> = self
            .into_object(a)
            .map(|f| self.generated_sieve(f).members)
            .collect();
        let family = union_closure(
            BitSet::new(self.morphisms.len()),
            &generators,
            limits.sieves,
            format!("sieve enumeration on `{}`", self.object_name(a)).as_str(),
        )?;
        Ok(family
            .into_iter()
            .map(|members| Sieve { target: a, members })
            .collect())
    }

    /// `f*(S) = {h : f∘h ∈ S}` for `f : B → A` and `S` a sieve on `A`.
    pub fn pullback_sieve(&self, f: Mor, s: &Sieve) -> Result<Sieve> {
        if s.target != self.cod(f) || !self.is_sieve_on(s.target, &s.members) {
            return Err(Error::NotASieve(format!(
                "{} is not a sieve on the codomain of {}",
                self.morphism_set_label(&s.members),
                self.morphism(f).name
            )));
        }
        Ok(self.pullback_unchecked(f, s))
    }

    pub(crate) fn pullback_unchecked(&self, f: Mor, s: &Sieve) -> Sieve {
        let b = self.dom(f);
        let members = self
            .into_object(b)
            .filter(|h| s.members.contains(self.compose(f, *h).unwrap().0))
            .map(|h| h.0);
        Sieve {
            target: b,
            members: BitSet::from_indices(self.morphisms.len(), members),
        }
    }

    /// `S₁ ⇒ S₂ = {f : for all g, f∘g ∈ S₁ implies f∘g ∈ S₂}`, evaluated
    /// directly rather than through the lattice tables.
    pub fn sieve_implies(&self, s1: &Sieve, s2: &Sieve) -> Sieve {
        let a = s1.target;
        let members = self.into_object(a).filter(|f| {
            self.into_object(self.dom(*f)).all(|g| {
                let fg = self.compose(*f, g).unwrap().0;
                !s1.members.contains(fg) || s2.members.contains(fg)
            })
        });
        Sieve {
            target: a,
            members: BitSet::from_indices(self.morphisms.len(), members.map(|f| f.0)),
        }
    }

    /// `¬S = {f : for all g, f∘g ∉ S}`.
    pub fn sieve_negate(&self, s: &Sieve) -> Sieve {
        let members = self.into_object(s.target).filter(|f| {
            self.into_object(self.dom(*f))
                .all(|g| !s.members.contains(self.compose(*f, g).unwrap().0))
        });
        Sieve {
            target: s.target,
            members: BitSet::from_indices(self.morphisms.len(), members.map(|f| f.0)),
        }
    }

    /// The Heyting algebra of sieves on `a` under inclusion; elements are
    /// in the same order as [`FiniteCategory::sieves_on`].
    pub fn sieve_algebra(&self, a: Obj, limits: &Limits) -> Result<HeytingAlgebra> {
        let sieves = self.sieves_on(a, limits)?;
        let labels = sieves.iter().map(|s| self.sieve_label(s)).collect();
        let sets: Vec<BitSet> = sieves.into_iter().map(|s| s.members).collect();
        HeytingAlgebra::from_set_family(labels, &sets, limits)
    }

    pub fn sieve_label(&self, s: &Sieve) -> String {
        self.morphism_set_label(&s.members)
    }

    /// Objects below `a` in a thin category, i.e. the domains of arrows into `a`.
    pub fn down_set(&self, a: Obj) -> BTreeSet<Obj> {
        self.into_object(a).map(|f| self.dom(f)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub target: Obj,
    pub members: BitSet,
}

impl Sieve {
    pub fn contains(&self, f: Mor) -> bool {
        self.members.contains(f.0)
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects and {} morphisms",
            self.objects.len(),
            self.morphisms.len()
        )
    }
}
