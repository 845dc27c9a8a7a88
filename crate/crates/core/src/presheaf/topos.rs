//! Topos structure on presheaves: terminal and initial objects, the
//! sub-object classifier, characteristic arrows, products, coproducts,
//! exponentials, power objects and global elements.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::category::{union_closure, FiniteCategory, Mor, Obj, Sieve};
use crate::error::{Error, Result};
use crate::heyting::{BoundedLattice, HeytingAlgebra};
use crate::presheaf::{enumerate_nats, index_of, GlobalElement, NatTransform, Presheaf, Subobject};
use crate::Limits;

/// The terminal presheaf: `{*}` at every stage.
pub fn terminal(base: &Arc<FiniteCategory>) -> Arc<Presheaf> {
    Arc::new(Presheaf::constant(base.clone(), &["*"]))
}

/// The initial presheaf: empty at every stage.
pub fn initial(base: &Arc<FiniteCategory>) -> Arc<Presheaf> {
    Arc::new(Presheaf::constant(base.clone(), &[]))
}

/// The unique arrow `X → 1`.
pub fn to_terminal(x: &Arc<Presheaf>) -> NatTransform {
    NatTransform::from_fn(x.clone(), terminal(x.base()), |_, _| 0)
}

/// Stage-wise disjoint union with its two injections. Elements are
/// labelled `inl(x)` and `inr(y)`.
pub fn coproduct(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<(Arc<Presheaf>, NatTransform, NatTransform)> {
    if !x.same_base(y) {
        return Err(Error::ShapeMismatch("presheaves live on different categories".into()));
    }
    let base = x.base().clone();
    let labels = base
        .object_ids()
        .map(|a| {
            x.stage(a)
                .iter()
                .map(|l| format!("inl({l})"))
                .chain(y.stage(a).iter().map(|l| format!("inr({l})")))
                .collect()
        })
        .collect();
    let sum = Arc::new(Presheaf::from_fn(base.clone(), labels, |f, e| {
        let a = base.cod(f);
        let b = base.dom(f);
        if e < x.size(a) {
            x.restrict(f, e)
        } else {
            x.size(b) + y.restrict(f, e - x.size(a))
        }
    }));
    let inl = NatTransform::from_fn(x.clone(), sum.clone(), |_, e| e);
    let inr = NatTransform::from_fn(y.clone(), sum.clone(), |a, e| x.size(a) + e);
    Ok((sum, inl, inr))
}

/// The sub-object classifier: sieves at every stage, restriction by
/// pulling back.
#[derive(Clone, Debug)]
pub struct Omega {
    presheaf: Arc<Presheaf>,
    sieves: Vec<Vec<Sieve>>,
    index: Vec<HashMap<BitSet, usize>>,
    algebras: Vec<HeytingAlgebra>,
}

impl Omega {
    pub fn new(base: &Arc<FiniteCategory>, limits: &Limits) -> Result<Self> {
        let mut sieves = Vec::new();
        let mut algebras = Vec::new();
        for a in base.object_ids() {
            sieves.push(base.sieves_on(a, limits)?);
            algebras.push(base.sieve_algebra(a, limits)?);
        }
        let index: Vec<HashMap<BitSet, usize>> = sieves
            .iter()
            .map(|ss| index_of(&ss.iter().map(|s| s.members.clone()).collect::<Vec<_>>()))
            .collect();
        let labels = sieves
            .iter()
            .map(|ss| ss.iter().map(|s| base.sieve_label(s)).collect())
            .collect();
        let presheaf = Arc::new(Presheaf::from_fn(base.clone(), labels, |f, i| {
            let a = base.cod(f);
            let pulled = base.pullback_unchecked(f, &sieves[a.0][i]);
            index[base.dom(f).0][&pulled.members]
        }));
        Ok(Omega {
            presheaf,
            sieves,
            index,
            algebras,
        })
    }

    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        self.presheaf.base()
    }

    pub fn sieves(&self, a: Obj) -> &[Sieve] {
        &self.sieves[a.0]
    }

    pub fn sieve(&self, a: Obj, i: usize) -> &Sieve {
        &self.sieves[a.0][i]
    }

    pub fn index_of(&self, s: &Sieve) -> usize {
        self.index[s.target.0][&s.members]
    }

    /// Index of the principal sieve at `a`.
    pub fn top(&self, a: Obj) -> usize {
        self.algebras[a.0].top().0
    }

    /// Index of the empty sieve at `a`.
    pub fn bottom(&self, a: Obj) -> usize {
        self.algebras[a.0].bottom().0
    }

    /// The Heyting algebra of sieves at `a`; its elements are the stage
    /// indices of this presheaf.
    pub fn algebra(&self, a: Obj) -> &HeytingAlgebra {
        &self.algebras[a.0]
    }
}

#[derive(Clone, Debug)]
pub struct ClassifierKit {
    pub terminal: Arc<Presheaf>,
    pub omega: Omega,
    pub true_arrow: NatTransform,
}

pub fn classifier_kit(base: &Arc<FiniteCategory>, limits: &Limits) -> Result<ClassifierKit> {
    let terminal = terminal(base);
    let omega = Omega::new(base, limits)?;
    let true_arrow = NatTransform::from_fn(terminal.clone(), omega.presheaf.clone(), |a, _| omega.top(a));
    Ok(ClassifierKit {
        terminal,
        omega,
        true_arrow,
    })
}

/// `χ_K,A(x) = {f : B → A | X(f)(x) ∈ K_B}`.
pub fn char_morphism(k: &Subobject, omega: &Omega) -> NatTransform {
    let x = k.ambient().clone();
    let base = x.base().clone();
    NatTransform::from_fn(x.clone(), omega.presheaf.clone(), |a, e| {
        let members = base
            .into_object(a)
            .filter(|f| k.contains(base.dom(*f), x.restrict(*f, e)))
            .map(|f| f.0);
        let s = Sieve {
            target: a,
            members: BitSet::from_indices(base.morphisms().len(), members),
        };
        omega.index_of(&s)
    })
}

/// `K_A = χ_A⁻¹(principal sieve)`.
pub fn subobject_of_char(chi: &NatTransform, omega: &Omega) -> Result<Subobject> {
    if **chi.target() != **omega.presheaf() {
        return Err(Error::ShapeMismatch("arrow does not land in Ω".into()));
    }
    let report = chi.validate();
    if !report.passed() {
        return Err(Error::NotNatural(report.violations.join("; ")));
    }
    let x = chi.source().clone();
    let parts: Vec<Vec<usize>> = x
        .base()
        .object_ids()
        .map(|a| (0..x.size(a)).filter(|e| chi.apply(a, *e) == omega.top(a)).collect())
        .collect();
    Subobject::new(x, &parts)
}

/// Every sub-object of `x`, in canonical bitmask order over the disjoint
/// union of the stages.
pub fn subobjects(x: &Arc<Presheaf>, limits: &Limits) -> Result<Vec<Subobject>> {
    let base = x.base();
    let offsets = x.offsets();
    let total = x.total_size();
    let mut generators = Vec::with_capacity(total);
    for a in base.object_ids() {
        for e in 0..x.size(a) {
            let bits = base
                .into_object(a)
                .map(|f| offsets[base.dom(f).0] + x.restrict(f, e));
            generators.push(BitSet::from_indices(total, bits));
        }
    }
    let family = union_closure(BitSet::new(total), &generators, limits.sieves, "sub-object enumeration")?;
    Ok(family
        .into_iter()
        .map(|parts| Subobject::from_bits(x.clone(), parts).expect("unions of generated sub-objects are closed"))
        .collect())
}

fn same_ambient(k: &Subobject, l: &Subobject) -> Result<()> {
    if **k.ambient() != **l.ambient() {
        return Err(Error::ShapeMismatch("sub-objects of different presheaves".into()));
    }
    Ok(())
}

pub fn subobject_meet(k: &Subobject, l: &Subobject) -> Result<Subobject> {
    same_ambient(k, l)?;
    Subobject::from_bits(k.ambient().clone(), k.bits().intersection(l.bits()))
}

pub fn subobject_join(k: &Subobject, l: &Subobject) -> Result<Subobject> {
    same_ambient(k, l)?;
    Subobject::from_bits(k.ambient().clone(), k.bits().union(l.bits()))
}

/// `(K ⇒ L)_A = {x | for all f : B → A, X(f)(x) ∈ K_B implies X(f)(x) ∈ L_B}`.
pub fn subobject_implies(k: &Subobject, l: &Subobject) -> Result<Subobject> {
    same_ambient(k, l)?;
    let x = k.ambient().clone();
    let base = x.base().clone();
    let parts: Vec<Vec<usize>> = base
        .object_ids()
        .map(|a| {
            (0..x.size(a))
                .filter(|e| {
                    base.into_object(a).all(|f| {
                        let (b, y) = (base.dom(f), x.restrict(f, *e));
                        !k.contains(b, y) || l.contains(b, y)
                    })
                })
                .collect()
        })
        .collect();
    Subobject::new(x, &parts)
}

pub fn subobject_negate(k: &Subobject) -> Result<Subobject> {
    subobject_implies(k, &Subobject::empty(k.ambient().clone()))
}

/// `Sub(X)` with its Heyting algebra (generic lattice scan); the `i`-th
/// element of the algebra is `subobjects[i]`.
pub struct SubAlgebra {
    pub subobjects: Vec<Subobject>,
    pub algebra: HeytingAlgebra,
}

impl SubAlgebra {
    pub fn position(&self, k: &Subobject) -> Option<usize> {
        self.subobjects.iter().position(|s| s == k)
    }
}

pub fn sub_heyting(x: &Arc<Presheaf>, limits: &Limits) -> Result<SubAlgebra> {
    let subs = subobjects(x, limits)?;
    let labels = subs.iter().map(Subobject::label).collect();
    let sets: Vec<BitSet> = subs.iter().map(|s| s.bits().clone()).collect();
    let algebra = HeytingAlgebra::from_set_family(labels, &sets, limits)?;
    Ok(SubAlgebra {
        subobjects: subs,
        algebra,
    })
}

/// All arrows `x → y`.
pub fn hom_set(x: &Arc<Presheaf>, y: &Arc<Presheaf>, limits: &Limits) -> Result<Vec<NatTransform>> {
    Ok(enumerate_nats(x, y, limits)?
        .into_iter()
        .map(|components| NatTransform::new(x.clone(), y.clone(), components).expect("enumerated arrows are natural"))
        .collect())
}

/// Every global element `1 → x`, ordered by their stage choices.
pub fn global_elements(x: &Arc<Presheaf>, limits: &Limits) -> Result<Vec<GlobalElement>> {
    let one = terminal(x.base());
    let mut out: Vec<GlobalElement> = enumerate_nats(&one, x, limits)?
        .into_iter()
        .map(|c| GlobalElement::new(x.clone(), c.into_iter().map(|v| v[0] as usize).collect()).expect("matching"))
        .collect();
    out.sort_by(|a, b| a.choice().cmp(b.choice()));
    Ok(out)
}

/// The Heyting algebra of global elements of Ω under stage-wise sieve
/// inclusion; element `i` is `global_elements(Ω)[i]`.
pub fn truth_values(omega: &Omega, limits: &Limits) -> Result<(Vec<GlobalElement>, HeytingAlgebra)> {
    let gammas = global_elements(omega.presheaf(), limits)?;
    let base = omega.base().clone();
    let labels = gammas
        .iter()
        .map(|g| {
            let parts: Vec<String> = g.labels().into_iter().map(|(o, s)| format!("{o}:{s}")).collect();
            format!("[{}]", parts.join(", "))
        })
        .collect();
    let lattice = BoundedLattice::from_order(
        labels,
        |i, j| {
            base.object_ids().all(|a| {
                let alg = omega.algebra(a);
                alg.leq(crate::heyting::Elem(gammas[i].at(a)), crate::heyting::Elem(gammas[j].at(a)))
            })
        },
        limits,
    )?;
    Ok((gammas, HeytingAlgebra::from_lattice(lattice)?))
}

/// A finite product with mixed-radix element indexing: the first factor is
/// the most significant digit. Consequently `∏(X₁..Xₙ, Y)` and
/// `(∏X₁..Xₙ) × Y` index their elements identically.
#[derive(Clone, Debug)]
pub struct Product {
    presheaf: Arc<Presheaf>,
    factors: Vec<Arc<Presheaf>>,
}

impl Product {
    pub fn new(factors: Vec<Arc<Presheaf>>, base: &Arc<FiniteCategory>, limits: &Limits) -> Result<Self> {
        if factors.iter().any(|f| !f.same_base(&Presheaf::constant(base.clone(), &[]))) {
            return Err(Error::ShapeMismatch("factors live on different categories".into()));
        }
        let mut labels = Vec::new();
        for a in base.object_ids() {
            let size = factors
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.size(a)))
                .filter(|s| *s <= limits.stage)
                .ok_or_else(|| Error::cap(format!("product stage `{}`", base.object_name(a)), limits.stage))?;
            let stage: Vec<String> = (0..size)
                .map(|i| {
                    if factors.is_empty() {
                        return "*".to_string();
                    }
                    let coords = digits(&factors, a, i);
                    let parts: Vec<&str> = coords.iter().zip(&factors).map(|(c, f)| f.label(a, *c)).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            labels.push(stage);
        }
        let presheaf = Arc::new(Presheaf::from_fn(base.clone(), labels, |f, i| {
            let (a, b) = (base.cod(f), base.dom(f));
            let coords: Vec<usize> = digits(&factors, a, i)
                .into_iter()
                .zip(&factors)
                .map(|(c, x)| x.restrict(f, c))
                .collect();
            undigits(&factors, b, &coords)
        }));
        Ok(Product { presheaf, factors })
    }

    pub fn binary(x: &Arc<Presheaf>, y: &Arc<Presheaf>, limits: &Limits) -> Result<Self> {
        if !x.same_base(y) {
            return Err(Error::ShapeMismatch("presheaves live on different categories".into()));
        }
        Product::new(vec![x.clone(), y.clone()], x.base(), limits)
    }

    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn factors(&self) -> &[Arc<Presheaf>] {
        &self.factors
    }

    pub fn coords(&self, a: Obj, i: usize) -> Vec<usize> {
        digits(&self.factors, a, i)
    }

    pub fn index(&self, a: Obj, coords: &[usize]) -> usize {
        undigits(&self.factors, a, coords)
    }

    pub fn projection(&self, k: usize) -> NatTransform {
        NatTransform::from_fn(self.presheaf.clone(), self.factors[k].clone(), |a, i| self.coords(a, i)[k])
    }

    /// `⟨f₁, …, fₙ⟩ : Z → ∏Xᵢ`.
    pub fn pairing(&self, arrows: &[NatTransform]) -> Result<NatTransform> {
        if arrows.len() != self.factors.len() {
            return Err(Error::ShapeMismatch("one arrow per factor required".into()));
        }
        let z = match arrows.first() {
            Some(f) => f.source().clone(),
            None => return Err(Error::ShapeMismatch("pairing needs a source; use to_terminal".into())),
        };
        for (f, x) in arrows.iter().zip(&self.factors) {
            if **f.source() != *z || **f.target() != **x {
                return Err(Error::ShapeMismatch("pairing arrows must share a source and hit the factors".into()));
            }
        }
        Ok(NatTransform::from_fn(z, self.presheaf.clone(), |a, e| {
            let coords: Vec<usize> = arrows.iter().map(|f| f.apply(a, e)).collect();
            self.index(a, &coords)
        }))
    }
}

fn digits(factors: &[Arc<Presheaf>], a: Obj, mut i: usize) -> Vec<usize> {
    let mut out = vec![0; factors.len()];
    for (k, f) in factors.iter().enumerate().rev() {
        let n = f.size(a);
        out[k] = i % n;
        i /= n;
    }
    out
}

fn undigits(factors: &[Arc<Presheaf>], a: Obj, coords: &[usize]) -> usize {
    factors
        .iter()
        .zip(coords)
        .fold(0, |acc, (f, c)| acc * f.size(a) + c)
}

/// `f₁ × … × fₙ : ∏Xᵢ → ∏Yᵢ`.
pub fn product_map(source: &Product, target: &Product, arrows: &[NatTransform]) -> Result<NatTransform> {
    if arrows.len() != source.factors.len() || arrows.len() != target.factors.len() {
        return Err(Error::ShapeMismatch("one arrow per factor required".into()));
    }
    for ((f, x), y) in arrows.iter().zip(&source.factors).zip(&target.factors) {
        if **f.source() != **x || **f.target() != **y {
            return Err(Error::ShapeMismatch("arrow does not match its factors".into()));
        }
    }
    Ok(NatTransform::from_fn(source.presheaf.clone(), target.presheaf.clone(), |a, i| {
        let coords: Vec<usize> = source
            .coords(a, i)
            .into_iter()
            .zip(arrows)
            .map(|(c, f)| f.apply(a, c))
            .collect();
        target.index(a, &coords)
    }))
}

/// `δ : T × T → Ω`, the characteristic arrow of the diagonal:
/// `δ_A(s, t) = {f : T(f)(s) = T(f)(t)}`.
pub fn equality_arrow(pair: &Product, omega: &Omega) -> Result<NatTransform> {
    if pair.factors.len() != 2 || *pair.factors[0] != *pair.factors[1] {
        return Err(Error::ShapeMismatch("equality needs a product T × T".into()));
    }
    let t = pair.factors[0].clone();
    let base = t.base().clone();
    Ok(NatTransform::from_fn(pair.presheaf.clone(), omega.presheaf.clone(), |a, i| {
        let c = pair.coords(a, i);
        let members = base
            .into_object(a)
            .filter(|f| t.restrict(*f, c[0]) == t.restrict(*f, c[1]))
            .map(|f| f.0);
        omega.index_of(&Sieve {
            target: a,
            members: BitSet::from_indices(base.morphisms().len(), members),
        })
    }))
}

/// Positions of `(h, x)` pairs, `h : B → A`, `x ∈ X_B`, in the flattened
/// components of an arrow `y_A × X → Y`.
#[derive(Clone, Debug)]
struct Layout {
    /// For each morphism `h` into `A`: offset of its block.
    block: Vec<Option<usize>>,
    len: usize,
}

/// The exponential `Y^X` with `(Y^X)_A = Nat(y_A × X, Y)`, where `y_A` is
/// the presheaf represented by `A`.
#[derive(Clone, Debug)]
pub struct Exponential {
    presheaf: Arc<Presheaf>,
    exponent: Arc<Presheaf>,
    codomain: Arc<Presheaf>,
    layouts: Vec<Layout>,
    elements: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

fn representable(base: &Arc<FiniteCategory>, a: Obj) -> (Arc<Presheaf>, Vec<Vec<Mor>>) {
    let homs: Vec<Vec<Mor>> = base.object_ids().map(|b| base.hom(b, a).collect()).collect();
    let labels = homs
        .iter()
        .map(|hs| hs.iter().map(|h| base.morphism(*h).name.clone()).collect())
        .collect();
    let p = Presheaf::from_fn(base.clone(), labels, |g, i| {
        // g : C → B sends h : B → A to h∘g
        let h = homs[base.cod(g).0][i];
        let hg = base.compose(h, g).unwrap();
        homs[base.dom(g).0].iter().position(|m| *m == hg).unwrap()
    });
    (Arc::new(p), homs)
}

impl Exponential {
    pub fn new(exponent: &Arc<Presheaf>, codomain: &Arc<Presheaf>, limits: &Limits) -> Result<Self> {
        if !exponent.same_base(codomain) {
            return Err(Error::ShapeMismatch("presheaves live on different categories".into()));
        }
        let base = exponent.base().clone();
        let mut layouts = Vec::new();
        let mut elements = Vec::new();
        for a in base.object_ids() {
            let (y_a, homs) = representable(&base, a);
            let prod = Product::binary(&y_a, exponent, limits)?;
            let offsets = prod.presheaf().offsets();
            let mut block = vec![None; base.morphisms().len()];
            for b in base.object_ids() {
                for (k, h) in homs[b.0].iter().enumerate() {
                    block[h.0] = Some(offsets[b.0] + k * exponent.size(b));
                }
            }
            layouts.push(Layout {
                block,
                len: prod.presheaf().total_size(),
            });
            let nats = enumerate_nats(prod.presheaf(), codomain, limits)?;
            if nats.len() > limits.stage {
                return Err(Error::cap(format!("exponential stage `{}`", base.object_name(a)), limits.stage));
            }
            elements.push(nats.into_iter().map(|c| c.concat()).collect::<Vec<Vec<u32>>>());
        }
        let index: Vec<HashMap<Vec<u32>, usize>> = elements.iter().map(|e| index_of(e)).collect();
        let mut exp = Exponential {
            presheaf: Arc::new(Presheaf::constant(base.clone(), &[])),
            exponent: exponent.clone(),
            codomain: codomain.clone(),
            layouts,
            elements,
            index,
        };
        let labels = base
            .object_ids()
            .map(|a| (0..exp.elements[a.0].len()).map(|i| exp.element_label(a, i)).collect())
            .collect();
        exp.presheaf = Arc::new(Presheaf::from_fn(base.clone(), labels, |f, i| exp.restrict_element(f, i)));
        Ok(exp)
    }

    pub fn presheaf(&self) -> &Arc<Presheaf> {
        &self.presheaf
    }

    pub fn exponent(&self) -> &Arc<Presheaf> {
        &self.exponent
    }

    pub fn codomain(&self) -> &Arc<Presheaf> {
        &self.codomain
    }

    fn base(&self) -> &Arc<FiniteCategory> {
        self.exponent.base()
    }

    /// `N_B(h, x)` for the element `N = elem` of stage `A = cod(h)`.
    pub fn value(&self, elem: usize, h: Mor, x: usize) -> usize {
        let a = self.base().cod(h);
        let pos = self.layouts[a.0].block[h.0].expect("h lands in A") + x;
        self.elements[a.0][elem][pos] as usize
    }

    fn lookup(&self, a: Obj, flat: &[u32]) -> usize {
        *self.index[a.0]
            .get(flat)
            .expect("component table of a natural transformation")
    }

    fn restrict_element(&self, f: Mor, i: usize) -> usize {
        // (N·f)_C(h, x) = N_C(f∘h, x) for h : C → B
        let base = self.base().clone();
        let b = base.dom(f);
        let mut flat = vec![0u32; self.layouts[b.0].len];
        for h in base.into_object(b) {
            let fh = base.compose(f, h).unwrap();
            let start = self.layouts[b.0].block[h.0].unwrap();
            for x in 0..self.exponent.size(base.dom(h)) {
                flat[start + x] = self.value(i, fh, x) as u32;
            }
        }
        self.lookup(b, &flat)
    }

    fn element_label(&self, a: Obj, i: usize) -> String {
        let base = self.base();
        let mut parts = Vec::new();
        for h in base.into_object(a) {
            let b = base.dom(h);
            for x in 0..self.exponent.size(b) {
                let v = self.value(i, h, x);
                let arg = if base.identity(b) == h {
                    self.exponent.label(b, x).to_string()
                } else {
                    format!("{}:{}", base.morphism(h).name, self.exponent.label(b, x))
                };
                parts.push(format!("{arg}↦{}", self.codomain.label(b, v)));
            }
        }
        format!("[{}]", parts.join(","))
    }

    /// `ev : X × Y^X → Y`, `ev_A(x, N) = N_A(id_A, x)`.
    pub fn eval_arrow(&self, limits: &Limits) -> Result<(Product, NatTransform)> {
        let prod = Product::binary(&self.exponent, &self.presheaf, limits)?;
        let base = self.base().clone();
        let arrow = NatTransform::from_fn(prod.presheaf().clone(), self.codomain.clone(), |a, i| {
            let c = prod.coords(a, i);
            self.value(c[1], base.identity(a), c[0])
        });
        Ok((prod, arrow))
    }

    /// Transpose of `f : Z × X → Y` (with `Z × X` given as `pair`) to
    /// `Z → Y^X`, `f̂_A(z)_B(h, x) = f_B(Z(h)(z), x)`.
    pub fn transpose(&self, pair: &Product, f: &NatTransform) -> Result<NatTransform> {
        if pair.factors.len() != 2
            || *pair.factors[1] != *self.exponent
            || **f.source() != **pair.presheaf()
            || **f.target() != *self.codomain
        {
            return Err(Error::ShapeMismatch(
                "transpose needs an arrow Z × X → Y matching the exponential".into(),
            ));
        }
        let z = pair.factors[0].clone();
        let base = self.base().clone();
        Ok(NatTransform::from_fn(z.clone(), self.presheaf.clone(), |a, e| {
            let mut flat = vec![0u32; self.layouts[a.0].len];
            for h in base.into_object(a) {
                let b = base.dom(h);
                let zh = z.restrict(h, e);
                let start = self.layouts[a.0].block[h.0].unwrap();
                for x in 0..self.exponent.size(b) {
                    flat[start + x] = f.apply(b, pair.index(b, &[zh, x])) as u32;
                }
            }
            self.lookup(a, &flat)
        }))
    }

    /// Inverse of [`Exponential::transpose`]: `g : Z → Y^X` to
    /// `Z × X → Y`, `f_A(z, x) = g_A(z)_A(id_A, x)`.
    pub fn untranspose(&self, pair: &Product, g: &NatTransform) -> Result<NatTransform> {
        if pair.factors.len() != 2
            || *pair.factors[1] != *self.exponent
            || **g.source() != *pair.factors[0]
            || **g.target() != *self.presheaf
        {
            return Err(Error::ShapeMismatch(
                "untranspose needs an arrow Z → Y^X matching the product".into(),
            ));
        }
        let base = self.base().clone();
        Ok(NatTransform::from_fn(pair.presheaf().clone(), self.codomain.clone(), |a, i| {
            let c = pair.coords(a, i);
            self.value(g.apply(a, c[0]), base.identity(a), c[1])
        }))
    }
}

impl Exponential {
    /// The global element `⌜f⌝ : 1 → Y^X` naming `f : X → Y`.
    pub fn name(&self, f: &NatTransform, limits: &Limits) -> Result<GlobalElement> {
        if **f.source() != *self.exponent || **f.target() != *self.codomain {
            return Err(Error::ShapeMismatch("only arrows X → Y have names in Y^X".into()));
        }
        let one = terminal(self.base());
        let pair = Product::binary(&one, &self.exponent, limits)?;
        let t = self.transpose(&pair, &f.after(&pair.projection(1))?)?;
        GlobalElement::new(self.presheaf.clone(), self.base().object_ids().map(|a| t.apply(a, 0)).collect())
    }
}

pub fn exponential(x: &Arc<Presheaf>, y: &Arc<Presheaf>, limits: &Limits) -> Result<Exponential> {
    Exponential::new(x, y, limits)
}

/// `PX = Ω^X`.
pub fn power_object(x: &Arc<Presheaf>, omega: &Omega, limits: &Limits) -> Result<Exponential> {
    Exponential::new(x, omega.presheaf(), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Poset;
    use crate::presheaf::PresheafTable;

    fn two_point() -> Arc<FiniteCategory> {
        Arc::new(
            FiniteCategory::from_poset(&Poset::new(
                vec!["p".into(), "q".into()],
                vec![("p".into(), "q".into())],
            ))
            .unwrap(),
        )
    }

    fn set_cat() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::terminal())
    }

    fn fixture_x(c: &Arc<FiniteCategory>) -> Arc<Presheaf> {
        let t = PresheafTable {
            stages: vec![
                ("p".into(), vec!["a".into(), "b".into()]),
                ("q".into(), vec!["c".into(), "d".into()]),
            ],
            restrict: vec![("i_pq".into(), vec![("c".into(), "a".into()), ("d".into(), "a".into())])],
        };
        Arc::new(Presheaf::from_table(c.clone(), &t).unwrap())
    }

    #[test]
    fn omega_on_one_object_is_two_valued() {
        let kit = classifier_kit(&set_cat(), &Limits::default()).unwrap();
        assert_eq!(kit.omega.presheaf().size(Obj(0)), 2);
        assert!(kit.true_arrow.validate().passed());
    }

    #[test]
    fn omega_on_two_point_poset() {
        let c = two_point();
        let kit = classifier_kit(&c, &Limits::default()).unwrap();
        let (p, q) = (c.object("p").unwrap(), c.object("q").unwrap());
        let om = kit.omega.presheaf();
        assert_eq!(om.size(q), 3);
        assert_eq!(om.size(p), 2);
        let ipq = c.find_morphism("i_pq").unwrap();
        let s = om.find(q, "{i_pq}").unwrap();
        assert_eq!(om.label(p, om.restrict(ipq, s)), "{id_p}");
        for a in c.object_ids() {
            for i in 0..om.size(a) {
                assert_eq!(om.restrict(c.identity(a), i), i);
            }
        }
        assert!(om.law_violations().is_empty());
        assert_eq!(kit.true_arrow.apply(q, 0), kit.omega.top(q));
    }

    #[test]
    fn characteristic_arrows() {
        let c = two_point();
        let kit = classifier_kit(&c, &Limits::default()).unwrap();
        let one = kit.terminal.clone();
        let (p, q) = (c.object("p").unwrap(), c.object("q").unwrap());
        let om = kit.omega.presheaf();

        let whole = char_morphism(&Subobject::whole(one.clone()), &kit.omega);
        assert_eq!(whole.apply(q, 0), kit.omega.top(q));
        assert_eq!(whole.apply(p, 0), kit.omega.top(p));
        let empty = char_morphism(&Subobject::empty(one.clone()), &kit.omega);
        assert_eq!(empty.apply(q, 0), kit.omega.bottom(q));

        let k = Subobject::from_labels(one.clone(), &[("p", vec!["*"])]).unwrap();
        let chi = char_morphism(&k, &kit.omega);
        assert_eq!(om.label(q, chi.apply(q, 0)), "{i_pq}");
        assert_eq!(om.label(p, chi.apply(p, 0)), "{id_p}");
        assert_eq!(subobject_of_char(&chi, &kit.omega).unwrap(), k);

        let constant_true = kit.true_arrow.after(&to_terminal(&one)).unwrap();
        assert_eq!(subobject_of_char(&constant_true, &kit.omega).unwrap(), Subobject::whole(one.clone()));
        assert_eq!(subobject_of_char(&empty, &kit.omega).unwrap(), Subobject::empty(one));
    }

    #[test]
    fn sub_of_terminal() {
        let c = two_point();
        let one = terminal(&c);
        let sub = sub_heyting(&one, &Limits::default()).unwrap();
        assert_eq!(sub.subobjects.len(), 3);
        let k = Subobject::from_labels(one.clone(), &[("p", vec!["*"])]).unwrap();
        let neg = subobject_negate(&k).unwrap();
        assert_eq!(neg, Subobject::empty(one.clone()));
        assert_ne!(subobject_join(&k, &neg).unwrap(), Subobject::whole(one));

        let set_one = terminal(&set_cat());
        let s = sub_heyting(&set_one, &Limits::default()).unwrap();
        assert_eq!(s.subobjects.len(), 2);
        assert!(s.algebra.is_boolean());
    }

    #[test]
    fn product_sizes_and_projections() {
        let c = two_point();
        let x = fixture_x(&c);
        let one = terminal(&c);
        let prod = Product::binary(&x, &x, &Limits::default()).unwrap();
        for a in c.object_ids() {
            assert_eq!(prod.presheaf().size(a), x.size(a) * x.size(a));
        }
        assert!(prod.projection(0).validate().passed());
        assert!(prod.projection(1).validate().passed());
        let with_one = Product::binary(&x, &one, &Limits::default()).unwrap();
        for a in c.object_ids() {
            assert_eq!(with_one.presheaf().size(a), x.size(a));
        }
    }

    #[test]
    fn set_exponential_sizes() {
        let c = set_cat();
        let x = Arc::new(Presheaf::constant(c.clone(), &["a", "b"]));
        let y = Arc::new(Presheaf::constant(c.clone(), &["0", "1", "2"]));
        let e = exponential(&x, &y, &Limits::default()).unwrap();
        assert_eq!(e.presheaf().size(Obj(0)), 9);
        let kit = classifier_kit(&c, &Limits::default()).unwrap();
        let px = power_object(&x, &kit.omega, &Limits::default()).unwrap();
        assert_eq!(px.presheaf().size(Obj(0)), 4);
    }

    #[test]
    fn global_elements_of_omega() {
        let c = two_point();
        let kit = classifier_kit(&c, &Limits::default()).unwrap();
        let gammas = global_elements(kit.omega.presheaf(), &Limits::default()).unwrap();
        let listed: Vec<Vec<(String, String)>> = gammas.iter().map(|g| g.labels()).collect();
        let pair = |p: &str, q: &str| vec![("p".to_string(), p.to_string()), ("q".to_string(), q.to_string())];
        assert_eq!(
            listed,
            vec![pair("{}", "{}"), pair("{id_p}", "{i_pq}"), pair("{id_p}", "{i_pq,id_q}")]
        );
        assert_eq!(global_elements(&kit.terminal, &Limits::default()).unwrap().len(), 1);
        let sx = Arc::new(Presheaf::constant(set_cat(), &["a", "b", "c"]));
        assert_eq!(global_elements(&sx, &Limits::default()).unwrap().len(), 3);
    }

    #[test]
    fn coproduct_and_initial() {
        let c = two_point();
        let x = fixture_x(&c);
        let zero = initial(&c);
        let (sum, inl, inr) = coproduct(&x, &zero).unwrap();
        assert_eq!(sum.total_size(), x.total_size());
        assert!(inl.validate().passed() && inr.validate().passed());
        let (sum2, _, _) = coproduct(&x, &x).unwrap();
        assert!(sum2.law_violations().is_empty());
        assert_eq!(hom_set(&zero, &x, &Limits::default()).unwrap().len(), 1);
    }
}
