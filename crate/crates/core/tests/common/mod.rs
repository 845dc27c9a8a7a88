//! Fixtures and independent oracles shared by the integration tests and the
//! acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use topolog_core::bits::BitSet;
use topolog_core::category::{CategoryTable, FiniteCategory, Mor, Obj, Poset};
use topolog_core::heyting::{build_algebra, AlgebraSpec, HeytingAlgebra};
use topolog_core::ls::{abelian_axiom_pack, Signature, TypeExpr};
use topolog_core::pl::{sample_interval_set, ClassicalSystem, Formula, Q};
use topolog_core::presheaf::{Presheaf, PresheafTable};
use topolog_core::rep::ToposRep;
use topolog_core::Limits;

pub fn poset(elements: &[&str], order: &[(&str, &str)]) -> Poset {
    Poset::new(
        elements.iter().map(|s| s.to_string()).collect(),
        order.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    )
}

/// Small posets: a point, chains, a fork, a join, a diamond and an
/// antichain.
pub fn posets() -> Vec<(&'static str, Poset)> {
    vec![
        ("point", poset(&["p"], &[])),
        ("two", poset(&["p", "q"], &[("p", "q")])),
        ("chain3", poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")])),
        ("vee", poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")])),
        ("wedge", poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")])),
        (
            "diamond",
            poset(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
        ),
        ("chain4", poset(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")])),
        ("antichain", poset(&["a", "b"], &[])),
    ]
}

fn table(objects: &[&str], morphisms: &[(&str, &str, &str)], compose: &[(&str, &str, &str)]) -> CategoryTable {
    let s = |x: &&str| x.to_string();
    CategoryTable {
        objects: objects.iter().map(s).collect(),
        morphisms: morphisms.iter().map(|(a, b, c)| (s(a), s(b), s(c))).collect(),
        identities: Vec::new(),
        compose: compose.iter().map(|(a, b, c)| (s(a), s(b), s(c))).collect(),
    }
}

/// Posets as categories together with a few categories that are not
/// posets: an idempotent, an involution, a parallel pair, and an arrow
/// absorbed by an idempotent.
pub fn categories() -> Vec<(&'static str, Arc<FiniteCategory>)> {
    let mut out: Vec<(&'static str, Arc<FiniteCategory>)> = posets()
        .into_iter()
        .map(|(n, p)| (n, Arc::new(FiniteCategory::from_poset(&p).unwrap())))
        .collect();
    let extra = [
        ("idempotent", table(&["x"], &[("e", "x", "x")], &[("e", "e", "e")])),
        ("involution", table(&["x"], &[("t", "x", "x")], &[("t", "t", "id_x")])),
        ("parallel", table(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")], &[])),
        (
            "absorb",
            table(&["a", "b"], &[("f", "a", "b"), ("e", "b", "b")], &[("e", "f", "f"), ("e", "e", "e")]),
        ),
    ];
    for (n, t) in extra {
        out.push((n, Arc::new(FiniteCategory::from_table(&t).unwrap())));
    }
    out
}

pub fn category(name: &str) -> Arc<FiniteCategory> {
    categories().into_iter().find(|(n, _)| *n == name).unwrap().1
}

/// A random presheaf with at most `max_stage` elements per stage. Maps are
/// drawn at random and then forced along composites; draws that still
/// break functoriality are discarded.
pub fn random_presheaf(base: &Arc<FiniteCategory>, rng: &mut impl Rng, max_stage: usize) -> Arc<Presheaf> {
    let m = base.morphisms().len();
    loop {
        let sizes: Vec<usize> = base.object_ids().map(|_| rng.gen_range(0..=max_stage)).collect();
        let mut maps: Vec<Vec<usize>> = (0..m)
            .map(|i| {
                let f = Mor(i);
                let (dom, cod) = (base.dom(f).0, base.cod(f).0);
                if base.identity(base.cod(f)) == f {
                    (0..sizes[cod]).collect()
                } else if sizes[dom] == 0 {
                    Vec::new()
                } else {
                    (0..sizes[cod]).map(|_| rng.gen_range(0..sizes[dom])).collect()
                }
            })
            .collect();
        if base.object_ids().any(|a| sizes[a.0] > 0 && base.into_object(a).any(|f| sizes[base.dom(f).0] == 0)) {
            continue;
        }
        for _ in 0..4 {
            for f in 0..m {
                for g in 0..m {
                    let (f, g) = (Mor(f), Mor(g));
                    let Some(h) = base.compose(f, g) else { continue };
                    if h == f || h == g {
                        continue;
                    }
                    let forced: Vec<usize> = maps[f.0].iter().map(|&x| maps[g.0][x]).collect();
                    maps[h.0] = forced;
                }
            }
        }
        let t = presheaf_table(base, &sizes, &maps);
        if let Ok(p) = Presheaf::from_table(base.clone(), &t) {
            return Arc::new(p);
        }
    }
}

fn presheaf_table(base: &FiniteCategory, sizes: &[usize], maps: &[Vec<usize>]) -> PresheafTable {
    let label = |a: usize, x: usize| format!("{}{}", base.object_name(Obj(a)), x);
    PresheafTable {
        stages: base
            .object_ids()
            .map(|a| (base.object_name(a).to_string(), (0..sizes[a.0]).map(|x| label(a.0, x)).collect()))
            .collect(),
        restrict: base
            .morphism_ids()
            .map(|f| {
                let (dom, cod) = (base.dom(f).0, base.cod(f).0);
                (
                    base.morphism(f).name.clone(),
                    maps[f.0].iter().enumerate().map(|(x, &y)| (label(cod, x), label(dom, y))).collect(),
                )
            })
            .collect(),
    }
}

/// Sub-presheaves of `x` by brute force over all subsets of its elements.
pub fn count_subpresheaves(x: &Presheaf) -> usize {
    let base = x.base();
    let offsets = x.offsets();
    let total = x.total_size();
    assert!(total <= 20, "brute force is limited to 20 elements");
    (0u32..1 << total)
        .filter(|mask| {
            base.morphism_ids().all(|f| {
                let (b, a) = (base.dom(f), base.cod(f));
                (0..x.size(a)).all(|e| {
                    mask & (1 << (offsets[a.0] + e)) == 0 || mask & (1 << (offsets[b.0] + x.restrict(f, e))) != 0
                })
            })
        })
        .count()
}

/// Independent pullback of a sieve given by its member set:
/// `{h : cod h = dom f, f∘h ∈ S}`.
pub fn pullback_oracle(base: &FiniteCategory, f: Mor, members: &BitSet) -> BitSet {
    let b = base.dom(f);
    BitSet::from_indices(
        base.morphisms().len(),
        base.morphism_ids()
            .filter(|h| base.cod(*h) == b && members.contains(base.compose(f, *h).unwrap().0))
            .map(|h| h.0),
    )
}

/// Every algebra the suites use, with carriers of at most 64 elements.
pub fn algebras(limits: &Limits) -> Vec<(String, HeytingAlgebra)> {
    let names = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
    let mut out = Vec::new();
    for n in 0..=6 {
        out.push((format!("powerset({n})"), build_algebra(&AlgebraSpec::Powerset(names(n)), limits).unwrap()));
    }
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    type Topology = (&'static str, Vec<String>, Vec<Vec<String>>);
    let topologies: Vec<Topology> = vec![
        ("sierpinski", s(&["1", "2"]), vec![s(&[]), s(&["1"]), s(&["1", "2"])]),
        (
            "chain3",
            s(&["1", "2", "3"]),
            vec![s(&[]), s(&["1"]), s(&["1", "2"]), s(&["1", "2", "3"])],
        ),
        (
            "branch",
            s(&["1", "2", "3"]),
            vec![s(&[]), s(&["1"]), s(&["2"]), s(&["1", "2"]), s(&["1", "2", "3"])],
        ),
        ("indiscrete", s(&["1", "2"]), vec![s(&[]), s(&["1", "2"])]),
    ];
    for (n, base, opens) in topologies {
        out.push((format!("open_sets({n})"), build_algebra(&AlgebraSpec::OpenSets { base, opens }, limits).unwrap()));
    }
    for (n, p) in posets() {
        let h = build_algebra(&AlgebraSpec::LowerSets(p), limits).unwrap();
        if h.len() <= 64 {
            out.push((format!("lower_sets({n})"), h));
        }
    }
    for (n, c) in categories() {
        for a in c.objects() {
            let h = build_algebra(
                &AlgebraSpec::Sieves {
                    category: (*c).clone(),
                    object: a.clone(),
                },
                limits,
            )
            .unwrap();
            out.push((format!("sieves({n}, {a})"), h));
        }
    }
    out
}

/// The three-state system with `A = (1, 5/2, 4)` and `B = (0, 2, -1/3)`.
pub fn three_state() -> ClassicalSystem {
    let mut q = BTreeMap::new();
    q.insert("A".to_string(), vec![Q::from_integer(1), Q::new(5, 2), Q::from_integer(4)]);
    q.insert("B".to_string(), vec![Q::from_integer(0), Q::from_integer(2), Q::new(-1, 3)]);
    ClassicalSystem::new(vec!["s1".into(), "s2".into(), "s3".into()], q).unwrap()
}

/// Anchor values for sampling interval sets around the values of `system`.
pub fn anchors(system: &ClassicalSystem) -> Vec<Q> {
    let mut v: Vec<Q> = system.quantities().values().flatten().copied().collect();
    v.sort();
    v.dedup();
    v
}

/// A random formula whose primitives are `A in Δ` or `B in Δ`.
pub fn random_quantity_formula(rng: &mut impl Rng, anchors: &[Q], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let name = if rng.gen() { "A" } else { "B" };
        return Formula::quantity(name, sample_interval_set(rng, anchors));
    }
    let sub = |rng: &mut _| random_quantity_formula(rng, anchors, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

/// A random formula over the atoms `a`, `b`, `c`.
pub fn random_atom_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(["a", "b", "c"][rng.gen_range(0..3)]);
    }
    let sub = |rng: &mut _| random_atom_formula(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

/// Truth at a state, evaluated straight from the value tables.
pub fn classical_oracle(f: &Formula, system: &ClassicalSystem, state: usize) -> bool {
    use topolog_core::pl::Primitive;
    match f {
        Formula::Prim(Primitive::Quantity { name, delta }) => delta.member(system.quantities()[name][state]),
        Formula::Prim(Primitive::Atom(a)) => panic!("atom `{a}` has no classical value"),
        Formula::Not(a) => !classical_oracle(a, system, state),
        Formula::And(a, b) => classical_oracle(a, system, state) && classical_oracle(b, system, state),
        Formula::Or(a, b) => classical_oracle(a, system, state) || classical_oracle(b, system, state),
        Formula::Implies(a, b) => !classical_oracle(a, system, state) || classical_oracle(b, system, state),
    }
}

pub fn two_point() -> Arc<FiniteCategory> {
    Arc::new(FiniteCategory::from_poset(&poset(&["p", "q"], &[("p", "q")])).unwrap())
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// `Σ` on `p ≤ q` with `Σ_p = {u, v, w}` and `Σ_q = {u, v}`.
pub fn two_point_sigma(base: &Arc<FiniteCategory>) -> Arc<Presheaf> {
    let t = PresheafTable {
        stages: vec![
            ("p".into(), vec!["u".into(), "v".into(), "w".into()]),
            ("q".into(), vec!["u".into(), "v".into()]),
        ],
        restrict: vec![("i_pq".into(), pairs(&[("u", "u"), ("v", "v")]))],
    };
    Arc::new(Presheaf::from_table(base.clone(), &t).unwrap())
}

/// `R = Z₃` on `p ≤ q` with quantities `A` and `B`, the abelian pack
/// installed and `+` given by addition mod 3. With `corrupt`, the sum
/// `2 + 2` is set to `0` instead of `1`.
pub fn z3_rep(corrupt: bool) -> ToposRep {
    let base = two_point();
    let sigma = two_point_sigma(&base);
    let r = Arc::new(Presheaf::constant(base.clone(), &["0", "1", "2"]));
    let mut sig = Signature::new(
        Vec::<String>::new(),
        ["A", "B"].map(|n| (n.to_string(), TypeExpr::Sigma, TypeExpr::R)),
    )
    .unwrap();
    let pack = abelian_axiom_pack();
    pack.install(&mut sig).unwrap();
    let grounds = BTreeMap::from([("Sigma".to_string(), sigma), ("R".to_string(), r)]);
    let mut rep = ToposRep::new(sig, base, grounds, &Limits::default()).unwrap();
    let stages = ["p", "q"];
    let per_stage = |rows: Vec<(String, String)>| -> Vec<(String, Vec<(String, String)>)> {
        stages.iter().map(|s| (s.to_string(), rows.clone())).collect()
    };
    let plus: Vec<(String, String)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .map(|(a, b)| {
            let v = if corrupt && (a, b) == (2, 2) { 0 } else { (a + b) % 3 };
            (format!("({a},{b})"), v.to_string())
        })
        .collect();
    rep.assign_symbol_table("+", &per_stage(plus)).unwrap();
    rep.assign_symbol_table("-", &per_stage((0..3).map(|a| (a.to_string(), ((3 - a) % 3).to_string())).collect()))
        .unwrap();
    rep.assign_symbol_table("0", &per_stage(pairs(&[("*", "0")]))).unwrap();
    rep.assign_symbol_table(
        "A",
        &[
            ("p".into(), pairs(&[("u", "0"), ("v", "1"), ("w", "1")])),
            ("q".into(), pairs(&[("u", "0"), ("v", "1")])),
        ],
    )
    .unwrap();
    rep.assign_symbol_table(
        "B",
        &[
            ("p".into(), pairs(&[("u", "2"), ("v", "2"), ("w", "0")])),
            ("q".into(), pairs(&[("u", "2"), ("v", "2")])),
        ],
    )
    .unwrap();
    for (n, s) in pack.sequents {
        rep.add_axiom(&n, s).unwrap();
    }
    rep
}
