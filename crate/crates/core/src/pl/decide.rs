//! Decision procedure for intuitionistic propositional validity:
//! contraction-free sequent search, with finite Kripke countermodels for
//! invalid formulas.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::formula::{Formula, Primitive};
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum P {
    Bot,
    Atom(u32),
    And(Rc<P>, Rc<P>),
    Or(Rc<P>, Rc<P>),
    Imp(Rc<P>, Rc<P>),
}

struct Atoms<'a> {
    ids: HashMap<&'a Primitive, u32>,
}

impl<'a> Atoms<'a> {
    fn lower(&mut self, f: &'a Formula) -> Rc<P> {
        Rc::new(match f {
            Formula::Prim(p) => {
                let next = self.ids.len() as u32;
                P::Atom(*self.ids.entry(p).or_insert(next))
            }
            Formula::Not(a) => P::Imp(self.lower(a), Rc::new(P::Bot)),
            Formula::And(a, b) => P::And(self.lower(a), self.lower(b)),
            Formula::Or(a, b) => P::Or(self.lower(a), self.lower(b)),
            Formula::Implies(a, b) => P::Imp(self.lower(a), self.lower(b)),
        })
    }
}

type Ctx = BTreeSet<Rc<P>>;

struct Prover {
    memo: HashMap<(Ctx, Rc<P>), bool>,
    nodes: usize,
    cap: usize,
}

fn with(ctx: &Ctx, drop: &Rc<P>, add: &[Rc<P>]) -> Ctx {
    let mut c = ctx.clone();
    c.remove(drop);
    c.extend(add.iter().cloned());
    c
}

impl Prover {
    fn prove(&mut self, ctx: Ctx, goal: Rc<P>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::ResourceCap(format!(
                "proof search exceeded {} sequents",
                self.cap
            )));
        }
        let key = (ctx, goal);
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let v = self.step(&key.0, &key.1)?;
        self.memo.insert(key, v);
        Ok(v)
    }

    fn step(&mut self, ctx: &Ctx, goal: &Rc<P>) -> Result<bool> {
        if ctx.contains(&P::Bot) || ctx.contains(goal) {
            return Ok(true);
        }
        match &**goal {
            P::Imp(a, b) => {
                let mut c = ctx.clone();
                c.insert(a.clone());
                return self.prove(c, b.clone());
            }
            P::And(a, b) => {
                return Ok(self.prove(ctx.clone(), a.clone())? && self.prove(ctx.clone(), b.clone())?);
            }
            _ => {}
        }
        for f in ctx {
            match &**f {
                P::And(a, b) => return self.prove(with(ctx, f, &[a.clone(), b.clone()]), goal.clone()),
                P::Or(a, b) => {
                    return Ok(self.prove(with(ctx, f, std::slice::from_ref(a)), goal.clone())?
                        && self.prove(with(ctx, f, std::slice::from_ref(b)), goal.clone())?)
                }
                P::Imp(a, b) => match &**a {
                    P::Atom(_) if ctx.contains(a) => {
                        return self.prove(with(ctx, f, std::slice::from_ref(b)), goal.clone())
                    }
                    P::Bot => return self.prove(with(ctx, f, &[]), goal.clone()),
                    P::And(c, d) => {
                        let curried = Rc::new(P::Imp(c.clone(), Rc::new(P::Imp(d.clone(), b.clone()))));
                        return self.prove(with(ctx, f, &[curried]), goal.clone());
                    }
                    P::Or(c, d) => {
                        let l = Rc::new(P::Imp(c.clone(), b.clone()));
                        let r = Rc::new(P::Imp(d.clone(), b.clone()));
                        return self.prove(with(ctx, f, &[l, r]), goal.clone());
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        if let P::Or(a, b) = &**goal {
            if self.prove(ctx.clone(), a.clone())? || self.prove(ctx.clone(), b.clone())? {
                return Ok(true);
            }
        }
        for f in ctx {
            if let P::Imp(cd, b) = &**f {
                if let P::Imp(_, d) = &**cd {
                    let db = Rc::new(P::Imp(d.clone(), b.clone()));
                    if self.prove(with(ctx, f, &[db]), cd.clone())?
                        && self.prove(with(ctx, f, std::slice::from_ref(b)), goal.clone())?
                    {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// A finite rooted Kripke model; world 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    /// Pairs `(v, w)` with `v < w`.
    pub order: Vec<(String, String)>,
    /// Worlds at which each primitive is forced.
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl KripkeModel {
    fn index(&self, w: &str) -> Option<usize> {
        self.worlds.iter().position(|x| x == w)
    }

    fn leq(&self, v: usize, w: usize) -> bool {
        v == w
            || self
                .order
                .iter()
                .any(|(a, b)| self.index(a) == Some(v) && self.index(b) == Some(w))
    }

    /// Whether the model is a partial order with a monotone valuation.
    pub fn is_valid_model(&self) -> bool {
        let n = self.worlds.len();
        if n == 0 || self.order.iter().any(|(a, b)| self.index(a).is_none() || self.index(b).is_none()) {
            return false;
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && self.leq(u, v) && self.leq(v, u) {
                    return false;
                }
                for w in 0..n {
                    if self.leq(u, v) && self.leq(v, w) && !self.leq(u, w) {
                        return false;
                    }
                }
            }
        }
        self.valuation.values().all(|ws| {
            ws.iter().all(|w| match self.index(w) {
                Some(v) => (0..n).filter(|u| self.leq(v, *u)).all(|u| ws.contains(&self.worlds[u])),
                None => false,
            })
        })
    }

    /// Kripke forcing at `world`, evaluated directly from the clauses.
    pub fn forces(&self, world: usize, f: &Formula) -> bool {
        let n = self.worlds.len();
        match f {
            Formula::Prim(p) => self
                .valuation
                .get(&p.to_string())
                .is_some_and(|ws| ws.contains(&self.worlds[world])),
            Formula::And(a, b) => self.forces(world, a) && self.forces(world, b),
            Formula::Or(a, b) => self.forces(world, a) || self.forces(world, b),
            Formula::Implies(a, b) => (0..n)
                .filter(|v| self.leq(world, *v))
                .all(|v| !self.forces(v, a) || self.forces(v, b)),
            Formula::Not(a) => (0..n).filter(|v| self.leq(world, *v)).all(|v| !self.forces(v, a)),
        }
    }

    /// True when the root fails to force `f`.
    pub fn refutes(&self, f: &Formula) -> bool {
        !self.forces(0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Decision {
    Valid,
    Invalid { countermodel: KripkeModel },
}

impl Decision {
    pub fn is_valid(&self) -> bool {
        matches!(self, Decision::Valid)
    }
}

/// Rooted partial orders on `n` worlds (root 0), one per isomorphism
/// class, as `leq[v]` bitmasks of the worlds above `v`.
fn rooted_posets(n: usize) -> Vec<Vec<u8>> {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut up = vec![0u8; n];
        up[0] = ((1u32 << n) - 1) as u8;
        for (v, u) in up.iter_mut().enumerate().skip(1) {
            *u = 1 << v;
        }
        for (k, (i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[*i] |= 1 << j;
            }
        }
        let antisymmetric = (1..n).all(|i| (1..n).all(|j| i == j || up[i] >> j & 1 == 0 || up[j] >> i & 1 == 0));
        let transitive = (0..n).all(|i| (0..n).all(|j| up[i] >> j & 1 == 0 || up[j] & !up[i] == 0));
        if !antisymmetric || !transitive {
            continue;
        }
        let canon = canonical(&up);
        if seen.insert(canon) {
            out.push(up);
        }
    }
    out
}

fn canonical(up: &[u8]) -> Vec<u8> {
    let n = up.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    permute(&mut perm, 1, &mut |p| {
        let mut img = vec![0u8; n];
        for v in 0..n {
            for w in 0..n {
                if up[v] >> w & 1 == 1 {
                    img[p[v]] |= 1 << p[w];
                }
            }
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap()
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k >= p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn upsets(up: &[u8]) -> Vec<u8> {
    let n = up.len();
    (0..(1u32 << n) as u16)
        .map(|m| m as u8)
        .filter(|m| (0..n).all(|v| m >> v & 1 == 0 || up[v] & !m == 0))
        .collect()
}

fn forced(p: &P, up: &[u8], val: &[u8]) -> u8 {
    match p {
        P::Bot => 0,
        P::Atom(i) => val[*i as usize],
        P::And(a, b) => forced(a, up, val) & forced(b, up, val),
        P::Or(a, b) => forced(a, up, val) | forced(b, up, val),
        P::Imp(a, b) => {
            let (fa, fb) = (forced(a, up, val), forced(b, up, val));
            (0..up.len()).filter(|w| up[*w] & fa & !fb == 0).fold(0, |acc, w| acc | 1 << w)
        }
    }
}

/// Searches rooted Kripke models with at most `max_worlds` worlds (≤ 8) for
/// one whose root does not force `formula`; smaller models are tried first.
pub fn find_countermodel(formula: &Formula, max_worlds: usize, limits: &Limits) -> Result<Option<KripkeModel>> {
    let mut atoms = Atoms { ids: HashMap::new() };
    let p = atoms.lower(formula);
    let mut names: Vec<(&Primitive, u32)> = atoms.ids.iter().map(|(k, v)| (*k, *v)).collect();
    names.sort_by_key(|(_, v)| *v);
    let k = names.len();
    let mut budget = limits.search;
    for n in 1..=max_worlds.min(8) {
        for up in rooted_posets(n) {
            let ups = upsets(&up);
            let mut choice = vec![0usize; k];
            loop {
                if budget == 0 {
                    return Err(Error::ResourceCap("countermodel search budget exhausted".into()));
                }
                budget -= 1;
                let val: Vec<u8> = choice.iter().map(|c| ups[*c]).collect();
                if forced(&p, &up, &val) & 1 == 0 {
                    let worlds: Vec<String> = (0..n).map(|w| format!("w{w}")).collect();
                    let order = (0..n)
                        .flat_map(|v| (0..n).filter(move |w| *w != v).map(move |w| (v, w)))
                        .filter(|(v, w)| up[*v] >> w & 1 == 1)
                        .map(|(v, w)| (worlds[v].clone(), worlds[w].clone()))
                        .collect();
                    let valuation = names
                        .iter()
                        .map(|(prim, i)| {
                            let set = val[*i as usize];
                            (prim.to_string(), (0..n).filter(|w| set >> w & 1 == 1).map(|w| worlds[w].clone()).collect())
                        })
                        .collect();
                    return Ok(Some(KripkeModel {
                        worlds,
                        order,
                        valuation,
                    }));
                }
                let mut i = 0;
                while i < k {
                    choice[i] += 1;
                    if choice[i] < ups.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// Decides intuitionistic validity. Invalid verdicts carry a countermodel
/// with at most four worlds that has been re-checked by direct forcing.
pub fn decide_ipc(formula: &Formula, limits: &Limits) -> Result<Decision> {
    if prove(formula, limits)? {
        return Ok(Decision::Valid);
    }
    match find_countermodel(formula, 4, limits)? {
        Some(m) if m.is_valid_model() && m.refutes(formula) => Ok(Decision::Invalid { countermodel: m }),
        Some(_) => Err(Error::ResourceCap("countermodel failed re-check".into())),
        None => Err(Error::ResourceCap(
            "formula is not provable but has no countermodel with at most 4 worlds".into(),
        )),
    }
}

/// Intuitionistic provability of `formula` by sequent search.
pub fn prove(formula: &Formula, limits: &Limits) -> Result<bool> {
    let mut atoms = Atoms { ids: HashMap::new() };
    let goal = atoms.lower(formula);
    let mut prover = Prover {
        memo: HashMap::new(),
        nodes: 0,
        cap: limits.search,
    };
    prover.prove(Ctx::new(), goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::formula::parse_pl;

    fn decide(s: &str) -> Decision {
        decide_ipc(&parse_pl(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn classics() {
        assert!(decide("a -> a").is_valid());
        assert!(decide("~~(a | ~a)").is_valid());
        assert!(decide("(a -> b) -> ~b -> ~a").is_valid());
        assert!(decide("~~~a -> ~a").is_valid());
        assert!(decide("a & (b | c) -> a & b | a & c").is_valid());
    }

    #[test]
    fn peirce_needs_two_worlds() {
        match decide("((a -> b) -> a) -> a") {
            Decision::Invalid { countermodel } => {
                assert_eq!(countermodel.worlds.len(), 2);
                assert!(countermodel.refutes(&parse_pl("((a -> b) -> a) -> a").unwrap()));
            }
            Decision::Valid => panic!("Peirce's law is not intuitionistic"),
        }
    }

    #[test]
    fn classical_but_not_intuitionistic() {
        for s in ["a | ~a", "~~a -> a", "(a -> b) | (b -> a)", "(~a -> b | c) -> (~a -> b) | (~a -> c)"] {
            assert!(!decide(s).is_valid(), "{s}");
        }
        assert!(!decide("a").is_valid());
    }

    #[test]
    fn poset_counts() {
        // rooted posets up to isomorphism: 1, 1, 2, 5
        let counts: Vec<usize> = (1..=4).map(|n| rooted_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5]);
    }
}
