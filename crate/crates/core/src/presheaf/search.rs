//! Enumeration of all natural transformations between two finite presheaves.

use crate::category::Obj;
use crate::error::{Error, Result};
use crate::presheaf::Presheaf;
use crate::Limits;

const UNSET: u32 = u32::MAX;

struct Search<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    offsets: Vec<usize>,
    /// `(stage, element)` for every flat index, in branching order.
    order: Vec<(usize, usize)>,
    values: Vec<u32>,
    trail: Vec<usize>,
    nodes: usize,
    limits: &'a Limits,
    found: Vec<Vec<Vec<u32>>>,
}

impl Search<'_> {
    fn flat(&self, a: usize, x: usize) -> usize {
        self.offsets[a] + x
    }

    /// Assigns `v` to `(a, x)` and forces every restriction of it. Returns
    /// false on conflict; the trail records what to undo either way.
    fn assign(&mut self, a: usize, x: usize, v: u32) -> bool {
        let base = self.source.base().clone();
        let here = self.flat(a, x);
        self.values[here] = v;
        self.trail.push(here);
        for f in base.into_object(Obj(a)) {
            let b = base.dom(f).0;
            let y = self.source.restrict(f, x);
            let w = self.target.restrict(f, v as usize) as u32;
            let slot = self.flat(b, y);
            match self.values[slot] {
                UNSET => {
                    self.values[slot] = w;
                    self.trail.push(slot);
                }
                old if old != w => return false,
                _ => {}
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.values[i] = UNSET;
        }
    }

    fn run(&mut self, pos: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.search {
            return Err(Error::cap("natural transformation search", self.limits.search));
        }
        let Some(next) = (pos..self.order.len()).find(|&i| {
            let (a, x) = self.order[i];
            self.values[self.flat(a, x)] == UNSET
        }) else {
            let comps = self
                .offsets
                .iter()
                .enumerate()
                .map(|(a, off)| self.values[*off..*off + self.source.stage(Obj(a)).len()].to_vec())
                .collect();
            self.found.push(comps);
            if self.found.len() > self.limits.sieves {
                return Err(Error::cap("number of natural transformations", self.limits.sieves));
            }
            return Ok(());
        };
        let (a, x) = self.order[next];
        for v in 0..self.target.size(Obj(a)) as u32 {
            let mark = self.trail.len();
            if self.assign(a, x, v) {
                self.run(next + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Every natural transformation `source → target`, as component tables,
/// in lexicographic order of the branching sequence (stages with more
/// incoming arrows branch first).
pub fn enumerate_nats(source: &Presheaf, target: &Presheaf, limits: &Limits) -> Result<Vec<Vec<Vec<u32>>>> {
    if !source.same_base(target) {
        return Err(Error::ShapeMismatch("presheaves live on different categories".into()));
    }
    let base = source.base();
    let mut stages: Vec<usize> = (0..base.objects().len()).collect();
    stages.sort_by_key(|a| std::cmp::Reverse(base.into_object(Obj(*a)).count()));
    let order = stages
        .iter()
        .flat_map(|&a| (0..source.size(Obj(a))).map(move |x| (a, x)))
        .collect();
    let mut search = Search {
        source,
        target,
        offsets: source.offsets(),
        order,
        values: vec![UNSET; source.total_size()],
        trail: Vec::new(),
        nodes: 0,
        limits,
        found: Vec::new(),
    };
    search.run(0)?;
    Ok(search.found)
}
