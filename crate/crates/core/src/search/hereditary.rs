//! Branch-and-bound for the largest `F ⊆ ([n] choose k)` with matching
//! number at most `s`.
//!
//! Vertices are decided in branching order; the candidate set only ever
//! holds vertices that can still be added. Pairwise disjoint sets form a
//! clique of the disjointness graph and at most `s` of them fit, so a greedy
//! clique partition of the candidates bounds the completion.
//!
//! Every nonempty family has a relabeling containing the first vertex, so
//! the first vertex is always included. Work units are then split by the
//! second member.

use rayon::prelude::*;

use super::bitset::Bits;
use super::kneser::Kneser;
use super::{Budget, UnitResult};

struct Engine<'a> {
    g: &'a Kneser,
    s: u32,
    all: bool,
    seed: u64,
    budget: Budget,
}

pub(super) fn run(g: &Kneser, s: u32, seed: u64, all: bool, budget: Budget, pool: &rayon::ThreadPool) -> Vec<UnitResult> {
    if g.is_empty() {
        return vec![UnitResult { best: Some(0), witnesses: vec![Bits::new(0)], ..UnitResult::default() }];
    }
    let engine = Engine { g, s, all, seed, budget };
    let len = g.len();
    let mut first = Bits::new(len);
    first.insert(0);
    let mut rest = Bits::full(len);
    rest.remove(0);
    let cand0 = engine.admissible(&first, &rest, 0);
    let seconds: Vec<usize> = cand0.iter().collect();
    let unit_count = seconds.len() + 1;
    let per_unit = Budget { nodes: (budget.nodes / unit_count as u64).max(1), ..budget };
    let engine = Engine { budget: per_unit, ..engine };
    let mut units: Vec<UnitResult> = pool.install(|| {
        seconds
            .par_iter()
            .map(|&j| {
                let mut chosen = first.clone();
                chosen.insert(j);
                let mut later = cand0.clone();
                later.clear_below(j + 1);
                let cand = engine.admissible(&chosen, &later, j);
                let mut unit = UnitResult::default();
                let mut members = vec![0, j];
                engine.dfs(&mut unit, &mut chosen, &mut members, cand);
                unit
            })
            .collect()
    });
    // `{v0}` alone, with every other vertex excluded.
    let mut lonely = UnitResult { nodes: 1, ..UnitResult::default() };
    lonely.offer(1, &first, all);
    units.push(lonely);
    units
}

impl Engine<'_> {
    /// Candidates that stay feasible once `v` joins `chosen` (which already
    /// contains `v`).
    fn admissible(&self, chosen: &Bits, cand: &Bits, v: usize) -> Bits {
        let g = self.g;
        let clash = cand.and(&g.disjoint[v]);
        if clash.is_empty() {
            return cand.clone();
        }
        if self.s == 1 {
            return cand.and_not(&clash);
        }
        // `w` breaks the bound iff `v`, `w` and an (s−1)-matching among the
        // older members avoiding both are pairwise disjoint.
        let mut older = chosen.clone();
        older.remove(v);
        let mut out = cand.clone();
        for w in clash.iter() {
            let pool = older.and(&g.disjoint[v]).and(&g.disjoint[w]);
            if has_matching(g, &pool, self.s - 1) {
                out.remove(w);
            }
        }
        out
    }

    fn clique_bound(&self, cand: &Bits) -> u64 {
        let mut rest = cand.clone();
        let mut total = 0u64;
        while let Some(u) = rest.first() {
            rest.remove(u);
            let mut common = rest.and(&self.g.disjoint[u]);
            let mut size = 1u64;
            while let Some(w) = common.first() {
                rest.remove(w);
                common.and_assign(&self.g.disjoint[w]);
                size += 1;
            }
            total += size.min(self.s as u64);
        }
        total
    }

    fn dfs(&self, unit: &mut UnitResult, chosen: &mut Bits, members: &mut Vec<usize>, cand: Bits) {
        unit.nodes += 1;
        if self.budget.exhausted(unit.nodes) {
            unit.aborted = true;
            return;
        }
        let size = members.len() as u64;
        let Some(v) = cand.first() else {
            let incumbent = unit.incumbent(self.seed);
            if size > incumbent || (self.all && size == incumbent) {
                unit.offer(size, chosen, self.all);
            }
            return;
        };
        let bound = size + self.clique_bound(&cand);
        let incumbent = unit.incumbent(self.seed);
        if bound < incumbent || (!self.all && bound <= incumbent) {
            unit.prunes += 1;
            return;
        }
        let mut rest = cand;
        rest.remove(v);
        chosen.insert(v);
        members.push(v);
        let next = self.admissible(chosen, &rest, v);
        self.dfs(unit, chosen, members, next);
        members.pop();
        chosen.remove(v);
        if unit.aborted {
            return;
        }
        self.dfs(unit, chosen, members, rest);
    }
}

/// Whether `pool` contains `t` pairwise disjoint vertices.
fn has_matching(g: &Kneser, pool: &Bits, t: u32) -> bool {
    if t == 0 {
        return true;
    }
    if (pool.count() as u32) < t {
        return false;
    }
    for u in pool.iter() {
        let mut rest = pool.and(&g.disjoint[u]);
        rest.clear_below(u + 1);
        if has_matching(g, &rest, t - 1) {
            return true;
        }
    }
    false
}
