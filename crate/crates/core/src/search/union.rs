//! Largest union of `r` intersecting `k`-uniform families.
//!
//! Each part of an optimal union may be enlarged to a maximal intersecting
//! family without shrinking the union, so it suffices to enumerate maximal
//! intersecting families (maximal cliques of the "sets meet" graph, found by
//! Bron–Kerbosch with pivoting) and search `r`-tuples of them.
//!
//! Families are sorted by decreasing size and tuples are taken in that order,
//! one work unit per leading family, so the size bound cuts whole units.

use rayon::prelude::*;

use crate::error::Result;

use super::bitset::Bits;
use super::kneser::Kneser;
use super::{Budget, UnitResult};

/// Memory allowed for stored maximal families before the enumeration gives up.
const STORE_BYTES: usize = 256 << 20;
const TRUNCATED_UNIT_NODES: u64 = 64;

pub(super) fn run(
    g: &Kneser,
    r: u32,
    seed: u64,
    all: bool,
    budget: Budget,
    pool: &rayon::ThreadPool,
) -> Result<(Vec<UnitResult>, u64)> {
    let len = g.len();
    let meets: Vec<Bits> = (0..len)
        .map(|v| {
            let mut row = Bits::full(len).and_not(&g.disjoint[v]);
            row.remove(v);
            row
        })
        .collect();
    let mut enumeration = UnitResult::default();
    let mut maximal = Vec::new();
    if len > 0 {
        let mut current = Bits::new(len);
        let cap = STORE_BYTES / (len.div_ceil(64) * 8 + 48);
        let mut store = Store { out: &mut maximal, cap };
        bron_kerbosch(&meets, &mut current, Bits::full(len), Bits::new(len), &mut store, &mut enumeration, budget);
    } else {
        maximal.push(Bits::new(0));
    }
    let found = maximal.len() as u64;
    let sizes: Vec<u64> = maximal.iter().map(|m| m.count() as u64).collect();
    let mut order: Vec<usize> = (0..maximal.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));

    let remaining = budget.nodes.saturating_sub(enumeration.nodes);
    // A truncated enumeration cannot prove anything, so tuples only supply a lower bound.
    let share = if enumeration.aborted { TRUNCATED_UNIT_NODES } else { remaining / order.len().max(1) as u64 };
    let per_unit = Budget { nodes: share.max(1), ..budget };
    let search = TupleSearch { maximal: &maximal, sizes: &sizes, seed, all, budget: per_unit };
    let mut units: Vec<UnitResult> = pool.install(|| {
        (0..order.len())
            .into_par_iter()
            .map(|pos| {
                let mut unit = UnitResult::default();
                search.extend(&mut unit, &maximal[order[pos]], &order[pos + 1..], 0, r - 1);
                unit.witnesses.sort();
                unit.witnesses.dedup();
                unit
            })
            .collect()
    });
    // The enumeration itself contributes its node count and abort flag.
    enumeration.best = None;
    units.push(enumeration);
    Ok((units, found))
}

struct Store<'a> {
    out: &'a mut Vec<Bits>,
    cap: usize,
}

fn bron_kerbosch(
    meets: &[Bits],
    current: &mut Bits,
    p: Bits,
    x: Bits,
    out: &mut Store,
    stats: &mut UnitResult,
    budget: Budget,
) {
    stats.nodes += 1;
    if budget.exhausted(stats.nodes) {
        stats.aborted = true;
        return;
    }
    if p.is_empty() {
        if x.is_empty() {
            if out.out.len() >= out.cap {
                stats.aborted = true;
                return;
            }
            out.out.push(current.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.and_count(&meets[u]), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let mut p = p;
    let mut x = x;
    let branch = p.and_not(&meets[pivot]);
    for v in branch.iter() {
        current.insert(v);
        bron_kerbosch(meets, current, p.and(&meets[v]), x.and(&meets[v]), out, stats, budget);
        current.remove(v);
        if stats.aborted {
            return;
        }
        p.remove(v);
        x.insert(v);
    }
}

struct TupleSearch<'a> {
    maximal: &'a [Bits],
    sizes: &'a [u64],
    seed: u64,
    all: bool,
    budget: Budget,
}

impl TupleSearch<'_> {
    /// Adds up to `slots` more families from `partners[start..]` (sizes are
    /// non-increasing along `partners`).
    fn extend(&self, unit: &mut UnitResult, union: &Bits, partners: &[usize], start: usize, slots: u32) {
        unit.nodes += 1;
        if self.budget.exhausted(unit.nodes) {
            unit.aborted = true;
            return;
        }
        let size = union.count() as u64;
        let incumbent = unit.incumbent(self.seed);
        if size > incumbent || (self.all && size == incumbent) {
            unit.offer(size, union, self.all);
        }
        if slots == 0 {
            return;
        }
        for pos in start..partners.len() {
            let fam = partners[pos];
            let bound = size + slots as u64 * self.sizes[fam];
            let incumbent = unit.incumbent(self.seed);
            if bound < incumbent || (!self.all && bound <= incumbent) {
                unit.prunes += 1;
                break;
            }
            let mut next = union.clone();
            next.or_assign(&self.maximal[fam]);
            self.extend(unit, &next, partners, pos + 1, slots - 1);
            if unit.aborted {
                return;
            }
        }
    }
}
