//! Exhaustive extremal search over level `k` of `[n]`.
//!
//! Two engines share the same work-unit protocol:
//!
//! * [`hereditary`] is an include/exclude branch-and-bound for families with
//!   matching number at most `s` (`s = 1` is "intersecting").
//! * [`union`] handles unions of `r` intersecting families by enumerating the
//!   maximal intersecting families once and then searching `r`-tuples of
//!   them. Any union can be enlarged to a union of maximal families, so this
//!   loses nothing, including for witness collection.
//!
//! Work units are independent subtrees. Each keeps its own incumbent, seeded
//! from a known construction, so results and node counts do not depend on the
//! number of workers or on scheduling.

pub mod bitset;
pub mod canonical;
pub mod coloring;
mod hereditary;
pub mod kneser;
mod union;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binom::{binom, binom_i};
use crate::construction::Construction;
use crate::error::{LabError, Result};
use crate::family::{GroundSet, SetFamily};

use bitset::Bits;
pub use canonical::{canonicalize, CanonicalForm, CANON_MAX};
use kneser::Kneser;

pub const N_SEARCH_MAX: u32 = 14;
pub const PARAM_MAX: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemKind {
    MaxIntersecting { n: u32, k: u32 },
    MaxUnionIntersecting { n: u32, k: u32, r: u32 },
    MaxBoundedMatching { n: u32, k: u32, s: u32 },
}

impl ProblemKind {
    pub fn n(&self) -> u32 {
        match *self {
            ProblemKind::MaxIntersecting { n, .. }
            | ProblemKind::MaxUnionIntersecting { n, .. }
            | ProblemKind::MaxBoundedMatching { n, .. } => n,
        }
    }

    pub fn k(&self) -> u32 {
        match *self {
            ProblemKind::MaxIntersecting { k, .. }
            | ProblemKind::MaxUnionIntersecting { k, .. }
            | ProblemKind::MaxBoundedMatching { k, .. } => k,
        }
    }

    fn validate(&self) -> Result<()> {
        let (n, k) = (self.n(), self.k());
        if n > N_SEARCH_MAX {
            return Err(LabError::GroundTooLarge { n, max: N_SEARCH_MAX });
        }
        if k == 0 || k > n || 2 * k > n + 4 {
            return Err(LabError::param(format!("need 1 ≤ k ≤ min(n, n/2 + 2), got n={n}, k={k}")));
        }
        let p = match *self {
            ProblemKind::MaxIntersecting { .. } => 1,
            ProblemKind::MaxUnionIntersecting { r, .. } => r,
            ProblemKind::MaxBoundedMatching { s, .. } => s,
        };
        if p == 0 || p > PARAM_MAX {
            return Err(LabError::param(format!("r and s must lie in 1..={PARAM_MAX}, got {p}")));
        }
        Ok(())
    }

    /// Size of a known feasible family, used to seed every work unit.
    fn construction_value(&self) -> u64 {
        let (n, k) = (self.n(), self.k());
        let or_value = |r: u32| binom(n, k) - binom_i(n as i64 - r.min(n) as i64, k as i64);
        match *self {
            ProblemKind::MaxIntersecting { .. } => or_value(1).max(binom(n.min(2 * k - 1), k)),
            ProblemKind::MaxUnionIntersecting { r, .. } => or_value(r),
            ProblemKind::MaxBoundedMatching { s, .. } => or_value(s).max(binom(n.min((s + 1) * k - 1), k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub workers: usize,
    pub all_witnesses: bool,
    /// Relabel the ground set before building the branching order:
    /// `relabel[i−1]` is the new name of element `i`.
    pub relabel: Option<Vec<u32>>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: None, max_seconds: None, workers: 1, all_witnesses: false, relabel: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub kind: ProblemKind,
    pub limits: SearchLimits,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub units: usize,
    /// Maximal intersecting families enumerated (union engine only).
    pub maximal_families: u64,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub problem: ProblemKind,
    pub optimum: u64,
    /// Canonical forms of optimal families, sorted and deduplicated. Holds
    /// every optimum when `all_witnesses` was requested, otherwise one.
    pub witnesses: Vec<CanonicalForm>,
    pub complete: bool,
    pub stats: SearchStats,
}

/// Budget shared by the units of one search.
#[derive(Clone, Copy)]
struct Budget {
    nodes: u64,
    deadline: Option<Instant>,
}

impl Budget {
    fn exhausted(&self, nodes: u64) -> bool {
        nodes > self.nodes || (nodes.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d))
    }
}

/// What one work unit found.
#[derive(Default)]
struct UnitResult {
    best: Option<u64>,
    witnesses: Vec<Bits>,
    nodes: u64,
    prunes: u64,
    aborted: bool,
}

impl UnitResult {
    /// Incumbent for pruning: the seed until something better is found.
    fn incumbent(&self, seed: u64) -> u64 {
        self.best.map_or(seed, |b| b.max(seed))
    }

    fn offer(&mut self, size: u64, members: &Bits, all: bool) {
        match self.best {
            Some(b) if size < b => {}
            Some(b) if size == b => {
                if all {
                    self.witnesses.push(members.clone());
                }
            }
            _ => {
                self.best = Some(size);
                self.witnesses.clear();
                self.witnesses.push(members.clone());
            }
        }
    }
}

fn seed_for(value: u64, all: bool) -> u64 {
    // Collecting every optimum keeps ties alive, so the seed itself is a
    // valid incumbent; otherwise units must still be able to find one.
    if all {
        value
    } else {
        value.saturating_sub(1)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| LabError::param(format!("cannot start worker pool: {e}")))
}

fn validate_relabel(n: u32, relabel: &Option<Vec<u32>>) -> Result<()> {
    if let Some(p) = relabel {
        let mut seen = vec![false; n as usize + 1];
        let ok = p.len() == n as usize
            && p.iter().all(|&x| (1..=n).contains(&x) && !std::mem::replace(&mut seen[x as usize], true));
        if !ok {
            return Err(LabError::param("relabel must be a permutation of [n]"));
        }
    }
    Ok(())
}

pub fn solve(problem: &SearchProblem) -> Result<SearchOutcome> {
    let kind = problem.kind;
    kind.validate()?;
    validate_relabel(kind.n(), &problem.limits.relabel)?;
    let start = Instant::now();
    let limits = &problem.limits;
    let budget = Budget {
        nodes: limits.max_nodes.unwrap_or(u64::MAX),
        deadline: limits.max_seconds.map(|s| start + Duration::from_secs_f64(s.max(0.0))),
    };
    let graph = Kneser::new(kind.n(), kind.k(), limits.relabel.as_deref());
    let seed = seed_for(kind.construction_value(), limits.all_witnesses);
    let workers = pool(limits.workers)?;
    let (units, maximal) = match kind {
        ProblemKind::MaxIntersecting { .. } => (hereditary::run(&graph, 1, seed, limits.all_witnesses, budget, &workers), 0),
        ProblemKind::MaxBoundedMatching { s, .. } => {
            (hereditary::run(&graph, s, seed, limits.all_witnesses, budget, &workers), 0)
        }
        ProblemKind::MaxUnionIntersecting { r, .. } => union::run(&graph, r, seed, limits.all_witnesses, budget, &workers)?,
    };
    let mut outcome = merge(kind, &graph, units, limits.all_witnesses, &workers)?;
    outcome.stats.maximal_families = maximal;
    outcome.stats.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(outcome)
}

fn merge(kind: ProblemKind, graph: &Kneser, units: Vec<UnitResult>, all: bool, workers: &rayon::ThreadPool) -> Result<SearchOutcome> {
    let mut stats = SearchStats { units: units.len(), ..SearchStats::default() };
    let mut complete = true;
    let mut optimum = 0;
    for u in &units {
        stats.nodes += u.nodes;
        stats.prunes += u.prunes;
        complete &= !u.aborted;
        optimum = optimum.max(u.best.unwrap_or(0));
    }
    let mut raw: Vec<&Bits> = Vec::new();
    for u in &units {
        if u.best == Some(optimum) {
            raw.extend(u.witnesses.iter());
            if !all {
                break;
            }
        }
    }
    let families: Vec<SetFamily> = raw.into_iter().map(|b| graph.family(b)).collect();
    let witnesses: Vec<CanonicalForm> = if kind.n() <= CANON_MAX {
        let forms: Vec<Result<CanonicalForm>> = workers.install(|| families.par_iter().map(canonicalize).collect());
        let set: BTreeSet<CanonicalForm> = forms.into_iter().collect::<Result<_>>()?;
        set.into_iter().collect()
    } else {
        Vec::new()
    };
    Ok(SearchOutcome { problem: kind, optimum, witnesses, complete, stats })
}

fn search(kind: ProblemKind, limits: &SearchLimits) -> Result<SearchOutcome> {
    solve(&SearchProblem { kind, limits: limits.clone() })
}

pub fn max_intersecting(n: u32, k: u32, limits: &SearchLimits) -> Result<SearchOutcome> {
    search(ProblemKind::MaxIntersecting { n, k }, limits)
}

pub fn max_union_intersecting(n: u32, k: u32, r: u32, limits: &SearchLimits) -> Result<SearchOutcome> {
    search(ProblemKind::MaxUnionIntersecting { n, k, r }, limits)
}

pub fn max_bounded_matching(n: u32, k: u32, s: u32, limits: &SearchLimits) -> Result<SearchOutcome> {
    search(ProblemKind::MaxBoundedMatching { n, k, s }, limits)
}

/// `k < n/2`.
pub fn ekr_regime(n: u32, k: u32) -> bool {
    2 * k < n
}

/// `n > ½(3 + √5)k`, decided in integers: `2n − 3k > 0` and `(2n − 3k)² > 5k²`.
pub fn ff_regime(n: u32, k: u32) -> bool {
    let d = 2 * n as i64 - 3 * k as i64;
    d > 0 && d * d > 5 * (k as i64) * (k as i64)
}

/// `n ≥ (2s + 1)k − s`.
pub fn matching_regime(n: u32, k: u32, s: u32) -> bool {
    n as i64 >= (2 * s as i64 + 1) * k as i64 - s as i64
}

/// Regime in which the union bound `C(n,k) − C(n−r,k)` is proven with an
/// explicit threshold.
pub fn union_regime(n: u32, k: u32, r: u32) -> bool {
    match r {
        1 => ekr_regime(n, k),
        2 => ff_regime(n, k) || matching_regime(n, k, 2),
        _ => matching_regime(n, k, r),
    }
}

/// `C(n,k) − C(n−r,k)`, the level-`k` size of `OR_[r]`.
pub fn or_bound(n: u32, k: u32, r: u32) -> u64 {
    binom(n, k) - binom_i(n as i64 - r as i64, k as i64)
}

/// Canonical form of `OR_[r]` at level `k`.
pub fn or_canonical(n: u32, k: u32, r: u32) -> Result<CanonicalForm> {
    let or = Construction::OrFamily((1..=r).collect()).build(GroundSet::new(n)?)?;
    canonicalize(&or.slice(k)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: u32,
    pub t: u32,
    pub ff_size: u64,
    pub or_bound: u64,
    pub search_optimum: Option<u64>,
    pub search_complete: bool,
    /// A union of `r` intersecting families beat the OR bound at this `n`.
    pub exceeds_or_bound: bool,
    pub in_regime: bool,
}

/// Tabulates the Frankl–Füredi level size against the OR bound and the
/// search optimum. Searches run only when `search` is set and `n` is within
/// the search limits; rows whose `r + t > n` are skipped.
pub fn ff_crossover_scan(
    k: u32,
    r: u32,
    ns: impl IntoIterator<Item = u32>,
    ts: &[u32],
    search: bool,
    limits: &SearchLimits,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let outcome = if search && n <= N_SEARCH_MAX && 2 * k <= n + 4 {
            Some(max_union_intersecting(n, k, r, &SearchLimits { all_witnesses: false, ..limits.clone() })?)
        } else {
            None
        };
        let bound = or_bound(n, k, r);
        for &t in ts {
            if r + t > n {
                continue;
            }
            let ff = Construction::FranklFuredi { r, t }.build(GroundSet::new(n)?)?;
            rows.push(ScanRow {
                n,
                t,
                ff_size: ff.level_count(k),
                or_bound: bound,
                search_optimum: outcome.as_ref().map(|o| o.optimum),
                search_complete: outcome.as_ref().is_some_and(|o| o.complete),
                exceeds_or_bound: outcome.as_ref().is_some_and(|o| o.optimum > bound),
                in_regime: union_regime(n, k, r),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> SearchLimits {
        SearchLimits { all_witnesses: true, workers: 2, ..SearchLimits::default() }
    }

    #[test]
    fn regimes() {
        assert!(ff_regime(6, 2) && !ff_regime(5, 2));
        assert!(ff_regime(8, 3) && !ff_regime(7, 3));
        assert!(matching_regime(8, 2, 2) && !matching_regime(7, 2, 2));
        assert!(!union_regime(7, 2, 3));
    }

    #[test]
    fn small_intersecting() {
        let out = max_intersecting(5, 2, &all()).unwrap();
        assert_eq!(out.optimum, 4);
        assert_eq!(out.witnesses.len(), 1);
        assert_eq!(out.witnesses[0], or_canonical(5, 2, 1).unwrap());
        assert_eq!(max_intersecting(4, 1, &all()).unwrap().optimum, 1);
        assert!(out.complete);
    }

    #[test]
    fn small_union_and_matching() {
        let out = max_union_intersecting(7, 2, 2, &all()).unwrap();
        assert_eq!(out.optimum, 11);
        assert_eq!(out.witnesses, vec![or_canonical(7, 2, 2).unwrap()]);
        let one = max_union_intersecting(6, 2, 1, &all()).unwrap();
        assert_eq!(one.optimum, max_intersecting(6, 2, &all()).unwrap().optimum);
        let m = max_bounded_matching(6, 2, 2, &all()).unwrap();
        assert_eq!(m.optimum, 10);
    }

    #[test]
    fn budget_marks_incomplete() {
        let limits = SearchLimits { max_nodes: Some(3), ..SearchLimits::default() };
        assert!(!max_intersecting(7, 3, &limits).unwrap().complete);
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(max_intersecting(15, 2, &all()).is_err());
        assert!(max_union_intersecting(6, 2, 5, &all()).is_err());
        let bad = SearchLimits { relabel: Some(vec![1, 1, 2, 3, 4]), ..SearchLimits::default() };
        assert!(max_intersecting(5, 2, &bad).is_err());
    }
}
