//! Cross-intersecting families: Hilton's bound, the linear-combination bound
//! on a cross-intersecting pair, and the pointwise indicator inequality for a
//! union of `r` families.
//!
//! The exhaustive probes only visit *shifted* families. A shift `S_ij`
//! applied to both members of a cross-intersecting pair keeps them
//! cross-intersecting and keeps both sizes, so every optimum over all
//! families is also attained by a shifted one.

use rug::Rational;
use serde::Serialize;

use crate::binom::{binom, binom_i};
use crate::error::{LabError, Result};
use crate::family::{elements_of, full_mask, GroundSet, Mask, SetFamily};
use crate::rational::fmt_rational;
use crate::shadows::level_masks;
use crate::verdict::{CheckOutcome, Verdict};

/// Errors unless every member of `f` has exactly `k` elements.
pub fn require_level(f: &SetFamily, k: u32) -> Result<()> {
    if k > f.n() {
        return Err(LabError::LevelOutOfRange { level: k, n: f.n() });
    }
    match f.uniform_level()? {
        Some(level) if level != k => Err(LabError::NotUniform),
        _ => Ok(()),
    }
}

/// All `l`-sets meeting every member of `g`: the largest family
/// cross-intersecting with `g` at level `l`.
pub fn max_cross_partner(g: &SetFamily, l: u32) -> Result<SetFamily> {
    let blocked = g.complements_of_members().down_closure();
    blocked.complement().slice(l)
}

fn max_cross_partner_size(g: &SetFamily, l: u32) -> u64 {
    binom(g.n(), l) - g.complements_of_members().down_closure().level_count(l)
}

/// Hilton's bound: for cross-intersecting `A ⊆ ([n] choose k)` and
/// `B ⊆ ([n] choose l)` with `k + l ≤ n`, `|A| ≥ C(n,k) − C(n−t,k)` forces
/// `|B| ≤ C(n−t, l−t)`. When the size premise fails the check holds
/// vacuously; `premise` records which case applied.
pub fn check_hilton(a: &SetFamily, k: u32, b: &SetFamily, l: u32, t: u32) -> Result<CheckOutcome> {
    let n = a.n();
    if k + l > n {
        return Err(LabError::param(format!("need k + l ≤ n, got k={k}, l={l}, n={n}")));
    }
    require_level(a, k)?;
    require_level(b, l)?;
    if !a.is_cross_intersecting(b)? {
        return Err(LabError::NotCrossIntersecting);
    }
    let threshold = binom(n, k) - binom_i(n as i64 - t as i64, k as i64);
    let bound = binom_i(n as i64 - t as i64, l as i64 - t as i64);
    let premise = a.len() >= threshold;
    let (verdict, equality) = if !premise {
        (Verdict::Holds, false)
    } else if b.len() <= bound {
        (Verdict::Holds, b.len() == bound)
    } else {
        (Verdict::Fails { witness: format!("|A| = {} ≥ {threshold} but |B| = {} > {bound}", a.len(), b.len()) }, false)
    };
    Ok(CheckOutcome::new(verdict, equality)
        .with("premise", premise.to_string())
        .with("threshold", threshold.to_string())
        .with("bound", bound.to_string())
        .with("size_a", a.len().to_string())
        .with("size_b", b.len().to_string()))
}

/// The level-`k` sets of `[n]` as a poset under shifting: `S` is covered by
/// `T` when `T` swaps some element `x − 1 ∉ T` of `S` for `x`.
struct ShiftPoset {
    sets: Vec<Mask>,
    lower_covers: Vec<Vec<usize>>,
}

impl ShiftPoset {
    fn new(n: u32, k: u32) -> Self {
        // Colex order is a linear extension of the shifting order.
        let sets: Vec<Mask> = level_masks(n, k).collect();
        let index = |m: Mask| sets.binary_search(&m).expect("level set");
        let lower_covers = sets
            .iter()
            .map(|&s| {
                let mut covers = Vec::new();
                for x in elements_of(s) {
                    let bit = 1 << (x - 1);
                    if x > 1 && s & (bit >> 1) == 0 {
                        covers.push(index(s & !bit | bit >> 1));
                    }
                }
                covers
            })
            .collect();
        ShiftPoset { sets, lower_covers }
    }

    /// Calls `visit` on every down-set whose size lies in `lo..=hi`, in a
    /// fixed order. Returns the number of search nodes.
    fn for_each_ideal(&self, lo: usize, hi: usize, mut visit: impl FnMut(&[usize])) -> u64 {
        let mut chosen = Vec::new();
        let mut inside = vec![false; self.sets.len()];
        let mut nodes = 0;
        self.walk(0, lo, hi, &mut chosen, &mut inside, &mut nodes, &mut visit);
        nodes
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        i: usize,
        lo: usize,
        hi: usize,
        chosen: &mut Vec<usize>,
        inside: &mut [bool],
        nodes: &mut u64,
        visit: &mut impl FnMut(&[usize]),
    ) {
        *nodes += 1;
        if chosen.len() + (self.sets.len() - i) < lo {
            return;
        }
        if i == self.sets.len() {
            if chosen.len() >= lo {
                visit(chosen);
            }
            return;
        }
        let addable = chosen.len() < hi && self.lower_covers[i].iter().all(|&c| inside[c]);
        if addable {
            inside[i] = true;
            chosen.push(i);
            self.walk(i + 1, lo, hi, chosen, inside, nodes, visit);
            chosen.pop();
            inside[i] = false;
        }
        self.walk(i + 1, lo, hi, chosen, inside, nodes, visit);
    }

    fn family(&self, n: u32, idx: &[usize]) -> SetFamily {
        let mut f = SetFamily::zeroed(n);
        for &i in idx {
            f.set(self.sets[i]);
        }
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiltonProbe {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub t: u32,
    pub threshold: u64,
    /// `C(n−t, l−t)`.
    pub bound: u64,
    /// Largest `|B|` over all cross-intersecting pairs with `|A|` at threshold.
    pub optimum: u64,
    /// A shifted family `A` whose partner attains the optimum.
    pub witness: Vec<Vec<u32>>,
    pub families_examined: u64,
    pub nodes_explored: u64,
}

/// Maximizes `|B|` over cross-intersecting pairs with `|A| = C(n,k) − C(n−t,k)`.
/// A larger `A` only shrinks the admissible `B`, so the threshold size is
/// the only one that matters.
pub fn hilton_extremal_probe(n: u32, k: u32, l: u32, t: u32) -> Result<HiltonProbe> {
    if k + l > n {
        return Err(LabError::param(format!("need k + l ≤ n, got k={k}, l={l}, n={n}")));
    }
    if n > 10 {
        return Err(LabError::GroundTooLarge { n, max: 10 });
    }
    let threshold = binom(n, k) - binom_i(n as i64 - t as i64, k as i64);
    let bound = binom_i(n as i64 - t as i64, l as i64 - t as i64);
    let poset = ShiftPoset::new(n, k);
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut examined = 0;
    let size = threshold as usize;
    let nodes = poset.for_each_ideal(size, size, |idx| {
        examined += 1;
        let partner = max_cross_partner_size(&poset.family(n, idx), l);
        if best.as_ref().is_none_or(|(b, _)| partner > *b) {
            best = Some((partner, idx.to_vec()));
        }
    });
    let (optimum, witness) = best.expect("the colex segment of any size is shifted");
    Ok(HiltonProbe {
        n,
        k,
        l,
        t,
        threshold,
        bound,
        optimum,
        witness: witness.iter().map(|&i| elements_of(poset.sets[i])).collect(),
        families_examined: examined,
        nodes_explored: nodes,
    })
}

/// The `t` with `C(n−t−1, k1−t−1) ≤ size ≤ C(n−t, k1−t)`; on a shared
/// endpoint the larger `t` is returned.
pub fn find_t(size: u64, n: u32, k1: u32) -> Result<u32> {
    if k1 > n {
        return Err(LabError::LevelOutOfRange { level: k1, n });
    }
    if size > binom(n, k1) {
        return Err(LabError::param(format!("size {size} exceeds C({n},{k1}) = {}", binom(n, k1))));
    }
    let mut t = 0;
    while t < k1 && size <= binom(n - t - 1, k1 - t - 1) {
        t += 1;
    }
    Ok(t)
}

/// Which hypotheses of the linear-combination bound hold for the inputs.
/// The constant `C_2` has no explicit value, so only the parts that do not
/// mention it are evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossHypotheses {
    /// `|G1| ≤ C(n − t0, k1 − t0)`.
    pub size_bound: bool,
    /// `n / C1 < k1 < n/2` and `n / C1 < k2 < n/2`.
    pub level_range: bool,
    /// `|k1 − k2| ≤ C1`.
    pub level_gap: bool,
}

impl CrossHypotheses {
    pub fn all(&self) -> bool {
        self.size_bound && self.level_range && self.level_gap
    }
}

/// Evaluates `|G2| + C1·|G1| ≤ C(n, k2)` with equality only when `G1 = ∅`.
/// Hypothesis violations are reported in the values, never refused.
pub fn check_cross_combination(
    g1: &SetFamily,
    k1: u32,
    g2: &SetFamily,
    k2: u32,
    c1: &Rational,
    t0: u32,
) -> Result<(CheckOutcome, CrossHypotheses)> {
    let n = g1.n();
    require_level(g1, k1)?;
    require_level(g2, k2)?;
    if !g1.is_cross_intersecting(g2)? {
        return Err(LabError::NotCrossIntersecting);
    }
    if *c1 <= 0 {
        return Err(LabError::param("C1 must be positive"));
    }
    let s1 = g1.len();
    let in_range = |k: u32| Rational::from(n) / c1.clone() < k && 2 * k < n;
    let hyp = CrossHypotheses {
        size_bound: s1 <= binom_i(n as i64 - t0 as i64, k1 as i64 - t0 as i64),
        level_range: in_range(k1) && in_range(k2),
        level_gap: Rational::from(k1.abs_diff(k2)) <= *c1,
    };
    let lhs = Rational::from(g2.len()) + c1.clone() * s1;
    let rhs = Rational::from(binom(n, k2));
    let verdict = if lhs > rhs {
        Verdict::Fails { witness: format!("|G2| + C1|G1| = {} > {}", fmt_rational(&lhs), fmt_rational(&rhs)) }
    } else if lhs == rhs && s1 > 0 {
        Verdict::Fails { witness: format!("equality {} with |G1| = {s1} > 0", fmt_rational(&rhs)) }
    } else {
        Verdict::Holds
    };
    let mut out = CheckOutcome::new(verdict, lhs == rhs)
        .with("lhs", fmt_rational(&lhs))
        .with("rhs", fmt_rational(&rhs))
        .with("hypotheses_met", hyp.all().to_string());
    if s1 > 0 {
        let t = find_t(s1, n, k1)?;
        let hilton = binom(n, k2) - binom_i(n as i64 - t as i64 - 1, k2 as i64);
        out = out.with("t", t.to_string()).with("hilton_bound_g2", hilton.to_string());
    }
    Ok((out, hyp))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T0Probe {
    pub n: u32,
    pub k1: u32,
    pub k2: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub c1: Rational,
    /// Smallest `t0 ≥ 1` for which the bound held for every `G1` allowed.
    pub min_t0: u32,
    /// `max_partner[s]` is the largest cross-intersecting `G2` for `|G1| = s`.
    pub max_partner: Vec<u64>,
    pub nodes_explored: u64,
}

/// Smallest `t0 ≥ 1` such that every nonempty `G1` with
/// `|G1| ≤ C(n−t0, k1−t0)` satisfies `max|G2| + C1·|G1| < C(n, k2)`.
/// Always at most `k1 + 1`, where the size condition leaves only `G1 = ∅`.
pub fn min_sufficient_t0(n: u32, k1: u32, k2: u32, c1: &Rational) -> Result<T0Probe> {
    if k1 == 0 || k1 > n || k2 > n {
        return Err(LabError::param(format!("need 1 ≤ k1 ≤ n and k2 ≤ n, got k1={k1}, k2={k2}, n={n}")));
    }
    if n > 10 {
        return Err(LabError::GroundTooLarge { n, max: 10 });
    }
    let cap = binom(n - 1, k1 - 1) as usize;
    let poset = ShiftPoset::new(n, k1);
    let mut max_partner = vec![0u64; cap + 1];
    max_partner[0] = binom(n, k2);
    let nodes = poset.for_each_ideal(1, cap, |idx| {
        let p = max_cross_partner_size(&poset.family(n, idx), k2);
        let slot = &mut max_partner[idx.len()];
        *slot = (*slot).max(p);
    });
    let total = Rational::from(binom(n, k2));
    let ok_up_to = |limit: u64| {
        (1..=limit).all(|s| Rational::from(max_partner[s as usize]) + c1.clone() * s < total)
    };
    let min_t0 = (1..=k1 + 1)
        .find(|&t0| ok_up_to(binom_i(n as i64 - t0 as i64, k1 as i64 - t0 as i64)))
        .expect("t0 = k1 + 1 admits only the empty family");
    Ok(T0Probe { n, k1, k2, c1: c1.clone(), min_t0, max_partner, nodes_explored: nodes })
}

/// Per-set failures and totals of the indicator inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorReport {
    pub union_size: u64,
    pub summed_bound: i64,
    pub violations: Vec<Vec<u32>>,
}

/// For `F = F_1 ∪ … ∪ F_r` with every `F_j ⊆ ([n] choose k)` and each
/// `S ∈ ([n] choose k)`:
///
/// `1_F(S) ≤ 1[S ∩ [r] ≠ ∅] + Σ_j (1[S ∈ F_j, j ∉ S] − 1[S ∩ [r] = {j}, S ∉ F_j])`.
///
/// Summing over `S` gives `|F| ≤ C(n,k) − C(n−r,k) + Σ_j (a_j − b_j)`, which
/// is recomputed separately from restriction counts.
pub fn check_indicator_claim(families: &[&SetFamily], k: u32) -> Result<(CheckOutcome, IndicatorReport)> {
    let first = families.first().ok_or_else(|| LabError::param("at least one family is required"))?;
    let n = first.n();
    let r = families.len() as u32;
    if r > n {
        return Err(LabError::param(format!("r = {r} exceeds n = {n}")));
    }
    let mut union = SetFamily::empty(first.ground());
    for f in families {
        require_level(f, k)?;
        union = union.union(f)?;
    }
    let head = full_mask(r);
    let mut violations = Vec::new();
    let mut pointwise_total: i64 = 0;
    for s in level_masks(n, k) {
        let lhs = union.contains(s) as i64;
        let mut rhs = (s & head != 0) as i64;
        for (j, f) in families.iter().enumerate() {
            let bit: Mask = 1 << j;
            if f.contains(s) && s & bit == 0 {
                rhs += 1;
            }
            if s & head == bit && !f.contains(s) {
                rhs -= 1;
            }
        }
        pointwise_total += rhs;
        if lhs > rhs {
            violations.push(elements_of(s));
        }
    }
    let mut summed = binom(n, k) as i64 - binom_i(n as i64 - r as i64, k as i64) as i64;
    for (j, f) in families.iter().enumerate() {
        let bit: Mask = 1 << j;
        let avoid_j = f.restrict(bit, 0)?.level_count(k) as i64;
        let link = if k == 0 { 0 } else { f.restrict(head, bit)?.level_count(k - 1) as i64 };
        let missing = binom_i(n as i64 - r as i64, k as i64 - 1) as i64 - link;
        summed += avoid_j - missing;
    }
    debug_assert_eq!(summed, pointwise_total);
    let union_size = union.len();
    let verdict = if !violations.is_empty() {
        let shown: Vec<String> = violations.iter().take(5).map(|v| format!("{v:?}")).collect();
        Verdict::Fails { witness: format!("pointwise inequality fails at {}", shown.join(", ")) }
    } else if union_size as i64 > summed {
        Verdict::Fails { witness: format!("|F| = {union_size} > summed bound {summed}") }
    } else {
        Verdict::Holds
    };
    let out = CheckOutcome::new(verdict, union_size as i64 == summed)
        .with("union_size", union_size.to_string())
        .with("summed_bound", summed.to_string())
        .with("pointwise_violations", violations.len().to_string());
    Ok((out, IndicatorReport { union_size, summed_bound: summed, violations }))
}

/// Level-`k` slice of the star at `j`, a convenience for examples.
pub fn star_slice(ground: GroundSet, j: u32, k: u32) -> Result<SetFamily> {
    crate::construction::Construction::Dictatorship(j).build(ground)?.slice(k)
}
