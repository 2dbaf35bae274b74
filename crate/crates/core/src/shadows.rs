//! Shadows, Kruskal–Katona minima and the local LYM inequality.
//!
//! Colex order on `k`-subsets coincides with numeric order of their masks,
//! which is what every segment routine below relies on.

use rug::Rational;
use serde::Serialize;

use crate::binom::{binom, binom_i};
use crate::error::{LabError, Result};
use crate::family::{GroundSet, Mask, SetFamily};
use crate::verdict::{CheckOutcome, Verdict};

/// The first `m` `k`-subsets of `[n]` in colex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColexSegment {
    pub n: u32,
    pub k: u32,
    pub m: u64,
}

impl ColexSegment {
    pub fn new(n: u32, k: u32, m: u64) -> Result<Self> {
        if k > n {
            return Err(LabError::LevelOutOfRange { level: k, n });
        }
        if m > binom(n, k) {
            return Err(LabError::param(format!("m = {m} exceeds C({n},{k}) = {}", binom(n, k))));
        }
        Ok(ColexSegment { n, k, m })
    }

    pub fn masks(&self) -> Vec<Mask> {
        level_masks(self.n, self.k).take(self.m as usize).collect()
    }

    pub fn family(&self) -> Result<SetFamily> {
        SetFamily::from_masks(GroundSet::new(self.n)?, self.masks())
    }
}

/// All `k`-subsets of `[n]` in colex order (Gosper's hack).
pub fn level_masks(n: u32, k: u32) -> impl Iterator<Item = Mask> {
    let limit: u64 = 1u64 << n;
    let mut next: Option<u64> = (k <= n).then(|| (1u64 << k) - 1);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as Mask)
    })
}

fn require_uniform(f: &SetFamily) -> Result<Option<u32>> {
    f.uniform_level()
}

/// `{S ∪ {x} : S ∈ F, x ∉ S}` for a `k`-uniform `F` with `k < n`.
pub fn upper_shadow(f: &SetFamily) -> Result<SetFamily> {
    let Some(k) = require_uniform(f)? else {
        return Ok(SetFamily::empty(f.ground()));
    };
    if k >= f.n() {
        return Err(LabError::LevelOutOfRange { level: k + 1, n: f.n() });
    }
    f.up_closure().slice(k + 1)
}

/// `{S ∖ {x} : S ∈ F, x ∈ S}` for a `k`-uniform `F` with `k ≥ 1`.
pub fn lower_shadow(f: &SetFamily) -> Result<SetFamily> {
    let Some(k) = require_uniform(f)? else {
        return Ok(SetFamily::empty(f.ground()));
    };
    if k == 0 {
        return Err(LabError::LevelOutOfRange { level: 0, n: f.n() });
    }
    f.down_closure().slice(k - 1)
}

/// Local LYM: `|∂⁺F| / C(n,k+1) ≥ |F| / C(n,k)`.
pub fn check_local_lym(f: &SetFamily) -> Result<CheckOutcome> {
    let n = f.n();
    let Some(k) = require_uniform(f)? else {
        let zero = Rational::new();
        return Ok(CheckOutcome::at_least("shadow_density", &zero, "density", &zero));
    };
    let shadow = upper_shadow(f)?;
    let lhs = Rational::from((shadow.len(), binom(n, k + 1)));
    let rhs = Rational::from((f.len(), binom(n, k)));
    Ok(CheckOutcome::at_least("shadow_density", &lhs, "density", &rhs)
        .with("level", k.to_string())
        .with("shadow_size", shadow.len().to_string()))
}

/// Size of the lower shadow of the first `m` colex `j`-sets, from the
/// `j`-cascade `m = C(a_j, j) + C(a_{j-1}, j-1) + …`.
pub fn colex_lower_shadow_size(j: u32, m: u64) -> u64 {
    if j == 0 {
        return 0;
    }
    let mut rest = m;
    let mut total = 0;
    let mut i = j;
    let mut top = u32::MAX;
    while rest > 0 && i > 0 {
        let mut a = i;
        while a + 1 < top && binom(a + 1, i) <= rest {
            a += 1;
        }
        rest -= binom(a, i);
        total += binom(a, i - 1);
        top = a;
        i -= 1;
    }
    total
}

/// Minimum of `|∂⁺F|` over `F ⊆ ([n] choose k)` with `|F| = m`.
///
/// Complementation turns upper shadows at level `k` into lower shadows at
/// level `n − k`, where an initial colex segment is optimal.
pub fn kk_min_upper_shadow(n: u32, k: u32, m: u64) -> Result<u64> {
    if k >= n {
        return Err(LabError::LevelOutOfRange { level: k, n });
    }
    if m > binom(n, k) {
        return Err(LabError::param(format!("m = {m} exceeds C({n},{k}) = {}", binom(n, k))));
    }
    Ok(colex_lower_shadow_size(n - k, m))
}

/// Minimum upper shadow for every `m ∈ 0..=C(n,k)`, by exhausting all
/// subfamilies of level `k`. Only sensible for `C(n,k) ≤ 24` or so.
pub fn brute_min_upper_shadow(n: u32, k: u32) -> Result<Vec<u64>> {
    if k >= n {
        return Err(LabError::LevelOutOfRange { level: k, n });
    }
    let lower: Vec<Mask> = level_masks(n, k).collect();
    let upper: Vec<Mask> = level_masks(n, k + 1).collect();
    if lower.len() > 24 || upper.len() > 64 {
        return Err(LabError::param(format!("level {k} of [{n}] is too large for exhaustive search")));
    }
    let shadow_bits: Vec<u64> = lower
        .iter()
        .map(|&s| {
            upper.iter().enumerate().filter(|(_, &u)| u & s == s).fold(0u64, |acc, (idx, _)| acc | 1 << idx)
        })
        .collect();
    let mut best = vec![u64::MAX; lower.len() + 1];
    // Gray-code walk so each step toggles one set; the union is rebuilt from
    // per-set counts to support removal.
    let mut cover = vec![0u32; upper.len()];
    let mut covered = 0u64;
    let mut chosen = 0u64;
    best[0] = 0;
    for step in 1u64..(1u64 << lower.len()) {
        let bit = step.trailing_zeros() as usize;
        let adding = chosen & (1 << bit) == 0;
        chosen ^= 1 << bit;
        let mut bits = shadow_bits[bit];
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if adding {
                cover[u] += 1;
                if cover[u] == 1 {
                    covered += 1;
                }
            } else {
                cover[u] -= 1;
                if cover[u] == 0 {
                    covered -= 1;
                }
            }
        }
        let size = chosen.count_ones() as usize;
        best[size] = best[size].min(covered);
    }
    Ok(best)
}

/// `C(n,l) − C(n−r,l) − C(n−r−t,l−1)`: the level-`l` count of the
/// Frankl–Füredi family with parameters `(r, t)`.
pub fn ff_level_formula(n: u32, l: u32, r: u32, t: u32) -> i64 {
    let (n, l, r, t) = (n as i64, l as i64, r as i64, t as i64);
    binom_i(n, l) as i64 - binom_i(n - r, l) as i64 - binom_i(n - r - t, l - 1) as i64
}

/// Level-by-level report of the shadow chain starting from level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KkChainLevel {
    pub level: u32,
    pub formula: i64,
    pub kk_from_threshold: u64,
    pub ff_count: u64,
}

/// Every `m ≥ C(n,k) − C(n−r,k) − C(n−r−t,k−1)` sets at level `k` force at
/// least `C(n,l) − C(n−r,l) − C(n−r−t,l−1)` sets at each higher level `l` of
/// the up-closure. Also checks that the Frankl–Füredi family attains the
/// formula at every level.
pub fn check_kk_chain(n: u32, k: u32, r: u32, t: u32) -> Result<(CheckOutcome, Vec<KkChainLevel>)> {
    if r == 0 || r + t > n {
        return Err(LabError::param(format!("need 1 ≤ r and r + t ≤ n, got r={r}, t={t}, n={n}")));
    }
    if k > n {
        return Err(LabError::LevelOutOfRange { level: k, n });
    }
    let ground = GroundSet::new(n)?;
    let ff = crate::construction::Construction::FranklFuredi { r, t }.build(ground)?;
    let ff_counts = ff.profile_counts();
    let top = binom(n, k);
    let threshold = ff_level_formula(n, k, r, t).max(0) as u64;
    let mut failures = Vec::new();
    let mut levels = Vec::new();
    let mut kk_tight = true;
    for m in threshold..=top {
        let mut cur = m;
        for l in k + 1..=n {
            cur = kk_min_upper_shadow(n, l - 1, cur)?;
            let want = ff_level_formula(n, l, r, t);
            if (cur as i64) < want {
                failures.push(format!("m={m}: level {l} gets {cur} < {want}"));
            }
            if m == threshold {
                kk_tight &= cur as i64 == want;
                levels.push(KkChainLevel { level: l, formula: want, kk_from_threshold: cur, ff_count: ff_counts[l as usize] });
            }
        }
    }
    let mut ff_mismatch = Vec::new();
    for l in k..=n {
        let want = ff_level_formula(n, l, r, t);
        if ff_counts[l as usize] as i64 != want {
            ff_mismatch.push(format!("FF level {l}: {} ≠ {want}", ff_counts[l as usize]));
        }
    }
    failures.extend(ff_mismatch);
    let verdict = if failures.is_empty() {
        Verdict::Holds
    } else {
        Verdict::Fails { witness: failures.join("; ") }
    };
    let out = CheckOutcome::new(verdict, kk_tight)
        .with("threshold", threshold.to_string())
        .with("kk_tight", kk_tight.to_string())
        .with("ff_level_k", ff_counts[k as usize].to_string());
    Ok((out, levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{construct, Construction};

    fn fam(n: u32, sets: &[Vec<u32>]) -> SetFamily {
        SetFamily::build(GroundSet::new(n).unwrap(), sets).unwrap()
    }

    #[test]
    fn colex_order_is_numeric() {
        let sets: Vec<Mask> = level_masks(4, 2).collect();
        assert_eq!(sets, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(level_masks(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(level_masks(5, 5).count(), 1);
        assert_eq!(level_masks(3, 4).count(), 0);
        let seg = ColexSegment::new(5, 3, 4).unwrap();
        assert_eq!(seg.family().unwrap().member_sets(), vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]);
        assert!(ColexSegment::new(4, 2, 7).is_err());
    }

    #[test]
    fn upper_shadow_examples() {
        let s = upper_shadow(&fam(4, &[vec![1, 2]])).unwrap();
        assert_eq!(s.member_sets(), vec![vec![1, 2, 3], vec![1, 2, 4]]);
        let s = upper_shadow(&fam(4, &[vec![3, 4], vec![2, 4], vec![1, 4]])).unwrap();
        assert_eq!(s.len(), 3);
        let g = GroundSet::new(6).unwrap();
        for k in 0..6 {
            let lvl = construct(g, &Construction::FullLevel(k)).unwrap();
            assert_eq!(upper_shadow(&lvl).unwrap(), construct(g, &Construction::FullLevel(k + 1)).unwrap());
        }
        assert!(upper_shadow(&construct(g, &Construction::FullLevel(6)).unwrap()).is_err());
        assert!(matches!(upper_shadow(&fam(4, &[vec![1], vec![1, 2]])), Err(LabError::NotUniform)));
    }

    #[test]
    fn local_lym_examples() {
        let out = check_local_lym(&fam(4, &[vec![1, 2]])).unwrap();
        assert!(out.holds() && !out.equality);
        assert_eq!(out.values["shadow_density"], "1/2");
        assert_eq!(out.values["density"], "1/6");
        let lvl = construct(GroundSet::new(7).unwrap(), &Construction::FullLevel(3)).unwrap();
        assert!(check_local_lym(&lvl).unwrap().equality);
    }

    #[test]
    fn kk_examples() {
        assert_eq!(kk_min_upper_shadow(4, 2, 3).unwrap(), 3);
        for n in 1..8 {
            for k in 0..n {
                assert_eq!(kk_min_upper_shadow(n, k, 0).unwrap(), 0);
                assert_eq!(kk_min_upper_shadow(n, k, binom(n, k)).unwrap(), binom(n, k + 1));
            }
        }
        assert!(kk_min_upper_shadow(4, 2, 7).is_err());
        assert!(kk_min_upper_shadow(4, 4, 1).is_err());
        assert_eq!(colex_lower_shadow_size(3, 5), 8);
    }

    #[test]
    fn brute_force_agrees_on_small_cases() {
        assert_eq!(brute_min_upper_shadow(4, 2).unwrap(), vec![0, 2, 3, 3, 4, 4, 4]);
        for k in 0..5 {
            let brute = brute_min_upper_shadow(5, k).unwrap();
            for (m, &b) in brute.iter().enumerate() {
                assert_eq!(kk_min_upper_shadow(5, k, m as u64).unwrap(), b, "n=5 k={k} m={m}");
            }
        }
    }

    #[test]
    fn kk_chain_examples() {
        let (out, levels) = check_kk_chain(10, 3, 2, 2).unwrap();
        assert!(out.holds(), "{:?}", out.verdict);
        assert_eq!(out.values["ff_level_k"], "49");
        assert!(levels.iter().all(|l| l.ff_count as i64 == l.formula));
        assert!(check_kk_chain(6, 2, 1, 1).unwrap().0.holds());
        // With t = 0 the tail is empty and the family is OR on r − 1 elements.
        assert_eq!(ff_level_formula(8, 3, 3, 0), binom(8, 3) as i64 - binom(6, 3) as i64);
        assert!(check_kk_chain(5, 2, 3, 3).is_err());
    }
}
