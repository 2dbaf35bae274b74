//! Named families used throughout: dictatorships, `OR_R`, `S_R`, subcubes and
//! the `x_1 ∨ … ∨ x_{r-1} ∨ (x_r ∧ (x_{r+1} ∨ … ∨ x_{r+t}))` family.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::family::{format_mask, GroundSet, Mask, SetFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// All sets containing element `j`.
    Dictatorship(u32),
    /// `OR_R`: all sets meeting `R`.
    OrFamily(Vec<u32>),
    /// `S_R`: all sets containing `R`.
    SupersetFamily(Vec<u32>),
    /// `{S : S ∩ B = C}` with `C ⊆ B`.
    Subcube { b: Vec<u32>, c: Vec<u32> },
    FranklFuredi { r: u32, t: u32 },
    /// All sets of size `k`.
    FullLevel(u32),
    Empty,
    Full,
}

impl Construction {
    pub fn build(&self, ground: GroundSet) -> Result<SetFamily> {
        let n = ground.n();
        let f = match self {
            Construction::Dictatorship(j) => {
                let m = ground.mask_of(&[*j])?;
                SetFamily::from_predicate(ground, |s| s & m != 0)
            }
            Construction::OrFamily(r) => {
                let m = ground.mask_of(r)?;
                SetFamily::from_predicate(ground, |s| s & m != 0)
            }
            Construction::SupersetFamily(r) => {
                let m = ground.mask_of(r)?;
                SetFamily::from_predicate(ground, |s| s & m == m)
            }
            Construction::Subcube { b, c } => {
                let bm = ground.mask_of(b)?;
                let cm = ground.mask_of(c)?;
                if cm & !bm != 0 {
                    return Err(LabError::InvalidConstruction(format!(
                        "subcube needs C ⊆ B, got B={} C={}",
                        format_mask(bm),
                        format_mask(cm)
                    )));
                }
                SetFamily::from_predicate(ground, |s| s & bm == cm)
            }
            Construction::FranklFuredi { r, t } => {
                let (head, pivot, tail) = frankl_furedi_masks(n, *r, *t)?;
                SetFamily::from_predicate(ground, |s| s & head != 0 || (s & pivot != 0 && s & tail != 0))
            }
            Construction::FullLevel(k) => {
                if *k > n {
                    return Err(LabError::LevelOutOfRange { level: *k, n });
                }
                SetFamily::from_predicate(ground, |s| s.count_ones() == *k)
            }
            Construction::Empty => SetFamily::empty(ground),
            Construction::Full => SetFamily::full(ground),
        };
        Ok(f)
    }
}

/// Masks of `{1..r-1}`, `{r}` and `{r+1..r+t}`.
fn frankl_furedi_masks(n: u32, r: u32, t: u32) -> Result<(Mask, Mask, Mask)> {
    if r == 0 || r + t > n {
        return Err(LabError::InvalidConstruction(format!(
            "Frankl–Füredi family needs 1 ≤ r and r + t ≤ n (r={r}, t={t}, n={n})"
        )));
    }
    let head = (1u32 << (r - 1)) - 1;
    let pivot = 1u32 << (r - 1);
    let tail = ((1u32 << t) - 1) << r;
    Ok((head, pivot, tail))
}

/// Convenience wrapper around [`Construction::build`].
pub fn construct(ground: GroundSet, c: &Construction) -> Result<SetFamily> {
    c.build(ground)
}

/// Identifies a dictatorship: `Some(j)` iff `F = {S : j ∈ S}`.
pub fn as_dictatorship(f: &SetFamily) -> Option<u32> {
    let ground = f.ground();
    if ground.n() == 0 || f.len() != 1u64 << (ground.n() - 1) {
        return None;
    }
    (1..=ground.n()).find(|&j| {
        let bit = 1u32 << (j - 1);
        f.members().all(|m| m & bit != 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::binom;

    fn g(n: u32) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    #[test]
    fn or_family_level_matches_complement_count() {
        let f = construct(g(4), &Construction::OrFamily(vec![1, 2])).unwrap();
        assert_eq!(f.slice(2).unwrap().len(), 5);
        assert_eq!(5, binom(4, 2) - binom(2, 2));
    }

    #[test]
    fn dictatorship_members() {
        let f = construct(g(3), &Construction::Dictatorship(1)).unwrap();
        assert_eq!(f.member_sets(), vec![vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3]]);
        assert_eq!(as_dictatorship(&f), Some(1));
        assert_eq!(as_dictatorship(&f.slice(2).unwrap()), None);
    }

    #[test]
    fn frankl_furedi_level_three() {
        let f = construct(g(10), &Construction::FranklFuredi { r: 2, t: 2 }).unwrap();
        let level: Vec<_> = f.slice(3).unwrap().members().collect();
        // direct enumeration of x1 ∨ (x2 ∧ (x3 ∨ x4)) over 3-sets
        let direct = (0u32..1 << 10)
            .filter(|m| m.count_ones() == 3)
            .filter(|m| m & 1 != 0 || (m & 2 != 0 && m & 0b1100 != 0))
            .count();
        assert_eq!(level.len(), 49);
        assert_eq!(direct, 49);
        assert_eq!(49, binom(10, 3) - binom(8, 3) - binom(6, 2));
    }

    #[test]
    fn invalid_indices_rejected() {
        assert!(construct(g(3), &Construction::Dictatorship(4)).is_err());
        assert!(construct(g(3), &Construction::FranklFuredi { r: 2, t: 2 }).is_err());
        assert!(construct(g(3), &Construction::FranklFuredi { r: 0, t: 1 }).is_err());
        let bad = Construction::Subcube { b: vec![1], c: vec![2] };
        assert!(construct(g(3), &bad).is_err());
        assert!(construct(g(3), &Construction::FullLevel(4)).is_err());
    }

    #[test]
    fn subcube_and_superset() {
        let sc = Construction::Subcube { b: vec![1, 2], c: vec![1] };
        let f = construct(g(4), &sc).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.members().all(|m| m & 0b11 == 0b01));
        let s = construct(g(4), &Construction::SupersetFamily(vec![2, 3])).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.is_increasing());
    }
}
