//! Canonical forms of families under relabeling of the ground set.
//!
//! The canonical form is the lexicographically least membership bitmap over
//! all `n!` relabelings, reading bits in mask order (bit for `∅` first) with
//! `0 < 1`. The bits for masks below `2^j` only involve labels `1..=j`, so
//! labels are assigned one at a time and every partial labeling whose prefix
//! is not minimal is discarded. Partial labelings that produce the same
//! relabeled family are merged, which keeps symmetric families cheap.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::family::{GroundSet, Mask, SetFamily};

pub const CANON_MAX: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    family: SetFamily,
}

impl CanonicalForm {
    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn into_family(self) -> SetFamily {
        self.family
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.family.n().cmp(&other.family.n()).then_with(|| lex_cmp(self.family.words(), other.family.words(), u64::MAX))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.family.member_sets().serialize(s)
    }
}

/// Compares the first `bits` bits of two bitmaps, lowest index first.
fn lex_cmp(a: &[u64], b: &[u64], bits: u64) -> Ordering {
    let mut left = bits;
    for (&x, &y) in a.iter().zip(b) {
        if left == 0 {
            break;
        }
        let keep = if left >= 64 { u64::MAX } else { (1u64 << left) - 1 };
        left = left.saturating_sub(64);
        let d = (x ^ y) & keep;
        if d != 0 {
            let low = d & d.wrapping_neg();
            return if x & low == 0 { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// Family after relabeling original element `order[p]` (0-based) as `p + 1`.
fn relabeled(f: &SetFamily, order: &[u32]) -> SetFamily {
    let mut image = vec![0u32; order.len()];
    for (p, &orig) in order.iter().enumerate() {
        image[orig as usize] = p as u32;
    }
    let mut out = SetFamily::zeroed(f.n());
    for m in f.members() {
        let mut t: Mask = 0;
        let mut rest = m;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            t |= 1 << image[i];
        }
        out.set(t);
    }
    out
}

pub fn canonicalize(f: &SetFamily) -> Result<CanonicalForm> {
    let n = f.n();
    if n > CANON_MAX {
        return Err(LabError::GroundTooLarge { n, max: CANON_MAX });
    }
    let mut states: Vec<(Vec<u32>, SetFamily)> = vec![((0..n).collect(), f.clone())];
    for j in 0..n as usize {
        let prefix_bits = 1u64 << (j + 1);
        let mut best: Vec<(Vec<u32>, SetFamily)> = Vec::new();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        for (order, _) in &states {
            for idx in j..n as usize {
                let mut next = order.clone();
                let chosen = next.remove(idx);
                next.insert(j, chosen);
                let image = relabeled(f, &next);
                let ord = match best.first() {
                    None => Ordering::Less,
                    Some((_, b)) => lex_cmp(image.words(), b.words(), prefix_bits),
                };
                match ord {
                    Ordering::Less => {
                        best.clear();
                        seen.clear();
                        seen.insert(image.words().to_vec());
                        best.push((next, image));
                    }
                    Ordering::Equal => {
                        if seen.insert(image.words().to_vec()) {
                            best.push((next, image));
                        }
                    }
                    Ordering::Greater => {}
                }
            }
        }
        states = best;
    }
    let family = states.into_iter().next().map(|(_, fam)| fam).unwrap_or_else(|| SetFamily::empty(GroundSet::unchecked(n)));
    Ok(CanonicalForm { family })
}
