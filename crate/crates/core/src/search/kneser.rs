//! Level `k` of `[n]` as the vertex set of the disjointness (Kneser) graph.

use crate::family::{GroundSet, Mask, SetFamily};
use crate::shadows::level_masks;

use super::bitset::Bits;

pub struct Kneser {
    pub n: u32,
    pub k: u32,
    /// Vertex masks in branching order.
    pub sets: Vec<Mask>,
    /// `disjoint[v]` holds every vertex disjoint from `v`.
    pub disjoint: Vec<Bits>,
}

impl Kneser {
    /// Vertices in colex order, optionally pushed through a relabeling
    /// `perm[i−1] = image of i` so the branching order changes.
    pub fn new(n: u32, k: u32, relabel: Option<&[u32]>) -> Self {
        let sets: Vec<Mask> = level_masks(n, k).map(|m| relabel.map_or(m, |p| apply_perm(m, p))).collect();
        let len = sets.len();
        let disjoint = sets
            .iter()
            .map(|&a| {
                let mut row = Bits::new(len);
                for (j, &b) in sets.iter().enumerate() {
                    if a & b == 0 {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Kneser { n, k, sets, disjoint }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn family(&self, members: &Bits) -> SetFamily {
        let ground = GroundSet::unchecked(self.n);
        SetFamily::from_masks(ground, members.iter().map(|v| self.sets[v])).expect("vertices lie in [n]")
    }
}

/// Image of `mask` under the permutation `perm[i−1] = σ(i)`.
pub fn apply_perm(mask: Mask, perm: &[u32]) -> Mask {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << (perm[i] - 1);
    }
    out
}

/// `{σ(S) : S ∈ F}`.
pub fn relabel_family(f: &SetFamily, perm: &[u32]) -> SetFamily {
    SetFamily::from_masks(f.ground(), f.members().map(|m| apply_perm(m, perm))).expect("permutation of [n]")
}
