//! Dense bitmap representation of subfamilies of the power set of `[n]`.
//!
//! A subset `S ⊆ [n]` is addressed by its characteristic mask: element `i`
//! (1-based) corresponds to bit `i - 1`. A family stores one bit per mask,
//! so `2^n` bits in total. Bits past `2^n` in the last word are always zero.

use std::fmt;

use crate::error::{LabError, Result};

/// Characteristic mask of a subset of `[n]`.
pub type Mask = u32;

/// Largest supported ground set.
pub const N_MAX: u32 = 24;

/// `LEVEL_IN_WORD[c]` has bit `b` set iff `b.count_ones() == c`, for `b < 64`.
const LEVEL_IN_WORD: [u64; 7] = {
    let mut t = [0u64; 7];
    let mut b = 0;
    while b < 64 {
        t[(b as u32).count_ones() as usize] |= 1u64 << b;
        b += 1;
    }
    t
};

/// Bit positions `b < 64` whose bit `i` is clear.
const WITHOUT_BIT: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// The ground set `[n] = {1, …, n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_limit(n, N_MAX)
    }

    /// Like [`GroundSet::new`] with a caller-chosen cap (never above [`N_MAX`]).
    pub fn with_limit(n: u32, max: u32) -> Result<Self> {
        let max = max.min(N_MAX);
        if n > max {
            return Err(LabError::GroundTooLarge { n, max });
        }
        if n == 0 {
            return Err(LabError::param("ground set must have at least one element"));
        }
        Ok(GroundSet { n })
    }

    /// Ground sets produced by restriction may be empty.
    pub(crate) fn unchecked(n: u32) -> Self {
        debug_assert!(n <= N_MAX);
        GroundSet { n }
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn full_mask(self) -> Mask {
        full_mask(self.n)
    }

    /// Converts 1-based elements into a mask.
    pub fn mask_of(self, elements: &[u32]) -> Result<Mask> {
        let mut m = 0;
        for &e in elements {
            if e == 0 || e > self.n {
                return Err(LabError::ElementOutOfRange { element: e, n: self.n });
            }
            m |= 1 << (e - 1);
        }
        Ok(m)
    }
}

pub fn full_mask(n: u32) -> Mask {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

/// 1-based elements of a mask, ascending.
pub fn elements_of(mask: Mask) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() + 1);
        m &= m - 1;
    }
    out
}

/// Formats a mask as `{1,3,4}`.
pub fn format_mask(mask: Mask) -> String {
    let parts: Vec<String> = elements_of(mask).iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn word_count(n: u32) -> usize {
    if n <= 6 {
        1
    } else {
        1usize << (n - 6)
    }
}

/// Valid-bit mask for the single word of a family with `n < 6`.
fn small_word_mask(n: u32) -> u64 {
    let bits = 1u32 << n;
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A subfamily of `P([n])`.
///
/// Values are immutable once built; every operation returns a new family.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u32,
    words: Vec<u64>,
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().map(format_mask).collect();
        write!(f, "SetFamily(n={}, [{}])", self.n, members.join(", "))
    }
}

impl SetFamily {
    pub(crate) fn zeroed(n: u32) -> Self {
        SetFamily { n, words: vec![0; word_count(n)] }
    }

    pub fn empty(ground: GroundSet) -> Self {
        Self::zeroed(ground.n)
    }

    pub fn full(ground: GroundSet) -> Self {
        let mut f = Self::zeroed(ground.n);
        f.words.iter_mut().for_each(|w| *w = u64::MAX);
        f.trim();
        f
    }

    /// Builds a family from lists of 1-based elements; duplicates collapse.
    pub fn build(ground: GroundSet, members: &[Vec<u32>]) -> Result<Self> {
        let mut f = Self::zeroed(ground.n);
        for set in members {
            f.set(ground.mask_of(set)?);
        }
        Ok(f)
    }

    /// Builds a family from characteristic masks.
    pub fn from_masks(ground: GroundSet, masks: impl IntoIterator<Item = Mask>) -> Result<Self> {
        let full = ground.full_mask();
        let mut f = Self::zeroed(ground.n);
        for m in masks {
            if m & !full != 0 {
                let element = 32 - (m & !full).leading_zeros();
                return Err(LabError::ElementOutOfRange { element, n: ground.n });
            }
            f.set(m);
        }
        Ok(f)
    }

    /// Family of all masks satisfying `pred`.
    pub fn from_predicate(ground: GroundSet, pred: impl Fn(Mask) -> bool) -> Self {
        let mut f = Self::zeroed(ground.n);
        for m in 0..=ground.full_mask() {
            if pred(m) {
                f.set(m);
            }
        }
        f
    }

    pub(crate) fn set(&mut self, mask: Mask) {
        self.words[(mask >> 6) as usize] |= 1u64 << (mask & 63);
    }

    fn trim(&mut self) {
        if self.n < 6 {
            self.words[0] &= small_word_mask(self.n);
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::unchecked(self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, mask: Mask) -> bool {
        mask <= full_mask(self.n) && self.words[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
    }

    /// Membership test for a list of 1-based elements.
    pub fn contains_set(&self, elements: &[u32]) -> Result<bool> {
        Ok(self.contains(self.ground().mask_of(elements)?))
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members as masks, in increasing mask order.
    pub fn members(&self) -> impl Iterator<Item = Mask> + '_ {
        self.words.iter().enumerate().flat_map(|(j, &w)| {
            let base = (j as u32) << 6;
            BitIter(w).map(move |b| base | b)
        })
    }

    /// Members as sorted lists of 1-based elements.
    pub fn member_sets(&self) -> Vec<Vec<u32>> {
        self.members().map(elements_of).collect()
    }

    /// Level counts `(a_0, …, a_n)`.
    pub fn profile_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n as usize + 1];
        if self.n < 6 {
            for m in self.members() {
                counts[m.count_ones() as usize] += 1;
            }
            return counts;
        }
        for (j, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let hi = (j as u32).count_ones() as usize;
            for (c, lm) in LEVEL_IN_WORD.iter().enumerate() {
                counts[hi + c] += (w & lm).count_ones() as u64;
            }
        }
        counts
    }

    fn check_same(&self, other: &SetFamily) -> Result<()> {
        if self.n != other.n {
            return Err(LabError::GroundMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    fn zip_words(&self, other: &SetFamily, op: impl Fn(u64, u64) -> u64) -> Result<SetFamily> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let mut f = SetFamily { n: self.n, words };
        f.trim();
        Ok(f)
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.zip_words(other, |a, b| a ^ b)
    }

    /// `P([n]) ∖ F`.
    pub fn complement(&self) -> SetFamily {
        let mut f = SetFamily { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        f.trim();
        f
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    /// `F^{(l)}`: members of size exactly `l`.
    pub fn slice(&self, level: u32) -> Result<SetFamily> {
        if level > self.n {
            return Err(LabError::LevelOutOfRange { level, n: self.n });
        }
        let mut f = self.clone();
        if self.n < 6 {
            let mut w = 0;
            for m in self.members() {
                if m.count_ones() == level {
                    w |= 1u64 << m;
                }
            }
            f.words[0] = w;
            return Ok(f);
        }
        for (j, w) in f.words.iter_mut().enumerate() {
            let hi = (j as u32).count_ones();
            *w = if level >= hi && level - hi <= 6 { *w & LEVEL_IN_WORD[(level - hi) as usize] } else { 0 };
        }
        Ok(f)
    }

    /// `Some(k)` if every member has size `k`; `None` for the empty family.
    /// Errors when the family mixes levels.
    pub fn uniform_level(&self) -> Result<Option<u32>> {
        let counts = self.profile_counts();
        let mut level = None;
        for (l, &c) in counts.iter().enumerate() {
            if c > 0 {
                if level.is_some() {
                    return Err(LabError::NotUniform);
                }
                level = Some(l as u32);
            }
        }
        Ok(level)
    }

    /// Maps every member `S` to `S △ {element}`.
    pub(crate) fn flip(&self, element: u32) -> SetFamily {
        let i = element - 1;
        let mut f = self.clone();
        if i < 6 {
            let s = 1u32 << i;
            let lo = WITHOUT_BIT[i as usize];
            for w in f.words.iter_mut() {
                *w = ((*w & lo) << s) | ((*w >> s) & lo);
            }
        } else {
            let stride = 1usize << (i - 6);
            for j in 0..f.words.len() {
                if j & stride == 0 {
                    f.words.swap(j, j | stride);
                }
            }
        }
        f
    }

    /// `{ [n]∖S : S ∈ F }`.
    pub(crate) fn complements_of_members(&self) -> SetFamily {
        let mut f = SetFamily::zeroed(self.n);
        if self.n < 6 {
            let bits = 1u32 << self.n;
            f.words[0] = self.words[0].reverse_bits() >> (64 - bits);
        } else {
            let last = self.words.len() - 1;
            for (j, &w) in self.words.iter().enumerate() {
                f.words[last - j] = w.reverse_bits();
            }
        }
        f
    }

    /// Smallest increasing family containing `F`.
    pub fn up_closure(&self) -> SetFamily {
        let mut f = self.clone();
        for i in 0..self.n {
            if i < 6 {
                let s = 1u32 << i;
                let lo = WITHOUT_BIT[i as usize];
                for w in f.words.iter_mut() {
                    *w |= (*w & lo) << s;
                }
            } else {
                let stride = 1usize << (i - 6);
                for j in 0..f.words.len() {
                    if j & stride != 0 {
                        f.words[j] |= f.words[j ^ stride];
                    }
                }
            }
        }
        f.trim();
        f
    }

    /// Smallest decreasing family containing `F`.
    pub fn down_closure(&self) -> SetFamily {
        let mut f = self.clone();
        for i in 0..self.n {
            if i < 6 {
                let s = 1u32 << i;
                let lo = WITHOUT_BIT[i as usize];
                for w in f.words.iter_mut() {
                    *w |= (*w >> s) & lo;
                }
            } else {
                let stride = 1usize << (i - 6);
                for j in 0..f.words.len() {
                    if j & stride == 0 {
                        f.words[j] |= f.words[j | stride];
                    }
                }
            }
        }
        f
    }

    pub fn is_increasing(&self) -> bool {
        self.up_closure() == *self
    }

    pub fn is_decreasing(&self) -> bool {
        self.down_closure() == *self
    }

    /// Dual family `F* = { [n]∖A : A ∉ F }`.
    pub fn dual(&self) -> SetFamily {
        self.complements_of_members().complement()
    }

    /// `F_B^C = { S ⊆ [n]∖B : S ∪ C ∈ F }`, re-indexed onto `[n - |B|]`.
    ///
    /// Elements of `[n]∖B` keep their relative order and are renumbered
    /// `1, 2, …`.
    pub fn restrict(&self, b: Mask, c: Mask) -> Result<SetFamily> {
        let full = full_mask(self.n);
        if b & !full != 0 || c & !full != 0 {
            return Err(LabError::InvalidConstruction("restriction sets must lie in [n]".into()));
        }
        if c & !b != 0 {
            return Err(LabError::InvalidConstruction("restriction requires C ⊆ B".into()));
        }
        let free = full & !b;
        let mut out = SetFamily::zeroed(free.count_ones());
        // Submasks of `free` in increasing order line up with 0, 1, 2, … on the
        // compressed ground set.
        let mut s: Mask = 0;
        let mut idx: Mask = 0;
        loop {
            if self.contains(s | c) {
                out.set(idx);
            }
            if s == free {
                break;
            }
            s = (s | !free).wrapping_add(1) & free;
            idx += 1;
        }
        Ok(out)
    }

    /// Every two members intersect. The empty family is intersecting;
    /// a family containing `∅` is not.
    pub fn is_intersecting(&self) -> bool {
        self.is_cross_intersecting_unchecked(self)
    }

    /// Every `A ∈ self` meets every `B ∈ other`.
    pub fn is_cross_intersecting(&self, other: &SetFamily) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.is_cross_intersecting_unchecked(other))
    }

    fn is_cross_intersecting_unchecked(&self, other: &SetFamily) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        // A ∩ B = ∅ iff A ⊆ [n]∖B.
        let forbidden = other.complements_of_members().down_closure();
        self.words.iter().zip(&forbidden.words).all(|(&a, &f)| a & f == 0)
    }

    /// Maximum number of pairwise disjoint members. `∅ ∈ F` contributes one
    /// set disjoint from everything; the empty family has matching number 0.
    pub fn matching_number(&self) -> u32 {
        let n = self.n;
        let mut by_lowest: Vec<Vec<Mask>> = vec![Vec::new(); n as usize];
        let mut has_empty = false;
        for m in self.members() {
            if m == 0 {
                has_empty = true;
            } else {
                by_lowest[m.trailing_zeros() as usize].push(m);
            }
        }
        let mut memo = vec![u8::MAX; 1usize << n];
        let best = max_packing(full_mask(n), &by_lowest, &mut memo);
        best as u32 + has_empty as u32
    }

    /// Number of members whose size is `level`.
    pub fn level_count(&self, level: u32) -> u64 {
        self.profile_counts().get(level as usize).copied().unwrap_or(0)
    }
}

fn max_packing(avail: Mask, by_lowest: &[Vec<Mask>], memo: &mut [u8]) -> u8 {
    if avail == 0 {
        return 0;
    }
    if memo[avail as usize] != u8::MAX {
        return memo[avail as usize];
    }
    let e = avail.trailing_zeros();
    let mut best = max_packing(avail & !(1 << e), by_lowest, memo);
    for &a in &by_lowest[e as usize] {
        if a & !avail == 0 {
            best = best.max(1 + max_packing(avail & !a, by_lowest, memo));
        }
    }
    memo[avail as usize] = best;
    best
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}
