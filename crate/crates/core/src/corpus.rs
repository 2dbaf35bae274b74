//! Seeded random families. Every generator draws from `ChaCha8Rng` seeded
//! with `seed`, so a (generator, n, seed) triple always names the same family.
//!
//! * increasing: up-closure of 1–4 random seed sets, each element present
//!   with a per-seed probability drawn from [1/4, 3/4];
//! * intersecting: one time in eight a dictatorship, otherwise a greedy pass
//!   over a random ordering of the nonempty sets that keeps every set meeting
//!   all kept ones, stopped after a random number of acceptances;
//! * uniform: each `k`-set independently with probability 1/2 (or a given
//!   density).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construction::Construction;
use crate::error::Result;
use crate::family::{full_mask, GroundSet, Mask, SetFamily};
use crate::shadows::level_masks;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_increasing(n: u32, seed: u64) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    let mut rng = rng(seed);
    let count = rng.gen_range(1..=4);
    let mut seeds = Vec::with_capacity(count);
    for _ in 0..count {
        let density: f64 = rng.gen_range(0.25..=0.75);
        let mut m: Mask = 0;
        for i in 0..n {
            if rng.gen_bool(density) {
                m |= 1 << i;
            }
        }
        seeds.push(m);
    }
    Ok(SetFamily::from_masks(ground, seeds)?.up_closure())
}

pub fn random_intersecting(n: u32, seed: u64) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    let mut rng = rng(seed);
    if n == 0 {
        return Ok(SetFamily::empty(ground));
    }
    if rng.gen_ratio(1, 8) {
        let j = rng.gen_range(1..=n);
        return Construction::Dictatorship(j).build(ground);
    }
    let mut sets: Vec<Mask> = (1..=full_mask(n)).collect();
    sets.shuffle(&mut rng);
    let target = rng.gen_range(1..=sets.len());
    let mut kept: Vec<Mask> = Vec::new();
    for s in sets {
        if kept.len() >= target {
            break;
        }
        if kept.iter().all(|&t| t & s != 0) {
            kept.push(s);
        }
    }
    SetFamily::from_masks(ground, kept)
}

pub fn random_uniform(n: u32, k: u32, seed: u64) -> Result<SetFamily> {
    random_uniform_with_density(n, k, 0.5, seed)
}

pub fn random_uniform_with_density(n: u32, k: u32, density: f64, seed: u64) -> Result<SetFamily> {
    let ground = GroundSet::new(n)?;
    let mut rng = rng(seed);
    let chosen: Vec<Mask> = level_masks(n, k).filter(|_| rng.gen_bool(density)).collect();
    SetFamily::from_masks(ground, chosen)
}

/// A uniformly random permutation of `[n]` as `perm[i−1] = σ(i)`.
pub fn random_permutation(n: u32, seed: u64) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n).collect();
    p.shuffle(&mut rng(seed));
    p
}

/// Derives the `index`-th child seed of `seed`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut r = rng(seed);
    r.set_stream(index);
    r.gen()
}
