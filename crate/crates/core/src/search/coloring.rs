//! `F` is a union of `r` intersecting families exactly when its disjointness
//! graph is `r`-colorable: color classes are the intersecting parts.

use crate::family::{Mask, SetFamily};

/// An assignment of members to at most `r` intersecting parts, if one exists.
/// A family containing `∅` never qualifies.
pub fn intersecting_cover(f: &SetFamily, r: u32) -> Option<Vec<SetFamily>> {
    let members: Vec<Mask> = f.members().collect();
    if members.contains(&0) {
        return None;
    }
    let colors = color(&members, r as usize)?;
    let mut parts = vec![SetFamily::empty(f.ground()); r as usize];
    for (m, c) in members.iter().zip(colors) {
        parts[c] = parts[c].union(&SetFamily::from_masks(f.ground(), [*m]).ok()?).ok()?;
    }
    Some(parts)
}

pub fn is_union_of_intersecting(f: &SetFamily, r: u32) -> bool {
    let members: Vec<Mask> = f.members().collect();
    !members.contains(&0) && color(&members, r as usize).is_some()
}

/// Proper coloring of the disjointness graph with colors `0..r`; members are
/// processed by decreasing degree and colors are introduced in order, so
/// color permutations are never revisited.
fn color(members: &[Mask], r: usize) -> Option<Vec<usize>> {
    let len = members.len();
    let adj: Vec<Vec<usize>> =
        (0..len).map(|i| (0..len).filter(|&j| j != i && members[i] & members[j] == 0).collect()).collect();
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(adj[i].len()));
    let mut assign = vec![usize::MAX; len];
    fn go(pos: usize, used: usize, order: &[usize], adj: &[Vec<usize>], r: usize, assign: &mut [usize]) -> bool {
        let Some(&v) = order.get(pos) else { return true };
        for c in 0..r.min(used + 1) {
            if adj[v].iter().all(|&u| assign[u] != c) {
                assign[v] = c;
                if go(pos + 1, used.max(c + 1), order, adj, r, assign) {
                    return true;
                }
                assign[v] = usize::MAX;
            }
        }
        false
    }
    go(0, 0, &order, &adj, r, &mut assign).then_some(assign)
}
