//! Structural predicates on set families.
//!
//! Every predicate is a direct scan over pairs or triples of members with
//! word-level set operations. Triples range over pairwise distinct
//! positions; two equal members at different positions are "the same set"
//! for the cancellation laws but still count as comparable for Sperner.

use super::Family;
use crate::bitset::ElementSet;

/// Every unordered pair of elements is split by some member.
pub fn is_separating(f: &Family) -> bool {
    unseparated_pair(f).is_none()
}

/// Some pair `x < y` that no member splits.
pub fn unseparated_pair(f: &Family) -> Option<(usize, usize)> {
    indistinguishable_classes(f.n(), f.sets())
        .into_iter()
        .find(|c| c.len() > 1)
        .map(|c| {
            let mut it = c.iter();
            (it.next().unwrap(), it.next().unwrap())
        })
}

/// Classes of elements of `[n]` with identical membership across `sets`.
pub fn indistinguishable_classes<'a, I>(n: usize, sets: I) -> Vec<ElementSet>
where
    I: IntoIterator<Item = &'a ElementSet>,
{
    // Partition refinement: the classes left at the end are the elements no
    // member tells apart.
    let mut classes = vec![ElementSet::full(n)];
    for s in sets {
        let mut next = Vec::with_capacity(classes.len() * 2);
        for c in classes {
            let inside = c.intersection(s);
            let outside = c.difference(s);
            if !inside.is_empty() {
                next.push(inside);
            }
            if !outside.is_empty() {
                next.push(outside);
            }
        }
        classes = next;
    }
    classes
}

/// Every ordered pair `(x, y)` has a member containing `x` but not `y`.
pub fn is_completely_separating(f: &Family) -> bool {
    (1..=f.n()).all(|x| {
        let meet = f.meet_of(x);
        meet.len() == 1 && meet.contains(x)
    })
}

/// No member is contained in a member at another position.
pub fn is_sperner(sets: &[ElementSet]) -> bool {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.is_subset(b) || b.is_subset(a) {
                return false;
            }
        }
    }
    true
}

/// `A ∪ B = A ∪ C ⇒ B = C` over pairwise distinct positions.
pub fn is_cancellative(sets: &[ElementSet]) -> bool {
    cancellation_violation(sets, |a, b| a.union(b)).is_none()
}

/// `A ∩ B = A ∩ C ⇒ B = C` over pairwise distinct positions.
pub fn is_intersection_cancellative(sets: &[ElementSet]) -> bool {
    cancellation_violation(sets, |a, b| a.intersection(b)).is_none()
}

/// First `(a, b, c)` positions with `op(A,B) = op(A,C)` and `B ≠ C`.
pub fn cancellation_violation<Op>(sets: &[ElementSet], op: Op) -> Option<(usize, usize, usize)>
where
    Op: Fn(&ElementSet, &ElementSet) -> ElementSet,
{
    let m = sets.len();
    for a in 0..m {
        let images: Vec<ElementSet> = sets.iter().map(|s| op(&sets[a], s)).collect();
        for b in 0..m {
            if b == a {
                continue;
            }
            for c in b + 1..m {
                if c == a {
                    continue;
                }
                if images[b] == images[c] && sets[b] != sets[c] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// `F, G` members implies `F ∩ G` is a member (the empty set included).
pub fn is_intersection_closed(sets: &[ElementSet]) -> bool {
    let present: std::collections::HashSet<&ElementSet> = sets.iter().collect();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !present.contains(&a.intersection(b)) {
                return false;
            }
        }
    }
    true
}

/// Each unordered pair of elements lies in exactly one member and every
/// member size is in `block_sizes`.
pub fn is_pbd(f: &Family, block_sizes: &[usize]) -> bool {
    let n = f.n();
    if f.sets().iter().any(|s| !block_sizes.contains(&s.len())) {
        return false;
    }
    let mut covered = vec![false; n * n];
    for s in f.sets() {
        let members = s.to_vec();
        for (k, &x) in members.iter().enumerate() {
            for &y in &members[k + 1..] {
                let cell = &mut covered[(x - 1) * n + (y - 1)];
                if *cell {
                    return false;
                }
                *cell = true;
            }
        }
    }
    (1..=n).all(|x| (x + 1..=n).all(|y| covered[(x - 1) * n + (y - 1)]))
}

pub fn is_steiner_triple_system(f: &Family) -> bool {
    is_pbd(f, &[3])
}
