//! Set families over a ground set `[n]` and the transforms between them.
//!
//! A [`Family`] is an ordered sequence of subsets; the position of a set is
//! its query id. Duplicates and the empty set are representable because
//! complements and duals produce them; [`Family::validate_solution`] rejects
//! both when a family is offered as a query design.

mod io;
mod predicates;

use std::collections::HashSet;
use std::fmt;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};

pub use io::{FamilyFile, Format};
pub use predicates::*;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    sets: Vec<ElementSet>,
}

impl Family {
    /// An empty family over `[n]`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        Ok(Self { n, sets: Vec::new() })
    }

    pub fn new(n: usize, sets: Vec<ElementSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        for s in &sets {
            if s.universe() != n {
                return Err(Error::MalformedSolution(format!(
                    "set {s} lives over a universe of {} elements, expected {n}",
                    s.universe()
                )));
            }
        }
        Ok(Self { n, sets })
    }

    /// Builds a family from 1-based element lists.
    pub fn from_lists<I, S>(n: usize, lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        let mut sets = Vec::new();
        for list in lists {
            let mut s = ElementSet::empty(n);
            for &x in list.as_ref() {
                if x == 0 || x > n {
                    return Err(Error::InvalidElement { element: x, n });
                }
                s.insert(x);
            }
            sets.push(s);
        }
        Ok(Self { n, sets })
    }

    /// Builds a family from bit masks (bit `i` is element `i + 1`); `n ≤ 64`.
    pub fn from_masks(n: usize, masks: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        if n > 64 {
            return Err(Error::InvalidElement { element: n, n: 64 });
        }
        let sets = masks.iter().map(|&m| ElementSet::from_mask(n, m)).collect();
        Ok(Self { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, set: ElementSet) {
        assert_eq!(set.universe(), self.n, "set universe mismatch");
        self.sets.push(set);
    }

    pub(crate) fn clear(&mut self) {
        self.sets.clear();
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ElementSet> {
        self.sets.iter()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(ElementSet::to_vec).collect()
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        check_element(self.n, x)
    }

    /// Rejects empty members and repeated members.
    pub fn validate_solution(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.sets.len());
        for (i, s) in self.sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::MalformedSolution(format!(
                    "query q{} is the empty set",
                    i + 1
                )));
            }
            if !seen.insert(s) {
                return Err(Error::MalformedSolution(format!(
                    "query q{} = {s} repeats an earlier query",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Drops repeated members, keeping first occurrences in order.
    pub fn deduplicated(&self) -> Family {
        let mut seen = HashSet::new();
        let sets = self
            .sets
            .iter()
            .filter(|s| seen.insert(*s))
            .cloned()
            .collect();
        Family { n: self.n, sets }
    }

    /// Members sorted lexicographically by their label sequence.
    pub fn sorted(&self) -> Family {
        let mut sets = self.sets.clone();
        sets.sort();
        Family { n: self.n, sets }
    }

    /// `[n] ∖ F` for every member, order preserved.
    pub fn complement(&self) -> Family {
        Family {
            n: self.n,
            sets: self.sets.iter().map(ElementSet::complement).collect(),
        }
    }

    /// One member per element `a`: the ids of the queries containing `a`.
    pub fn dual(&self) -> IndexedDual {
        let m = self.sets.len();
        let mut members = vec![ElementSet::empty(m); self.n];
        for (i, s) in self.sets.iter().enumerate() {
            for a in s {
                members[a - 1].insert(i + 1);
            }
        }
        IndexedDual { queries: m, members }
    }

    /// The subfamily of members containing `x`, with their query ids.
    pub fn trace(&self, x: usize) -> Result<Trace> {
        self.check_element(x)?;
        let mut indices = Vec::new();
        let mut sets = Vec::new();
        for (i, s) in self.sets.iter().enumerate() {
            if s.contains(x) {
                indices.push(i);
                sets.push(s.clone());
            }
        }
        Ok(Trace {
            family: Family { n: self.n, sets },
            indices,
        })
    }

    /// Intersection of all members containing `x`; `[n]` when there are none.
    pub fn meet_of(&self, x: usize) -> ElementSet {
        let mut meet = ElementSet::full(self.n);
        for s in &self.sets {
            if s.contains(x) {
                meet.intersect_with(s);
            }
        }
        meet
    }

    /// Smallest intersection-closed superfamily: the deduplicated members
    /// first, then new intersections in the order they are discovered.
    pub fn intersection_closure(&self) -> Family {
        let mut sets: Vec<ElementSet> = self.deduplicated().sets;
        let mut seen: HashSet<ElementSet> = sets.iter().cloned().collect();
        let mut i = 0;
        while i < sets.len() {
            for j in 0..i {
                let meet = sets[i].intersection(&sets[j]);
                if seen.insert(meet.clone()) {
                    sets.push(meet);
                }
            }
            i += 1;
        }
        Family { n: self.n, sets }
    }

    /// Re-embeds the family into `[universe]`, shifting labels by `offset`.
    pub fn relabel(&self, universe: usize, offset: usize) -> Family {
        Family {
            n: universe,
            sets: self.sets.iter().map(|s| s.relabel(universe, offset)).collect(),
        }
    }
}

pub(crate) fn check_element(n: usize, x: usize) -> Result<()> {
    if x == 0 || x > n {
        Err(Error::InvalidElement { element: x, n })
    } else {
        Ok(())
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, {:?})", self.n, self.sets)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.sets.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}} over [{}]", self.n)
    }
}

/// The dual keyed by element: member `a` is `{i : a ∈ F_i}` over the query
/// ids `1..=queries`. Equal members are kept, one per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedDual {
    queries: usize,
    members: Vec<ElementSet>,
}

impl IndexedDual {
    /// Number of queries in the source family (the dual's ground set).
    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    /// Member for element `a` (1-based).
    pub fn member(&self, a: usize) -> &ElementSet {
        &self.members[a - 1]
    }

    /// Distinct members, first occurrence order.
    pub fn deduplicated(&self) -> Vec<ElementSet> {
        let mut seen = HashSet::new();
        self.members
            .iter()
            .filter(|s| seen.insert(*s))
            .cloned()
            .collect()
    }
}

/// A trace `F_x` together with the query ids of its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub family: Family,
    /// 0-based positions of the members in the source family.
    pub indices: Vec<usize>,
}
