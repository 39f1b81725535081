//! Backtracking exact-cover search and the design searches built on it:
//! resolutions into parallel classes and partial matchings.

use crate::bitset::ElementSet;
use crate::family::Family;

/// Result of a search that may run out of nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Exhausted,
    LimitHit,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

struct Budget {
    limit: Option<u64>,
    nodes: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.limit.is_none_or(|l| self.nodes <= l)
    }
}

/// Finds options that cover every item in `1..=items` exactly once.
///
/// Branches on the smallest uncovered item and tries the options covering
/// it in index order, so the first cover returned is deterministic.
pub fn exact_cover(items: usize, options: &[ElementSet], node_limit: Option<u64>) -> Search<Vec<usize>> {
    let mut by_item: Vec<Vec<usize>> = vec![Vec::new(); items + 1];
    for (i, o) in options.iter().enumerate() {
        debug_assert_eq!(o.universe(), items);
        for x in o {
            by_item[x].push(i);
        }
    }
    let mut budget = Budget {
        limit: node_limit,
        nodes: 0,
    };
    let mut chosen = Vec::new();
    let uncovered = ElementSet::full(items);
    match cover_rec(&uncovered, options, &by_item, &mut chosen, &mut budget) {
        Some(true) => Search::Found(chosen),
        Some(false) => Search::Exhausted,
        None => Search::LimitHit,
    }
}

fn cover_rec(
    uncovered: &ElementSet,
    options: &[ElementSet],
    by_item: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    budget: &mut Budget,
) -> Option<bool> {
    let Some(item) = uncovered.first() else {
        return Some(true);
    };
    if !budget.tick() {
        return None;
    }
    for &o in &by_item[item] {
        let opt = &options[o];
        if !opt.is_subset(uncovered) {
            continue;
        }
        chosen.push(o);
        let rest = uncovered.difference(opt);
        match cover_rec(&rest, options, by_item, chosen, budget) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => return None,
        }
        chosen.pop();
    }
    Some(false)
}

/// Partitions the members of `f` into complete matchings (parallel
/// classes), each a list of 0-based member positions. `None` when no such
/// partition exists.
pub fn find_parallel_classes(f: &Family) -> Option<Vec<Vec<usize>>> {
    find_parallel_classes_bounded(f, None).found()
}

pub fn find_parallel_classes_bounded(f: &Family, node_limit: Option<u64>) -> Search<Vec<Vec<usize>>> {
    let n = f.n();
    let blocks = f.sets();
    if blocks.iter().any(ElementSet::is_empty) {
        return Search::Exhausted;
    }
    // every element lies in exactly one block per class
    let mut degree = vec![0usize; n + 1];
    for b in blocks {
        for x in b {
            degree[x] += 1;
        }
    }
    if degree[1..].iter().any(|&d| d != degree[1]) {
        return Search::Exhausted;
    }
    let mut by_item: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, b) in blocks.iter().enumerate() {
        for x in b {
            by_item[x].push(i);
        }
    }
    let mut state = Resolution {
        blocks,
        by_item,
        used: vec![false; blocks.len()],
        remaining: blocks.len(),
        classes: Vec::new(),
        current: Vec::new(),
        budget: Budget {
            limit: node_limit,
            nodes: 0,
        },
    };
    if blocks.is_empty() {
        return Search::Found(Vec::new());
    }
    let uncovered = ElementSet::full(n);
    match state.extend(&uncovered) {
        Some(true) => Search::Found(state.classes),
        Some(false) => Search::Exhausted,
        None => Search::LimitHit,
    }
}

struct Resolution<'a> {
    blocks: &'a [ElementSet],
    by_item: Vec<Vec<usize>>,
    used: Vec<bool>,
    remaining: usize,
    classes: Vec<Vec<usize>>,
    current: Vec<usize>,
    budget: Budget,
}

impl Resolution<'_> {
    fn extend(&mut self, uncovered: &ElementSet) -> Option<bool> {
        if uncovered.is_empty() {
            let class = std::mem::take(&mut self.current);
            self.classes.push(class);
            if self.remaining == 0 {
                return Some(true);
            }
            let r = self.extend(&ElementSet::full(uncovered.universe()));
            if r != Some(true) {
                self.current = self.classes.pop().expect("class just pushed");
            }
            return r;
        }
        if !self.budget.tick() {
            return None;
        }
        let item = uncovered.first().expect("nonempty");
        let starting = uncovered.is_full();
        let candidates = self.by_item[item].clone();
        for o in candidates {
            if self.used[o] || !self.blocks[o].is_subset(uncovered) {
                continue;
            }
            self.used[o] = true;
            self.remaining -= 1;
            self.current.push(o);
            let rest = uncovered.difference(&self.blocks[o]);
            let r = self.extend(&rest);
            if r == Some(true) {
                return r;
            }
            self.current.pop();
            self.remaining += 1;
            self.used[o] = false;
            r?;
            if starting {
                // classes are ordered by their block through the first element
                break;
            }
        }
        Some(false)
    }
}

/// `size` pairwise disjoint members of `f`, lexicographically first by
/// position (the greedy choice whenever greedy succeeds).
pub fn find_partial_matching(f: &Family, size: usize) -> Option<Vec<usize>> {
    fn rec(
        blocks: &[ElementSet],
        start: usize,
        size: usize,
        covered: &ElementSet,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        for i in start..blocks.len() {
            if blocks.len() - i < size - chosen.len() {
                break;
            }
            if blocks[i].is_empty() || blocks[i].intersects(covered) {
                continue;
            }
            chosen.push(i);
            if rec(blocks, i + 1, size, &covered.union(&blocks[i]), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    rec(f.sets(), 0, size, &ElementSet::empty(f.n()), &mut chosen).then_some(chosen)
}
