//! Exhaustive search over query families on a small ground set.
//!
//! Members are nonempty subsets of `[n]` taken in colex order (increasing
//! bit mask). Without further constraints families are enumerated by size
//! and, within a size, as lexicographically increasing combinations of
//! subset positions. With `require_intersection_closed` the search walks
//! only families closed under nonempty intersections; every model here is
//! unchanged by adding intersections (the elements of `F ∩ G` already see
//! both answers), so a negative answer there is a negative answer overall.
//!
//! Symmetry pruning skips families that are not the lexicographically
//! smallest relabeling of themselves. Every model predicate is invariant
//! under relabeling the elements, so pruning never hides the last
//! representative of a solution class.

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::knowledge::{check_unvalidated, ModelSpec};

/// Families enumerated before the search refuses to start.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

/// Symmetry pruning enumerates all `n!` relabelings; keep it small.
const MAX_PRUNE_N: usize = 7;

/// Larger ground sets have more subsets than any budget can enumerate.
const MAX_SEARCH_N: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub model: ModelSpec,
    pub n: usize,
    /// Largest family size enumerated; `None` means no cap.
    pub max_family_size: Option<usize>,
    /// Admissible member sizes; `None` admits every nonempty subset.
    pub allowed_set_sizes: Option<Vec<usize>>,
    pub require_intersection_closed: bool,
    pub prune_symmetric: bool,
    pub budget: u128,
}

impl SearchSpec {
    pub fn new(model: ModelSpec, n: usize) -> Self {
        SearchSpec {
            model,
            n,
            max_family_size: None,
            allowed_set_sizes: None,
            require_intersection_closed: false,
            prune_symmetric: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn max_size(mut self, cap: usize) -> Self {
        self.max_family_size = Some(cap);
        self
    }

    pub fn set_sizes(mut self, sizes: Vec<usize>) -> Self {
        self.allowed_set_sizes = Some(sizes);
        self
    }

    pub fn closed(mut self) -> Self {
        self.require_intersection_closed = true;
        self
    }

    pub fn pruned(mut self) -> Self {
        self.prune_symmetric = true;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Exists(Family),
    NotExists,
    /// The size cap cut off part of the space and no witness was found.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    /// Families visited, up to and including the witness.
    pub explored: u64,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        let value = match &self.outcome {
            Outcome::Exists(w) => json!({
                "outcome": "exists",
                "size": w.len(),
                "witness": { "n": w.n(), "sets": w.to_lists() },
                "explored": self.explored,
            }),
            Outcome::NotExists => json!({ "outcome": "not_exists", "explored": self.explored }),
            Outcome::Inconclusive => json!({ "outcome": "inconclusive", "explored": self.explored }),
        };
        value.to_string()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc holds C(n, i)
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct Space {
    n: usize,
    subsets: Vec<u64>,
    cap: usize,
}

impl Space {
    fn new(spec: &SearchSpec) -> Result<Space> {
        let n = spec.n;
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        spec.model.validate(n)?;
        let size_ok = |s: usize| {
            spec.allowed_set_sizes
                .as_ref()
                .is_none_or(|sizes| sizes.contains(&s))
        };
        let count: u128 = (1..=n)
            .filter(|&s| size_ok(s))
            .map(|s| binomial(n as u128, s as u128))
            .fold(0u128, |a, b| a.saturating_add(b));
        let cap = spec.max_family_size.map_or(count, |c| (c as u128).min(count));
        let estimate = (0..=cap).fold(0u128, |acc, k| acc.saturating_add(binomial(count, k)));
        if n > MAX_SEARCH_N || estimate > spec.budget {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: spec.budget,
            });
        }
        if spec.prune_symmetric && n > MAX_PRUNE_N {
            return Err(Error::InvalidModel(format!(
                "symmetry pruning supports n <= {MAX_PRUNE_N}"
            )));
        }
        let subsets: Vec<u64> = (1u64..1 << n)
            .filter(|m| size_ok(m.count_ones() as usize))
            .collect();
        Ok(Space {
            n,
            cap: cap as usize,
            subsets,
        })
    }
}

/// Lexicographically smallest relabeling test for sorted mask lists.
struct Symmetry {
    images: Vec<Vec<u64>>,
}

impl Symmetry {
    fn new(n: usize) -> Symmetry {
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        permutations(&mut p, 0, &mut perms);
        let images = perms
            .iter()
            .filter(|p| p.iter().enumerate().any(|(i, &v)| i != v))
            .map(|p| {
                (0u64..1 << n)
                    .map(|m| {
                        let mut out = 0u64;
                        for (i, &target) in p.iter().enumerate() {
                            if m >> i & 1 == 1 {
                                out |= 1 << target;
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Symmetry { images }
    }

    fn is_canonical(&self, masks: &[u64], scratch: &mut Vec<u64>) -> bool {
        for table in &self.images {
            scratch.clear();
            scratch.extend(masks.iter().map(|&m| table[m as usize]));
            scratch.sort_unstable();
            if scratch.as_slice() < masks {
                return false;
            }
        }
        true
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

struct Evaluator<'a> {
    model: ModelSpec,
    symmetry: Option<&'a Symmetry>,
    family: Family,
    scratch: Vec<u64>,
}

impl<'a> Evaluator<'a> {
    fn new(n: usize, model: ModelSpec, symmetry: Option<&'a Symmetry>) -> Self {
        Evaluator {
            model,
            symmetry,
            family: Family::empty(n).expect("n >= 1"),
            scratch: Vec::new(),
        }
    }

    /// `masks` must be strictly increasing.
    fn solves(&mut self, masks: &[u64]) -> bool {
        if let Some(sym) = self.symmetry {
            if !sym.is_canonical(masks, &mut self.scratch) {
                return false;
            }
        }
        self.family.clear();
        let n = self.family.n();
        for &m in masks {
            self.family.push(crate::bitset::ElementSet::from_mask(n, m));
        }
        check_unvalidated(&self.family, self.model).is_none()
    }
}

/// Decides whether some family in the spec's space solves its model.
pub fn exists_solution(spec: &SearchSpec) -> Result<SearchResult> {
    let space = Space::new(spec)?;
    let symmetry = spec.prune_symmetric.then(|| Symmetry::new(space.n));
    if spec.require_intersection_closed {
        return Ok(closed_search(&space, spec.model, symmetry.as_ref()));
    }
    let mut explored = 0u64;
    for k in 0..=space.cap {
        let (seen, witness) = search_size(&space, spec.model, symmetry.as_ref(), k);
        explored += seen;
        if let Some(masks) = witness {
            let w = Family::from_masks(space.n, &masks)?;
            return Ok(SearchResult {
                outcome: Outcome::Exists(w),
                explored,
            });
        }
    }
    let outcome = if space.cap < space.subsets.len() {
        Outcome::Inconclusive
    } else {
        Outcome::NotExists
    };
    Ok(SearchResult { outcome, explored })
}

/// Smallest `k ≤ cap` such that a `k`-member family solves `model`, with
/// the first witness in enumeration order.
pub fn min_solution_size(model: ModelSpec, n: usize, cap: Option<usize>) -> Result<Option<(usize, Family)>> {
    let mut spec = SearchSpec::new(model, n);
    spec.max_family_size = cap;
    min_solution_size_with(&spec)
}

pub fn min_solution_size_with(spec: &SearchSpec) -> Result<Option<(usize, Family)>> {
    let mut plain = spec.clone();
    plain.require_intersection_closed = false;
    match exists_solution(&plain)?.outcome {
        Outcome::Exists(w) => Ok(Some((w.len(), w))),
        _ => Ok(None),
    }
}

/// All families of exactly `k` members, split into chunks by their first
/// member. Chunks are evaluated in parallel and the lowest witness wins, so
/// the result matches a serial scan.
fn search_size(space: &Space, model: ModelSpec, symmetry: Option<&Symmetry>, k: usize) -> (u64, Option<Vec<u64>>) {
    let m = space.subsets.len();
    if k > m {
        return (0, None);
    }
    if k == 0 {
        let mut eval = Evaluator::new(space.n, model, symmetry);
        return (1, eval.solves(&[]).then(Vec::new));
    }
    let chunk_size = |first: usize| binomial((m - first - 1) as u128, (k - 1) as u128) as u64;
    let hit = (0..=m - k).into_par_iter().find_map_first(|first| {
        let mut eval = Evaluator::new(space.n, model, symmetry);
        let mut idx: Vec<usize> = (first..first + k).collect();
        let mut masks: Vec<u64> = idx.iter().map(|&i| space.subsets[i]).collect();
        let mut seen = 0u64;
        loop {
            seen += 1;
            if eval.solves(&masks) {
                return Some((first, seen, masks));
            }
            // next combination with idx[0] fixed
            let mut pos = k;
            loop {
                if pos == 1 {
                    return None;
                }
                pos -= 1;
                if idx[pos] < m - (k - pos) {
                    break;
                }
            }
            idx[pos] += 1;
            masks[pos] = space.subsets[idx[pos]];
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
                masks[q] = space.subsets[idx[q]];
            }
        }
    });
    match hit {
        Some((first, seen, masks)) => {
            let before: u64 = (0..first).map(chunk_size).sum();
            (before + seen, Some(masks))
        }
        None => ((0..=m - k).map(chunk_size).sum(), None),
    }
}

fn closed_search(space: &Space, model: ModelSpec, symmetry: Option<&Symmetry>) -> SearchResult {
    struct Walk<'a> {
        subsets: &'a [u64],
        cap: usize,
        chosen: Vec<u64>,
        present: Vec<bool>,
        explored: u64,
        truncated: bool,
        eval: Evaluator<'a>,
    }

    impl Walk<'_> {
        fn admissible(&self, s: u64) -> bool {
            self.chosen.iter().all(|&t| {
                let meet = s & t;
                meet == 0 || self.present[meet as usize]
            })
        }

        fn run(&mut self, pos: usize) -> bool {
            if pos == self.subsets.len() {
                self.explored += 1;
                let chosen = std::mem::take(&mut self.chosen);
                let found = self.eval.solves(&chosen);
                self.chosen = chosen;
                return found;
            }
            if self.run(pos + 1) {
                return true;
            }
            let s = self.subsets[pos];
            if self.admissible(s) {
                if self.chosen.len() >= self.cap {
                    self.truncated = true;
                    return false;
                }
                self.chosen.push(s);
                self.present[s as usize] = true;
                if self.run(pos + 1) {
                    return true;
                }
                self.present[s as usize] = false;
                self.chosen.pop();
            }
            false
        }
    }

    let mut walk = Walk {
        subsets: &space.subsets,
        cap: space.cap,
        chosen: Vec::new(),
        present: vec![false; 1 << space.n],
        explored: 0,
        truncated: false,
        eval: Evaluator::new(space.n, model, symmetry),
    };
    let found = walk.run(0);
    let outcome = if found {
        Outcome::Exists(Family::from_masks(space.n, &walk.chosen).expect("n >= 1"))
    } else if walk.truncated {
        Outcome::Inconclusive
    } else {
        Outcome::NotExists
    };
    SearchResult {
        outcome,
        explored: walk.explored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge::solves;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(31, 15), 300_540_195);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn model3_has_no_solution_on_three_elements() {
        let r = exists_solution(&SearchSpec::new(ModelSpec::Model3, 3)).unwrap();
        assert_eq!(r.outcome, Outcome::NotExists);
        assert_eq!(r.explored, 128);
    }

    #[test]
    fn triple_witness_for_model4_on_seven() {
        let spec = SearchSpec::new(ModelSpec::Model4 { i: 1, j: 2 }, 7)
            .set_sizes(vec![3])
            .max_size(7);
        let r = exists_solution(&spec).unwrap();
        match r.outcome {
            Outcome::Exists(w) => {
                // a Steiner triple system with one block removed
                assert_eq!(w.len(), 6);
                assert!(!crate::family::is_steiner_triple_system(&w));
                assert!(solves(&w, ModelSpec::Model4 { i: 1, j: 2 }).unwrap());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn minimum_sizes() {
        let (k, _) = min_solution_size(ModelSpec::Separating, 4, None).unwrap().unwrap();
        assert_eq!(k, 2);
        let (k, w) = min_solution_size(ModelSpec::Model2, 3, None).unwrap().unwrap();
        assert_eq!(k, 3);
        assert!(solves(&w, ModelSpec::Model2).unwrap());
        let (k, _) = min_solution_size(ModelSpec::Model3Prime, 3, None).unwrap().unwrap();
        assert_eq!(k, 2);
        assert_eq!(min_solution_size(ModelSpec::Model3Prime, 2, None).unwrap(), None);
    }

    #[test]
    fn cap_yields_inconclusive() {
        let spec = SearchSpec::new(ModelSpec::Model3, 3).max_size(2);
        assert_eq!(exists_solution(&spec).unwrap().outcome, Outcome::Inconclusive);
    }

    #[test]
    fn closed_and_pruned_searches_agree_with_plain() {
        for n in 2..=4 {
            for model in [
                ModelSpec::Model2,
                ModelSpec::Model3Prime,
                ModelSpec::Model4 { i: 1, j: 2 },
                ModelSpec::Model4 { i: 1, j: 3.min(n) },
            ] {
                if model.validate(n).is_err() {
                    continue;
                }
                let plain = exists_solution(&SearchSpec::new(model, n)).unwrap();
                let closed = exists_solution(&SearchSpec::new(model, n).closed()).unwrap();
                let pruned = exists_solution(&SearchSpec::new(model, n).pruned()).unwrap();
                let exists = |o: &Outcome| matches!(o, Outcome::Exists(_));
                assert_eq!(exists(&plain.outcome), exists(&closed.outcome), "{model} n={n}");
                assert_eq!(exists(&plain.outcome), exists(&pruned.outcome), "{model} n={n}");
            }
        }
    }

    #[test]
    fn budget_refusal_reports_estimate() {
        let spec = SearchSpec::new(ModelSpec::Model2, 6).with_budget(1000);
        match exists_solution(&spec) {
            Err(Error::BudgetExceeded { estimate, budget }) => {
                assert_eq!(budget, 1000);
                assert_eq!(estimate, 1u128 << 63);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let spec = SearchSpec::new(ModelSpec::Model2, 4);
        assert_eq!(exists_solution(&spec).unwrap(), exists_solution(&spec).unwrap());
    }

    #[test]
    fn json_shape() {
        let r = exists_solution(&SearchSpec::new(ModelSpec::Model3, 2)).unwrap();
        assert_eq!(r.to_json(), r#"{"explored":8,"outcome":"not_exists"}"#);
    }
}
