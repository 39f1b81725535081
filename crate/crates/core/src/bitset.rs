//! Fixed-universe bit sets over 1-based labels.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

/// A subset of `{1, …, universe}` stored as a bit vector.
///
/// All public methods speak in 1-based labels (elements of `[n]`, or query
/// ids when the set lives in a dual). Sets of up to 128 labels are stored
/// inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Words,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        let mut words = Words::new();
        words.resize(word_count(universe), 0);
        Self { universe, words }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    /// Builds a set from labels; panics on a label outside `1..=universe`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(universe: usize, elements: I) -> Self {
        let mut s = Self::empty(universe);
        for x in elements {
            s.insert(x);
        }
        s
    }

    /// Interprets bit `i` of `mask` as label `i + 1`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe >= 64 || mask >> universe == 0, "mask exceeds universe");
        let mut s = Self::empty(universe);
        if let Some(w) = s.words.first_mut() {
            *w = mask;
        }
        s
    }

    /// The low 64 labels as a mask; `None` if the universe is wider.
    pub fn to_mask(&self) -> Option<u64> {
        if self.universe > 64 {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    fn locate(&self, x: usize) -> (usize, u64) {
        assert!(
            x >= 1 && x <= self.universe,
            "label {x} outside 1..={}",
            self.universe
        );
        let i = x - 1;
        (i / WORD, 1u64 << (i % WORD))
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        if x == 0 || x > self.universe {
            return false;
        }
        let (w, b) = self.locate(x);
        self.words[w] & b != 0
    }

    pub fn insert(&mut self, x: usize) {
        let (w, b) = self.locate(x);
        self.words[w] |= b;
    }

    pub fn remove(&mut self, x: usize) {
        let (w, b) = self.locate(x);
        self.words[w] &= !b;
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    /// Smallest label in the set.
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD + w.trailing_zeros() as usize + 1);
            }
        }
        None
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Re-embeds the set in a different universe, shifting every label by `offset`.
    pub fn relabel(&self, universe: usize, offset: usize) -> Self {
        Self::from_elements(universe, self.iter().map(|x| x + offset))
    }
}

/// Orders by sorted label sequence, so `{1,2} < {1,3} < {2}`.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit + 1);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
