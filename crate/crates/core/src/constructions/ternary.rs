use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::family::Family;

/// Base-3 digits of `n` (most significant first) and the number of zeros
/// among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryProfile {
    pub n: usize,
    pub digits: Vec<u8>,
    pub t: usize,
}

impl TernaryProfile {
    pub fn of(n: usize) -> Self {
        let mut digits = Vec::new();
        let mut v = n;
        while v > 0 {
            digits.push((v % 3) as u8);
            v /= 3;
        }
        digits.reverse();
        let t = digits.iter().filter(|&&d| d == 0).count();
        TernaryProfile { n, digits, t }
    }
}

/// `3⌈log₃ n⌉ − t(n)`.
pub fn model3prime_bound(n: usize) -> usize {
    let mut ceil_log = 0usize;
    let mut p = 1usize;
    while p < n {
        p *= 3;
        ceil_log += 1;
    }
    (3 * ceil_log).saturating_sub(TernaryProfile::of(n).t)
}

/// Minimum-size solutions for the small cases, from an exhaustive search.
const BASE: [&[&[usize]]; 9] = [
    &[],
    &[],
    &[],
    &[&[1], &[2]],
    &[&[1], &[2], &[3]],
    &[&[1], &[2], &[3], &[4]],
    &[&[1], &[2], &[3], &[4], &[5]],
    &[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6]],
    &[&[1], &[2, 3, 4], &[2, 5, 6], &[3, 5, 7]],
];

/// A family in which every element but the defective one stays unsure.
///
/// Up to 8 elements the family is a minimum solution. Beyond that `[n]` is
/// cut into `⌊n/3⌋` blocks of size 3 or 4, a solution on the blocks is
/// lifted, and two or three transversals are added.
pub fn model3prime_family(n: usize) -> Result<Family> {
    match n {
        0 => Err(Error::EmptyGround),
        2 => Err(Error::Unsolvable {
            n,
            reason: "no separating family on two elements leaves the non-defective unsure".into(),
        }),
        n if n < BASE.len() => Family::from_lists(n, BASE[n].iter().copied()),
        n => {
            let q = n / 3;
            let wide = n - 3 * q;
            let mut blocks = Vec::with_capacity(q);
            let mut next = 1;
            for b in 0..q {
                let len = if b < wide { 4 } else { 3 };
                blocks.push((next..next + len).collect::<Vec<_>>());
                next += len;
            }
            let inner = model3prime_family(q)?;
            let mut sets: Vec<ElementSet> = inner
                .iter()
                .map(|f| ElementSet::from_elements(n, f.iter().flat_map(|x| blocks[x - 1].iter().copied())))
                .collect();
            let transversals = if wide == 0 { 2 } else { 3 };
            for i in 0..transversals {
                sets.push(ElementSet::from_elements(n, blocks.iter().map(|b| b[i])));
            }
            Ok(Family::new(n, sets)?.sorted())
        }
    }
}
