use crate::error::{Error, Result};
use crate::exact_cover::{find_parallel_classes_bounded, find_partial_matching, Search};
use crate::family::Family;

/// Search effort spent on resolving a generated triple system.
const RESOLUTION_NODES: u64 = 2_000_000;

fn order_error(n: usize, reason: &str) -> Error {
    Error::InvalidOrder {
        n,
        reason: reason.to_string(),
    }
}

fn triples(n: usize, blocks: Vec<[usize; 3]>) -> Family {
    let lists = blocks.into_iter().map(|mut b| {
        b.sort_unstable();
        b
    });
    Family::from_lists(n, lists).expect("labels in range").sorted()
}

/// Triple system on `n ≡ 3 (mod 6)` points from the idempotent commutative
/// quasigroup `a ∘ b = (a + b)(m + 1)/2` on `Z_m`, `m = n/3`.
pub fn sts_bose(n: usize) -> Result<Family> {
    if n % 6 != 3 {
        return Err(order_error(n, "the Bose construction needs n ≡ 3 (mod 6)"));
    }
    let m = n / 3;
    let half = m.div_ceil(2);
    let op = |a: usize, b: usize| (a + b) * half % m;
    let point = |x: usize, i: usize| x + (i % 3) * m + 1;
    let mut blocks = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..m {
        blocks.push([point(x, 0), point(x, 1), point(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                blocks.push([point(x, i), point(y, i), point(op(x, y), i + 1)]);
            }
        }
    }
    Ok(triples(n, blocks))
}

/// Triple system on `n ≡ 1 (mod 6)` points from the half-idempotent
/// commutative quasigroup on `Z_2k`, `n = 6k + 1`, plus a point at infinity
/// (labelled `n`).
pub fn sts_skolem(n: usize) -> Result<Family> {
    if n % 6 != 1 || n < 7 {
        return Err(order_error(n, "the Skolem construction needs n ≡ 1 (mod 6), n >= 7"));
    }
    let k = (n - 1) / 6;
    let order = 2 * k;
    let sigma = |v: usize| if v.is_multiple_of(2) { v / 2 } else { k + v / 2 };
    let op = |a: usize, b: usize| sigma((a + b) % order);
    let point = |x: usize, i: usize| x + (i % 3) * order + 1;
    let inf = n;
    let mut blocks = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..k {
        blocks.push([point(x, 0), point(x, 1), point(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..k {
            blocks.push([inf, point(x + k, i), point(x, i + 1)]);
        }
        for x in 0..order {
            for y in x + 1..order {
                blocks.push([point(x, i), point(y, i), point(op(x, y), i + 1)]);
            }
        }
    }
    Ok(triples(n, blocks))
}

/// Any Steiner triple system on `n` points.
pub fn steiner_triple_system(n: usize) -> Result<Family> {
    match n % 6 {
        _ if n == 3 => Family::from_lists(3, [[1, 2, 3]]),
        1 => sts_skolem(n),
        3 => sts_bose(n),
        _ => Err(order_error(n, "a Steiner triple system exists only for n ≡ 1 or 3 (mod 6)")),
    }
}

/// A triple system together with a partition of its blocks into parallel
/// classes (0-based block positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolvable {
    pub design: Family,
    pub classes: Vec<Vec<usize>>,
}

const KTS9: [[[usize; 3]; 3]; 4] = [
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
    [[1, 4, 7], [2, 5, 8], [3, 6, 9]],
    [[1, 5, 9], [2, 6, 7], [3, 4, 8]],
    [[1, 6, 8], [2, 4, 9], [3, 5, 7]],
];

// lines of PG(3,2) packed into spreads
const KTS15: [[[usize; 3]; 5]; 7] = [
    [[1, 2, 3], [4, 8, 12], [5, 10, 15], [6, 11, 13], [7, 9, 14]],
    [[1, 4, 5], [2, 8, 10], [3, 13, 14], [6, 9, 15], [7, 11, 12]],
    [[1, 6, 7], [2, 9, 11], [3, 12, 15], [4, 10, 14], [5, 8, 13]],
    [[1, 8, 9], [2, 12, 14], [3, 5, 6], [4, 11, 15], [7, 10, 13]],
    [[1, 10, 11], [2, 13, 15], [3, 4, 7], [5, 9, 12], [6, 8, 14]],
    [[1, 12, 13], [2, 4, 6], [3, 9, 10], [5, 11, 14], [7, 8, 15]],
    [[1, 14, 15], [2, 5, 7], [3, 8, 11], [4, 9, 13], [6, 10, 12]],
];

fn from_table<const B: usize>(n: usize, table: &[[[usize; 3]; B]]) -> Resolvable {
    let design = Family::from_lists(n, table.iter().flatten()).expect("labels in range");
    let classes = (0..table.len()).map(|c| (c * B..(c + 1) * B).collect()).collect();
    Resolvable { design, classes }
}

/// A resolvable triple system on `n ≡ 3 (mod 6)` points: the Bose system
/// when a bounded search resolves it, otherwise a stored one for 9 and 15.
pub fn resolvable_sts(n: usize) -> Result<Resolvable> {
    let design = sts_bose(n)?;
    if let Search::Found(classes) = find_parallel_classes_bounded(&design, Some(RESOLUTION_NODES)) {
        return Ok(Resolvable { design, classes });
    }
    match n {
        9 => Ok(from_table(9, &KTS9)),
        15 => Ok(from_table(15, &KTS15)),
        _ => Err(Error::Construction(format!("no resolvable triple system available on {n} points"))),
    }
}

/// A triple system with `matching_size` pairwise disjoint blocks removed;
/// the blocks are chosen greedily by position, backtracking only if needed.
pub fn model4_sts_minus_matching(n: usize, matching_size: usize) -> Result<Family> {
    if n < 7 {
        return Err(order_error(n, "needs at least 7 points"));
    }
    let sts = steiner_triple_system(n)?;
    let matching = find_partial_matching(&sts, matching_size).ok_or_else(|| {
        Error::Construction(format!("no {matching_size} disjoint blocks in the triple system on {n} points"))
    })?;
    let sets = sts
        .iter()
        .enumerate()
        .filter(|(i, _)| !matching.contains(i))
        .map(|(_, b)| b.clone())
        .collect();
    Family::new(n, sets)
}
