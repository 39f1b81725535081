use super::steiner::{resolvable_sts, steiner_triple_system, Resolvable};
use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::family::{is_pbd, Family};
use crate::knowledge::{solves, ModelSpec};

// found by exact cover over the pairs
const PBD11: [&[usize]; 16] = [
    &[1, 2, 3, 4, 5],
    &[1, 6, 7],
    &[1, 8, 9],
    &[1, 10, 11],
    &[2, 6, 8],
    &[2, 7, 10],
    &[2, 9, 11],
    &[3, 6, 9],
    &[3, 7, 11],
    &[3, 8, 10],
    &[4, 6, 10],
    &[4, 7, 9],
    &[4, 8, 11],
    &[5, 6, 11],
    &[5, 7, 8],
    &[5, 9, 10],
];

const PBD17: [&[usize]; 20] = [
    &[1, 2, 3, 4, 5],
    &[1, 6, 7, 8, 9],
    &[1, 10, 11, 12, 13],
    &[1, 14, 15, 16, 17],
    &[2, 6, 10, 14],
    &[2, 7, 11, 15],
    &[2, 8, 12, 16],
    &[2, 9, 13, 17],
    &[3, 6, 11, 16],
    &[3, 7, 10, 17],
    &[3, 8, 13, 14],
    &[3, 9, 12, 15],
    &[4, 6, 12, 17],
    &[4, 7, 13, 16],
    &[4, 8, 10, 15],
    &[4, 9, 11, 14],
    &[5, 6, 13, 15],
    &[5, 7, 12, 14],
    &[5, 8, 11, 17],
    &[5, 9, 10, 16],
];

fn whole(n: usize) -> Family {
    Family::new(n, vec![ElementSet::full(n)]).expect("n >= 1")
}

/// Adds the `i`-th extra point to every block of the `i`-th parallel class
/// and places `base` on the extra points.
fn extend(kts: &Resolvable, base: &Family) -> Family {
    let x = kts.design.n();
    let n = x + base.n();
    let mut sets: Vec<ElementSet> = kts.design.iter().map(|b| b.relabel(n, 0)).collect();
    for (i, class) in kts.classes.iter().take(base.n()).enumerate() {
        for &b in class {
            sets[b].insert(x + i + 1);
        }
    }
    sets.extend(base.iter().map(|b| b.relabel(n, x)));
    Family::new(n, sets).expect("labels in range").sorted()
}

/// Resolvable triple system on the largest admissible `6k + 3 ≤ n` whose
/// leftover points can carry a design from `base`.
fn recipe(n: usize, base: fn(usize) -> Result<Family>) -> Result<Family> {
    let mut reasons = Vec::new();
    for k in (1..=n.saturating_sub(3) / 6).rev() {
        let x = 6 * k + 3;
        let r = n - x;
        if r > 3 * k + 1 {
            reasons.push(format!("{x}+{r}: only {} parallel classes", 3 * k + 1));
            break;
        }
        let rest = match r {
            0 => None,
            1 => Some(Family::empty(1)?),
            _ => match base(r) {
                Ok(f) => Some(f),
                Err(e) => {
                    reasons.push(format!("{x}+{r}: {e}"));
                    continue;
                }
            },
        };
        let kts = match resolvable_sts(x) {
            Ok(kts) => kts,
            Err(e) => {
                reasons.push(format!("{x}+{r}: {e}"));
                continue;
            }
        };
        return Ok(match rest {
            Some(rest) => extend(&kts, &rest),
            None => kts.design.sorted(),
        });
    }
    Err(Error::Construction(format!(
        "no split of {n} points into a resolvable triple system and a smaller design ({})",
        if reasons.is_empty() { "too few points".to_string() } else { reasons.join("; ") }
    )))
}

/// Pairwise balanced design with blocks of size 3 and 4.
pub fn pbd34(n: usize) -> Result<Family> {
    if n % 3 == 2 || n == 1 || n == 6 {
        return Err(Error::InvalidOrder {
            n,
            reason: "a design with blocks of size 3 and 4 needs n ≡ 0 or 1 (mod 3), n ∉ {1, 6}".into(),
        });
    }
    match n {
        0 => Err(Error::EmptyGround),
        3 | 4 => Ok(whole(n)),
        n if n % 6 == 1 || n % 6 == 3 => steiner_triple_system(n),
        n => recipe(n, pbd34),
    }
}

/// Pairwise balanced design with blocks of size 3, 4 and 5.
pub fn pbd345(n: usize) -> Result<Family> {
    match n {
        0 => Err(Error::EmptyGround),
        1 | 2 | 6 | 8 => Err(Error::InvalidOrder {
            n,
            reason: "no design with blocks of size 3, 4 and 5 exists".into(),
        }),
        3..=5 => Ok(whole(n)),
        11 => Family::from_lists(11, PBD11),
        17 => Family::from_lists(17, PBD17),
        n if n % 3 != 2 => pbd34(n),
        n => recipe(n, pbd345),
    }
}

/// Five sets on eight points that solve Model 4 with `i = 1, j = 4`.
pub fn model4_n8_family() -> Family {
    let sets: [&[usize]; 5] = [&[1, 2, 3, 4], &[1, 5, 7], &[2, 5, 8], &[3, 6, 8], &[4, 6, 7]];
    Family::from_lists(8, sets).expect("labels in range")
}

/// Places `base` on `|Y|` new points next to a resolvable triple system on
/// `6k + 3` points, extending one parallel class per new point.
///
/// `base` must solve Model 4 with `i = 1, j = 3` or be a balanced design
/// with blocks of size at least 3; it must be empty when `|Y| ≤ 2`.
pub fn extend_model4_solution(base: &Family, k: usize) -> Result<Family> {
    let y = base.n();
    if k == 0 {
        return Err(Error::Construction("k must be at least 1".into()));
    }
    if y > 3 * k + 1 {
        return Err(Error::Construction(format!(
            "{y} new points but only {} parallel classes",
            3 * k + 1
        )));
    }
    if y <= 2 {
        if !base.is_empty() {
            return Err(Error::Construction("a base on at most two points must be empty".into()));
        }
    } else {
        let sizes: Vec<usize> = (3..=y).collect();
        if !is_pbd(base, &sizes) && !solves(base, ModelSpec::Model4 { i: 1, j: 3 })? {
            return Err(Error::Construction(
                "base is neither a balanced design nor a Model 4 solution with i = 1, j = 3".into(),
            ));
        }
    }
    Ok(extend(&resolvable_sts(6 * k + 3)?, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_designs_are_balanced() {
        assert!(is_pbd(&Family::from_lists(11, PBD11).unwrap(), &[3, 4, 5]));
        assert!(is_pbd(&Family::from_lists(17, PBD17).unwrap(), &[3, 4, 5]));
    }

    #[test]
    fn pbd34_orders() {
        for n in [3, 4, 7, 9, 10, 12, 13, 15, 16, 18, 19, 21, 22, 25, 27, 28, 30] {
            let f = pbd34(n).unwrap_or_else(|e| panic!("n={n}: {e}"));
            assert_eq!(f.n(), n);
            assert!(is_pbd(&f, &[3, 4]), "n={n}");
        }
        for n in [1, 2, 5, 6, 8] {
            assert!(pbd34(n).is_err());
        }
        // the Bose system on 21 points does not resolve
        let e = pbd34(24).unwrap_err().to_string();
        assert!(e.contains("21 points"), "{e}");
    }

    #[test]
    fn pbd345_orders() {
        for n in [3, 4, 5, 7, 9, 10, 11, 12, 13, 15, 16, 17, 20] {
            let f = pbd345(n).unwrap_or_else(|e| panic!("n={n}: {e}"));
            assert!(is_pbd(&f, &[3, 4, 5]), "n={n}");
        }
        for n in [1, 2, 6, 8] {
            assert!(pbd345(n).is_err());
        }
    }

    #[test]
    fn small_model4_families() {
        assert!(solves(&pbd34(9).unwrap(), ModelSpec::Model4 { i: 1, j: 3 }).unwrap());
        let f = model4_n8_family();
        assert_eq!(f.len(), 5);
        assert!(solves(&f, ModelSpec::Model4 { i: 1, j: 4 }).unwrap());
        assert!(!solves(&f, ModelSpec::Model4 { i: 1, j: 3 }).unwrap());
    }

    #[test]
    fn extensions() {
        let base = Family::from_lists(3, [[1, 2, 3]]).unwrap();
        let f = extend_model4_solution(&base, 1).unwrap();
        assert_eq!(f.n(), 12);
        assert!(solves(&f, ModelSpec::Model4 { i: 1, j: 3 }).unwrap());
        let big = Family::empty(5).unwrap();
        assert!(extend_model4_solution(&big, 1).is_err());
        let loose = Family::from_lists(3, [[1, 2]]).unwrap();
        assert!(extend_model4_solution(&loose, 1).is_err());
        let fano = steiner_triple_system(7).unwrap();
        let f = extend_model4_solution(&fano, 2).unwrap();
        assert_eq!(f.n(), 22);
        assert!(is_pbd(&f, &[3, 4]));
    }
}
