use crate::bitset::ElementSet;
use crate::family::Family;

/// `⌈log₂ n⌉` queries; query `j` holds the elements whose code `x − 1`
/// has bit `j` set.
pub fn binary_separating(n: usize) -> Family {
    let n = n.max(1);
    let bits = usize::BITS - (n - 1).leading_zeros();
    let sets = (0..bits)
        .map(|j| ElementSet::from_elements(n, (1..=n).filter(|x| (x - 1) >> j & 1 == 1)))
        .collect();
    Family::new(n, sets).expect("n >= 1")
}

fn middle_binomial(m: usize) -> u128 {
    let k = m / 2;
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// Smallest `m` with `C(m, ⌊m/2⌋) ≥ n`.
pub fn sperner_code_length(n: usize) -> usize {
    let mut m = 0;
    while middle_binomial(m) < n as u128 {
        m += 1;
    }
    m
}

/// Completely separating family of minimum size: element `x` gets the
/// `x`-th `⌊m/2⌋`-subset of `[m]` in colex order as its code, and query
/// `j` holds the elements whose code contains `j`.
pub fn sperner_code_family(n: usize) -> Family {
    let n = n.max(1);
    let m = sperner_code_length(n);
    let mut sets = vec![ElementSet::empty(n); m];
    if n >= 2 {
        let k = m / 2;
        let mut code: u64 = (1 << k) - 1;
        for x in 1..=n {
            for (j, set) in sets.iter_mut().enumerate() {
                if code >> j & 1 == 1 {
                    set.insert(x);
                }
            }
            // Gosper: next integer with the same popcount
            let c = code & code.wrapping_neg();
            let r = code + c;
            code = (((r ^ code) >> 2) / c) | r;
        }
    }
    Family::new(n, sets).expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{is_completely_separating, is_separating};

    #[test]
    fn binary_examples() {
        assert!(binary_separating(1).is_empty());
        assert_eq!(binary_separating(2).to_lists(), vec![vec![2]]);
        let f = binary_separating(8);
        assert_eq!(f.len(), 3);
        assert!(is_separating(&f));
        assert_eq!(binary_separating(9).len(), 4);
    }

    #[test]
    fn code_lengths() {
        assert_eq!(sperner_code_length(2), 2);
        assert_eq!(sperner_code_length(6), 4);
        assert_eq!(sperner_code_length(7), 5);
        assert_eq!(sperner_code_length(70), 8);
        assert_eq!(sperner_code_length(71), 9);
    }

    #[test]
    fn sperner_codes_completely_separate() {
        assert_eq!(sperner_code_family(2).to_lists(), vec![vec![1], vec![2]]);
        for n in 2..=80 {
            let f = sperner_code_family(n);
            assert_eq!(f.len(), sperner_code_length(n));
            assert!(is_completely_separating(&f), "n={n}");
        }
    }
}
