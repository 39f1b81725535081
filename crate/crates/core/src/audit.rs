//! Cross-checks of the structural characterizations against the knowledge
//! engine, exhaustively on tiny ground sets and by sampling beyond.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::family::{
    is_cancellative, is_completely_separating, is_intersection_cancellative, is_separating, is_sperner, Family,
};
use crate::knowledge::{coalition_candidates, maximal_trace_holders, solves, Coalition, ModelSpec};

/// Exhaustive audits enumerate `2^(2^n − 1)` families.
pub const MAX_EXHAUSTIVE_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Model 2 ⟺ Sperner dual that is intersection cancellative.
    DualCharacterization,
    /// Model 2 ⟺ completely separating plus the triple condition.
    TripleCondition,
    /// Intersection cancellative ⟺ two of three non-containments per triple.
    TwoOfThree,
    /// Intersection cancellative ⟺ complements cancellative.
    ComplementDuality,
    /// Completely separating ⟺ Sperner dual.
    SpernerDual,
}

impl Equivalence {
    pub const ALL: [Equivalence; 5] = [
        Equivalence::DualCharacterization,
        Equivalence::TripleCondition,
        Equivalence::TwoOfThree,
        Equivalence::ComplementDuality,
        Equivalence::SpernerDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equivalence::DualCharacterization => "model2-dual-sperner-intersection-cancellative",
            Equivalence::TripleCondition => "model2-triple-condition",
            Equivalence::TwoOfThree => "intersection-cancellative-two-of-three",
            Equivalence::ComplementDuality => "intersection-cancellative-complement",
            Equivalence::SpernerDual => "completely-separating-sperner-dual",
        }
    }

    /// Both sides of the equivalence for `f`.
    pub fn sides(self, f: &Family) -> (bool, bool) {
        match self {
            Equivalence::DualCharacterization => {
                let dual = f.dual();
                let rhs = is_sperner(dual.members()) && is_intersection_cancellative(&dual.deduplicated());
                (model2(f), rhs)
            }
            Equivalence::TripleCondition => (model2(f), is_completely_separating(f) && triple_condition(f)),
            Equivalence::TwoOfThree => (is_intersection_cancellative(f.sets()), two_of_three(f.sets())),
            Equivalence::ComplementDuality => (
                is_intersection_cancellative(f.sets()),
                is_cancellative(f.complement().sets()),
            ),
            Equivalence::SpernerDual => (is_completely_separating(f), is_sperner(f.dual().members())),
        }
    }
}

fn model2(f: &Family) -> bool {
    solves(f, ModelSpec::Model2).expect("n >= 1 is a valid Model 2 instance")
}

/// For distinct `a, b, c` some member holds `a, b` but not `c`, or `a, c`
/// but not `b`.
fn triple_condition(f: &Family) -> bool {
    let n = f.n();
    (1..=n).all(|a| {
        (1..=n).all(|b| {
            (b + 1..=n).all(|c| {
                a == b
                    || a == c
                    || f.iter().any(|s| {
                        s.contains(a) && (s.contains(b) != s.contains(c))
                    })
            })
        })
    })
}

fn two_of_three(sets: &[ElementSet]) -> bool {
    let k = sets.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let (x, y, z) = (&sets[a], &sets[b], &sets[c]);
                let holds = [
                    !x.intersection(y).is_subset(z),
                    !x.intersection(z).is_subset(y),
                    !z.intersection(y).is_subset(x),
                ];
                if holds.iter().filter(|&&h| h).count() < 2 {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalence: Equivalence,
    /// Families on which both sides hold.
    pub both_true: u64,
    pub counterexamples: u64,
    pub first_counterexample: Option<Family>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub n: usize,
    pub mode: AuditMode,
    pub families: u64,
    pub equivalences: Vec<EquivalenceReport>,
}

impl AuditReport {
    pub fn counterexamples(&self) -> u64 {
        self.equivalences.iter().map(|e| e.counterexamples).sum()
    }

    pub fn to_json(&self) -> String {
        let mode = match self.mode {
            AuditMode::Exhaustive => json!("exhaustive"),
            AuditMode::Sampled { samples, seed } => json!({ "samples": samples, "seed": seed }),
        };
        let eqs: Vec<_> = self
            .equivalences
            .iter()
            .map(|e| {
                json!({
                    "name": e.equivalence.name(),
                    "both_true": e.both_true,
                    "counterexamples": e.counterexamples,
                    "first_counterexample": e.first_counterexample.as_ref()
                        .map(|f| json!({ "n": f.n(), "sets": f.to_lists() })),
                })
            })
            .collect();
        json!({ "n": self.n, "mode": mode, "families": self.families, "equivalences": eqs }).to_string()
    }
}

/// A family of `k` distinct nonempty subsets of `[n]`, uniformly among such.
pub fn random_family<R: Rng>(rng: &mut R, n: usize, k: usize) -> Family {
    assert!((1..64).contains(&n), "sampling needs 1 <= n < 64");
    let total = (1u64 << n) - 1;
    let masks: Vec<u64> = if n < 20 {
        let mut picked: Vec<u64> = sample(rng, total as usize, k.min(total as usize))
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect();
        picked.sort_unstable();
        picked
    } else {
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < k {
            picked.insert(rng.gen_range(1..=total));
        }
        picked.into_iter().collect()
    };
    Family::from_masks(n, &masks).expect("n >= 1")
}

/// Runs every equivalence over all families on `[n]` (`n ≤ 4`) or over
/// random families of random sizes.
pub fn equivalence_audit(n: usize, mode: AuditMode) -> Result<AuditReport> {
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    let mut reports: Vec<EquivalenceReport> = Equivalence::ALL
        .iter()
        .map(|&equivalence| EquivalenceReport {
            equivalence,
            both_true: 0,
            counterexamples: 0,
            first_counterexample: None,
        })
        .collect();
    let mut visit = |f: &Family| {
        for r in reports.iter_mut() {
            let (lhs, rhs) = r.equivalence.sides(f);
            if lhs != rhs {
                r.counterexamples += 1;
                r.first_counterexample.get_or_insert_with(|| f.clone());
            } else if lhs {
                r.both_true += 1;
            }
        }
    };
    let families = match mode {
        AuditMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                let members = (1u128 << n) - 1;
                return Err(Error::BudgetExceeded {
                    estimate: 1u128.checked_shl(members as u32).unwrap_or(u128::MAX),
                    budget: 1 << ((1 << MAX_EXHAUSTIVE_N) - 1),
                });
            }
            let subsets = (1u64 << n) - 1;
            let count = 1u64 << subsets;
            for choice in 0..count {
                let masks: Vec<u64> = (0..subsets).filter(|b| choice >> b & 1 == 1).map(|b| b + 1).collect();
                visit(&Family::from_masks(n, &masks).expect("n >= 1"));
            }
            count
        }
        AuditMode::Sampled { samples, seed } => {
            if n >= 64 {
                return Err(Error::InvalidModel("sampled audits support n < 64".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = (1u64 << n) - 1;
            let max_k = total.min(3 * n as u64) as usize;
            for _ in 0..samples {
                let k = rng.gen_range(0..=max_k);
                visit(&random_family(&mut rng, n, k));
            }
            samples
        }
    };
    Ok(AuditReport {
        n,
        mode,
        families,
        equivalences: reports,
    })
}

/// Draws random separating families and checks that every element with an
/// inclusion-wise maximal trace identifies itself as defective. Returns the
/// number of families checked and the first failure.
pub fn max_trace_audit(n: usize, samples: u64, seed: u64) -> (u64, Option<(Family, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = if n >= 63 { u64::MAX } else { (1u64 << n) - 1 };
    let min_k = (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize;
    let max_k = (total.min(3 * n as u64) as usize).max(min_k);
    let mut checked = 0;
    while checked < samples {
        let k = rng.gen_range(min_k..=max_k);
        let f = random_family(&mut rng, n, k);
        if !is_separating(&f) {
            continue;
        }
        checked += 1;
        for x in maximal_trace_holders(&f) {
            let me = Coalition::single(n, x).expect("x in range");
            let cand = coalition_candidates(&f, x, &me).expect("x in range");
            if cand.len() != 1 {
                return (checked, Some((f, x)));
            }
        }
    }
    (checked, None)
}
