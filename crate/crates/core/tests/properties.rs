use proptest::prelude::*;

use smartgt::adaptive::{posthoc_candidates, Builtin, Semantics};
use smartgt::constructions::steiner_triple_system;
use smartgt::family::{
    is_cancellative, is_completely_separating, is_intersection_cancellative, is_intersection_closed, is_separating,
    is_sperner,
};
use smartgt::knowledge::{coalition_candidates, solves, Coalition};
use smartgt::{ElementSet, Family, ModelSpec};

fn family() -> impl Strategy<Value = Family> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::btree_set(1u64..(1 << n), 0..10).prop_map(move |masks| {
            let masks: Vec<u64> = masks.into_iter().collect();
            Family::from_masks(n, &masks).unwrap()
        })
    })
}

fn family_with_defective() -> impl Strategy<Value = (Family, usize, Vec<bool>)> {
    family().prop_flat_map(|f| {
        let n = f.n();
        (Just(f), 1..=n, prop::collection::vec(any::<bool>(), n))
    })
}

fn candidates(f: &Family, d: usize, members: &[usize]) -> ElementSet {
    coalition_candidates(f, d, &Coalition::new(f.n(), members.iter().copied()).unwrap()).unwrap().0
}

fn permuted(f: &Family, perm: &[usize]) -> Family {
    let lists: Vec<Vec<usize>> = f.iter().map(|s| s.iter().map(|x| perm[x - 1]).collect()).collect();
    Family::from_lists(f.n(), lists).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn complements_swap_cancellation(f in family()) {
        prop_assert_eq!(is_intersection_cancellative(f.sets()), is_cancellative(f.complement().sets()));
    }

    #[test]
    fn complete_separation_is_a_sperner_dual(f in family()) {
        prop_assert_eq!(is_completely_separating(&f), is_sperner(f.dual().members()));
    }

    #[test]
    fn separation_means_distinct_traces(f in family()) {
        let dual = f.dual();
        let distinct = dual.deduplicated().len() == f.n();
        prop_assert_eq!(is_separating(&f), distinct);
    }

    #[test]
    fn defective_is_always_a_candidate((f, d, pick) in family_with_defective()) {
        let members: Vec<usize> = (1..=f.n()).filter(|&x| pick[x - 1]).collect();
        prop_assume!(!members.is_empty());
        prop_assert!(candidates(&f, d, &members).contains(d));
    }

    #[test]
    fn coalitions_pool_by_intersection((f, d, pick) in family_with_defective()) {
        let members: Vec<usize> = (1..=f.n()).filter(|&x| pick[x - 1]).collect();
        prop_assume!(!members.is_empty());
        let mut meet = ElementSet::full(f.n());
        for &x in &members {
            meet.intersect_with(&candidates(&f, d, &[x]));
        }
        prop_assert_eq!(candidates(&f, d, &members), meet);
    }

    #[test]
    fn closure_keeps_every_candidate_set((f, d, pick) in family_with_defective()) {
        let members: Vec<usize> = (1..=f.n()).filter(|&x| pick[x - 1]).collect();
        prop_assume!(!members.is_empty());
        let closed = f.intersection_closure();
        prop_assert!(is_intersection_closed(closed.sets()));
        prop_assert_eq!(candidates(&f, d, &members), candidates(&closed, d, &members));
    }

    #[test]
    fn models_nest(f in family()) {
        let m2 = solves(&f, ModelSpec::Model2).unwrap();
        let m1 = solves(&f, ModelSpec::Model1).unwrap();
        let sep = solves(&f, ModelSpec::Separating).unwrap();
        prop_assert!(!m2 || m1);
        prop_assert!(!m1 || sep);
        prop_assert_eq!(sep, is_separating(&f));
        prop_assert_eq!(m1, is_completely_separating(&f));
    }

    #[test]
    fn verdicts_ignore_labels(f in family(), seed in any::<u64>()) {
        let n = f.n();
        let mut perm: Vec<usize> = (1..=n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g = permuted(&f, &perm);
        for model in [ModelSpec::Model1, ModelSpec::Model2, ModelSpec::Model3, ModelSpec::Model3Prime] {
            prop_assert_eq!(solves(&f, model).unwrap(), solves(&g, model).unwrap());
        }
        if n >= 3 {
            let m = ModelSpec::Model4 { i: 1, j: 2 };
            prop_assert_eq!(solves(&f, m).unwrap(), solves(&g, m).unwrap());
        }
    }

    #[test]
    fn files_round_trip(f in family()) {
        prop_assert_eq!(Family::from_json(&f.to_json()).unwrap(), f.clone());
        prop_assert_eq!(Family::from_text(&f.to_text()).unwrap(), f.clone());
        prop_assert_eq!(Family::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn dropping_disjoint_blocks_hides_nothing(n in prop::sample::select(vec![7usize, 9, 13]), seed in any::<u64>()) {
        let sts = steiner_triple_system(n).unwrap();
        // a random set of pairwise disjoint blocks, picked greedily from a shifted start
        let start = seed as usize % sts.len();
        let mut covered = ElementSet::empty(n);
        let mut keep = Vec::new();
        for (i, b) in sts.iter().enumerate() {
            let pick = (i + sts.len() - start) % sts.len() < sts.len() / 2 && b.is_disjoint(&covered) && (seed >> (i % 64)) & 1 == 1;
            if pick {
                covered.union_with(b);
            } else {
                keep.push(b.clone());
            }
        }
        let thinned = Family::new(n, keep).unwrap();
        for d in 1..=n {
            for x in 1..=n {
                prop_assert_eq!(candidates(&sts, d, &[x]), candidates(&thinned, d, &[x]));
            }
        }
    }

    #[test]
    fn adaptive_defective_is_a_candidate(n in 3usize..=15, d_seed in any::<usize>(), x_seed in any::<usize>()) {
        let strategies = [Builtin::SepThenReveal, Builtin::HalvingModel3Prime, Builtin::PartitionBalanced(1)];
        let d = 1 + d_seed % n;
        let x = 1 + x_seed % n;
        for s in strategies {
            for semantics in [Semantics::Realized, Semantics::Resimulated] {
                let c = posthoc_candidates(&s, n, d, &Coalition::single(n, x).unwrap(), semantics).unwrap();
                prop_assert!(c.contains(d));
            }
        }
    }
}
