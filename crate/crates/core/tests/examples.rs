//! Worked cases for the public API, one small scenario per operation.

use smartgt::adaptive::{check_adaptive_model4, counting_bound, run, Answerer, Builtin, Knowledge, Semantics};
use smartgt::constructions::*;
use smartgt::exact_cover::find_parallel_classes;
use smartgt::family::{is_completely_separating, is_pbd, is_separating, is_sperner};
use smartgt::knowledge::{check, solves, Violation};
use smartgt::search::{exists_solution, min_solution_size, Outcome, SearchSpec};
use smartgt::{Family, ModelSpec};

#[test]
fn spencer_example_dual() {
    let f = Family::from_lists(3, [[1, 2], [2, 3], [1, 3]]).unwrap();
    assert!(is_completely_separating(&f));
    assert!(is_sperner(f.dual().members()));
}

#[test]
fn bose_nine_resolves_into_four_classes() {
    let f = sts_bose(9).unwrap();
    assert_eq!(find_parallel_classes(&f).unwrap().len(), 4);
}

#[test]
fn sperner_codes_at_seventy() {
    let f = sperner_code_family(70);
    assert_eq!(f.len(), 8);
    assert!(is_completely_separating(&f));
}

#[test]
fn model3_fails_on_a_separating_family() {
    let f = binary_separating(8);
    assert!(is_separating(&f));
    assert!(matches!(check(&f, ModelSpec::Model3).unwrap(), Some(Violation::ElementKnows { .. })));
}

#[test]
fn search_examples() {
    let r = exists_solution(&SearchSpec::new(ModelSpec::Model3, 3)).unwrap();
    assert_eq!(r.outcome, Outcome::NotExists);
    let r = exists_solution(&SearchSpec::new(ModelSpec::Model4 { i: 1, j: 2 }, 4)).unwrap();
    assert_eq!((r.outcome, r.explored), (Outcome::NotExists, 1 << 15));
    let (k, w) = min_solution_size(ModelSpec::Model2, 3, None).unwrap().unwrap();
    assert_eq!(k, 3);
    assert_eq!(w.to_lists(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
}

#[test]
fn witnesses_reverify() {
    for (model, n) in [
        (ModelSpec::Model1, 5),
        (ModelSpec::Model2, 4),
        (ModelSpec::Model3Prime, 5),
        (ModelSpec::Model4 { i: 1, j: 3 }, 5),
    ] {
        let r = exists_solution(&SearchSpec::new(model, n).max_size(4).pruned()).unwrap();
        if let Outcome::Exists(w) = r.outcome {
            assert!(solves(&w, model).unwrap(), "{model} n={n}");
        }
    }
}

#[test]
fn pbd_and_extension_examples() {
    let nine = pbd34(9).unwrap();
    assert!(is_pbd(&nine, &[3, 4]));
    assert!(solves(&pbd34(13).unwrap(), ModelSpec::Model4 { i: 1, j: 3 }).unwrap());
    let f = extend_model4_solution(&steiner_triple_system(7).unwrap(), 2).unwrap();
    assert!(solves(&f, ModelSpec::Model4 { i: 1, j: 3 }).unwrap());
    let too_many = Family::empty(8).unwrap();
    assert!(extend_model4_solution(&too_many, 2).is_err());
}

#[test]
fn adaptive_examples() {
    assert!(check_adaptive_model4(&Builtin::SingletonsPairs, 9, 1, 2, Semantics::Realized).unwrap());
    assert!(counting_bound(9, 1, 3));
    let t = run(&Builtin::SingletonsTriple, Answerer::FixedDefective(3), 8).unwrap();
    assert_eq!(t.len(), 8 + 3);
    // once only x is left against an always-YES adversary, x knows
    for s in [Builtin::SepThenReveal, Builtin::HalvingModel3Prime, Builtin::SingletonsPairs] {
        for n in [5, 7, 9] {
            let t = run(&s, Answerer::YesUnlessContradiction, n).unwrap();
            let x = t.consistent().first().unwrap();
            let k = Knowledge::compute(&s, n, Semantics::Realized).unwrap();
            assert_eq!(k.element(x, x).to_vec(), vec![x], "{s} n={n}");
        }
    }
}

#[test]
fn pairs_strategy_candidate_sets_are_disjoint() {
    for n in [5, 7, 9, 11] {
        let k = Knowledge::compute(&Builtin::SingletonsPairs, n, Semantics::Realized).unwrap();
        assert!(k.satisfies_model4(1, 2));
        for d in 1..=n {
            let others: Vec<_> = (1..=n)
                .filter(|&a| a != d)
                .map(|a| {
                    let mut s = k.element(d, a).clone();
                    s.remove(d);
                    s
                })
                .collect();
            for (p, a) in others.iter().enumerate() {
                assert!(!a.is_empty());
                for b in &others[p + 1..] {
                    assert!(a.is_disjoint(b), "n={n} d={d}");
                }
            }
        }
    }
}
