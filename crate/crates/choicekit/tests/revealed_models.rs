//! Pure choice models: revealed relations, WARP, rationalizability, domain
//! predicates, and the faithful maps, bridged to the combinatorial axioms.

mod common;

use std::collections::BTreeSet;

use choicekit::axioms::{check_ire, Scan};
use choicekit::choice::all_choice_functions;
use choicekit::gen::Rng;
use choicekit::oracle::rationalizable_by_any_relation;
use choicekit::revealed::*;
use choicekit::{Bundle, ChoiceFunction, GroundSet, Relation};
use common::worked_example;

fn model(n: usize, obs: &[(&[u16], &[u16])]) -> PureModel {
    let alts: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let observations = obs
        .iter()
        .map(|(budget, chosen)| BudgetChoice {
            budget: budget.iter().copied().collect(),
            chosen: chosen.iter().copied().collect(),
        })
        .collect();
    PureModel::new(alts, observations).unwrap()
}

#[test]
fn revealed_relation_instances() {
    // one budget, x chosen over y
    let m = model(2, &[(&[0, 1], &[0])]);
    let rels = revealed_relations(&m);
    assert_eq!(rels.weak.pairs().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
    assert_eq!(rels.strict.pairs().collect::<Vec<_>>(), vec![(0, 1)]);

    // everything chosen everywhere: nothing strict
    let m = model(3, &[(&[0, 1], &[0, 1]), (&[1, 2], &[1, 2])]);
    assert!(revealed_relations(&m).strict.is_empty());

    // both chosen at one budget, only x at a bigger one
    let m = model(3, &[(&[0, 1], &[0, 1]), (&[0, 1, 2], &[0])]);
    let rels = revealed_relations(&m);
    assert!(rels.weak.contains(0, 1) && rels.weak.contains(1, 0));
    assert!(rels.strict.contains(0, 1));
}

#[test]
fn warp_instances() {
    let conflicted = model(3, &[(&[0, 1], &[0, 1]), (&[0, 1, 2], &[0])]);
    let report = check_warp(&conflicted);
    assert!(!report.holds);
    let w = report.witness.unwrap();
    assert_eq!(
        {
            let mut p = [w.x, w.y];
            p.sort();
            p
        },
        [0, 1]
    );

    let single = model(2, &[(&[0, 1], &[0])]);
    assert!(check_warp(&single).holds);

    // maximization of a fixed order satisfies it on any domain
    let m = model(
        3,
        &[
            (&[0, 1], &[0]),
            (&[1, 2], &[1]),
            (&[0, 1, 2], &[0]),
            (&[2], &[2]),
        ],
    );
    assert!(check_warp(&m).holds);
}

/// WARP holds exactly when the strict revealed relation is the asymmetric
/// part of the weak one.
#[test]
fn warp_equals_asymmetric_part_characterization() {
    let mut rng = Rng::new(41);
    for _ in 0..300 {
        let n = 2 + rng.below(3) as usize;
        let m = random_model(&mut rng, n);
        let rels = revealed_relations(&m);
        let asym_part_equal = (0..n as u16).all(|x| {
            (0..n as u16).all(|y| {
                let asym = rels.weak.contains(x, y) && !rels.weak.contains(y, x);
                rels.strict.contains(x, y) == asym
            })
        });
        assert_eq!(check_warp(&m).holds, asym_part_equal);
    }
}

fn random_model(rng: &mut Rng, n: usize) -> PureModel {
    let all_budgets: Vec<Vec<u16>> = (1u32..(1 << n))
        .map(|mask| (0..n as u16).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let mut observations: Vec<BudgetChoice> = Vec::new();
    for budget in &all_budgets {
        if rng.below(3) == 0 {
            continue;
        }
        let k = 1 + rng.below(budget.len() as u64) as usize;
        let mut chosen: Vec<u16> = budget.clone();
        rng.shuffle(&mut chosen);
        chosen.truncate(k);
        observations.push(BudgetChoice {
            budget: budget.iter().copied().collect(),
            chosen: chosen.into_iter().collect(),
        });
    }
    PureModel::new((0..n).map(|i| format!("x{i}")).collect(), observations).unwrap()
}

#[test]
fn rationalizability_matches_the_exhaustive_relation_oracle() {
    // every model on three alternatives over the complete budget domain
    let budgets: Vec<Vec<u16>> = (1u32..8)
        .map(|m| (0..3u16).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    let choice_counts: Vec<usize> = budgets.iter().map(|b| (1 << b.len()) - 1).collect();
    let mut stack: Vec<usize> = vec![0; budgets.len()];
    loop {
        // stack[i] = 0 means budget i absent, k > 0 means its k-th choice
        let observations: Vec<BudgetChoice> = stack
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k > 0)
            .map(|(i, &k)| {
                let code = k as u32; // nonzero submask index
                let chosen: BTreeSet<u16> = budgets[i]
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| code & (1 << j) != 0)
                    .map(|(_, &x)| x)
                    .collect();
                BudgetChoice {
                    budget: budgets[i].iter().copied().collect(),
                    chosen,
                }
            })
            .collect();
        let m = PureModel::new(vec!["x".into(), "y".into(), "z".into()], observations).unwrap();
        assert_eq!(
            check_rationalizable(&m).is_some(),
            rationalizable_by_any_relation(&m)
        );

        // odometer over (absent + choices) per budget
        let mut i = 0;
        loop {
            if i == stack.len() {
                return;
            }
            stack[i] += 1;
            if stack[i] <= choice_counts[i] {
                break;
            }
            stack[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn rationalizable_instances() {
    // choices of a fixed order on the complete domain rationalize themselves
    let m = model(
        3,
        &[
            (&[0], &[0]),
            (&[1], &[1]),
            (&[2], &[2]),
            (&[0, 1], &[0]),
            (&[0, 2], &[0]),
            (&[1, 2], &[1]),
            (&[0, 1, 2], &[0]),
        ],
    );
    assert!(check_rationalizable(&m).is_some());

    // violating WARP does not preclude rationalization by a non-transitive
    // relation: here y never meets z, so y drops out of the bigger budget's
    // greatest set (the exhaustive relation oracle agrees)
    let violating = model(3, &[(&[0, 1], &[0, 1]), (&[0, 1, 2], &[0])]);
    assert!(!check_warp(&violating).holds);
    assert!(check_rationalizable(&violating).is_some());
    assert!(rationalizable_by_any_relation(&violating));
    // but no transitive relation rationalizes it
    assert_eq!(check_transitive_rationalizable(&violating).unwrap(), None);

    // whole-budget choices make every alternative greatest
    let lazy = model(3, &[(&[0, 1], &[0, 1]), (&[1, 2], &[1, 2])]);
    let rel = check_rationalizable(&lazy).unwrap();
    assert!(rel.contains(0, 1) && rel.contains(1, 0));
}

#[test]
fn transitive_rationalizability() {
    // induced by a transitive order: the closure candidate works
    let m = model(
        3,
        &[
            (&[0, 1], &[0]),
            (&[1, 2], &[1]),
            (&[0, 2], &[0]),
            (&[0, 1, 2], &[0]),
        ],
    );
    let rel = check_transitive_rationalizable(&m)
        .unwrap()
        .expect("transitive rationalization");
    assert!(rel.is_transitive());

    let violating = model(3, &[(&[0, 1], &[0, 1]), (&[0, 1, 2], &[0])]);
    assert_eq!(check_transitive_rationalizable(&violating).unwrap(), None);

    // beyond four alternatives with a failing candidate: undecided
    let big = model(5, &[(&[0, 1], &[0, 1]), (&[0, 1, 2, 3, 4], &[0])]);
    assert!(matches!(
        check_transitive_rationalizable(&big),
        Err(RevealedError::UnknownAtScale { .. })
    ));
}

#[test]
fn warp_on_a_connected_or_additive_domain_gives_a_transitive_rationalization() {
    let mut rng = Rng::new(43);
    let mut verified = 0;
    for _ in 0..400 {
        let n = 2 + rng.below(3) as usize; // up to 4 alternatives
        let m = random_model(&mut rng, n);
        let d = domain_predicates(&m, None);
        if (d.connected.holds || d.additive.holds) && check_warp(&m).holds {
            verified += 1;
            assert!(
                check_transitive_rationalizable(&m).unwrap().is_some(),
                "WARP on a good domain must rationalize transitively"
            );
        }
    }
    assert!(
        verified > 20,
        "suite generated too few WARP instances ({verified})"
    );
}

#[test]
fn domain_predicate_instances() {
    // the complete domain has everything
    let full = model(
        3,
        &[
            (&[0], &[0]),
            (&[1], &[1]),
            (&[2], &[2]),
            (&[0, 1], &[0]),
            (&[0, 2], &[0]),
            (&[1, 2], &[1]),
            (&[0, 1, 2], &[0]),
        ],
    );
    let d = domain_predicates(&full, None);
    assert!(d.complete.holds && d.additive.holds && d.connected.holds);
    assert!(d.comprehensive.is_none() && d.combinatorial.is_none());

    // two singles: no pair budget, so not connected (nor additive)
    let sparse = model(2, &[(&[0], &[0]), (&[1], &[1])]);
    let d = domain_predicates(&sparse, None);
    assert!(!d.connected.holds);
    assert!(matches!(
        d.connected.witness,
        Some(DomainWitness::MissingSubset { ref subset }) if subset == &vec![0, 1]
    ));
    assert!(!d.additive.holds);

    // a faithful image is a combinatorial choice domain
    let c = worked_example();
    let image = faithful_f(&c).unwrap();
    let leq = bundle_inclusion_order(c.ground());
    let d = domain_predicates(&image, Some(&leq));
    assert!(d.comprehensive.unwrap().holds);
    assert!(d.combinatorial.unwrap().holds);
    // and it is very far from complete as a family of subsets of 2^E
    assert!(!d.complete.holds);
}

#[test]
fn faithful_image_shape() {
    let c = worked_example();
    let image = faithful_f(&c).unwrap();
    assert_eq!(image.alternatives().len(), 8);
    assert_eq!(image.observations().len(), 8);
    for obs in image.observations() {
        assert_eq!(obs.chosen.len(), 1);
    }

    let g1 = GroundSet::new(["a"]).unwrap();
    let id = ChoiceFunction::identity(g1);
    let image = faithful_f(&id).unwrap();
    assert_eq!(image.alternatives(), &["".to_string(), "a".to_string()]);
    let budgets: Vec<Vec<u16>> = image
        .observations()
        .iter()
        .map(|o| o.budget.iter().copied().collect())
        .collect();
    assert_eq!(budgets, vec![vec![0], vec![0, 1]]);
}

#[test]
fn faithful_map_refuses_large_grounds() {
    let g = GroundSet::numbered(13);
    let c = ChoiceFunction::identity(g);
    assert!(matches!(
        faithful_f(&c),
        Err(RevealedError::TooLarge { n: 13 })
    ));
}

#[test]
fn faithful_maps_round_trip() {
    let mut rng = Rng::new(45);
    let mut cases: Vec<ChoiceFunction> = vec![worked_example()];
    for n in 1..=3 {
        let g = GroundSet::numbered(n);
        cases.push(ChoiceFunction::identity(g.clone()));
        for _ in 0..10 {
            cases.push(choicekit::gen::random_table(&mut rng, &g));
        }
    }
    for c in cases {
        let image = faithful_f(&c).unwrap();
        let leq = bundle_inclusion_order(c.ground());
        let back = faithful_g(&image, &leq).unwrap();
        assert_eq!(back.ground.labels(), c.ground().labels());
        let recovered = back.to_choice_function().expect("complete domain");
        assert!(recovered.behavior_eq(&c));
    }
}

#[test]
fn faithful_g_structure_errors() {
    // a single-budget model over the two-point lattice
    let m = model(2, &[(&[0, 1], &[1])]);
    let leq = Relation::from_pairs(2, [(0, 0), (1, 1), (0, 1)]);
    let back = faithful_g(&m, &leq).unwrap();
    assert_eq!(back.ground.len(), 1);
    let key: Vec<(Bundle, Bundle)> = back.table.into_iter().collect();
    assert_eq!(key, vec![(Bundle(1), Bundle(1))]);

    // indecisive choice
    let bad = model(2, &[(&[0, 1], &[0, 1])]);
    assert!(matches!(
        faithful_g(&bad, &leq),
        Err(RevealedError::NotDecisive { budget: 0 })
    ));

    // an order with no bottom is not a Boolean lattice
    let shapeless = Relation::from_pairs(2, [(0, 0), (1, 1)]);
    assert!(matches!(
        faithful_g(&m, &shapeless),
        Err(RevealedError::NotBooleanLattice { .. })
    ));
}

#[test]
fn ire_is_warp_through_the_faithful_map() {
    let g = GroundSet::numbered(3);
    for c in all_choice_functions(&g).unwrap() {
        let ire = check_ire(&c, Scan::exhaustive()).holds;
        let warp = check_warp(&faithful_f(&c).unwrap()).holds;
        assert_eq!(ire, warp);
    }
}
