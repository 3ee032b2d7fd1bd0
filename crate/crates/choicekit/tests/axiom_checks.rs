//! The axiom checkers against their worked instances, with every produced
//! witness replayed against the raw definition.

mod common;

use choicekit::axioms::*;
use choicekit::gen::{random_table, Rng};
use choicekit::rules::priority_max;
use choicekit::{ChoiceFunction, GroundSet, LinearOrder};
use common::{abc, explicit, ord, set, worked_example};

fn ab() -> GroundSet {
    GroundSet::new(["a", "b"]).unwrap()
}

fn replay_subs(c: &ChoiceFunction, w: &SubsWitness) {
    assert!(w.t.is_subset(w.s));
    assert!(c.eval(w.s).inter(w.t).contains(w.elem));
    assert!(!c.eval(w.t).contains(w.elem));
}

fn replay_ire(c: &ChoiceFunction, w: &IreWitness) {
    assert!(c.eval(w.s).is_subset(w.t) && w.t.is_subset(w.s));
    assert_ne!(c.eval(w.t), c.eval(w.s));
}

fn replay_pi(c: &ChoiceFunction, w: &PiWitness) {
    assert_ne!(
        c.eval(w.s.union(w.t)),
        c.eval(c.eval(w.s).union(c.eval(w.t)))
    );
}

#[test]
fn substitutability_instances() {
    let scan = Scan::exhaustive();
    assert!(check_substitutability(&worked_example(), scan).holds);
    assert!(check_substitutability(&ChoiceFunction::identity(abc()), scan).holds);

    let g = ab();
    let c = explicit(&g, &[("a,b", "a"), ("a", ""), ("b", "b")]);
    let report = check_substitutability(&c, scan);
    assert!(!report.holds);
    let w = report.witness.unwrap();
    assert_eq!((w.s, w.t), (set(&g, &["a", "b"]), set(&g, &["a"])));
    assert_eq!(w.elem, g.index_of("a").unwrap());
    replay_subs(&c, &w);
}

#[test]
fn ire_instances() {
    let scan = Scan::exhaustive();
    assert!(check_ire(&worked_example(), scan).holds);

    let g = ab();
    let holds = explicit(&g, &[("a,b", "a"), ("a", "a"), ("b", "")]);
    assert!(check_ire(&holds, scan).holds);

    let fails = explicit(&g, &[("a,b", "a"), ("a", ""), ("b", "b")]);
    let report = check_ire(&fails, scan);
    assert!(!report.holds);
    let w = report.witness.unwrap();
    assert_eq!((w.s, w.t), (set(&g, &["a", "b"]), set(&g, &["a"])));
    replay_ire(&fails, &w);
}

#[test]
fn path_independence_instances() {
    let scan = Scan::exhaustive();
    assert!(check_path_independence(&worked_example(), scan).holds);
    assert!(check_path_independence(&ChoiceFunction::identity(abc()), scan).holds);

    let g = ab();
    let fails = explicit(&g, &[("a,b", "a"), ("a", ""), ("b", "b")]);
    let report = check_path_independence(&fails, scan);
    assert!(!report.holds);
    replay_pi(&fails, &report.witness.unwrap());
}

#[test]
fn size_monotonicity_instances() {
    let g5 = GroundSet::numbered(5);
    let filling = priority_max(g5.clone(), 2, LinearOrder::ground_order(&g5));
    assert!(check_size_monotonicity(&filling).holds);
    assert!(check_size_monotonicity(&worked_example()).holds);

    let g = ab();
    let fails = explicit(&g, &[("a,b", ""), ("a", "a"), ("b", "b")]);
    let report = check_size_monotonicity(&fails);
    assert!(!report.holds);
    let w = report.witness.unwrap();
    assert!(w.small.is_subset(w.large));
    assert!(fails.eval(w.small).len() > fails.eval(w.large).len());
}

#[test]
fn size_monotonicity_reduction_matches_full_scan() {
    // one-element extensions against the naive nested scan, exhaustively at
    // n = 3 and on random tables beyond
    let g = abc();
    for c in choicekit::choice::all_choice_functions(&g).unwrap() {
        assert_eq!(
            check_size_monotonicity(&c).holds,
            choicekit::oracle::size_monotone_full_scan(&c)
        );
    }
    let mut rng = Rng::new(21);
    for n in 4..=7 {
        let gn = GroundSet::numbered(n);
        for _ in 0..60 {
            let c = random_table(&mut rng, &gn);
            assert_eq!(
                check_size_monotonicity(&c).holds,
                choicekit::oracle::size_monotone_full_scan(&c)
            );
        }
    }
}

#[test]
fn capacity_filling_instances() {
    let g5 = GroundSet::numbered(5);
    let (q, report) =
        check_capacity_filling(&priority_max(g5.clone(), 3, LinearOrder::ground_order(&g5)));
    assert_eq!(q, Some(3));
    assert!(report.holds);

    let g4 = GroundSet::numbered(4);
    let (q, _) = check_capacity_filling(&ChoiceFunction::identity(g4));
    assert_eq!(q, Some(4));

    let g = ab();
    let c = explicit(&g, &[("a,b", "a,b"), ("a", ""), ("b", "b")]);
    let (q, report) = check_capacity_filling(&c);
    assert_eq!(q, None);
    let w = report.witness.unwrap();
    assert_eq!(w.q, 2);
    assert_ne!(c.eval(w.s).len(), w.s.len().min(w.q));
}

#[test]
fn respects_priorities_instances() {
    let g = abc();
    let order = ord(&g, &["a", "b", "c"]);
    let pm = priority_max(g.clone(), 2, order.clone());
    assert!(check_respects_priorities(&pm, &order).holds);
    assert!(check_respects_priorities(&ChoiceFunction::identity(g.clone()), &order).holds);

    let g2 = ab();
    let c = explicit(&g2, &[("a,b", "b"), ("a", "a"), ("b", "b")]);
    let report = check_respects_priorities(&c, &ord(&g2, &["a", "b"]));
    let w = report.witness.unwrap();
    assert_eq!(w.s, g2.full());
    assert_eq!(
        (w.chosen, w.rejected),
        (g2.index_of("b").unwrap(), g2.index_of("a").unwrap())
    );
}

#[test]
fn revealed_priority_instances() {
    let g3 = GroundSet::numbered(3);
    let pm = priority_max(g3.clone(), 2, LinearOrder::ground_order(&g3));
    let rel = revealed_strict_priority(&pm).relation;
    let expected: Vec<(u16, u16)> = vec![(0, 2), (1, 2)];
    assert_eq!(rel.pairs().collect::<Vec<_>>(), expected);

    let identity = ChoiceFunction::identity(g3);
    assert!(revealed_strict_priority(&identity).relation.is_empty());

    let g = abc();
    let rel = revealed_strict_priority(&worked_example()).relation;
    let a = g.index_of("a").unwrap() as u16;
    let b = g.index_of("b").unwrap() as u16;
    let c = g.index_of("c").unwrap() as u16;
    assert_eq!(rel.pairs().collect::<Vec<_>>(), vec![(a, c), (b, c)]);
}

#[test]
fn warsprio_instances() {
    let g5 = GroundSet::numbered(5);
    assert!(check_warsprio(&priority_max(g5.clone(), 2, LinearOrder::ground_order(&g5))).holds);
    assert!(check_warsprio(&worked_example()).holds);

    let g = abc();
    let c = explicit(
        &g,
        &[
            ("a,b,c", "b"),
            ("a,b", "a"),
            ("a,c", "a,c"),
            ("b,c", "b,c"),
            ("a", "a"),
            ("b", "b"),
            ("c", "c"),
        ],
    );
    let report = check_warsprio(&c);
    assert!(!report.holds);
    let w = report.witness.unwrap();
    let (x, y) = (g.label(w.a), g.label(w.b));
    assert_eq!(
        {
            let mut v = vec![x, y];
            v.sort();
            v
        },
        vec!["a", "b"]
    );
    // replay both directions on the recorded option sets
    let chosen_ab = c.eval(w.s_ab);
    assert!(chosen_ab.contains(w.a) && w.s_ab.minus(chosen_ab).contains(w.b));
    let chosen_ba = c.eval(w.s_ba);
    assert!(chosen_ba.contains(w.b) && w.s_ba.minus(chosen_ba).contains(w.a));
}

#[test]
fn idempotence_instances() {
    assert!(check_idempotence(&ChoiceFunction::identity(abc())).holds);
    let g = ab();
    let c = explicit(&g, &[("a,b", "a"), ("a", ""), ("b", "b")]);
    let report = check_idempotence(&c);
    let w = report.witness.unwrap();
    assert_eq!(w.s, g.full());
    assert_ne!(c.eval(c.eval(w.s)), c.eval(w.s));
}

#[test]
fn equivalent_reformulations_agree_with_the_base_checkers() {
    let scan = Scan::exhaustive();
    let g = abc();
    let full = g.full();
    for c in choicekit::choice::all_choice_functions(&g).unwrap() {
        let subs = check_substitutability(&c, scan).holds;
        let eq = check_subs_equivalents(&c, scan);
        assert_eq!(eq.subadditivity.holds, subs);
        assert_eq!(eq.monotone_rejection.holds, subs);
        assert_eq!(eq.antitone_nonrejection.holds, subs);
        // failed reformulations replay against their displayed formulas
        if let Some(w) = eq.subadditivity.witness {
            assert!(c
                .eval(w.s.union(w.t))
                .minus(c.eval(w.s).union(c.eval(w.t)))
                .contains(w.elem));
        }
        if let Some(w) = eq.monotone_rejection.witness {
            assert!(w.s.is_subset(w.t));
            assert!(w.s.minus(c.eval(w.s)).contains(w.elem));
            assert!(!w.t.minus(c.eval(w.t)).contains(w.elem));
        }
        if let Some(w) = eq.antitone_nonrejection.witness {
            assert!(w.s.is_subset(w.t));
            assert!(c.eval(w.t).union(full.minus(w.t)).contains(w.elem));
            assert!(!c.eval(w.s).union(full.minus(w.s)).contains(w.elem));
        }

        let pi = check_path_independence(&c, scan).holds;
        let variants = check_pi_variants(&c, scan);
        assert_eq!(variants.image_union.holds, pi);
        assert_eq!(variants.additive_in_image.holds, pi);
        if let Some(PiVariantWitness::PairMismatch { s, t }) = variants.image_union.witness {
            assert_ne!(c.eval(s.union(t)), c.eval(c.eval(s).union(t)));
        }

        // substitutability or irrelevance of rejected elements each force
        // idempotence
        if subs || check_ire(&c, scan).holds {
            assert!(check_idempotence(&c).holds);
        }
    }
    // randomized larger ground sets
    let mut rng = Rng::new(2024);
    for n in 4..=8 {
        let gn = GroundSet::numbered(n);
        for _ in 0..8 {
            let c = random_table(&mut rng, &gn);
            let subs = check_substitutability(&c, scan).holds;
            let eq = check_subs_equivalents(&c, scan);
            assert_eq!(eq.subadditivity.holds, subs);
            assert_eq!(eq.monotone_rejection.holds, subs);
            assert_eq!(eq.antitone_nonrejection.holds, subs);
            let pi = check_path_independence(&c, scan).holds;
            let variants = check_pi_variants(&c, scan);
            assert_eq!(variants.image_union.holds, pi);
            assert_eq!(variants.additive_in_image.holds, pi);
        }
    }
}

#[test]
fn sampled_scans_report_their_coverage() {
    let c = worked_example();
    let report = check_substitutability(&c, Scan::sampled(10, 7));
    assert!(matches!(
        report.coverage,
        Coverage::Sampled { pairs: 10, seed: 7 }
    ));
    let report = check_substitutability(&c, Scan::exhaustive());
    assert!(matches!(report.coverage, Coverage::Exhaustive));
}
