//! Choice rule constructors: priority maximization, maximizer collecting,
//! sequenced priorities with rivalry, reserves, two-stage composition, and
//! the responsive rationalization procedure.

use std::collections::BTreeMap;
use std::fmt;

use crate::axioms::{self, AxiomReport, CapacityWitness};
use crate::choice::ChoiceFunction;
use crate::ground::{Bundle, GroundSet};
use crate::lattice::am_eval;
use crate::relation::{szpilrajn_extend, LinearOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    /// An order must rank the whole ground set for this rule.
    PartialOrderNotAllowed,
    /// Sequenced rivalry needs exactly `q` orders.
    WrongOrderCount { expected: u32, got: usize },
    /// Reserves must not exceed the capacity.
    ReservesExceedCapacity { total: u32, q: u32 },
    /// The labeling must assign a label to every element, and the reserves
    /// profile must cover exactly the label set.
    BadLabeling { detail: String },
    /// The reconstruction check of a procedure failed although its theory
    /// guarantees success; this is a defect, never a legitimate outcome.
    Internal { detail: String },
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleError::PartialOrderNotAllowed => {
                write!(
                    f,
                    "rule requires a priority order over the whole ground set"
                )
            }
            RuleError::WrongOrderCount { expected, got } => {
                write!(f, "rule requires exactly {expected} orders, got {got}")
            }
            RuleError::ReservesExceedCapacity { total, q } => {
                write!(f, "reserves sum to {total}, exceeding capacity {q}")
            }
            RuleError::BadLabeling { detail } => write!(f, "bad labeling: {detail}"),
            RuleError::Internal { detail } => write!(f, "internal defect: {detail}"),
        }
    }
}

impl std::error::Error for RuleError {}

/// A total map from elements to labels; the label set is the map's image, so
/// the map is onto by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    label_of: Vec<String>,
}

impl Labeling {
    pub fn new(label_of: Vec<String>) -> Self {
        Labeling { label_of }
    }

    pub fn label_of(&self, elem: u8) -> &str {
        &self.label_of[elem as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.label_of
    }

    /// Distinct labels, sorted; this is the fixed processing order for
    /// reserves (the outcome is order-independent because pools are
    /// disjoint, which the tests confirm by permuting).
    pub fn label_set(&self) -> Vec<String> {
        let mut set: Vec<String> = self.label_of.clone();
        set.sort();
        set.dedup();
        set
    }

    /// Members of one label's pool.
    pub fn pool(&self, label: &str) -> Bundle {
        let mut b = Bundle::EMPTY;
        for (i, l) in self.label_of.iter().enumerate() {
            if l == label {
                b = b.with(i as u8);
            }
        }
        b
    }
}

#[derive(Debug, Clone)]
pub enum RuleSpec {
    /// Choose all of `S` when `|S| ≤ q`, otherwise the `q` highest-priority
    /// members.
    PriorityMax { q: u32, order: LinearOrder },
    /// Collect each order's maximizer; orders may rank only part of the
    /// ground set.
    Mc { orders: Vec<LinearOrder> },
    /// `q` orders applied in sequence, each picking its maximizer among the
    /// elements the earlier picks left behind.
    SeqPrioRivalry { q: u32, orders: Vec<LinearOrder> },
    /// Per-label reserved seats first, then the residual capacity by raw
    /// priority.
    Reserves {
        q: u32,
        labeling: Labeling,
        reserves: BTreeMap<String, u32>,
        order: LinearOrder,
    },
    /// `H(S) = C1(S) ∪ C2(S \ C1(S))`.
    TwoStage {
        first: Box<RuleSpec>,
        second: Box<RuleSpec>,
    },
}

impl RuleSpec {
    pub fn validate(&self, ground: &GroundSet) -> Result<(), RuleError> {
        match self {
            RuleSpec::PriorityMax { order, .. } => {
                if !order.is_total(ground) {
                    return Err(RuleError::PartialOrderNotAllowed);
                }
            }
            RuleSpec::Mc { .. } => {}
            RuleSpec::SeqPrioRivalry { q, orders } => {
                if orders.len() != *q as usize {
                    return Err(RuleError::WrongOrderCount {
                        expected: *q,
                        got: orders.len(),
                    });
                }
                if orders.iter().any(|o| !o.is_total(ground)) {
                    return Err(RuleError::PartialOrderNotAllowed);
                }
            }
            RuleSpec::Reserves {
                q,
                labeling,
                reserves,
                order,
            } => {
                if !order.is_total(ground) {
                    return Err(RuleError::PartialOrderNotAllowed);
                }
                if labeling.labels().len() != ground.len() {
                    return Err(RuleError::BadLabeling {
                        detail: format!(
                            "labeling covers {} elements, ground set has {}",
                            labeling.labels().len(),
                            ground.len()
                        ),
                    });
                }
                let set = labeling.label_set();
                let keys: Vec<&String> = reserves.keys().collect();
                if keys.len() != set.len() || !set.iter().all(|l| reserves.contains_key(l)) {
                    return Err(RuleError::BadLabeling {
                        detail: "reserves profile must cover exactly the label set".to_string(),
                    });
                }
                let total: u32 = reserves.values().sum();
                if total > *q {
                    return Err(RuleError::ReservesExceedCapacity { total, q: *q });
                }
            }
            RuleSpec::TwoStage { first, second } => {
                first.validate(ground)?;
                second.validate(ground)?;
            }
        }
        Ok(())
    }

    /// Lazy evaluation; assumes the spec was validated for the ground set the
    /// bundle comes from.
    pub fn eval(&self, s: Bundle) -> Bundle {
        match self {
            RuleSpec::PriorityMax { q, order } => {
                if s.len() <= *q {
                    s
                } else {
                    order.take_top(s, *q)
                }
            }
            RuleSpec::Mc { orders } => am_eval(orders, s),
            RuleSpec::SeqPrioRivalry { q, orders } => {
                if s.len() <= *q {
                    return s;
                }
                let mut picked = Bundle::EMPTY;
                for ord in orders {
                    let next = ord
                        .top(s.minus(picked))
                        .expect("|S| > q leaves a candidate for every stage");
                    picked = picked.with(next);
                }
                picked
            }
            RuleSpec::Reserves {
                q,
                labeling,
                reserves,
                order,
            } => {
                let mut first_stage = Bundle::EMPTY;
                for label in labeling.label_set() {
                    let pool = labeling.pool(&label).inter(s);
                    first_stage = first_stage.union(order.take_top(pool, reserves[&label]));
                }
                let residual = q - first_stage.len();
                first_stage.union(order.take_top(s.minus(first_stage), residual))
            }
            RuleSpec::TwoStage { first, second } => {
                let head = first.eval(s);
                head.union(second.eval(s.minus(head)))
            }
        }
    }
}

pub fn priority_max(ground: GroundSet, q: u32, order: LinearOrder) -> ChoiceFunction {
    ChoiceFunction::from_rule(ground, RuleSpec::PriorityMax { q, order })
        .expect("priority_max parameters rejected")
}

pub fn mc_rule(ground: GroundSet, orders: Vec<LinearOrder>) -> ChoiceFunction {
    ChoiceFunction::from_rule(ground, RuleSpec::Mc { orders }).expect("mc parameters rejected")
}

pub fn seq_prio_rivalry(
    ground: GroundSet,
    q: u32,
    orders: Vec<LinearOrder>,
) -> Result<ChoiceFunction, RuleError> {
    ChoiceFunction::from_rule(ground, RuleSpec::SeqPrioRivalry { q, orders })
}

pub fn reserves_rule(
    ground: GroundSet,
    q: u32,
    labeling: Labeling,
    reserves: BTreeMap<String, u32>,
    order: LinearOrder,
) -> Result<ChoiceFunction, RuleError> {
    ChoiceFunction::from_rule(
        ground,
        RuleSpec::Reserves {
            q,
            labeling,
            reserves,
            order,
        },
    )
}

/// Two-stage selection with rivalry over two existing choice functions.
pub fn two_stage(first: &ChoiceFunction, second: &ChoiceFunction) -> ChoiceFunction {
    assert_eq!(
        first.ground(),
        second.ground(),
        "two-stage components must share a ground set"
    );
    let (f, s) = (first.clone(), second.clone());
    ChoiceFunction::from_fn(first.ground().clone(), move |set| {
        let head = f.eval(set);
        head.union(s.eval(set.minus(head)))
    })
}

/// Conventions for promoting a group of elements to the top of an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Promotion {
    /// Promoted elements keep their relative order.
    KeepOrder,
    /// Promoted elements are moved to the top one at a time in priority
    /// order, so the last moved ends up first (reversing their relative
    /// order).
    MoveEachToTop,
}

/// A copy of `order` with the members of `group` promoted above everyone
/// else.
pub fn promote(order: &LinearOrder, group: Bundle, convention: Promotion) -> LinearOrder {
    let mut promoted: Vec<u8> = order
        .ranking()
        .iter()
        .copied()
        .filter(|&i| group.contains(i))
        .collect();
    if convention == Promotion::MoveEachToTop {
        promoted.reverse();
    }
    let rest = order
        .ranking()
        .iter()
        .copied()
        .filter(|&i| !group.contains(i));
    promoted.extend(rest);
    LinearOrder::new(promoted)
}

/// Whether `C` coincides with priority maximization at capacity `q` under
/// `order`, everywhere.
pub fn check_q_responsive(
    c: &ChoiceFunction,
    q: u32,
    order: &LinearOrder,
) -> AxiomReport<CapacityWitness> {
    let reference = RuleSpec::PriorityMax {
        q,
        order: order.clone(),
    };
    for s in c.ground().bundles() {
        if c.eval(s) != reference.eval(s) {
            return AxiomReport {
                holds: false,
                witness: Some(CapacityWitness { q, s }),
                coverage: crate::axioms::Coverage::Exhaustive,
            };
        }
    }
    AxiomReport {
        holds: true,
        witness: None,
        coverage: crate::axioms::Coverage::Exhaustive,
    }
}

/// Recovers `(q, ≽)` with `C = priority_max(q, ≽)` when `C` is
/// capacity-filling and satisfies the weak axiom of revealed strict
/// priority; returns `None` when either check fails.
///
/// Under those two hypotheses the revealed strict priority relation is
/// transitive and asymmetric, so it extends to a total order whose top-`q`
/// rule reproduces `C`. Both facts are re-verified at runtime; a failure is
/// reported as [`RuleError::Internal`] rather than silently returned.
pub fn responsive_rationalize(c: &ChoiceFunction) -> Result<Option<(u32, LinearOrder)>, RuleError> {
    let c = c.compiled();
    let (q, _) = axioms::check_capacity_filling(&c);
    let Some(q) = q else { return Ok(None) };
    if !axioms::check_warsprio(&c).holds {
        return Ok(None);
    }
    let revealed = axioms::revealed_strict_priority(&c).relation;
    if !revealed.is_transitive() {
        return Err(RuleError::Internal {
            detail: "revealed strict priority is not transitive under capacity filling + WARSPrio"
                .to_string(),
        });
    }
    let order = szpilrajn_extend(&revealed, c.ground()).map_err(|e| RuleError::Internal {
        detail: format!("revealed strict priority has a cycle: {e}"),
    })?;
    if !check_q_responsive(&c, q, &order).holds {
        return Err(RuleError::Internal {
            detail: "extension of the revealed priority does not reconstruct the choice function"
                .to_string(),
        });
    }
    Ok(Some((q, order)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five() -> (GroundSet, LinearOrder) {
        let g = GroundSet::numbered(5);
        let ord = LinearOrder::ground_order(&g);
        (g, ord)
    }

    #[test]
    fn priority_max_edges() {
        let (g, ord) = five();
        let c = priority_max(g.clone(), 3, ord.clone());
        assert_eq!(
            c.eval(g.full()),
            g.bundle_of_labels(["1", "2", "3"]).unwrap()
        );
        let all = priority_max(g.clone(), 5, ord.clone());
        assert!(all.behavior_eq(&ChoiceFunction::identity(g.clone())));
        let none = priority_max(g.clone(), 0, ord);
        assert!(g.bundles().all(|s| none.eval(s).is_empty()));
    }

    #[test]
    fn seq_prio_collapses_when_orders_agree() {
        let (g, ord) = five();
        let c =
            seq_prio_rivalry(g.clone(), 3, vec![ord.clone(), ord.clone(), ord.clone()]).unwrap();
        assert!(c.behavior_eq(&priority_max(g, 3, ord)));
    }

    #[test]
    fn seq_prio_with_one_order_is_the_top_picker() {
        let (g, ord) = five();
        let c = seq_prio_rivalry(g.clone(), 1, vec![ord.clone()]).unwrap();
        for s in g.bundles() {
            let expected = match ord.top(s) {
                Some(i) => Bundle::singleton(i),
                None => Bundle::EMPTY,
            };
            assert_eq!(c.eval(s), expected);
        }
    }

    #[test]
    fn two_stage_with_a_vacuous_side() {
        let g = GroundSet::numbered(3);
        let ord = LinearOrder::ground_order(&g);
        let empty = ChoiceFunction::from_fn(g.clone(), |_| Bundle::EMPTY);
        let pm = priority_max(g.clone(), 1, ord);
        assert!(two_stage(&empty, &pm).behavior_eq(&pm));
        assert!(two_stage(&pm, &empty).behavior_eq(&pm));
        // top-1 of 1≻2≻3 then top-1 of 3≻2≻1 picks both extremes
        let rev = LinearOrder::from_labels(&g, &["3", "2", "1"]).unwrap();
        let h = two_stage(
            &priority_max(g.clone(), 1, LinearOrder::ground_order(&g)),
            &priority_max(g.clone(), 1, rev),
        );
        assert_eq!(h.eval(g.full()), g.bundle_of_labels(["1", "3"]).unwrap());
    }

    #[test]
    fn promotion_conventions() {
        let g = GroundSet::numbered(5);
        let ord = LinearOrder::ground_order(&g);
        let mediums = g.bundle_of_labels(["1", "4"]).unwrap();
        let keep = promote(&ord, mediums, Promotion::KeepOrder);
        assert_eq!(keep.render(&g), "1 ≻ 4 ≻ 2 ≻ 3 ≻ 5");
        let moved = promote(&ord, mediums, Promotion::MoveEachToTop);
        assert_eq!(moved.render(&g), "4 ≻ 1 ≻ 2 ≻ 3 ≻ 5");
    }
}
