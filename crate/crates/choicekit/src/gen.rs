//! Seeded random generation of orders, rules, and choice-function tables in
//! prescribed axiom classes.
//!
//! The generator is a SplitMix64 stream: tiny, portable, and stable across
//! toolchain versions, which the deterministic-search contracts rely on.
//! Class generators construct members of the class (unions of priority rules
//! for substitutability, interval-consistent tables for irrelevance of
//! rejected elements) and then verify membership, so a bug cannot silently
//! ship an out-of-class instance.

use crate::axioms::{check_ire, check_substitutability, Scan};
use crate::choice::ChoiceFunction;
use crate::ground::{Bundle, GroundSet};
use crate::relation::LinearOrder;
use crate::rules::{Labeling, RuleSpec};
use std::collections::BTreeMap;

/// SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            items.swap(i, self.below(i as u64 + 1) as usize);
        }
    }

    /// Uniform random subset of `within`.
    pub fn subset(&mut self, within: Bundle) -> Bundle {
        Bundle(self.next_u32()).inter(within)
    }
}

pub fn random_order(rng: &mut Rng, ground: &GroundSet) -> LinearOrder {
    let mut ranking: Vec<u8> = (0..ground.len() as u8).collect();
    rng.shuffle(&mut ranking);
    LinearOrder::new(ranking)
}

/// A random instance of one of the named rule classes; all of them are
/// capacity-filling or maximizer-collecting, hence path independent.
pub fn random_pi_rule(rng: &mut Rng, ground: &GroundSet) -> ChoiceFunction {
    let n = ground.len() as u64;
    let spec = match rng.below(5) {
        0 => RuleSpec::PriorityMax {
            q: rng.below(n + 1) as u32,
            order: random_order(rng, ground),
        },
        1 => {
            let m = 1 + rng.below(3) as usize;
            RuleSpec::Mc {
                orders: (0..m).map(|_| random_order(rng, ground)).collect(),
            }
        }
        2 => {
            let q = 1 + rng.below(n.min(3)) as u32;
            RuleSpec::SeqPrioRivalry {
                q,
                orders: (0..q).map(|_| random_order(rng, ground)).collect(),
            }
        }
        3 => random_reserves_spec(rng, ground),
        _ => RuleSpec::TwoStage {
            first: Box::new(RuleSpec::PriorityMax {
                q: 1 + rng.below(2) as u32,
                order: random_order(rng, ground),
            }),
            second: Box::new(RuleSpec::PriorityMax {
                q: 1 + rng.below(2) as u32,
                order: random_order(rng, ground),
            }),
        },
    };
    ChoiceFunction::from_rule(ground.clone(), spec).expect("generated rule is valid")
}

pub fn random_reserves_spec(rng: &mut Rng, ground: &GroundSet) -> RuleSpec {
    let n = ground.len() as u64;
    let label_names = ["l", "m", "h"];
    let k = 1 + rng.below(label_names.len() as u64) as usize;
    let labeling = Labeling::new(
        (0..n)
            .map(|_| label_names[rng.below(k as u64) as usize].to_string())
            .collect(),
    );
    let q = 1 + rng.below(n.max(1)) as u32;
    let mut left = q;
    let mut reserves = BTreeMap::new();
    for l in labeling.label_set() {
        let r = rng.below(left as u64 + 1) as u32;
        reserves.insert(l, r);
        left -= r;
    }
    RuleSpec::Reserves {
        q,
        labeling,
        reserves,
        order: random_order(rng, ground),
    }
}

/// A random substitutable table: a union of priority-maximization rules and
/// size-gated priority rules (quota shrinks when the option set grows past a
/// threshold). Unions preserve substitutability; the gate usually breaks
/// irrelevance of rejected elements. Membership is verified.
pub fn random_subs_table(rng: &mut Rng, ground: &GroundSet) -> ChoiceFunction {
    let n = ground.len() as u64;
    let pieces = 1 + rng.below(3);
    let mut parts: Vec<Box<dyn Fn(Bundle) -> Bundle>> = Vec::new();
    for _ in 0..pieces {
        let ord = random_order(rng, ground);
        if rng.below(2) == 0 {
            let q = rng.below(n + 1) as u32;
            parts.push(Box::new(move |s| ord.take_top(s, q)));
        } else {
            let q_small = 1 + rng.below(n.max(1)) as u32;
            let q_big = rng.below(q_small as u64 + 1) as u32;
            let gate = 1 + rng.below(n.max(1)) as u32;
            parts.push(Box::new(move |s| {
                if s.len() <= gate {
                    ord.take_top(s, q_small)
                } else {
                    ord.take_top(s, q_big)
                }
            }));
        }
    }
    let c = ChoiceFunction::from_fn(ground.clone(), |s| {
        parts.iter().fold(Bundle::EMPTY, |acc, f| acc.union(f(s)))
    });
    debug_assert!(check_substitutability(&c, Scan::exhaustive()).holds);
    c
}

/// A random table satisfying irrelevance of rejected elements, built by
/// fixing values on whole choice-equivalence intervals from the top down:
/// once `C(S) = V` is placed, every `T` with `V ⊆ T ⊆ S` is forced to `V`.
/// Conflicting picks are resampled; `C(S) = S` is always safe, so the
/// construction terminates. Membership is verified.
pub fn random_ire_table(rng: &mut Rng, ground: &GroundSet) -> ChoiceFunction {
    let n = ground.len();
    let mut table: Vec<Option<Bundle>> = vec![None; 1 << n];
    let mut by_size: Vec<Bundle> = ground.bundles().collect();
    by_size.sort_by_key(|b| std::cmp::Reverse(b.len()));
    for s in by_size {
        if table[s.0 as usize].is_some() {
            continue;
        }
        let value = 'pick: {
            for _ in 0..8 {
                let v = rng.subset(s);
                let consistent =
                    s.minus(v)
                        .subsets()
                        .all(|extra| match table[v.union(extra).0 as usize] {
                            Some(existing) => existing == v,
                            None => true,
                        });
                if consistent {
                    break 'pick v;
                }
            }
            s
        };
        for extra in s.minus(value).subsets() {
            table[value.union(extra).0 as usize] = Some(value);
        }
    }
    let table: Vec<Bundle> = table
        .into_iter()
        .map(|v| v.expect("table is total"))
        .collect();
    let c = ChoiceFunction::from_table(ground.clone(), table).expect("interval table is valid");
    debug_assert!(check_ire(&c, Scan::exhaustive()).holds);
    c
}

/// A completely unconstrained random table.
pub fn random_table(rng: &mut Rng, ground: &GroundSet) -> ChoiceFunction {
    let table: Vec<Bundle> = ground.bundles().map(|s| rng.subset(s)).collect();
    ChoiceFunction::from_table(ground.clone(), table).expect("random table is valid")
}

/// Axiom classes the matching suites draw object rules from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleClass {
    /// No constraint at all.
    Any,
    /// Substitutable, not necessarily anything else.
    Substitutable,
    /// Irrelevance of rejected elements, not necessarily substitutable.
    Ire,
    /// Path independent.
    PathIndependent,
}

pub fn random_in_class(rng: &mut Rng, ground: &GroundSet, class: RuleClass) -> ChoiceFunction {
    match class {
        RuleClass::Any => random_table(rng, ground),
        RuleClass::Substitutable => {
            if rng.below(4) == 0 {
                random_pi_rule(rng, ground).compiled()
            } else {
                random_subs_table(rng, ground)
            }
        }
        RuleClass::Ire => {
            if rng.below(4) == 0 {
                random_pi_rule(rng, ground).compiled()
            } else {
                random_ire_table(rng, ground)
            }
        }
        RuleClass::PathIndependent => random_pi_rule(rng, ground),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_path_independence;

    #[test]
    fn class_generators_land_in_class() {
        let g = GroundSet::numbered(5);
        let mut rng = Rng::new(7);
        for _ in 0..40 {
            let subs = random_subs_table(&mut rng, &g);
            assert!(check_substitutability(&subs, Scan::exhaustive()).holds);
            let ire = random_ire_table(&mut rng, &g);
            assert!(check_ire(&ire, Scan::exhaustive()).holds);
            let pi = random_pi_rule(&mut rng, &g);
            assert!(check_path_independence(&pi, Scan::exhaustive()).holds);
        }
    }

    #[test]
    fn rng_is_reproducible() {
        let a: Vec<u64> = {
            let mut r = Rng::new(42);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = Rng::new(42);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
    }
}
