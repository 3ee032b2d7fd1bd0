//! Brute-force reference implementations.
//!
//! These deliberately restate definitions by direct enumeration and stay
//! independent of the optimized paths they are used to check.

use crate::choice::ChoiceFunction;
use crate::ground::Bundle;
use crate::relation::Relation;
use crate::revealed::PureModel;

/// The union of the whole pre-image of `C(s)`: the largest choice-equivalent
/// superset when `c` is path independent. `O(2^n)` evaluations, against the
/// elementwise construction in [`crate::lattice::sharp`].
pub fn sharp_preimage_union(c: &ChoiceFunction, s: Bundle) -> Bundle {
    let chosen = c.eval(s);
    c.ground()
        .bundles()
        .filter(|&t| c.eval(t) == chosen)
        .fold(Bundle::EMPTY, Bundle::union)
}

/// Size monotonicity by the full nested-pair scan, against the
/// one-element-extension reduction.
pub fn size_monotone_full_scan(c: &ChoiceFunction) -> bool {
    c.ground()
        .bundles()
        .all(|s| s.subsets().all(|t| c.eval(t).len() <= c.eval(s).len()))
}

/// Whether any preference relation at all rationalizes the model, by trying
/// every relation on the alternative space. Only callable for up to 3
/// alternatives (512 relations).
pub fn rationalizable_by_any_relation(m: &PureModel) -> bool {
    let n = m.alternatives().len();
    assert!(
        n <= 3,
        "exhaustive relation search is capped at 3 alternatives"
    );
    let cells: Vec<(u16, u16)> = (0..n as u16)
        .flat_map(|a| (0..n as u16).map(move |b| (a, b)))
        .collect();
    (0u32..(1u32 << cells.len())).any(|code| {
        let rel = Relation::from_pairs(
            n,
            cells
                .iter()
                .enumerate()
                .filter(|(i, _)| code & (1 << i) != 0)
                .map(|(_, &p)| p),
        );
        m.observations().iter().all(|obs| {
            let top: std::collections::BTreeSet<u16> = obs
                .budget
                .iter()
                .copied()
                .filter(|&x| obs.budget.iter().all(|&y| rel.contains(x, y)))
                .collect();
            top == obs.chosen
        })
    })
}
