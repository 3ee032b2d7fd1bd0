//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use choicekit::{Bundle, ChoiceFunction, GroundSet, LinearOrder};

pub fn abc() -> GroundSet {
    GroundSet::new(["a", "b", "c"]).unwrap()
}

pub fn set(g: &GroundSet, labels: &[&str]) -> Bundle {
    g.bundle_of_labels(labels.iter().copied()).unwrap()
}

pub fn ord(g: &GroundSet, labels: &[&str]) -> LinearOrder {
    LinearOrder::from_labels(g, labels).unwrap()
}

/// Builds a complete table from `"a,b" -> "a"` style entries; the empty set
/// maps to itself and every nonempty option set must be listed.
pub fn explicit(g: &GroundSet, entries: &[(&str, &str)]) -> ChoiceFunction {
    let parse = |key: &str| -> Bundle {
        if key.is_empty() {
            Bundle::EMPTY
        } else {
            g.bundle_of_labels(key.split(',')).unwrap()
        }
    };
    let mut table: Vec<Option<Bundle>> = vec![None; 1 << g.len()];
    table[0] = Some(Bundle::EMPTY);
    for (key, value) in entries {
        let s = parse(key);
        assert!(table[s.0 as usize].is_none(), "duplicate entry for {key}");
        table[s.0 as usize] = Some(parse(value));
    }
    let table: Vec<Bundle> = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.unwrap_or_else(|| panic!("missing entry for option set {i:#b}")))
        .collect();
    ChoiceFunction::from_table(g.clone(), table).unwrap()
}

/// The running three-element example: the full set picks `{a,b}`, every
/// smaller option set is chosen whole.
pub fn worked_example() -> ChoiceFunction {
    let g = abc();
    ChoiceFunction::from_fn(g.clone(), move |s| {
        if s == g.full() {
            g.bundle_of_labels(["a", "b"]).unwrap()
        } else {
            s
        }
    })
}
