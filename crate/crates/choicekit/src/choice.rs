//! Combinatorial choice functions with a complete domain.

use std::fmt;

use crate::ground::{Bundle, GroundSet};
use crate::rules::RuleSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceError {
    /// The option set is not a subset of the ground set.
    OutOfGround { set: Bundle },
    /// A table entry chooses outside its option set, or the table has the
    /// wrong size.
    BadTable { set: Bundle, chosen: Bundle },
    /// Exhaustive enumeration of all choice functions is only supported for
    /// tiny ground sets.
    EnumerationTooLarge { n: usize },
}

impl fmt::Display for ChoiceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoiceError::OutOfGround { set } => {
                write!(
                    f,
                    "option set {:#b} is not contained in the ground set",
                    set.0
                )
            }
            ChoiceError::BadTable { set, chosen } => write!(
                f,
                "table chooses {:#b} from {:#b}, which is not a subset",
                chosen.0, set.0
            ),
            ChoiceError::EnumerationTooLarge { n } => {
                write!(
                    f,
                    "cannot enumerate all choice functions on {n} > 3 elements"
                )
            }
        }
    }
}

impl std::error::Error for ChoiceError {}

#[derive(Debug, Clone)]
pub enum ChoiceBody {
    /// `table[s.0]` is the chosen bundle at option set `s`.
    Table(Vec<Bundle>),
    Rule(RuleSpec),
}

/// A total map from option sets to bundles with `C(S) ⊆ S`, hence `C(∅) = ∅`.
///
/// The empty chosen set is a legitimate value at any option set; decisiveness
/// lives at the bundle level, not the element level.
#[derive(Debug, Clone)]
pub struct ChoiceFunction {
    ground: GroundSet,
    body: ChoiceBody,
}

impl ChoiceFunction {
    pub fn from_table(ground: GroundSet, table: Vec<Bundle>) -> Result<Self, ChoiceError> {
        if table.len() != 1 << ground.len() {
            return Err(ChoiceError::BadTable {
                set: Bundle(table.len() as u32),
                chosen: Bundle::EMPTY,
            });
        }
        for (s, &chosen) in table.iter().enumerate() {
            if !chosen.is_subset(Bundle(s as u32)) {
                return Err(ChoiceError::BadTable {
                    set: Bundle(s as u32),
                    chosen,
                });
            }
        }
        Ok(ChoiceFunction {
            ground,
            body: ChoiceBody::Table(table),
        })
    }

    /// Builds a table by evaluating `f` at every option set.
    pub fn from_fn(ground: GroundSet, f: impl Fn(Bundle) -> Bundle) -> Self {
        let table: Vec<Bundle> = ground.bundles().map(f).collect();
        ChoiceFunction::from_table(ground, table).expect("from_fn produced C(S) ⊄ S")
    }

    pub fn from_rule(ground: GroundSet, rule: RuleSpec) -> Result<Self, crate::rules::RuleError> {
        rule.validate(&ground)?;
        Ok(ChoiceFunction {
            ground,
            body: ChoiceBody::Rule(rule),
        })
    }

    /// `C(S) = S` everywhere.
    pub fn identity(ground: GroundSet) -> Self {
        ChoiceFunction::from_fn(ground, |s| s)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn body(&self) -> &ChoiceBody {
        &self.body
    }

    /// Evaluates `C(S)`. Panics if `S` is not a subset of the ground set; use
    /// [`ChoiceFunction::checked_eval`] at input boundaries.
    pub fn eval(&self, s: Bundle) -> Bundle {
        assert!(
            self.ground.contains_bundle(s),
            "option set {:#b} outside ground set of size {}",
            s.0,
            self.ground.len()
        );
        match &self.body {
            ChoiceBody::Table(table) => table[s.0 as usize],
            ChoiceBody::Rule(rule) => rule.eval(s),
        }
    }

    pub fn checked_eval(&self, s: Bundle) -> Result<Bundle, ChoiceError> {
        if !self.ground.contains_bundle(s) {
            return Err(ChoiceError::OutOfGround { set: s });
        }
        Ok(self.eval(s))
    }

    /// Compiles a rule-backed function to an explicit table, which makes the
    /// exhaustive axiom scans plain array lookups.
    pub fn compiled(&self) -> ChoiceFunction {
        match &self.body {
            ChoiceBody::Table(_) => self.clone(),
            ChoiceBody::Rule(_) => ChoiceFunction::from_fn(self.ground.clone(), |s| self.eval(s)),
        }
    }

    /// Pointwise equality of behavior; grounds must carry the same labels in
    /// the same order.
    pub fn behavior_eq(&self, other: &ChoiceFunction) -> bool {
        self.ground == other.ground && self.ground.bundles().all(|s| self.eval(s) == other.eval(s))
    }
}

/// All `2^(n·2^(n-1))` choice functions on the ground set, in a fixed order.
/// Only defined for `n ≤ 3` (4,096 functions); larger universes are out of
/// reach for exhaustive scans.
pub fn all_choice_functions(
    ground: &GroundSet,
) -> Result<impl Iterator<Item = ChoiceFunction> + '_, ChoiceError> {
    let n = ground.len();
    if n > 3 {
        return Err(ChoiceError::EnumerationTooLarge { n });
    }
    let bit_count: usize = (0..(1usize << n))
        .map(|s| (s as u32).count_ones() as usize)
        .sum();
    let total: u64 = 1u64 << bit_count;
    Ok((0..total).map(move |code| {
        let mut rest = code;
        let table: Vec<Bundle> = ground
            .bundles()
            .map(|s| {
                let k = s.len();
                let local = (rest & ((1u64 << k) - 1)) as u32;
                rest >>= k;
                // spread the k low bits of `local` onto the members of s
                let mut chosen = Bundle::EMPTY;
                for (j, i) in s.iter().enumerate() {
                    if local & (1 << j) != 0 {
                        chosen = chosen.with(i);
                    }
                }
                chosen
            })
            .collect();
        ChoiceFunction::from_table(ground.clone(), table).expect("enumerated table is valid")
    }))
}
