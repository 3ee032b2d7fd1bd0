//! Pure choice models, revealed preference, WARP, rationalizability, domain
//! predicates, and the faithful maps between combinatorial and pure models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::axioms::{AxiomReport, Coverage};
use crate::choice::ChoiceFunction;
use crate::ground::{Bundle, GroundSet};
use crate::relation::Relation;

/// Cap on the ground-set size accepted by [`faithful_f`]: its alternative
/// space is the whole powerset.
pub const MAX_FAITHFUL_GROUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RevealedError {
    InconsistentModel {
        detail: String,
    },
    TooLarge {
        n: usize,
    },
    /// Transitive rationalizability could not be decided: the candidate
    /// failed and the alternative space is too big for the exhaustive
    /// fallback.
    UnknownAtScale {
        alternatives: usize,
    },
    NotBooleanLattice {
        detail: String,
    },
    NotDecisive {
        budget: usize,
    },
    BadBudget {
        budget: usize,
        detail: String,
    },
    ConflictingBudgets {
        detail: String,
    },
}

impl fmt::Display for RevealedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RevealedError::InconsistentModel { detail } => {
                write!(f, "inconsistent pure model: {detail}")
            }
            RevealedError::TooLarge { n } => write!(
                f,
                "faithful map requires at most {MAX_FAITHFUL_GROUND} elements, got {n}"
            ),
            RevealedError::UnknownAtScale { alternatives } => write!(
                f,
                "cannot decide transitive rationalizability over {alternatives} alternatives"
            ),
            RevealedError::NotBooleanLattice { detail } => {
                write!(f, "alternatives do not form a Boolean lattice: {detail}")
            }
            RevealedError::NotDecisive { budget } => {
                write!(f, "budget {budget} has a non-singleton choice")
            }
            RevealedError::BadBudget { budget, detail } => {
                write!(
                    f,
                    "budget {budget} violates the required structure: {detail}"
                )
            }
            RevealedError::ConflictingBudgets { detail } => {
                write!(f, "budgets conflict: {detail}")
            }
        }
    }
}

impl std::error::Error for RevealedError {}

/// One observed budget set with its (nonempty) chosen subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetChoice {
    pub budget: BTreeSet<u16>,
    pub chosen: BTreeSet<u16>,
}

/// A pure choice model: alternatives, a collection of budget sets, and a
/// choice function assigning each budget a nonempty chosen subset.
#[derive(Debug, Clone)]
pub struct PureModel {
    alternatives: Vec<String>,
    observations: Vec<BudgetChoice>,
}

impl PureModel {
    pub fn new(
        alternatives: Vec<String>,
        observations: Vec<BudgetChoice>,
    ) -> Result<Self, RevealedError> {
        for (i, a) in alternatives.iter().enumerate() {
            if alternatives[..i].contains(a) {
                return Err(RevealedError::InconsistentModel {
                    detail: format!("duplicate alternative {a:?}"),
                });
            }
        }
        let mut seen: BTreeMap<&BTreeSet<u16>, &BTreeSet<u16>> = BTreeMap::new();
        for (i, obs) in observations.iter().enumerate() {
            if obs.budget.is_empty() || obs.chosen.is_empty() {
                return Err(RevealedError::InconsistentModel {
                    detail: format!("budget {i} or its choice is empty"),
                });
            }
            if !obs.chosen.is_subset(&obs.budget) {
                return Err(RevealedError::InconsistentModel {
                    detail: format!("choice at budget {i} leaves the budget"),
                });
            }
            if obs.budget.iter().any(|&x| x as usize >= alternatives.len()) {
                return Err(RevealedError::InconsistentModel {
                    detail: format!("budget {i} mentions an unknown alternative"),
                });
            }
            if let Some(prev) = seen.insert(&obs.budget, &obs.chosen) {
                if prev != &obs.chosen {
                    return Err(RevealedError::InconsistentModel {
                        detail: format!(
                            "budget {i} repeats an earlier budget with a different choice"
                        ),
                    });
                }
            }
        }
        Ok(PureModel {
            alternatives,
            observations,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn observations(&self) -> &[BudgetChoice] {
        &self.observations
    }
}

/// The weak and strict revealed preference relations of a model.
#[derive(Debug, Clone)]
pub struct RevealedRelations {
    pub weak: Relation,
    pub strict: Relation,
}

pub fn revealed_relations(m: &PureModel) -> RevealedRelations {
    let n = m.alternatives.len();
    let mut weak = Relation::new(n);
    let mut strict = Relation::new(n);
    for obs in &m.observations {
        for &x in &obs.chosen {
            for &y in &obs.budget {
                weak.insert(x, y);
                if !obs.chosen.contains(&y) {
                    strict.insert(x, y);
                }
            }
        }
    }
    RevealedRelations { weak, strict }
}

/// `budget_weak` reveals `x` weakly over `y`; `budget_strict` reveals `y`
/// strictly over `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WarpWitness {
    pub x: u16,
    pub y: u16,
    pub budget_weak: usize,
    pub budget_strict: usize,
}

/// Weak axiom of revealed preference: `x R_c y` forbids `y R^s_c x`.
/// Equivalently, the strict revealed relation is the asymmetric part of the
/// weak one.
pub fn check_warp(m: &PureModel) -> AxiomReport<WarpWitness> {
    let rels = revealed_relations(m);
    for (x, y) in rels.weak.pairs() {
        if rels.strict.contains(y, x) {
            let weak_at = m
                .observations
                .iter()
                .position(|o| o.chosen.contains(&x) && o.budget.contains(&y))
                .expect("weak pair has an exhibiting budget");
            let strict_at = m
                .observations
                .iter()
                .position(|o| {
                    o.chosen.contains(&y) && o.budget.contains(&x) && !o.chosen.contains(&x)
                })
                .expect("strict pair has an exhibiting budget");
            return AxiomReport {
                holds: false,
                witness: Some(WarpWitness {
                    x,
                    y,
                    budget_weak: weak_at,
                    budget_strict: strict_at,
                }),
                coverage: Coverage::Exhaustive,
            };
        }
    }
    AxiomReport {
        holds: true,
        witness: None,
        coverage: Coverage::Exhaustive,
    }
}

/// The relation-greatest members of a budget.
fn top_of(budget: &BTreeSet<u16>, rel: &Relation) -> BTreeSet<u16> {
    budget
        .iter()
        .copied()
        .filter(|&x| budget.iter().all(|&y| rel.contains(x, y)))
        .collect()
}

fn rationalizes(m: &PureModel, rel: &Relation) -> bool {
    m.observations
        .iter()
        .all(|o| top_of(&o.budget, rel) == o.chosen)
}

/// A model is rationalizable exactly when its own weak revealed preference
/// relation rationalizes it; returns that relation when it does.
pub fn check_rationalizable(m: &PureModel) -> Option<Relation> {
    let rel = revealed_relations(m).weak;
    rationalizes(m, &rel).then_some(rel)
}

/// Cap on the exhaustive fallback search over transitive relations.
pub const MAX_TRANSITIVE_SEARCH: usize = 4;

/// Tries the transitive closure of the weak revealed relation first; if that
/// fails, falls back to exhaustive search over all transitive relations on at
/// most [`MAX_TRANSITIVE_SEARCH`] alternatives.
pub fn check_transitive_rationalizable(m: &PureModel) -> Result<Option<Relation>, RevealedError> {
    let candidate = revealed_relations(m).weak.transitive_closure();
    if rationalizes(m, &candidate) {
        return Ok(Some(candidate));
    }
    let n = m.alternatives.len();
    if n > MAX_TRANSITIVE_SEARCH {
        return Err(RevealedError::UnknownAtScale { alternatives: n });
    }
    let cells: Vec<(u16, u16)> = (0..n as u16)
        .flat_map(|a| (0..n as u16).map(move |b| (a, b)))
        .collect();
    for code in 0u64..(1u64 << cells.len()) {
        let rel = Relation::from_pairs(
            n,
            cells
                .iter()
                .enumerate()
                .filter(|(i, _)| code & (1 << i) != 0)
                .map(|(_, &p)| p),
        );
        if rel.is_transitive() && rationalizes(m, &rel) {
            return Ok(Some(rel));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainWitness {
    /// A nonempty subset of alternatives that is not a budget.
    MissingSubset { subset: Vec<u16> },
    /// The union of budgets `i` and `j` is not a budget.
    MissingUnion { i: usize, j: usize },
    /// `below ≤ inside ∈ budget`, but `below` is missing from it.
    NotDownwardClosed {
        budget: usize,
        inside: u16,
        below: u16,
    },
    /// Two alternatives with no least upper bound in the whole space.
    NoJoin { x: u16, y: u16 },
    /// The join of two members of a budget escapes the budget.
    JoinEscapes { budget: usize, x: u16, y: u16 },
    /// An alternative that is maximal in no budget.
    NeverMaximal { alt: u16 },
}

#[derive(Debug, Clone)]
pub struct DomainReport {
    pub complete: AxiomReport<DomainWitness>,
    pub additive: AxiomReport<DomainWitness>,
    pub connected: AxiomReport<DomainWitness>,
    /// Present only when a partial order on alternatives was supplied.
    pub comprehensive: Option<AxiomReport<DomainWitness>>,
    /// Comprehensive + join-closed budgets + every alternative potentially
    /// budget constrained. Present only with a supplied order.
    pub combinatorial: Option<AxiomReport<DomainWitness>>,
}

fn pass<W>() -> AxiomReport<W> {
    AxiomReport {
        holds: true,
        witness: None,
        coverage: Coverage::Exhaustive,
    }
}

fn fail<W>(w: W) -> AxiomReport<W> {
    AxiomReport {
        holds: false,
        witness: Some(w),
        coverage: Coverage::Exhaustive,
    }
}

/// Classifies the budget domain: complete, additive, connected, and — when a
/// partial order `leq` over alternatives is supplied — comprehensive and
/// combinatorial.
pub fn domain_predicates(m: &PureModel, leq: Option<&Relation>) -> DomainReport {
    let n = m.alternatives.len();
    assert!(
        n <= 20,
        "domain predicates enumerate subsets of the alternative space"
    );
    let budgets: BTreeSet<&BTreeSet<u16>> = m.observations.iter().map(|o| &o.budget).collect();
    let has = |set: &BTreeSet<u16>| budgets.contains(set);

    let complete = (1u32..(1u32 << n))
        .map(|mask| {
            (0..n as u16)
                .filter(|i| mask & (1 << i) != 0)
                .collect::<BTreeSet<u16>>()
        })
        .find(|set| !has(set))
        .map(|set| {
            fail(DomainWitness::MissingSubset {
                subset: set.into_iter().collect(),
            })
        })
        .unwrap_or_else(pass);

    let additive = 'additive: {
        for (i, a) in m.observations.iter().enumerate() {
            for (j, b) in m.observations.iter().enumerate() {
                let union: BTreeSet<u16> = a.budget.union(&b.budget).copied().collect();
                if !has(&union) {
                    break 'additive fail(DomainWitness::MissingUnion { i, j });
                }
            }
        }
        pass()
    };

    let connected = 'connected: {
        for x in 0..n as u16 {
            for y in x..n as u16 {
                for z in y..n as u16 {
                    let trio: BTreeSet<u16> = [x, y, z].into_iter().collect();
                    if !has(&trio) {
                        break 'connected fail(DomainWitness::MissingSubset {
                            subset: trio.into_iter().collect(),
                        });
                    }
                }
            }
        }
        pass()
    };

    let comprehensive = leq.map(|leq| check_comprehensive(m, leq));
    let combinatorial = leq.map(|leq| check_combinatorial(m, leq, &comprehensive));

    DomainReport {
        complete,
        additive,
        connected,
        comprehensive,
        combinatorial,
    }
}

fn check_comprehensive(m: &PureModel, leq: &Relation) -> AxiomReport<DomainWitness> {
    let n = m.alternatives.len() as u16;
    for (bi, obs) in m.observations.iter().enumerate() {
        for &inside in &obs.budget {
            for below in 0..n {
                if leq.contains(below, inside) && !obs.budget.contains(&below) {
                    return fail(DomainWitness::NotDownwardClosed {
                        budget: bi,
                        inside,
                        below,
                    });
                }
            }
        }
    }
    pass()
}

fn join(leq: &Relation, n: u16, x: u16, y: u16) -> Option<u16> {
    let uppers: Vec<u16> = (0..n)
        .filter(|&u| leq.contains(x, u) && leq.contains(y, u))
        .collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq.contains(u, v)))
}

fn check_combinatorial(
    m: &PureModel,
    leq: &Relation,
    comprehensive: &Option<AxiomReport<DomainWitness>>,
) -> AxiomReport<DomainWitness> {
    if let Some(r) = comprehensive {
        if !r.holds {
            return r.clone();
        }
    }
    let n = m.alternatives.len() as u16;
    for (bi, obs) in m.observations.iter().enumerate() {
        for &x in &obs.budget {
            for &y in &obs.budget {
                match join(leq, n, x, y) {
                    None => return fail(DomainWitness::NoJoin { x, y }),
                    Some(j) => {
                        if !obs.budget.contains(&j) {
                            return fail(DomainWitness::JoinEscapes { budget: bi, x, y });
                        }
                    }
                }
            }
        }
    }
    for alt in 0..n {
        let maximal_somewhere = m.observations.iter().any(|obs| {
            obs.budget.contains(&alt)
                && obs
                    .budget
                    .iter()
                    .all(|&y| y == alt || !leq.contains(alt, y))
        });
        if !maximal_somewhere {
            return fail(DomainWitness::NeverMaximal { alt });
        }
    }
    pass()
}

/// The faithful image of a combinatorial choice function: alternatives are
/// all bundles, the budget of an option set `Y` is the powerset of `Y`, and
/// its choice is the singleton `{C(Y)}`. Alternative `i` is the bundle with
/// bit vector `i`.
pub fn faithful_f(c: &ChoiceFunction) -> Result<PureModel, RevealedError> {
    let n = c.ground().len();
    if n > MAX_FAITHFUL_GROUND {
        return Err(RevealedError::TooLarge { n });
    }
    let alternatives: Vec<String> = c.ground().bundles().map(|b| c.ground().key(b)).collect();
    let observations: Vec<BudgetChoice> = c
        .ground()
        .bundles()
        .map(|y| BudgetChoice {
            budget: y.subsets().map(|z| z.0 as u16).collect(),
            chosen: [c.eval(y).0 as u16].into_iter().collect(),
        })
        .collect();
    PureModel::new(alternatives, observations)
}

/// Bundle inclusion as a reflexive partial order on the alternative space of
/// a faithful image (alternative `i` = bundle `i`).
pub fn bundle_inclusion_order(ground: &GroundSet) -> Relation {
    let mut rel = Relation::new(1 << ground.len());
    for hi in ground.bundles() {
        for lo in hi.subsets() {
            rel.insert(lo.0 as u16, hi.0 as u16);
        }
    }
    rel
}

/// A combinatorial choice model with a possibly incomplete option-set domain,
/// as recovered from a pure model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialChoice {
    pub ground: GroundSet,
    pub table: BTreeMap<Bundle, Bundle>,
}

impl CombinatorialChoice {
    /// Promotes to a complete-domain choice function; `None` when some option
    /// set was never observed.
    pub fn to_choice_function(&self) -> Option<ChoiceFunction> {
        if self.table.len() != 1 << self.ground.len() {
            return None;
        }
        let table: Vec<Bundle> = self.ground.bundles().map(|s| self.table[&s]).collect();
        Some(ChoiceFunction::from_table(self.ground.clone(), table).expect("table is valid"))
    }
}

/// Inverse faithful map: checks that `(alternatives, leq)` is a finite
/// Boolean lattice, reads elements off its atoms, and converts every decisive
/// budget choice into one option-set choice.
pub fn faithful_g(m: &PureModel, leq: &Relation) -> Result<CombinatorialChoice, RevealedError> {
    let n = m.alternatives.len() as u16;
    let bad = |detail: &str| RevealedError::NotBooleanLattice {
        detail: detail.to_string(),
    };
    if leq.carrier() != n as usize {
        return Err(bad("order carrier does not match the alternative count"));
    }
    for x in 0..n {
        if !leq.contains(x, x) {
            return Err(bad("order is not reflexive"));
        }
        for y in 0..n {
            if x != y && leq.contains(x, y) && leq.contains(y, x) {
                return Err(bad("order is not antisymmetric"));
            }
        }
    }
    if !leq.is_transitive() {
        return Err(bad("order is not transitive"));
    }
    let bottom = (0..n)
        .find(|&x| (0..n).all(|y| leq.contains(x, y)))
        .ok_or_else(|| bad("no bottom alternative"))?;
    let atoms: Vec<u16> = (0..n)
        .filter(|&x| x != bottom && (0..n).all(|z| !(leq.contains(z, x) && z != x && z != bottom)))
        .collect();
    if atoms.len() > crate::ground::MAX_ELEMENTS || (1usize << atoms.len()) != n as usize {
        return Err(bad("alternative count is not 2^(number of atoms)"));
    }
    let phi = |x: u16| -> Bundle {
        atoms
            .iter()
            .enumerate()
            .fold(Bundle::EMPTY, |acc, (k, &a)| {
                if leq.contains(a, x) {
                    acc.with(k as u8)
                } else {
                    acc
                }
            })
    };
    let mut images = BTreeSet::new();
    for x in 0..n {
        if !images.insert(phi(x)) {
            return Err(bad("atom decomposition is not injective"));
        }
        for y in 0..n {
            if leq.contains(x, y) != phi(x).is_subset(phi(y)) {
                return Err(bad("atom decomposition does not preserve the order"));
            }
        }
    }
    let ground = GroundSet::new(atoms.iter().map(|&a| m.alternatives[a as usize].clone()))
        .map_err(|e| RevealedError::NotBooleanLattice {
            detail: format!("bad atom labels: {e}"),
        })?;

    let mut table: BTreeMap<Bundle, Bundle> = BTreeMap::new();
    for (bi, obs) in m.observations.iter().enumerate() {
        if obs.chosen.len() != 1 {
            return Err(RevealedError::NotDecisive { budget: bi });
        }
        for &x in &obs.budget {
            for y in 0..n {
                if leq.contains(y, x) && !obs.budget.contains(&y) {
                    return Err(RevealedError::BadBudget {
                        budget: bi,
                        detail: "budget is not downward closed".to_string(),
                    });
                }
            }
            for &y in &obs.budget {
                match join(leq, n, x, y) {
                    Some(j) if obs.budget.contains(&j) => {}
                    _ => {
                        return Err(RevealedError::BadBudget {
                            budget: bi,
                            detail: "budget is not join closed".to_string(),
                        })
                    }
                }
            }
        }
        let option_set = obs
            .budget
            .iter()
            .fold(Bundle::EMPTY, |acc, &y| acc.union(phi(y)));
        let chosen = phi(*obs.chosen.iter().next().unwrap());
        if let Some(prev) = table.insert(option_set, chosen) {
            if prev != chosen {
                return Err(RevealedError::ConflictingBudgets {
                    detail: format!(
                        "two budgets span option set {} with different choices",
                        ground.render(option_set)
                    ),
                });
            }
        }
    }
    Ok(CombinatorialChoice { ground, table })
}
