//! Structure theory of path independent choice: choice-equivalence classes,
//! maximal option sets and their lattice, the Hasse diagram, and
//! maximizer-collecting rationalizations.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::choice::ChoiceFunction;
use crate::ground::{Bundle, GroundSet};
use crate::relation::LinearOrder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// A consistency check that path independence guarantees has failed; `s`
    /// is an option set at which it did.
    NotPathIndependent { s: Bundle },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotPathIndependent { s } => {
                write!(
                    f,
                    "choice function is not path independent (seen at set {:#b})",
                    s.0
                )
            }
        }
    }
}

impl std::error::Error for LatticeError {}

/// Union of each order's maximizer in `s`. Orders with a partial carrier
/// contribute nothing on sets disjoint from their carrier; over an empty
/// order sequence the result is always empty.
pub fn am_eval(orders: &[LinearOrder], s: Bundle) -> Bundle {
    orders
        .iter()
        .filter_map(|ord| ord.top(s))
        .fold(Bundle::EMPTY, |acc, i| acc.with(i))
}

/// The unique largest option set choice-equivalent to `s` under a path
/// independent `c`.
///
/// Uses the elementwise test `s♯ = C(s) ∪ {a : C(C(s) ∪ {a}) = C(s)}`, which
/// is O(n) evaluations instead of the O(2^n) pre-image union (the brute-force
/// oracle lives in [`crate::oracle`]). The construction is verified
/// (`s ⊆ s♯` and `C(s♯) = C(s)`) and failure reports a path independence
/// violation.
pub fn sharp(c: &ChoiceFunction, s: Bundle) -> Result<Bundle, LatticeError> {
    let chosen = c.eval(s);
    let mut out = chosen;
    for a in 0..c.ground().len() as u8 {
        if !out.contains(a) && c.eval(chosen.with(a)) == chosen {
            out = out.with(a);
        }
    }
    if !s.is_subset(out) || c.eval(out) != chosen {
        return Err(LatticeError::NotPathIndependent { s });
    }
    Ok(out)
}

/// The family of maximal option sets of a path independent choice function,
/// ordered by inclusion.
#[derive(Debug, Clone)]
pub struct MaximalFamily<'a> {
    sets: Vec<Bundle>,
    choice: &'a ChoiceFunction,
}

impl<'a> MaximalFamily<'a> {
    pub fn sets(&self) -> &[Bundle] {
        &self.sets
    }

    pub fn contains(&self, b: Bundle) -> bool {
        self.sets.binary_search(&b).is_ok()
    }

    pub fn choice(&self) -> &'a ChoiceFunction {
        self.choice
    }

    /// The least member: the intersection of all maximal sets. Empty exactly
    /// when every element is chosen somewhere.
    pub fn bottom(&self) -> Bundle {
        self.sets
            .iter()
            .copied()
            .fold(self.choice.ground().full(), Bundle::inter)
    }
}

/// Builds the maximal family top-down from the full set, removing one chosen
/// element at a time, and cross-checks it against the fixed points of
/// [`sharp`].
pub fn maximal_family(c: &ChoiceFunction) -> Result<MaximalFamily<'_>, LatticeError> {
    let full = c.ground().full();
    let mut seen: BTreeSet<Bundle> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(full);
    queue.push_back(full);
    while let Some(s) = queue.pop_front() {
        for a in c.eval(s).iter() {
            let child = s.without(a);
            if seen.insert(child) {
                queue.push_back(child);
            }
        }
    }
    for s in c.ground().bundles() {
        let is_fixed = sharp(c, s)? == s;
        if is_fixed != seen.contains(&s) {
            return Err(LatticeError::NotPathIndependent { s });
        }
    }
    Ok(MaximalFamily {
        sets: seen.into_iter().collect(),
        choice: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeWitness {
    MissingTop,
    MissingBottom,
    IntersectionEscapes { a: Bundle, b: Bundle },
}

/// Checks the lattice shape of a family: full set present, empty set present,
/// and closure under pairwise intersection.
pub fn verify_lattice(family: &MaximalFamily<'_>) -> crate::axioms::AxiomReport<LatticeWitness> {
    verify_family(family.choice.ground(), &family.sets)
}

/// Same check for a hand-built family of sets.
pub fn verify_family(
    ground: &GroundSet,
    sets: &[Bundle],
) -> crate::axioms::AxiomReport<LatticeWitness> {
    use crate::axioms::{AxiomReport, Coverage};
    let fail = |w| AxiomReport {
        holds: false,
        witness: Some(w),
        coverage: Coverage::Exhaustive,
    };
    let member = |b: Bundle| sets.contains(&b);
    if !member(ground.full()) {
        return fail(LatticeWitness::MissingTop);
    }
    if !member(Bundle::EMPTY) {
        return fail(LatticeWitness::MissingBottom);
    }
    for &a in sets {
        for &b in sets {
            if !member(a.inter(b)) {
                return fail(LatticeWitness::IntersectionEscapes { a, b });
            }
        }
    }
    AxiomReport {
        holds: true,
        witness: None,
        coverage: Coverage::Exhaustive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HasseNode {
    pub set: Bundle,
    pub chosen: Bundle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HasseEdge {
    pub parent: Bundle,
    pub child: Bundle,
    pub label: u8,
}

/// The Hasse diagram of the lattice of maximal option sets: one edge per
/// `(S, a ∈ C(S))`, from `S` down to `S \ {a}`.
#[derive(Debug, Clone)]
pub struct HasseDiagram {
    pub nodes: Vec<HasseNode>,
    pub edges: Vec<HasseEdge>,
}

pub fn hasse(c: &ChoiceFunction) -> Result<HasseDiagram, LatticeError> {
    let family = maximal_family(c)?;
    let mut nodes: Vec<HasseNode> = family
        .sets()
        .iter()
        .map(|&set| HasseNode {
            set,
            chosen: c.eval(set),
        })
        .collect();
    // top first: larger sets before smaller, bit-vector order inside a size
    nodes.sort_by_key(|n| (std::cmp::Reverse(n.set.len()), n.set));
    let mut edges = Vec::new();
    for node in &nodes {
        for label in node.chosen.iter() {
            let child = node.set.without(label);
            debug_assert!(
                family.contains(child),
                "chosen-element child escaped the family"
            );
            edges.push(HasseEdge {
                parent: node.set,
                child,
                label,
            });
        }
    }
    Ok(HasseDiagram { nodes, edges })
}

impl HasseDiagram {
    /// Deterministic DOT text: nodes top-down, labels as sorted element
    /// lists, chosen elements carried in a `chosen` attribute.
    pub fn to_dot(&self, ground: &GroundSet) -> String {
        let name = |b: Bundle| format!("{{{}}}", ground.key(b));
        let mut out = String::from("digraph maximal_option_sets {\n  rankdir=TB;\n");
        for node in &self.nodes {
            out.push_str(&format!(
                "  \"{}\" [chosen=\"{}\"];\n",
                name(node.set),
                ground.key(node.chosen)
            ));
        }
        for node in &self.nodes {
            let mut outgoing: Vec<&HasseEdge> =
                self.edges.iter().filter(|e| e.parent == node.set).collect();
            outgoing.sort_by_key(|e| ground.label(e.label));
            for e in outgoing {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    name(e.parent),
                    name(e.child),
                    ground.label(e.label)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A sequence of linear orders whose collected maximizers reproduce the
/// source choice function on every option set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McRationalization {
    pub orders: Vec<LinearOrder>,
}

/// Enumerates every maximal chain of the Hasse diagram from the full set down
/// to the family's bottom; the subtracted labels along one chain, read in
/// order, form one linear order. Distinct orders are returned sorted.
///
/// Elements never chosen anywhere sit in every maximal set, so they end up in
/// the bottom and stay unranked: the orders' shared carrier is exactly the
/// set of elements that are chosen somewhere. The result is verified to
/// reproduce `c` before it is returned.
pub fn mc_rationalization(c: &ChoiceFunction) -> Result<McRationalization, LatticeError> {
    let family = maximal_family(c)?;
    let bottom = family.bottom();
    let mut found: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut prefix: Vec<u8> = Vec::new();
    chains(
        c,
        family.choice().ground().full(),
        bottom,
        &mut prefix,
        &mut found,
    );
    let orders: Vec<LinearOrder> = found
        .into_iter()
        .filter(|ranking| !ranking.is_empty())
        .map(LinearOrder::new)
        .collect();
    for s in c.ground().bundles() {
        if am_eval(&orders, s) != c.eval(s) {
            return Err(LatticeError::NotPathIndependent { s });
        }
    }
    Ok(McRationalization { orders })
}

fn chains(
    c: &ChoiceFunction,
    at: Bundle,
    bottom: Bundle,
    prefix: &mut Vec<u8>,
    found: &mut BTreeSet<Vec<u8>>,
) {
    if at == bottom {
        found.insert(prefix.clone());
        return;
    }
    for a in c.eval(at).iter() {
        prefix.push(a);
        chains(c, at.without(a), bottom, prefix, found);
        prefix.pop();
    }
}

/// Smallest `m` such that some `m`-subset of the chain-derived orders still
/// reproduces `c`, found by exhaustive subset search in increasing size
/// order. `budget` bounds the number of candidate subsets tested;
/// `Ok(None)` means the budget ran out first.
pub fn min_mc_size(
    c: &ChoiceFunction,
    budget: u64,
) -> Result<Option<(usize, Vec<LinearOrder>)>, LatticeError> {
    let all = mc_rationalization(c)?.orders;
    let reproduces = |subset: &[LinearOrder]| {
        c.ground()
            .bundles()
            .all(|s| am_eval(subset, s) == c.eval(s))
    };
    if all.is_empty() {
        return Ok(Some((0, Vec::new())));
    }
    let mut spent: u64 = 0;
    for k in 1..=all.len() {
        let mut indices: Vec<usize> = (0..k).collect();
        loop {
            if spent >= budget {
                return Ok(None);
            }
            spent += 1;
            let subset: Vec<LinearOrder> = indices.iter().map(|&i| all[i].clone()).collect();
            if reproduces(&subset) {
                return Ok(Some((k, subset)));
            }
            if !next_combination(&mut indices, all.len()) {
                break;
            }
        }
    }
    unreachable!("the full chain-order set always reproduces a verified rationalization")
}

/// Advances `indices` to the next k-combination of `0..n` in lexicographic
/// order; false when the last combination was already reached.
fn next_combination(indices: &mut [usize], n: usize) -> bool {
    let k = indices.len();
    for i in (0..k).rev() {
        if indices[i] < n - k + i {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
