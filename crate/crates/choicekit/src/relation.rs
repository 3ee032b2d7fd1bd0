//! Binary relations over a finite carrier and strict linear orders over a
//! ground set.

use std::collections::BTreeSet;
use std::fmt;

use crate::ground::{Bundle, GroundSet};

/// A binary relation over carrier `{0, .., carrier-1}`.
///
/// A pair `(a, b)` reads "a relates to b"; for priority relations that is
/// "a is strictly above b".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    carrier: usize,
    pairs: BTreeSet<(u16, u16)>,
}

impl Relation {
    pub fn new(carrier: usize) -> Self {
        Relation {
            carrier,
            pairs: BTreeSet::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (u16, u16)>>(carrier: usize, pairs: I) -> Self {
        let mut r = Relation::new(carrier);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn insert(&mut self, a: u16, b: u16) {
        debug_assert!((a as usize) < self.carrier && (b as usize) < self.carrier);
        self.pairs.insert((a, b));
    }

    pub fn contains(&self, a: u16, b: u16) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u16, u16)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_transitive(&self) -> bool {
        for &(a, b) in &self.pairs {
            for &(b2, c) in self.pairs.range((b, 0)..=(b, u16::MAX)) {
                debug_assert_eq!(b, b2);
                if !self.contains(a, c) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_asymmetric(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| !self.contains(b, a))
    }

    pub fn is_irreflexive(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a != b)
    }

    /// The transitive closure: the inclusion-smallest transitive relation
    /// containing this one. Computed by forward reachability from each point.
    pub fn transitive_closure(&self) -> Relation {
        let mut succ: Vec<Vec<u16>> = vec![Vec::new(); self.carrier];
        for &(a, b) in &self.pairs {
            succ[a as usize].push(b);
        }
        let mut out = Relation::new(self.carrier);
        let mut seen = vec![false; self.carrier];
        let mut stack = Vec::new();
        for a in 0..self.carrier as u16 {
            seen.iter_mut().for_each(|s| *s = false);
            stack.extend(succ[a as usize].iter().copied());
            while let Some(b) = stack.pop() {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    out.insert(a, b);
                    stack.extend(succ[b as usize].iter().copied());
                }
            }
        }
        out
    }
}

/// Cycle found where an acyclic relation was required. `cycle` lists distinct
/// carrier points `x0, .., xk` with each one strictly above the next and the
/// last above the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleError {
    pub cycle: Vec<u16>,
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation has a cycle through points {:?}", self.cycle)
    }
}

impl std::error::Error for CycleError {}

/// A strict linear order over a subset of a ground set's elements, highest
/// priority first.
///
/// Most rules require the carrier to be the whole ground set; maximizer
/// collecting also accepts partial carriers so that elements never chosen by
/// a choice function simply go unranked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearOrder {
    ranking: Vec<u8>,
}

impl LinearOrder {
    /// Panics if the ranking repeats an element.
    pub fn new(ranking: Vec<u8>) -> Self {
        for (i, a) in ranking.iter().enumerate() {
            assert!(
                !ranking[..i].contains(a),
                "ranking repeats element index {a}"
            );
        }
        LinearOrder { ranking }
    }

    pub fn from_labels(ground: &GroundSet, labels: &[&str]) -> Result<Self, crate::GroundSetError> {
        let mut ranking: Vec<u8> = Vec::with_capacity(labels.len());
        for l in labels {
            let i = ground.index_of(l)?;
            if ranking.contains(&i) {
                return Err(crate::GroundSetError::DuplicateLabel {
                    label: l.to_string(),
                });
            }
            ranking.push(i);
        }
        Ok(LinearOrder::new(ranking))
    }

    /// Ground order itself as a linear order (first element highest).
    pub fn ground_order(ground: &GroundSet) -> Self {
        LinearOrder {
            ranking: (0..ground.len() as u8).collect(),
        }
    }

    pub fn ranking(&self) -> &[u8] {
        &self.ranking
    }

    pub fn carrier(&self) -> Bundle {
        self.ranking.iter().fold(Bundle::EMPTY, |b, &i| b.with(i))
    }

    pub fn is_total(&self, ground: &GroundSet) -> bool {
        self.carrier() == ground.full()
    }

    /// The highest-ranked member of `s`; `None` when `s` contains no ranked
    /// element (for a total order, exactly when `s` is empty).
    pub fn top(&self, s: Bundle) -> Option<u8> {
        self.ranking.iter().copied().find(|&i| s.contains(i))
    }

    /// The `q` highest-ranked members of `s` (all of them if fewer).
    pub fn take_top(&self, s: Bundle, q: u32) -> Bundle {
        let mut out = Bundle::EMPTY;
        if q == 0 {
            return out;
        }
        for &i in &self.ranking {
            if s.contains(i) {
                out = out.with(i);
                if out.len() == q {
                    break;
                }
            }
        }
        out
    }

    pub fn render(&self, ground: &GroundSet) -> String {
        self.ranking
            .iter()
            .map(|&i| ground.label(i))
            .collect::<Vec<_>>()
            .join(" ≻ ")
    }
}

/// Extends an acyclic priority relation over a ground set to a strict total
/// order, preserving every pair.
///
/// Tie-breaking is deterministic: repeatedly place the first element (in
/// ground order) that no unplaced element strictly dominates. A cycle in the
/// input is reported with a witness.
pub fn szpilrajn_extend(rel: &Relation, ground: &GroundSet) -> Result<LinearOrder, CycleError> {
    let n = ground.len();
    assert_eq!(
        rel.carrier(),
        n,
        "relation carrier must match the ground set"
    );
    if let Some((a, _)) = rel.pairs().find(|&(a, b)| a == b) {
        return Err(CycleError { cycle: vec![a] });
    }
    let mut remaining: Vec<bool> = vec![true; n];
    let mut ranking = Vec::with_capacity(n);
    for _ in 0..n {
        let pick = (0..n).find(|&b| {
            remaining[b]
                && (0..n).all(|a| !(remaining[a] && a != b && rel.contains(a as u16, b as u16)))
        });
        match pick {
            Some(b) => {
                remaining[b] = false;
                ranking.push(b as u8);
            }
            None => return Err(find_cycle(rel, &remaining)),
        }
    }
    Ok(LinearOrder::new(ranking))
}

/// Every remaining point is dominated by a remaining point, so following
/// dominators must revisit one; the walk between the repeats is a cycle.
fn find_cycle(rel: &Relation, remaining: &[bool]) -> CycleError {
    let n = remaining.len();
    let dominator = |b: usize| -> usize {
        (0..n)
            .find(|&a| remaining[a] && a != b && rel.contains(a as u16, b as u16))
            .expect("no maximal element, so every point has a dominator")
    };
    let start = (0..n).find(|&b| remaining[b]).expect("nonempty residual");
    let mut path = vec![start];
    loop {
        let next = dominator(*path.last().unwrap());
        if let Some(pos) = path.iter().position(|&x| x == next) {
            // path[pos..] walks "dominated -> dominator"; reverse so each
            // listed point is above its successor.
            let mut cycle: Vec<u16> = path[pos..].iter().map(|&x| x as u16).collect();
            cycle.reverse();
            return CycleError { cycle };
        }
        path.push(next);
    }
}
