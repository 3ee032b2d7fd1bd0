//! Decision procedures for the behavioral axioms of combinatorial choice.
//!
//! Every checker returns an [`AxiomReport`] whose witness, replayed against
//! the raw definition, reproduces the violation. Witnesses are the first
//! found in the fixed iteration order (option sets ascending as bit vectors),
//! so they are stable across runs.
//!
//! The pair scans are exhaustive over all `2^n × 2^n` pairs by default. On
//! larger ground sets a [`Scan`] cap switches them to seeded sampling, and the
//! report says which coverage was used.

use std::borrow::Cow;

use crate::choice::ChoiceFunction;
use crate::gen::Rng;
use crate::ground::{Bundle, GroundSet};
use crate::relation::{LinearOrder, Relation};

/// Scan policy for the pair-scanning checkers.
#[derive(Debug, Clone, Copy)]
pub struct Scan {
    /// Maximum number of pairs to test; `None` means every pair.
    pub cap: Option<u64>,
    /// Seed for drawing pairs when the cap is hit.
    pub seed: u64,
}

impl Scan {
    pub fn exhaustive() -> Self {
        Scan { cap: None, seed: 0 }
    }

    pub fn sampled(cap: u64, seed: u64) -> Self {
        Scan {
            cap: Some(cap),
            seed,
        }
    }

    fn use_sampling(self, ground: &GroundSet) -> Option<(u64, u64)> {
        let n = ground.len() as u32;
        let total_pairs = 1u64 << (2 * n);
        match self.cap {
            Some(cap) if cap < total_pairs => Some((cap, self.seed)),
            _ => None,
        }
    }
}

impl Default for Scan {
    fn default() -> Self {
        Scan::exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

/// Outcome of one axiom check. `holds` is false exactly when a witness is
/// present.
#[derive(Debug, Clone)]
pub struct AxiomReport<W> {
    pub holds: bool,
    pub witness: Option<W>,
    pub coverage: Coverage,
}

impl<W> AxiomReport<W> {
    fn passed(coverage: Coverage) -> Self {
        AxiomReport {
            holds: true,
            witness: None,
            coverage,
        }
    }

    fn failed(witness: W, coverage: Coverage) -> Self {
        AxiomReport {
            holds: false,
            witness: Some(witness),
            coverage,
        }
    }
}

fn tabled(c: &ChoiceFunction) -> Cow<'_, ChoiceFunction> {
    match c.body() {
        crate::choice::ChoiceBody::Table(_) => Cow::Borrowed(c),
        crate::choice::ChoiceBody::Rule(_) => Cow::Owned(c.compiled()),
    }
}

/// `a` was chosen from `s`, survives into `t ⊆ s`, yet is not chosen from `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsWitness {
    pub s: Bundle,
    pub t: Bundle,
    pub elem: u8,
}

/// Substitutability: for all `T ⊆ S`, `C(S) ∩ T ⊆ C(T)`.
pub fn check_substitutability(c: &ChoiceFunction, scan: Scan) -> AxiomReport<SubsWitness> {
    let c = tabled(c);
    let find = |s: Bundle, t: Bundle| -> Option<SubsWitness> {
        let stray = c.eval(s).inter(t).minus(c.eval(t));
        stray.iter().next().map(|elem| SubsWitness { s, t, elem })
    };
    if let Some((cap, seed)) = scan.use_sampling(c.ground()) {
        let mut rng = Rng::new(seed);
        let full = c.ground().full();
        for _ in 0..cap {
            let s = Bundle(rng.next_u32()).inter(full);
            let t = Bundle(rng.next_u32()).inter(s);
            if let Some(w) = find(s, t) {
                return AxiomReport::failed(w, Coverage::Sampled { pairs: cap, seed });
            }
        }
        return AxiomReport::passed(Coverage::Sampled { pairs: cap, seed });
    }
    for s in c.ground().bundles() {
        for t in s.subsets() {
            if let Some(w) = find(s, t) {
                return AxiomReport::failed(w, Coverage::Exhaustive);
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `C(s) ⊆ t ⊆ s` but `C(t) ≠ C(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IreWitness {
    pub s: Bundle,
    pub t: Bundle,
}

/// Irrelevance of rejected elements: `C(S) ⊆ T ⊆ S` implies `C(T) = C(S)`.
pub fn check_ire(c: &ChoiceFunction, scan: Scan) -> AxiomReport<IreWitness> {
    let c = tabled(c);
    if let Some((cap, seed)) = scan.use_sampling(c.ground()) {
        let mut rng = Rng::new(seed);
        let full = c.ground().full();
        for _ in 0..cap {
            let s = Bundle(rng.next_u32()).inter(full);
            let chosen = c.eval(s);
            let t = chosen.union(Bundle(rng.next_u32()).inter(s.minus(chosen)));
            if c.eval(t) != chosen {
                return AxiomReport::failed(
                    IreWitness { s, t },
                    Coverage::Sampled { pairs: cap, seed },
                );
            }
        }
        return AxiomReport::passed(Coverage::Sampled { pairs: cap, seed });
    }
    for s in c.ground().bundles() {
        let chosen = c.eval(s);
        for extra in s.minus(chosen).subsets() {
            let t = chosen.union(extra);
            if c.eval(t) != chosen {
                return AxiomReport::failed(IreWitness { s, t }, Coverage::Exhaustive);
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `C(s ∪ t) ≠ C(C(s) ∪ C(t))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiWitness {
    pub s: Bundle,
    pub t: Bundle,
}

/// Path independence: `C(S ∪ T) = C(C(S) ∪ C(T))` for all pairs.
pub fn check_path_independence(c: &ChoiceFunction, scan: Scan) -> AxiomReport<PiWitness> {
    let c = tabled(c);
    let violates = |s: Bundle, t: Bundle| c.eval(s.union(t)) != c.eval(c.eval(s).union(c.eval(t)));
    if let Some((cap, seed)) = scan.use_sampling(c.ground()) {
        let mut rng = Rng::new(seed);
        let full = c.ground().full();
        for _ in 0..cap {
            let s = Bundle(rng.next_u32()).inter(full);
            let t = Bundle(rng.next_u32()).inter(full);
            if violates(s, t) {
                return AxiomReport::failed(
                    PiWitness { s, t },
                    Coverage::Sampled { pairs: cap, seed },
                );
            }
        }
        return AxiomReport::passed(Coverage::Sampled { pairs: cap, seed });
    }
    for s in c.ground().bundles() {
        for t in c.ground().bundles() {
            if violates(s, t) {
                return AxiomReport::failed(PiWitness { s, t }, Coverage::Exhaustive);
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `small ⊆ large` yet `|C(small)| > |C(large)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeMonoWitness {
    pub small: Bundle,
    pub large: Bundle,
}

/// Size monotonicity: `T ⊆ S` implies `|C(T)| ≤ |C(S)|`.
///
/// Checked through one-element extensions only (`large = small ∪ {a}`), which
/// suffices because any inclusion factors through such a chain; the reduction
/// is cross-validated against the full scan in the oracle tests.
pub fn check_size_monotonicity(c: &ChoiceFunction) -> AxiomReport<SizeMonoWitness> {
    let c = tabled(c);
    let n = c.ground().len() as u8;
    for small in c.ground().bundles() {
        let k = c.eval(small).len();
        for a in 0..n {
            if !small.contains(a) {
                let large = small.with(a);
                if c.eval(large).len() < k {
                    return AxiomReport::failed(
                        SizeMonoWitness { small, large },
                        Coverage::Exhaustive,
                    );
                }
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `|C(s)| ≠ min(|s|, q)` for the candidate capacity `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityWitness {
    pub q: u32,
    pub s: Bundle,
}

/// Capacity filling: `|C(S)| = min(|S|, q)` for some capacity `q`. If the
/// identity holds at all it holds for `q = max_S |C(S)|`, which is what gets
/// tested; returns that `q` on success.
pub fn check_capacity_filling(c: &ChoiceFunction) -> (Option<u32>, AxiomReport<CapacityWitness>) {
    let c = tabled(c);
    let q = c
        .ground()
        .bundles()
        .map(|s| c.eval(s).len())
        .max()
        .unwrap_or(0);
    match check_capacity_filling_for(&c, q) {
        r if r.holds => (Some(q), r),
        r => (None, r),
    }
}

/// Capacity filling for one given capacity.
pub fn check_capacity_filling_for(c: &ChoiceFunction, q: u32) -> AxiomReport<CapacityWitness> {
    let c = tabled(c);
    for s in c.ground().bundles() {
        if c.eval(s).len() != s.len().min(q) {
            return AxiomReport::failed(CapacityWitness { q, s }, Coverage::Exhaustive);
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `chosen ∈ C(s)` and `rejected ∈ s \ C(s)` but `rejected` outranks `chosen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RespectWitness {
    pub s: Bundle,
    pub chosen: u8,
    pub rejected: u8,
}

/// Respect for a priority order: every chosen element outranks every
/// available rejected one. The order must rank the whole ground set.
pub fn check_respects_priorities(
    c: &ChoiceFunction,
    ord: &LinearOrder,
) -> AxiomReport<RespectWitness> {
    assert!(
        ord.is_total(c.ground()),
        "priority order must rank every element"
    );
    let c = tabled(c);
    let rank: Vec<usize> = {
        let mut rank = vec![0usize; c.ground().len()];
        for (pos, &i) in ord.ranking().iter().enumerate() {
            rank[i as usize] = pos;
        }
        rank
    };
    for s in c.ground().bundles() {
        let chosen_set = c.eval(s);
        let rejected_set = s.minus(chosen_set);
        for chosen in chosen_set.iter() {
            for rejected in rejected_set.iter() {
                if rank[rejected as usize] < rank[chosen as usize] {
                    return AxiomReport::failed(
                        RespectWitness {
                            s,
                            chosen,
                            rejected,
                        },
                        Coverage::Exhaustive,
                    );
                }
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// The revealed strict priority relation: `(a, b)` present exactly when some
/// option set chooses `a` while rejecting `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealedPriority {
    pub relation: Relation,
}

pub fn revealed_strict_priority(c: &ChoiceFunction) -> RevealedPriority {
    let c = tabled(c);
    let mut relation = Relation::new(c.ground().len());
    for s in c.ground().bundles() {
        let chosen = c.eval(s);
        let rejected = s.minus(chosen);
        for a in chosen.iter() {
            for b in rejected.iter() {
                relation.insert(a as u16, b as u16);
            }
        }
    }
    RevealedPriority { relation }
}

/// Mutually revealed pair: `s_ab` reveals `a` over `b` and `s_ba` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WarsprioWitness {
    pub a: u8,
    pub b: u8,
    pub s_ab: Bundle,
    pub s_ba: Bundle,
}

/// Weak axiom of revealed strict priority: asymmetry of the revealed strict
/// priority relation.
pub fn check_warsprio(c: &ChoiceFunction) -> AxiomReport<WarsprioWitness> {
    let c = tabled(c);
    let rel = revealed_strict_priority(&c).relation;
    for (a, b) in rel.pairs() {
        if a < b && rel.contains(b, a) {
            let reveal = |x: u16, y: u16| {
                c.ground()
                    .bundles()
                    .find(|&s| {
                        let chosen = c.eval(s);
                        chosen.contains(x as u8) && s.minus(chosen).contains(y as u8)
                    })
                    .expect("pair is in the revealed relation")
            };
            return AxiomReport::failed(
                WarsprioWitness {
                    a: a as u8,
                    b: b as u8,
                    s_ab: reveal(a, b),
                    s_ba: reveal(b, a),
                },
                Coverage::Exhaustive,
            );
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// `elem ∈ C(s ∪ t)` but in neither `C(s)` nor `C(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubadditivityWitness {
    pub s: Bundle,
    pub t: Bundle,
    pub elem: u8,
}

/// `elem` rejected from `s ⊆ t` but not rejected from `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneRejectionWitness {
    pub s: Bundle,
    pub t: Bundle,
    pub elem: u8,
}

/// `elem ∈ C(t) ∪ (E \ t)` escapes `C(s) ∪ (E \ s)` although `s ⊆ t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntitoneWitness {
    pub s: Bundle,
    pub t: Bundle,
    pub elem: u8,
}

#[derive(Debug, Clone)]
pub struct SubsEquivalents {
    pub subadditivity: AxiomReport<SubadditivityWitness>,
    pub monotone_rejection: AxiomReport<MonotoneRejectionWitness>,
    pub antitone_nonrejection: AxiomReport<AntitoneWitness>,
}

/// The three reformulations equivalent to substitutability:
/// subadditivity `C(S∪T) ⊆ C(S) ∪ C(T)`, monotone rejection
/// `S ⊆ T ⇒ S\C(S) ⊆ T\C(T)`, and antitone non-rejection
/// `S ⊆ T ⇒ C(S) ∪ (E\S) ⊇ C(T) ∪ (E\T)`.
pub fn check_subs_equivalents(c: &ChoiceFunction, scan: Scan) -> SubsEquivalents {
    let c = tabled(c);
    let full = c.ground().full();

    let subadditivity = {
        let find = |s: Bundle, t: Bundle| {
            let stray = c.eval(s.union(t)).minus(c.eval(s).union(c.eval(t)));
            stray
                .iter()
                .next()
                .map(|elem| SubadditivityWitness { s, t, elem })
        };
        scan_pairs(c.ground(), scan, find)
    };

    let monotone_rejection = {
        let find = |t: Bundle, s: Bundle| {
            // s ⊆ t by construction of the scan
            let stray = s.minus(c.eval(s)).minus(t.minus(c.eval(t)));
            stray
                .iter()
                .next()
                .map(|elem| MonotoneRejectionWitness { s, t, elem })
        };
        scan_nested_pairs(c.ground(), scan, find)
    };

    let antitone_nonrejection = {
        let find = |t: Bundle, s: Bundle| {
            let lhs = c.eval(s).union(full.minus(s));
            let rhs = c.eval(t).union(full.minus(t));
            rhs.minus(lhs)
                .iter()
                .next()
                .map(|elem| AntitoneWitness { s, t, elem })
        };
        scan_nested_pairs(c.ground(), scan, find)
    };

    SubsEquivalents {
        subadditivity,
        monotone_rejection,
        antitone_nonrejection,
    }
}

/// `C(C(s)) ≠ C(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdemWitness {
    pub s: Bundle,
}

pub fn check_idempotence(c: &ChoiceFunction) -> AxiomReport<IdemWitness> {
    let c = tabled(c);
    for s in c.ground().bundles() {
        let chosen = c.eval(s);
        if c.eval(chosen) != chosen {
            return AxiomReport::failed(IdemWitness { s }, Coverage::Exhaustive);
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiVariantWitness {
    NotIdempotent { s: Bundle },
    PairMismatch { s: Bundle, t: Bundle },
}

#[derive(Debug, Clone)]
pub struct PiVariants {
    /// `C(S ∪ T) = C(C(S) ∪ T)` for all pairs.
    pub image_union: AxiomReport<PiVariantWitness>,
    /// Idempotence together with `C(C(S ∪ T)) = C(C(S) ∪ C(T))`.
    pub additive_in_image: AxiomReport<PiVariantWitness>,
}

/// The two reformulations equivalent to path independence.
pub fn check_pi_variants(c: &ChoiceFunction, scan: Scan) -> PiVariants {
    let c = tabled(c);

    let image_union = scan_pairs(c.ground(), scan, |s, t| {
        if c.eval(s.union(t)) != c.eval(c.eval(s).union(t)) {
            Some(PiVariantWitness::PairMismatch { s, t })
        } else {
            None
        }
    });

    let additive_in_image = match check_idempotence(&c) {
        r if !r.holds => AxiomReport::failed(
            PiVariantWitness::NotIdempotent {
                s: r.witness.unwrap().s,
            },
            Coverage::Exhaustive,
        ),
        _ => scan_pairs(c.ground(), scan, |s, t| {
            if c.eval(c.eval(s.union(t))) != c.eval(c.eval(s).union(c.eval(t))) {
                Some(PiVariantWitness::PairMismatch { s, t })
            } else {
                None
            }
        }),
    };

    PiVariants {
        image_union,
        additive_in_image,
    }
}

/// Drives a predicate over all (or sampled) unrestricted pairs.
fn scan_pairs<W>(
    ground: &GroundSet,
    scan: Scan,
    find: impl Fn(Bundle, Bundle) -> Option<W>,
) -> AxiomReport<W> {
    if let Some((cap, seed)) = scan.use_sampling(ground) {
        let mut rng = Rng::new(seed);
        let full = ground.full();
        for _ in 0..cap {
            let s = Bundle(rng.next_u32()).inter(full);
            let t = Bundle(rng.next_u32()).inter(full);
            if let Some(w) = find(s, t) {
                return AxiomReport::failed(w, Coverage::Sampled { pairs: cap, seed });
            }
        }
        return AxiomReport::passed(Coverage::Sampled { pairs: cap, seed });
    }
    for s in ground.bundles() {
        for t in ground.bundles() {
            if let Some(w) = find(s, t) {
                return AxiomReport::failed(w, Coverage::Exhaustive);
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}

/// Drives a predicate over pairs `(outer, inner)` with `inner ⊆ outer`.
fn scan_nested_pairs<W>(
    ground: &GroundSet,
    scan: Scan,
    find: impl Fn(Bundle, Bundle) -> Option<W>,
) -> AxiomReport<W> {
    if let Some((cap, seed)) = scan.use_sampling(ground) {
        let mut rng = Rng::new(seed);
        let full = ground.full();
        for _ in 0..cap {
            let outer = Bundle(rng.next_u32()).inter(full);
            let inner = Bundle(rng.next_u32()).inter(outer);
            if let Some(w) = find(outer, inner) {
                return AxiomReport::failed(w, Coverage::Sampled { pairs: cap, seed });
            }
        }
        return AxiomReport::passed(Coverage::Sampled { pairs: cap, seed });
    }
    for outer in ground.bundles() {
        for inner in outer.subsets() {
            if let Some(w) = find(outer, inner) {
                return AxiomReport::failed(w, Coverage::Exhaustive);
            }
        }
    }
    AxiomReport::passed(Coverage::Exhaustive)
}
