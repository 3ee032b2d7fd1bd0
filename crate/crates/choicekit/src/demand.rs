//! Bundle demand at strictly positive prices: the law of demand, demand
//! WARP, demand derived from a quasilinear valuation, and exact
//! rationalization of finitely many observations.
//!
//! All arithmetic is exact rational, so feasibility decisions carry no
//! floating-point tolerance.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::axioms::{AxiomReport, Coverage};
use crate::ground::{Bundle, GroundSet};

/// Cap on the ground-set size accepted by the rationalizer: one variable per
/// bundle.
pub const MAX_DEMAND_GROUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemandError {
    NotPositive { elem: u8 },
    EmptyDemand { observation: usize },
    TooLarge { n: usize },
}

impl fmt::Display for DemandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemandError::NotPositive { elem } => {
                write!(f, "price of element {elem} is not strictly positive")
            }
            DemandError::EmptyDemand { observation } => {
                write!(f, "observation {observation} demands no bundle")
            }
            DemandError::TooLarge { n } => {
                write!(
                    f,
                    "rationalization requires at most {MAX_DEMAND_GROUND} elements, got {n}"
                )
            }
        }
    }
}

impl std::error::Error for DemandError {}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A strictly positive price for every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceVector {
    per_elem: Vec<BigRational>,
}

impl PriceVector {
    pub fn new(per_elem: Vec<BigRational>) -> Result<Self, DemandError> {
        for (i, p) in per_elem.iter().enumerate() {
            if !p.is_positive() {
                return Err(DemandError::NotPositive { elem: i as u8 });
            }
        }
        Ok(PriceVector { per_elem })
    }

    pub fn of(&self, elem: u8) -> &BigRational {
        &self.per_elem[elem as usize]
    }

    pub fn len(&self) -> usize {
        self.per_elem.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_elem.is_empty()
    }
}

/// `Σ_{a ∈ bundle} p(a)`, the 0/1-vector inner product.
pub fn bundle_value(p: &PriceVector, bundle: Bundle) -> BigRational {
    bundle
        .iter()
        .map(|a| p.of(a).clone())
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// A total valuation over bundles; `per_bundle[s.0]` is `v(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    per_bundle: Vec<BigRational>,
}

impl Valuation {
    pub fn new(per_bundle: Vec<BigRational>) -> Self {
        Valuation { per_bundle }
    }

    pub fn of(&self, bundle: Bundle) -> &BigRational {
        &self.per_bundle[bundle.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.per_bundle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_bundle.is_empty()
    }
}

/// A price vector together with the (nonempty) collection of bundles observed
/// demanded at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandObservation {
    pub price: PriceVector,
    pub demanded: Vec<Bundle>,
}

/// Observation pair violating `⟨p − p', A − A'⟩ ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOfDemandWitness {
    pub obs_a: usize,
    pub bundle_a: Bundle,
    pub obs_b: usize,
    pub bundle_b: Bundle,
    pub inner_product: BigRational,
}

/// Law of demand: for every pair of observations and every pair of demanded
/// bundles, `⟨p − p', A − A'⟩ ≤ 0`.
pub fn check_law_of_demand(obs: &[DemandObservation]) -> AxiomReport<LawOfDemandWitness> {
    for (i, oi) in obs.iter().enumerate() {
        for (j, oj) in obs.iter().enumerate() {
            for &a in &oi.demanded {
                for &b in &oj.demanded {
                    let mut inner = BigRational::zero();
                    let n = oi.price.len() as u8;
                    for e in 0..n {
                        let da = (a.contains(e) as i64) - (b.contains(e) as i64);
                        if da != 0 {
                            let dp = oi.price.of(e) - oj.price.of(e);
                            inner += dp * BigRational::from(BigInt::from(da));
                        }
                    }
                    if inner.is_positive() {
                        return AxiomReport {
                            holds: false,
                            witness: Some(LawOfDemandWitness {
                                obs_a: i,
                                bundle_a: a,
                                obs_b: j,
                                bundle_b: b,
                                inner_product: inner,
                            }),
                            coverage: Coverage::Exhaustive,
                        };
                    }
                }
            }
        }
    }
    AxiomReport {
        holds: true,
        witness: None,
        coverage: Coverage::Exhaustive,
    }
}

/// `a` demanded at `p`, `b` demanded at `p'`, `b` cheaper than `a` at `p`,
/// yet `a` not dearer than `b` at `p'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandWarpWitness {
    pub obs_a: usize,
    pub bundle_a: Bundle,
    pub obs_b: usize,
    pub bundle_b: Bundle,
}

/// Demand WARP: `A ∈ D(p)`, `A' ∈ D(p')`, `⟨p, A'⟩ < ⟨p, A⟩` together imply
/// `⟨p', A⟩ > ⟨p', A'⟩`.
pub fn check_demand_warp(obs: &[DemandObservation]) -> AxiomReport<DemandWarpWitness> {
    for (i, oi) in obs.iter().enumerate() {
        for (j, oj) in obs.iter().enumerate() {
            for &a in &oi.demanded {
                for &b in &oj.demanded {
                    let cheaper_at_p = bundle_value(&oi.price, b) < bundle_value(&oi.price, a);
                    if cheaper_at_p && bundle_value(&oj.price, a) <= bundle_value(&oj.price, b) {
                        return AxiomReport {
                            holds: false,
                            witness: Some(DemandWarpWitness {
                                obs_a: i,
                                bundle_a: a,
                                obs_b: j,
                                bundle_b: b,
                            }),
                            coverage: Coverage::Exhaustive,
                        };
                    }
                }
            }
        }
    }
    AxiomReport {
        holds: true,
        witness: None,
        coverage: Coverage::Exhaustive,
    }
}

/// Every maximizer of `v(A) − ⟨p, A⟩` over all bundles, ascending in
/// bit-vector order; never empty.
pub fn derived_demand(ground: &GroundSet, v: &Valuation, p: &PriceVector) -> Vec<Bundle> {
    let mut best: Option<BigRational> = None;
    let mut out: Vec<Bundle> = Vec::new();
    for s in ground.bundles() {
        let u = v.of(s) - bundle_value(p, s);
        match &best {
            Some(b) if *b > u => {}
            Some(b) if *b == u => out.push(s),
            _ => {
                best = Some(u);
                out = vec![s];
            }
        }
    }
    out
}

/// One hop of an infeasibility cycle: at observation `obs`, bundle `node` was
/// demanded, which bounds `v(next) − v(node)` by the price difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStep {
    pub obs: usize,
    pub node: Bundle,
}

/// Replays a cycle witness: the sum of the price-difference bounds around the
/// cycle, which is negative exactly when the observations are inconsistent
/// with quasilinear maximization.
pub fn cycle_weight(obs: &[DemandObservation], cycle: &[CycleStep]) -> BigRational {
    let mut total = BigRational::zero();
    for (k, step) in cycle.iter().enumerate() {
        let next = cycle[(k + 1) % cycle.len()].node;
        let p = &obs[step.obs].price;
        total += bundle_value(p, next) - bundle_value(p, step.node);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuasilinearOutcome {
    /// A valuation, anchored at `v(∅) = 0`, whose derived demand contains
    /// every observed demanded bundle at its price.
    Rationalized(Valuation),
    /// No quasilinear valuation fits; the cycle replays to a negative total.
    Infeasible { cycle: Vec<CycleStep> },
}

/// Finds a valuation `v` with `v(A) − ⟨p, A⟩ ≥ v(B) − ⟨p, B⟩` for every
/// observed demanded `A` at `p` and every bundle `B`, by shortest-path
/// relaxation over the induced difference constraints
/// `v(B) − v(A) ≤ ⟨p, B⟩ − ⟨p, A⟩`, with negative-cycle detection.
///
/// The returned valuation is verified against every constraint before it is
/// returned.
pub fn quasilinear_rationalize(
    ground: &GroundSet,
    obs: &[DemandObservation],
) -> Result<QuasilinearOutcome, DemandError> {
    let n = ground.len();
    if n > MAX_DEMAND_GROUND {
        return Err(DemandError::TooLarge { n });
    }
    for (i, o) in obs.iter().enumerate() {
        if o.demanded.is_empty() {
            return Err(DemandError::EmptyDemand { observation: i });
        }
    }
    let size = 1usize << n;
    // cost[i][s] = ⟨p_i, s⟩
    let cost: Vec<Vec<BigRational>> = obs
        .iter()
        .map(|o| {
            ground
                .bundles()
                .map(|s| bundle_value(&o.price, s))
                .collect()
        })
        .collect();
    let sources: Vec<(usize, Bundle)> = obs
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.demanded.iter().map(move |&a| (i, a)))
        .collect();

    // Virtual super-source: start every potential at zero.
    let mut dist: Vec<BigRational> = vec![BigRational::zero(); size];
    let mut pred: Vec<Option<(usize, Bundle)>> = vec![None; size];
    let relax_pass =
        |dist: &mut Vec<BigRational>, pred: &mut Vec<Option<(usize, Bundle)>>| -> Option<usize> {
            let mut changed = None;
            for &(i, a) in &sources {
                let base = &dist[a.0 as usize] - &cost[i][a.0 as usize];
                for b in 0..size {
                    let candidate = &base + &cost[i][b];
                    if candidate < dist[b] {
                        dist[b] = candidate;
                        pred[b] = Some((i, a));
                        changed = Some(b);
                    }
                }
            }
            changed
        };

    let mut last_changed = None;
    for _ in 0..size {
        last_changed = relax_pass(&mut dist, &mut pred);
        if last_changed.is_none() {
            break;
        }
    }
    if let Some(mut node) = last_changed {
        // A relaxation on the `size`-th pass means some bound chain revisits
        // a node, so a negative cycle exists. The predecessor graph may lag
        // behind it for a few passes, so keep relaxing until a predecessor
        // walk closes a loop of verified negative weight.
        for _ in 0..4 * size + 4 {
            if let Some(cycle) = predecessor_cycle(&pred, node) {
                if cycle_weight(obs, &cycle).is_negative() {
                    return Ok(QuasilinearOutcome::Infeasible { cycle });
                }
            }
            node = relax_pass(&mut dist, &mut pred).expect("negative cycle keeps relaxing");
        }
        unreachable!("negative cycle detected but no predecessor loop found");
    }

    let anchor = dist[0].clone();
    let v = Valuation::new(dist.into_iter().map(|d| d - &anchor).collect());
    for &(i, a) in &sources {
        let slack = v.of(a) - &cost[i][a.0 as usize];
        for b in ground.bundles() {
            assert!(
                v.of(b) - &cost[i][b.0 as usize] <= slack,
                "relaxation converged but a constraint is violated"
            );
        }
    }
    Ok(QuasilinearOutcome::Rationalized(v))
}

/// Walks predecessors from `start`; a revisit closes a candidate cycle, a
/// missing predecessor means the chain drains to the source without looping.
///
/// The walk runs child to parent; the returned steps run the opposite way,
/// so that step `k` is the constraint edge from `cycle[k].node` to
/// `cycle[k+1].node` (wrapping) tagged with its observation.
fn predecessor_cycle(pred: &[Option<(usize, Bundle)>], start: usize) -> Option<Vec<CycleStep>> {
    let mut position: Vec<Option<usize>> = vec![None; pred.len()];
    let mut walk: Vec<usize> = Vec::new();
    let mut node = start;
    let at = loop {
        if let Some(at) = position[node] {
            break at;
        }
        position[node] = Some(walk.len());
        walk.push(node);
        node = pred[node]?.1 .0 as usize;
    };
    let chain = &walk[at..]; // chain[k+1] is the parent of chain[k]
    let obs_into = |x: usize| pred[x].expect("walked nodes have predecessors").0;
    let m = chain.len();
    let mut cycle = Vec::with_capacity(m);
    for k in 0..m {
        let node_k = if k == 0 { chain[0] } else { chain[m - k] };
        let target = if k == m - 1 {
            chain[0]
        } else {
            chain[m - k - 1]
        };
        cycle.push(CycleStep {
            obs: obs_into(target),
            node: Bundle(node_k as u32),
        });
    }
    Some(cycle)
}
