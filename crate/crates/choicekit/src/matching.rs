//! One-to-many matching with object-side choice rules: the choice-keeping
//! and applicant-keeping deferred acceptance engines, stability notions with
//! blocking witnesses, and brute-force enumeration oracles.

use std::fmt;

use crate::choice::ChoiceFunction;
use crate::ground::{Bundle, GroundSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    BadProblem {
        detail: String,
    },
    /// Brute-force enumeration refused: too many agents or objects.
    TooLarge {
        agents: usize,
        objects: usize,
    },
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::BadProblem { detail } => write!(f, "bad matching problem: {detail}"),
            MatchingError::TooLarge { agents, objects } => write!(
                f,
                "enumeration over {agents} agents and {objects} objects is out of budget"
            ),
        }
    }
}

impl std::error::Error for MatchingError {}

/// Agents with strict preferences over acceptable objects; objects with
/// choice functions over agent sets. Unlisted objects are unacceptable, and
/// agents never propose to them.
#[derive(Debug, Clone)]
pub struct MatchingProblem {
    agents: GroundSet,
    objects: Vec<String>,
    prefs: Vec<Vec<usize>>,
    choices: Vec<ChoiceFunction>,
}

impl MatchingProblem {
    pub fn new(
        agents: GroundSet,
        objects: Vec<String>,
        prefs: Vec<Vec<usize>>,
        choices: Vec<ChoiceFunction>,
    ) -> Result<Self, MatchingError> {
        let bad = |detail: String| MatchingError::BadProblem { detail };
        for (i, name) in objects.iter().enumerate() {
            if objects[..i].contains(name) {
                return Err(bad(format!("duplicate object name {name:?}")));
            }
        }
        if prefs.len() != agents.len() {
            return Err(bad("one preference list per agent required".to_string()));
        }
        for (i, list) in prefs.iter().enumerate() {
            for (k, &o) in list.iter().enumerate() {
                if o >= objects.len() {
                    return Err(bad(format!("agent {i} ranks unknown object {o}")));
                }
                if list[..k].contains(&o) {
                    return Err(bad(format!("agent {i} ranks object {o} twice")));
                }
            }
        }
        if choices.len() != objects.len() {
            return Err(bad("one choice function per object required".to_string()));
        }
        for (o, c) in choices.iter().enumerate() {
            if c.ground() != &agents {
                return Err(bad(format!(
                    "choice function of object {o} has the wrong ground"
                )));
            }
        }
        // tables make the engines and the stability scans plain lookups
        let choices = if agents.len() <= 12 {
            choices.into_iter().map(|c| c.compiled()).collect()
        } else {
            choices
        };
        Ok(MatchingProblem {
            agents,
            objects,
            prefs,
            choices,
        })
    }

    pub fn agents(&self) -> &GroundSet {
        &self.agents
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn prefs(&self) -> &[Vec<usize>] {
        &self.prefs
    }

    pub fn choice_of(&self, object: usize) -> &ChoiceFunction {
        &self.choices[object]
    }

    /// Position of `object` in agent `i`'s list; `None` when unacceptable.
    fn rank(&self, agent: u8, object: usize) -> Option<usize> {
        self.prefs[agent as usize].iter().position(|&o| o == object)
    }

    /// Strict preference of `agent` for `object` over an assignment
    /// (`None` = unmatched). Unacceptable objects are never preferred.
    pub fn prefers(&self, agent: u8, object: usize, over: Option<usize>) -> bool {
        match (
            self.rank(agent, object),
            over.and_then(|o| self.rank(agent, o)),
        ) {
            (Some(new), Some(cur)) => new < cur,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }
}

/// An assignment of at most one object per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub assign: Vec<Option<usize>>,
}

impl Matching {
    pub fn assigned_to(&self, object: usize) -> Bundle {
        self.assign
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == Some(object))
            .fold(Bundle::EMPTY, |b, (i, _)| b.with(i as u8))
    }
}

/// An agent ended up held by several objects at once, which the
/// applicant-keeping engine cannot rule out when some rule fails
/// substitutability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibleReport {
    pub agent: u8,
    pub objects: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaVariant {
    /// Keeps only the chosen proposals in each object's pool.
    ChoiceKeeping,
    /// Keeps every proposal ever received (the cumulative offer process).
    ApplicantKeeping,
}

#[derive(Debug, Clone)]
pub struct DaOutcome {
    pub result: Result<Matching, InfeasibleReport>,
    /// Per proposal round, the held set of every object after that round.
    pub trace: Vec<Vec<Bundle>>,
}

pub fn run_ck_da(prob: &MatchingProblem) -> DaOutcome {
    run_da(prob, DaVariant::ChoiceKeeping)
}

pub fn run_ak_da(prob: &MatchingProblem) -> DaOutcome {
    run_da(prob, DaVariant::ApplicantKeeping)
}

/// Round-synchronous deferred acceptance with simultaneous proposals. Every
/// active agent proposes to its best still-available object; each object
/// chooses from its new proposers plus its kept pool, rejecting unchosen
/// proposers and held agents. Exactly the agents rejected this round (and
/// still holding an available object) are active next round.
///
/// Per-object state only reads that object's own proposers and pool, so the
/// outcome does not depend on the object processing order.
pub fn run_da(prob: &MatchingProblem, variant: DaVariant) -> DaOutcome {
    let n_agents = prob.agents.len();
    let n_objects = prob.objects.len();
    let mut available: Vec<Vec<usize>> = prob.prefs.clone();
    let mut kept: Vec<Bundle> = vec![Bundle::EMPTY; n_objects];
    let mut held: Vec<Bundle> = vec![Bundle::EMPTY; n_objects];
    let mut active: Vec<u8> = (0..n_agents as u8)
        .filter(|&i| !available[i as usize].is_empty())
        .collect();
    let mut trace: Vec<Vec<Bundle>> = Vec::new();

    while !active.is_empty() {
        let mut proposers: Vec<Bundle> = vec![Bundle::EMPTY; n_objects];
        for &i in &active {
            let target = available[i as usize][0];
            proposers[target] = proposers[target].with(i);
        }
        let mut rejected_any = Bundle::EMPTY;
        for o in 0..n_objects {
            let pool = proposers[o].union(kept[o]);
            let chosen = prob.choices[o].eval(pool);
            let rejected = proposers[o].union(held[o]).minus(chosen);
            for i in rejected.iter() {
                available[i as usize].retain(|&x| x != o);
            }
            rejected_any = rejected_any.union(rejected);
            held[o] = chosen;
            kept[o] = match variant {
                DaVariant::ChoiceKeeping => chosen,
                DaVariant::ApplicantKeeping => pool,
            };
        }
        trace.push(held.clone());
        let next_active: Vec<u8> = rejected_any
            .iter()
            .filter(|&i| !available[i as usize].is_empty())
            .collect();
        debug_assert!(
            !rejected_any.is_empty() || next_active.is_empty(),
            "round made no progress"
        );
        active = next_active;
    }

    let mut assign: Vec<Option<usize>> = vec![None; n_agents];
    for i in 0..n_agents as u8 {
        let holders: Vec<usize> = (0..n_objects).filter(|&o| held[o].contains(i)).collect();
        match holders.as_slice() {
            [] => {}
            [o] => assign[i as usize] = Some(*o),
            _ => {
                debug_assert!(
                    variant == DaVariant::ApplicantKeeping,
                    "choice-keeping held sets must be disjoint"
                );
                return DaOutcome {
                    result: Err(InfeasibleReport {
                        agent: i,
                        objects: holders,
                    }),
                    trace,
                };
            }
        }
    }
    DaOutcome {
        result: Ok(Matching { assign }),
        trace,
    }
}

/// `round k: o ← {held agents}` per object, one line each.
pub fn render_trace(prob: &MatchingProblem, trace: &[Vec<Bundle>]) -> String {
    let mut out = String::new();
    for (k, round) in trace.iter().enumerate() {
        for (o, held) in round.iter().enumerate() {
            out.push_str(&format!(
                "round {}: {} ← {}\n",
                k + 1,
                prob.objects[o],
                prob.agents.render(*held)
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndividualWitness {
    /// The agent is matched to an object it finds unacceptable.
    Unacceptable { agent: u8 },
    /// The object would not keep its own assignees.
    NotChosen { object: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingPair {
    pub agent: u8,
    pub object: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingCoalition {
    pub agents: Bundle,
    pub object: usize,
}

/// All four stability verdicts for one matching, with a witness per failing
/// notion. The pairwise/group notions include individual stability.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub individually_stable: bool,
    pub alpha: bool,
    pub beta: bool,
    pub group: bool,
    pub individual_witness: Option<IndividualWitness>,
    pub alpha_witness: Option<BlockingPair>,
    pub beta_witness: Option<BlockingPair>,
    pub group_witness: Option<BlockingCoalition>,
}

pub fn check_stability(prob: &MatchingProblem, matching: &Matching) -> StabilityReport {
    let mut report = StabilityReport {
        individually_stable: true,
        alpha: true,
        beta: true,
        group: true,
        individual_witness: None,
        alpha_witness: None,
        beta_witness: None,
        group_witness: None,
    };

    for (i, &assigned) in matching.assign.iter().enumerate() {
        if let Some(o) = assigned {
            if prob.rank(i as u8, o).is_none() {
                report.individual_witness =
                    Some(IndividualWitness::Unacceptable { agent: i as u8 });
                break;
            }
        }
    }
    if report.individual_witness.is_none() {
        for o in 0..prob.objects.len() {
            let assigned = matching.assigned_to(o);
            if prob.choices[o].eval(assigned) != assigned {
                report.individual_witness = Some(IndividualWitness::NotChosen { object: o });
                break;
            }
        }
    }
    report.individually_stable = report.individual_witness.is_none();
    report.alpha = report.individually_stable;
    report.beta = report.individually_stable;
    report.group = report.individually_stable;

    if report.individually_stable {
        'alpha: for o in 0..prob.objects.len() {
            let assigned = matching.assigned_to(o);
            for i in 0..prob.agents.len() as u8 {
                if prob.prefers(i, o, matching.assign[i as usize])
                    && prob.choices[o].eval(assigned.with(i)).contains(i)
                {
                    report.alpha = false;
                    report.alpha_witness = Some(BlockingPair {
                        agent: i,
                        object: o,
                    });
                    break 'alpha;
                }
            }
        }
        'beta: for o in 0..prob.objects.len() {
            let assigned = matching.assigned_to(o);
            for i in 0..prob.agents.len() as u8 {
                if prob.prefers(i, o, matching.assign[i as usize])
                    && prob.choices[o].eval(assigned.with(i)) != assigned
                {
                    report.beta = false;
                    report.beta_witness = Some(BlockingPair {
                        agent: i,
                        object: o,
                    });
                    break 'beta;
                }
            }
        }
        'group: for o in 0..prob.objects.len() {
            let assigned = matching.assigned_to(o);
            let candidates = (0..prob.agents.len() as u8)
                .filter(|&i| prob.prefers(i, o, matching.assign[i as usize]))
                .fold(Bundle::EMPTY, |b, i| b.with(i));
            for coalition in candidates.subsets() {
                if !coalition.is_empty()
                    && coalition.is_subset(prob.choices[o].eval(assigned.union(coalition)))
                {
                    report.group = false;
                    report.group_witness = Some(BlockingCoalition {
                        agents: coalition,
                        object: o,
                    });
                    break 'group;
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityNotion {
    Individual,
    Alpha,
    Beta,
    Group,
}

impl StabilityReport {
    pub fn satisfies(&self, notion: StabilityNotion) -> bool {
        match notion {
            StabilityNotion::Individual => self.individually_stable,
            StabilityNotion::Alpha => self.alpha,
            StabilityNotion::Beta => self.beta,
            StabilityNotion::Group => self.group,
        }
    }
}

/// Budget guard for the brute-force matching enumeration.
pub const MAX_ENUM_AGENTS: usize = 6;
pub const MAX_ENUM_OBJECTS: usize = 4;

/// Every assignment of agents to objects-or-nothing, in a fixed order.
pub fn all_matchings(prob: &MatchingProblem) -> Result<Vec<Matching>, MatchingError> {
    let (na, no) = (prob.agents.len(), prob.objects.len());
    if na > MAX_ENUM_AGENTS || no > MAX_ENUM_OBJECTS {
        return Err(MatchingError::TooLarge {
            agents: na,
            objects: no,
        });
    }
    let base = no + 1;
    let total = base.pow(na as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut rest = code;
        let assign: Vec<Option<usize>> = (0..na)
            .map(|_| {
                let digit = rest % base;
                rest /= base;
                (digit > 0).then(|| digit - 1)
            })
            .collect();
        out.push(Matching { assign });
    }
    Ok(out)
}

/// Brute-force oracle: all matchings passing the requested stability notion.
pub fn enumerate_stable(
    prob: &MatchingProblem,
    notion: StabilityNotion,
) -> Result<Vec<Matching>, MatchingError> {
    Ok(all_matchings(prob)?
        .into_iter()
        .filter(|m| check_stability(prob, m).satisfies(notion))
        .collect())
}

/// Relationships between the stability notions over every matching of one
/// problem. The conditional equivalences are reported only when the problem's
/// rules actually lie in the stated class.
#[derive(Debug, Clone)]
pub struct ImplicationsReport {
    pub beta_implies_alpha: bool,
    pub beta_implies_alpha_witness: Option<Matching>,
    pub all_rules_ire: bool,
    /// `Some` only when every rule satisfies irrelevance of rejected
    /// elements.
    pub alpha_iff_beta: Option<(bool, Option<Matching>)>,
    pub all_rules_substitutable: bool,
    /// `Some` only when every rule is substitutable.
    pub alpha_iff_group: Option<(bool, Option<Matching>)>,
}

pub fn check_stability_implications(
    prob: &MatchingProblem,
) -> Result<ImplicationsReport, MatchingError> {
    use crate::axioms::{check_ire, check_substitutability, Scan};
    let all_ire =
        (0..prob.objects.len()).all(|o| check_ire(&prob.choices[o], Scan::exhaustive()).holds);
    let all_subs = (0..prob.objects.len())
        .all(|o| check_substitutability(&prob.choices[o], Scan::exhaustive()).holds);

    let mut beta_implies_alpha = true;
    let mut beta_witness = None;
    let mut iff_beta = (true, None);
    let mut iff_group = (true, None);
    for m in all_matchings(prob)? {
        let r = check_stability(prob, &m);
        if r.beta && !r.alpha {
            beta_implies_alpha = false;
            beta_witness.get_or_insert(m.clone());
        }
        if all_ire && r.alpha != r.beta && iff_beta.0 {
            iff_beta = (false, Some(m.clone()));
        }
        if all_subs && r.alpha != r.group && iff_group.0 {
            iff_group = (false, Some(m.clone()));
        }
    }
    Ok(ImplicationsReport {
        beta_implies_alpha,
        beta_implies_alpha_witness: beta_witness,
        all_rules_ire: all_ire,
        alpha_iff_beta: all_ire.then_some(iff_beta),
        all_rules_substitutable: all_subs,
        alpha_iff_group: all_subs.then_some(iff_group),
    })
}
