//! Seeded counterexample search for the separations the axioms leave open:
//! asymmetric revealed priority without substitutability, choice-keeping vs
//! applicant-keeping divergence under substitutable rules, unstable
//! choice-keeping outcomes under irrelevance of rejected elements, and
//! applicant-keeping infeasibility.
//!
//! Candidates are generated sequentially from the seed and fully re-verified
//! before being returned, so a hit replays to its claimed verdicts; the first
//! verified candidate wins, making the result deterministic given the seed.

use crate::axioms::{check_ire, check_substitutability, check_warsprio, Scan};
use crate::choice::{all_choice_functions, ChoiceFunction};
use crate::gen::{random_in_class, Rng, RuleClass};
use crate::ground::GroundSet;
use crate::matching::{check_stability, run_ak_da, run_ck_da, MatchingProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    /// A choice function on three elements with an asymmetric revealed
    /// strict priority relation that still fails substitutability.
    WarsprioNotSubs,
    /// All object rules substitutable, yet the two engines end differently.
    CkNeAkSubs,
    /// All object rules satisfy irrelevance of rejected elements, yet the
    /// choice-keeping outcome admits a blocking pair.
    CkUnstableIre,
    /// Some rule fails substitutability and the applicant-keeping engine
    /// terminates with a doubly-held agent.
    AkInfeasible,
}

impl SearchKind {
    pub fn parse(name: &str) -> Option<SearchKind> {
        match name {
            "warsprio_not_subs" => Some(SearchKind::WarsprioNotSubs),
            "ck_ne_ak_subs" => Some(SearchKind::CkNeAkSubs),
            "ck_unstable_ire" => Some(SearchKind::CkUnstableIre),
            "ak_infeasible" => Some(SearchKind::AkInfeasible),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SearchKind::WarsprioNotSubs => "warsprio_not_subs",
            SearchKind::CkNeAkSubs => "ck_ne_ak_subs",
            SearchKind::CkUnstableIre => "ck_unstable_ire",
            SearchKind::AkInfeasible => "ak_infeasible",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Counterexample {
    Choice(ChoiceFunction),
    Problem(MatchingProblem),
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub candidate_index: u64,
    pub found: Counterexample,
}

/// Search-space bounds: the priority counterexample is exhaustive over three
/// elements; the engine counterexamples stay within four agents and two
/// objects.
pub const SEARCH_AGENTS: usize = 4;
pub const SEARCH_OBJECTS: usize = 2;

pub fn search_counterexample(kind: SearchKind, seed: u64, max_trials: u64) -> Option<SearchHit> {
    match kind {
        SearchKind::WarsprioNotSubs => search_warsprio_not_subs(max_trials),
        SearchKind::CkNeAkSubs => search_da(kind, seed, max_trials),
        SearchKind::CkUnstableIre => search_da(kind, seed, max_trials),
        SearchKind::AkInfeasible => search_da(kind, seed, max_trials),
    }
}

fn search_warsprio_not_subs(max_trials: u64) -> Option<SearchHit> {
    let ground = GroundSet::new(["a", "b", "c"]).expect("three labels");
    for (k, c) in all_choice_functions(&ground).expect("n = 3").enumerate() {
        if k as u64 >= max_trials {
            return None;
        }
        if check_warsprio(&c).holds && !check_substitutability(&c, Scan::exhaustive()).holds {
            return Some(SearchHit {
                candidate_index: k as u64,
                found: Counterexample::Choice(c),
            });
        }
    }
    None
}

/// One random problem within the search bounds, object rules drawn from the
/// given class.
pub fn random_problem(rng: &mut Rng, class: RuleClass) -> MatchingProblem {
    let n_agents = 2 + rng.below(SEARCH_AGENTS as u64 - 1) as usize;
    let n_objects = 1 + rng.below(SEARCH_OBJECTS as u64) as usize;
    random_problem_sized(rng, class, n_agents, n_objects)
}

pub fn random_problem_sized(
    rng: &mut Rng,
    class: RuleClass,
    n_agents: usize,
    n_objects: usize,
) -> MatchingProblem {
    let agents = GroundSet::numbered(n_agents);
    let object_names: Vec<String> = (0..n_objects)
        .map(|o| ((b'a' + o as u8) as char).to_string())
        .collect();
    let prefs: Vec<Vec<usize>> = (0..n_agents)
        .map(|_| {
            let mut listed: Vec<usize> = (0..n_objects).filter(|_| rng.below(4) > 0).collect();
            rng.shuffle(&mut listed);
            listed
        })
        .collect();
    let choices: Vec<ChoiceFunction> = (0..n_objects)
        .map(|_| random_in_class(rng, &agents, class))
        .collect();
    MatchingProblem::new(agents, object_names, prefs, choices).expect("generated problem is valid")
}

fn verify(kind: SearchKind, prob: &MatchingProblem) -> bool {
    let subs_ok = |want: bool| {
        (0..prob.objects().len())
            .all(|o| check_substitutability(prob.choice_of(o), Scan::exhaustive()).holds == want)
    };
    match kind {
        SearchKind::CkNeAkSubs => {
            if !subs_ok(true) {
                return false;
            }
            let ck = run_ck_da(prob);
            let ak = run_ak_da(prob);
            match (&ck.result, &ak.result) {
                (Ok(a), Ok(b)) => a != b,
                // substitutable rules keep both engines feasible
                _ => unreachable!("engine infeasible under substitutable rules"),
            }
        }
        SearchKind::CkUnstableIre => {
            if !(0..prob.objects().len())
                .all(|o| check_ire(prob.choice_of(o), Scan::exhaustive()).holds)
            {
                return false;
            }
            let ck = run_ck_da(prob);
            match &ck.result {
                Ok(m) => !check_stability(prob, m).alpha,
                Err(_) => unreachable!("choice-keeping is always feasible"),
            }
        }
        SearchKind::AkInfeasible => {
            let ak = run_ak_da(prob);
            let infeasible = ak.result.is_err();
            if infeasible {
                debug_assert!(
                    !subs_ok(true),
                    "infeasible outcome although every rule is substitutable"
                );
            }
            infeasible
        }
        SearchKind::WarsprioNotSubs => unreachable!("handled separately"),
    }
}

fn search_da(kind: SearchKind, seed: u64, max_trials: u64) -> Option<SearchHit> {
    let class = match kind {
        SearchKind::CkNeAkSubs => RuleClass::Substitutable,
        SearchKind::CkUnstableIre => RuleClass::Ire,
        SearchKind::AkInfeasible => RuleClass::Any,
        SearchKind::WarsprioNotSubs => unreachable!(),
    };
    let mut rng = Rng::new(seed);
    for k in 0..max_trials {
        let prob = random_problem(&mut rng, class);
        if verify(kind, &prob) {
            return Some(SearchHit {
                candidate_index: k,
                found: Counterexample::Problem(prob),
            });
        }
    }
    None
}
