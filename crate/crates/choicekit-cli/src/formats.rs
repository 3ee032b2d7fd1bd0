//! The three JSON document kinds and their conversions: choice-function
//! instances, matching problems, and demand observations.
//!
//! Serialization is canonical — map keys sorted, element lists sorted — so
//! loading and re-serializing a canonical file is the identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use choicekit::demand::{DemandObservation, PriceVector, Valuation};
use choicekit::matching::MatchingProblem;
use choicekit::rules::{Labeling, RuleSpec};
use choicekit::{Bundle, ChoiceBody, ChoiceFunction, GroundSet, LinearOrder};

#[derive(Debug)]
pub struct LoadError(pub String);

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for LoadError {}

fn err<T>(msg: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError(msg.into()))
}

/// A choice function: the `elements` plus either a complete `choice_table`
/// (comma-joined sorted element lists as keys, the empty set keyed `""`) or a
/// named `rule`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub elements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice_table: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleFile {
    PriorityMax {
        q: u32,
        order: Vec<String>,
    },
    Mc {
        orders: Vec<Vec<String>>,
    },
    SeqPrioRivalry {
        q: u32,
        orders: Vec<Vec<String>>,
    },
    Reserves {
        q: u32,
        labels: BTreeMap<String, String>,
        reserves: BTreeMap<String, u32>,
        order: Vec<String>,
    },
    TwoStage {
        first: Box<RuleFile>,
        second: Box<RuleFile>,
    },
}

fn parse_key(ground: &GroundSet, key: &str) -> Result<Bundle, LoadError> {
    if key.is_empty() {
        return Ok(Bundle::EMPTY);
    }
    let mut bundle = Bundle::EMPTY;
    for label in key.split(',') {
        let i = ground
            .index_of(label)
            .map_err(|_| LoadError(format!("unknown element {label:?} in key {key:?}")))?;
        if bundle.contains(i) {
            return err(format!("key {key:?} repeats element {label:?}"));
        }
        bundle = bundle.with(i);
    }
    Ok(bundle)
}

fn parse_labels(ground: &GroundSet, labels: &[String]) -> Result<Bundle, LoadError> {
    let mut bundle = Bundle::EMPTY;
    for label in labels {
        let i = ground
            .index_of(label)
            .map_err(|_| LoadError(format!("unknown element {label:?}")))?;
        if bundle.contains(i) {
            return err(format!("element {label:?} listed twice"));
        }
        bundle = bundle.with(i);
    }
    Ok(bundle)
}

fn order_from(ground: &GroundSet, labels: &[String]) -> Result<LinearOrder, LoadError> {
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    LinearOrder::from_labels(ground, &refs).map_err(|e| LoadError(e.to_string()))
}

fn rule_from(ground: &GroundSet, file: &RuleFile) -> Result<RuleSpec, LoadError> {
    Ok(match file {
        RuleFile::PriorityMax { q, order } => RuleSpec::PriorityMax {
            q: *q,
            order: order_from(ground, order)?,
        },
        RuleFile::Mc { orders } => RuleSpec::Mc {
            orders: orders
                .iter()
                .map(|o| order_from(ground, o))
                .collect::<Result<_, _>>()?,
        },
        RuleFile::SeqPrioRivalry { q, orders } => RuleSpec::SeqPrioRivalry {
            q: *q,
            orders: orders
                .iter()
                .map(|o| order_from(ground, o))
                .collect::<Result<_, _>>()?,
        },
        RuleFile::Reserves {
            q,
            labels,
            reserves,
            order,
        } => {
            let mut label_of = Vec::with_capacity(ground.len());
            for elem in ground.labels() {
                match labels.get(elem) {
                    Some(l) => label_of.push(l.clone()),
                    None => return err(format!("element {elem:?} has no label")),
                }
            }
            if labels.len() != ground.len() {
                return err("labels mention elements outside the ground set");
            }
            RuleSpec::Reserves {
                q: *q,
                labeling: Labeling::new(label_of),
                reserves: reserves.clone(),
                order: order_from(ground, order)?,
            }
        }
        RuleFile::TwoStage { first, second } => RuleSpec::TwoStage {
            first: Box::new(rule_from(ground, first)?),
            second: Box::new(rule_from(ground, second)?),
        },
    })
}

fn rule_to(ground: &GroundSet, spec: &RuleSpec) -> RuleFile {
    let order_labels = |o: &LinearOrder| {
        o.ranking()
            .iter()
            .map(|&i| ground.label(i).to_string())
            .collect()
    };
    match spec {
        RuleSpec::PriorityMax { q, order } => RuleFile::PriorityMax {
            q: *q,
            order: order_labels(order),
        },
        RuleSpec::Mc { orders } => RuleFile::Mc {
            orders: orders.iter().map(order_labels).collect(),
        },
        RuleSpec::SeqPrioRivalry { q, orders } => RuleFile::SeqPrioRivalry {
            q: *q,
            orders: orders.iter().map(order_labels).collect(),
        },
        RuleSpec::Reserves {
            q,
            labeling,
            reserves,
            order,
        } => RuleFile::Reserves {
            q: *q,
            labels: ground
                .labels()
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), labeling.label_of(i as u8).to_string()))
                .collect(),
            reserves: reserves.clone(),
            order: order_labels(order),
        },
        RuleSpec::TwoStage { first, second } => RuleFile::TwoStage {
            first: Box::new(rule_to(ground, first)),
            second: Box::new(rule_to(ground, second)),
        },
    }
}

impl InstanceFile {
    pub fn to_choice_function(&self) -> Result<ChoiceFunction, LoadError> {
        let ground = GroundSet::new(self.elements.clone()).map_err(|e| LoadError(e.to_string()))?;
        match (&self.choice_table, &self.rule) {
            (Some(table), None) => {
                let mut entries: Vec<Option<Bundle>> = vec![None; 1 << ground.len()];
                for (key, value) in table {
                    let s = parse_key(&ground, key)?;
                    if entries[s.0 as usize].is_some() {
                        return err(format!("option set {key:?} listed twice"));
                    }
                    let chosen = parse_labels(&ground, value)?;
                    if !chosen.is_subset(s) {
                        return err(format!("choice at {key:?} leaves the option set"));
                    }
                    entries[s.0 as usize] = Some(chosen);
                }
                let table: Vec<Bundle> = entries
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.ok_or_else(|| {
                            LoadError(format!(
                                "choice_table misses option set {:?}",
                                ground.key(Bundle(i as u32))
                            ))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                ChoiceFunction::from_table(ground, table).map_err(|e| LoadError(e.to_string()))
            }
            (None, Some(rule)) => {
                let spec = rule_from(&ground, rule)?;
                ChoiceFunction::from_rule(ground, spec).map_err(|e| LoadError(e.to_string()))
            }
            _ => err("exactly one of choice_table and rule is required"),
        }
    }

    pub fn from_choice_function(c: &ChoiceFunction) -> InstanceFile {
        let ground = c.ground();
        let (choice_table, rule) = match c.body() {
            ChoiceBody::Rule(spec) => (None, Some(rule_to(ground, spec))),
            ChoiceBody::Table(_) => {
                let table: BTreeMap<String, Vec<String>> = ground
                    .bundles()
                    .map(|s| {
                        let mut labels: Vec<String> = c
                            .eval(s)
                            .iter()
                            .map(|i| ground.label(i).to_string())
                            .collect();
                        labels.sort();
                        (ground.key(s), labels)
                    })
                    .collect();
                (Some(table), None)
            }
        };
        InstanceFile {
            elements: ground.labels().to_vec(),
            choice_table,
            rule,
        }
    }
}

/// A matching problem: agents with ranked acceptable objects, objects with a
/// rule or table over the agent names.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub agents: Vec<AgentFile>,
    pub objects: Vec<ObjectFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub name: String,
    pub prefs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ObjectFile {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice_table: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleFile>,
}

impl MatchingFile {
    pub fn to_problem(&self) -> Result<MatchingProblem, LoadError> {
        let agents = GroundSet::new(self.agents.iter().map(|a| a.name.clone()))
            .map_err(|e| LoadError(e.to_string()))?;
        let object_names: Vec<String> = self.objects.iter().map(|o| o.name.clone()).collect();
        let prefs: Vec<Vec<usize>> = self
            .agents
            .iter()
            .map(|a| {
                a.prefs
                    .iter()
                    .map(|name| {
                        object_names.iter().position(|o| o == name).ok_or_else(|| {
                            LoadError(format!("agent {:?} ranks unknown object {name:?}", a.name))
                        })
                    })
                    .collect::<Result<Vec<usize>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let choices: Vec<ChoiceFunction> = self
            .objects
            .iter()
            .map(|o| {
                let instance = InstanceFile {
                    elements: agents.labels().to_vec(),
                    choice_table: o.choice_table.clone(),
                    rule: o.rule.clone(),
                };
                instance
                    .to_choice_function()
                    .map_err(|e| LoadError(format!("object {:?}: {e}", o.name)))
            })
            .collect::<Result<_, _>>()?;
        MatchingProblem::new(agents, object_names, prefs, choices)
            .map_err(|e| LoadError(e.to_string()))
    }

    pub fn from_problem(prob: &MatchingProblem) -> MatchingFile {
        let agents = prob
            .agents()
            .labels()
            .iter()
            .enumerate()
            .map(|(i, name)| AgentFile {
                name: name.clone(),
                prefs: prob.prefs()[i]
                    .iter()
                    .map(|&o| prob.objects()[o].clone())
                    .collect(),
            })
            .collect();
        let objects = prob
            .objects()
            .iter()
            .enumerate()
            .map(|(o, name)| {
                let instance = InstanceFile::from_choice_function(prob.choice_of(o));
                ObjectFile {
                    name: name.clone(),
                    choice_table: instance.choice_table,
                    rule: instance.rule,
                }
            })
            .collect();
        MatchingFile { agents, objects }
    }
}

/// Demand observations: positive rational prices (as `"p"` or `"p/q"`
/// strings) and the bundles demanded at each price.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DemandFile {
    pub elements: Vec<String>,
    pub observations: Vec<ObservationFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ObservationFile {
    pub price: BTreeMap<String, String>,
    pub demanded: Vec<Vec<String>>,
}

pub fn parse_rational(text: &str) -> Result<BigRational, LoadError> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| LoadError(format!("bad number {s:?}")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den == BigInt::from(0) {
                return err(format!("zero denominator in {text:?}"));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
        None => Ok(BigRational::from(parse_int(text)?)),
    }
}

pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl DemandFile {
    pub fn to_observations(&self) -> Result<(GroundSet, Vec<DemandObservation>), LoadError> {
        let ground = GroundSet::new(self.elements.clone()).map_err(|e| LoadError(e.to_string()))?;
        let mut out = Vec::with_capacity(self.observations.len());
        for (k, obs) in self.observations.iter().enumerate() {
            let mut per_elem = Vec::with_capacity(ground.len());
            for label in ground.labels() {
                match obs.price.get(label) {
                    Some(text) => per_elem.push(parse_rational(text)?),
                    None => return err(format!("observation {k} misses a price for {label:?}")),
                }
            }
            if obs.price.len() != ground.len() {
                return err(format!(
                    "observation {k} prices elements outside the ground set"
                ));
            }
            let price = PriceVector::new(per_elem).map_err(|e| LoadError(e.to_string()))?;
            if obs.demanded.is_empty() {
                return err(format!("observation {k} demands no bundle"));
            }
            let demanded = obs
                .demanded
                .iter()
                .map(|labels| parse_labels(&ground, labels))
                .collect::<Result<Vec<Bundle>, _>>()?;
            out.push(DemandObservation { price, demanded });
        }
        Ok((ground, out))
    }

    pub fn from_observations(ground: &GroundSet, obs: &[DemandObservation]) -> DemandFile {
        DemandFile {
            elements: ground.labels().to_vec(),
            observations: obs
                .iter()
                .map(|o| ObservationFile {
                    price: ground
                        .labels()
                        .iter()
                        .enumerate()
                        .map(|(i, l)| (l.clone(), render_rational(o.price.of(i as u8))))
                        .collect(),
                    demanded: o
                        .demanded
                        .iter()
                        .map(|&b| {
                            let mut labels: Vec<String> =
                                b.iter().map(|i| ground.label(i).to_string()).collect();
                            labels.sort();
                            labels
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Renders a valuation as a canonical bundle-to-rational JSON object.
pub fn valuation_to_json(ground: &GroundSet, v: &Valuation) -> String {
    let map: BTreeMap<String, String> = ground
        .bundles()
        .map(|s| (ground.key(s), render_rational(v.of(s))))
        .collect();
    serde_json::to_string_pretty(&map).expect("string map serializes")
}

/// Parses `agent: object|-` lines as printed by the matching command; blank
/// lines and trace lines are skipped.
pub fn parse_matching_text(
    prob: &MatchingProblem,
    text: &str,
) -> Result<choicekit::matching::Matching, LoadError> {
    let mut assign = vec![None; prob.agents().len()];
    let mut seen = vec![false; prob.agents().len()];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("round ") {
            continue;
        }
        let Some((agent, object)) = line.split_once(':') else {
            return err(format!("unparseable line {line:?}"));
        };
        let agent = prob
            .agents()
            .index_of(agent.trim())
            .map_err(|e| LoadError(e.to_string()))? as usize;
        if seen[agent] {
            return err(format!("agent listed twice on line {line:?}"));
        }
        seen[agent] = true;
        let object = object.trim();
        if object != "-" {
            let o = prob
                .objects()
                .iter()
                .position(|name| name == object)
                .ok_or_else(|| LoadError(format!("unknown object {object:?}")))?;
            assign[agent] = Some(o);
        }
    }
    if !seen.iter().all(|&s| s) {
        return err("matching does not cover every agent");
    }
    Ok(choicekit::matching::Matching { assign })
}

pub fn render_matching(prob: &MatchingProblem, m: &choicekit::matching::Matching) -> String {
    let mut out = String::new();
    for (i, assigned) in m.assign.iter().enumerate() {
        let target = match assigned {
            Some(o) => prob.objects()[*o].as_str(),
            None => "-",
        };
        out.push_str(&format!("{}: {}\n", prob.agents().label(i as u8), target));
    }
    out
}
