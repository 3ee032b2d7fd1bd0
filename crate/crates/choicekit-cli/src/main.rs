//! Command-line surface over the choicekit library.
//!
//! Exit codes: 0 when every requested check passes (or a search finds an
//! instance), 1 when a check fails or nothing is found, 2 on input errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use choicekit::axioms::{self, AxiomReport, Coverage, Scan};
use choicekit::demand::{self, QuasilinearOutcome};
use choicekit::lattice;
use choicekit::matching::{self, DaVariant, StabilityNotion};
use choicekit::rules;
use choicekit::search::{search_counterexample, Counterexample, SearchKind};
use choicekit::{ChoiceFunction, GroundSet};
use choicekit_cli::formats;
use formats::{DemandFile, InstanceFile, LoadError, MatchingFile};

#[derive(Parser)]
#[command(name = "choicekit", version, about = "Combinatorial choice toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check behavioral axioms of a choice-function instance.
    Axioms {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated axiom names; defaults to the core seven.
        #[arg(long)]
        which: Option<String>,
        /// Cap on scanned option-set pairs; beyond it the scan samples.
        #[arg(long)]
        max_size: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<String>,
    },
    /// Maximal option sets, Hasse diagram, and rationalizing orders.
    Lattice {
        #[arg(long)]
        input: PathBuf,
        /// Write the Hasse diagram as DOT to this path (`-` for stdout).
        #[arg(long)]
        dot: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Rationalize an instance by collected maximizers or by capacity and
    /// priority.
    Rationalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: RationalizeMode,
        /// Budget for the minimum-size subset search.
        #[arg(long)]
        max_size: Option<u64>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Demand checks and quasilinear rationalization of observations.
    Demand {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: DemandMode,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run deferred acceptance on a matching problem.
    Da {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Ck)]
        variant: Variant,
        /// Append the per-round held sets.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        output: Option<String>,
    },
    /// Check stability of a matching against a problem.
    Stability {
        #[arg(long)]
        input: PathBuf,
        /// Matching as `agent: object|-` lines (the `da` output format).
        #[arg(long)]
        matching: PathBuf,
        #[arg(long, default_value = "all")]
        notion: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Search for a counterexample instance of the named kind.
    Search {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidate budget.
        #[arg(long)]
        max_size: Option<u64>,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RationalizeMode {
    Mc,
    McMin,
    Responsive,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemandMode {
    Lod,
    Warp,
    Rationalize,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Variant {
    Ck,
    Ak,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(target: &Option<String>, content: &str) -> Result<(), LoadError> {
    match target.as_deref() {
        None | Some("-") => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| LoadError(format!("cannot write {path}: {e}"))),
    }
}

fn read(path: &PathBuf) -> Result<String, LoadError> {
    std::fs::read_to_string(path)
        .map_err(|e| LoadError(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &PathBuf) -> Result<ChoiceFunction, LoadError> {
    let file: InstanceFile = serde_json::from_str(&read(path)?)
        .map_err(|e| LoadError(format!("{}: {e}", path.display())))?;
    file.to_choice_function()
}

fn load_matching_file(path: &PathBuf) -> Result<matching::MatchingProblem, LoadError> {
    let file: MatchingFile = serde_json::from_str(&read(path)?)
        .map_err(|e| LoadError(format!("{}: {e}", path.display())))?;
    file.to_problem()
}

fn coverage_note(coverage: Coverage) -> String {
    match coverage {
        Coverage::Exhaustive => String::new(),
        Coverage::Sampled { pairs, seed } => format!(" (sampled {pairs} pairs, seed {seed})"),
    }
}

fn verdict_line<W>(
    name: &str,
    report: &AxiomReport<W>,
    witness: impl Fn(&W) -> String,
) -> (String, bool) {
    let line = if report.holds {
        format!("{name}: PASS{}\n", coverage_note(report.coverage))
    } else {
        format!(
            "{name}: FAIL [{}]{}\n",
            witness(
                report
                    .witness
                    .as_ref()
                    .expect("failed report has a witness")
            ),
            coverage_note(report.coverage)
        )
    };
    (line, report.holds)
}

const DEFAULT_AXIOMS: &str = "subs,ire,pi,size-mono,capacity,warsprio,idempotence";

fn run_axioms(c: &ChoiceFunction, which: &str, scan: Scan) -> Result<(String, bool), LoadError> {
    let g = c.ground();
    let elem = |i: &u8| g.label(*i).to_string();
    let mut out = String::new();
    let mut all_pass = true;
    for name in which.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (line, pass) = match name {
            "subs" => verdict_line(name, &axioms::check_substitutability(c, scan), |w| {
                format!(
                    "S={} T={} elem={}",
                    g.render(w.s),
                    g.render(w.t),
                    elem(&w.elem)
                )
            }),
            "ire" => verdict_line(name, &axioms::check_ire(c, scan), |w| {
                format!("S={} T={}", g.render(w.s), g.render(w.t))
            }),
            "pi" => verdict_line(name, &axioms::check_path_independence(c, scan), |w| {
                format!("S={} T={}", g.render(w.s), g.render(w.t))
            }),
            "size-mono" => verdict_line(name, &axioms::check_size_monotonicity(c), |w| {
                format!("small={} large={}", g.render(w.small), g.render(w.large))
            }),
            "capacity" => {
                let (q, report) = axioms::check_capacity_filling(c);
                match q {
                    Some(q) => (format!("capacity: PASS [q={q}]\n"), true),
                    None => verdict_line("capacity", &report, |w| {
                        format!("q={} S={}", w.q, g.render(w.s))
                    }),
                }
            }
            "warsprio" => verdict_line(name, &axioms::check_warsprio(c), |w| {
                format!(
                    "a={} b={} S_ab={} S_ba={}",
                    elem(&w.a),
                    elem(&w.b),
                    g.render(w.s_ab),
                    g.render(w.s_ba)
                )
            }),
            "idempotence" => verdict_line(name, &axioms::check_idempotence(c), |w| {
                format!("S={}", g.render(w.s))
            }),
            "subadditivity" => {
                let eq = axioms::check_subs_equivalents(c, scan);
                verdict_line(name, &eq.subadditivity, |w| {
                    format!(
                        "S={} T={} elem={}",
                        g.render(w.s),
                        g.render(w.t),
                        elem(&w.elem)
                    )
                })
            }
            "monotone-rejection" => {
                let eq = axioms::check_subs_equivalents(c, scan);
                verdict_line(name, &eq.monotone_rejection, |w| {
                    format!(
                        "S={} T={} elem={}",
                        g.render(w.s),
                        g.render(w.t),
                        elem(&w.elem)
                    )
                })
            }
            "antitone-nonrejection" => {
                let eq = axioms::check_subs_equivalents(c, scan);
                verdict_line(name, &eq.antitone_nonrejection, |w| {
                    format!(
                        "S={} T={} elem={}",
                        g.render(w.s),
                        g.render(w.t),
                        elem(&w.elem)
                    )
                })
            }
            "pi-image-union" => {
                let variants = axioms::check_pi_variants(c, scan);
                verdict_line(name, &variants.image_union, render_pi_variant(g))
            }
            "pi-additive-image" => {
                let variants = axioms::check_pi_variants(c, scan);
                verdict_line(name, &variants.additive_in_image, render_pi_variant(g))
            }
            other => return Err(LoadError(format!("unknown axiom {other:?}"))),
        };
        all_pass &= pass;
        out.push_str(&line);
    }
    Ok((out, all_pass))
}

fn render_pi_variant(g: &GroundSet) -> impl Fn(&axioms::PiVariantWitness) -> String + '_ {
    move |w| match w {
        axioms::PiVariantWitness::NotIdempotent { s } => {
            format!("not idempotent at S={}", g.render(*s))
        }
        axioms::PiVariantWitness::PairMismatch { s, t } => {
            format!("S={} T={}", g.render(*s), g.render(*t))
        }
    }
}

fn run(command: Command) -> Result<u8, LoadError> {
    match command {
        Command::Axioms {
            input,
            which,
            max_size,
            seed,
            output,
        } => {
            let c = load_instance(&input)?;
            let scan = match max_size {
                Some(cap) => Scan::sampled(cap, seed),
                None => Scan::exhaustive(),
            };
            let which = which.unwrap_or_else(|| DEFAULT_AXIOMS.to_string());
            let (report, all_pass) = run_axioms(&c, &which, scan)?;
            emit(&output, &report)?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Lattice { input, dot, output } => {
            let c = load_instance(&input)?;
            let diagram = match lattice::hasse(&c) {
                Ok(d) => d,
                Err(e) => {
                    emit(&output, &format!("NONE [{e}]\n"))?;
                    return Ok(1);
                }
            };
            let mc = lattice::mc_rationalization(&c)
                .map_err(|e| LoadError(format!("diagram built but orders failed: {e}")))?;
            let mut text = String::new();
            let _ = writeln!(text, "nodes: {}", diagram.nodes.len());
            let _ = writeln!(text, "edges: {}", diagram.edges.len());
            let _ = writeln!(text, "orders: {}", mc.orders.len());
            for o in &mc.orders {
                let _ = writeln!(text, "order: {}", o.render(c.ground()));
            }
            emit(&output, &text)?;
            if let Some(dot_target) = dot {
                emit(&Some(dot_target), &diagram.to_dot(c.ground()))?;
            }
            Ok(0)
        }
        Command::Rationalize {
            input,
            mode,
            max_size,
            output,
        } => {
            let c = load_instance(&input)?;
            let mut text = String::new();
            let code = match mode {
                RationalizeMode::Mc => match lattice::mc_rationalization(&c) {
                    Ok(mc) => {
                        for o in &mc.orders {
                            let _ = writeln!(text, "order: {}", o.render(c.ground()));
                        }
                        0
                    }
                    Err(e) => {
                        let _ = writeln!(text, "NONE [{e}]");
                        1
                    }
                },
                RationalizeMode::McMin => {
                    match lattice::min_mc_size(&c, max_size.unwrap_or(1_000_000)) {
                        Ok(Some((size, orders))) => {
                            let _ = writeln!(text, "size: {size}");
                            for o in &orders {
                                let _ = writeln!(text, "order: {}", o.render(c.ground()));
                            }
                            0
                        }
                        Ok(None) => {
                            let _ = writeln!(text, "NONE [subset search budget exhausted]");
                            1
                        }
                        Err(e) => {
                            let _ = writeln!(text, "NONE [{e}]");
                            1
                        }
                    }
                }
                RationalizeMode::Responsive => {
                    match rules::responsive_rationalize(&c).map_err(|e| LoadError(e.to_string()))? {
                        Some((q, order)) => {
                            let _ = writeln!(text, "q: {q}");
                            let _ = writeln!(text, "order: {}", order.render(c.ground()));
                            0
                        }
                        None => {
                            let (q, _) = axioms::check_capacity_filling(&c);
                            let reason = if q.is_none() {
                                "not capacity-filling"
                            } else {
                                "revealed strict priority is not asymmetric"
                            };
                            let _ = writeln!(text, "NONE [{reason}]");
                            1
                        }
                    }
                }
            };
            emit(&output, &text)?;
            Ok(code)
        }
        Command::Demand {
            input,
            mode,
            output,
        } => {
            let file: DemandFile = serde_json::from_str(&read(&input)?)
                .map_err(|e| LoadError(format!("{}: {e}", input.display())))?;
            let (ground, obs) = file.to_observations()?;
            let mut text = String::new();
            let code = match mode {
                DemandMode::Lod => {
                    let report = demand::check_law_of_demand(&obs);
                    let (line, _) = verdict_line("law-of-demand", &report, |w| {
                        format!(
                            "A={} at observation {} vs A'={} at observation {} (inner product {})",
                            ground.render(w.bundle_a),
                            w.obs_a,
                            ground.render(w.bundle_b),
                            w.obs_b,
                            formats::render_rational(&w.inner_product)
                        )
                    });
                    text.push_str(&line);
                    u8::from(!report.holds)
                }
                DemandMode::Warp => {
                    let report = demand::check_demand_warp(&obs);
                    let (line, _) = verdict_line("demand-warp", &report, |w| {
                        format!(
                            "A={} at observation {} vs A'={} at observation {}",
                            ground.render(w.bundle_a),
                            w.obs_a,
                            ground.render(w.bundle_b),
                            w.obs_b
                        )
                    });
                    text.push_str(&line);
                    u8::from(!report.holds)
                }
                DemandMode::Rationalize => {
                    match demand::quasilinear_rationalize(&ground, &obs)
                        .map_err(|e| LoadError(e.to_string()))?
                    {
                        QuasilinearOutcome::Rationalized(v) => {
                            text.push_str(&formats::valuation_to_json(&ground, &v));
                            text.push('\n');
                            0
                        }
                        QuasilinearOutcome::Infeasible { cycle } => {
                            let _ = writeln!(text, "NONE [negative constraint cycle]");
                            for step in &cycle {
                                let _ = writeln!(
                                    text,
                                    "cycle step: bundle={} observation={}",
                                    ground.render(step.node),
                                    step.obs
                                );
                            }
                            1
                        }
                    }
                }
            };
            emit(&output, &text)?;
            Ok(code)
        }
        Command::Da {
            input,
            variant,
            trace,
            output,
        } => {
            let prob = load_matching_file(&input)?;
            let da_variant = match variant {
                Variant::Ck => DaVariant::ChoiceKeeping,
                Variant::Ak => DaVariant::ApplicantKeeping,
            };
            let outcome = matching::run_da(&prob, da_variant);
            let mut text = String::new();
            let code = match &outcome.result {
                Ok(m) => {
                    text.push_str(&formats::render_matching(&prob, m));
                    0
                }
                Err(report) => {
                    let holders: Vec<&str> = report
                        .objects
                        .iter()
                        .map(|&o| prob.objects()[o].as_str())
                        .collect();
                    let _ = writeln!(
                        text,
                        "INFEASIBLE: agent {} held by {}",
                        prob.agents().label(report.agent),
                        holders.join(", ")
                    );
                    1
                }
            };
            if trace {
                text.push('\n');
                text.push_str(&matching::render_trace(&prob, &outcome.trace));
            }
            emit(&output, &text)?;
            Ok(code)
        }
        Command::Stability {
            input,
            matching: matching_path,
            notion,
            output,
        } => {
            let prob = load_matching_file(&input)?;
            let m = formats::parse_matching_text(&prob, &read(&matching_path)?)?;
            let report = matching::check_stability(&prob, &m);
            let requested: Vec<StabilityNotion> = match notion.as_str() {
                "all" => vec![
                    StabilityNotion::Individual,
                    StabilityNotion::Alpha,
                    StabilityNotion::Beta,
                    StabilityNotion::Group,
                ],
                "individual" => vec![StabilityNotion::Individual],
                "alpha" => vec![StabilityNotion::Alpha],
                "beta" => vec![StabilityNotion::Beta],
                "group" => vec![StabilityNotion::Group],
                other => return Err(LoadError(format!("unknown stability notion {other:?}"))),
            };
            let mut text = String::new();
            let mut all_pass = true;
            for n in requested {
                let (name, pass) = match n {
                    StabilityNotion::Individual => ("individual", report.individually_stable),
                    StabilityNotion::Alpha => ("alpha", report.alpha),
                    StabilityNotion::Beta => ("beta", report.beta),
                    StabilityNotion::Group => ("group", report.group),
                };
                if pass {
                    let _ = writeln!(text, "{name}: PASS");
                } else {
                    all_pass = false;
                    let detail = match n {
                        StabilityNotion::Individual => match report.individual_witness {
                            Some(matching::IndividualWitness::Unacceptable { agent }) => format!(
                                "agent {} holds an unacceptable object",
                                prob.agents().label(agent)
                            ),
                            Some(matching::IndividualWitness::NotChosen { object }) => format!(
                                "object {} would drop its assignees",
                                prob.objects()[object]
                            ),
                            None => unreachable!("failed notion carries a witness"),
                        },
                        StabilityNotion::Alpha | StabilityNotion::Beta => {
                            let w = if n == StabilityNotion::Alpha {
                                report.alpha_witness
                            } else {
                                report.beta_witness
                            };
                            match w {
                                Some(pair) => format!(
                                    "blocking agent={} object={}",
                                    prob.agents().label(pair.agent),
                                    prob.objects()[pair.object]
                                ),
                                None => "individually unstable".to_string(),
                            }
                        }
                        StabilityNotion::Group => match report.group_witness {
                            Some(w) => format!(
                                "coalition={} object={}",
                                prob.agents().render(w.agents),
                                prob.objects()[w.object]
                            ),
                            None => "individually unstable".to_string(),
                        },
                    };
                    let _ = writeln!(text, "{name}: FAIL [{detail}]");
                }
            }
            emit(&output, &text)?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Search {
            kind,
            seed,
            max_size,
            output,
        } => {
            let kind = SearchKind::parse(&kind)
                .ok_or_else(|| LoadError(format!("unknown search kind {kind:?}")))?;
            match search_counterexample(kind, seed, max_size.unwrap_or(100_000)) {
                Some(hit) => {
                    let json = match hit.found {
                        Counterexample::Choice(c) => {
                            serde_json::to_string_pretty(&InstanceFile::from_choice_function(&c))
                        }
                        Counterexample::Problem(p) => {
                            serde_json::to_string_pretty(&MatchingFile::from_problem(&p))
                        }
                    }
                    .expect("instances serialize");
                    emit(&output, &format!("{json}\n"))?;
                    Ok(0)
                }
                None => {
                    emit(&output, "NONE\n")?;
                    Ok(1)
                }
            }
        }
    }
}
