use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chore_sched::checkers::{is_maximal, is_pareto_optimal_with_guard};
use chore_sched::generate::{generate, GeneratorKind, GeneratorParams};
use chore_sched::io::{
    exists_to_value, instance_to_json, parse_instance, parse_schedule, schedule_to_json, schedule_to_value,
};
use chore_sched::n_agent::{run_identical_bounded_components, run_identical_dichotomous_path};
use chore_sched::oracle::{
    demo_round_robin, demo_top_trading_envy_cycle, enumerate_maximal, exists, max_utilitarian_maximal, Criterion,
    ExistenceQuery, DEFAULT_GUARD,
};
use chore_sched::two_agent::{
    colours, interval_sequence_ef1, path_sequence, select_ef1, solve_two_agents, solve_two_agents_path,
};
use chore_sched::{check_ef1, golden, is_feasible, Error, Instance, Schedule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

mod algo;
mod report;

use algo::{resolve, Algo};
use report::{assignment_line, chores_text, flag_text, schedule_text, verdict_text, Report};

#[derive(Parser)]
#[command(
    name = "chore-sched",
    version,
    about = "Fair schedules of chores with conflicting time intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. JSON is the stable machine interface.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the command's artifact to this file: the schedule for
    /// `solve`, the witness for `exists`, the instance for `generate`, and
    /// the rendered report for everything else.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GuardArg {
    /// Largest chore count the exhaustive oracle accepts.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an EF1 and maximal schedule.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
    /// Evaluate a schedule file against a fairness criterion.
    Check {
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// ef, ef1, efx, ef<k>, ef1-po or ef1-complete.
        #[arg(long, default_value = "ef1")]
        criterion: String,
        #[command(flatten)]
        guard: GuardArg,
    },
    /// Ask the exhaustive oracle whether a maximal schedule meets a criterion.
    Exists {
        instance: PathBuf,
        #[arg(long, default_value = "ef1")]
        criterion: String,
        #[command(flatten)]
        guard: GuardArg,
    },
    /// List every maximal schedule.
    Enumerate {
        instance: PathBuf,
        #[command(flatten)]
        guard: GuardArg,
        /// Print only a maximal schedule of greatest total value.
        #[arg(long)]
        utilitarian: bool,
    },
    /// Print the intermediate steps of a solver.
    Sequence {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
    /// Replay one of the built-in examples.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Write a random instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, short = 'n', default_value_t = 2)]
        agents: usize,
        #[arg(long, short = 'm', default_value_t = 8)]
        chores: usize,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        min_value: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        max_value: i64,
        /// Give every agent the same valuations.
        #[arg(long)]
        identical: bool,
        /// Longest interval for random-intervals.
        #[arg(long, default_value_t = 6)]
        max_length: u64,
        /// Largest conflict component for bounded-components (defaults to the agent count).
        #[arg(long)]
        component_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    /// No schedule is EFX and maximal.
    EfxMaximal,
    /// No schedule is EF1 and Pareto optimal.
    Ef1Po,
    /// No complete schedule is EF1.
    Ef1Complete,
    /// Round robin over feasible chores breaks EF1.
    RoundRobin,
    /// Sink-picking envy-cycle elimination breaks EF1.
    EnvyCycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    RandomIntervals,
    RandomPath,
    RandomDichotomousPath,
    BoundedComponents,
}

impl From<Kind> for GeneratorKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::RandomIntervals => GeneratorKind::RandomIntervals,
            Kind::RandomPath => GeneratorKind::RandomPath,
            Kind::RandomDichotomousPath => GeneratorKind::RandomDichotomousPath,
            Kind::BoundedComponents => GeneratorKind::BoundedComponents,
        }
    }
}

/// Errors split by exit code: bad input versus a broken invariant.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Output of a command plus an optional artifact for `--out`.
struct Outcome {
    report: Report,
    artifact: Option<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, artifact: None }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_criterion(s: &str) -> CliResult<Criterion> {
    s.parse().map_err(Failure::from)
}

fn solve(instance: &Instance, algo: Algo) -> CliResult<Outcome> {
    let algo = resolve(algo, instance)?;
    let schedule = match algo {
        Algo::TwoAgentInterval => solve_two_agents(instance)?,
        Algo::TwoAgentPath => solve_two_agents_path(instance)?,
        Algo::DichotomousPath => run_identical_dichotomous_path(instance, false)?.schedule,
        Algo::BoundedComponents => run_identical_bounded_components(instance)?.schedule,
        Algo::Auto => unreachable!("resolved above"),
    };
    let ef1 = check_ef1(&schedule, instance)?;
    let maximal = is_maximal(&schedule, instance.graph())?;
    if !ef1.holds || !maximal {
        return Err(Failure::Internal(format!(
            "{algo} returned a schedule that is {}",
            if ef1.holds { "not maximal" } else { "not EF1" }
        )));
    }
    let mut text = format!("algorithm: {algo}\n");
    text += &schedule_text(&schedule);
    text += &verdict_text("ef1", &ef1);
    text += &flag_text("maximal", maximal);
    text += &flag_text("complete", schedule.is_complete());
    let json = json!({
        "algorithm": algo.to_string(),
        "schedule": schedule_to_value(&schedule),
        "ef1": ef1,
        "maximal": maximal,
        "complete": schedule.is_complete(),
    });
    Ok(Outcome {
        report: Report {
            json,
            text,
            holds: true,
        },
        artifact: Some(schedule_to_json(&schedule)),
    })
}

fn check(instance: &Instance, schedule: &Schedule, criterion: Criterion, guard: usize) -> CliResult<Report> {
    if !is_feasible(schedule, instance.graph())? {
        let (agent, a, b) = schedule
            .first_conflict(instance.graph())
            .expect("infeasible schedule has a conflict");
        return Err(Failure::Input(format!(
            "schedule is infeasible: agent {agent} holds conflicting chores {a} and {b}"
        )));
    }
    let verdict = criterion.verdict(schedule, instance)?;
    let maximal = is_maximal(schedule, instance.graph())?;
    let complete = schedule.is_complete();
    let mut holds = verdict.holds;
    let mut json = json!({
        "criterion": criterion.to_string(),
        "verdict": verdict,
        "maximal": maximal,
        "complete": complete,
    });
    let mut text = verdict_text(&criterion.to_string(), &verdict);
    text += &flag_text("maximal", maximal);
    text += &flag_text("complete", complete);
    match criterion {
        Criterion::Ef1Po => {
            let po = is_pareto_optimal_with_guard(schedule, instance, guard)?;
            holds &= po;
            json["pareto_optimal"] = json!(po);
            text += &flag_text("pareto optimal", po);
        }
        Criterion::Ef1Complete => holds &= complete,
        _ => {}
    }
    json["holds"] = json!(holds);
    writeln!(text, "holds: {holds}").unwrap();
    Ok(Report { json, text, holds })
}

fn exists_report(instance: &Instance, criterion: Criterion, guard: usize) -> CliResult<Outcome> {
    let query = ExistenceQuery {
        criterion,
        guard: Some(guard),
    };
    let witness = exists(instance, &query)?;
    let mut json = exists_to_value(witness.as_ref());
    json["criterion"] = json!(criterion.to_string());
    let mut text = format!("criterion: {criterion} and maximal\nexists: {}\n", witness.is_some());
    if let Some(w) = &witness {
        text += &schedule_text(w);
    }
    Ok(Outcome {
        report: Report {
            json,
            text,
            holds: witness.is_some(),
        },
        artifact: witness.as_ref().map(schedule_to_json),
    })
}

fn enumerate(instance: &Instance, guard: usize, utilitarian: bool) -> CliResult<Report> {
    if utilitarian {
        let best = max_utilitarian_maximal(instance, guard)?;
        let total: i64 = (0..instance.agents()).map(|a| instance.value(a, &best.bundle(a))).sum();
        let text = format!("total value: {total}\n{}", schedule_text(&best));
        let json = json!({ "total_value": total, "schedule": schedule_to_value(&best) });
        return Ok(Report {
            json,
            text,
            holds: true,
        });
    }
    let all = enumerate_maximal(instance, guard)?;
    let text = all.iter().map(|s| assignment_line(s) + "\n").collect::<String>()
        + &format!("{} maximal schedules\n", all.len());
    let json = json!({
        "count": all.len(),
        "schedules": all.iter().map(|s| s.assignment().to_vec()).collect::<Vec<_>>(),
    });
    Ok(Report {
        json,
        text,
        holds: true,
    })
}

fn sequence(instance: &Instance, algo: Algo) -> CliResult<Report> {
    let algo = resolve(algo, instance)?;
    match algo {
        Algo::TwoAgentInterval | Algo::TwoAgentPath => {
            let seq = if algo == Algo::TwoAgentPath {
                path_sequence(instance)?
            } else {
                interval_sequence_ef1(instance)?
            };
            let chosen = select_ef1(&seq, instance)?;
            let index = seq.steps.iter().position(|s| *s == chosen);
            let mut text = seq.trace();
            if let Some(i) = index {
                writeln!(text, "selected: {i}").unwrap();
            }
            let steps: Vec<_> = seq
                .steps
                .iter()
                .zip(&seq.tags)
                .map(|(s, tag)| json!({ "colours": colours(s), "tag": tag.to_string(), "assignment": s.assignment() }))
                .collect();
            let json = json!({ "algorithm": algo.to_string(), "steps": steps, "selected": index });
            Ok(Report {
                json,
                text,
                holds: true,
            })
        }
        Algo::DichotomousPath => {
            let run = run_identical_dichotomous_path(instance, false)?;
            let mut text = format!(
                "heavy {} light {}\npicking sequence: {}\n",
                run.dichotomy.heavy,
                run.dichotomy.light,
                chores_text(&run.picking_sequence)
            );
            for meta in &run.meta_agents {
                writeln!(
                    text,
                    "meta agent {} (agents {}): picks {}; padding {} heavy, {} light",
                    meta.index,
                    chores_text(&meta.members),
                    chores_text(&meta.picks),
                    meta.dummy_heavy,
                    meta.dummy_light
                )
                .unwrap();
            }
            for p in &run.padded {
                writeln!(
                    text,
                    "chore {} {}{} -> agent {}",
                    p.piece.id,
                    if p.piece.heavy { "heavy" } else { "light" },
                    if p.piece.dummy { " dummy" } else { "" },
                    p.agent
                )
                .unwrap();
            }
            text += &schedule_text(&run.schedule);
            let json = json!({
                "algorithm": algo.to_string(),
                "dichotomy": { "heavy": run.dichotomy.heavy, "light": run.dichotomy.light },
                "picking_sequence": run.picking_sequence,
                "meta_agents": run.meta_agents,
                "trace": run.padded,
                "schedule": schedule_to_value(&run.schedule),
            });
            Ok(Report {
                json,
                text,
                holds: true,
            })
        }
        Algo::BoundedComponents => {
            let run = run_identical_bounded_components(instance)?;
            let mut text = String::new();
            for step in &run.steps {
                let picks: Vec<String> = step.picks.iter().map(|(a, c)| format!("{a}<-{c}")).collect();
                writeln!(
                    text,
                    "component {}: order {}; picks {}",
                    chores_text(&step.component),
                    chores_text(&step.order),
                    picks.join(" ")
                )
                .unwrap();
            }
            text += &schedule_text(&run.schedule);
            let json = json!({
                "algorithm": algo.to_string(),
                "steps": run.steps,
                "schedule": schedule_to_value(&run.schedule),
            });
            Ok(Report {
                json,
                text,
                holds: true,
            })
        }
        Algo::Auto => unreachable!("resolved above"),
    }
}

fn demo(name: DemoName) -> CliResult<Report> {
    let (key, instance) = match name {
        DemoName::EfxMaximal => ("efx-maximal", golden::efx_maximal()),
        DemoName::Ef1Po => ("ef1-po", golden::ef1_po()),
        DemoName::Ef1Complete => ("ef1-complete", golden::ef1_complete()),
        DemoName::RoundRobin => ("round-robin", golden::round_robin()),
        DemoName::EnvyCycle => ("envy-cycle", golden::envy_cycle()),
    };
    let values = instance.valuations().additive().expect("golden instances are additive")[0].clone();
    let mut text = format!(
        "demo: {key}\ninstance: {} agents, path of {} chores, identical values ({})\n",
        instance.agents(),
        instance.chore_count(),
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
    );
    let mut json = json!({
        "demo": key,
        "instance": serde_json::from_str::<serde_json::Value>(&instance_to_json(&instance)?).expect("valid json"),
    });
    let holds = match name {
        DemoName::EfxMaximal | DemoName::Ef1Po | DemoName::Ef1Complete => {
            let criterion = match name {
                DemoName::EfxMaximal => Criterion::Efx,
                DemoName::Ef1Po => Criterion::Ef1Po,
                _ => Criterion::Ef1Complete,
            };
            let found = exists(&instance, &ExistenceQuery::new(criterion))?;
            writeln!(text, "criterion: {criterion} and maximal\nexists: {}", found.is_some()).unwrap();
            json["criterion"] = json!(criterion.to_string());
            json["exists"] = exists_to_value(found.as_ref());
            found.is_some()
        }
        DemoName::RoundRobin | DemoName::EnvyCycle => {
            let (schedule, verdict) = if let DemoName::RoundRobin = name {
                demo_round_robin(&instance, &[0, 1])?
            } else {
                demo_top_trading_envy_cycle(&instance)?
            };
            text += &schedule_text(&schedule);
            text += &verdict_text("ef1", &verdict);
            json["schedule"] = schedule_to_value(&schedule);
            json["ef1"] = json!(verdict);
            verdict.holds
        }
    };
    Ok(Report { json, text, holds })
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    Ok(match &cli.command {
        Command::Solve { instance, algo } => solve(&load_instance(instance)?, *algo)?,
        Command::Check {
            instance,
            schedule,
            criterion,
            guard,
        } => {
            let inst = load_instance(instance)?;
            let sched = parse_schedule(&read(schedule)?, &inst)
                .map_err(|e| Failure::Input(format!("{}: {e}", schedule.display())))?;
            check(&inst, &sched, parse_criterion(criterion)?, guard.guard)?.into()
        }
        Command::Exists {
            instance,
            criterion,
            guard,
        } => exists_report(&load_instance(instance)?, parse_criterion(criterion)?, guard.guard)?,
        Command::Enumerate {
            instance,
            guard,
            utilitarian,
        } => enumerate(&load_instance(instance)?, guard.guard, *utilitarian)?.into(),
        Command::Sequence { instance, algo } => sequence(&load_instance(instance)?, *algo)?.into(),
        Command::Demo { name } => demo(*name)?.into(),
        Command::Generate {
            kind,
            agents,
            chores,
            min_value,
            max_value,
            identical,
            max_length,
            component_size,
            seed,
        } => {
            let params = GeneratorParams {
                agents: *agents,
                chores: *chores,
                min_value: *min_value,
                max_value: *max_value,
                identical: *identical,
                max_length: *max_length,
                component_size: *component_size,
            };
            let instance = generate((*kind).into(), &params, *seed)?;
            let file = instance_to_json(&instance)?;
            let json = serde_json::from_str(&file).expect("valid json");
            Outcome {
                report: Report {
                    json,
                    text: file.clone() + "\n",
                    holds: true,
                },
                artifact: Some(file),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { report, artifact }) => {
            let rendered = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
            };
            // With `--out`, an artifact goes to the file and the report still
            // goes to stdout; without an artifact the report itself is written.
            let stdout = match (&cli.out, artifact) {
                (None, _) => Some(rendered),
                (Some(path), artifact) => {
                    let (body, stdout) = match artifact {
                        Some(a) => (
                            a + "\n",
                            (!matches!(cli.command, Command::Generate { .. })).then_some(rendered),
                        ),
                        None => (rendered, None),
                    };
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    stdout
                }
            };
            if let Some(text) = stdout {
                print!("{text}");
            }
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("bug: {msg}");
            ExitCode::from(3)
        }
    }
}
