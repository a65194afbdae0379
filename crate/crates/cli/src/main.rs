//! `incontest`: run school-choice mechanisms, audit assignments and query
//! the enumeration oracles from the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use incontest_core::generate::{random_problem, rng, seeded_problem, GenConfig};
use incontest_core::mechanisms::{run, run_traced, MechanismKind, MechanismSpec};
use incontest_core::model::{Assignment, InterimInfo, Preference, Problem, Seat, StudentId};
use incontest_core::oracle::corpus::unit_frame_corpus;
use incontest_core::oracle::{
    attainable_set, check_maxmin_optimal, dominant_strategies_brute, has_dominant_strategy, has_safe_strategy,
    top_top_violations, Budget, OutcomeTable,
};
use incontest_core::priority_sets::{incontestability_verdict, top_priority_for};
use incontest_core::Error;

#[derive(Parser, Debug)]
#[command(name = "incontest", version, about = "School-choice mechanisms and incontestability audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Largest number of items one enumeration may visit.
    #[arg(long, env = "INCONTEST_BUDGET", global = true)]
    budget: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a mechanism on an instance.
    Solve {
        #[arg(short, long)]
        instance: PathBuf,
        /// `sosm|boston|ttc|seadam|ct|fct|ettc|ar:<e>`, optionally `@k=<cap>`.
        #[arg(short, long)]
        mechanism: String,
        /// Include the step-by-step trace.
        #[arg(long)]
        trace: bool,
    },
    /// Check an assignment for legitimate complaints.
    Audit {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        assignment: PathBuf,
    },
    /// Enumerate the seats a student can reach, next to the prediction.
    Attainable {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        mechanism: String,
        #[arg(long)]
        student: String,
    },
    /// Safe, maxmin and dominant strategy analyses for one student.
    Strategy {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(long)]
        student: String,
        #[arg(short, long)]
        mechanism: Option<String>,
        /// List cap.
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, group = "analysis")]
        safe: bool,
        #[arg(long, group = "analysis")]
        maxmin: bool,
        #[arg(long, group = "analysis")]
        dominant: bool,
        /// Cross-check the characterization by enumeration.
        #[arg(long)]
        brute: bool,
    },
    /// Incontestability and top-top consistency audits over a corpus.
    Consistency {
        /// Instances to audit; without any, a corpus is generated.
        #[arg(short, long)]
        instance: Vec<PathBuf>,
        /// Mechanisms to audit; defaults to the incontestable five.
        #[arg(short, long)]
        mechanism: Vec<String>,
        #[arg(long, default_value_t = 3)]
        students: usize,
        #[arg(long, default_value_t = 2)]
        schools: usize,
        #[arg(long, default_value_t = 1)]
        max_capacity: usize,
        /// Generated problems, or sampled profiles per frame in exhaustive mode.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Enumerate every preference profile over seeded priority frames
        /// with unit capacities; samples once the budget is exceeded.
        #[arg(long)]
        exhaustive: bool,
        /// Priority frames used in exhaustive mode.
        #[arg(long, default_value_t = 4)]
        frames: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a seeded random instance.
    Gen {
        #[arg(long)]
        students: usize,
        #[arg(long)]
        schools: usize,
        #[arg(long, default_value_t = 1)]
        max_capacity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A finished command: the report and the exit status it implies.
struct Report {
    json: Value,
    table: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let text = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
                Format::Table => report.table,
            };
            if let Err(err) = emit(cli.common.output.as_deref(), &text) {
                eprintln!("error: {err:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidMechanismSpec(_) | Error::InvalidPeriod) => 3,
        Some(Error::BudgetExceeded { .. }) => 4,
        _ => 2,
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Report> {
    let budget = cli.common.budget.map_or(Budget::DEFAULT, Budget);
    match &cli.command {
        Command::Solve {
            instance,
            mechanism,
            trace,
        } => solve(instance, mechanism, *trace),
        Command::Audit { instance, assignment } => audit(instance, assignment),
        Command::Attainable {
            instance,
            mechanism,
            student,
        } => attainable(instance, mechanism, student, budget),
        Command::Strategy {
            instance,
            student,
            mechanism,
            k,
            safe,
            maxmin,
            dominant,
            brute,
        } => {
            let p = load_problem(instance)?;
            let i = p.student_id(student)?;
            let mech = mechanism.as_deref().map(parse_spec).transpose()?;
            if *safe {
                safe_strategy(&p, i, k.context("--safe needs -k")?, *brute, budget)
            } else if *maxmin {
                let mut spec = mech.context("--maxmin needs -m")?;
                if let Some(k) = k {
                    spec.list_cap = Some(*k);
                }
                maxmin_strategy(&p, i, &spec, budget)
            } else if *dominant {
                let spec = mech.context("--dominant needs -m")?;
                let k = k.or(spec.list_cap).context("--dominant needs -k")?;
                dominant_strategy(&p, i, spec.kind, k, *brute, budget)
            } else {
                bail!("choose one of --safe, --maxmin, --dominant")
            }
        }
        Command::Consistency {
            instance,
            mechanism,
            students,
            schools,
            max_capacity,
            count,
            exhaustive,
            frames,
            seed,
        } => {
            let kinds = if mechanism.is_empty() {
                MechanismKind::INCONTESTABLE.to_vec()
            } else {
                mechanism.iter().map(|m| parse_spec(m).map(|s| s.kind)).collect::<anyhow::Result<_>>()?
            };
            let corpus: Vec<Problem> = if !instance.is_empty() {
                instance.iter().map(|path| load_problem(path)).collect::<anyhow::Result<_>>()?
            } else if *exhaustive {
                if *students == 0 || *schools == 0 {
                    bail!("need at least one student and one school");
                }
                unit_frame_corpus(*students, *schools, *frames, *count, *seed, budget)?
            } else {
                let cfg = GenConfig::new(*students, *schools).max_capacity(*max_capacity);
                let mut r = rng(*seed);
                (0..*count).map(|_| random_problem(&mut r, cfg)).collect()
            };
            consistency(&corpus, &kinds)
        }
        Command::Gen {
            students,
            schools,
            max_capacity,
            seed,
        } => {
            if *students == 0 || *schools == 0 {
                bail!("need at least one student and one school");
            }
            let p = seeded_problem(*seed, GenConfig::new(*students, *schools).max_capacity(*max_capacity));
            let json: Value = serde_json::from_str(&p.to_json())?;
            Ok(Report {
                table: p.to_json() + "\n",
                json,
                ok: true,
            })
        }
    }
}

fn load_problem(path: &Path) -> anyhow::Result<Problem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Problem::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_spec(text: &str) -> anyhow::Result<MechanismSpec> {
    Ok(text.parse::<MechanismSpec>()?)
}

fn seat_json(p: &Problem, seat: Seat) -> Value {
    json!(p.seat_name(seat))
}

fn seat_text(p: &Problem, seat: Seat) -> &str {
    p.seat_name(seat).unwrap_or("self")
}

fn list_names<'a>(p: &'a Problem, pref: &Preference) -> Vec<&'a str> {
    pref.schools().iter().map(|&s| p.school_name(s)).collect()
}

fn solve(instance: &Path, mechanism: &str, trace: bool) -> anyhow::Result<Report> {
    let p = load_problem(instance)?;
    let spec = parse_spec(mechanism)?;
    let (outcome, events) = if trace {
        let r = run_traced(&spec, &p)?;
        (r.outcome, Some(r.trace))
    } else {
        (run(&spec, &p)?, None)
    };
    let mut json: Value = serde_json::from_str(&outcome.to_json(&p))?;
    let mut table = format!("{spec}: {}\n", outcome.display(&p));
    if let Some(events) = events {
        json["trace"] = events.iter().map(|e| e.to_json(&p)).collect();
        for e in &events {
            table.push_str(&format!("  {}\n", e.to_json(&p)));
        }
    }
    Ok(Report { json, table, ok: true })
}

fn audit(instance: &Path, assignment: &Path) -> anyhow::Result<Report> {
    let p = load_problem(instance)?;
    let text = fs::read_to_string(assignment).with_context(|| format!("reading {}", assignment.display()))?;
    let a = Assignment::from_json(&p, &text).with_context(|| format!("in {}", assignment.display()))?;
    let report = incontestability_verdict(&p, &a)?;
    let json = report.to_json(&p);
    let mut table = format!(
        "{}\n",
        if report.incontestable() { "incontestable" } else { "contestable" }
    );
    for c in json["complaints"].as_array().into_iter().flatten() {
        table.push_str(&format!("  {} {} {}\n", c["student"].as_str().unwrap_or(""), c["kind"].as_str().unwrap_or(""), c["witness"]));
    }
    Ok(Report {
        ok: report.incontestable(),
        json,
        table,
    })
}

fn attainable(instance: &Path, mechanism: &str, student: &str, budget: Budget) -> anyhow::Result<Report> {
    let p = load_problem(instance)?;
    let spec = parse_spec(mechanism)?;
    let i = p.student_id(student)?;
    let set = attainable_set(&spec, &InterimInfo::of(&p, i), budget)?;
    let predicted = top_priority_for(&p, i, p.preference(i).schools()).outcomes();
    let attained = set.seats();
    let names = |seats: &std::collections::BTreeSet<Seat>| seats.iter().map(|&s| seat_json(&p, s)).collect::<Vec<_>>();
    let json = json!({
        "mechanism": spec.to_string(),
        "student": student,
        "attained": names(&attained),
        "predicted": names(&predicted),
        "agree": attained == predicted,
        "witnesses": set.to_json(&p)["outcomes"],
    });
    let mut table = format!("{:<10} {:<10} {:<10}\n", "seat", "attained", "predicted");
    for seat in attained.union(&predicted) {
        table.push_str(&format!(
            "{:<10} {:<10} {:<10}\n",
            seat_text(&p, *seat),
            attained.contains(seat),
            predicted.contains(seat)
        ));
    }
    Ok(Report { json, table, ok: true })
}

fn safe_strategy(p: &Problem, i: StudentId, k: usize, brute: bool, budget: Budget) -> anyhow::Result<Report> {
    let witness = has_safe_strategy(p, i, k)?;
    let mut json = json!({
        "student": p.student_name(i),
        "k": k,
        "safe": witness.is_some(),
        "witness": witness.as_ref().map(|w| list_names(p, w)),
    });
    let mut table = match &witness {
        Some(w) => format!("safe strategy: {}\n", list_names(p, w).join(" ")),
        None => "no safe strategy\n".to_string(),
    };
    let mut ok = true;
    if brute {
        let mut agree = true;
        for kind in MechanismKind::INCONTESTABLE {
            let found = OutcomeTable::full(kind, p, i, Some(k), budget)?;
            let safe_rows = found.safe_rows();
            agree &= safe_rows.is_empty() == witness.is_none();
        }
        json["brute_force_agrees"] = json!(agree);
        table.push_str(&format!("brute force agrees: {agree}\n"));
        ok = agree;
    }
    Ok(Report { json, table, ok })
}

fn maxmin_strategy(p: &Problem, i: StudentId, spec: &MechanismSpec, budget: Budget) -> anyhow::Result<Report> {
    let truth = p.preference(i);
    let report = check_maxmin_optimal(spec, p, i, truth, budget)?;
    let json = json!({
        "mechanism": spec.to_string(),
        "student": p.student_name(i),
        "truthful": list_names(p, &report.truthful),
        "truthful_worst": seat_json(p, report.truthful_worst),
        "optimal": report.passed(),
        "better_worst": report.violations.iter()
            .map(|(s, w)| json!({"strategy": list_names(p, s), "worst": seat_json(p, *w)}))
            .collect::<Vec<_>>(),
    });
    let table = format!(
        "truthful {} worst {}: {}\n",
        list_names(p, &report.truthful).join(" "),
        seat_text(p, report.truthful_worst),
        if report.passed() { "maxmin optimal" } else { "beaten" }
    );
    Ok(Report {
        ok: report.passed(),
        json,
        table,
    })
}

fn dominant_strategy(p: &Problem, i: StudentId, kind: MechanismKind, k: usize, brute: bool, budget: Budget) -> anyhow::Result<Report> {
    let truth = p.preference(i);
    let verdict = has_dominant_strategy(kind, p, i, truth, k).map_err(|err| match err {
        Error::PreconditionViolated(_) => anyhow::Error::new(Error::InvalidMechanismSpec(kind.name()))
            .context("dominant-strategy analysis needs a strategy-proof mechanism"),
        other => other.into(),
    })?;
    let mut json = json!({
        "mechanism": kind.name(),
        "student": p.student_name(i),
        "k": k,
        "dominant": verdict.dominant,
        "canonical": verdict.canonical.as_ref().map(|c| list_names(p, c)),
    });
    let mut table = match &verdict.canonical {
        Some(c) => format!("dominant strategy: {}\n", list_names(p, c).join(" ")),
        None => "no dominant strategy\n".to_string(),
    };
    let mut ok = true;
    if brute {
        let found = dominant_strategies_brute(kind, p, i, truth, k, budget)?;
        let agree = match &verdict.canonical {
            Some(c) => found.contains(c),
            None => found.is_empty(),
        };
        json["brute_force"] = found.iter().map(|s| json!(list_names(p, s))).collect();
        json["brute_force_agrees"] = json!(agree);
        table.push_str(&format!("brute force agrees: {agree}\n"));
        ok = agree;
    }
    Ok(Report { json, table, ok })
}

fn consistency(corpus: &[Problem], kinds: &[MechanismKind]) -> anyhow::Result<Report> {
    let mut records = Vec::new();
    let mut table = String::new();
    let mut ok = true;
    for &kind in kinds {
        let findings: Vec<(bool, Vec<Value>)> = corpus
            .par_iter()
            .enumerate()
            .map(|(idx, p)| {
                let outcome = kind.run(p);
                let contestable = !incontestability_verdict(p, &outcome).expect("outcome is feasible").incontestable();
                let tt = top_top_violations(kind, p)
                    .into_iter()
                    .map(|v| {
                        json!({
                            "problem": idx,
                            "pair": [p.student_name(v.pair.0), p.school_name(v.pair.1)],
                            "student": v.student,
                            "full": v.full,
                            "reduced": v.reduced,
                        })
                    })
                    .collect();
                (contestable, tt)
            })
            .collect();
        let contestable: Vec<usize> = findings.iter().enumerate().filter(|(_, f)| f.0).map(|(n, _)| n).collect();
        let top_top: Vec<Value> = findings.into_iter().flat_map(|f| f.1).collect();
        ok &= contestable.is_empty() && top_top.is_empty();
        table.push_str(&format!(
            "{:<8} problems {:<6} contestable {:<6} top-top violations {}\n",
            kind.name(),
            corpus.len(),
            contestable.len(),
            top_top.len()
        ));
        records.push(json!({
            "mechanism": kind.name(),
            "problems": corpus.len(),
            "contestable": contestable,
            "top_top_violations": top_top,
        }));
    }
    Ok(Report {
        json: json!({ "passed": ok, "audits": records }),
        table,
        ok,
    })
}
