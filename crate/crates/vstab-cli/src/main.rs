use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use vstab::degeneracy::DegeneracySubset;
use vstab::error::Error;
use vstab::graph::{set_to_vec, Graph};
use vstab::io::{self, InferComplements, Side};
use vstab::orbit::theta_complete_check;
use vstab::ptbd::{pt_report, pt_report_for_stability, ForestFunction};
use vstab::semistable::{semistable_fast, semistable_oracle_with_budget, DEFAULT_BUDGET};
use vstab::suite::{run_suite, SuiteSize};
use vstab::{models, UpperSet, VStability};

const EXIT_VERDICT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "vstab", version, about = "V-stability conditions and semistable sets on multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Turn negative verdicts into a nonzero exit code.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on candidate divisors inspected by the oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Graph,
    Curve,
}

#[derive(Clone, Copy, ValueEnum)]
enum InferArg {
    Degenerate,
    Nondegenerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizeArg {
    Small,
    Medium,
}

#[derive(clap::Args)]
struct StabilityInput {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    stability: PathBuf,
    /// Side the stability file is written on; curve files give `s` and `χ`.
    #[arg(long, value_enum, default_value_t = SideArg::Graph)]
    side: SideArg,
    /// Fill in missing complements through the sum axiom.
    #[arg(long, value_enum)]
    infer_complements: Option<InferArg>,
    /// Required degree; a file of another degree is rejected.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a stability file.
    Validate(StabilityInput),
    /// Compute the semistable set.
    Semistable {
        #[command(flatten)]
        input: StabilityInput,
        #[arg(long, conflicts_with_all = ["oracle", "both"])]
        fast: bool,
        #[arg(long, conflicts_with = "both")]
        oracle: bool,
        /// Run both and compare.
        #[arg(long)]
        both: bool,
    },
    /// D-complexity of every admissible spanning subgraph.
    Complexity {
        #[arg(long)]
        graph: PathBuf,
        /// Degeneracy subset file; the empty subset when absent.
        #[arg(long)]
        degeneracy: Option<PathBuf>,
    },
    /// Classify stabilities on a cycle up to translation.
    ClassifyCycle {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// PT-assignment report for a semistable set or an upper set file.
    PtCheck {
        #[command(flatten)]
        input: StabilityInput,
        /// Check this upper set (JSON array of elements) instead of `P_n`.
        #[arg(long)]
        upper_set: Option<PathBuf>,
    },
    /// Concordance criterion on the semistable set.
    ThetaCheck {
        #[command(flatten)]
        input: StabilityInput,
        #[arg(long)]
        upper_set: Option<PathBuf>,
    },
    /// Run the verification battery.
    Suite {
        #[arg(long, value_enum, default_value_t = SizeArg::Small)]
        size: SizeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(io::parse_graph(&read(path)?)?)
}

fn load_stability(input: &StabilityInput) -> Result<(Graph, VStability), Failure> {
    let g = load_graph(&input.graph)?;
    let side = match input.side {
        SideArg::Graph => Side::Graph,
        SideArg::Curve => Side::Curve,
    };
    let infer = input.infer_complements.map(|m| match m {
        InferArg::Degenerate => InferComplements::Degenerate,
        InferArg::Nondegenerate => InferComplements::Nondegenerate,
    });
    let n = io::parse_stability(&g, &read(&input.stability)?, side, infer)?;
    if let Some(d) = input.degree {
        if d != n.degree() {
            return Err(Error::Mismatch(format!(
                "stability has degree {}, expected {d}",
                n.degree()
            ))
            .into());
        }
    }
    Ok((g, n))
}

fn sets(ws: impl IntoIterator<Item = u64>) -> Value {
    Value::from(ws.into_iter().map(set_to_vec).collect::<Vec<_>>())
}

fn cmd_validate(input: &StabilityInput) -> Outcome {
    match load_stability(input) {
        Ok((_, n)) => Ok((
            json!({
                "valid": true,
                "general": n.is_general(),
                "degree": n.degree(),
                "degenerate_subsets": sets(n.degeneracy().sets().iter().copied()),
            }),
            true,
        )),
        Err(Failure::Lib(e @ (Error::Stability(_) | Error::Degeneracy(_)))) => {
            let witness = match &e {
                Error::Stability(v) => sets(v.witness()),
                _ => Value::Array(Vec::new()),
            };
            Ok((
                json!({"valid": false, "error": e.to_string(), "witness": witness}),
                false,
            ))
        }
        Err(e) => Err(e),
    }
}

fn per_subgraph(p: &UpperSet, deg: &DegeneracySubset) -> Result<(Value, bool), Failure> {
    let mut rows = Vec::new();
    let mut all = true;
    for es in deg.admissible_subgraphs() {
        let count = p.fiber(es).len() as u64;
        let complexity = deg.complexity(es)?;
        all &= count == complexity;
        rows.push(json!({
            "edge_mask": format!("{es:#x}"),
            "count": count,
            "complexity": complexity,
            "match": count == complexity,
        }));
    }
    Ok((Value::Array(rows), all))
}

fn cmd_semistable(input: &StabilityInput, oracle: bool, both: bool, budget: u64) -> Outcome {
    let (_, n) = load_stability(input)?;
    let (p, mode, equal) = if both {
        let fast = semistable_fast(&n)?;
        let slow = semistable_oracle_with_budget(&n, budget)?;
        let equal = fast == slow;
        (fast, "both", Some(equal))
    } else if oracle {
        (semistable_oracle_with_budget(&n, budget)?, "oracle", None)
    } else {
        (semistable_fast(&n)?, "fast", None)
    };
    let (rows, counts_ok) = per_subgraph(&p, n.degeneracy())?;
    let mut out = Map::new();
    out.insert("mode".into(), json!(mode));
    out.insert("degree".into(), json!(n.degree()));
    out.insert("size".into(), json!(p.len()));
    out.insert("top_elements".into(), json!(p.maximal_elements().len()));
    out.insert("counts_match".into(), json!(counts_ok));
    if let Some(eq) = equal {
        out.insert("oracle==fast".into(), json!(eq));
    }
    out.insert("per_subgraph".into(), rows);
    out.insert("elements".into(), io::upper_set_to_json(&p));
    Ok((Value::Object(out), counts_ok && equal.unwrap_or(true)))
}

fn cmd_complexity(graph: &Path, degeneracy: Option<&Path>) -> Outcome {
    let g = load_graph(graph)?;
    let deg = match degeneracy {
        Some(path) => io::parse_degeneracy(&g, &read(path)?)?,
        None => DegeneracySubset::empty(&g)?,
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for es in deg.admissible_subgraphs() {
        let direct = deg.complexity(es)?;
        let recursive = deg.complexity_recursive(es)?;
        ok &= direct == recursive;
        rows.push(json!({
            "edge_mask": format!("{es:#x}"),
            "complexity": direct,
            "recursive": recursive,
        }));
    }
    Ok((
        json!({
            "degeneracy": sets(deg.sets().iter().copied()),
            "whole_graph": deg.complexity(g.all_edges())?,
            "subgraphs": rows,
        }),
        ok,
    ))
}

fn cmd_classify_cycle(n: usize, degree: i64) -> Outcome {
    let c = models::classify_cycle(n, degree)?;
    Ok((serde_json::to_value(&c).expect("classification serializes"), true))
}

fn upper_set_or_semistable(
    input: &StabilityInput,
    upper: Option<&Path>,
) -> Result<(VStability, Option<UpperSet>), Failure> {
    let (g, n) = load_stability(input)?;
    let p = match upper {
        Some(path) => Some(io::parse_upper_set(&g, n.degree(), &read(path)?)?),
        None => None,
    };
    Ok((n, p))
}

fn cmd_pt_check(input: &StabilityInput, upper: Option<&Path>) -> Outcome {
    let (n, p) = upper_set_or_semistable(input, upper)?;
    let report = match &p {
        Some(p) => pt_report(p, n.degeneracy())?,
        None => pt_report_for_stability(&n)?,
    };
    let round_trip = match &p {
        Some(_) => None,
        None => Some(ForestFunction::of_stability(&n)?.to_stability()? == n),
    };
    let mut out = Map::new();
    out.insert("pt".into(), json!(report.is_pt()));
    out.insert("weak_pt".into(), json!(report.is_weak_pt()));
    out.insert("numerical".into(), json!(report.is_numerical()));
    out.insert("weak_numerical".into(), json!(report.is_weak_numerical()));
    if let Some(rt) = round_trip {
        out.insert("forest_function_round_trip".into(), json!(rt));
    }
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|r| {
            json!({
                "edge_mask": format!("{:#x}", r.edge_mask),
                "count": r.count,
                "complexity": r.complexity,
                "surjective": r.surjective,
                "fiber_linked": r.fiber_linked,
                "delta": r.delta,
            })
        })
        .collect();
    out.insert("records".into(), Value::Array(records));
    let ok = report.is_pt() && round_trip.unwrap_or(true);
    Ok((Value::Object(out), ok))
}

fn cmd_theta_check(input: &StabilityInput, upper: Option<&Path>) -> Outcome {
    let (n, p) = upper_set_or_semistable(input, upper)?;
    let p = match p {
        Some(p) => p,
        None => semistable_fast(&n)?,
    };
    match theta_complete_check(&p) {
        Ok(()) => Ok((json!({"theta_complete": true, "elements": p.len()}), true)),
        Err(v) => Ok((
            json!({
                "theta_complete": false,
                "element": v.element.to_string(),
                "partition_orientation": v.partition_orientation.heads(p.graph()),
                "other": v.other.heads(p.graph()),
                "concordant": v.concordant,
            }),
            false,
        )),
    }
}

fn cmd_suite(size: SizeArg, seed: u64) -> Outcome {
    let size = match size {
        SizeArg::Small => SuiteSize::Small,
        SizeArg::Medium => SuiteSize::Medium,
    };
    let report = run_suite(seed, size);
    let ok = report.all_passed;
    Ok((serde_json::to_value(&report).expect("report serializes"), ok))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(_) if !has_object(v) => Some(serde_json::to_string(v).unwrap_or_default()),
        _ => None,
    }
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

/// Aligned text view of a JSON report.
fn render_table(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if let Some(s) = scalar(x) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                }
            }
            for (k, x) in map {
                if scalar(x).is_none() {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_table(x, indent + 2, out);
                }
            }
        }
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let cols: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    cols.iter()
                        .map(|c| r.get(c).map_or("-".into(), |x| {
                            scalar(x).unwrap_or_else(|| serde_json::to_string(x).unwrap_or_default())
                        }))
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(c.len()))
                .collect();
            let line = |items: &[String]| {
                let parts: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect();
                format!("{pad}{}\n", parts.join("  ").trim_end())
            };
            out.push_str(&line(&cols));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn exit_code(e: &Failure) -> u8 {
    match e {
        Failure::Io(_) | Failure::Lib(Error::Parse(_)) => EXIT_IO,
        Failure::Lib(Error::Budget(_) | Error::TooLarge { .. }) => EXIT_BUDGET,
        Failure::Lib(_) => EXIT_VERDICT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .expect("thread pool is configured once");
    }
    let outcome = match &cli.command {
        Command::Validate(input) => cmd_validate(input),
        Command::Semistable {
            input,
            oracle,
            both,
            ..
        } => cmd_semistable(input, *oracle, *both, cli.budget),
        Command::Complexity { graph, degeneracy } => cmd_complexity(graph, degeneracy.as_deref()),
        Command::ClassifyCycle { n, degree } => cmd_classify_cycle(*n, *degree),
        Command::PtCheck { input, upper_set } => cmd_pt_check(input, upper_set.as_deref()),
        Command::ThetaCheck { input, upper_set } => cmd_theta_check(input, upper_set.as_deref()),
        Command::Suite { size, seed } => cmd_suite(*size, *seed),
    };
    match outcome {
        Ok((value, ok)) => {
            match cli.format {
                Format::Json => {
                    emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("json")))
                }
                Format::Table => {
                    let mut s = String::new();
                    render_table(&value, 0, &mut s);
                    emit(&s);
                }
            }
            let verdict_fails = match &cli.command {
                Command::Validate(_) | Command::ThetaCheck { .. } | Command::Suite { .. } => !ok,
                _ => cli.strict && !ok,
            };
            if verdict_fails {
                ExitCode::from(EXIT_VERDICT)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let msg = match &e {
                Failure::Io(m) => m.clone(),
                Failure::Lib(err) => err.to_string(),
            };
            let code = exit_code(&e);
            match cli.format {
                Format::Json => emit(&format!("{}\n", json!({"error": msg, "exit_code": code}))),
                Format::Table => emit(&format!("error: {msg}\n")),
            }
            ExitCode::from(code)
        }
    }
}
