use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use shift_bribery::election::{scores, Rule};
use shift_bribery::hardness::{
    reduce_clique_gap, reduce_dks_aon, reduce_dks_unit, reduce_setcover, reduce_vc3, Planted, Reduction,
};
use shift_bribery::io::{format_action, parse_action, parse_graph, parse_instance, parse_setcover, serialize_instance};
use shift_bribery::oracle::brute_force_opt;
use shift_bribery::report::{bench, solve_report, Algorithm, BenchConfig};
use shift_bribery::scalar::parse_decimal_or_rational;
use shift_bribery::{cost, Error, Rational};

#[derive(Parser)]
#[command(name = "shiftbribe", version, about = "Solvers and instance generators for shift bribery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm on an instance file and print a JSON report.
    Solve {
        instance: PathBuf,
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        /// Accuracy parameter, as a decimal or p/q.
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        eps: Rational,
        /// Also run the brute-force solver and report the ratio.
        #[arg(long)]
        oracle: bool,
        /// Write the computed action here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Compute an optimal action by exhaustive search.
    Oracle { instance: PathBuf },
    /// Build a reduction instance from a graph or set-cover file.
    Generate {
        #[arg(long, value_enum)]
        reduction: ReductionKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Rational>,
        /// Copeland tie score.
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        alpha: Rational,
        /// Planted vertices or sets, comma-separated.
        #[arg(long, value_delimiter = ',')]
        plant: Option<Vec<usize>>,
        /// Write the generated instance here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the witness action here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check an action against an instance; exits with 1 if it does not win.
    Verify { instance: PathBuf, action: PathBuf },
    /// Compare algorithms with the brute-force solver on random instances
    /// and write CSV rows.
    Bench {
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
        algos: Option<Vec<Algorithm>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionKind {
    DksAon,
    DksUnit,
    CliqueGap,
    Setcover,
    SetcoverUnit,
    Vc3,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    parse_decimal_or_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn require(value: Option<usize>, flag: &str) -> anyhow::Result<usize> {
    value.with_context(|| format!("this reduction needs --{flag}"))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { instance, algo, eps, oracle, witness } => {
            let file = parse_instance(&read(&instance)?)?;
            if file.rule != Rule::Positional {
                bail!("solvers need a positional scoring rule, the instance uses {}", file.rule);
            }
            let (report, action) = solve_report(&file.instance, algo, &eps, oracle)?;
            println!("{}", serde_json::to_string(&report)?);
            eprintln!("{:<20} cost {:>8}  success {}", report.algorithm, report.cost, report.success);
            if let (Some(path), Some(action)) = (witness, action) {
                write(&path, &format!("{}\n", format_action(&action)))?;
            }
        }
        Command::Oracle { instance } => {
            let file = parse_instance(&read(&instance)?)?;
            let result = brute_force_opt(&file.instance, &file.rule)?;
            let record = json!({
                "opt_cost": result.opt_cost.to_string(),
                "witness": result.witness.as_ref().map(format_action),
                "explored": result.explored,
            });
            println!("{record}");
        }
        Command::Generate { reduction, input, k, t, delta, alpha, plant, out, witness } => {
            let text = read(&input)?;
            let plant = plant.as_deref();
            let (name, generated): (&str, Reduction) = match reduction {
                ReductionKind::DksAon => {
                    ("dks-aon", reduce_dks_aon(&parse_graph(&text)?, require(k, "k")?, require(t, "t")?, plant, &alpha)?)
                }
                ReductionKind::DksUnit => {
                    ("dks-unit", reduce_dks_unit(&parse_graph(&text)?, require(k, "k")?, require(t, "t")?, plant, &alpha)?)
                }
                ReductionKind::CliqueGap => {
                    let delta = delta.context("this reduction needs --delta")?;
                    ("clique-gap", reduce_clique_gap(&parse_graph(&text)?, require(k, "k")?, &delta, plant, &alpha)?)
                }
                ReductionKind::Setcover => ("setcover", reduce_setcover(&parse_setcover(&text)?, false, plant, &alpha)?),
                ReductionKind::SetcoverUnit => {
                    ("setcover-unit", reduce_setcover(&parse_setcover(&text)?, true, plant, &alpha)?)
                }
                ReductionKind::Vc3 => ("vc3", reduce_vc3(&parse_graph(&text)?, require(k, "k")?, plant)?),
            };
            let instance = &generated.instance;
            let table = scores(instance.election(), &generated.rule);
            let named: serde_json::Map<String, serde_json::Value> = generated
                .labels
                .iter()
                .map(|(label, c)| (label.clone(), json!(table.get(*c).to_string())))
                .collect();
            let witness_record = match &generated.witness {
                Some(w) => {
                    let planted = match &w.planted {
                        Planted::Vertices(v) | Planted::Sets(v) => v.clone(),
                    };
                    json!({
                        "planted": planted,
                        "cost": cost(instance, &w.action)?.to_string(),
                        "cost_bound": w.cost_bound.to_string(),
                        "success": instance.is_successful(&w.action, &generated.rule)?,
                    })
                }
                None => serde_json::Value::Null,
            };
            let record = json!({
                "reduction": name,
                "rule": generated.rule.to_string(),
                "candidates": instance.num_candidates(),
                "voters": instance.num_voters(),
                "scores": named,
                "witness": witness_record,
            });
            println!("{record}");
            if let Some(path) = out {
                write(&path, &serialize_instance(instance, &generated.rule))?;
            }
            if let (Some(path), Some(w)) = (witness, &generated.witness) {
                write(&path, &format!("{}\n", format_action(&w.action)))?;
            }
        }
        Command::Verify { instance, action } => {
            let file = parse_instance(&read(&instance)?)?;
            let action = parse_action(&read(&action)?)?;
            let price = cost(&file.instance, &action)?;
            let success = file.instance.is_successful(&action, &file.rule)?;
            println!("{}", json!({ "success": success, "cost": price.to_string() }));
            if !success {
                eprintln!("the preferred candidate does not win under this action");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench { seeds, m, n, eps, algos } => {
            if m == 0 || n == 0 {
                bail!("--m and --n must be positive");
            }
            let config = BenchConfig {
                seeds: 0..seeds,
                candidates: m,
                voters: n,
                eps,
                algorithms: algos.unwrap_or_else(|| Algorithm::ALL.to_vec()),
            };
            let rows = bench(&config)?;
            let mut out = csv::Writer::from_writer(std::io::stdout().lock());
            for row in &rows {
                out.serialize(row)?;
            }
            out.flush()?;
            let violations = rows.iter().filter(|r| !r.success || !r.within_bound).count();
            eprintln!("{} runs, {} outside their guarantee", rows.len(), violations);
            if violations > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
