//! Flag parsing and output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use indyn_core::par::Exec;

use crate::definition::Definition;
use crate::query::{self, Answer};
use crate::report::{run_suite, Report, RunStatus};
use crate::scenarios::registry;
use crate::{CliError, EXIT_CAP, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "indyn",
    version,
    about = "Scenario harness for induced dynamics on probability measures"
)]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Scenario to run (repeatable); all scenarios when omitted.
    #[arg(long = "scenario", value_name = "NAME")]
    pub scenarios: Vec<String>,
    /// Parameter override `key=value` (repeatable).
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shorthand for `--param horizon=N`.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Shorthand for `--param grid=Q`.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// List scenarios and the claims they check.
    #[arg(long)]
    pub list: bool,
    /// Write the entropy curve as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Independent scenarios to run concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Disable data parallelism inside scenarios and queries.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub query: Option<Query>,
}

#[derive(Debug, clap::Args)]
pub struct DefArg {
    /// System definition file (JSON).
    #[arg(long = "def", value_name = "FILE")]
    pub def: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Query {
    /// Exact Prohorov distance between two named measures.
    Prohorov {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// Orbit of a point.
    Orbit {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Search for a delta-chain between two points.
    Chain {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Decide shadowing on the base system or on a measure grid.
    Shadowing {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        /// Run on the induced system over M_q.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sensitivity time set of a point.
    Sensitivity {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
    },
    /// Separated-set growth estimate.
    Entropy {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.125, 0.0625])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Finite-horizon statistics of an orbit pair.
    Pairstats {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 0.5])]
        thresholds: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
}

fn overrides(cli: &Cli) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for kv in &cli.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects key=value, got `{kv}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    if let Some(h) = cli.horizon {
        map.insert("horizon".into(), h.to_string());
    }
    if let Some(q) = cli.grid {
        map.insert("grid".into(), q.to_string());
    }
    Ok(map)
}

fn list(out: &mut dyn Write, format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<_> = registry()
                .iter()
                .map(|s| {
                    let params: BTreeMap<_, _> = s.params.iter().map(|p| (p.name, p.default)).collect();
                    serde_json::json!({"name": s.name, "claim": s.citation, "params": params})
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializable"))
        }
        Format::Text => {
            for s in registry() {
                writeln!(out, "{:<24} {}", s.name, s.citation)?;
            }
            Ok(())
        }
    }
}

fn write_report(out: &mut dyn Write, report: &Report, format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(report).expect("serializable")),
        Format::Text => {
            writeln!(out, "{} {} seed {}", report.tool, report.version, report.seed)?;
            for s in &report.scenarios {
                let tag = match s.status {
                    RunStatus::Pass => "PASS",
                    RunStatus::Fail => "FAIL",
                    RunStatus::ResourceCap => "CAP",
                    RunStatus::Error => "ERROR",
                };
                writeln!(out, "{tag} {} ({} ms)", s.name, report.timings_ms[&s.name])?;
                for c in &s.checks {
                    writeln!(
                        out,
                        "  [{}] {}: {}",
                        if c.passed { "ok" } else { "FAILED" },
                        c.name,
                        c.detail
                    )?;
                }
                if let Some(e) = &s.error {
                    writeln!(out, "  {e}")?;
                }
            }
            Ok(())
        }
    }
}

fn write_csv(path: &PathBuf, report: &Report) -> Result<bool, CliError> {
    let Some(curve) = report
        .scenarios
        .iter()
        .filter_map(|s| s.outcome.as_ref().and_then(|o| o.curve.as_ref()))
        .next()
    else {
        return Ok(false);
    };
    let io = |e: csv::Error| CliError::Usage(format!("--csv {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["eps", "n", "a_n", "s_n", "method", "rate"])
        .map_err(io)?;
    for r in &curve.rows {
        let method = serde_json::to_value(r.method).expect("serializable");
        w.write_record([
            r.eps.to_string(),
            r.n.to_string(),
            r.a_n.to_string(),
            r.s_n.to_string(),
            method.as_str().unwrap_or_default().to_string(),
            r.rate.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Usage(format!("--csv {}: {e}", path.display())))?;
    Ok(true)
}

fn run_query(q: &Query, exec: Exec) -> Result<(&'static str, Answer), CliError> {
    let load = |d: &DefArg| Definition::load(&d.def);
    Ok(match q {
        Query::Prohorov { def, mu, nu } => ("prohorov", query::prohorov(&load(def)?, mu, nu)?),
        Query::Orbit { def, from, steps } => ("orbit", query::orbit(&load(def)?, from, *steps)?),
        Query::Chain {
            def,
            from,
            to,
            delta,
            max_len,
        } => (
            "chain",
            query::chain(&load(def)?, from, to, query::scalar("delta", delta)?, *max_len)?,
        ),
        Query::Shadowing { def, delta, eps, grid } => (
            "shadowing",
            query::shadowing(
                &load(def)?,
                query::scalar("delta", delta)?,
                query::scalar("eps", eps)?,
                *grid,
                exec,
            )?,
        ),
        Query::Sensitivity {
            def,
            x,
            eps,
            delta,
            horizon,
        } => (
            "sensitivity",
            query::sensitivity(
                &load(def)?,
                x,
                query::scalar("eps", eps)?,
                query::scalar("delta", delta)?,
                *horizon,
            )?,
        ),
        Query::Entropy { def, eps, n } => ("entropy", query::entropy(&load(def)?, eps, *n, exec)?),
        Query::Pairstats {
            def,
            x,
            y,
            horizon,
            thresholds,
            delta,
        } => (
            "pairstats",
            query::pairstats(&load(def)?, x, y, *horizon, thresholds, *delta)?,
        ),
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    if cli.list {
        list(out, cli.format).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(EXIT_PASS);
    }
    if let Some(q) = &cli.query {
        let (name, a) = run_query(q, exec)?;
        let written = match cli.format {
            Format::Json => {
                let doc = serde_json::json!({
                    "tool": env!("CARGO_PKG_NAME"),
                    "version": env!("CARGO_PKG_VERSION"),
                    "query": name,
                    "result": a.value,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
            }
            Format::Text => a.lines.iter().try_for_each(|l| writeln!(out, "{l}")),
        };
        written.map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(if a.capped { EXIT_CAP } else { EXIT_PASS });
    }
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let report = run_suite(&cli.scenarios, &overrides(cli)?, cli.seed, cli.jobs, exec)?;
    write_report(out, &report, cli.format).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &cli.csv {
        if !write_csv(path, &report)? {
            return Err(CliError::Usage("--csv needs the entropy scenario in the run".into()));
        }
    }
    Ok(report.exit_code())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e @ CliError::Usage(_)) => {
            let _ = writeln!(err, "{e}");
            EXIT_USAGE
        }
        Err(CliError::Core(indyn_core::error::Error::ResourceCap(m))) => {
            let _ = writeln!(err, "resource cap hit: {m}");
            EXIT_CAP
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}
