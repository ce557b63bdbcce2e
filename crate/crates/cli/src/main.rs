//! `monopath`: exact solver, colouring sweeps, ω-constructions and the
//! certificate verifier behind one command.
//!
//! Exit codes: 0 success, 1 violation, 2 invalid input, 3 unverifiable.

mod omega;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use monopath_core::colourings::{self, ColouringSpec};
use monopath_core::solver::{self, ExactSolver, SweepConfig, SweepError};
use monopath_core::verify::{self, Report, Status};
use monopath_core::{HKind, HTypeGraph, Mode, PathPartition, PrefixCertificate};
use serde_json::json;

use output::{Emitter, Failure};

#[derive(Parser)]
#[command(name = "monopath", version, about = "Monochromatic path partitions of edge-coloured complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum partition of a finite graph read from a file.
    Solve(SolveArgs),
    /// Solve every r-colouring of K_n and tabulate the optima.
    Sweep(SweepArgs),
    /// Check a partition against a graph, or a prefix certificate.
    Verify(VerifyArgs),
    /// Depth-bounded ω-constructions.
    Omega {
        #[command(subcommand)]
        command: omega::OmegaCommand,
    },
    /// Write the restriction of a named colouring to K_n in the text format.
    Gen(GenArgs),
    /// Named colourings.
    Colourings {
        #[command(subcommand)]
        command: ColouringsCommand,
    },
}

#[derive(Subcommand)]
enum ColouringsCommand {
    /// Print the registry.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Distinct,
    Any,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Distinct => Mode::Distinct,
            ModeArg::Any => Mode::Any,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "any")]
    mode: ModeArg,
    #[arg(long, default_value_t = solver::DEFAULT_CAP)]
    cap: usize,
    /// Greedy partition instead of the exact solver (any mode, no size cap).
    #[arg(long)]
    heuristic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, value_enum, default_value = "distinct")]
    mode: ModeArg,
    #[arg(long, env = "MONOPATH_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Solve one colouring per class under vertex permutation.
    #[arg(long)]
    canonical: bool,
    /// Checkpoint file; finished ranges are skipped when rerun.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value_t = solver::sweep::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = solver::sweep::DEFAULT_CHUNK)]
    chunk: u64,
    /// Exit 1 if any colouring needs more than this many paths.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value_t = solver::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph in the text format (with --partition).
    #[arg(long, requires = "partition")]
    graph: Option<PathBuf>,
    /// Partition JSON (with --graph).
    #[arg(long, requires = "graph")]
    partition: Option<PathBuf>,
    /// Prefix certificate JSON; the graph is rebuilt from its parameters.
    #[arg(long, conflicts_with_all = ["graph", "partition"])]
    certificate: Option<PathBuf>,
    /// Override the colouring recorded in the certificate.
    #[arg(long, requires = "certificate")]
    colouring: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    colouring: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Omega { command } => omega::run(command),
        Command::Gen(a) => gen(a),
        Command::Colourings { command: ColouringsCommand::List } => {
            print!("{}", colourings::registry_text());
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.downcast_ref::<Failure>().map_or(2, |f| f.code);
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

pub(crate) fn parse_colouring(s: &str) -> anyhow::Result<ColouringSpec> {
    s.parse::<ColouringSpec>().with_context(|| format!("colouring `{s}`"))
}

fn status_code(report: &Report) -> u8 {
    report.status().exit_code() as u8
}

fn solve(a: SolveArgs) -> anyhow::Result<u8> {
    let g = colourings::load(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let mode: Mode = a.mode.into();
    let emitter = Emitter::new(
        "solve",
        json!({ "input": a.input.display().to_string(), "mode": mode, "cap": a.cap, "heuristic": a.heuristic }),
    );
    let (body, witness) = if a.heuristic {
        let p = solver::heuristic_partition(&g);
        (json!({ "count": p.len(), "witness": p }), p)
    } else {
        if a.cap > solver::HARD_CAP {
            anyhow::bail!("cap {} exceeds the hard limit {}", a.cap, solver::HARD_CAP);
        }
        let res = match ExactSolver::with_cap(a.cap).min_partition(&g, mode) {
            Ok(res) => res,
            Err(e @ solver::SolveError::TooLarge { .. }) => anyhow::bail!("{e}; use --heuristic"),
            Err(e) => return Err(Failure::new(1, e.to_string()).into()),
        };
        let mut body = serde_json::to_value(&res)?;
        body["count"] = json!(res.witness.len());
        (body, res.witness)
    };
    let report = verify::verify_vertex_partition(&g, &witness);
    emitter.json(body, a.out.as_deref())?;
    if !report.is_ok() {
        return Err(Failure::new(1, format!("witness failed re-verification:\n{report}")).into());
    }
    Ok(0)
}

fn sweep(a: SweepArgs) -> anyhow::Result<u8> {
    let mode: Mode = a.mode.into();
    let cfg = SweepConfig {
        n: a.n,
        r: a.r,
        mode,
        jobs: a.jobs,
        canonical: a.canonical,
        budget: a.budget,
        chunk: a.chunk,
        bound: a.bound,
        cap: a.cap,
    };
    let summary = match solver::sweep_colourings(&cfg, a.state.as_deref()) {
        Ok(s) => s,
        Err(e @ SweepError::Solve(solver::SolveError::Infeasible)) => return Err(Failure::new(1, e.to_string()).into()),
        Err(e) => return Err(e.into()),
    };
    // jobs is left out so that output does not depend on the worker count
    let emitter = Emitter::new(
        "sweep",
        json!({ "n": a.n, "r": a.r, "mode": mode, "canonical": a.canonical, "bound": a.bound }),
    );
    let argmax = summary.argmax.map(|i| solver::colouring_digits(a.n, a.r, i));
    match a.format {
        Format::Csv => {
            let mut extra = vec![format!("colourings={} solved={}", summary.colourings, summary.solved)];
            if let (Some(i), Some(d)) = (summary.argmax, &argmax) {
                let digits: Vec<String> = d.iter().map(|c| c.to_string()).collect();
                extra.push(format!("argmax index={i} edges={}", digits.join(" ")));
            }
            emitter.csv(&extra, &solver::histogram_csv(&cfg, &summary), a.out.as_deref())?;
        }
        Format::Json => {
            let mut body = serde_json::to_value(&summary)?;
            body["argmax_colouring"] = json!(argmax);
            emitter.json(body, a.out.as_deref())?;
        }
    }
    if summary.exceeding > 0 {
        eprintln!("{} colourings exceed the bound {:?}", summary.exceeding, a.bound);
        return Ok(1);
    }
    Ok(0)
}

/// The graph a certificate speaks about, rebuilt from its parameters.
pub(crate) fn certificate_graph(
    cert: &PrefixCertificate,
    colouring: Option<&str>,
) -> anyhow::Result<Box<dyn monopath_core::ColouredGraph>> {
    let spec = parse_colouring(colouring.unwrap_or(&cert.params.colouring))?;
    let lazy = spec.build_lazy()?;
    Ok(match cert.params.htype {
        None => Box::new(lazy),
        Some(HKind::Disjoint) => Box::new(HTypeGraph::disjoint_from(&lazy)?),
        Some(HKind::Identified) => Box::new(HTypeGraph::from_complete(&lazy)?),
    })
}

fn verify_cmd(a: VerifyArgs) -> anyhow::Result<u8> {
    let report = if let Some(path) = &a.certificate {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cert: PrefixCertificate = serde_json::from_str(&text).context("parsing certificate")?;
        let g = certificate_graph(&cert, a.colouring.as_deref())?;
        verify::verify_certificate(g.as_ref(), &cert)
    } else {
        let (Some(gp), Some(pp)) = (&a.graph, &a.partition) else {
            anyhow::bail!("give --graph with --partition, or --certificate");
        };
        let g = colourings::load(gp).with_context(|| format!("reading {}", gp.display()))?;
        let text = std::fs::read_to_string(pp).with_context(|| format!("reading {}", pp.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text).context("parsing partition")?;
        // accept a bare partition or a `solve` result with a witness
        let part: PathPartition = match value.get("witness") {
            Some(w) => serde_json::from_value(w.clone()),
            None => serde_json::from_value(value),
        }
        .context("parsing partition")?;
        verify::verify_vertex_partition(&g, &part)
    };
    let status = report.status();
    let body = json!({
        "status": match status { Status::Ok => "ok", Status::Violation => "violation", Status::Unverifiable => "unverifiable" },
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "unverifiable": report.unverifiable,
    });
    Emitter::new("verify", json!({})).json(body, a.out.as_deref())?;
    Ok(status_code(&report))
}

fn gen(a: GenArgs) -> anyhow::Result<u8> {
    let spec = parse_colouring(&a.colouring)?;
    let g = spec.build_finite(a.n)?;
    let emitter = Emitter::new("gen", json!({ "colouring": spec.to_string(), "n": a.n }));
    emitter.text(&colourings::format_graph(&g), a.out.as_deref())?;
    Ok(0)
}
