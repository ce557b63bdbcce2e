//! `omega run`: one construction, its output, and a self-check.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use monopath_core::construct::{self, ConstructError, DEFAULT_WITNESS};
use monopath_core::oracle::{OracleError, OracleKind};
use monopath_core::verify::{verify_certificate, PrefixCertificate};
use monopath_core::{ColouredGraph, HTypeGraph, LargeSetOracle, LazyColouredGraph, SetDescriptor};
use serde_json::{json, Value};

use crate::output::{Emitter, Failure};
use crate::{certificate_graph, parse_colouring};

#[derive(Subcommand)]
pub enum OmegaCommand {
    /// Run a construction for a bounded number of steps.
    Run(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Uftrick,
    Rado,
    Zigzag,
    Config,
    Split,
    Cover,
}

impl Construction {
    fn name(self) -> &'static str {
        match self {
            Construction::Uftrick => "uftrick",
            Construction::Rado => "rado",
            Construction::Zigzag => "zigzag",
            Construction::Config => "config",
            Construction::Split => "split",
            Construction::Cover => "cover",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HTypeArg {
    Disjoint,
    Identified,
}

#[derive(Args)]
pub struct RunArgs {
    /// Construction (or use --construction).
    #[arg(value_enum)]
    which: Option<Construction>,
    #[arg(long, value_enum)]
    construction: Option<Construction>,
    #[arg(long)]
    colouring: String,
    /// `congruence[:r1,r2,...]` or `density[:H]`.
    #[arg(long, default_value = "congruence")]
    oracle: String,
    /// Steps, labelling depth, or configuration length, per construction.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WITNESS)]
    witness: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream colour for `cover`.
    #[arg(long, default_value_t = 0)]
    colour: usize,
    /// First vertex for `cover`.
    #[arg(long)]
    start: Option<usize>,
    /// Target set (`cover`, `uftrick`) or main-class subset (`split`).
    #[arg(long)]
    target: Option<String>,
    /// Colour set: used by `config`, avoided by `split`.
    #[arg(long, value_delimiter = ',')]
    colours: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "disjoint")]
    htype: HTypeArg,
    /// Misses tolerated by `config` inside the horizon.
    #[arg(long, default_value_t = 2)]
    slack: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn construct_failure(e: ConstructError) -> anyhow::Error {
    let code = match &e {
        ConstructError::Oracle(OracleError::Undecidable { .. }) | ConstructError::Descriptor(_) => 2,
        _ => 1,
    };
    Failure::new(code, e.to_string()).into()
}

fn htype_graph(lazy: &LazyColouredGraph, kind: HTypeArg) -> anyhow::Result<HTypeGraph> {
    Ok(match kind {
        HTypeArg::Disjoint => HTypeGraph::disjoint_from(lazy)?,
        HTypeArg::Identified => HTypeGraph::from_complete(lazy)?,
    })
}

pub fn run(cmd: OmegaCommand) -> anyhow::Result<u8> {
    let OmegaCommand::Run(a) = cmd;
    let which = match (a.which, a.construction) {
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) if x == y => x,
        _ => anyhow::bail!("give exactly one construction"),
    };
    let spec = parse_colouring(&a.colouring)?;
    let lazy = spec.build_lazy()?;
    let kind: OracleKind = a.oracle.parse()?;
    let mut oracle = LargeSetOracle::new(kind);
    let target: Option<SetDescriptor> = a.target.as_deref().map(str::parse).transpose()?;

    let emitter = Emitter::new(
        "omega run",
        json!({
            "construction": which.name(),
            "colouring": spec.to_string(),
            "oracle": oracle.id(),
            "steps": a.steps,
            "horizon": a.horizon,
            "witness": a.witness,
            "seed": a.seed,
        }),
    );
    let out = a.out.as_deref();

    let mut cert = match which {
        Construction::Rado => {
            let params = construct::RadoParams { steps: a.steps, horizon: a.horizon, seed: a.seed };
            construct::rado_cover(&lazy, &mut oracle, &params).map_err(construct_failure)?.certificate
        }
        Construction::Cover => {
            let params = construct::CoverParams {
                start: a.start,
                horizon: a.horizon,
                seed: a.seed,
                ..construct::CoverParams::new(a.colour, a.steps)
            };
            let target = target.unwrap_or_else(SetDescriptor::all);
            let mut cert = construct::cover_from(&lazy, &target, &params).map_err(construct_failure)?;
            cert.params.oracle = None;
            cert
        }
        Construction::Zigzag => construct::zigzag_certificate(&htype_graph(&lazy, a.htype)?, a.steps, a.horizon),
        Construction::Uftrick => {
            let params = construct::UftrickParams {
                depth: a.steps,
                horizon: a.horizon,
                witness: a.witness,
                seed: a.seed,
                ..Default::default()
            };
            let target = target.unwrap_or_else(SetDescriptor::all);
            let res = construct::uftrick_partition(&lazy, &target, &mut oracle, &params).map_err(construct_failure)?;
            let code = if res.unverified.is_empty() { 0 } else { 3 };
            let mut body = serde_json::to_value(&res)?;
            body["coherence_violations"] = json!(oracle.check_coherence());
            emitter.json(body, out)?;
            return Ok(code);
        }
        Construction::Config => {
            let h = htype_graph(&lazy, a.htype)?;
            let colours: BTreeSet<usize> = match &a.colours {
                Some(c) => c.iter().copied().collect(),
                None => (0..lazy.colours()).collect(),
            };
            let horizon = a.horizon.unwrap_or(10 * a.steps.max(1));
            let params = construct::ConfigParams {
                slack: a.slack,
                ..construct::ConfigParams::new(colours.iter().copied(), a.steps, horizon)
            };
            let found = construct::find_configuration(&h, &params);
            let checked = found.as_ref().map(|c| construct::verify_configuration(&h, &colours, c));
            emitter.json(json!({ "found": found.is_some(), "colours": colours, "configuration": found }), out)?;
            return match checked {
                Some(Err(e)) => Err(Failure::new(1, format!("configuration failed re-check: {e}")).into()),
                _ => Ok(0),
            };
        }
        Construction::Split => {
            let h = htype_graph(&lazy, a.htype)?;
            let params = construct::SplitParams {
                horizon: a.horizon,
                witness: a.witness,
                seed: a.seed,
                ..construct::SplitParams::new(a.colours.clone().unwrap_or_default(), a.steps)
            };
            let x = target.unwrap_or_else(SetDescriptor::all);
            let res = construct::ultrafilter_split(&h, &x, &mut oracle, &params).map_err(construct_failure)?;
            let code = if res.unverified.is_empty() { 0 } else { 3 };
            emitter.json(serde_json::to_value(&res)?, out)?;
            return Ok(code);
        }
    };
    cert.params.colouring = spec.to_string();
    emit_certificate(&emitter, &cert, out)
}

fn emit_certificate(emitter: &Emitter, cert: &PrefixCertificate, out: Option<&std::path::Path>) -> anyhow::Result<u8> {
    let body: Value = serde_json::to_value(cert)?;
    emitter.json(body, out)?;
    // re-verify against a graph rebuilt from the certificate alone
    let g = certificate_graph(cert, None)?;
    let report = verify_certificate(g.as_ref(), cert);
    if !report.is_ok() {
        eprint!("{report}");
    }
    Ok(report.status().exit_code() as u8)
}
