use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hadwiger_core::bounds::{
    full_upper, lemma21_bound, lower_guarantee, main_tool_bound, main_upper, sandwich_check, surface_bound, BoundValue,
};
use hadwiger_core::constructions::{with_apex, ConstructionCertificate, ConstructionError};
use hadwiger_core::graph::{complete_graph, cycle_graph, grid_graph, petersen_graph, SimpleGraph};
use hadwiger_core::minors::{hadwiger_oracle, verify_model, OracleConfig, OracleError};

#[derive(Parser)]
#[command(name = "hadwiger", version, about = "Clique-minor certificates for almost-embeddable graphs")]
struct Cli {
    /// Largest graph the exact oracles accept.
    #[arg(long, global = true, env = "HADWIGER_ORACLE_CAP", default_value_t = 12)]
    oracle_cap: usize,
    /// Search-node budget for the Hadwiger oracle.
    #[arg(long, global = true, env = "HADWIGER_ORACLE_BUDGET", default_value_t = 50_000_000)]
    oracle_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate for 𝒢(g,p,k,a) and check it.
    Construct(ConstructArgs),
    /// Re-check a certificate file.
    Verify {
        cert: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact Hadwiger number of a graph file.
    Eta {
        graph: PathBuf,
        /// Write the witness model here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Print every bound for the given parameters.
    Bounds(BoundsArgs),
    /// Write a certificate's flattened graph, or a named graph, as JSON or DOT.
    Export(ExportArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    a: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// `dot` writes the flattened graph instead of the certificate.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    a: usize,
    /// Treewidth for the product minimum-degree row.
    #[arg(long)]
    tw: Option<usize>,
    /// Number of cuffs for the main-tool row (defaults to p).
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportArgs {
    /// Certificate to export.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    cert: Option<PathBuf>,
    /// Named graph: petersen, complete:M, cycle:M, grid:N.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    Verification,
    Usage(anyhow::Error),
    Catalog(anyhow::Error),
    Budget(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Catalog(_) => 3,
            Failure::Budget(_) => 4,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = OracleConfig { max_vertices: cli.oracle_cap, node_budget: cli.oracle_budget };
    let result = match cli.command {
        Command::Construct(args) => construct(&args, &cfg),
        Command::Verify { cert, report } => verify(&cert, report.as_deref(), &cfg),
        Command::Eta { graph, witness } => eta(&graph, witness.as_deref(), &cfg),
        Command::Bounds(args) => {
            bounds(&args);
            Ok(())
        }
        Command::Export(args) => export(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification => {}
                Failure::Usage(e) | Failure::Catalog(e) | Failure::Budget(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable value");
    text.push('\n');
    text
}

fn construct(args: &ConstructArgs, cfg: &OracleConfig) -> Outcome {
    let cert = with_apex(args.g, args.p, args.k, args.a).map_err(|e| match e {
        ConstructionError::GenusOutOfCatalog { .. } => Failure::Catalog(e.into()),
        _ => Failure::Usage(e.into()),
    })?;
    let text = match args.format {
        Format::Json => to_json(&cert),
        Format::Dot => cert.structure.flatten().to_dot("G"),
    };
    emit(args.out.as_deref(), &text)?;
    let report = check_certificate(&cert, cfg);
    if report["ok"] == true {
        eprintln!("K_{} certificate verified", cert.n);
        Ok(())
    } else {
        eprintln!("{}", to_json(&report));
        Err(Failure::Verification)
    }
}

/// Every check a certificate must pass, as one JSON report with an `ok` field.
fn check_certificate(cert: &ConstructionCertificate, cfg: &OracleConfig) -> serde_json::Value {
    let structure = cert.structure.validate();
    let host = cert.structure.flatten();
    let model = verify_model(&host, &cert.model);
    let complete = cert.model.pattern.is_complete();
    let order_ok = cert.model.order() == cert.n && complete && cert.model.multiplicity == 1;
    let guarantee_ok = cert.guarantee.le_int(cert.n as i64);
    let sandwich = sandwich_check(cert, cert.params(), cfg);
    let ok = structure.is_valid() && model.is_valid() && order_ok && guarantee_ok && sandwich.passed();
    json!({
        "ok": ok,
        "n": cert.n,
        "params": cert.params(),
        "structure": structure,
        "model": model,
        "model_is_complete_of_order_n": order_ok,
        "guarantee": cert.guarantee,
        "guarantee_ok": guarantee_ok,
        "sandwich": sandwich,
    })
}

fn verify(path: &Path, report_path: Option<&Path>, cfg: &OracleConfig) -> Outcome {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert: ConstructionCertificate =
        serde_json::from_str(&text).with_context(|| format!("parsing certificate {}", path.display()))?;
    let report = check_certificate(&cert, cfg);
    let text = to_json(&report);
    emit(None, &text)?;
    if let Some(p) = report_path {
        emit(Some(p), &text)?;
    }
    if report["ok"] == true {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn read_graph(path: &Path) -> anyhow::Result<SimpleGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing graph {}", path.display()))
}

fn eta(path: &Path, witness: Option<&Path>, cfg: &OracleConfig) -> Outcome {
    let g = read_graph(path)?;
    let r = hadwiger_oracle(&g, cfg).map_err(|e| match e {
        OracleError::TooLarge { .. } | OracleError::BudgetExceeded(_) => Failure::Budget(e.into()),
    })?;
    println!("{}", r.eta);
    if let Some(w) = witness {
        emit(Some(w), &to_json(&r.model))?;
    }
    Ok(())
}

fn bounds(args: &BoundsArgs) {
    let BoundsArgs { g, p, k, a, tw, c, json } = *args;
    let c = c.unwrap_or(p);
    let rows: Vec<(&str, Option<BoundValue>)> = vec![
        ("surface_bound", Some(surface_bound(g))),
        ("lemma21_bound", tw.map(|tw| BoundValue::int(lemma21_bound(k, tw)))),
        ("main_upper", Some(main_upper(g, p, k))),
        ("full_upper", Some(full_upper(g, p, k, a))),
        ("main_tool_bound", Some(main_tool_bound(k, c, g))),
        ("lower_guarantee", Some(lower_guarantee(g, p, k, a))),
    ];
    if json {
        let table: serde_json::Map<String, serde_json::Value> = rows
            .iter()
            .map(|(name, v)| {
                let value = match v {
                    Some(v) => json!({ "exact": v.to_string(), "approx": v.to_f64(), "floor": v.floor() }),
                    None => serde_json::Value::Null,
                };
                (name.to_string(), value)
            })
            .collect();
        print!(
            "{}",
            to_json(&json!({ "params": { "g": g, "p": p, "k": k, "a": a, "c": c, "tw": tw }, "bounds": table }))
        );
        return;
    }
    println!("g={g} p={p} k={k} a={a} c={c}");
    println!("{:<16} {:<28} {:>12} {:>8}", "bound", "exact", "approx", "floor");
    for (name, v) in rows {
        match v {
            Some(v) => println!("{:<16} {:<28} {:>12.4} {:>8}", name, v.to_string(), v.to_f64(), v.floor()),
            None => println!("{:<16} {:<28} {:>12} {:>8}", name, "-", "-", "-"),
        }
    }
}

fn named_graph(spec: &str) -> anyhow::Result<SimpleGraph> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let size = || arg.parse::<usize>().with_context(|| format!("graph {spec:?} needs a size"));
    Ok(match name {
        "petersen" => petersen_graph(),
        "complete" => complete_graph(size()?),
        "cycle" => cycle_graph(size()?),
        "grid" => grid_graph(size()?),
        _ => anyhow::bail!("unknown graph {name:?}"),
    })
}

fn export(args: &ExportArgs) -> Outcome {
    let g = match (&args.cert, &args.graph) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cert: ConstructionCertificate =
                serde_json::from_str(&text).with_context(|| format!("parsing certificate {}", path.display()))?;
            cert.structure.flatten()
        }
        (None, Some(spec)) => named_graph(spec)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let text = match args.format {
        Format::Json => to_json(&g),
        Format::Dot => g.to_dot("G"),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(())
}
