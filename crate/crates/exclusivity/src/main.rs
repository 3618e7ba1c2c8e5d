use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use exclusivity::bounds::bound_report;
use exclusivity::error::Error;
use exclusivity::everify::{Corruption, DerivationKind};
use exclusivity::graph::Graph;
use exclusivity::report::{
    full_report, realize, verify_derivation, verify_specker, BoundsJson, ThetaJson,
};
use exclusivity::scenario::{builtin, Scenario};
use exclusivity::theta::lovasz_theta;

#[derive(Parser)]
#[command(
    name = "exclusivity",
    about = "Bounds on sums of measurement-event probabilities over exclusivity graphs"
)]
struct Cli {
    /// Duality-gap target for the theta solver.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every bound for a built-in scenario name or scenario file.
    Bounds { scenario: String },
    /// Replay a derivation and certify each step.
    Verify {
        kind: String,
        /// Flip one outcome sign before certifying: "<set>,<event>,<observable>".
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Solve the theta SDP for a graph file.
    Theta { graph: PathBuf },
    /// Print an explicit quantum model achieving the bound.
    Realize { kind: String },
    /// Recompute every headline number with pass/fail verdicts.
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CertificationFailed { .. }
                | Error::IdentityNotVerified
                | Error::Uncertified
                | Error::NoConvergence { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit<T: serde::Serialize>(format: Format, json: &T, table: String) {
    match format {
        Format::Table => print!("{table}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(json).expect("report serializes")
        ),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Bounds { scenario } => {
            let (name, scn, events) = load_scenario(scenario)?;
            let r = bound_report(&name, &events, &scn, cli.tol)?;
            let j = BoundsJson::from_report(&r);
            emit(cli.format, &j, j.table());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { kind, corrupt } => {
            let corruption = corrupt.as_deref().map(parse_corruption).transpose()?;
            let j = match kind.as_str() {
                "kcbs" => verify_derivation(DerivationKind::Kcbs, None)?,
                "chsh" => verify_derivation(DerivationKind::Chsh, corruption.as_ref())?,
                "specker" => verify_specker()?,
                other => return Err(Error::UnknownScenario(other.to_string())),
            };
            let ok = j.sets.iter().all(|s| s.certified) && j.identity_verified;
            emit(cli.format, &j, j.transcript());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Theta { graph } => {
            let text = std::fs::read_to_string(graph)?;
            let g = Graph::parse(&text)?;
            let r = lovasz_theta(&g, cli.tol)?;
            let j = ThetaJson::new(&g, &r);
            emit(cli.format, &j, j.table());
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize { kind } => {
            let j = realize(kind)?;
            emit(cli.format, &j, j.table());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report => {
            let j = full_report(cli.tol)?;
            emit(cli.format, &j, j.table());
            Ok(if j.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn load_scenario(arg: &str) -> Result<(String, Scenario, Vec<exclusivity::scenario::Event>), Error> {
    if let Some((scn, events)) = builtin(arg) {
        return Ok((arg.to_string(), scn, events));
    }
    let path = PathBuf::from(arg);
    if !path.exists() {
        return Err(Error::UnknownScenario(arg.to_string()));
    }
    let text = std::fs::read_to_string(&path)?;
    let (scn, labeled) = Scenario::parse(&text)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    Ok((name, scn, labeled.into_iter().map(|(_, e)| e).collect()))
}

fn parse_corruption(spec: &str) -> Result<Corruption, Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    let bad = || Error::Parse {
        line: 0,
        message: format!("corruption spec `{spec}`; expected <set>,<event>,<observable>"),
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(Corruption {
        set: parts[0].trim().parse().map_err(|_| bad())?,
        event: parts[1].trim().parse().map_err(|_| bad())?,
        observable: parts[2].trim().to_string(),
    })
}
