//! `contextlab`: run and re-render contextuality verification reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! errors (bad flags, unknown names, unreadable or malformed input).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use contextlab::graphs::GraphFile;
use contextlab::ks::{self, RaySetFile};
use contextlab::magic::ConfigurationFile;
use contextlab::registry::{self, DemoParams, Expectation};
use contextlab::report::ReportDocument;
use contextlab::scenarios::Sign;
use contextlab::{Error, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "contextlab",
    version,
    about = "Verify quantum pigeonhole, Cheshire-cat, KS and GHZ-graph arguments"
)]
struct Cli {
    /// Write the report here instead of stdout (a directory for export-builtins).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,

    /// Magnitude below which amplitudes and residuals count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,

    /// Largest Hilbert-space dimension realized as a dense matrix.
    #[arg(long, global = true, default_value_t = 4096)]
    max_dim: usize,

    /// Fail unless the run concludes this.
    #[arg(long, global = true)]
    expect: Option<Expect>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Expect {
    Sat,
    Unsat,
    Feasible,
    Infeasible,
}

impl From<Expect> for Expectation {
    fn from(e: Expect) -> Self {
        match e {
            Expect::Sat => Expectation::Sat,
            Expect::Unsat => Expectation::Unsat,
            Expect::Feasible => Expectation::Feasible,
            Expect::Infeasible => Expectation::Infeasible,
        }
    }
}

#[derive(clap::Args, Debug, Default)]
struct ScenarioArgs {
    /// Preparation signs, e.g. `+,-,+`.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Post-selection signs.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long)]
    alpha: Option<u8>,
    #[arg(long)]
    beta: Option<u8>,
    #[arg(long)]
    mu: Option<u8>,
    #[arg(long)]
    nu: Option<u8>,
    /// Graph file for the qudit scenarios.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Stabilizer eigenvalue exponents `g_a` (eigenvalue ω^g_a), e.g. `0,0,1`.
    #[arg(long)]
    g: Option<String>,
    /// Post-selection exponents `h_a`.
    #[arg(long)]
    h: Option<String>,
    /// Product-state preparation exponents `s_a`.
    #[arg(long)]
    s_exp: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one named pre/post-selection scenario.
    Demo {
        name: String,
        #[command(flatten)]
        args: ScenarioArgs,
    },
    /// Run an exhaustive parameter sweep.
    Sweep {
        name: String,
        /// Graph file for the qudit sweeps.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Check a magic configuration file.
    VerifyConfig { path: PathBuf },
    /// Search a ray-set file (or `builtin:34`, `builtin:48`) for a KS assignment.
    KsSearch {
        path: String,
        /// Preassigned values, e.g. `psi_i=1,psi_f=1`.
        #[arg(long)]
        preassign: Option<String>,
        /// Random ray orderings used to confirm the verdict.
        #[arg(long, default_value_t = 10)]
        orderings: usize,
    },
    /// Evaluate the GHZ-graph predicate and stabilizer identities.
    GhzCheck { path: PathBuf },
    /// Write every shipped construction as JSON into a directory.
    ExportBuiltins { dir: Option<PathBuf> },
    /// Re-render a saved JSON report.
    Report { path: PathBuf },
    /// List scenario and sweep names.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Construction(_) | Error::UndefinedDistribution | Error::IncompatibleOperands(_) => 1,
        _ => 2,
    }
}

fn seed() -> Result<u64, Error> {
    match std::env::var("CONTEXTLAB_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "CONTEXTLAB_SEED must be an unsigned integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(registry::DEFAULT_SEED),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<contextlab::graphs::WeightedGraph, Error> {
    GraphFile::from_json(&read(path)?)?.build()
}

fn exponents(text: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(|t| {
            t.trim().parse().map_err(|_| {
                Error::Parse(format!("expected comma-separated exponents, got `{text}`"))
            })
        })
        .collect()
}

fn params(a: &ScenarioArgs) -> Result<DemoParams, Error> {
    Ok(DemoParams {
        s: a.s.as_deref().map(Sign::parse_list).transpose()?,
        t: a.t.as_deref().map(Sign::parse_list).transpose()?,
        bits: [a.alpha, a.beta, a.mu, a.nu],
        graph: a.graph.as_deref().map(load_graph).transpose()?,
        g: a.g.as_deref().map(exponents).transpose()?,
        h: a.h.as_deref().map(exponents).transpose()?,
        s_exp: a.s_exp.as_deref().map(exponents).transpose()?,
        seed: Some(seed()?),
    })
}

fn emit(cli: &Cli, doc: &ReportDocument) -> Result<bool, Error> {
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Md => doc.to_markdown(),
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    Ok(doc.passed)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Error::Parse(format!(
            "tolerance must be positive, got {}",
            cli.tolerance
        )));
    }
    let settings = Settings {
        tolerance: cli.tolerance,
        max_dim: cli.max_dim,
    };
    let expect = cli.expect.map(Expectation::from);
    match &cli.command {
        Command::Demo { name, args } => {
            let doc =
                registry::run_demo(name, &params(args)?, &settings, expect).map_err(
                    |e| match e {
                        Error::Unknown(what) => {
                            Error::Unknown(format!("{what}; known: {}", names(registry::DEMOS)))
                        }
                        other => other,
                    },
                )?;
            emit(cli, &doc)
        }
        Command::Sweep { name, graph } => {
            let p = DemoParams {
                graph: graph.as_deref().map(load_graph).transpose()?,
                seed: Some(seed()?),
                ..DemoParams::default()
            };
            let doc = registry::run_sweep(name, &p, &settings).map_err(|e| match e {
                Error::Unknown(what) => {
                    Error::Unknown(format!("{what}; known: {}", names(registry::SWEEPS)))
                }
                other => other,
            })?;
            emit(cli, &doc)
        }
        Command::VerifyConfig { path } => {
            let cfg = ConfigurationFile::from_json(&read(path)?)?.build()?;
            emit(cli, &registry::config_report(&cfg, &settings)?)
        }
        Command::KsSearch {
            path,
            preassign,
            orderings,
        } => {
            let rs = match path.as_str() {
                "builtin:34" => ks::builtin_34_rays::<f64>(),
                "builtin:48" => ks::builtin_48_rays::<f64>(),
                file => RaySetFile::from_json(&read(Path::new(file))?)?
                    .build::<f64>(settings.tolerance)?,
            };
            let pre = match preassign {
                Some(text) => registry::parse_preassignment(&rs, text)?,
                None => Vec::new(),
            };
            emit(
                cli,
                &registry::ks_report(&rs, &pre, *orderings, seed()?, expect)?,
            )
        }
        Command::GhzCheck { path } => emit(
            cli,
            &registry::ghz_report(&load_graph(path)?, &settings, expect)?,
        ),
        Command::ExportBuiltins { dir } => {
            let dir = dir
                .clone()
                .or_else(|| cli.out.clone())
                .ok_or_else(|| Error::Parse("export-builtins needs a directory".into()))?;
            fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            for (name, text) in registry::export_builtins() {
                let path = dir.join(&name);
                fs::write(&path, text)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Report { path } => {
            let doc = ReportDocument::from_json(&read(path)?)?;
            emit(cli, &doc)
        }
        Command::List => {
            println!("scenarios (demo):");
            for (n, d) in registry::DEMOS {
                println!("  {n:<22} {d}");
            }
            println!("sweeps:");
            for (n, d) in registry::SWEEPS {
                println!("  {n:<22} {d}");
            }
            Ok(true)
        }
    }
}

fn names(list: &[(&str, &str)]) -> String {
    list.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}
