use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use ibuild_cli::config::{self, ExperimentConfig, Kind};
use ibuild_cli::report::{self, Report};
use ibuild_cli::run;

#[derive(Parser)]
#[command(name = "ibuild", version, about = "Experiments on Coxeter complexes and p-adic SL_n buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coxeter reductions against exhaustive enumeration
    Coxeter(Common),
    /// Cartan, Iwasawa and Iwahori round trips
    Decomp(Common),
    /// Boundary limits of iterated hyperbolic elements
    Dynamics(Common),
    /// Absorption of opposite simplices by image neighbourhoods
    Transit(Common),
    /// Limits of conjugated subgroups
    Chabauty(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Embedded configuration, e.g. so2-sl2-q5
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json, summary.txt and trace.jsonl
    #[arg(long)]
    out: Option<PathBuf>,
    /// p-adic digits carried
    #[arg(long)]
    precision: Option<u32>,
    /// Print the normalized configuration and exit
    #[arg(long)]
    emit_config: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, opts) = match cli.command {
        Command::Coxeter(c) => (Kind::CoxeterOracle, c),
        Command::Decomp(c) => (Kind::Decompositions, c),
        Command::Dynamics(c) => (Kind::Dynamics, c),
        Command::Transit(c) => (Kind::Transit, c),
        Command::Chabauty(c) => (Kind::Chabauty, c),
    };
    let loaded = match (&opts.config, &opts.preset) {
        (Some(path), _) => config::load(path),
        (None, Some(name)) => config::preset(name),
        (None, None) => config::preset(kind.default_preset()),
    };
    let mut cfg: ExperimentConfig = match loaded {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if cfg.kind != kind {
        return usage(format!("configuration is for {:?}, not {:?}", cfg.kind, kind));
    }
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(p) = opts.precision {
        cfg.precision = p;
    }
    if let Some(o) = opts.out {
        cfg.out = Some(o);
    }
    if let Err(e) = cfg.validate() {
        return usage(e);
    }
    if opts.emit_config {
        print!("{}", config::emit(&cfg));
        return ExitCode::SUCCESS;
    }
    let outcome = match run::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_precision_exhausted() { 3 } else { 1 });
        }
    };
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let rep = Report::new(&cfg, &outcome, now);
    print!("{}", rep.summary(&outcome));
    if let Some(dir) = &cfg.out {
        if let Err(e) = report::write(dir, &rep, &outcome) {
            eprintln!("error: writing {}: {e}", dir.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(rep.exit_code() as u8)
}
