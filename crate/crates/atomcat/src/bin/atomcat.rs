use std::path::PathBuf;
use std::process::ExitCode;

use atomcat::harness::{self, Output, RunConfig, SuiteParams};
use atomcat::predictor::RealizationMode;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "atomcat", version, about = "Atom spectra of colored-quiver categories")]
struct Cli {
    #[arg(long, global = true, env = "ATOMCAT_FIELD", default_value_t = 2)]
    field: u32,
    #[arg(long, global = true, env = "ATOMCAT_BUDGET", default_value_t = atomcat::linmod::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long = "iso-cap", global = true, env = "ATOMCAT_ISO_CAP", default_value_t = atomcat::linmod::DEFAULT_ISO_CAP)]
    iso_cap: u64,
    #[arg(long, global = true, env = "ATOMCAT_DEPTH", default_value_t = harness::config::DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, global = true, env = "ATOMCAT_SEED", default_value_t = harness::config::DEFAULT_SEED)]
    seed: u64,
    /// Directory for JSON and DOT artifacts.
    #[arg(long, global = true, env = "ATOMCAT_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectrum of a quiver JSON file.
    Spectrum { quiver: PathBuf },
    /// Realize a poset JSON file and crosscheck the truncation.
    Realize {
        poset: PathBuf,
        #[arg(long, default_value = "acc")]
        mode: RealizationMode,
    },
    /// One of the named infinite constructions.
    Preset { name: String },
    /// Run an invariant suite: core, order or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 200)]
        quivers: usize,
        #[arg(long, default_value_t = 100)]
        posets: usize,
    },
    /// Recompute the worked examples as a table.
    Examples,
    /// Poset JSON to topology JSON, or back.
    Convert { file: PathBuf },
}

fn run(cli: Cli) -> Result<Output, atomcat::Error> {
    let cfg = RunConfig { field: cli.field, budget: cli.budget, iso_cap: cli.iso_cap, depth: cli.depth, seed: cli.seed, out: cli.out }.validate()?;
    let out = match cli.cmd {
        Cmd::Spectrum { quiver } => harness::spectrum_cmd(&quiver, &cfg)?,
        Cmd::Realize { poset, mode } => harness::realize_cmd(&poset, mode, &cfg)?,
        Cmd::Preset { name } => harness::preset_cmd(&name, &cfg)?,
        Cmd::Verify { suite, quivers, posets } => harness::verify_cmd(&suite, &cfg, SuiteParams { quivers, posets, ..SuiteParams::default() })?,
        Cmd::Examples => harness::examples_cmd(&cfg)?,
        Cmd::Convert { file } => harness::convert_cmd(&file)?,
    };
    if let Some(dir) = &cfg.out {
        harness::write_artifacts(dir, &out.artifacts)?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
