//! Command-line front end for the `curvotex` library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{
    BadInput, BifurcationArgs, Format, GalleryArgs, NormalFormArgs, Outcome, ProbeArgs, SimulateArgs, SpectrumArgs,
    StabilityArgs,
};
use output::Emitter;

#[derive(Debug, Parser)]
#[command(name = "curvotex", version, about = "Vortex rings on constant-curvature surfaces")]
struct Cli {
    /// Directory receiving all output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Exit with status 4 when any numerical warning was raised.
    #[arg(long, global = true)]
    strict: bool,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical values b_n and classification of sample rings.
    Stability(StabilityArgs),
    /// Bifurcation values of every mode of a ring.
    Bifurcations(BifurcationArgs),
    /// Mode-by-mode Hessian spectrum of one ring.
    Spectrum(SpectrumArgs),
    /// Higher-order test at the degenerate point of a ring.
    Probe(ProbeArgs),
    /// Integrate a vortex configuration.
    Simulate(SimulateArgs),
    /// Sample a dihedral normal form and its critical points.
    NormalForm(NormalFormArgs),
    /// Build a symmetric perturbation of a ring along one mode.
    Gallery(GalleryArgs),
}

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_STRICT: u8 = 4;

fn run(cli: &Cli) -> Result<(Outcome, &'static str, serde_json::Value)> {
    let out = Emitter::new(&cli.out_dir)?;
    let f = cli.format;
    let (outcome, name, params) = match &cli.command {
        Command::Stability(a) => (commands::stability(a, f, out)?, "stability", serde_json::to_value(a)?),
        Command::Bifurcations(a) => (commands::bifurcations(a, f, out)?, "bifurcations", serde_json::to_value(a)?),
        Command::Spectrum(a) => (commands::spectrum(a, out)?, "spectrum", serde_json::to_value(a)?),
        Command::Probe(a) => (commands::probe_cmd(a, out)?, "probe", serde_json::to_value(a)?),
        Command::Simulate(a) => (commands::simulate(a, out)?, "simulate", serde_json::to_value(a)?),
        Command::NormalForm(a) => (commands::normal_form(a, f, out)?, "normal-form", serde_json::to_value(a)?),
        Command::Gallery(a) => (commands::gallery(a, out)?, "gallery", serde_json::to_value(a)?),
    };
    Ok((outcome, name, params))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<curvotex::Error>() {
            return if e.is_domain() { EXIT_DOMAIN } else { EXIT_USAGE };
        }
        if cause.is::<BadInput>() {
            return EXIT_USAGE;
        }
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_IO
}

fn configure_threads() {
    if let Some(n) = std::env::var("CURVOTEX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignoring the error is fine: it only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    configure_threads();

    let (outcome, name, params) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: [{}] {}", w.source, w.message);
    }
    let paths = match outcome.emitter.finish(name, &params) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_IO);
        }
    };
    print_paths(&paths);
    if let Some(msg) = outcome.domain_failure {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_DOMAIN);
    }
    if cli.strict && !outcome.warnings.is_empty() {
        return ExitCode::from(EXIT_STRICT);
    }
    ExitCode::SUCCESS
}
