//! Command-line front end: traveling-wave analyses for the delayed KP-BBM
//! equation.
//!
//! Settings resolve in three layers: built-in defaults, then the JSON file
//! given by `--config`, then explicit flags. Documents go to stdout unless
//! `--out` is set. Exit codes: 0 success, 2 invalid or degenerate
//! parameters, 3 analysis found nothing (no sign change, no crossing),
//! 4 numerical failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kpbbm::commands;
use kpbbm::config::{ConfigLayer, RunConfig};

#[derive(Parser)]
#[command(
    name = "kpbbm",
    version,
    about = "Delayed KP-BBM traveling-wave toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Equilibria of the planar wave system, classified, with the
    /// homoclinic-regime verdict
    Equilibria(Flags),
    /// Homoclinic loop plus nearby periodic orbits and outer arcs
    Portrait(Flags),
    /// Melnikov integral sweep over the speed grid
    Melnikov(Flags),
    /// Persistent wave speed: the transverse root of the Melnikov integral
    Speed(Flags),
    /// Numeric persistence check: measured speeds over the tau ladder
    Persist(Flags),
    /// Kernel normalization and delta-limit diagnostics
    KernelCheck(Flags),
}

#[derive(Args)]
struct Flags {
    /// Nonlinearity coefficient (default -1)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,

    /// Dispersion coefficient (default 1)
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,

    /// Transverse coefficient (default -1)
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,

    /// Wave speed (default 1)
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,

    /// Mean delay of the kernel (default 1e-3)
    #[arg(long)]
    tau: Option<f64>,

    /// Delay variant: local, nonlocal or none, with an optional
    /// :noviscous suffix (default local)
    #[arg(long)]
    variant: Option<String>,

    /// JSON config file; explicit flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output format: csv or json (default depends on the command)
    #[arg(long)]
    format: Option<String>,

    /// Write the document to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Lower end of the speed grid (default 0.05)
    #[arg(long)]
    c_min: Option<f64>,

    /// Upper end of the speed grid (default 3.0)
    #[arg(long)]
    c_max: Option<f64>,

    /// Step of the speed grid (default 0.05)
    #[arg(long)]
    c_step: Option<f64>,

    /// Lower end of the profile grid (default -20)
    #[arg(long, allow_negative_numbers = true)]
    xi_min: Option<f64>,

    /// Upper end of the profile grid (default 20)
    #[arg(long, allow_negative_numbers = true)]
    xi_max: Option<f64>,

    /// Step of the profile grid (default 0.05)
    #[arg(long)]
    xi_step: Option<f64>,

    /// Comma-separated tau ladder for persist (default 4e-3,2e-3,1e-3)
    #[arg(long, value_delimiter = ',')]
    tau_ladder: Option<Vec<f64>>,

    /// Absolute quadrature tolerance (default 1e-10)
    #[arg(long)]
    quad_tol: Option<f64>,

    /// Root-finding tolerance in c (default 1e-12)
    #[arg(long)]
    root_tol: Option<f64>,

    /// Relative ODE tolerance for the persistence runs (default 1e-11)
    #[arg(long)]
    ode_rtol: Option<f64>,
}

impl Flags {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            a: self.a,
            b: self.b,
            k: self.k,
            c: self.c,
            tau: self.tau,
            variant: self.variant.clone(),
            c_min: self.c_min,
            c_max: self.c_max,
            c_step: self.c_step,
            xi_min: self.xi_min,
            xi_max: self.xi_max,
            xi_step: self.xi_step,
            tau_ladder: self.tau_ladder.clone(),
            quad_tol: self.quad_tol,
            root_tol: self.root_tol,
            ode_rtol: self.ode_rtol,
            format: self.format.clone(),
            out: self.out.clone(),
        }
    }
}

fn run() -> kpbbm::Result<()> {
    let cli = Cli::parse();
    let (flags, cmd): (&Flags, fn(&RunConfig) -> kpbbm::Result<String>) = match &cli.cmd {
        Cmd::Equilibria(f) => (f, commands::cmd_equilibria),
        Cmd::Portrait(f) => (f, commands::cmd_portrait),
        Cmd::Melnikov(f) => (f, commands::cmd_melnikov),
        Cmd::Speed(f) => (f, commands::cmd_speed),
        Cmd::Persist(f) => (f, commands::cmd_persist),
        Cmd::KernelCheck(f) => (f, commands::cmd_kernel_check),
    };
    let file = flags
        .config
        .as_deref()
        .map(ConfigLayer::from_file)
        .transpose()?;
    let cfg = RunConfig::resolve(file, flags.layer())?;
    let doc = cmd(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, doc)?,
        None => {
            use std::io::Write;
            // A closed pipe (e.g. `kpbbm portrait | head`) is not an error.
            if let Err(e) = std::io::stdout().write_all(doc.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
