use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpdg::driver::{emit_table, format_table, run_h_sweep, run_sweep_with, ExperimentConfig};
use hpdg::verify;

#[derive(Parser)]
#[command(
    name = "hpdg",
    version,
    about = "hp-IPDG convergence experiments for the biharmonic problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence in the polynomial degree on a fixed mesh.
    SweepP(Experiment),
    /// Convergence under uniform refinement at fixed degree (`--p-min`).
    SweepH(Experiment),
    /// Runs the projector, identity, coercivity and lifting checks.
    Verify,
}

#[derive(Args)]
struct Experiment {
    /// `key = value` file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// u1, u2, u3, u4, poly, smooth or quartic.
    #[arg(long)]
    case: Option<String>,
    /// square:NxM, triangles:NxM, lshape or refine:L.
    #[arg(long)]
    mesh: Option<String>,
    /// ipdg or c0ipdg.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    p_min: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    /// Squares per side for h-sweeps, comma separated.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    c_sigma: Option<f64>,
    #[arg(long)]
    c_tau: Option<f64>,
    #[arg(long)]
    grading_levels: Option<usize>,
    /// Output file; the table goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or markdown.
    #[arg(long)]
    format: Option<String>,
}

impl Experiment {
    fn config(&self) -> hpdg::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("case", self.case.clone()),
            ("mesh", self.mesh.clone()),
            ("method", self.method.clone()),
            ("p_min", self.p_min.map(|v| v.to_string())),
            ("p_max", self.p_max.map(|v| v.to_string())),
            ("sizes", self.sizes.clone()),
            ("c_sigma", self.c_sigma.map(|v| v.to_string())),
            ("c_tau", self.c_tau.map(|v| v.to_string())),
            ("grading_levels", self.grading_levels.map(|v| v.to_string())),
            ("format", self.format.clone()),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sweep(exp: &Experiment, h: bool) -> hpdg::Result<()> {
    let cfg = exp.config()?;
    let rows = if h {
        run_h_sweep(&cfg)?
    } else {
        run_sweep_with(&cfg, |r| {
            eprintln!("p={} dg={:.3e} l2={:.3e}", r.p, r.errors.dg_error, r.errors.l2_error)
        })?
    };
    match &cfg.out {
        Some(path) => emit_table(&rows, cfg.format, path),
        None => {
            print!("{}", format_table(&rows, cfg.format));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SweepP(exp) => sweep(exp, false),
        Command::SweepH(exp) => sweep(exp, true),
        Command::Verify => {
            let checks = verify::run_all();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(c) = verify::first_failure(&checks) {
                eprintln!("check failed: {}", c.name);
                return ExitCode::FAILURE;
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
