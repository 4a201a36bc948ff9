use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lpevac::{CurveTable, PExponent};
use lpevac_cli::{
    cmd_cost, cmd_lchord, cmd_params, cmd_pi, cmd_profile, cmd_sigma, cmd_simulate, cmd_verify,
    parse_angle, parse_p, CliResult, PRange, DEFAULT_GAP_TOL, DEFAULT_GRID, DEFAULT_MONOTONE_TOL,
};

static LONG_VERSION: LazyLock<String> = LazyLock::new(|| {
    format!(
        "{} (lpevac-core {})",
        env!("CARGO_PKG_VERSION"),
        lpevac::VERSION
    )
});

/// Wireless two-robot evacuation from lp unit disks: curves, costs and
/// numerical certificates.
#[derive(Debug, Parser)]
#[command(name = "lpevac", version = LONG_VERSION.as_str())]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Table output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Verification grid size.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Monotonicity tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_MONOTONE_TOL)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 1.0)]
    p_min: f64,
    #[arg(long, default_value_t = 16.0)]
    p_max: f64,
    #[arg(long, default_value_t = 400)]
    steps: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Perimeter pi_p over a range of p.
    Pi(RangeArgs),
    /// Worst-case cost, lower bounds and critical parameters over a range of p.
    Cost(RangeArgs),
    /// Evacuation time against the exploration time tau.
    Profile {
        #[arg(value_parser = parse_p)]
        p: PExponent,
        /// Deployment angle: 0 or pi/4.
        #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 512)]
        steps: usize,
    },
    /// Chord of a fixed-length arc against its tangential angle.
    Sigma {
        #[arg(value_parser = parse_p)]
        p: PExponent,
        #[arg(long, default_value_t = 512)]
        steps: usize,
        /// Arc length; defaults to the critical explored length e_p.
        #[arg(long)]
        arc_len: Option<f64>,
    },
    /// Minimum chord subtended by arcs of length u.
    Lchord {
        #[arg(value_parser = parse_p)]
        p: PExponent,
        #[arg(long, default_value_t = 512)]
        steps: usize,
    },
    /// Run the monotonicity, chord and gap certificates; JSON report.
    Verify {
        #[arg(value_parser = parse_p)]
        p: Vec<PExponent>,
        /// Allowed gap between upper and lower bound.
        #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
        gap_tol: f64,
    },
    /// Cost of one exit placement; JSON.
    Simulate {
        #[arg(value_parser = parse_p)]
        p: PExponent,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        exit_phi: f64,
    },
    /// Critical parameters for one p; JSON.
    Params {
        #[arg(value_parser = parse_p)]
        p: PExponent,
    },
}

fn sink(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_table(cli: &Cli, table: CurveTable) -> CliResult<()> {
    let table = table.with_meta("format", format!("{:?}", cli.format).to_lowercase());
    let mut w = sink(&cli.out)?;
    match cli.format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    let mut w = sink(&cli.out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Pi(r) => emit_table(cli, cmd_pi(PRange::new(r.p_min, r.p_max, r.steps)?)?)?,
        Command::Cost(r) => emit_table(cli, cmd_cost(PRange::new(r.p_min, r.p_max, r.steps)?)?)?,
        Command::Profile { p, phi, steps } => emit_table(cli, cmd_profile(*p, *phi, *steps)?)?,
        Command::Sigma { p, steps, arc_len } => emit_table(cli, cmd_sigma(*p, *steps, *arc_len)?)?,
        Command::Lchord { p, steps } => emit_table(cli, cmd_lchord(*p, *steps)?)?,
        Command::Verify { p, gap_tol } => {
            let report = cmd_verify(p, cli.grid, cli.tol, *gap_tol)?;
            emit_json(cli, &report)?;
            return Ok(report.passed);
        }
        Command::Simulate { p, phi, exit_phi } => {
            emit_json(cli, &cmd_simulate(*p, *phi, *exit_phi)?)?
        }
        Command::Params { p } => emit_json(cli, &cmd_params(*p)?)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::new().parse_filters("warn").init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
