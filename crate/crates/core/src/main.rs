use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mirror_clone::report::{
    cmd_bloch, cmd_certify, cmd_circuits, cmd_optimize, cmd_sweep, CircuitOptions, CommandOutput,
    OptimizeOptions, SweepConfig, Variant,
};

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "mirror-clone",
    version,
    about = "Optimal mirror phase-covariant qubit cloning: sweeps, certificates, circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fidelity of the mirror, phase-covariant and universal cloners.
    Sweep(Common),
    /// Clone Bloch vectors in one azimuthal plane.
    Bloch {
        #[command(flatten)]
        common: Common,
        /// Azimuth of the cross-section plane.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Optimality certificate at every grid point.
    Certify(Common),
    /// Simulate both gate-level implementations against the cloner isometry.
    Circuits {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = VariantArg::Both)]
        variant: VariantArg,
        /// Write the simulated circuits in text form to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Exchange coupling of the second circuit.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Random input states per angle, besides |0> and |1>.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Fixed-point maximisation from random starts against the closed form.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Number of random starts per angle.
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    theta_max: f64,
    #[arg(long, default_value_t = 181)]
    steps: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Defaults to json for `certify`, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            theta_min: self.theta_min,
            theta_max: self.theta_max,
            steps: self.steps,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    V1,
    V2,
    Both,
}

impl VariantArg {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::V1 => vec![Variant::V1],
            VariantArg::V2 => vec![Variant::V2],
            VariantArg::Both => vec![Variant::V1, Variant::V2],
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

fn write_output(out: &CommandOutput, common: &Common, default: Format) -> Result<(), Failure> {
    let format = common.format.unwrap_or(default);
    let sink: Box<dyn Write> = match &common.output {
        Some(path) => Box::new(File::create(path).map_err(|e| {
            Failure::Io(format!("cannot create {}: {e}", path.display()))
        })?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    let written = match format {
        Format::Csv => out.table.write_csv(&mut sink),
        Format::Json => out.table.write_json(&mut sink),
    };
    written.map_err(|e| Failure::Io(e.to_string()))?;
    sink.flush().map_err(|e| Failure::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<Vec<String>, Failure> {
    let usage = |e: mirror_clone::Error| Failure::Usage(e.to_string());
    let (out, common, default) = match &cli.command {
        Command::Sweep(c) => (cmd_sweep(&c.config()).map_err(usage)?, c, Format::Csv),
        Command::Bloch { common, phi } => (
            cmd_bloch(&common.config(), *phi).map_err(usage)?,
            common,
            Format::Csv,
        ),
        Command::Certify(c) => (cmd_certify(&c.config()).map_err(usage)?, c, Format::Json),
        Command::Circuits {
            common,
            variant,
            dump,
            kappa,
            samples,
        } => {
            let opts = CircuitOptions {
                variants: variant.variants(),
                kappa: *kappa,
                samples: *samples,
            };
            let (out, text) = cmd_circuits(&common.config(), &opts).map_err(usage)?;
            if let Some(path) = dump {
                std::fs::write(path, text).map_err(|e| {
                    Failure::Io(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            (out, common, Format::Csv)
        }
        Command::Optimize {
            common,
            seeds,
            max_iter,
        } => {
            let opts = OptimizeOptions {
                seeds: *seeds,
                max_iter: *max_iter,
                ..OptimizeOptions::default()
            };
            (
                cmd_optimize(&common.config(), &opts).map_err(usage)?,
                common,
                Format::Csv,
            )
        }
    };
    write_output(&out, common, default)?;
    Ok(out.failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(EXIT_CHECK)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
