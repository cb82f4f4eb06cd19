//! `kgo`: spectra, eigenstates, Green's functions and verification suites of
//! the three-dimensional Klein-Gordon oscillator.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use kgo_core::fv::Sign;
use kgo_core::oscillator::OscillatorParams;
use kgo_core::verify::{Suite, ToleranceProfile, VerifyConfig};
use kgo_core::{Exec, KgoError};

use commands::{GreensArgs, Outcome, StateArgs};
use output::{Envelope, Format};

#[derive(Parser)]
#[command(name = "kgo", version, about = "Klein-Gordon oscillator toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Particle mass (selects custom units).
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "natural"
    )]
    mass: Option<f64>,
    /// Oscillator frequency (selects custom units).
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "natural"
    )]
    omega: Option<f64>,
    /// Speed of light; also allowed with --natural.
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        default_value_t = 1.0
    )]
    c: f64,
    /// Reduced Planck constant (selects custom units).
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "natural"
    )]
    hbar: Option<f64>,
    /// ħ = m = ω = 1 (the default when no unit flag is given).
    #[arg(long, global = true)]
    natural: bool,
    /// Radial truncation of the channel matrices.
    #[arg(long, global = true, default_value_t = 30)]
    n_max: u32,
    /// Largest angular momentum [default: 8 for verify, 24 for greens].
    #[arg(long, global = true)]
    l_max: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(
        long,
        global = true,
        env = "KGO_TOLERANCE_PROFILE",
        value_enum,
        default_value_t = Profile::Default
    )]
    tolerance_profile: Profile,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Algebra,
    Spectrum,
    Orthonormality,
    Resolvent,
    Fw,
    Witten,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Levels (n, l, 2l+1, ε, E+, E−) with 2n+l <= max-shell.
    Spectrum {
        #[arg(long, default_value_t = 4)]
        max_shell: u32,
    },
    /// Feshbach-Villars eigenspinor at one point.
    State {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        mu: i32,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
        #[arg(long)]
        r: f64,
        /// Polar angle in radians.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Azimuth in radians.
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// 2×2 Green's matrix G(z; r, r') for r ≠ r'.
    Greens {
        /// Real part of z.
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        /// Imaginary part of z.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        z_im: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        rp: f64,
        /// Angle between r and r' in radians.
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
    },
    /// Run a verification suite; exit code 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Units {
    Natural,
    Custom,
}

/// Echo of the effective run configuration.
#[derive(Serialize)]
struct RunConfig {
    units: Units,
    mass: f64,
    omega: f64,
    c: f64,
    hbar: f64,
    n_max: u32,
    l_max: u32,
    output_format: Format,
    tolerance_profile: ToleranceProfile,
}

enum Failure {
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<KgoError> for Failure {
    fn from(e: KgoError) -> Self {
        match e {
            KgoError::InvalidParameter(_)
            | KgoError::Domain { .. }
            | KgoError::SpectrumCollision { .. }
            | KgoError::Unsupported(_)
            | KgoError::Pole { .. } => Failure::Input(e.into()),
            _ => Failure::Runtime(e.into()),
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let g = &cli.global;
    let custom = g.mass.is_some() || g.omega.is_some() || g.hbar.is_some();
    let params = OscillatorParams::new(
        g.mass.unwrap_or(1.0),
        g.omega.unwrap_or(1.0),
        g.c,
        g.hbar.unwrap_or(1.0),
    )?;
    let profile = match g.tolerance_profile {
        Profile::Default => ToleranceProfile::Default,
        Profile::Strict => ToleranceProfile::Strict,
    };
    let (name, l_max) = match cli.command {
        Command::Spectrum { .. } => ("spectrum", g.l_max.unwrap_or(8)),
        Command::State { .. } => ("state", g.l_max.unwrap_or(8)),
        Command::Greens { .. } => ("greens", g.l_max.unwrap_or(24)),
        Command::Verify { .. } => ("verify", g.l_max.unwrap_or(8)),
    };
    let config = RunConfig {
        units: if custom {
            Units::Custom
        } else {
            Units::Natural
        },
        mass: params.mass,
        omega: params.omega,
        c: params.c,
        hbar: params.hbar,
        n_max: g.n_max,
        l_max,
        output_format: g.format,
        tolerance_profile: profile,
    };

    let outcome: Outcome = match cli.command {
        Command::Spectrum { max_shell } => commands::spectrum(&params, max_shell)?,
        Command::State {
            n,
            l,
            mu,
            sign,
            r,
            theta,
            phi,
        } => commands::state(
            &params,
            &StateArgs {
                n,
                l,
                mu,
                sign: match sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                },
                r,
                theta,
                phi,
            },
        )?,
        Command::Greens {
            z,
            z_im,
            r,
            rp,
            angle,
        } => commands::greens(
            &params,
            &GreensArgs {
                z: Complex64::new(z, z_im),
                r,
                rp,
                angle,
                l_max,
            },
        )?,
        Command::Verify { suite } => {
            if g.n_max < 1 {
                return Err(Failure::Input(anyhow::anyhow!("verify needs --n-max >= 1")));
            }
            let suite = match suite {
                SuiteArg::Algebra => Suite::Algebra,
                SuiteArg::Spectrum => Suite::Spectrum,
                SuiteArg::Orthonormality => Suite::Orthonormality,
                SuiteArg::Resolvent => Suite::Resolvent,
                SuiteArg::Fw => Suite::Fw,
                SuiteArg::Witten => Suite::Witten,
                SuiteArg::All => Suite::All,
            };
            let cfg = VerifyConfig {
                params,
                n_max: g.n_max,
                l_max,
                profile,
                exec: if g.sequential {
                    Exec::Sequential
                } else {
                    Exec::Parallel
                },
            };
            commands::verify(&cfg, suite)?
        }
    };

    let passed = outcome.checks.iter().all(|c| c.pass);
    let bytes = match g.format {
        Format::Json => output::to_json(&Envelope {
            command: name,
            config: &config,
            results: outcome.results,
            checks: outcome.checks,
        })
        .map_err(|e| Failure::Runtime(e.into()))?,
        Format::Csv => outcome.table.to_csv().map_err(Failure::Runtime)?,
    };
    match &g.out {
        Some(path) => std::fs::write(path, &bytes)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Input)?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::Runtime(e.into()))?
        }
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
