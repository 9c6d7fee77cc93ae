use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperkp::curve::{Curve, CurveSpec, DivisorSpec};
use hyperkp::error::{Error, Result};
use hyperkp::kp::{Branch, Variant};
use hyperkp::report::{self, Constraint, Entry, Kp2, Mode, Report, RunConfig, Setting};
use hyperkp::scalar::{GaussianField, DEFAULT_JET_ORDER, DEFAULT_PRECISION};

#[derive(Parser)]
#[command(name = "hyperkp", version, about = "Exact checks of hyperelliptic KP solutions and identities")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value = "exact", global = true)]
    mode: Mode,
    /// Working precision in bits for numeric mode.
    #[arg(long, default_value_t = DEFAULT_PRECISION, global = true)]
    precision: usize,
    #[arg(long, default_value_t = DEFAULT_JET_ORDER, global = true)]
    jet_order: usize,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time per identity (breaks byte-identical reports).
    #[arg(long, global = true)]
    timing: bool,
    /// Print one PASS/FAIL line per check instead of JSON.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Principal,
    Negated,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the curve is nonsingular and weight-homogeneous.
    ValidateCurve {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Print the P-matrix (even model) or ℘-matrix (odd model) at a divisor.
    EvalP {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Print one entry with derivatives, e.g. `--suffixes 2,2,4,4`.
    JetEval {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        suffixes: Vec<i64>,
    },
    /// KP residual of ψ, φ or Υ at a divisor.
    KpResidual {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, value_enum)]
        kp2: Option<Kp2>,
        #[arg(long, value_enum, default_value = "principal")]
        branch: BranchArg,
    },
    /// Check one identity; generates a fixture when no curve is given.
    CheckIdentity {
        #[arg(long)]
        id: String,
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, requires = "divisor")]
        curve: Option<PathBuf>,
        #[arg(long, requires = "curve")]
        divisor: Option<PathBuf>,
    },
    /// Check the relations between the even model and its odd image.
    BridgeCheck {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        /// Also check after moving the branch point to the origin.
        #[arg(long)]
        a0: bool,
    },
    /// Write a seeded curve and divisor satisfying the constraints.
    GenFixture {
        #[arg(long)]
        genus: usize,
        #[arg(long = "constraint", value_enum)]
        constraints: Vec<Constraint>,
        /// Directory for curve.json and divisor.json.
        #[arg(long)]
        dir: PathBuf,
    },
    /// Run every applicable check on seeded fixtures.
    Suite {
        #[arg(long)]
        genus: usize,
    },
}

fn load(curve: &Path, divisor: &Path, config: &RunConfig) -> Result<Setting> {
    let c = load_curve(curve)?;
    let d: DivisorSpec = report::read_json(divisor)?;
    Setting::load(&c, &d, config)
}

fn load_curve(path: &Path) -> Result<Curve<GaussianField>> {
    let spec: CurveSpec = report::read_json(path)?;
    spec.build()
}

fn run(command: &Command, config: &RunConfig) -> Result<(&'static str, Vec<Entry>)> {
    Ok(match command {
        Command::ValidateCurve { curve } => ("validate-curve", report::validate_curve(&load_curve(curve)?)),
        Command::EvalP { curve, divisor } => ("eval-p", report::eval_p(&load(curve, divisor, config)?)?),
        Command::JetEval { curve, divisor, suffixes } => (
            "jet-eval",
            report::jet_eval(&load(curve, divisor, config)?, suffixes, config)?,
        ),
        Command::KpResidual { variant, curve, divisor, kp2, branch } => {
            let branch = match branch {
                BranchArg::Principal => Branch::Principal,
                BranchArg::Negated => Branch::Negated,
            };
            let setting = load(curve, divisor, config)?;
            ("kp-residual", report::kp_residual(&setting, *variant, branch, *kp2, config)?)
        }
        Command::CheckIdentity { id, genus, curve, divisor } => {
            let setting = match (curve, divisor) {
                (Some(c), Some(d)) => load(c, d, config)?,
                _ => {
                    let g = genus.ok_or_else(|| Error::Input("pass --genus or --curve and --divisor".into()))?;
                    report::identity_fixture(id, g, config)?
                }
            };
            if let Some(g) = genus {
                if *g != setting.genus() {
                    return Err(Error::Input(format!("--genus {g} but the curve has genus {}", setting.genus())));
                }
            }
            ("check-identity", report::check_identity(&setting, id, config)?)
        }
        Command::BridgeCheck { curve, divisor, a0 } => (
            "bridge-check",
            report::bridge_check(&load(curve, divisor, config)?, *a0)?,
        ),
        Command::GenFixture { genus, constraints, dir } => {
            let (c, d) = report::gen_fixture(*genus, constraints, config.seed)?;
            std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
            let (cp, dp) = (dir.join("curve.json"), dir.join("divisor.json"));
            report::write_json(&cp, &c)?;
            report::write_json(&dp, &d)?;
            let detail = serde_json::json!({"curve": cp, "divisor": dp});
            ("gen-fixture", vec![Entry::info("fixture", detail)])
        }
        Command::Suite { genus } => ("suite", report::suite(*genus, config)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let config = RunConfig {
        mode: g.mode,
        precision: g.precision,
        jet_order: g.jet_order,
        seed: g.seed,
        timing: g.timing,
    };
    let outcome = config.validate().and_then(|_| run(&cli.command, &config));
    match outcome {
        Ok((name, entries)) => {
            let rep = Report::new(name, config, entries);
            let text = rep.to_json_string();
            if let Some(path) = &g.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if g.summary {
                print!("{}", rep.summary());
            } else {
                print!("{text}");
            }
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::exit_code_for(&e) as u8)
        }
    }
}
