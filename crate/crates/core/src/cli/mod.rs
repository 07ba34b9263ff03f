//! Command-line front end: `optonoise <toy|cavity|strategy|verify> ...`.

pub mod commands;
pub mod config;
pub mod presets;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use config::{parse_config_text, Command, Fault, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

const AFTER_HELP: &str = "\
Output columns:
  toy single|two            zeta_norm, then N2[...] per series
  cavity position|momentum  nu, shot, backaction, cross, total, theta, coupling
  strategy broadband        nu, then total_/shot_/backaction_<kind>[r phi] per curve
  strategy narrowband       as broadband, plus coupling_<kind>, theta_<kind>
  strategy angles           sweep (nu|power), x, theta_position, theta_momentum
  verify                    suite, case, observed, expected, score, threshold, status

Series: --series 'r=2 phi=pi/4 theta=opt; r=0'. Any of --r --phi --theta --eta2 --asym
replaces the series list with a single series. theta accepts `opt`; coupling accepts `opt`.

Precedence: defaults < preset < --config file < flags. Every output starts with a `#`
header that can be passed back through --config to reproduce the run.

Exit codes: 0 success, 1 verification failure, 2 configuration error.";

#[derive(Debug, Parser)]
#[command(name = "optonoise", version, about = "Quantum noise floors for squeezed-light optomechanical sensing", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Option<Sub>,
    /// Flat `key = value` file; an earlier output file also works.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// lo:hi:n[:log|lin]; zeta/zeta_sql for toy runs, nu otherwise.
    #[arg(long, global = true, value_name = "SPEC")]
    grid: Option<String>,
    #[arg(long, global = true, value_name = "SPEC")]
    power_grid: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    series: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    asym: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mass: Option<String>,
    #[arg(long = "omega-m", global = true, allow_hyphen_values = true)]
    omega_m: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    coupling: Option<String>,
    /// Squeezing assumed when choosing optimal couplings.
    #[arg(long = "coupling-r", global = true, allow_hyphen_values = true)]
    coupling_r: Option<String>,
    #[arg(long = "target-nu", global = true, allow_hyphen_values = true)]
    target_nu: Option<String>,
    #[arg(long = "angle-nu", global = true, allow_hyphen_values = true)]
    angle_nu: Option<String>,
    /// Unit of every frequency and rate setting and output column: rad (default) or hz.
    #[arg(long = "frequency-unit", global = true, value_name = "rad|hz")]
    frequency_unit: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    /// Randomized configurations checked by `verify`.
    #[arg(long, global = true)]
    draws: Option<String>,
    #[arg(long = "inject-fault", global = true, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Pulsed toy model noise versus interaction strength.
    Toy { variant: ToyVariant },
    /// Force-noise spectrum of the single-sided cavity.
    Cavity { variant: CavityVariant },
    /// Search-strategy comparison of position and momentum readout.
    Strategy { variant: StrategyVariant },
    /// Monte-Carlo and linear-solve cross-checks of the analytic results.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ToyVariant {
    Single,
    Two,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CavityVariant {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyVariant {
    Broadband,
    Narrowband,
    Angles,
}

impl Cli {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        let flags: [(&str, &Option<String>); 22] = [
            ("preset", &self.preset),
            ("grid", &self.grid),
            ("power_grid", &self.power_grid),
            ("series", &self.series),
            ("r", &self.r),
            ("phi", &self.phi),
            ("theta", &self.theta),
            ("eta2", &self.eta2),
            ("asym", &self.asym),
            ("beta", &self.beta),
            ("mass", &self.mass),
            ("omega_m", &self.omega_m),
            ("kappa", &self.kappa),
            ("gamma", &self.gamma),
            ("coupling", &self.coupling),
            ("coupling_r", &self.coupling_r),
            ("target_nu", &self.target_nu),
            ("angle_nu", &self.angle_nu),
            ("frequency_unit", &self.frequency_unit),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("draws", &self.draws),
        ];
        let mut pairs: Vec<(String, String)> = flags
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        let (command, variant) = match &self.command {
            Some(Sub::Toy { variant }) => ("toy", format!("{variant:?}")),
            Some(Sub::Cavity { variant }) => ("cavity", format!("{variant:?}")),
            Some(Sub::Strategy { variant }) => ("strategy", format!("{variant:?}")),
            Some(Sub::Verify) => ("verify", "All".to_string()),
            None => return pairs,
        };
        pairs.push(("command".into(), command.into()));
        pairs.push(("variant".into(), variant.to_lowercase()));
        pairs
    }
}

/// Resolves defaults, preset, config file and flag settings, in that order.
pub fn resolve(file_pairs: &[(String, String)], flag_pairs: &[(String, String)]) -> Result<RunConfig> {
    let preset_in =
        |pairs: &[(String, String)]| pairs.iter().rev().find(|(k, _)| k == "preset").map(|(_, v)| v.clone());
    let preset = preset_in(flag_pairs).or_else(|| preset_in(file_pairs));
    let mut cfg = RunConfig::default();
    if let Some(name) = &preset {
        let p = presets::find(name).ok_or_else(|| {
            let known: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
            Error::Config(format!("unknown preset `{name}`; known: {}", known.join(", ")))
        })?;
        for (k, v) in p.settings {
            cfg.set(k, v)?;
        }
    }
    cfg.apply_pairs(file_pairs)?;
    cfg.apply_pairs(flag_pairs)?;
    cfg.preset = preset;
    let command = cfg
        .command
        .ok_or_else(|| Error::Config("no command given (toy, cavity, strategy, verify) and no preset".into()))?;
    if command == Command::Verify {
        cfg.variant = Some("all".into());
    }
    match cfg.variant.as_deref() {
        Some(v) if command.variants().contains(&v) => Ok(cfg),
        other => Err(Error::Config(format!(
            "`{}` needs one of {:?}, got {:?}",
            command.name(),
            command.variants(),
            other
        ))),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(failures) if failures > 0 => {
            let _ = writeln!(stderr, "verification failed: {failures} check(s)");
            EXIT_VERIFY_FAILED
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<usize> {
    let file_pairs = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    let mut cfg = resolve(&file_pairs, &cli.flag_pairs())?;
    cfg.fault = match cli.inject_fault.as_deref() {
        None => None,
        Some("cross-sign") => Some(Fault::CrossSign),
        Some(other) => return Err(Error::Config(format!("unknown fault `{other}`"))),
    };
    let variant = cfg.variant.clone().unwrap_or_default();
    let (table, failures) = match cfg.command {
        Some(Command::Toy) => (commands::cmd_toy(&cfg, &variant)?, 0),
        Some(Command::Cavity) => (commands::cmd_cavity(&cfg, &variant)?, 0),
        Some(Command::Strategy) => (commands::cmd_strategy(&cfg, &variant)?, 0),
        Some(Command::Verify) => commands::cmd_verify(&cfg)?,
        None => unreachable!("resolve requires a command"),
    };
    let text = table.render(&cfg);
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?
        }
        None => match stdout.write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(Error::Config(format!("cannot write output: {e}")))
            }
            _ => {}
        },
    }
    Ok(failures)
}
