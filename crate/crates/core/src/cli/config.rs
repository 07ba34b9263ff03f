//! Run configuration: defaults, presets, `key = value` files and flags, in increasing precedence.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::optimal::frequency_grid;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// First header line of every output; marks a file whose `#` lines carry configuration.
pub fn header_marker() -> String {
    format!("optonoise {VERSION}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Toy,
    Cavity,
    Strategy,
    Verify,
}

impl Command {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(Command::Toy),
            "cavity" => Ok(Command::Cavity),
            "strategy" => Ok(Command::Strategy),
            "verify" => Ok(Command::Verify),
            _ => Err(Error::Config(format!("unknown command `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Toy => "toy",
            Command::Cavity => "cavity",
            Command::Strategy => "strategy",
            Command::Verify => "verify",
        }
    }

    pub fn variants(self) -> &'static [&'static str] {
        match self {
            Command::Toy => &["single", "two"],
            Command::Cavity => &["position", "momentum"],
            Command::Strategy => &["broadband", "narrowband", "angles"],
            Command::Verify => &["all"],
        }
    }
}

/// A quadrature angle, or the per-point optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Fixed(f64),
    Optimal,
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Fixed(t) => write!(f, "{t}"),
            Theta::Optimal => f.write_str("opt"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    pub r: f64,
    pub phi: f64,
    pub theta: Theta,
    pub eta2: f64,
    /// `zeta2 / zeta1` for the two-mode model.
    pub asym: f64,
}

impl Default for Series {
    fn default() -> Self {
        Self {
            r: 0.0,
            phi: 0.0,
            theta: Theta::Fixed(0.0),
            eta2: 0.0,
            asym: 1.0,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} phi={} theta={} eta2={} asym={}",
            self.r, self.phi, self.theta, self.eta2, self.asym
        )
    }
}

impl Series {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "r" => self.r = parse_number(key, value)?,
            "phi" => self.phi = parse_angle(key, value)?,
            "theta" => self.theta = parse_theta(value)?,
            "eta2" => self.eta2 = parse_number(key, value)?,
            "asym" => self.asym = parse_number(key, value)?,
            _ => return Err(Error::Config(format!("unknown series key `{key}`"))),
        }
        Ok(())
    }

    /// `"r=2 phi=pi/4; r=0"`: series separated by `;`, fields by whitespace.
    pub fn parse_list(text: &str) -> Result<Vec<Series>> {
        let mut out = Vec::new();
        for chunk in text.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let mut s = Series::default();
            for field in chunk.split_whitespace() {
                let (k, v) = field
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("series field `{field}` is not key=value")))?;
                s.set(k, v)?;
            }
            out.push(s);
        }
        if out.is_empty() {
            return Err(Error::Config("series list is empty".into()));
        }
        Ok(out)
    }

    pub fn format_list(list: &[Series]) -> String {
        list.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl GridSpec {
    pub const fn log(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n, log: true }
    }

    /// `lo:hi:n[:log|lin]`, log spacing by default.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Config(format!("grid `{text}` is not lo:hi:n[:log|lin]")));
        }
        let lo = parse_number("grid lo", parts[0])?;
        let hi = parse_number("grid hi", parts[1])?;
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("grid point count `{}` is not an integer", parts[2])))?;
        let log = match parts.get(3).map(|s| s.trim()) {
            None | Some("log") => true,
            Some("lin") => false,
            Some(other) => return Err(Error::Config(format!("grid spacing `{other}` is not log or lin"))),
        };
        let g = Self { lo, hi, n, log };
        g.points()?;
        Ok(g)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        frequency_grid(self.lo, self.hi, self.n, self.log).map_err(|e| Error::Config(e.to_string()))
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.lo,
            self.hi,
            self.n,
            if self.log { "log" } else { "lin" }
        )
    }
}

/// Parses a float, also accepting `pi`, `-pi/4`, `2*pi` and similar.
pub fn parse_angle(name: &str, text: &str) -> Result<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return check_finite(name, v);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let bad = || Error::Config(format!("{name}: cannot parse `{text}`"));
    let value = if let Some((num, den)) = body.split_once('/') {
        let numerator = pi_term(num).ok_or_else(bad)?;
        numerator / den.trim().parse::<f64>().map_err(|_| bad())?
    } else {
        pi_term(body).ok_or_else(bad)?
    };
    check_finite(name, sign * value)
}

fn pi_term(s: &str) -> Option<f64> {
    let s = s.trim();
    if s == "pi" {
        return Some(PI);
    }
    let k = s.strip_suffix("pi")?.trim().trim_end_matches('*');
    k.trim().parse::<f64>().ok().map(|k| k * PI)
}

pub fn parse_number(name: &str, text: &str) -> Result<f64> {
    let v = text
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{name}: `{text}` is not a number")))?;
    check_finite(name, v)
}

fn check_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name}: value must be finite")))
    }
}

fn parse_theta(text: &str) -> Result<Theta> {
    if text.trim() == "opt" {
        Ok(Theta::Optimal)
    } else {
        parse_angle("theta", text).map(Theta::Fixed)
    }
}

fn parse_u64(name: &str, text: &str) -> Result<u64> {
    text.trim()
        .parse::<u64>()
        .map_err(|_| Error::Config(format!("{name}: `{text}` is not a non-negative integer")))
}

/// Fixed number or per-frequency optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingChoice {
    Fixed(f64),
    Optimal,
}

impl fmt::Display for CouplingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingChoice::Fixed(g) => write!(f, "{g}"),
            CouplingChoice::Optimal => f.write_str("opt"),
        }
    }
}

/// Test hook for the verifier: evaluate the analytic side with the cross-correlator sign flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    CrossSign,
}

/// Unit in which frequency and rate settings are read and frequency columns are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    /// Angular frequency, used as given.
    #[default]
    Rad,
    /// Cycles per second, converted with a factor of 2 pi.
    Hz,
}

impl FrequencyUnit {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "rad" => Ok(Self::Rad),
            "hz" => Ok(Self::Hz),
            _ => Err(Error::Config(format!(
                "frequency_unit must be `rad` or `hz`, got `{text}`"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Rad => "rad",
            Self::Hz => "hz",
        }
    }

    /// Multiplier from this unit to rad/s.
    pub fn to_angular(self) -> f64 {
        match self {
            Self::Rad => 1.0,
            Self::Hz => std::f64::consts::TAU,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub variant: Option<String>,
    pub preset: Option<String>,
    pub beta: f64,
    pub series: Vec<Series>,
    /// Resolved per command when absent.
    pub grid: Option<GridSpec>,
    pub power_grid: GridSpec,
    pub angle_nu: f64,
    pub mass: f64,
    pub omega_m: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub coupling: CouplingChoice,
    pub coupling_r: f64,
    pub target_nu: f64,
    pub frequency_unit: FrequencyUnit,
    pub seed: u64,
    pub samples: u64,
    pub draws: u64,
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            variant: None,
            preset: None,
            beta: 1.0,
            series: vec![Series::default()],
            grid: None,
            power_grid: GridSpec::log(1e-4, 1e10, 400),
            angle_nu: 1e4,
            mass: 1e-6,
            omega_m: 100.0,
            kappa: 1e6,
            gamma: 1e-4,
            coupling: CouplingChoice::Fixed(1e21),
            coupling_r: 0.0,
            target_nu: 1e6,
            frequency_unit: FrequencyUnit::Rad,
            seed: 42,
            samples: 1_000_000,
            draws: 50,
            fault: None,
        }
    }
}

/// Keys that describe the run environment rather than the run; accepted and ignored on input.
const INFO_PREFIXES: [&str; 3] = ["convention.", "rng", "info."];

/// Keys that set one field of a single series and replace any series list.
pub const SERIES_KEYS: [&str; 5] = ["r", "phi", "theta", "eta2", "asym"];

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "command" => self.command = Some(Command::parse(value)?),
            "variant" => self.variant = Some(value.to_string()),
            "preset" => self.preset = Some(value.to_string()),
            "beta" => self.beta = parse_number(key, value)?,
            "series" => self.series = Series::parse_list(value)?,
            "grid" => self.grid = Some(GridSpec::parse(value)?),
            "power_grid" => self.power_grid = GridSpec::parse(value)?,
            "angle_nu" => self.angle_nu = parse_number(key, value)?,
            "mass" => self.mass = parse_number(key, value)?,
            "omega_m" => self.omega_m = parse_number(key, value)?,
            "kappa" => self.kappa = parse_number(key, value)?,
            "gamma" => self.gamma = parse_number(key, value)?,
            "coupling" => {
                self.coupling = if value == "opt" {
                    CouplingChoice::Optimal
                } else {
                    CouplingChoice::Fixed(parse_number(key, value)?)
                }
            }
            "coupling_r" => self.coupling_r = parse_number(key, value)?,
            "target_nu" => self.target_nu = parse_number(key, value)?,
            "frequency_unit" => self.frequency_unit = FrequencyUnit::parse(value)?,
            "seed" => self.seed = parse_u64(key, value)?,
            "samples" => self.samples = parse_u64(key, value)?,
            "draws" => self.draws = parse_u64(key, value)?,
            k if INFO_PREFIXES.iter().any(|p| k.starts_with(p)) => {}
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies several series fields at once as a single series.
    pub fn set_single_series(&mut self, fields: &[(&str, &str)]) -> Result<()> {
        if fields.is_empty() {
            return Ok(());
        }
        let mut s = Series::default();
        for (k, v) in fields {
            s.set(k, v)?;
        }
        self.series = vec![s];
        Ok(())
    }

    pub fn apply_pairs(&mut self, pairs: &[(String, String)]) -> Result<()> {
        let series: Vec<(&str, &str)> = pairs
            .iter()
            .filter(|(k, _)| SERIES_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        for (k, v) in pairs.iter().filter(|(k, _)| !SERIES_KEYS.contains(&k.as_str())) {
            self.set(k, v)?;
        }
        self.set_single_series(&series)
    }

    /// Grid used when none is configured.
    pub fn default_grid(&self) -> GridSpec {
        match (self.command, self.variant.as_deref()) {
            (Some(Command::Toy), _) => GridSpec::log(0.1, 10.0, 400),
            (Some(Command::Strategy), Some("narrowband")) => GridSpec::log(1.0, 1e7, 400),
            _ => GridSpec::log(1e3, 1e7, 400),
        }
    }

    pub fn resolved_grid(&self) -> GridSpec {
        self.grid.unwrap_or_else(|| self.default_grid())
    }

    /// Resolved settings as `key = value` lines, in a stable order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, val: String| v.push((k.to_string(), val));
        if let Some(c) = self.command {
            push("command", c.name().to_string());
        }
        if let Some(var) = &self.variant {
            push("variant", var.clone());
        }
        if let Some(p) = &self.preset {
            push("preset", p.clone());
        }
        push("beta", self.beta.to_string());
        push("series", Series::format_list(&self.series));
        push("grid", self.resolved_grid().to_string());
        push("power_grid", self.power_grid.to_string());
        push("angle_nu", self.angle_nu.to_string());
        push("mass", self.mass.to_string());
        push("omega_m", self.omega_m.to_string());
        push("kappa", self.kappa.to_string());
        push("gamma", self.gamma.to_string());
        push("coupling", self.coupling.to_string());
        push("coupling_r", self.coupling_r.to_string());
        push("target_nu", self.target_nu.to_string());
        push("frequency_unit", self.frequency_unit.name().to_string());
        push("seed", self.seed.to_string());
        push("samples", self.samples.to_string());
        push("draws", self.draws.to_string());
        v
    }
}

/// Parses `key = value` text. `#` starts a comment line. If the first line is the
/// output header marker, the `#`-prefixed header block is read as configuration instead.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut lines = text.lines().peekable();
    let header_mode = lines
        .peek()
        .map(|l| l.trim_start_matches('#').trim() == header_marker())
        .unwrap_or(false);
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = if header_mode {
            match raw.strip_prefix('#') {
                Some(rest) => rest.trim(),
                None => break,
            }
        } else {
            let l = raw.trim();
            if l.starts_with('#') {
                continue;
            }
            l
        };
        if line.is_empty() || (header_mode && n == 0) {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got `{line}`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
