//! Frequency sweeps comparing position and momentum readout under two search strategies.
//!
//! * Broadband: one fixed power, chosen to reach the SQL at a target frequency, and `theta = 0`.
//! * Narrowband: power and quadrature angle re-optimized at every frequency.

use rayon::prelude::*;

use crate::cavity::{force_psd_momentum, force_psd_position, CavityParams, CouplingKind, SpectrumPoint};
use crate::error::{require_at_least, Error, Result};
use crate::optimal::cavity::{g_opt_momentum, g_opt_position, theta_opt_momentum, theta_opt_position};
use crate::squeezed::SqueezeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyMode {
    Broadband,
    Narrowband,
}

impl StrategyMode {
    pub fn name(self) -> &'static str {
        match self {
            StrategyMode::Broadband => "broadband",
            StrategyMode::Narrowband => "narrowband",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub mode: StrategyMode,
    pub kinds: Vec<CouplingKind>,
    /// Broadband only: frequency at which the fixed power balances shot noise and backaction.
    pub target_nu: Option<f64>,
    pub nu_grid: Vec<f64>,
    /// One curve per entry and coupling kind.
    pub squeezings: Vec<SqueezeParams>,
    pub cavity: CavityParams,
    /// Squeezing strength used when choosing the power. Keeping it at 0 lets the
    /// squeezed curves run at the coherent-state optimum, so squeezing lowers the noise
    /// instead of the power.
    pub coupling_r: f64,
}

impl StrategyConfig {
    /// Position and momentum at `r = 0` and `r = 2`, `phi = 0`.
    pub fn broadband(cavity: CavityParams, target_nu: f64, nu_grid: Vec<f64>) -> Self {
        Self {
            mode: StrategyMode::Broadband,
            kinds: vec![CouplingKind::Position, CouplingKind::Momentum],
            target_nu: Some(target_nu),
            nu_grid,
            squeezings: default_squeezings(),
            cavity,
            coupling_r: 0.0,
        }
    }

    pub fn narrowband(cavity: CavityParams, nu_grid: Vec<f64>) -> Self {
        Self {
            mode: StrategyMode::Narrowband,
            kinds: vec![CouplingKind::Position, CouplingKind::Momentum],
            target_nu: None,
            nu_grid,
            squeezings: default_squeezings(),
            cavity,
            coupling_r: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cavity.validate()?;
        require_at_least("coupling_r", self.coupling_r, 0.0)?;
        validate_grid(&self.nu_grid)?;
        if self.kinds.is_empty() || self.squeezings.is_empty() {
            return Err(Error::invalid(
                "strategy",
                "needs at least one coupling kind and squeezing",
            ));
        }
        if self.mode == StrategyMode::Broadband {
            let t = self
                .target_nu
                .ok_or_else(|| Error::invalid("target_nu", "broadband sweep needs a target frequency"))?;
            let (lo, hi) = (self.nu_grid[0], self.nu_grid[self.nu_grid.len() - 1]);
            if !(lo..=hi).contains(&t) {
                return Err(Error::invalid(
                    "target_nu",
                    format!("{t:e} outside grid span [{lo:e}, {hi:e}]"),
                ));
            }
        }
        Ok(())
    }
}

fn default_squeezings() -> Vec<SqueezeParams> {
    vec![
        SqueezeParams::vacuum(),
        SqueezeParams::new(2.0, 0.0).expect("static squeezing"),
    ]
}

/// Grids must be strictly increasing and positive.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("nu_grid", "empty"));
    }
    if grid.iter().any(|nu| !(nu.is_finite() && *nu > 0.0)) {
        return Err(Error::invalid("nu_grid", "frequencies must be finite and positive"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("nu_grid", "must be strictly increasing"));
    }
    Ok(())
}

/// `n` points from `lo` to `hi` inclusive, log- or linearly spaced.
pub fn frequency_grid(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("grid", "needs at least one point"));
    }
    if !(lo.is_finite() && hi.is_finite()) || hi < lo || (n > 1 && hi == lo) {
        return Err(Error::invalid("grid", format!("bad span [{lo}, {hi}]")));
    }
    if log && lo <= 0.0 {
        return Err(Error::invalid("grid", "log spacing needs lo > 0"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = |k: usize| k as f64 / (n - 1) as f64;
    let mut g: Vec<f64> = if log {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n).map(|k| (a + (b - a) * step(k)).exp()).collect()
    } else {
        (0..n).map(|k| lo + (hi - lo) * step(k)).collect()
    };
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub theta_used: f64,
    pub coupling_used: f64,
    pub point: SpectrumPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub kind: CouplingKind,
    pub squeeze: SqueezeParams,
    pub records: Vec<SweepRecord>,
}

impl SweepCurve {
    pub fn totals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.point.total).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub mode: StrategyMode,
    pub nu_grid: Vec<f64>,
    pub curves: Vec<SweepCurve>,
}

impl SweepResult {
    pub fn curve(&self, kind: CouplingKind, r: f64) -> Option<&SweepCurve> {
        self.curves.iter().find(|c| c.kind == kind && c.squeeze.r() == r)
    }
}

fn evaluate(
    cavity: &CavityParams,
    kind: CouplingKind,
    nu: f64,
    coupling: f64,
    theta: f64,
    sq: &SqueezeParams,
) -> Result<SweepRecord> {
    let point = match kind {
        CouplingKind::Position => force_psd_position(cavity, coupling, nu, theta, sq)?,
        CouplingKind::Momentum => force_psd_momentum(cavity, coupling, nu, theta, sq)?,
    };
    if !point.total.is_finite() {
        return Err(Error::invalid("spectrum", format!("non-finite total at nu = {nu:e}")));
    }
    Ok(SweepRecord {
        theta_used: theta,
        coupling_used: coupling,
        point,
    })
}

fn sweep(cfg: &StrategyConfig, choose: impl Fn(CouplingKind, f64) -> Result<(f64, f64)> + Sync) -> Result<SweepResult> {
    let mut curves = Vec::with_capacity(cfg.kinds.len() * cfg.squeezings.len());
    for &kind in &cfg.kinds {
        for sq in &cfg.squeezings {
            let records = cfg
                .nu_grid
                .par_iter()
                .map(|&nu| {
                    let (coupling, theta) = choose(kind, nu)?;
                    evaluate(&cfg.cavity, kind, nu, coupling, theta, sq)
                })
                .collect::<Result<Vec<_>>>()?;
            curves.push(SweepCurve {
                kind,
                squeeze: *sq,
                records,
            });
        }
    }
    Ok(SweepResult {
        mode: cfg.mode,
        nu_grid: cfg.nu_grid.clone(),
        curves,
    })
}

/// Fixed `G = g_opt_position(target_nu)`, `G' = G/(m kappa)`, `theta = 0`.
pub fn broadband_sweep(cfg: &StrategyConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let target = cfg
        .target_nu
        .ok_or_else(|| Error::invalid("target_nu", "broadband sweep needs a target frequency"))?;
    let g = g_opt_position(&cfg.cavity, target, cfg.coupling_r)?;
    let g_prime = g / (cfg.cavity.mass * cfg.cavity.kappa);
    sweep(cfg, |kind, _| {
        Ok(match kind {
            CouplingKind::Position => (g, 0.0),
            CouplingKind::Momentum => (g_prime, 0.0),
        })
    })
}

/// Per-frequency optimal coupling and quadrature angle.
pub fn narrowband_sweep(cfg: &StrategyConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let (p, r) = (&cfg.cavity, cfg.coupling_r);
    sweep(cfg, |kind, nu| match kind {
        CouplingKind::Position => {
            let g = g_opt_position(p, nu, r)?;
            Ok((g, theta_opt_position(p, g, nu)?))
        }
        CouplingKind::Momentum => {
            let g = g_opt_momentum(p, nu, r)?;
            Ok((g, theta_opt_momentum(p, g, nu)?))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRecord {
    /// Frequency or normalized power, depending on the sweep.
    pub x: f64,
    pub theta_position: f64,
    pub theta_momentum: f64,
}

/// Optimal angles over frequency at fixed `G`, with `G' = G/(m kappa)`.
pub fn angle_sweep(cavity: &CavityParams, g: f64, nu_grid: &[f64]) -> Result<Vec<AngleRecord>> {
    validate_grid(nu_grid)?;
    let g_prime = g / (cavity.mass * cavity.kappa);
    nu_grid
        .par_iter()
        .map(|&nu| {
            Ok(AngleRecord {
                x: nu,
                theta_position: theta_opt_position(cavity, g, nu)?,
                theta_momentum: theta_opt_momentum(cavity, g_prime, nu)?,
            })
        })
        .collect()
}

/// Optimal angles at fixed `nu` over normalized power `P = G^2 / g_ref^2`.
pub fn angle_power_sweep(cavity: &CavityParams, g_ref: f64, nu: f64, power_grid: &[f64]) -> Result<Vec<AngleRecord>> {
    validate_grid(power_grid)?;
    power_grid
        .par_iter()
        .map(|&power| {
            let g = g_ref * power.sqrt();
            Ok(AngleRecord {
                x: power,
                theta_position: theta_opt_position(cavity, g, nu)?,
                theta_momentum: theta_opt_momentum(cavity, g / (cavity.mass * cavity.kappa), nu)?,
            })
        })
        .collect()
}
