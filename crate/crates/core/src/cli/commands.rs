use rayon::prelude::*;

use crate::cavity::{force_psd, CavityParams, Coupling, CouplingKind};
use crate::cli::config::{CouplingChoice, Fault, RunConfig, Series, Theta};
use crate::cli::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::operators::{
    noise_metric_single, noise_metric_single_lossy, noise_metric_two, ToySingleParams, ToyTwoParams,
};
use crate::optimal::{
    angle_power_sweep, angle_sweep, broadband_sweep, g_opt_momentum, g_opt_position, narrowband_sweep,
    theta_opt_momentum, theta_opt_position, theta_opt_single, theta_opt_two, zeta_sql, StrategyConfig, SweepResult,
};
use crate::oracle::{agreement_suite, coefficient_suite, random_toy_cases, OracleConfig, ToyModel};
use crate::squeezed::SqueezeParams;

fn squeeze(s: &Series) -> Result<SqueezeParams> {
    SqueezeParams::new(s.r, s.phi)
}

fn cavity(cfg: &RunConfig) -> Result<CavityParams> {
    let w = cfg.frequency_unit.to_angular();
    CavityParams::new(cfg.mass, w * cfg.omega_m, w * cfg.kappa, w * cfg.gamma)
}

/// Frequency grid in rad/s.
fn angular_grid(cfg: &RunConfig) -> Result<Vec<f64>> {
    let w = cfg.frequency_unit.to_angular();
    Ok(cfg.resolved_grid().points()?.into_iter().map(|nu| w * nu).collect())
}

fn reject_unused(s: &Series, eta2: bool, asym: bool, theta: bool, what: &str) -> Result<()> {
    if !eta2 && s.eta2 != 0.0 {
        return Err(Error::Config(format!("eta2 is not used by {what}")));
    }
    if !asym && s.asym != 1.0 {
        return Err(Error::Config(format!("asym is not used by {what}")));
    }
    if !theta && s.theta != Theta::Fixed(0.0) {
        return Err(Error::Config(format!("{what} chooses theta itself")));
    }
    Ok(())
}

fn toy_value(two: bool, s: &Series, zeta: f64, beta: f64, sq: &SqueezeParams) -> Result<f64> {
    if two {
        let z2 = s.asym * zeta;
        let theta = match s.theta {
            Theta::Fixed(t) => t,
            Theta::Optimal => theta_opt_two(zeta, z2, beta, sq)?,
        };
        noise_metric_two(&ToyTwoParams::new(zeta, z2, beta, theta)?, sq)
    } else {
        let theta = match s.theta {
            Theta::Fixed(t) => t,
            Theta::Optimal => theta_opt_single(zeta, beta, sq)?,
        };
        let p = ToySingleParams::with_loss_fraction(zeta, beta, theta, s.eta2)?;
        if s.eta2 > 0.0 {
            noise_metric_single_lossy(&p, sq)
        } else {
            noise_metric_single(&p, sq)
        }
    }
}

/// `zeta_norm` followed by one `N^2` column per series.
pub fn cmd_toy(cfg: &RunConfig, variant: &str) -> Result<Table> {
    let two = variant == "two";
    let zeta_ref = zeta_sql(cfg.beta)?;
    let grid = cfg.resolved_grid().points()?;
    let mut columns = vec!["zeta_norm".to_string()];
    let mut curves = Vec::with_capacity(cfg.series.len());
    for s in &cfg.series {
        reject_unused(s, !two, two, true, &format!("the {variant}-mode toy model"))?;
        let sq = squeeze(s)?;
        let label = if two {
            format!("N2[r={} phi={} theta={} asym={}]", s.r, s.phi, s.theta, s.asym)
        } else {
            format!("N2[r={} phi={} theta={} eta2={}]", s.r, s.phi, s.theta, s.eta2)
        };
        columns.push(label);
        let values = grid
            .par_iter()
            .map(|x| toy_value(two, s, x * zeta_ref, cfg.beta, &sq))
            .collect::<Result<Vec<f64>>>()?;
        curves.push(values);
    }
    let mut t = Table::new(columns);
    for (i, x) in grid.iter().enumerate() {
        let mut row = vec![Cell::Num(*x)];
        row.extend(curves.iter().map(|c| Cell::Num(c[i])));
        t.push(row);
    }
    Ok(t)
}

/// `nu, shot, backaction, cross, total, theta, coupling` for one series.
pub fn cmd_cavity(cfg: &RunConfig, variant: &str) -> Result<Table> {
    let kind = if variant == "momentum" {
        CouplingKind::Momentum
    } else {
        CouplingKind::Position
    };
    let [s] = cfg.series.as_slice() else {
        return Err(Error::Config("cavity sweeps take exactly one series".into()));
    };
    reject_unused(s, false, false, true, "cavity sweeps")?;
    let p = cavity(cfg)?;
    let sq = squeeze(s)?;
    let w = cfg.frequency_unit.to_angular();
    let grid = angular_grid(cfg)?;
    let rows = grid
        .par_iter()
        .map(|&nu| {
            let g = match (cfg.coupling, kind) {
                (CouplingChoice::Fixed(g), _) => w * g,
                (CouplingChoice::Optimal, CouplingKind::Position) => g_opt_position(&p, nu, cfg.coupling_r)?,
                (CouplingChoice::Optimal, CouplingKind::Momentum) => g_opt_momentum(&p, nu, cfg.coupling_r)?,
            };
            let theta = match (s.theta, kind) {
                (Theta::Fixed(t), _) => t,
                (Theta::Optimal, CouplingKind::Position) => theta_opt_position(&p, g, nu)?,
                (Theta::Optimal, CouplingKind::Momentum) => theta_opt_momentum(&p, g, nu)?,
            };
            let pt = force_psd(&p, &Coupling { kind, value: g }, nu, theta, &sq)?;
            Ok(vec![
                Cell::Num(nu / w),
                Cell::Num(pt.shot),
                Cell::Num(pt.backaction),
                Cell::Num(pt.cross),
                Cell::Num(pt.total),
                Cell::Num(theta),
                Cell::Num(g / w),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = ["nu", "shot", "backaction", "cross", "total", "theta", "coupling"];
    let mut t = Table::new(columns.iter().map(|c| c.to_string()).collect());
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn strategy_table(res: &SweepResult, narrow: bool, w: f64) -> Table {
    let mut columns = vec!["nu".to_string()];
    for c in &res.curves {
        let tag = format!("{}[r={} phi={}]", c.kind.name(), c.squeeze.r(), c.squeeze.phi());
        for q in ["total", "shot", "backaction"] {
            columns.push(format!("{q}_{tag}"));
        }
    }
    // Couplings and angles do not depend on the squeezing, so one column per kind.
    let mut firsts = Vec::new();
    if narrow {
        for kind in [CouplingKind::Position, CouplingKind::Momentum] {
            if let Some(c) = res.curves.iter().find(|c| c.kind == kind) {
                columns.push(format!("coupling_{}", kind.name()));
                columns.push(format!("theta_{}", kind.name()));
                firsts.push(c);
            }
        }
    }
    let mut t = Table::new(columns);
    for (i, nu) in res.nu_grid.iter().enumerate() {
        let mut row = vec![Cell::Num(nu / w)];
        for c in &res.curves {
            let pt = c.records[i].point;
            row.extend([Cell::Num(pt.total), Cell::Num(pt.shot), Cell::Num(pt.backaction)]);
        }
        for c in &firsts {
            row.push(Cell::Num(c.records[i].coupling_used / w));
            row.push(Cell::Num(c.records[i].theta_used));
        }
        t.push(row);
    }
    t
}

pub fn cmd_strategy(cfg: &RunConfig, variant: &str) -> Result<Table> {
    let p = cavity(cfg)?;
    let w = cfg.frequency_unit.to_angular();
    let grid = angular_grid(cfg)?;
    if variant == "angles" {
        let CouplingChoice::Fixed(g) = cfg.coupling else {
            return Err(Error::Config("the angle comparison needs a fixed coupling".into()));
        };
        let by_nu = angle_sweep(&p, w * g, &grid)?;
        let by_power = angle_power_sweep(&p, w * g, w * cfg.angle_nu, &cfg.power_grid.points()?)?;
        let mut t = Table::new(
            ["sweep", "x", "theta_position", "theta_momentum"]
                .iter()
                .map(|c| c.to_string())
                .collect(),
        );
        for (name, rows, unit) in [("nu", by_nu, w), ("power", by_power, 1.0)] {
            for r in rows {
                t.push(vec![
                    name.into(),
                    Cell::Num(r.x / unit),
                    Cell::Num(r.theta_position),
                    Cell::Num(r.theta_momentum),
                ]);
            }
        }
        return Ok(t);
    }
    let what = format!("the {variant} strategy");
    let squeezings = cfg
        .series
        .iter()
        .map(|s| {
            reject_unused(s, false, false, false, &what)?;
            squeeze(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let narrow = variant == "narrowband";
    let mut sc = if narrow {
        StrategyConfig::narrowband(p, grid)
    } else {
        StrategyConfig::broadband(p, w * cfg.target_nu, grid)
    };
    sc.squeezings = squeezings;
    sc.coupling_r = cfg.coupling_r;
    let res = if narrow {
        narrowband_sweep(&sc)?
    } else {
        broadband_sweep(&sc)?
    };
    Ok(strategy_table(&res, narrow, w))
}

fn describe(model: &ToyModel, sq: &SqueezeParams) -> String {
    let tail = format!("r={} phi={}", sq.r(), sq.phi());
    match model {
        ToyModel::Single(p) => format!(
            "single zeta={} beta={} theta={} eta={} {tail}",
            p.zeta, p.beta, p.theta, p.eta
        ),
        ToyModel::Two(p) => format!(
            "two zeta1={} zeta2={} beta={} theta={} {tail}",
            p.zeta1, p.zeta2, p.beta, p.theta
        ),
    }
}

/// Fixed reference cases followed by `draws` randomized ones.
fn verify_cases(cfg: &RunConfig) -> Result<Vec<(ToyModel, SqueezeParams)>> {
    let mut cases = vec![
        (
            ToyModel::Single(ToySingleParams::new(1.0, 1.0, 0.0)?),
            SqueezeParams::vacuum(),
        ),
        (
            ToyModel::Single(ToySingleParams::new(1.0, 1.0, 0.0)?),
            SqueezeParams::new(2.0, std::f64::consts::FRAC_PI_4)?,
        ),
        (
            ToyModel::Two(ToyTwoParams::symmetric(0.5f64.sqrt(), 1.0, 0.0)?),
            SqueezeParams::vacuum(),
        ),
    ];
    let draws = usize::try_from(cfg.draws).map_err(|_| Error::Config("draws too large".into()))?;
    cases.extend(random_toy_cases(cfg.seed, draws)?);
    Ok(cases)
}

pub const VERIFY_SIGMA: f64 = 3.0;
pub const COEFFICIENT_TOL: f64 = 1e-10;

/// Runs the Monte-Carlo and linear-solve suites. Returns the report and the number of failures.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(Table, usize)> {
    let samples = usize::try_from(cfg.samples).map_err(|_| Error::Config("samples too large".into()))?;
    let oracle_cfg = OracleConfig::new(cfg.seed, samples)?;
    let fault = cfg.fault;
    let analytic = |m: &ToyModel, sq: &SqueezeParams| match fault {
        // phi -> -phi flips <{X, Y}> and leaves the variances unchanged.
        Some(Fault::CrossSign) => m.analytic_noise(&SqueezeParams::new(sq.r(), -sq.phi())?),
        None => m.analytic_noise(sq),
    };
    let cases = verify_cases(cfg)?;
    let results = agreement_suite(&cases, &oracle_cfg, analytic)?;

    let p = cavity(cfg)?;
    let nus = [10.0, 150.0, 1e4, 1e6, 1e7];
    let couplings = [1e17, 1e19, 1e21, 1e23];
    let checks = coefficient_suite(&p, &nus, &couplings)?;

    let columns = ["suite", "case", "observed", "expected", "score", "threshold", "status"];
    let mut t = Table::new(columns.iter().map(|c| c.to_string()).collect());
    let mut failures = 0;
    let status = |ok: bool| if ok { "pass" } else { "fail" };
    for r in &results {
        let ok = r.passes(VERIFY_SIGMA);
        failures += usize::from(!ok);
        t.push(vec![
            "oracle".into(),
            describe(&r.model, &r.squeeze).as_str().into(),
            Cell::Num(r.estimate.mean),
            Cell::Num(r.analytic),
            Cell::Num(r.estimate.z_score(r.analytic).abs()),
            Cell::Num(VERIFY_SIGMA),
            status(ok).into(),
        ]);
    }
    for c in &checks {
        let ok = c.max_relative_error <= COEFFICIENT_TOL;
        failures += usize::from(!ok);
        t.push(vec![
            "coefficients".into(),
            format!("{} nu={} coupling={}", c.kind.name(), c.nu, c.coupling)
                .as_str()
                .into(),
            Cell::Num(c.max_relative_error),
            Cell::Num(0.0),
            Cell::Num(c.max_relative_error),
            Cell::Num(COEFFICIENT_TOL),
            status(ok).into(),
        ]);
    }
    let total = results.len() + checks.len();
    t.notes.push(("info.passed".into(), (total - failures).to_string()));
    t.notes.push(("info.failed".into(), failures.to_string()));
    Ok((t, failures))
}
