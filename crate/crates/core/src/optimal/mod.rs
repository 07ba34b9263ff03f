//! Optimal quadrature angles and probe strengths, and the search-strategy sweeps built on them.
//!
//! Closed forms are the production path; [`golden`] provides the numerical check.

mod cavity;
pub mod golden;
pub mod strategy;
mod toy;

pub use cavity::{
    g_opt_momentum, g_opt_position, pure_shot_momentum, pure_shot_position, theta_opt_momentum, theta_opt_position,
};
pub use strategy::{
    angle_power_sweep, angle_sweep, broadband_sweep, frequency_grid, narrowband_sweep, validate_grid, AngleRecord,
    StrategyConfig, StrategyMode, SweepCurve, SweepRecord, SweepResult,
};
pub use toy::{sql_single, sql_two, theta_opt_single, theta_opt_two, zeta_sql, SqlPoint};
