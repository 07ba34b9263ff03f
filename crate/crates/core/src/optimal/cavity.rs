//! Closed-form quadrature angles and couplings for the cavity spectra.

use crate::cavity::{susceptibilities, CavityParams};
use crate::constants::HBAR;
use crate::error::{require_at_least, Error, Result};
use crate::squeezed::{single_mode_moments, SqueezeParams};

/// `arctan[hbar G^2 m |chi_c|^2 |chi_m|^2 (nu^2 - omega_m^2)]`.
pub fn theta_opt_position(p: &CavityParams, g: f64, nu: f64) -> Result<f64> {
    let s = susceptibilities(p, nu)?;
    let arg = HBAR * g * g * p.mass * s.chi_c.norm_sqr() * s.chi_m.norm_sqr() * (nu * nu - p.omega_m * p.omega_m);
    Ok(arg.atan())
}

/// `arctan[hbar G'^2 m^3 omega_m^2 |chi_c|^2 |chi_m|^2 (nu^2 - omega_m^2)]`.
pub fn theta_opt_momentum(p: &CavityParams, g_prime: f64, nu: f64) -> Result<f64> {
    let s = susceptibilities(p, nu)?;
    let w2 = p.omega_m * p.omega_m;
    let arg = HBAR * g_prime * g_prime * p.mass.powi(3) * w2 * s.chi_c.norm_sqr() * s.chi_m.norm_sqr() * (nu * nu - w2);
    Ok(arg.atan())
}

/// Coupling balancing shot noise and backaction at `theta = 0`: `e^{-r} / (sqrt(hbar) |chi_m|^{1/2} |chi_c|)`.
pub fn g_opt_position(p: &CavityParams, nu: f64, r: f64) -> Result<f64> {
    require_at_least("r", r, 0.0)?;
    let s = susceptibilities(p, nu)?;
    Ok((-r).exp() / (HBAR.sqrt() * s.chi_m.norm().sqrt() * s.chi_c.norm()))
}

/// `g_opt_position / (m omega_m)`. A free particle has no momentum backaction, so no optimum.
pub fn g_opt_momentum(p: &CavityParams, nu: f64, r: f64) -> Result<f64> {
    if p.omega_m == 0.0 {
        return Err(Error::invalid(
            "omega_m",
            "momentum coupling has no finite optimum for a free mass",
        ));
    }
    Ok(g_opt_position(p, nu, r)? / (p.mass * p.omega_m))
}

/// Shot-noise-only position PSD, `<Y^2> / (G^2 |chi_c|^2 |chi_m|^2)`; the total at `theta_opt` as `gamma -> 0`.
pub fn pure_shot_position(p: &CavityParams, g: f64, nu: f64, sq: &SqueezeParams) -> Result<f64> {
    let s = susceptibilities(p, nu)?;
    Ok(single_mode_moments(sq).yy / (g * g * s.chi_c.norm_sqr() * s.chi_m.norm_sqr()))
}

/// Shot-noise-only momentum PSD, `<Y^2> / (G'^2 m^2 nu^2 |chi_c|^2 |chi_m|^2)`.
pub fn pure_shot_momentum(p: &CavityParams, g_prime: f64, nu: f64, sq: &SqueezeParams) -> Result<f64> {
    if nu == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let s = susceptibilities(p, nu)?;
    let k = g_prime * g_prime * p.mass * p.mass * nu * nu * s.chi_c.norm_sqr() * s.chi_m.norm_sqr();
    Ok(single_mode_moments(sq).yy / k)
}
