//! Conversions from laboratory parameters to the dimensionless toy-model knobs.

use crate::constants::{HBAR, K_B};
use crate::error::{require_at_least, require_positive, Result};
use crate::squeezed::SqueezeParams;

/// `zeta = alpha * mu` with `mu ~ g / kappa` (both rates in the same units).
pub fn zeta_from_physical(alpha: f64, g: f64, kappa: f64) -> Result<f64> {
    require_at_least("alpha", alpha, 0.0)?;
    require_at_least("g", g, 0.0)?;
    require_positive("kappa", kappa)?;
    Ok(alpha * g / kappa)
}

/// Thermal de Broglie length `sqrt(hbar^2 / (2 m k_B T))`, in meters.
pub fn de_broglie_length(mass: f64, temperature: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("temperature", temperature)?;
    Ok((HBAR * HBAR / (2.0 * mass * K_B * temperature)).sqrt())
}

/// Free-evolution factor `beta = hbar t / (m lambda^2) = 2 k_B T t / hbar` for a free mass.
pub fn beta_from_physical(time: f64, mass: f64, temperature: f64) -> Result<f64> {
    require_positive("time", time)?;
    let lambda = de_broglie_length(mass, temperature)?;
    Ok(HBAR * time / (mass * lambda * lambda))
}

/// Default margin: displacement photons must exceed squeezed-vacuum photons 100-fold.
pub const DEFAULT_LINEARIZATION_MARGIN: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationReport {
    /// Photons from the displacement, `alpha^2`.
    pub photons: f64,
    /// Photons in the squeezed vacuum, `sinh^2 r`.
    pub vacuum_photons: f64,
    /// `photons / vacuum_photons`; `None` when the vacuum is unsqueezed.
    pub ratio: Option<f64>,
    pub margin: f64,
    pub passes: bool,
    /// True when the check passed only because there is no squeezed-vacuum population.
    pub by_convention: bool,
}

/// Checks that the linearized interaction is valid, i.e. `alpha^2 >= margin * sinh^2 r`.
pub fn linearization_check(alpha: f64, sq: &SqueezeParams, margin: f64) -> Result<LinearizationReport> {
    require_at_least("alpha", alpha, 0.0)?;
    require_positive("margin", margin)?;
    let photons = alpha * alpha;
    let vacuum_photons = sq.vacuum_photons();
    let (ratio, passes, by_convention) = if vacuum_photons == 0.0 {
        (None, true, true)
    } else {
        let ratio = photons / vacuum_photons;
        (Some(ratio), ratio >= margin, false)
    };
    Ok(LinearizationReport {
        photons,
        vacuum_photons,
        ratio,
        margin,
        passes,
        by_convention,
    })
}
