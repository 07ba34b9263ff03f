//! Optimal quadrature angles and SQL points of the pulsed toy models.

use crate::error::{require_positive, Error, Result};
use crate::operators::toy::{residual_single, residual_two, single_mode_correlators, two_mode_correlators};
use crate::operators::{CorrelatorMatrix, OperatorVector, ToySingleParams, ToyTwoParams};
use crate::squeezed::{single_mode_moments, two_mode_moments, SqueezeParams};

/// Minimum of the phase-quadrature (`theta = 0`) noise over the interaction strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlPoint {
    /// Optimal `zeta` (per mode for the two-mode model).
    pub zeta: f64,
    pub noise: f64,
}

/// `zeta` at which a coherent probe reaches the single-mode SQL, `1/sqrt(beta)`.
pub fn zeta_sql(beta: f64) -> Result<f64> {
    Ok(1.0 / require_positive("beta", beta)?.sqrt())
}

/// `zeta^4 = <Y^2> / (beta^2 <X^2>)`, `N^2 = beta sqrt(<X^2><Y^2>)/2 + beta <{X,Y}>/4`.
pub fn sql_single(beta: f64, sq: &SqueezeParams) -> Result<SqlPoint> {
    require_positive("beta", beta)?;
    let m = single_mode_moments(sq);
    Ok(SqlPoint {
        zeta: (m.yy / (beta * beta * m.xx)).powf(0.25),
        noise: 0.5 * beta * (m.xx * m.yy).sqrt() + 0.25 * beta * m.xy_anti,
    })
}

/// Symmetric two-mode drive, in terms of the difference quadratures `dX = X1 - X2`, `dY = Y1 - Y2`.
pub fn sql_two(beta: f64, sq: &SqueezeParams) -> Result<SqlPoint> {
    require_positive("beta", beta)?;
    let m = two_mode_moments(sq);
    Ok(SqlPoint {
        zeta: (m.dyy() / (4.0 * beta * beta * m.dxx())).powf(0.25),
        noise: 0.25 * beta * (m.dxx() * m.dyy()).sqrt() + 0.125 * beta * m.dxy_anti(),
    })
}

/// The residual is affine in `t = tan(theta)`: `u + t w`. Returns `t` minimizing its variance.
fn best_tan(residual_at: impl Fn(f64) -> Result<OperatorVector>, c: &CorrelatorMatrix) -> Result<f64> {
    let u = residual_at(0.0)?;
    let w = &residual_at(std::f64::consts::FRAC_PI_4)? - &u;
    let ww = c.quadratic_form(&w)?;
    if ww <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    let uw = 0.5 * (c.quadratic_form(&(&u + &w))? - c.quadratic_form(&u)? - ww);
    Ok(-uw / ww)
}

/// Quadrature angle minimizing the single-mode noise; `-arctan(zeta^2 beta)` for an unsqueezed
/// or phase-squeezed probe.
pub fn theta_opt_single(zeta: f64, beta: f64, sq: &SqueezeParams) -> Result<f64> {
    let residual_at = |theta| residual_single(&ToySingleParams::new(zeta, beta, theta)?);
    let c = single_mode_correlators(residual_at(0.0)?.basis(), sq)?;
    Ok(best_tan(residual_at, &c)?.atan())
}

/// Two-mode counterpart; `-arctan(2 zeta^2 beta)` in the symmetric unsqueezed case.
pub fn theta_opt_two(zeta1: f64, zeta2: f64, beta: f64, sq: &SqueezeParams) -> Result<f64> {
    let residual_at = |theta| residual_two(&ToyTwoParams::new(zeta1, zeta2, beta, theta)?);
    let c = two_mode_correlators(residual_at(0.0)?.basis(), sq)?;
    Ok(best_tan(residual_at, &c)?.atan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{noise_metric_single, noise_metric_two};
    use crate::optimal::golden::{golden_section, golden_section_log};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn coherent_sql() {
        let p = sql_single(1.0, &SqueezeParams::vacuum()).unwrap();
        assert_eq!(p.zeta, 1.0);
        assert_eq!(p.noise, 0.25);
        let p = sql_two(1.0, &SqueezeParams::vacuum()).unwrap();
        assert_relative_eq!(p.zeta * p.zeta, 0.5, max_relative = 1e-15);
        assert_relative_eq!(p.noise, 0.25, max_relative = 1e-15);
        assert_eq!(zeta_sql(4.0).unwrap(), 0.5);
    }

    #[test]
    fn squeezing_moves_the_optimum_not_the_floor() {
        let sq = SqueezeParams::new(2.0, 0.0).unwrap();
        let p = sql_single(1.0, &sq).unwrap();
        assert_relative_eq!(p.zeta * p.zeta, (-4.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(p.noise, 0.25, max_relative = 1e-12);
    }

    #[test]
    fn unsqueezed_angles() {
        for (zeta, beta) in [(1.0, 1.0), (0.3, 2.5), (2.0, 0.1)] {
            let t = theta_opt_single(zeta, beta, &SqueezeParams::vacuum()).unwrap();
            assert_relative_eq!(t, -(zeta * zeta * beta).atan(), max_relative = 1e-12);
            let t = theta_opt_two(zeta, zeta, beta, &SqueezeParams::vacuum()).unwrap();
            assert_relative_eq!(t, -(2.0 * zeta * zeta * beta).atan(), max_relative = 1e-12);
        }
    }

    #[test]
    fn beta_must_be_positive() {
        assert!(sql_single(0.0, &SqueezeParams::vacuum()).is_err());
        assert!(sql_two(-1.0, &SqueezeParams::vacuum()).is_err());
    }

    proptest! {
        #[test]
        fn single_sql_matches_search(beta in 0.05f64..20.0, r in 0.0f64..2.0, phi in -1.5f64..1.5) {
            let sq = SqueezeParams::new(r, phi).unwrap();
            let p = sql_single(beta, &sq).unwrap();
            let f = |z: f64| noise_metric_single(&ToySingleParams::new(z, beta, 0.0).unwrap(), &sq).unwrap();
            let m = golden_section_log(f, p.zeta / 100.0, p.zeta * 100.0, 1e-12).unwrap();
            prop_assert!((m.value - p.noise).abs() <= 1e-9 * p.noise.abs().max(1e-3));
            prop_assert!(p.noise <= m.value + 1e-12 * p.noise.abs());
            prop_assert!((m.x / p.zeta - 1.0).abs() < 1e-5);
        }

        #[test]
        fn two_sql_matches_search(beta in 0.05f64..20.0, r in 0.0f64..2.0, phi in -1.5f64..1.5) {
            let sq = SqueezeParams::new(r, phi).unwrap();
            let p = sql_two(beta, &sq).unwrap();
            let f = |z: f64| noise_metric_two(&ToyTwoParams::symmetric(z, beta, 0.0).unwrap(), &sq).unwrap();
            let m = golden_section_log(f, p.zeta / 100.0, p.zeta * 100.0, 1e-12).unwrap();
            prop_assert!((m.value - p.noise).abs() <= 1e-9 * p.noise.abs().max(1e-3));
            prop_assert!((m.x / p.zeta - 1.0).abs() < 1e-5);
        }

        #[test]
        fn angle_matches_search(zeta in 0.1f64..3.0, beta in 0.1f64..3.0, r in 0.0f64..2.0, phi in -3.0f64..3.0, ratio in 0.8f64..1.0) {
            let sq = SqueezeParams::new(r, phi).unwrap();
            let t1 = theta_opt_single(zeta, beta, &sq).unwrap();
            let f1 = |t: f64| noise_metric_single(&ToySingleParams::new(zeta, beta, t).unwrap(), &sq).unwrap();
            let m1 = golden_section(f1, -1.5706, 1.5706, 1e-13).unwrap();
            prop_assert!(f1(t1) <= m1.value * (1.0 + 1e-12));

            let t2 = theta_opt_two(zeta, ratio * zeta, beta, &sq).unwrap();
            let f2 = |t: f64| noise_metric_two(&ToyTwoParams::new(zeta, ratio * zeta, beta, t).unwrap(), &sq).unwrap();
            let m2 = golden_section(f2, -1.5706, 1.5706, 1e-13).unwrap();
            prop_assert!(f2(t2) <= m2.value * (1.0 + 1e-12));
        }

        #[test]
        fn cross_correlator_floor(beta in 0.1f64..10.0, r in 0.0f64..2.5) {
            let sq = SqueezeParams::new(r, FRAC_PI_4).unwrap();
            let z = zeta_sql(beta).unwrap();
            let n = noise_metric_single(&ToySingleParams::new(z, beta, 0.0).unwrap(), &sq).unwrap();
            prop_assert!((n - (-2.0 * r).exp() * beta / 4.0).abs() <= 1e-9 * beta / 4.0);
        }
    }
}
