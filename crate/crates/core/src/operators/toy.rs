//! Pulsed kick–drift–kick toy models for position sensing with squeezed light.
//!
//! The probe interacts with the mirror position twice, separated by a free
//! evolution of the mirror. Everything is dimensionless: `zeta` is the
//! interaction strength, `beta` the free-evolution factor, and quadratures
//! obey `[X, Y] = i` with vacuum variance 1/2.
//!
//! The noise metric is `N^2 = <(x_E - (x0 + beta p0 / 2))^2>` with only the
//! light quadratures contributing; mechanical initial moments carry zero
//! weight.

use std::sync::Arc;

use super::basis::OperatorBasis;
use super::linear::{AffineMap, CorrelatorMatrix, OperatorVector};
use crate::constants::DEGENERATE_COS_TOL;
use crate::error::{require_at_least, require_finite, require_positive, Error, Result};
use crate::squeezed::{single_mode_moments, two_mode_moments, SqueezeParams};

/// Single-mode toy model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToySingleParams {
    pub zeta: f64,
    pub beta: f64,
    /// Measurement quadrature; 0 is the phase quadrature.
    pub theta: f64,
    /// Detection loss angle; `eta^2` is the loss fraction. Only used by the lossy metric.
    pub eta: f64,
}

impl ToySingleParams {
    pub fn new(zeta: f64, beta: f64, theta: f64) -> Result<Self> {
        Self::with_loss(zeta, beta, theta, 0.0)
    }

    pub fn with_loss(zeta: f64, beta: f64, theta: f64, eta: f64) -> Result<Self> {
        let p = Self { zeta, beta, theta, eta };
        p.validate()?;
        Ok(p)
    }

    /// Loss given as the fraction `eta^2` instead of the angle.
    pub fn with_loss_fraction(zeta: f64, beta: f64, theta: f64, eta2: f64) -> Result<Self> {
        require_at_least("eta2", eta2, 0.0)?;
        if eta2 > 1.0 {
            return Err(Error::invalid(
                "eta2",
                format!("loss fraction must be <= 1, got {eta2}"),
            ));
        }
        Self::with_loss(zeta, beta, theta, eta2.sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        require_at_least("zeta", self.zeta, 0.0)?;
        require_positive("beta", self.beta)?;
        require_finite("theta", self.theta)?;
        require_at_least("eta", self.eta, 0.0)?;
        if self.eta > std::f64::consts::FRAC_PI_2 {
            return Err(Error::invalid(
                "eta",
                format!("must lie in [0, pi/2], got {}", self.eta),
            ));
        }
        Ok(())
    }
}

/// Two-mode toy model parameters; mode 1 and mode 2 hit opposite faces of the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyTwoParams {
    pub zeta1: f64,
    pub zeta2: f64,
    pub beta: f64,
    pub theta: f64,
}

impl ToyTwoParams {
    pub fn symmetric(zeta: f64, beta: f64, theta: f64) -> Result<Self> {
        Self::new(zeta, zeta, beta, theta)
    }

    pub fn new(zeta1: f64, zeta2: f64, beta: f64, theta: f64) -> Result<Self> {
        let p = Self {
            zeta1,
            zeta2,
            beta,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_at_least("zeta1", self.zeta1, 0.0)?;
        require_at_least("zeta2", self.zeta2, 0.0)?;
        require_positive("beta", self.beta)?;
        require_finite("theta", self.theta)?;
        Ok(())
    }
}

/// Result of a toy-model evolution: the composed Heisenberg map over its basis.
#[derive(Debug, Clone)]
pub struct Evolution {
    map: AffineMap,
}

impl Evolution {
    pub fn basis(&self) -> &Arc<OperatorBasis> {
        self.map.basis()
    }

    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    /// `U_tot^dag O U_tot` for a basis label.
    pub fn image(&self, label: &str) -> Result<OperatorVector> {
        self.map.image(label)
    }
}

fn kick_drift_kick(basis: &Arc<OperatorBasis>, light: &[(&str, f64)], beta: f64) -> Result<Evolution> {
    let kick = AffineMap::position_kick(basis, light)?;
    let drift = AffineMap::free_drift(basis, beta)?;
    Ok(Evolution {
        map: AffineMap::product(&[kick.clone(), drift, kick])?,
    })
}

fn check_quadrature(theta: f64) -> Result<()> {
    let c = theta.cos();
    if c.abs() < DEGENERATE_COS_TOL {
        return Err(Error::DegenerateQuadrature {
            cos_theta: c,
            tolerance: DEGENERATE_COS_TOL,
        });
    }
    Ok(())
}

/// Divides a measured quadrature by its `x0` coefficient.
fn normalize_by_signal(quadrature: &OperatorVector, signal: f64) -> Result<OperatorVector> {
    if signal == 0.0 || !signal.is_finite() {
        return Err(Error::ZeroSignal);
    }
    Ok(quadrature.scaled(1.0 / signal))
}

/// `x_E - (x0 + beta p0 / 2)`, restricted to the light operators.
fn light_residual(estimator: &OperatorVector, beta: f64) -> Result<OperatorVector> {
    let basis = estimator.basis();
    let reference = OperatorVector::from_terms(basis, &[("x0", 1.0), ("p0", 0.5 * beta)])?;
    Ok((estimator - &reference).light_part())
}

pub fn evolve_single(params: &ToySingleParams) -> Result<Evolution> {
    params.validate()?;
    kick_drift_kick(&OperatorBasis::single_mode(), &[("X", params.zeta)], params.beta)
}

/// `X_theta = Y' cos(theta) + X' sin(theta)`.
pub fn measured_quadrature_single(params: &ToySingleParams) -> Result<OperatorVector> {
    let ev = evolve_single(params)?;
    quadrature(&ev, "Y", "X", params.theta)
}

fn quadrature(ev: &Evolution, phase: &str, amplitude: &str, theta: f64) -> Result<OperatorVector> {
    let (s, c) = theta.sin_cos();
    Ok(&ev.image(phase)?.scaled(c) + &ev.image(amplitude)?.scaled(s))
}

/// Position estimator `x_E = X_theta / (-2 zeta cos(theta))`; its `x0` coefficient is 1.
pub fn position_estimator_single(params: &ToySingleParams) -> Result<OperatorVector> {
    check_quadrature(params.theta)?;
    let xt = measured_quadrature_single(params)?;
    let signal = xt.coeff("x0")?;
    normalize_by_signal(&xt, signal)
}

pub fn single_mode_correlators(basis: &Arc<OperatorBasis>, sq: &SqueezeParams) -> Result<CorrelatorMatrix> {
    let m = single_mode_moments(sq);
    let mut c = CorrelatorMatrix::zeros(basis);
    c.set_sym("X", "X", m.xx)?;
    c.set_sym("Y", "Y", m.yy)?;
    c.set_anticommutator("X", "Y", m.xy_anti)?;
    Ok(c)
}

pub fn two_mode_correlators(basis: &Arc<OperatorBasis>, sq: &SqueezeParams) -> Result<CorrelatorMatrix> {
    let m = two_mode_moments(sq);
    let labels = ["X1", "Y1", "X2", "Y2"];
    let mut c = CorrelatorMatrix::zeros(basis);
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate().skip(i) {
            c.set_sym(a, b, m.table[i][j])?;
        }
    }
    Ok(c)
}

/// Light-only residual of the lossless single-mode estimator.
pub fn residual_single(params: &ToySingleParams) -> Result<OperatorVector> {
    let est = position_estimator_single(params)?;
    light_residual(&est, params.beta)
}

/// Measurement-induced noise `N^2` of the lossless single-mode model. `params.eta` is ignored.
pub fn noise_metric_single(params: &ToySingleParams, sq: &SqueezeParams) -> Result<f64> {
    let residual = residual_single(params)?;
    single_mode_correlators(residual.basis(), sq)?.quadratic_form(&residual)
}

/// Light-only residual of the single-mode estimator with detection loss.
///
/// The lossy outputs are `Y_out = Y' cos(eta) + Ya sin(eta)` (likewise for X),
/// with `(Xa, Ya)` an independent vacuum. The estimator keeps the lossless
/// calibration `-2 zeta cos(theta)`, so at total loss it reduces to the
/// ancilla vacuum seen through the same prefactors.
pub fn residual_single_lossy(params: &ToySingleParams) -> Result<OperatorVector> {
    params.validate()?;
    check_quadrature(params.theta)?;
    let basis = OperatorBasis::single_mode_lossy();
    let ev = kick_drift_kick(&basis, &[("X", params.zeta)], params.beta)?;
    let lossless = quadrature(&ev, "Y", "X", params.theta)?;
    let calibration = lossless.coeff("x0")?;

    let (se, ce) = params.eta.sin_cos();
    let y_out = &ev.image("Y")?.scaled(ce) + &OperatorVector::unit(&basis, "Ya")?.scaled(se);
    let x_out = &ev.image("X")?.scaled(ce) + &OperatorVector::unit(&basis, "Xa")?.scaled(se);
    let (st, ct) = params.theta.sin_cos();
    let measured = &y_out.scaled(ct) + &x_out.scaled(st);

    let est = normalize_by_signal(&measured, calibration)?;
    light_residual(&est, params.beta)
}

pub fn noise_metric_single_lossy(params: &ToySingleParams, sq: &SqueezeParams) -> Result<f64> {
    let residual = residual_single_lossy(params)?;
    let basis = Arc::clone(residual.basis());
    let mut c = single_mode_correlators(&basis, sq)?;
    c.set_vacuum("Xa", "Ya")?;
    c.quadratic_form(&residual)
}

/// Kick generator `x0 (zeta1 X1 - zeta2 X2)`.
pub fn evolve_two(params: &ToyTwoParams) -> Result<Evolution> {
    params.validate()?;
    kick_drift_kick(
        &OperatorBasis::two_mode(),
        &[("X1", params.zeta1), ("X2", -params.zeta2)],
        params.beta,
    )
}

/// `X_theta = (Y1' - Y2') cos(theta) + (X1' - X2') sin(theta)`.
pub fn measured_quadrature_two(params: &ToyTwoParams) -> Result<OperatorVector> {
    let ev = evolve_two(params)?;
    let (s, c) = params.theta.sin_cos();
    let dy = &ev.image("Y1")? - &ev.image("Y2")?;
    let dx = &ev.image("X1")? - &ev.image("X2")?;
    Ok(&dy.scaled(c) + &dx.scaled(s))
}

/// Estimator normalized by the actual `x0` coefficient, `-2 (zeta1 + zeta2) cos(theta)`.
pub fn position_estimator_two(params: &ToyTwoParams) -> Result<OperatorVector> {
    check_quadrature(params.theta)?;
    let xt = measured_quadrature_two(params)?;
    let signal = xt.coeff("x0")?;
    normalize_by_signal(&xt, signal)
}

pub fn residual_two(params: &ToyTwoParams) -> Result<OperatorVector> {
    let est = position_estimator_two(params)?;
    light_residual(&est, params.beta)
}

pub fn noise_metric_two(params: &ToyTwoParams, sq: &SqueezeParams) -> Result<f64> {
    let residual = residual_two(params)?;
    two_mode_correlators(residual.basis(), sq)?.quadratic_form(&residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn sq(r: f64, phi: f64) -> SqueezeParams {
        SqueezeParams::new(r, phi).unwrap()
    }

    fn coeffs(v: &OperatorVector, labels: &[&str]) -> Vec<f64> {
        labels.iter().map(|l| v.coeff(l).unwrap()).collect()
    }

    #[test]
    fn no_interaction_leaves_light_untouched() {
        let ev = evolve_single(&ToySingleParams::new(0.0, 1.0, 0.0).unwrap()).unwrap();
        for l in ["X", "Y", "p0"] {
            assert_eq!(ev.image(l).unwrap(), OperatorVector::unit(ev.basis(), l).unwrap());
        }
        // The mirror still drifts freely.
        let x = ev.image("x0").unwrap();
        assert_eq!(coeffs(&x, &["X", "Y", "x0", "p0"]), [0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn unit_strength_transforms() {
        let ev = evolve_single(&ToySingleParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        let y = ev.image("Y").unwrap();
        assert_eq!(coeffs(&y, &["X", "Y", "x0", "p0"]), [1.0, 1.0, -2.0, -1.0]);
        let p = ev.image("p0").unwrap();
        assert_eq!(coeffs(&p, &["X", "Y", "x0", "p0"]), [-2.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn composed_map_entries() {
        let ev = evolve_single(&ToySingleParams::new(2.0, 0.5, 0.0).unwrap()).unwrap();
        let y = ev.image("Y").unwrap();
        assert_eq!(y.coeff("X").unwrap(), 2.0);
        assert_eq!(y.coeff("p0").unwrap(), -1.0);
    }

    #[test]
    fn quadrature_limits() {
        let p = ToySingleParams::new(1.3, 0.7, 0.0).unwrap();
        let ev = evolve_single(&p).unwrap();
        assert_eq!(measured_quadrature_single(&p).unwrap(), ev.image("Y").unwrap());

        let p = ToySingleParams::new(1.3, 0.7, FRAC_PI_2).unwrap();
        let xt = measured_quadrature_single(&p).unwrap();
        assert_relative_eq!(xt.coeff("X").unwrap(), 1.0, epsilon = 1e-15);
        for l in ["x0", "p0"] {
            assert!(xt.coeff(l).unwrap().abs() < 1e-15);
        }

        let p = ToySingleParams::new(1.0, 1.0, (-1.0f64).atan()).unwrap();
        let xt = measured_quadrature_single(&p).unwrap();
        assert!(xt.coeff("X").unwrap().abs() < 1e-15);
    }

    #[test]
    fn estimator_closed_form() {
        let est = position_estimator_single(&ToySingleParams::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(coeffs(&est, &["X", "Y", "x0", "p0"]), [-0.5, -0.5, 1.0, 0.5]);
        let est = position_estimator_single(&ToySingleParams::new(2.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(est.coeff("Y").unwrap(), -0.25);
        assert_eq!(est.coeff("X").unwrap(), -1.0);
    }

    #[test]
    fn amplitude_quadrature_is_degenerate() {
        let p = ToySingleParams::new(1.0, 1.0, -FRAC_PI_2).unwrap();
        assert!(matches!(
            position_estimator_single(&p),
            Err(Error::DegenerateQuadrature { .. })
        ));
        assert!(matches!(
            noise_metric_single(&p, &SqueezeParams::vacuum()),
            Err(Error::DegenerateQuadrature { .. })
        ));
    }

    #[test]
    fn zero_interaction_has_no_signal() {
        let p = ToySingleParams::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(position_estimator_single(&p), Err(Error::ZeroSignal));
    }

    #[test]
    fn parameter_validation() {
        assert!(ToySingleParams::new(-1.0, 1.0, 0.0).is_err());
        assert!(ToySingleParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ToySingleParams::with_loss(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(ToySingleParams::with_loss_fraction(1.0, 1.0, 0.0, 1.5).is_err());
        assert!(ToyTwoParams::new(1.0, -0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn noise_metric_reference_values() {
        let p = ToySingleParams::new(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            noise_metric_single(&p, &SqueezeParams::vacuum()).unwrap(),
            0.25,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            noise_metric_single(&p, &sq(2.0, FRAC_PI_4)).unwrap(),
            (-4.0f64).exp() / 4.0,
            max_relative = 1e-9
        );
        let p = ToySingleParams::new(1.0, 1.0, -FRAC_PI_4).unwrap();
        assert_relative_eq!(
            noise_metric_single(&p, &SqueezeParams::vacuum()).unwrap(),
            0.125,
            max_relative = 1e-14
        );
    }

    #[test]
    fn lossy_limits() {
        let s = sq(2.0, FRAC_PI_4);
        let lossless = ToySingleParams::new(1.0, 1.0, 0.0).unwrap();
        let n0 = noise_metric_single(&lossless, &s).unwrap();
        assert_eq!(noise_metric_single_lossy(&lossless, &s).unwrap(), n0);

        // Total loss: only the ancilla vacuum through the prefactor -(Y + tan X)/(2 zeta).
        for theta in [0.0, -0.6] {
            let p = ToySingleParams::with_loss(1.3, 0.8, theta, FRAC_PI_2).unwrap();
            let expected = (1.0 + theta.tan().powi(2)) / (8.0 * 1.3 * 1.3);
            assert_relative_eq!(
                noise_metric_single_lossy(&p, &s).unwrap(),
                expected,
                max_relative = 1e-12
            );
        }

        let p = ToySingleParams::with_loss_fraction(1.0, 1.0, 0.0, 0.1).unwrap();
        let lossy = noise_metric_single_lossy(&p, &s).unwrap();
        let vacuum = noise_metric_single(&lossless, &SqueezeParams::vacuum()).unwrap();
        assert!(n0 < lossy && lossy < vacuum, "{n0} < {lossy} < {vacuum}");
        // eta = sqrt(0.1): (cos^2 <(X+Y)^2> + sin^2 <Ya^2>) / 4
        let (se, ce) = (0.1f64).sqrt().sin_cos();
        assert_relative_eq!(
            lossy,
            0.25 * (ce * ce * (-4.0f64).exp() + 0.5 * se * se),
            max_relative = 1e-9
        );
    }

    #[test]
    fn loss_is_monotone_toward_vacuum_limit() {
        let s = sq(1.5, FRAC_PI_4);
        let mut last = 0.0;
        for k in 0..=20 {
            let eta = FRAC_PI_2 * k as f64 / 20.0;
            let p = ToySingleParams::with_loss(1.0, 1.0, 0.0, eta).unwrap();
            let n = noise_metric_single_lossy(&p, &s).unwrap();
            assert!(n >= last);
            last = n;
        }
        assert_relative_eq!(last, 0.125, max_relative = 1e-12);
    }

    #[test]
    fn two_mode_transforms() {
        let p = ToyTwoParams::symmetric(0.0, 1.0, 0.0).unwrap();
        let ev = evolve_two(&p).unwrap();
        for l in ["X1", "Y1", "X2", "Y2", "p0"] {
            assert_eq!(ev.image(l).unwrap(), OperatorVector::unit(ev.basis(), l).unwrap());
        }

        let p = ToyTwoParams::symmetric(1.0, 1.0, 0.0).unwrap();
        let ev = evolve_two(&p).unwrap();
        let dy = &ev.image("Y1").unwrap() - &ev.image("Y2").unwrap();
        assert_eq!(dy.coeff("x0").unwrap(), -4.0);
        assert_eq!(dy.coeff("p0").unwrap(), -2.0);
        assert_eq!(dy.coeff("X1").unwrap(), 2.0);
        assert_eq!(dy.coeff("X2").unwrap(), -2.0);

        let p = ToyTwoParams::new(1.0, 0.9, 1.0, 0.0).unwrap();
        let ev = evolve_two(&p).unwrap();
        let pp = ev.image("p0").unwrap();
        assert_relative_eq!(pp.coeff("X1").unwrap(), -2.0, epsilon = 1e-15);
        assert_relative_eq!(pp.coeff("X2").unwrap(), 1.8, epsilon = 1e-15);
        assert_eq!(pp.coeff("p0").unwrap(), 1.0);
    }

    #[test]
    fn two_mode_reference_values() {
        let p = ToyTwoParams::symmetric(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            noise_metric_two(&p, &SqueezeParams::vacuum()).unwrap(),
            0.3125,
            max_relative = 1e-14
        );
        let z = (0.5f64).sqrt();
        let p = ToyTwoParams::symmetric(z, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            noise_metric_two(&p, &SqueezeParams::vacuum()).unwrap(),
            0.25,
            max_relative = 1e-14
        );
    }

    #[test]
    fn asymmetry_raises_the_floor() {
        let s = sq(2.0, FRAC_PI_4);
        for theta in [0.0, -0.3] {
            let floor = |ratio: f64| {
                (0..2000)
                    .map(|k| {
                        let z = 10f64.powf(-2.0 + 4.0 * k as f64 / 1999.0);
                        noise_metric_two(&ToyTwoParams::new(z, ratio * z, 1.0, theta).unwrap(), &s).unwrap()
                    })
                    .fold(f64::INFINITY, f64::min)
            };
            let (sym, asym) = (floor(1.0), floor(0.9));
            assert!(asym > 1.5 * sym, "theta={theta}: {asym} vs {sym}");
        }
    }

    #[test]
    fn asymmetric_estimator_normalization() {
        let p = ToyTwoParams::new(1.2, 0.7, 0.9, 0.4).unwrap();
        let xt = measured_quadrature_two(&p).unwrap();
        assert_relative_eq!(
            xt.coeff("x0").unwrap(),
            -2.0 * (1.2 + 0.7) * 0.4f64.cos(),
            max_relative = 1e-14
        );
        let est = position_estimator_two(&p).unwrap();
        assert_relative_eq!(est.coeff("x0").unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(est.coeff("p0").unwrap(), 0.45, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn engine_matches_closed_form_single(zeta in 0.0f64..4.0, beta in 0.01f64..4.0) {
            let ev = evolve_single(&ToySingleParams::new(zeta, beta, 0.0).unwrap()).unwrap();
            let l = ["X", "Y", "x0", "p0"];
            let y = coeffs(&ev.image("Y").unwrap(), &l);
            let x = coeffs(&ev.image("x0").unwrap(), &l);
            let p = coeffs(&ev.image("p0").unwrap(), &l);
            let xx = coeffs(&ev.image("X").unwrap(), &l);
            let expect_y = [zeta * zeta * beta, 1.0, -2.0 * zeta, -zeta * beta];
            let expect_x = [-beta * zeta, 0.0, 1.0, beta];
            let expect_p = [-2.0 * zeta, 0.0, 0.0, 1.0];
            for k in 0..4 {
                prop_assert!((y[k] - expect_y[k]).abs() <= 1e-12 * (1.0 + expect_y[k].abs()));
                prop_assert!((x[k] - expect_x[k]).abs() <= 1e-12 * (1.0 + expect_x[k].abs()));
                prop_assert!((p[k] - expect_p[k]).abs() <= 1e-12 * (1.0 + expect_p[k].abs()));
            }
            prop_assert_eq!(xx, vec![1.0, 0.0, 0.0, 0.0]);
        }

        #[test]
        fn noise_matches_written_out_formula(
            zeta in 0.05f64..4.0, beta in 0.05f64..4.0, theta in -1.4f64..1.4,
            r in 0.0f64..2.5, phi in -3.2f64..3.2,
        ) {
            let s = sq(r, phi);
            let m = single_mode_moments(&s);
            let t = theta.tan();
            let z2 = zeta * zeta;
            let expected = m.yy / (4.0 * z2) + z2 * beta * beta * m.xx / 4.0 + t * t * m.xx / (4.0 * z2)
                + beta * m.xy_anti / 4.0 + t * m.xy_anti / (4.0 * z2) + beta * t * m.xx / 2.0;
            let got = noise_metric_single(&ToySingleParams::new(zeta, beta, theta).unwrap(), &s).unwrap();
            let scale = (m.yy / z2 + z2 * beta * beta * m.xx + t * t * m.xx / z2).abs();
            prop_assert!((got - expected).abs() <= 1e-12 * scale, "{} vs {}", got, expected);
        }

        #[test]
        fn backaction_cancels_at_optimal_angle(zeta in 0.05f64..4.0, beta in 0.05f64..4.0, r in 0.0f64..2.5) {
            let s = sq(r, 0.0);
            let theta = -(zeta * zeta * beta).atan();
            let got = noise_metric_single(&ToySingleParams::new(zeta, beta, theta).unwrap(), &s).unwrap();
            let expected = single_mode_moments(&s).yy / (4.0 * zeta * zeta);
            prop_assert!((got - expected).abs() <= 1e-12 * expected);
        }

        #[test]
        fn symmetric_two_mode_matches_closed_form(
            zeta in 0.05f64..3.0, beta in 0.05f64..3.0, theta in -1.4f64..1.4,
            r in 0.0f64..2.5, phi in -3.2f64..3.2,
        ) {
            let s = sq(r, phi);
            let m = two_mode_moments(&s);
            let k = 2.0 * zeta * zeta * beta + theta.tan();
            let expected = (m.dyy() + k * k * m.dxx() + k * m.dxy_anti()) / (16.0 * zeta * zeta);
            let got = noise_metric_two(&ToyTwoParams::symmetric(zeta, beta, theta).unwrap(), &s).unwrap();
            let scale = (m.dyy() + k * k * m.dxx()) / (16.0 * zeta * zeta);
            prop_assert!((got - expected).abs() <= 1e-12 * scale);
        }

        #[test]
        fn mechanical_part_of_residual_vanishes(
            z1 in 0.1f64..3.0, z2 in 0.1f64..3.0, beta in 0.05f64..3.0, theta in -1.4f64..1.4,
        ) {
            let est = position_estimator_two(&ToyTwoParams::new(z1, z2, beta, theta).unwrap()).unwrap();
            prop_assert!((est.coeff("x0").unwrap() - 1.0).abs() < 1e-14);
            prop_assert!((est.coeff("p0").unwrap() - 0.5 * beta).abs() < 1e-12 * (1.0 + beta));
        }
    }
}
