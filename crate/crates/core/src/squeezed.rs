//! Second moments of single-mode and two-mode squeezed vacuum.
//!
//! Vacuum convention: `<X^2> = <Y^2> = 1/2`. Cross moments of the form
//! `<{A, B}>` store the full anticommutator expectation; the symmetrized
//! covariance used in quadratic forms is half of it.

use std::f64::consts::PI;

use crate::error::{require_at_least, require_finite, Result};

/// Squeezing strength `r >= 0` and squeezing angle `phi` (canonicalized to (-pi, pi]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    phi: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        let r = require_at_least("r", r, 0.0)?;
        let phi = require_finite("phi", phi)?;
        Ok(Self {
            r,
            phi: canonical_angle(phi),
        })
    }

    pub fn vacuum() -> Self {
        Self { r: 0.0, phi: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Mean photon number of the squeezed vacuum, `sinh^2 r`.
    pub fn vacuum_photons(&self) -> f64 {
        self.r.sinh().powi(2)
    }
}

/// Maps any finite angle into (-pi, pi].
pub(crate) fn canonical_angle(phi: f64) -> f64 {
    let wrapped = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped <= -PI {
        wrapped + 2.0 * PI
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeMoments {
    /// `<X^2>`
    pub xx: f64,
    /// `<Y^2>`
    pub yy: f64,
    /// `<{X, Y}>`, the full anticommutator (twice the symmetrized covariance).
    pub xy_anti: f64,
}

impl SingleModeMoments {
    /// Symmetrized covariance `<{X, Y}>/2`.
    pub fn xy_sym(&self) -> f64 {
        0.5 * self.xy_anti
    }

    /// `xx*yy - (xy_anti/2)^2`; equals 1/4 for every pure Gaussian state.
    pub fn uncertainty_product(&self) -> f64 {
        self.xx * self.yy - self.xy_sym().powi(2)
    }

    /// `<(a X + b Y)^2>`.
    pub fn quadratic(&self, a_x: f64, b_y: f64) -> f64 {
        a_x * a_x * self.xx + b_y * b_y * self.yy + a_x * b_y * self.xy_anti
    }
}

pub fn single_mode_moments(sq: &SqueezeParams) -> SingleModeMoments {
    let (s, c) = sq.phi.sin_cos();
    let grow = (2.0 * sq.r).exp();
    let shrink = (-2.0 * sq.r).exp();
    SingleModeMoments {
        xx: 0.5 * (grow * c * c + shrink * s * s),
        yy: 0.5 * (shrink * c * c + grow * s * s),
        xy_anti: 0.5 * (shrink - grow) * (2.0 * sq.phi).sin(),
    }
}

/// Index of each quadrature in [`TwoModeMoments::table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoModeQuadrature {
    X1 = 0,
    Y1 = 1,
    X2 = 2,
    Y2 = 3,
}

/// Symmetrized second moments of a two-mode squeezed vacuum over `(X1, Y1, X2, Y2)`.
///
/// `table[i][j]` is `<{A_i, A_j}>/2`; on the diagonal this is `<A_i^2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeMoments {
    pub table: [[f64; 4]; 4],
}

impl TwoModeMoments {
    pub fn get(&self, a: TwoModeQuadrature, b: TwoModeQuadrature) -> f64 {
        self.table[a as usize][b as usize]
    }

    /// `<(coeffs . (X1, Y1, X2, Y2))^2>`.
    pub fn quadratic(&self, coeffs: [f64; 4]) -> f64 {
        let mut acc = 0.0;
        for (i, ci) in coeffs.iter().enumerate() {
            for (j, cj) in coeffs.iter().enumerate() {
                acc += ci * cj * self.table[i][j];
            }
        }
        acc
    }

    /// `<dX^2>` with `dX = X1 - X2`.
    pub fn dxx(&self) -> f64 {
        use TwoModeQuadrature::*;
        self.get(X1, X1) + self.get(X2, X2) - 2.0 * self.get(X1, X2)
    }

    /// `<dY^2>` with `dY = Y1 - Y2`.
    pub fn dyy(&self) -> f64 {
        use TwoModeQuadrature::*;
        self.get(Y1, Y1) + self.get(Y2, Y2) - 2.0 * self.get(Y1, Y2)
    }

    /// `<{dX, dY}>`, full anticommutator.
    pub fn dxy_anti(&self) -> f64 {
        use TwoModeQuadrature::*;
        2.0 * (self.get(X1, Y1) - self.get(X1, Y2) - self.get(X2, Y1) + self.get(X2, Y2))
    }
}

pub fn two_mode_moments(sq: &SqueezeParams) -> TwoModeMoments {
    let diag = 0.5 * (2.0 * sq.r).cosh();
    let sh = 0.5 * (2.0 * sq.r).sinh();
    let xx12 = -sh * (2.0 * sq.phi).cos();
    let xy12 = sh * (2.0 * sq.phi).sin();
    // Order: X1, Y1, X2, Y2.
    TwoModeMoments {
        table: [
            [diag, 0.0, xx12, xy12],
            [0.0, diag, xy12, -xx12],
            [xx12, xy12, diag, 0.0],
            [xy12, -xx12, 0.0, diag],
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix2, Matrix4};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    /// Independent oracle: rotate the principal-axis covariance diag(e^{2r}, e^{-2r})/2.
    /// The rotation runs by -phi so that positive phi tilts the squeezed axis
    /// toward the sign convention of the closed forms.
    fn symplectic_single(r: f64, phi: f64) -> Matrix2<f64> {
        let rot = Matrix2::new(phi.cos(), phi.sin(), -phi.sin(), phi.cos());
        let principal = Matrix2::new((2.0 * r).exp(), 0.0, 0.0, (-2.0 * r).exp()) * 0.5;
        rot * principal * rot.transpose()
    }

    /// Independent oracle for the two-mode state: a 50:50 beamsplitter mixing a
    /// mode squeezed at phi + pi/2 (port a) with one squeezed at phi (port b).
    fn beamsplitter_two_mode(r: f64, phi: f64) -> Matrix4<f64> {
        let a = symplectic_single(r, phi + PI / 2.0);
        let b = symplectic_single(r, phi);
        // Input ordering (Xa, Ya, Xb, Yb).
        let mut input = Matrix4::zeros();
        input.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
        input.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // X1 = (Xa + Xb)/sqrt2, Y1 = (Ya + Yb)/sqrt2, X2 = (Xa - Xb)/sqrt2, Y2 = (Ya - Yb)/sqrt2.
        let bs = Matrix4::new(
            h, 0.0, h, 0.0, //
            0.0, h, 0.0, h, //
            h, 0.0, -h, 0.0, //
            0.0, h, 0.0, -h,
        );
        bs * input * bs.transpose()
    }

    #[test]
    fn vacuum_ignores_angle() {
        for phi in [0.0, 0.3, -2.0, 3.0] {
            let m = single_mode_moments(&SqueezeParams::new(0.0, phi).unwrap());
            assert_relative_eq!(m.xx, 0.5, max_relative = 1e-15);
            assert_relative_eq!(m.yy, 0.5, max_relative = 1e-15);
            assert_eq!(m.xy_anti, 0.0);
        }
    }

    #[test]
    fn single_mode_matches_symplectic_oracle() {
        // (r=2, phi=0) and (r=1, phi=pi/4).
        let m = single_mode_moments(&SqueezeParams::new(2.0, 0.0).unwrap());
        let o = symplectic_single(2.0, 0.0);
        assert_relative_eq!(m.xx, o[(0, 0)], max_relative = 1e-12);
        assert_relative_eq!(m.yy, o[(1, 1)], max_relative = 1e-12);
        assert_relative_eq!(m.xx, 27.299_075_016_572_118, max_relative = 1e-12);
        assert_relative_eq!(m.yy, 0.009_157_819_444_367_09, max_relative = 1e-12);
        assert_eq!(m.xy_anti, 0.0);

        let m = single_mode_moments(&SqueezeParams::new(1.0, FRAC_PI_4).unwrap());
        let o = symplectic_single(1.0, FRAC_PI_4);
        assert_relative_eq!(m.xx, o[(0, 0)], max_relative = 1e-12);
        assert_relative_eq!(m.yy, o[(1, 1)], max_relative = 1e-12);
        assert_relative_eq!(m.xy_anti, 2.0 * o[(0, 1)], max_relative = 1e-12);
        assert_relative_eq!(m.xx, 1.881_097_845_541_816_6, max_relative = 1e-12);
        assert_relative_eq!(m.xy_anti, -3.626_860_407_847_019, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_strength() {
        assert!(SqueezeParams::new(-0.1, 0.0).is_err());
        assert!(SqueezeParams::new(f64::NAN, 0.0).is_err());
        assert!(SqueezeParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn angle_canonicalization() {
        let sq = SqueezeParams::new(1.0, -PI).unwrap();
        assert_eq!(sq.phi(), PI);
        let sq = SqueezeParams::new(1.0, 3.0 * PI + 0.25).unwrap();
        assert_relative_eq!(sq.phi(), -PI + 0.25, epsilon = 1e-12);
    }

    #[test]
    fn two_mode_vacuum() {
        let m = two_mode_moments(&SqueezeParams::vacuum());
        assert_eq!(m.dxx(), 1.0);
        assert_eq!(m.dyy(), 1.0);
        assert_eq!(m.dxy_anti(), 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.5 } else { 0.0 };
                assert_eq!(m.table[i][j].abs(), expected);
            }
        }
    }

    #[test]
    fn two_mode_matches_beamsplitter_oracle() {
        use TwoModeQuadrature::*;
        for (r, phi) in [(2.0, 0.0), (1.0, FRAC_PI_4), (0.7, -1.1), (1.5, 2.9)] {
            let m = two_mode_moments(&SqueezeParams::new(r, phi).unwrap());
            let o = beamsplitter_two_mode(r, phi);
            for i in 0..4 {
                for j in 0..4 {
                    assert_relative_eq!(m.table[i][j], o[(i, j)], epsilon = 1e-12, max_relative = 1e-12);
                }
            }
        }
        let m = two_mode_moments(&SqueezeParams::new(2.0, 0.0).unwrap());
        assert_relative_eq!(m.dxx(), 54.598_150_033_144_236, max_relative = 1e-12);
        assert_relative_eq!(m.dyy(), 0.018_315_638_888_734_18, max_relative = 1e-12);
        assert_relative_eq!(m.get(X1, X2), -13.644_958_598_563_88, max_relative = 1e-12);
        assert_eq!(m.get(X1, Y2), 0.0);

        let m = two_mode_moments(&SqueezeParams::new(1.0, FRAC_PI_4).unwrap());
        assert_relative_eq!(m.get(X1, Y2), 1.813_430_203_923_509_4, max_relative = 1e-12);
        assert!(m.get(X1, X2).abs() < 1e-15);
        assert_relative_eq!(m.dxy_anti(), -7.253_720_815_694_038, max_relative = 1e-12);
    }

    #[test]
    fn two_mode_difference_closed_forms() {
        let sq = SqueezeParams::new(1.3, 0.4).unwrap();
        let m = two_mode_moments(&sq);
        let (s, c) = sq.phi().sin_cos();
        let g = (2.0 * sq.r()).exp();
        let h = (-2.0 * sq.r()).exp();
        assert_relative_eq!(m.dxx(), g * c * c + h * s * s, max_relative = 1e-12);
        assert_relative_eq!(m.dyy(), h * c * c + g * s * s, max_relative = 1e-12);
        assert_relative_eq!(m.dxy_anti(), (h - g) * (2.0 * sq.phi()).sin(), max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn purity_saturates_uncertainty(r in 0.0f64..3.0, phi in -10.0f64..10.0) {
            let m = single_mode_moments(&SqueezeParams::new(r, phi).unwrap());
            prop_assert!(m.xx > 0.0 && m.yy > 0.0);
            let u = m.uncertainty_product();
            prop_assert!((u - 0.25).abs() <= 1e-12 * m.xx * m.yy.max(1.0));
        }

        #[test]
        fn moments_are_pi_periodic(r in 0.0f64..3.0, phi in -3.0f64..3.0) {
            let a = single_mode_moments(&SqueezeParams::new(r, phi).unwrap());
            let b = single_mode_moments(&SqueezeParams::new(r, phi + PI).unwrap());
            let scale = a.xx.max(a.yy);
            prop_assert!((a.xx - b.xx).abs() <= 1e-12 * scale);
            prop_assert!((a.yy - b.yy).abs() <= 1e-12 * scale);
            prop_assert!((a.xy_anti - b.xy_anti).abs() <= 1e-12 * scale);
        }

        #[test]
        fn small_r_approaches_vacuum(r in 0.0f64..1e-3, phi in -3.0f64..3.0) {
            let m = single_mode_moments(&SqueezeParams::new(r, phi).unwrap());
            prop_assert!((m.xx - 0.5).abs() <= 1.01 * r + 1e-15);
            prop_assert!((m.yy - 0.5).abs() <= 1.01 * r + 1e-15);
            prop_assert!(m.xy_anti.abs() <= 2.01 * r + 1e-15);
        }

        #[test]
        fn two_mode_invariants(r in 0.0f64..3.0, phi in -3.0f64..3.0) {
            use TwoModeQuadrature::*;
            let m = two_mode_moments(&SqueezeParams::new(r, phi).unwrap());
            let d = m.get(X1, X1);
            prop_assert_eq!(d, m.get(Y1, Y1));
            prop_assert_eq!(d, m.get(X2, X2));
            prop_assert_eq!(d, m.get(Y2, Y2));
            prop_assert!(d >= 0.5);
            prop_assert_eq!(m.get(X1, Y1), 0.0);
            prop_assert_eq!(m.get(X2, Y2), 0.0);
            prop_assert_eq!(m.get(X1, X2), -m.get(Y1, Y2));
            prop_assert_eq!(m.dxx(), m.get(X1, X1) + m.get(X2, X2) - 2.0 * m.get(X1, X2));
        }
    }
}
