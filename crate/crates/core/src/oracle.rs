//! Independent numerical checks of the analytic noise values.
//!
//! [`estimate_noise`] samples classical Gaussian quadratures with the symmetrized
//! moments of the probe light, pushes each sample through the kick-drift-kick
//! sequence and the estimator, and averages the squared residual. Only
//! symmetrized moments enter `N^2`, so this is exact in expectation.
//!
//! [`estimate_output_coefficients`] solves the frequency-domain Langevin equations
//! and input-output relations as a 4x4 complex linear system.

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use std::f64::consts::PI;

use crate::cavity::{output_quadratures, CavityParams, Coupling, CouplingKind, InputResponse, OutputQuadratures};
use crate::constants::{DEGENERATE_COS_TOL, HBAR};
use crate::error::{require_finite, Error, Result};
use crate::operators::{
    noise_metric_single, noise_metric_single_lossy, noise_metric_two, ToySingleParams, ToyTwoParams,
};
use crate::squeezed::{single_mode_moments, two_mode_moments, SqueezeParams};

/// Identifier written into run metadata.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9), seed_from_u64(seed), stream = chunk index";
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const MIN_SAMPLES: usize = 10_000;
const CHUNK: usize = 1 << 15;
const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
}

impl OracleConfig {
    pub fn new(seed: u64, samples: usize) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::invalid(
                "samples",
                format!("need at least {MIN_SAMPLES}, got {samples}"),
            ));
        }
        Ok(Self { seed, samples })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ToyModel {
    /// Lossy when `eta > 0`.
    Single(ToySingleParams),
    Two(ToyTwoParams),
}

impl ToyModel {
    /// The closed-form value the oracle is checked against.
    pub fn analytic_noise(&self, sq: &SqueezeParams) -> Result<f64> {
        match self {
            ToyModel::Single(p) if p.eta > 0.0 => noise_metric_single_lossy(p, sq),
            ToyModel::Single(p) => noise_metric_single(p, sq),
            ToyModel::Two(p) => noise_metric_two(p, sq),
        }
    }

    fn light_dim(&self) -> usize {
        match self {
            ToyModel::Single(_) => 2,
            ToyModel::Two(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub mean: f64,
    /// Standard error of the mean squared residual.
    pub stderr: f64,
    pub samples: usize,
}

impl OracleEstimate {
    /// `|mean - value| <= k * stderr`.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }

    /// Distance from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.stderr
    }
}

/// Factor `L` with `L L^T = sigma`, via eigendecomposition. Eigenvalues in `[-1e-14, 0)` are clamped.
pub fn gaussian_factor(sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(sigma.clone());
    let mut scale = DVector::zeros(eig.eigenvalues.len());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l < -EIGEN_FLOOR {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: l });
        }
        scale[i] = l.max(0.0).sqrt();
    }
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&scale))
}

/// Symmetrized covariance of the light quadratures, ordered `(X, Y)` or `(X1, Y1, X2, Y2)`.
fn light_covariance(model: &ToyModel, sq: &SqueezeParams) -> DMatrix<f64> {
    match model {
        ToyModel::Single(_) => {
            let m = single_mode_moments(sq);
            DMatrix::from_row_slice(2, 2, &[m.xx, m.xy_sym(), m.xy_sym(), m.yy])
        }
        ToyModel::Two(_) => {
            let t = two_mode_moments(sq).table;
            DMatrix::from_fn(4, 4, |i, j| t[i][j])
        }
    }
}

/// Squared residual for one sample. `light` holds the optical draws, `extra` four more standard normals.
fn squared_residual(model: &ToyModel, light: &[f64], extra: [f64; 4]) -> f64 {
    // Mechanical initial values are arbitrary; the estimator must cancel them.
    let (x0, p0) = (extra[0], extra[1]);
    match model {
        ToyModel::Single(p) => {
            let (z, b) = (p.zeta, p.beta);
            let (x, mut y) = (light[0], light[1]);
            let (mut q, mut mom) = (x0, p0);
            y -= z * q;
            mom -= z * x;
            q += b * mom;
            y -= z * q;
            let (st, ct) = p.theta.sin_cos();
            let (se, ce) = p.eta.sin_cos();
            let (xa, ya) = (extra[2] * 0.5f64.sqrt(), extra[3] * 0.5f64.sqrt());
            let y_out = ce * y + se * ya;
            let x_out = ce * x + se * xa;
            let estimate = (y_out * ct + x_out * st) / (-2.0 * z * ct);
            let r = estimate - ce * (x0 + 0.5 * b * p0);
            r * r
        }
        ToyModel::Two(p) => {
            let (z1, z2, b) = (p.zeta1, p.zeta2, p.beta);
            let (x1, mut y1, x2, mut y2) = (light[0], light[1], light[2], light[3]);
            let (mut q, mut mom) = (x0, p0);
            y1 -= z1 * q;
            y2 += z2 * q;
            mom -= z1 * x1 - z2 * x2;
            q += b * mom;
            y1 -= z1 * q;
            y2 += z2 * q;
            let (st, ct) = p.theta.sin_cos();
            let measured = (y1 - y2) * ct + (x1 - x2) * st;
            let r = measured / (-2.0 * (z1 + z2) * ct) - (x0 + 0.5 * b * p0);
            r * r
        }
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

fn check_model(model: &ToyModel) -> Result<()> {
    let (theta, signal) = match model {
        ToyModel::Single(p) => {
            p.validate()?;
            (p.theta, p.zeta)
        }
        ToyModel::Two(p) => {
            p.validate()?;
            (p.theta, p.zeta1 + p.zeta2)
        }
    };
    if theta.cos().abs() < DEGENERATE_COS_TOL {
        return Err(Error::DegenerateQuadrature {
            cos_theta: theta.cos(),
            tolerance: DEGENERATE_COS_TOL,
        });
    }
    if signal == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(())
}

/// Monte-Carlo estimate of `N^2`. Deterministic in `(seed, samples)`.
pub fn estimate_noise(model: &ToyModel, sq: &SqueezeParams, cfg: &OracleConfig) -> Result<OracleEstimate> {
    check_model(model)?;
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("need at least {MIN_SAMPLES}, got {}", cfg.samples),
        ));
    }
    let factor = gaussian_factor(&light_covariance(model, sq))?;
    let dim = model.light_dim();
    let chunks = cfg.samples.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(cfg.samples - k * CHUNK);
            let mut z = vec![0.0; dim];
            let mut light = vec![0.0; dim];
            let mut acc = Moments::default();
            for _ in 0..n {
                for v in z.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                for (i, out) in light.iter_mut().enumerate() {
                    *out = (0..dim).map(|j| factor[(i, j)] * z[j]).sum();
                }
                let extra: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                acc.push(squared_residual(model, &light, extra));
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::default(), Moments::merge);
    let variance = total.m2 / (total.n - 1.0);
    Ok(OracleEstimate {
        mean: total.mean,
        stderr: (variance / total.n).sqrt(),
        samples: cfg.samples,
    })
}

/// Output-quadrature coefficients from a direct solve of
///
/// ```text
/// (-i nu + kappa/2) X = sqrt(kappa) X_in
/// (-i nu + kappa/2) Y = sqrt(kappa) Y_in - G x - G' p
/// -i nu x = p/m + hbar G' X
/// -i nu p = -m omega_m^2 x - gamma p + F_in - hbar G X
/// X_out = X_in - sqrt(kappa) X,  Y_out = Y_in - sqrt(kappa) Y
/// ```
///
/// with only the configured coupling nonzero.
pub fn estimate_output_coefficients(p: &CavityParams, coupling: &Coupling, nu: f64) -> Result<OutputQuadratures> {
    p.validate()?;
    require_finite("nu", nu)?;
    let (g, gp) = match coupling.kind {
        CouplingKind::Position => (coupling.value, 0.0),
        CouplingKind::Momentum => (0.0, coupling.value),
    };
    let c = |re: f64| Complex64::new(re, 0.0);
    let i = Complex64::i();
    let cav = -i * nu + c(0.5 * p.kappa);
    let zero = c(0.0);
    // unknowns (X, Y, x, p)
    #[rustfmt::skip]
    let a = Matrix4::new(
        cav,            zero, zero,                       zero,
        zero,           cav,  c(g),                       c(gp),
        c(-HBAR * gp),  zero, -i * nu,                    c(-1.0 / p.mass),
        c(HBAR * g),    zero, c(p.mass * p.omega_m.powi(2)), -i * nu + c(p.gamma),
    );
    let lu = a.lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..4).map(|k| u[(k, k)].norm()).collect();
    let largest = pivots.iter().cloned().fold(0.0, f64::max);
    if pivots.iter().any(|d| *d <= 1e-13 * largest) {
        return Err(Error::SingularSystem);
    }
    let sk = p.kappa.sqrt();
    let solve = |rhs: Vector4<Complex64>| lu.solve(&rhs).ok_or(Error::SingularSystem);
    // columns: response to unit X_in, Y_in, F_in
    let rx = solve(Vector4::new(c(sk), zero, zero, zero))?;
    let ry = solve(Vector4::new(zero, c(sk), zero, zero))?;
    let rf = solve(Vector4::new(zero, zero, zero, c(1.0)))?;
    let out = |k: usize, input: [Complex64; 3]| InputResponse {
        x_in: input[0] - sk * rx[k],
        y_in: input[1] - sk * ry[k],
        f_in: input[2] - sk * rf[k],
    };
    let (one, z0) = (c(1.0), zero);
    let result = OutputQuadratures {
        x_out: out(0, [one, z0, z0]),
        y_out: out(1, [z0, one, z0]),
    };
    let finite = |r: &InputResponse| {
        [r.x_in, r.y_in, r.f_in]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    };
    if !(finite(&result.x_out) && finite(&result.y_out)) {
        return Err(Error::SingularSystem);
    }
    Ok(result)
}

/// Largest relative difference between matching coefficients of two output tables.
pub fn max_relative_difference(a: &OutputQuadratures, b: &OutputQuadratures) -> f64 {
    [
        (a.x_out.x_in, b.x_out.x_in),
        (a.x_out.y_in, b.x_out.y_in),
        (a.x_out.f_in, b.x_out.f_in),
        (a.y_out.x_in, b.y_out.x_in),
        (a.y_out.y_in, b.y_out.y_in),
        (a.y_out.f_in, b.y_out.f_in),
    ]
    .iter()
    .map(|(x, y)| {
        let scale = x.norm().max(y.norm());
        if scale == 0.0 {
            0.0
        } else {
            (x - y).norm() / scale
        }
    })
    .fold(0.0, f64::max)
}

/// Randomized toy configurations: lossless single-mode, lossy single-mode and
/// (possibly asymmetric) two-mode, with arbitrary squeezing.
pub fn random_toy_cases(seed: u64, count: usize) -> Result<Vec<(ToyModel, SqueezeParams)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (rng.random_range(lo.ln()..hi.ln())).exp();
    (0..count)
        .map(|k| {
            let zeta = log_uniform(&mut rng, 0.2, 3.0);
            let beta = log_uniform(&mut rng, 0.1, 5.0);
            let theta = rng.random_range(-1.2..1.2);
            let sq = SqueezeParams::new(rng.random_range(0.0..2.0), rng.random_range(-PI..PI))?;
            let model = match k % 5 {
                0 | 1 => ToyModel::Single(ToySingleParams::new(zeta, beta, theta)?),
                2 => ToyModel::Single(ToySingleParams::with_loss_fraction(
                    zeta,
                    beta,
                    theta,
                    rng.random_range(0.0..0.5),
                )?),
                _ => ToyModel::Two(ToyTwoParams::new(zeta, zeta * rng.random_range(0.8..1.0), beta, theta)?),
            };
            Ok((model, sq))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementCase {
    pub model: ToyModel,
    pub squeeze: SqueezeParams,
    pub analytic: f64,
    pub estimate: OracleEstimate,
}

impl AgreementCase {
    pub fn passes(&self, k_sigma: f64) -> bool {
        self.estimate.agrees_with(self.analytic, k_sigma)
    }
}

/// Compares `analytic` against the Monte-Carlo estimate for every case. Case `i` samples with seed `cfg.seed + i`.
pub fn agreement_suite(
    cases: &[(ToyModel, SqueezeParams)],
    cfg: &OracleConfig,
    analytic: impl Fn(&ToyModel, &SqueezeParams) -> Result<f64>,
) -> Result<Vec<AgreementCase>> {
    cases
        .iter()
        .enumerate()
        .map(|(i, (model, sq))| {
            let case_cfg = OracleConfig {
                seed: cfg.seed.wrapping_add(i as u64),
                samples: cfg.samples,
            };
            Ok(AgreementCase {
                model: *model,
                squeeze: *sq,
                analytic: analytic(model, sq)?,
                estimate: estimate_noise(model, sq, &case_cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientCheck {
    pub kind: CouplingKind,
    pub nu: f64,
    pub coupling: f64,
    pub max_relative_error: f64,
}

/// Closed-form output coefficients against the linear solve over every `(nu, coupling)` pair.
pub fn coefficient_suite(p: &CavityParams, nus: &[f64], couplings: &[f64]) -> Result<Vec<CoefficientCheck>> {
    let mut out = Vec::with_capacity(2 * nus.len() * couplings.len());
    for kind in [CouplingKind::Position, CouplingKind::Momentum] {
        for &nu in nus {
            for &g in couplings {
                let coupling = Coupling { kind, value: g };
                let closed = output_quadratures(p, &coupling, nu)?;
                let solved = estimate_output_coefficients(p, &coupling, nu)?;
                out.push(CoefficientCheck {
                    kind,
                    nu,
                    coupling: g,
                    max_relative_error: max_relative_difference(&closed, &solved),
                });
            }
        }
    }
    Ok(out)
}
