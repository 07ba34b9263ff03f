//! Frequency-domain noise of a resonantly driven single-sided cavity.
//!
//! Two linearized couplings are supported: radiation pressure on the mirror
//! position (`H = hbar G x X`) and a QND-style coupling to its momentum
//! (`H = hbar G' p X`). Frequencies are angular (rad/s) throughout, with the
//! Fourier convention `d/dt -> -i nu`.
//!
//! The force estimator divides the measured quadrature
//! `X_theta = Y_out cos(theta) + X_out sin(theta)` by its `F_in` coefficient,
//! giving `F_E = a X_in + b Y_in + F_in`. Its measurement-induced PSD splits as
//!
//! * shot: `|b|^2 <Y_in^2>`
//! * backaction: `|a|^2 <X_in^2>`
//! * cross: `Re(a conj(b)) <{X_in, Y_in}>`
//!
//! The thermal `<F_in^2>` is carried separately as an opaque constant.

use num_complex::Complex64;

use crate::constants::{DEGENERATE_COS_TOL, HBAR};
use crate::error::{require_at_least, require_finite, require_positive, Error, Result};
use crate::squeezed::{single_mode_moments, SqueezeParams};

/// Mechanical and optical parameters. The drive is on resonance (zero detuning).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// kg
    pub mass: f64,
    /// rad/s; zero is the free-particle limit.
    pub omega_m: f64,
    /// Cavity energy decay rate, rad/s.
    pub kappa: f64,
    /// Mechanical damping, rad/s.
    pub gamma: f64,
}

impl CavityParams {
    pub fn new(mass: f64, omega_m: f64, kappa: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            mass,
            omega_m,
            kappa,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        require_at_least("omega_m", self.omega_m, 0.0)?;
        require_positive("kappa", self.kappa)?;
        require_at_least("gamma", self.gamma, 0.0)?;
        Ok(())
    }

    /// Always zero; only resonant driving is modeled.
    pub fn detuning(&self) -> f64 {
        0.0
    }

    /// The closed-form optima assume `gamma << omega_m, kappa`; lists violations.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.omega_m > 0.0 && self.gamma > 1e-2 * self.omega_m {
            out.push(format!(
                "gamma = {:e} is not small against omega_m = {:e}; closed-form optima lose accuracy",
                self.gamma, self.omega_m
            ));
        }
        if self.gamma > 1e-2 * self.kappa {
            out.push(format!(
                "gamma = {:e} is not small against kappa = {:e}",
                self.gamma, self.kappa
            ));
        }
        out
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.mass, self.omega_m, self.kappa, gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    /// `G` in rad/s per meter.
    Position,
    /// `G'` in rad/s per (kg m/s).
    Momentum,
}

impl CouplingKind {
    pub fn name(self) -> &'static str {
        match self {
            CouplingKind::Position => "position",
            CouplingKind::Momentum => "momentum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub kind: CouplingKind,
    pub value: f64,
}

impl Coupling {
    pub fn position(g: f64) -> Result<Self> {
        Ok(Self {
            kind: CouplingKind::Position,
            value: require_at_least("coupling", g, 0.0)?,
        })
    }

    pub fn momentum(g_prime: f64) -> Result<Self> {
        Ok(Self {
            kind: CouplingKind::Momentum,
            value: require_at_least("coupling", g_prime, 0.0)?,
        })
    }

    /// Momentum coupling drawing the same optical power as position coupling `g`: `G' = G / (m kappa)`.
    pub fn momentum_at_same_power(g: f64, cavity: &CavityParams) -> Result<Self> {
        Self::momentum(g / (cavity.mass * cavity.kappa))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibilities {
    /// `sqrt(kappa) / (-i nu + kappa/2)`
    pub chi_c: Complex64,
    /// `-1 / (m (nu^2 - omega_m^2 + i gamma nu))`
    pub chi_m: Complex64,
    /// Cavity reflection phase `e^{i phi_c} = (-i nu - kappa/2) / (-i nu + kappa/2)`.
    pub phase: Complex64,
}

pub fn susceptibilities(p: &CavityParams, nu: f64) -> Result<Susceptibilities> {
    require_finite("nu", nu)?;
    let i = Complex64::i();
    let half_kappa = Complex64::new(0.5 * p.kappa, 0.0);
    let cavity_den = -i * nu + half_kappa;
    let mech_den = Complex64::new(nu * nu - p.omega_m * p.omega_m, p.gamma * nu) * p.mass;
    if mech_den.norm() == 0.0 {
        return Err(Error::SusceptibilitySingularity { nu });
    }
    Ok(Susceptibilities {
        chi_c: p.kappa.sqrt() / cavity_den,
        chi_m: -1.0 / mech_den,
        phase: (-i * nu - half_kappa) / cavity_den,
    })
}

/// Coefficients of `(X_in, Y_in, F_in)` in one output quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputResponse {
    pub x_in: Complex64,
    pub y_in: Complex64,
    pub f_in: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputQuadratures {
    pub x_out: InputResponse,
    pub y_out: InputResponse,
}

/// `X_out = e^{i phi_c} X_in`, `Y_out = e^{i phi_c} Y_in + G chi_c chi_m (F_in - hbar G chi_c X_in)`.
pub fn output_quadratures_position(p: &CavityParams, g: f64, nu: f64) -> Result<OutputQuadratures> {
    p.validate()?;
    require_at_least("coupling", g, 0.0)?;
    let s = susceptibilities(p, nu)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(OutputQuadratures {
        x_out: InputResponse {
            x_in: s.phase,
            y_in: zero,
            f_in: zero,
        },
        y_out: InputResponse {
            x_in: -HBAR * g * g * s.chi_c * s.chi_c * s.chi_m,
            y_in: s.phase,
            f_in: g * s.chi_c * s.chi_m,
        },
    })
}

/// `Y_out = e^{i phi_c} Y_in - i G' chi_c chi_m m nu F_in - hbar m^2 omega_m^2 G'^2 chi_c^2 chi_m X_in`.
pub fn output_quadratures_momentum(p: &CavityParams, g_prime: f64, nu: f64) -> Result<OutputQuadratures> {
    p.validate()?;
    require_at_least("coupling", g_prime, 0.0)?;
    let s = susceptibilities(p, nu)?;
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    let m = p.mass;
    let w2 = p.omega_m * p.omega_m;
    Ok(OutputQuadratures {
        x_out: InputResponse {
            x_in: s.phase,
            y_in: zero,
            f_in: zero,
        },
        y_out: InputResponse {
            x_in: -HBAR * m * m * w2 * g_prime * g_prime * s.chi_c * s.chi_c * s.chi_m,
            y_in: s.phase,
            f_in: -i * g_prime * s.chi_c * s.chi_m * m * nu,
        },
    })
}

pub fn output_quadratures(p: &CavityParams, coupling: &Coupling, nu: f64) -> Result<OutputQuadratures> {
    match coupling.kind {
        CouplingKind::Position => output_quadratures_position(p, coupling.value, nu),
        CouplingKind::Momentum => output_quadratures_momentum(p, coupling.value, nu),
    }
}

/// Per-frequency decomposition of the measurement-induced force PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub nu: f64,
    pub shot: f64,
    pub backaction: f64,
    /// Signed cross-correlator contribution.
    pub cross: f64,
    /// `shot + backaction + cross`; excludes the thermal force.
    pub total: f64,
    pub theta: f64,
    pub squeeze: SqueezeParams,
    /// Opaque `<F_in^2>`, reported but never folded into `total`.
    pub thermal_force: f64,
}

impl SpectrumPoint {
    pub fn with_thermal_force(mut self, f_in2: f64) -> Self {
        self.thermal_force = f_in2;
        self
    }

    pub fn total_with_thermal(&self) -> f64 {
        self.total + self.thermal_force
    }
}

/// Coefficients `(a, b)` of `X_in` and `Y_in` in the force estimator.
pub fn force_estimator(out: &OutputQuadratures, theta: f64) -> Result<(Complex64, Complex64)> {
    let (s, c) = theta.sin_cos();
    if c.abs() < DEGENERATE_COS_TOL {
        return Err(Error::DegenerateQuadrature {
            cos_theta: c,
            tolerance: DEGENERATE_COS_TOL,
        });
    }
    let signal = out.y_out.f_in * c + out.x_out.f_in * s;
    if signal.norm() == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let a = (out.y_out.x_in * c + out.x_out.x_in * s) / signal;
    let b = (out.y_out.y_in * c + out.x_out.y_in * s) / signal;
    Ok((a, b))
}

fn spectrum_from_outputs(out: &OutputQuadratures, nu: f64, theta: f64, sq: &SqueezeParams) -> Result<SpectrumPoint> {
    let (a, b) = force_estimator(out, theta)?;
    let m = single_mode_moments(sq);
    let shot = b.norm_sqr() * m.yy;
    let backaction = a.norm_sqr() * m.xx;
    let cross = (a * b.conj()).re * m.xy_anti;
    Ok(SpectrumPoint {
        nu,
        shot,
        backaction,
        cross,
        total: shot + backaction + cross,
        theta,
        squeeze: *sq,
        thermal_force: 0.0,
    })
}

pub fn force_psd_position(p: &CavityParams, g: f64, nu: f64, theta: f64, sq: &SqueezeParams) -> Result<SpectrumPoint> {
    let out = output_quadratures_position(p, g, nu)?;
    spectrum_from_outputs(&out, nu, theta, sq)
}

/// Rejects `nu = 0`, where the momentum response to a force vanishes.
pub fn force_psd_momentum(
    p: &CavityParams,
    g_prime: f64,
    nu: f64,
    theta: f64,
    sq: &SqueezeParams,
) -> Result<SpectrumPoint> {
    if nu == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let out = output_quadratures_momentum(p, g_prime, nu)?;
    spectrum_from_outputs(&out, nu, theta, sq)
}

pub fn force_psd(
    p: &CavityParams,
    coupling: &Coupling,
    nu: f64,
    theta: f64,
    sq: &SqueezeParams,
) -> Result<SpectrumPoint> {
    match coupling.kind {
        CouplingKind::Position => force_psd_position(p, coupling.value, nu, theta, sq),
        CouplingKind::Momentum => force_psd_momentum(p, coupling.value, nu, theta, sq),
    }
}
