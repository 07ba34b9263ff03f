//! Physical constants (CODATA 2018, SI).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Below this |cos(theta)| the quadrature estimators refuse to divide.
pub const DEGENERATE_COS_TOL: f64 = 1e-9;
