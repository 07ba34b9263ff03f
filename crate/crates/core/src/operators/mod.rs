//! Heisenberg-picture evolution engine and the pulsed toy models built on it.

mod basis;
mod linear;
pub mod physical;
pub mod toy;

pub use basis::{OperatorBasis, OperatorKind};
pub use linear::{AffineMap, CorrelatorMatrix, OperatorVector};
pub use physical::{
    beta_from_physical, linearization_check, zeta_from_physical, LinearizationReport, DEFAULT_LINEARIZATION_MARGIN,
};
pub use toy::{
    evolve_single, evolve_two, measured_quadrature_single, measured_quadrature_two, noise_metric_single,
    noise_metric_single_lossy, noise_metric_two, position_estimator_single, position_estimator_two, Evolution,
    ToySingleParams, ToyTwoParams,
};
