//! Quantum noise floors for optomechanical force sensing with squeezed light.
//!
//! The crate covers three levels of description:
//!
//! * [`squeezed`]: second moments of single- and two-mode squeezed vacua.
//! * [`operators`]: a pulsed toy model evolved exactly as linear maps on
//!   quadrature operators, with squeezed-light noise metrics.
//! * [`cavity`]: steady-state input-output spectra for position and momentum
//!   couplings, with angle and power optima in [`optimal`].
//!
//! [`oracle`] holds independent numerical cross-checks (phase-space Monte
//! Carlo and a direct linear solve of the Langevin equations).

pub mod cavity;
pub mod cli;
pub mod constants;
pub mod error;
pub mod operators;
pub mod optimal;
pub mod oracle;
pub mod squeezed;

pub use error::{Error, Result};
