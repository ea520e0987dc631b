//! Fourth-order finite-volume solver for the 2D incompressible
//! Navier-Stokes equations with no-slip boundaries, using the GePUP
//! formulation with an energy-stable SDIRK time integrator.

pub mod cases;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod extrap;
pub mod grid;
pub mod ops;
pub mod oracle;
pub mod output;
pub mod predictor;
pub mod projection;
pub mod solver;
pub mod stepper;
pub mod tableau;

pub use error::{GepupError, Result};
