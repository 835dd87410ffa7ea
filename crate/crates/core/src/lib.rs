//! Phase estimation with a two-mode squeezed vacuum in a lossy Mach-Zehnder
//! interferometer: quantum Fisher information, parity detection and its
//! optimization, cross-checked against a truncated Fock-space simulation.

pub mod config;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod optimizer;
pub mod parity;
pub mod qfi;
pub mod symplectic;

pub use config::{LossModel, LossyMziConfig};
pub use error::{Error, Result};
pub use optimizer::{MeasurementPlan, PrecisionReport};
pub use parity::{ParityResult, QuadraticOpMatrix};
pub use qfi::{QfiMethod, QfiResult, ReferenceLimits};
