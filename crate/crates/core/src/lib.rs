//! Relativistic spin-0 (Klein-Gordon) bound states in a spherical pseudo-dot
//! confinement `V(r) = De (r/r0 - r0/r)^2`.
//!
//! Two reductions of the Klein-Gordon equation are supported:
//!
//! * [`Scenario::ExactVariableMass`]: mass `m0 + S(r)` with `S = V`, which
//!   gives a pseudoharmonic Schrödinger-type problem with no approximation.
//! * [`Scenario::ApproxConstantMass`]: constant mass `m0`, where the quartic
//!   `x^2 + 1/x^2` (with `x = r^2/r0^2`) is replaced by its expansion about
//!   `x = 1`.
//!
//! Closed-form energies come from the terminating-Kummer condition and are
//! cross-checked by a finite-difference radial eigensolver in [`oracle`].
//! Units are natural (ħ = c = 1): energies in fm⁻¹, lengths in fm.

pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod spectra;
pub mod verify;
pub mod wavefn;

pub use error::{Error, Result};
pub use model::{ConfinementParams, QuarticMode, Scenario, TaylorCoefficients};
pub use oracle::{FdEigenOutput, OracleEnergy, RadialGrid};
pub use spectra::{Branch, EigenResult, QuantumNumbers, TableEntry};
pub use wavefn::{RadialProfile, WavefunctionSpec};
