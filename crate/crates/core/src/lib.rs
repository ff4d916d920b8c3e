//! Uncertainty measures and uncertainty relations for a quantum particle on a
//! circle.
//!
//! States are stored as truncated coefficient sequences over the
//! angular-momentum basis `|m>` (see [`states::CircleState`]). On top of that
//! representation the crate provides:
//!
//! * the Jacobi theta function used for coherent-state overlaps ([`theta`]),
//! * the coherent, squeezed-coherent, cat and angular-momentum state families
//!   ([`states`]),
//! * matrix elements, densities and angle moments computed on the branch
//!   `[phi0 - pi, phi0 + pi]` centred on the most probable angle
//!   ([`observables`]),
//! * Kowalski-Rembielinski uncertainties, the Gram-Robertson matrix and the
//!   relations and squeezing criteria derived from it ([`uncertainty`]),
//! * an independent quadrature path used to cross-check everything
//!   ([`oracle`]),
//! * parameter sweeps, figure tables and the acceptance suite
//!   ([`experiments`], [`acceptance`]).

pub mod acceptance;
pub mod error;
pub mod experiments;
pub mod observables;
pub mod oracle;
pub mod states;
pub mod theta;
pub mod uncertainty;

pub use error::{Error, Result};
pub use num_complex::Complex64;
