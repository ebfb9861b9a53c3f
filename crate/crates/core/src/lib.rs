//! Numerical toolkit for the nonlocal isoperimetric (liquid drop) energy
//! `P(E) + λ·NL(E)` at the volume of the unit ball.
//!
//! The crate evaluates perimeters, Newton-kernel self energies and Riesz
//! potentials on radial and star-shaped sets, computes the oscillation and
//! potential asymmetries, and checks numerically the chain of identities and
//! inequalities showing that the ball minimizes the energy for small coupling.
//!
//! Module map:
//!
//! - [`shapes`]: radial sets in `R^n` and star-shaped surfaces in `R^3`.
//! - [`potentials`]: Riesz potentials, the nonlocal energy and the ½-Laplacian.
//! - [`asymmetry`]: `β` and `γ` asymmetries and the divergence identity.
//! - [`verify`]: verdict records for every identity and inequality check.
//! - [`energy_opt`]: energy assembly, scaling, stability sweeps and descent.
//! - [`cli`]: the batch front end behind the `liquiddrop` binary.

pub mod asymmetry;
pub mod cli;
pub mod energy_opt;
pub mod error;
pub mod quad;
pub mod potentials;
pub mod shapes;
pub mod verify;
mod simplex;

pub use error::{Error, Result};
