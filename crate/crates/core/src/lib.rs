//! Finite-temperature Lifshitz theory for five-layer planar stacks of
//! isotropic magnetodielectric media.
//!
//! - [`material`]: permittivity and permeability on the imaginary axis,
//!   including tabulated optical data through a Kramers–Kronig transform.
//! - [`stack`]: reflection coefficients and the mode function G^λ.
//! - [`lifshitz`]: k∥ quadrature and Matsubara sums for energies and
//!   normal pressures.
//! - [`tangential`]: tangential force on the middle plate of the misaligned
//!   system.
//! - [`torque`]: crossed-plate overlap geometry, torque and edge estimates.

pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod material;
pub mod quadrature;
pub mod stack;
pub mod summation;
pub mod tangential;
pub mod torque;

pub use error::{Error, Result};
