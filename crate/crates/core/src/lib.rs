//! Fractional action-like variational calculus.
//!
//! The crate evaluates actions whose Lagrangian is weighted by the
//! power-law kernel `(t - tau)^(alpha - 1) / Gamma(alpha)`, applies left and
//! right Riemann-Liouville derivatives and Cresson's complex combination of
//! them, and checks or solves the associated fractional Euler-Lagrange
//! equations in one, two and three dimensions.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the `falva-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod action;
pub mod error;
pub mod euler;
pub mod exprdsl;
pub mod fracops;
pub mod numcore;

pub use num_complex::Complex64;

pub use error::{Error, Result};
