//! Index series over Lebedev-Skalskaya kernels and their inversions.
//!
//! The crate evaluates the kernels `Re K_{alpha+i tau}(x)`, `Im K_{alpha+i tau}(x)`
//! and their incomplete counterparts cut at `u = pi`, builds the discrete
//! series transforms on top of them, and implements the inversion formulas
//! that hold at `alpha = +-1/2`. Closed-form Laplace compositions of the
//! kernels are provided as analytic oracles.
//!
//! Everything is real-valued double-precision arithmetic on top of a single
//! adaptive Gauss-Kronrod engine ([`quadrature`]).

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod identities;
pub mod kernels;
pub mod quadrature;
pub mod transforms;

pub use error::{Error, Result};
pub use quadrature::{DecayHint, IntegralEstimate, Termination, Tolerance};
