//! Discrete series transforms over the kernels and their inversions.
//!
//! The forward transforms sum `a_n` against the complete kernels
//! `K_{alpha+in}` or the incomplete kernels `J(x, 1/2+in, pi)`. At
//! `alpha = 1/2` the two families are biorthogonal under the `x`-integral,
//! which gives the inversion formulas. Every inversion carries a
//! `cosh(pi n)` weight, so absolute quadrature error in the `x`-integral is
//! amplified exponentially in `n`; [`TransformReport`] records the
//! amplification and warns where it exceeds the coefficient budget.

mod continuous;
mod discrete;
mod function;
mod profile;
mod reciprocal;
mod report;
mod sequence;

pub use continuous::{continuous_forward, continuous_inverse, ContinuousInverse, SpectralDecay};
pub use discrete::{
    coeff_im, coeff_re, forward_function, forward_im, forward_incomplete_im, forward_incomplete_re,
    forward_re, forward_report, invert_im, invert_incomplete_im, invert_incomplete_re, invert_re,
    kernel_projection, laplace_transform, recover, recover_one, round_trip_tolerance, Part,
    Recovery, RecoveryOptions, INVERSION_SCALE,
};
pub use function::{FunctionEvaluator, Integrability};
pub use profile::{
    profile_coefficient, profile_function, reconstruct_im, reconstruct_re,
    reconstruct_until_stable, represent_from_profile, PeriodicProfile, ProfileFlavor, STABLE_STEP,
};
pub use reciprocal::{reciprocal_coefficient, reciprocal_forward, reciprocal_reconstruct};
pub use report::{
    amplification, precision_warnings, ReportEntry, TransformReport, TransformWarning,
    DEFAULT_MAX_INDEX,
};
pub use sequence::{CoefficientSequence, DecayCertificate};
