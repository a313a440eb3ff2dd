//! The reciprocal pair: coefficients of a complete-kernel series taken
//! against the incomplete kernels without the `cosh(pi n)` weight, so that
//! `a_n cosh(pi n) = b_n`, and the series `sum a_n cosh(pi n) K_{1/2+in}`
//! that rebuilds the function.

use super::discrete::{forward_function, forward_im, forward_re, recover_one, Part, Recovery};
use super::function::FunctionEvaluator;
use super::report::amplification;
use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::kernels::KernelKind;
use crate::quadrature::Tolerance;

fn require_half(alpha: f64) -> Result<()> {
    if alpha == 0.5 {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder {
            alpha,
            reason: "the reciprocal pair relies on trigonometric orthogonality that holds only at alpha = 1/2",
        })
    }
}

/// `(4/pi^2) int_0^inf J(x, 1/2+in, pi) f(x) dx`, halved at `n = 0`
/// (imaginary part: `n >= 1`).
pub fn reciprocal_coefficient(
    part: Part,
    f: &FunctionEvaluator,
    n: usize,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(recover_one(Recovery::Reciprocal, part, f, n, tol)?.value)
}

/// [`reciprocal_coefficient`] of `f = sum b_m K_{alpha+im}`; only
/// `alpha = 1/2` is supported.
pub fn reciprocal_forward(
    part: Part,
    b: &CoefficientSequence,
    alpha: f64,
    n: usize,
    tol: &Tolerance,
) -> Result<f64> {
    require_half(alpha)?;
    let kind = match part {
        Part::Re => KernelKind::ReK,
        Part::Im => KernelKind::ImK,
    };
    let f = forward_function(kind, alpha, b, tol)?;
    reciprocal_coefficient(part, &f, n, tol)
}

/// `sum_n a_n cosh(pi n) K_{alpha+in}(x)` (imaginary part: from `n = 1`);
/// only `alpha = 1/2` is supported.
pub fn reciprocal_reconstruct(
    part: Part,
    a: &CoefficientSequence,
    alpha: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_half(alpha)?;
    let weighted = a.map_indexed(|n, v| amplification(n) * v)?;
    match part {
        Part::Re => forward_re(&weighted, alpha, x, tol),
        Part::Im => forward_im(&weighted, alpha, x, tol),
    }
}
