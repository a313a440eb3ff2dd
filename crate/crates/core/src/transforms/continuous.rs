//! The continuous-index pair at `alpha = 1/2`:
//! `F(tau) = int_0^inf K_{1/2+i tau}(x) f(x) dx` and its inverse
//! `f(x) = (4/pi^2) int_0^inf cosh(pi tau) K_{1/2+i tau}(x) F(tau) dtau`,
//! the latter truncated at a caller-chosen `tau_max`.

use std::f64::consts::FRAC_PI_2;

use super::discrete::{kernel_projection, Part, INVERSION_SCALE};
use super::function::FunctionEvaluator;
use crate::error::{Error, Result};
use crate::kernels::{bessel_k_half, KernelKind, KernelPoint};
use crate::quadrature::{integrate_finite_paneled, Tolerance};

fn kind(part: Part) -> KernelKind {
    match part {
        Part::Re => KernelKind::ReK,
        Part::Im => KernelKind::ImK,
    }
}

/// `int_0^inf K_{1/2+i tau}(x) f(x) dx` (real or imaginary part).
pub fn continuous_forward(
    part: Part,
    f: &FunctionEvaluator,
    tau: f64,
    tol: &Tolerance,
) -> Result<f64> {
    Ok(kernel_projection(kind(part), 0.5, tau, f, tol)?.value)
}

/// Caller's promise `|cosh(pi tau) F(tau)| <= bound * exp(-rate tau)` for
/// `tau >= tau_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecay {
    pub bound: f64,
    pub rate: f64,
}

impl SpectralDecay {
    pub fn new(bound: f64, rate: f64) -> Result<Self> {
        if !(bound >= 0.0 && bound.is_finite()) || !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::Domain(format!(
                "decay statement needs finite bound >= 0 and rate >= 0, got ({bound}, {rate})"
            )));
        }
        Ok(Self { bound, rate })
    }
}

/// Value of the truncated inverse with the error budget split into
/// quadrature error and the certified tail beyond `tau_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousInverse {
    pub value: f64,
    pub error_estimate: f64,
    pub tail_bound: f64,
}

/// Bound on the discarded tail, optimised over the kernel-bound angle:
/// `|K_{1/2+i tau}(x)| <= exp(-d tau) K_{1/2}(x cos d)`.
fn tail_bound(decay: SpectralDecay, x: f64, tau_max: f64) -> f64 {
    (1..64)
        .map(|k| {
            let d = FRAC_PI_2 * k as f64 / 64.0;
            let r = decay.rate + d;
            INVERSION_SCALE * decay.bound * bessel_k_half(x * d.cos()) * (-r * tau_max).exp() / r
        })
        .fold(f64::INFINITY, f64::min)
}

/// `(4/pi^2) int_0^{tau_max} cosh(pi tau) K_{1/2+i tau}(x) F(tau) dtau`.
///
/// A decay statement for `cosh(pi tau) F(tau)` is required; without one the
/// truncation error cannot be bounded and the call is refused.
pub fn continuous_inverse<F: Fn(f64) -> f64>(
    part: Part,
    spectrum: F,
    x: f64,
    tau_max: f64,
    decay: Option<SpectralDecay>,
    tol: &Tolerance,
) -> Result<ContinuousInverse> {
    let Some(decay) = decay else {
        return Err(Error::MissingDecay(
            "the cosh(pi tau) weight makes truncation at tau_max unsafe without a bound on \
             cosh(pi tau) F(tau)"
                .into(),
        ));
    };
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::Domain(format!(
            "tau_max must be positive, got {tau_max}"
        )));
    }
    KernelPoint::at(0.5, 0.0, x)?;
    let kind = kind(part);
    let mut failure = None;
    let panels = (2.0 * tau_max).ceil() as usize;
    let est = integrate_finite_paneled(
        |tau| {
            let spectral = (std::f64::consts::PI * tau).cosh() * spectrum(tau);
            if spectral == 0.0 {
                return 0.0;
            }
            match KernelPoint::at(0.5, tau, x).and_then(|p| kind.evaluate(&p, tol)) {
                Ok(k) => spectral * k,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        tau_max,
        panels,
        tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est.usable("continuous inverse")?;
    Ok(ContinuousInverse {
        value: INVERSION_SCALE * est.value,
        error_estimate: INVERSION_SCALE * est.error_estimate,
        tail_bound: tail_bound(decay, x, tau_max),
    })
}
