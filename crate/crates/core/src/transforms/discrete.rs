use std::f64::consts::PI;
use std::sync::Mutex;

use rayon::prelude::*;

use super::function::{FunctionEvaluator, Integrability};
use super::report::{
    amplification, precision_warnings, ReportEntry, TransformReport, TransformWarning,
};
use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::kernels::{series_estimate, KernelKind, KernelPoint};
use crate::quadrature::{integrate_half_line, DecayHint, IntegralEstimate, Tolerance};

/// `4 / pi^2`, the normalisation shared by every inversion formula.
pub const INVERSION_SCALE: f64 = 4.0 / (PI * PI);

/// Real or imaginary flavour of a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn name(&self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
        }
    }

    fn complete(&self) -> KernelKind {
        match self {
            Part::Re => KernelKind::ReK,
            Part::Im => KernelKind::ImK,
        }
    }

    fn incomplete(&self) -> KernelKind {
        match self {
            Part::Re => KernelKind::ReJ,
            Part::Im => KernelKind::ImJ,
        }
    }
}

/// Which coefficient formula a batch recovery applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recovery {
    /// `(4/pi^2) int K_{alpha+in}(x) f(x) dx`.
    Coefficient { alpha: f64 },
    /// `(4/pi^2) cosh(pi n) int J(x, 1/2+in, pi) f(x) dx`: inverts the
    /// complete-kernel series at `alpha = 1/2`.
    Invert,
    /// `(4/pi^2) cosh(pi n) int K_{1/2+in}(x) f(x) dx`: inverts the
    /// incomplete-kernel series.
    InvertIncomplete,
    /// `(4/pi^2) int J(x, 1/2+in, pi) f(x) dx` without the `cosh` weight.
    Reciprocal,
}

impl Recovery {
    fn kernel(&self, part: Part) -> (KernelKind, f64) {
        match self {
            Recovery::Coefficient { alpha } => (part.complete(), *alpha),
            Recovery::Invert | Recovery::Reciprocal => (part.incomplete(), 0.5),
            Recovery::InvertIncomplete => (part.complete(), 0.5),
        }
    }

    fn weighted(&self) -> bool {
        matches!(self, Recovery::Invert | Recovery::InvertIncomplete)
    }

    /// Factor multiplying the raw `x`-integral at index `n`.
    ///
    /// The inversions halve the `n = 0` entry: the constant trigonometric
    /// mode integrates to twice the weight of the others, and halving makes
    /// recovered coefficients equal the input uniformly in `n`.
    fn scale(&self, part: Part, n: usize) -> Result<f64> {
        if part == Part::Im && n == 0 && !matches!(self, Recovery::Coefficient { .. }) {
            return Err(Error::Domain(
                "imaginary-part inversion starts at n = 1; the series carries a_0 = 0".into(),
            ));
        }
        let mut s = INVERSION_SCALE;
        if self.weighted() {
            s *= amplification(n);
        }
        if n == 0 && !matches!(self, Recovery::Coefficient { .. }) {
            s *= 0.5;
        }
        Ok(s)
    }
}

/// Exponent of the `x -> 0` growth of a kernel.
fn kernel_origin_exponent(kind: KernelKind, alpha: f64) -> f64 {
    if kind.is_incomplete() {
        0.0
    } else if alpha == 0.0 {
        // logarithmic growth; any exponent in (0, 1) covers it
        0.25
    } else {
        alpha.abs()
    }
}

/// `int_0^inf kind(alpha, tau, x) f(x) dx`.
///
/// Split at `x = 1`; the origin side uses the exponential map (kernels at
/// integer `tau` oscillate like `cos(tau ln x)` there), the far side the
/// decaying rule with the combined rate of kernel and function.
pub fn kernel_projection(
    kind: KernelKind,
    alpha: f64,
    tau: f64,
    f: &FunctionEvaluator,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    KernelPoint::at(alpha, tau, 1.0)?;
    if kind.is_imaginary() && (alpha == 0.0 || tau == 0.0) {
        return Ok(IntegralEstimate::exact_zero());
    }
    let behavior = f.integrability();
    let gamma = kernel_origin_exponent(kind, alpha) + behavior.origin_exponent();
    if gamma >= 1.0 {
        return Err(Error::DivergentIntegral(gamma));
    }
    let decay = DecayHint::new(1.0 + behavior.decay_rate())?;
    let failure = Mutex::new(None);
    let est = integrate_half_line(
        |x: f64| {
            let fx = f.evaluate(x);
            if fx == 0.0 {
                return 0.0;
            }
            let k = KernelPoint::at(alpha, tau, x).and_then(|p| kind.evaluate(&p, tol));
            match k {
                Ok(k) => k * fx,
                Err(e) => {
                    failure.lock().expect("failure slot").get_or_insert(e);
                    0.0
                }
            }
        },
        gamma,
        decay,
        tol,
    )?;
    if let Some(e) = failure.into_inner().expect("failure slot") {
        return Err(e);
    }
    est.usable(&format!("x-integral against {}", kind.name()))
}

/// Coefficient `n` under `recovery`, with its scaled error estimate.
pub fn recover_one(
    recovery: Recovery,
    part: Part,
    f: &FunctionEvaluator,
    n: usize,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let scale = recovery.scale(part, n)?;
    let (kind, alpha) = recovery.kernel(part);
    let est = kernel_projection(kind, alpha, n as f64, f, tol)?;
    Ok(IntegralEstimate {
        value: scale * est.value,
        error_estimate: scale * est.error_estimate,
        ..est
    })
}

/// Settings for batch coefficient recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions {
    pub quadrature: Tolerance,
    /// Accuracy wanted in each coefficient; drives the amplification warning.
    pub coefficient_tol: f64,
    /// Index ceiling past which a warning is attached.
    pub max_index: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            quadrature: round_trip_tolerance(),
            coefficient_tol: 1e-6,
            max_index: super::DEFAULT_MAX_INDEX,
        }
    }
}

/// Tolerance at which round trips through the `cosh(pi n)` weights stay
/// accurate to about `1e-7` up to `n = 8`.
pub fn round_trip_tolerance() -> Tolerance {
    Tolerance::new(1e-18, 1e-15, 20_000).expect("valid tolerance")
}

/// Recovers the coefficients at `indices` from `f`.
///
/// `f` is memoised for the duration of the call and entries are computed in
/// parallel; the report lists them in the order given.
pub fn recover(
    recovery: Recovery,
    part: Part,
    f: &FunctionEvaluator,
    indices: &[usize],
    options: &RecoveryOptions,
) -> Result<TransformReport> {
    options.quadrature.validate()?;
    let cached = f.memoized();
    let results: Vec<Result<IntegralEstimate>> = indices
        .par_iter()
        .map(|&n| recover_one(recovery, part, &cached, n, &options.quadrature))
        .collect();
    let mut report = TransformReport::default();
    for (&n, res) in indices.iter().zip(results) {
        let est = res?;
        report.entries.push(ReportEntry {
            index: n,
            value: est.value,
            error_estimate: est.error_estimate,
            amplification: if recovery.weighted() {
                amplification(n)
            } else {
                1.0
            },
            truncation_index: None,
        });
        // Only the weighted formulas multiply the quadrature error by cosh(pi n).
        let abs_tol = if recovery.weighted() {
            options.quadrature.abs_tol
        } else {
            0.0
        };
        report.warnings.extend(precision_warnings(
            n,
            abs_tol,
            options.coefficient_tol,
            options.max_index,
        ));
    }
    Ok(report)
}

fn series(
    kind: KernelKind,
    alpha: f64,
    seq: &CoefficientSequence,
    x: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let last = seq.truncation_index(alpha, x, tol.abs_tol)?;
    series_estimate(
        kind,
        alpha,
        &seq.values()[..(last + 1).min(seq.len())],
        x,
        tol,
    )
}

/// `sum_n a_n Re K_{alpha+in}(x)`.
pub fn forward_re(seq: &CoefficientSequence, alpha: f64, x: f64, tol: &Tolerance) -> Result<f64> {
    Ok(series(KernelKind::ReK, alpha, seq, x, tol)?.value)
}

/// `sum_n a_n Im K_{alpha+in}(x)`; `a_0` has no effect.
pub fn forward_im(seq: &CoefficientSequence, alpha: f64, x: f64, tol: &Tolerance) -> Result<f64> {
    Ok(series(KernelKind::ImK, alpha, seq, x, tol)?.value)
}

/// `sum_n a_n Re J(x, 1/2+in, pi)`.
pub fn forward_incomplete_re(seq: &CoefficientSequence, x: f64, tol: &Tolerance) -> Result<f64> {
    Ok(series(KernelKind::ReJ, 0.5, seq, x, tol)?.value)
}

/// `sum_n a_n Im J(x, 1/2+in, pi)`.
pub fn forward_incomplete_im(seq: &CoefficientSequence, x: f64, tol: &Tolerance) -> Result<f64> {
    Ok(series(KernelKind::ImJ, 0.5, seq, x, tol)?.value)
}

/// Evaluates a forward series at each point, in parallel.
pub fn forward_report(
    kind: KernelKind,
    alpha: f64,
    seq: &CoefficientSequence,
    points: &[f64],
    tol: &Tolerance,
) -> Result<TransformReport> {
    let results: Vec<Result<(IntegralEstimate, usize)>> = points
        .par_iter()
        .map(|&x| {
            let last = seq.truncation_index(alpha, x, tol.abs_tol)?;
            Ok((series(kind, alpha, seq, x, tol)?, last))
        })
        .collect();
    let mut report = TransformReport::default();
    if kind.is_imaginary() && seq.get(0) != 0.0 {
        report
            .warnings
            .push(TransformWarning::IgnoredConstantTerm { value: seq.get(0) });
    }
    for (i, res) in results.into_iter().enumerate() {
        let (est, last) = res?;
        report.entries.push(ReportEntry {
            index: i,
            value: est.value,
            error_estimate: est.error_estimate,
            amplification: 1.0,
            truncation_index: Some(last),
        });
    }
    Ok(report)
}

/// The forward series as a function of `x`, for feeding into inversions.
///
/// Evaluation failures surface as NaN, which the quadrature rejects as a
/// non-finite integrand.
pub fn forward_function(
    kind: KernelKind,
    alpha: f64,
    seq: &CoefficientSequence,
    tol: &Tolerance,
) -> Result<FunctionEvaluator> {
    KernelPoint::at(alpha, 0.0, 1.0)?;
    let integrability = Integrability::new(kernel_origin_exponent(kind, alpha), 1.0)?;
    let seq = seq.clone();
    let tol = *tol;
    Ok(FunctionEvaluator::new(
        move |x| series(kind, alpha, &seq, x, &tol).map_or(f64::NAN, |e| e.value),
        integrability,
    ))
}

/// `(4/pi^2) int_0^inf Re K_{alpha+in}(x) f(x) dx`.
pub fn coeff_re(f: &FunctionEvaluator, alpha: f64, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::Coefficient { alpha }, Part::Re, f, n, tol)?.value)
}

/// `(4/pi^2) int_0^inf Im K_{alpha+in}(x) f(x) dx`.
pub fn coeff_im(f: &FunctionEvaluator, alpha: f64, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::Coefficient { alpha }, Part::Im, f, n, tol)?.value)
}

/// Coefficient `a_n` of `f = sum a_n Re K_{1/2+in}`, halved at `n = 0`.
pub fn invert_re(f: &FunctionEvaluator, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::Invert, Part::Re, f, n, tol)?.value)
}

/// Coefficient `a_n`, `n >= 1`, of `f = sum a_n Im K_{1/2+in}`.
pub fn invert_im(f: &FunctionEvaluator, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::Invert, Part::Im, f, n, tol)?.value)
}

/// Coefficient `a_n` of `f = sum a_n Re J(x, 1/2+in, pi)`, halved at `n = 0`.
pub fn invert_incomplete_re(f: &FunctionEvaluator, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::InvertIncomplete, Part::Re, f, n, tol)?.value)
}

/// Coefficient `a_n`, `n >= 1`, of `f = sum a_n Im J(x, 1/2+in, pi)`.
pub fn invert_incomplete_im(f: &FunctionEvaluator, n: usize, tol: &Tolerance) -> Result<f64> {
    Ok(recover_one(Recovery::InvertIncomplete, Part::Im, f, n, tol)?.value)
}

/// `int_0^inf exp(-x cosh u) f(x) dx`.
pub fn laplace_transform(
    f: &FunctionEvaluator,
    u: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let c = u.cosh();
    let b = f.integrability();
    let est = integrate_half_line(
        |x: f64| {
            let fx = f.evaluate(x);
            if fx == 0.0 {
                0.0
            } else {
                (-x * c).exp() * fx
            }
        },
        b.origin_exponent(),
        DecayHint::new(c + b.decay_rate())?,
        tol,
    )?;
    est.usable("laplace transform")
}
