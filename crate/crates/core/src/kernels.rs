//! Lebedev-Skalskaya kernels and their incomplete counterparts.
//!
//! With `nu = alpha + i*tau` the kernels are the real and imaginary parts of
//! the Macdonald function `K_nu(x)`, written as real integrals over `u`:
//!
//! ```text
//! Re K(x) = int_0^inf exp(-x cosh u) cosh(alpha u) cos(tau u) du
//! Im K(x) = int_0^inf exp(-x cosh u) sinh(alpha u) sin(tau u) du
//! ```
//!
//! The incomplete variants stop the `u`-integral at `pi`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_compensated, oscillation_panels, IntegralEstimate, Tolerance, PI_LO,
};

/// Order `alpha + i*tau` of a kernel, `|alpha| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOrder {
    alpha: f64,
    tau: f64,
}

impl KernelOrder {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        if !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be finite, got {tau}")));
        }
        Ok(Self { alpha, tau })
    }

    /// Order `alpha + i*n` for a discrete index `n`.
    pub fn discrete(alpha: f64, n: usize) -> Result<Self> {
        Self::new(alpha, n as f64)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// A kernel order together with its argument `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    order: KernelOrder,
    x: f64,
}

impl KernelPoint {
    pub fn new(order: KernelOrder, x: f64) -> Result<Self> {
        validate_x(x)?;
        Ok(Self { order, x })
    }

    /// Shorthand for `KernelPoint::new(KernelOrder::new(alpha, tau)?, x)`.
    pub fn at(alpha: f64, tau: f64, x: f64) -> Result<Self> {
        Self::new(KernelOrder::new(alpha, tau)?, x)
    }

    pub fn order(&self) -> KernelOrder {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.order.alpha
    }

    pub fn tau(&self) -> f64 {
        self.order.tau
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// Which of the four kernel families to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    /// `Re K_{alpha+i tau}(x)`
    ReK,
    /// `Im K_{alpha+i tau}(x)`
    ImK,
    /// `Re J(x, alpha+i tau, pi)`
    ReJ,
    /// `Im J(x, alpha+i tau, pi)`
    ImJ,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [Self::ReK, Self::ImK, Self::ReJ, Self::ImJ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::ReK => "re_k",
            Self::ImK => "im_k",
            Self::ReJ => "re_j",
            Self::ImJ => "im_j",
        }
    }

    pub fn is_imaginary(&self) -> bool {
        matches!(self, Self::ImK | Self::ImJ)
    }

    pub fn is_incomplete(&self) -> bool {
        matches!(self, Self::ReJ | Self::ImJ)
    }

    pub fn evaluate(&self, point: &KernelPoint, tol: &Tolerance) -> Result<f64> {
        Ok(self.estimate(point, tol)?.value)
    }

    /// Evaluates the kernel and returns the full quadrature record.
    pub fn estimate(&self, point: &KernelPoint, tol: &Tolerance) -> Result<IntegralEstimate> {
        let alpha = point.alpha();
        let x = point.x();
        // Re is even in tau, Im is odd.
        let (tau, sign) = if point.tau() < 0.0 {
            (-point.tau(), if self.is_imaginary() { -1.0 } else { 1.0 })
        } else {
            (point.tau(), 1.0)
        };
        if self.is_imaginary() && (alpha == 0.0 || tau == 0.0) {
            return Ok(IntegralEstimate::exact_zero());
        }
        let (len_hi, len_lo) = if self.is_incomplete() {
            (PI, PI_LO)
        } else {
            (kernel_truncation(alpha, x, tol.abs_tol), 0.0)
        };
        let panels = oscillation_panels(0.0, len_hi, tau);
        let est = if self.is_imaginary() {
            integrate_compensated(
                |u, du| im_integrand(alpha, tau, x, u, du),
                len_hi,
                len_lo,
                panels,
                tol,
            )?
        } else {
            integrate_compensated(
                |u, du| re_integrand(alpha, tau, x, u, du),
                len_hi,
                len_lo,
                panels,
                tol,
            )?
        };
        let est = est.usable(self.name())?;
        Ok(IntegralEstimate {
            value: sign * est.value,
            ..est
        })
    }
}

/// `exp(-x cosh u) cosh(alpha u) cos(tau u)` at the node `u + du`, to first order in `du`.
#[inline]
pub(crate) fn re_integrand(alpha: f64, tau: f64, x: f64, u: f64, du: f64) -> f64 {
    let e = (-x * u.cosh()).exp();
    let (ch, sh) = ((alpha * u).cosh(), (alpha * u).sinh());
    let (s, c) = (tau * u).sin_cos();
    let g = ch * c;
    let dg = -x * u.sinh() * g + alpha * sh * c - tau * ch * s;
    e * (g + dg * du)
}

/// `exp(-x cosh u) sinh(alpha u) sin(tau u)` at the node `u + du`, to first order in `du`.
#[inline]
pub(crate) fn im_integrand(alpha: f64, tau: f64, x: f64, u: f64, du: f64) -> f64 {
    let e = (-x * u.cosh()).exp();
    let (ch, sh) = ((alpha * u).cosh(), (alpha * u).sinh());
    let (s, c) = (tau * u).sin_cos();
    let g = sh * s;
    let dg = -x * u.sinh() * g + alpha * ch * s + tau * sh * c;
    e * (g + dg * du)
}

/// `sum_n a_n kind(alpha, n, x)` as a single `u`-integral.
///
/// The trigonometric polynomial `sum a_n cos(n u)` (or `sin`) is folded into
/// the integrand, so the cost is one kernel evaluation rather than one per
/// term, and cancellation between terms happens before quadrature.
pub fn series_estimate(
    kind: KernelKind,
    alpha: f64,
    coeffs: &[f64],
    x: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    validate_alpha(alpha)?;
    validate_x(x)?;
    if let Some(bad) = coeffs.iter().find(|a| !a.is_finite()) {
        return Err(Error::Domain(format!(
            "coefficients must be finite, got {bad}"
        )));
    }
    let top = match coeffs.iter().rposition(|&a| a != 0.0) {
        Some(top) => top,
        None => return Ok(IntegralEstimate::exact_zero()),
    };
    let coeffs = &coeffs[..=top];
    if kind.is_imaginary() && (alpha == 0.0 || top == 0) {
        return Ok(IntegralEstimate::exact_zero());
    }
    let (len_hi, len_lo) = if kind.is_incomplete() {
        (PI, PI_LO)
    } else {
        (kernel_truncation(alpha, x, tol.abs_tol), 0.0)
    };
    let panels = oscillation_panels(0.0, len_hi, top as f64);
    let imaginary = kind.is_imaginary();
    let est = integrate_compensated(
        |u, du| {
            // (c, s) = (cos nu, sin nu) by rotation, accumulating
            // C = sum a cos, S = sum a sin and their u-derivatives.
            let (s1, c1) = u.sin_cos();
            let (mut c, mut s) = (1.0, 0.0);
            let (mut big_c, mut big_s, mut dc, mut ds) = (0.0, 0.0, 0.0, 0.0);
            for (n, &a) in coeffs.iter().enumerate() {
                let nf = n as f64;
                big_c += a * c;
                big_s += a * s;
                dc -= a * nf * s;
                ds += a * nf * c;
                let next_c = c * c1 - s * s1;
                s = s * c1 + c * s1;
                c = next_c;
            }
            let e = (-x * u.cosh()).exp();
            let (ch, sh) = ((alpha * u).cosh(), (alpha * u).sinh());
            let (g, dg) = if imaginary {
                let g = sh * big_s;
                (g, alpha * ch * big_s + sh * ds)
            } else {
                let g = ch * big_c;
                (g, alpha * sh * big_c + ch * dc)
            };
            e * (g + (dg - x * u.sinh() * g) * du)
        },
        len_hi,
        len_lo,
        panels,
        tol,
    )?;
    est.usable(kind.name())
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "order requires |alpha| < 1, got {alpha}"
        )))
    }
}

fn validate_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument requires x > 0, got {x}")))
    }
}

/// Smallest `u` with `x cosh u - |alpha| u >= x + ln(10 / abs_tol)`.
///
/// The integrands are bounded by `exp(-x cosh u + |alpha| u)`, so beyond this
/// point they are below `exp(-x) * abs_tol / 10`.
pub fn kernel_truncation(alpha: f64, x: f64, abs_tol: f64) -> f64 {
    let budget = (10.0 / abs_tol).ln().max(1.0);
    let excess = |u: f64| x * (u.cosh() - 1.0) - alpha.abs() * u - budget;
    let mut hi = 1.0;
    while excess(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

/// Closed form `K_{1/2}(x) = sqrt(pi / (2x)) exp(-x)`.
pub fn bessel_k_half(x: f64) -> f64 {
    (FRAC_PI_2 / x).sqrt() * (-x).exp()
}

/// Modified Bessel function `K_alpha(x)` of real order `|alpha| < 1`.
///
/// Orders `+-1/2` use the elementary closed form; everything else integrates
/// `exp(-x cosh u) cosh(alpha u)` over `[0, inf)`.
pub fn bessel_k_real(alpha: f64, x: f64, tol: &Tolerance) -> Result<f64> {
    validate_alpha(alpha)?;
    validate_x(x)?;
    if alpha.abs() == 0.5 {
        return Ok(bessel_k_half(x));
    }
    let upper = kernel_truncation(alpha, x, tol.abs_tol);
    let est = integrate_compensated(
        |u, du| re_integrand(alpha, 0.0, x, u, du),
        upper,
        0.0,
        oscillation_panels(0.0, upper, 0.0),
        tol,
    )?;
    Ok(est.usable("bessel_k_real")?.value)
}

/// `Re K_{alpha + i tau}(x)`.
pub fn re_k(point: &KernelPoint, tol: &Tolerance) -> Result<f64> {
    KernelKind::ReK.evaluate(point, tol)
}

/// `Im K_{alpha + i tau}(x)`.
pub fn im_k(point: &KernelPoint, tol: &Tolerance) -> Result<f64> {
    KernelKind::ImK.evaluate(point, tol)
}

/// `Re J(x, alpha + i tau, pi)`, the incomplete kernel cut at `u = pi`.
pub fn re_j_incomplete(point: &KernelPoint, tol: &Tolerance) -> Result<f64> {
    KernelKind::ReJ.evaluate(point, tol)
}

/// `Im J(x, alpha + i tau, pi)`.
pub fn im_j_incomplete(point: &KernelPoint, tol: &Tolerance) -> Result<f64> {
    KernelKind::ImJ.evaluate(point, tol)
}

/// Upper bound `exp(-delta |tau|) K_alpha(x cos delta)` shared by both kernels.
pub fn kernel_bound(point: &KernelPoint, delta: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&delta) {
        return Err(Error::Domain(format!(
            "bound parameter requires 0 <= delta < pi/2, got {delta}"
        )));
    }
    let tol = Tolerance::default();
    let k = bessel_k_real(point.alpha(), point.x() * delta.cos(), &tol)?;
    Ok((-delta * point.tau().abs()).exp() * k)
}

/// Evaluates `kind` at every point, in parallel, preserving input order.
pub fn evaluate_grid(
    kind: KernelKind,
    points: &[KernelPoint],
    tol: &Tolerance,
) -> Vec<Result<IntegralEstimate>> {
    points.par_iter().map(|p| kind.estimate(p, tol)).collect()
}
