use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::discrete::{forward_incomplete_im, forward_incomplete_re, Part, INVERSION_SCALE};
use super::function::{FunctionEvaluator, Integrability};
use super::report::amplification;
use super::sequence::CoefficientSequence;
use crate::error::{Error, Result};
use crate::identities::{laplace_im_k_closed, laplace_re_k_closed};
use crate::quadrature::{integrate_finite_paneled, Tolerance};

/// How a profile `psi` is turned into the weight `phi` on `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFlavor {
    /// `phi(u) = psi(u) cosh(u/2)`; pairs with the real-part transforms.
    CoshHalf,
    /// `phi(u) = psi(u) sinh(u/2)`; pairs with the imaginary-part transforms.
    SinhHalf,
}

impl ProfileFlavor {
    pub fn part(&self) -> Part {
        match self {
            ProfileFlavor::CoshHalf => Part::Re,
            ProfileFlavor::SinhHalf => Part::Im,
        }
    }
}

const SAMPLES: usize = 512;

/// A 2pi-periodic Lipschitz function `psi` on `[-pi, pi]`.
#[derive(Clone)]
pub struct PeriodicProfile {
    psi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    lipschitz: f64,
    flavor: ProfileFlavor,
}

impl fmt::Debug for PeriodicProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicProfile")
            .field("lipschitz", &self.lipschitz)
            .field("flavor", &self.flavor)
            .finish_non_exhaustive()
    }
}

impl PeriodicProfile {
    /// Checks the seam `psi(-pi) = psi(pi)` and spot-checks the Lipschitz
    /// constant on a uniform grid.
    pub fn new<F>(psi: F, lipschitz: f64, flavor: ProfileFlavor) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::Domain(format!(
                "Lipschitz constant must be positive, got {lipschitz}"
            )));
        }
        let (left, right) = (psi(-PI), psi(PI));
        if (left - right).abs() > 1e-12 * (1.0 + right.abs()) {
            return Err(Error::Domain(format!(
                "profile is not periodic: psi(-pi) = {left}, psi(pi) = {right}"
            )));
        }
        let h = 2.0 * PI / SAMPLES as f64;
        let mut prev = left;
        for k in 1..=SAMPLES {
            let u = -PI + k as f64 * h;
            let v = psi(u);
            if !v.is_finite() {
                return Err(Error::Domain(format!("profile is not finite at u = {u}")));
            }
            if (v - prev).abs() > lipschitz * h * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::Domain(format!(
                    "profile violates the Lipschitz constant {lipschitz} near u = {u}"
                )));
            }
            prev = v;
        }
        Ok(Self {
            psi: Arc::new(psi),
            lipschitz,
            flavor,
        })
    }

    pub fn psi(&self, u: f64) -> f64 {
        (self.psi)(u)
    }

    /// The weight `phi(u)` determined by the flavour.
    pub fn phi(&self, u: f64) -> f64 {
        let w = match self.flavor {
            ProfileFlavor::CoshHalf => (0.5 * u).cosh(),
            ProfileFlavor::SinhHalf => (0.5 * u).sinh(),
        };
        self.psi(u) * w
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn flavor(&self) -> ProfileFlavor {
        self.flavor
    }
}

// Profiles typically have kinks at 0 or +-pi; an even panel count puts 0 on an edge.
const PROFILE_PANELS: usize = 8;

fn integrate_over_period<F: FnMut(f64) -> f64>(f: F, tol: &Tolerance) -> Result<f64> {
    let est = integrate_finite_paneled(f, -PI, PI, PROFILE_PANELS, tol)?;
    Ok(est.usable("profile integral")?.value)
}

/// `f(x) = int_{-pi}^{pi} exp(-x cosh u) phi(u) du`.
pub fn represent_from_profile(profile: &PeriodicProfile, x: f64, tol: &Tolerance) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("argument requires x > 0, got {x}")));
    }
    integrate_over_period(|u| (-x * u.cosh()).exp() * profile.phi(u), tol)
}

/// [`represent_from_profile`] as a function of `x`.
pub fn profile_function(profile: &PeriodicProfile, tol: &Tolerance) -> FunctionEvaluator {
    let profile = profile.clone();
    let tol = *tol;
    let integrability = Integrability::new(0.0, 1.0).expect("valid declaration");
    FunctionEvaluator::new(
        move |x| represent_from_profile(&profile, x, &tol).unwrap_or(f64::NAN),
        integrability,
    )
}

/// Coefficient `a_n` of a profile-represented function, with the
/// `x`-integral done in closed form.
///
/// Exchanging the order of integration turns
/// `(4/pi^2) int_0^inf K_{1/2+in}(x) f(x) dx` into
/// `(4/pi^2) int_{-pi}^{pi} phi(u) L_n(u) du`, where `L_n` is the Laplace
/// composition of the kernel. Because `L_n` carries the factor
/// `1/cosh(pi n)` analytically, the result keeps full relative precision
/// at every `n`, unlike the `x`-quadrature whose absolute error is
/// amplified by `cosh(pi n)` on reconstruction.
pub fn profile_coefficient(profile: &PeriodicProfile, n: usize, tol: &Tolerance) -> Result<f64> {
    let part = profile.flavor.part();
    let mut failure = None;
    let value = integrate_over_period(
        |u| {
            let l = match part {
                Part::Re => laplace_re_k_closed(0.5, n, u),
                Part::Im => laplace_im_k_closed(0.5, n, u),
            };
            match l {
                Ok(l) => profile.phi(u) * l,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(INVERSION_SCALE * value),
    }
}

/// `a_0 / 2 * Re J(x, 1/2, pi) + sum_{n=1}^{order} cosh(pi n) Re J(x, 1/2+in, pi) a_n`.
pub fn reconstruct_re(
    coeffs: &CoefficientSequence,
    x: f64,
    order: usize,
    tol: &Tolerance,
) -> Result<f64> {
    let weighted = coeffs.truncated(order).map_indexed(|n, a| {
        if n == 0 {
            0.5 * a
        } else {
            amplification(n) * a
        }
    })?;
    forward_incomplete_re(&weighted, x, tol)
}

/// `sum_{n=1}^{order} cosh(pi n) Im J(x, 1/2+in, pi) a_n`.
pub fn reconstruct_im(
    coeffs: &CoefficientSequence,
    x: f64,
    order: usize,
    tol: &Tolerance,
) -> Result<f64> {
    let weighted =
        coeffs
            .truncated(order)
            .map_indexed(|n, a| if n == 0 { 0.0 } else { amplification(n) * a })?;
    forward_incomplete_im(&weighted, x, tol)
}

/// Partial sums are extended until two successive terms fall below this.
pub const STABLE_STEP: f64 = 1e-8;

/// Reconstruction with the order chosen by the stopping rule: stop once two
/// consecutive partial sums past `n = 1` each change by less than
/// [`STABLE_STEP`], or at the end of the coefficients.
///
/// Returns the value and the order used.
pub fn reconstruct_until_stable(
    part: Part,
    coeffs: &CoefficientSequence,
    x: f64,
    tol: &Tolerance,
) -> Result<(f64, usize)> {
    let last = coeffs.len().saturating_sub(1);
    let partial = |order: usize| match part {
        Part::Re => reconstruct_re(coeffs, x, order, tol),
        Part::Im => reconstruct_im(coeffs, x, order, tol),
    };
    let mut prev = partial(1.min(last))?;
    let mut quiet = 0;
    for order in 2..=last {
        let next = partial(order)?;
        quiet = if (next - prev).abs() < STABLE_STEP {
            quiet + 1
        } else {
            0
        };
        prev = next;
        if quiet == 2 {
            return Ok((prev, order));
        }
    }
    Ok((prev, last))
}
