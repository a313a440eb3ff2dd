//! Closed-form Laplace compositions of the kernels.
//!
//! For `|alpha| < 1` and real `u`,
//!
//! ```text
//! int_0^inf exp(-x cosh u) K_nu(x) dx = pi sinh(nu u) / (sinh u  sin(nu pi)),   nu = alpha + i tau
//! ```
//!
//! and its real and imaginary parts at integer `tau = n`. These serve as
//! analytic oracles for the quadrature-based kernels.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{KernelKind, KernelPoint};
use crate::quadrature::{integrate_half_line, DecayHint, IntegralEstimate, Tolerance};

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "identity requires |alpha| < 1, got {alpha}"
        )))
    }
}

/// Complex closed form of the Laplace composition with `K_{alpha + i tau}`.
///
/// At `u = 0` the analytic limit `pi nu / sin(nu pi)` is returned, and at
/// `nu = 0` the limit `u / sinh u` (equal to 1 at `u = 0`).
pub fn laplace_k_closed(alpha: f64, tau: f64, u: f64) -> Result<Complex64> {
    validate_alpha(alpha)?;
    if !(tau.is_finite() && u.is_finite()) {
        return Err(Error::Domain("tau and u must be finite".into()));
    }
    if alpha == 0.0 && tau == 0.0 {
        let ratio = if u == 0.0 { 1.0 } else { u / u.sinh() };
        return Ok(Complex64::new(ratio, 0.0));
    }
    let nu = Complex64::new(alpha, tau);
    let denom = (nu * PI).sin();
    if u == 0.0 {
        return Ok(nu * PI / denom);
    }
    Ok((nu * u).sinh() * PI / (denom * u.sinh()))
}

struct Trig {
    sin_a: f64,
    cos_a: f64,
    cosh_n: f64,
    sinh_n: f64,
    denom: f64,
}

fn trig_parts(alpha: f64, n: usize) -> Result<Trig> {
    validate_alpha(alpha)?;
    let nf = n as f64;
    let (sin_a, cos_a) = (alpha * PI).sin_cos();
    // cos(pi/2) is not exactly zero in floating point.
    let cos_a = if alpha.abs() == 0.5 { 0.0 } else { cos_a };
    let sinh_n = (PI * nf).sinh();
    let cosh_n = (PI * nf).cosh();
    let denom = sinh_n * sinh_n + sin_a * sin_a;
    if denom == 0.0 {
        return Err(Error::SingularIdentity { alpha, index: nf });
    }
    Ok(Trig {
        sin_a,
        cos_a,
        cosh_n,
        sinh_n,
        denom,
    })
}

/// Laplace composition with `Re K_{alpha + i n}`.
pub fn laplace_re_k_closed(alpha: f64, n: usize, u: f64) -> Result<f64> {
    let t = trig_parts(alpha, n)?;
    let nf = n as f64;
    if u == 0.0 {
        let slope = alpha * t.sin_a * t.cosh_n + nf * t.cos_a * t.sinh_n;
        return Ok(PI * slope / t.denom);
    }
    let (sin_nu, cos_nu) = (nf * u).sin_cos();
    let num = (alpha * u).sinh() * t.sin_a * t.cosh_n * cos_nu
        + (alpha * u).cosh() * t.cos_a * t.sinh_n * sin_nu;
    Ok(PI * num / (u.sinh() * t.denom))
}

/// Laplace composition with `Im K_{alpha + i n}`.
pub fn laplace_im_k_closed(alpha: f64, n: usize, u: f64) -> Result<f64> {
    let t = trig_parts(alpha, n)?;
    let nf = n as f64;
    if u == 0.0 {
        let slope = nf * t.sin_a * t.cosh_n - alpha * t.cos_a * t.sinh_n;
        return Ok(PI * slope / t.denom);
    }
    let (sin_nu, cos_nu) = (nf * u).sin_cos();
    let num = (alpha * u).cosh() * t.sin_a * t.cosh_n * sin_nu
        - (alpha * u).sinh() * t.cos_a * t.sinh_n * cos_nu;
    Ok(PI * num / (u.sinh() * t.denom))
}

/// Which Laplace composition to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// Complex kernel `K_{alpha + i tau}`, any real `tau`.
    LaplaceK,
    /// Real part at integer index.
    LaplaceReK,
    /// Imaginary part at integer index.
    LaplaceImK,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LaplaceK => "laplace-k",
            Self::LaplaceReK => "laplace-re",
            Self::LaplaceImK => "laplace-im",
        }
    }
}

/// Parameters of one identity check; `index` is `tau` for
/// [`Identity::LaplaceK`] and the integer `n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityParams {
    pub alpha: f64,
    pub index: f64,
    pub u: f64,
}

/// Quadrature left-hand side against closed-form right-hand side.
///
/// The complex identity also fills the imaginary components; for the real
/// identities they are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_im: f64,
    pub rhs_im: f64,
    pub residual: f64,
    pub rel_residual: f64,
    pub error_estimate: f64,
}

impl IdentityResidual {
    fn new(lhs: Complex64, rhs: Complex64, error_estimate: f64) -> Self {
        let residual = (lhs - rhs).norm();
        Self {
            lhs: lhs.re,
            rhs: rhs.re,
            lhs_im: lhs.im,
            rhs_im: rhs.im,
            residual,
            rel_residual: residual / rhs.norm().max(1e-300),
            error_estimate,
        }
    }
}

/// `int_0^inf exp(-x cosh u) kernel(alpha, tau, x) dx` by quadrature.
pub fn laplace_of_kernel(
    kind: KernelKind,
    alpha: f64,
    tau: f64,
    u: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let cosh_u = u.cosh();
    let decay = DecayHint::new(1.0 + cosh_u)?;
    // Near x = 0 the kernels grow like x^(-|alpha|), logarithmically at alpha = 0.
    let gamma = alpha.abs().max(0.5);
    let mut failure = None;
    let est = integrate_half_line(
        |x: f64| {
            let point = match KernelPoint::at(alpha, tau, x) {
                Ok(p) => p,
                Err(e) => {
                    failure.get_or_insert(e);
                    return 0.0;
                }
            };
            match kind.evaluate(&point, tol) {
                Ok(k) => (-x * cosh_u).exp() * k,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        gamma,
        decay,
        tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    est.usable("laplace composition")
}

fn integer_index(index: f64) -> Result<usize> {
    if index >= 0.0 && index.fract() == 0.0 && index <= u32::MAX as f64 {
        Ok(index as usize)
    } else {
        Err(Error::Domain(format!(
            "identity requires a non-negative integer index, got {index}"
        )))
    }
}

/// Evaluates both sides of the selected identity.
pub fn check_identity(
    which: Identity,
    params: IdentityParams,
    tol: &Tolerance,
) -> Result<IdentityResidual> {
    let IdentityParams { alpha, index, u } = params;
    match which {
        Identity::LaplaceK => {
            let rhs = laplace_k_closed(alpha, index, u)?;
            let re = laplace_of_kernel(KernelKind::ReK, alpha, index, u, tol)?;
            let im = laplace_of_kernel(KernelKind::ImK, alpha, index, u, tol)?;
            Ok(IdentityResidual::new(
                Complex64::new(re.value, im.value),
                rhs,
                re.error_estimate + im.error_estimate,
            ))
        }
        Identity::LaplaceReK => {
            let n = integer_index(index)?;
            let rhs = laplace_re_k_closed(alpha, n, u)?;
            let lhs = laplace_of_kernel(KernelKind::ReK, alpha, index, u, tol)?;
            Ok(IdentityResidual::new(
                Complex64::new(lhs.value, 0.0),
                Complex64::new(rhs, 0.0),
                lhs.error_estimate,
            ))
        }
        Identity::LaplaceImK => {
            let n = integer_index(index)?;
            let rhs = laplace_im_k_closed(alpha, n, u)?;
            let lhs = laplace_of_kernel(KernelKind::ImK, alpha, index, u, tol)?;
            Ok(IdentityResidual::new(
                Complex64::new(lhs.value, 0.0),
                Complex64::new(rhs, 0.0),
                lhs.error_estimate,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn limits_at_origin() {
        let half = laplace_k_closed(0.5, 0.0, 0.0).unwrap();
        assert_relative_eq!(half.re, FRAC_PI_2, max_relative = 1e-15);
        assert_eq!(half.im, 0.0);
        assert_eq!(
            laplace_k_closed(0.0, 0.0, 0.0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_relative_eq!(
            laplace_re_k_closed(0.5, 0, 0.0).unwrap(),
            FRAC_PI_2,
            max_relative = 1e-15
        );
    }

    #[test]
    fn complex_form_is_even_in_u() {
        for (alpha, tau, u) in [(0.3, 1.5, 0.7), (-0.5, 2.0, 2.0), (0.0, 0.0, 1.1)] {
            let p = laplace_k_closed(alpha, tau, u).unwrap();
            let m = laplace_k_closed(alpha, tau, -u).unwrap();
            assert_relative_eq!(p.re, m.re, max_relative = 1e-14);
            assert_relative_eq!(p.im, m.im, max_relative = 1e-14, epsilon = 1e-300);
        }
    }

    #[test]
    fn half_order_specialisations() {
        for n in 0..=8usize {
            for u in [-3.0, -1.2, -0.4, 0.25, 1.0, 2.5, 3.0] {
                let nf = n as f64;
                let cosh_n = (PI * nf).cosh();
                let re = PI * (nf * u).cos() / (2.0 * (u / 2.0).cosh() * cosh_n);
                assert_relative_eq!(
                    laplace_re_k_closed(0.5, n, u).unwrap(),
                    re,
                    max_relative = 1e-13,
                    epsilon = 1e-300
                );
                let im = PI * (nf * u).sin() / (2.0 * (u / 2.0).sinh() * cosh_n);
                assert_abs_diff_eq!(
                    laplace_im_k_closed(0.5, n, u).unwrap(),
                    im,
                    epsilon = 1e-13 * im.abs().max(1e-16)
                );
            }
        }
        assert_eq!(laplace_im_k_closed(0.5, 0, 1.3).unwrap(), 0.0);
    }

    #[test]
    fn real_and_imaginary_parts_match_complex_form() {
        for alpha in [-0.5, -0.2, 0.3, 0.5, 0.9] {
            for n in 0..6usize {
                for u in [0.0, 0.4, 1.0, 2.0] {
                    let c = laplace_k_closed(alpha, n as f64, u).unwrap();
                    let re = laplace_re_k_closed(alpha, n, u).unwrap();
                    let im = laplace_im_k_closed(alpha, n, u).unwrap();
                    assert_abs_diff_eq!(c.re, re, epsilon = 1e-13 * c.norm().max(1e-3));
                    assert_abs_diff_eq!(c.im, im, epsilon = 1e-13 * c.norm().max(1e-3));
                }
            }
        }
    }

    #[test]
    fn continuity_at_origin() {
        for (alpha, n) in [(0.5, 0usize), (0.5, 3), (0.3, 2), (-0.5, 1)] {
            let at0 = laplace_re_k_closed(alpha, n, 0.0).unwrap();
            for u in [1e-6, -1e-6] {
                assert_abs_diff_eq!(
                    laplace_re_k_closed(alpha, n, u).unwrap(),
                    at0,
                    epsilon = 1e-9
                );
            }
            let at0 = laplace_im_k_closed(alpha, n, 0.0).unwrap();
            for u in [1e-6, -1e-6] {
                assert_abs_diff_eq!(
                    laplace_im_k_closed(alpha, n, u).unwrap(),
                    at0,
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn joint_degeneracy_is_singular() {
        assert!(matches!(
            laplace_re_k_closed(0.0, 0, 1.0),
            Err(Error::SingularIdentity { .. })
        ));
        assert!(matches!(
            laplace_im_k_closed(0.0, 0, 0.0),
            Err(Error::SingularIdentity { .. })
        ));
        assert!(laplace_k_closed(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn vanishing_imaginary_identity_at_zero_alpha() {
        let r = check_identity(
            Identity::LaplaceImK,
            IdentityParams {
                alpha: 0.0,
                index: 1.0,
                u: 1.0,
            },
            &Tolerance::default(),
        )
        .unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
    }

    #[test]
    fn laplace_k_at_half_order_origin() {
        let r = check_identity(
            Identity::LaplaceK,
            IdentityParams {
                alpha: 0.5,
                index: 0.0,
                u: 0.0,
            },
            &Tolerance::default(),
        )
        .unwrap();
        assert!(r.residual <= 1e-9, "{r:?}");
        assert_relative_eq!(r.lhs, FRAC_PI_2, max_relative = 1e-9);
    }

    #[test]
    fn non_integer_index_rejected() {
        let err = check_identity(
            Identity::LaplaceReK,
            IdentityParams {
                alpha: 0.5,
                index: 1.5,
                u: 1.0,
            },
            &Tolerance::default(),
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
