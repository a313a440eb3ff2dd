use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::kernels::bessel_k_real;
use crate::quadrature::Tolerance;

/// Summability witness for a coefficient sequence:
/// `sum_n |a_n| exp(-delta n) <= bound` with `0 <= delta < pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    delta: f64,
    bound: f64,
}

impl DecayCertificate {
    pub fn new(delta: f64, bound: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&delta) {
            return Err(Error::Domain(format!(
                "decay certificate requires 0 <= delta < pi/2, got {delta}"
            )));
        }
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::Domain(format!(
                "decay certificate bound must be positive, got {bound}"
            )));
        }
        Ok(Self { delta, bound })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Finite coefficient vector `a_0, ..., a_N` together with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    values: Vec<f64>,
    certificate: DecayCertificate,
}

// Certificates of an all-zero sequence still need a positive bound.
fn weighted_sum(values: &[f64], delta: f64) -> f64 {
    let sum: f64 = values
        .iter()
        .enumerate()
        .map(|(n, a)| a.abs() * (-delta * n as f64).exp())
        .sum();
    sum.max(f64::MIN_POSITIVE)
}

impl CoefficientSequence {
    /// Sequence with a certificate at `delta = 0` computed from the data.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_delta(values, 0.0)
    }

    /// Sequence with a certificate at the given `delta`, bound from the data.
    pub fn with_delta(values: Vec<f64>, delta: f64) -> Result<Self> {
        if let Some(bad) = values.iter().find(|a| !a.is_finite()) {
            return Err(Error::Domain(format!(
                "coefficients must be finite, got {bad}"
            )));
        }
        let certificate = DecayCertificate::new(delta, weighted_sum(&values, delta))?;
        Ok(Self {
            values,
            certificate,
        })
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0.0; len]).expect("zeros are finite")
    }

    /// The unit sequence `e_n` of length `n + 1`.
    pub fn unit(n: usize) -> Self {
        let mut values = vec![0.0; n + 1];
        values[n] = 1.0;
        Self::new(values).expect("unit sequence is finite")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn certificate(&self) -> DecayCertificate {
        self.certificate
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n`, zero beyond the stored support.
    pub fn get(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    /// Index of the last nonzero entry.
    pub fn support_end(&self) -> Option<usize> {
        self.values.iter().rposition(|&a| a != 0.0)
    }

    /// Last index needed to evaluate a kernel series at `x` to within `eps`.
    ///
    /// With `delta > 0` the tail past `N` is bounded by
    /// `bound * exp(-(delta' - delta)(N + 1)) * K_alpha(x cos delta')` for
    /// `delta'` just below `pi/2`; the first `N` where this drops below `eps`
    /// is returned, capped by the support. With `delta = 0` the whole support
    /// is used.
    pub fn truncation_index(&self, alpha: f64, x: f64, eps: f64) -> Result<usize> {
        let Some(end) = self.support_end() else {
            return Ok(0);
        };
        let delta = self.certificate.delta;
        if delta == 0.0 || !(eps > 0.0) {
            return Ok(end);
        }
        let delta_prime = FRAC_PI_2 * (1.0 - 1e-3);
        let gap = delta_prime - delta;
        let k = bessel_k_real(alpha, x * delta_prime.cos(), &Tolerance::default())?;
        let mut n = 0;
        while n < end && self.certificate.bound * (-gap * (n + 1) as f64).exp() * k >= eps {
            n += 1;
        }
        Ok(n)
    }

    /// Entrywise `scale(n) * a_n`, keeping the certificate's `delta`.
    pub fn map_indexed(&self, scale: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, &a)| scale(n, a))
            .collect();
        Self::with_delta(values, self.certificate.delta)
    }

    /// The first `order + 1` entries, zero-padded if the sequence is shorter.
    pub fn truncated(&self, order: usize) -> Self {
        let values = (0..=order).map(|n| self.get(n)).collect();
        Self::with_delta(values, self.certificate.delta).expect("entries already validated")
    }
}
