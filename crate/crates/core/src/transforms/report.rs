use std::f64::consts::PI;
use std::fmt;

/// Largest coefficient index recovered without a ceiling warning.
///
/// `cosh(12 pi)` is about `1.2e16`, so an absolute quadrature error at the
/// level of double-precision rounding already costs O(1) in the coefficient.
pub const DEFAULT_MAX_INDEX: usize = 12;

/// Diagnostics attached to a transform result.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformWarning {
    /// `cosh(pi n) * abs_tol` exceeds the requested coefficient tolerance.
    Amplification {
        index: usize,
        amplification: f64,
        abs_tol: f64,
        coefficient_tol: f64,
    },
    /// Index beyond the configured precision ceiling.
    BeyondCeiling { index: usize, ceiling: usize },
    /// Nonzero `a_0` handed to an imaginary-part transform, where it has no effect.
    IgnoredConstantTerm { value: f64 },
}

impl fmt::Display for TransformWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Amplification {
                index,
                amplification,
                abs_tol,
                coefficient_tol,
            } => write!(
                f,
                "index {index}: cosh(pi n) = {amplification:.3e} amplifies quadrature \
                 abs_tol {abs_tol:.1e} past coefficient tolerance {coefficient_tol:.1e}"
            ),
            Self::BeyondCeiling { index, ceiling } => write!(
                f,
                "index {index} exceeds the double-precision ceiling N_max = {ceiling}"
            ),
            Self::IgnoredConstantTerm { value } => write!(
                f,
                "a_0 = {value} ignored: the imaginary-part kernels vanish at n = 0"
            ),
        }
    }
}

/// `cosh(pi n)`.
pub fn amplification(n: usize) -> f64 {
    (PI * n as f64).cosh()
}

/// Warnings for coefficient index `n` under the given budgets.
pub fn precision_warnings(
    n: usize,
    abs_tol: f64,
    coefficient_tol: f64,
    ceiling: usize,
) -> Vec<TransformWarning> {
    let mut out = Vec::new();
    let amp = amplification(n);
    if amp * abs_tol > coefficient_tol {
        out.push(TransformWarning::Amplification {
            index: n,
            amplification: amp,
            abs_tol,
            coefficient_tol,
        });
    }
    if n > ceiling {
        out.push(TransformWarning::BeyondCeiling { index: n, ceiling });
    }
    out
}

/// One recovered coefficient or point value.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    /// Coefficient index, or position in the list of evaluation points.
    pub index: usize,
    pub value: f64,
    pub error_estimate: f64,
    /// `cosh(pi n)` weight applied to this entry (1 where none applies).
    pub amplification: f64,
    /// Last series index used, when the entry came from a truncated series.
    pub truncation_index: Option<usize>,
}

/// Results of a batch transform in deterministic index order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransformReport {
    pub entries: Vec<ReportEntry>,
    pub warnings: Vec<TransformWarning>,
}

impl TransformReport {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn has_warnings(&self) -> bool {
        !self.warnings.is_empty()
    }
}
