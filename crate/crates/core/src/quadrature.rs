//! Adaptive Gauss-Kronrod integration.
//!
//! Every kernel and transform evaluation in the crate bottoms out here. The
//! engine uses the 7-point Gauss / 15-point Kronrod nested pair on each panel
//! and bisects the panel with the largest error estimate until the global
//! target `max(abs_tol, rel_tol * |value|)` is met.
//!
//! Panels whose error estimate has hit the floating-point floor are retired
//! instead of bisected; when only such panels remain the estimate terminates
//! as [`Termination::RoundoffLimited`].

// Quadrature nodes and weights are kept at full published precision.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed entries of `XGK` (the embedded 7-point rule).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const ROUNDOFF_FLOOR: f64 = 50.0 * f64::EPSILON;

/// Error targets and refinement budget for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of panel bisections allowed beyond the initial partition.
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let tol = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidTolerance(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Error target for an integral whose current value is `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Copy with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// How an adaptive integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The error estimate met the requested target.
    Converged,
    /// Every remaining panel sits at the floating-point error floor; the
    /// estimate cannot be improved in double precision.
    RoundoffLimited,
    /// The bisection budget ran out.
    SubdivisionLimit,
}

/// Result of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub termination: Termination,
}

impl IntegralEstimate {
    /// Record for an integral that vanishes identically.
    pub fn exact_zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
            termination: Termination::Converged,
        }
    }

    /// Accepts converged and roundoff-limited estimates, rejects estimates
    /// that ran out of subdivisions.
    pub fn usable(self, context: &str) -> Result<Self> {
        match self.termination {
            Termination::SubdivisionLimit => Err(Error::NotConverged {
                context: context.to_string(),
                value: self.value,
                error_estimate: self.error_estimate,
            }),
            _ => Ok(self),
        }
    }

    /// Sum of two independent estimates (e.g. two sub-intervals).
    pub fn combine(self, other: Self) -> Self {
        let termination = match (self.termination, other.termination) {
            (Termination::SubdivisionLimit, _) | (_, Termination::SubdivisionLimit) => {
                Termination::SubdivisionLimit
            }
            (Termination::RoundoffLimited, _) | (_, Termination::RoundoffLimited) => {
                Termination::RoundoffLimited
            }
            _ => Termination::Converged,
        };
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
            termination,
        }
    }
}

/// Asymptotic exponential decay rate of a semi-infinite integrand,
/// `|g(u)| = O(exp(-rate * u))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayHint {
    rate: f64,
}

impl DecayHint {
    pub fn new(rate: f64) -> Result<Self> {
        if rate > 0.0 && rate.is_finite() {
            Ok(Self { rate })
        } else {
            Err(Error::InvalidDecayHint(rate))
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Smallest `U` with `exp(-rate * U) / rate < abs_tol / 10`.
    pub fn truncation_point(&self, abs_tol: f64) -> f64 {
        let u = (10.0 / (self.rate * abs_tol)).ln() / self.rate;
        if u > 0.0 {
            u
        } else {
            1.0 / self.rate
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    at_floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> (f64, bool) {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let floor = ROUNDOFF_FLOOR * resabs;
    if resabs > f64::MIN_POSITIVE / ROUNDOFF_FLOOR && floor >= scaled {
        (floor, true)
    } else {
        (scaled, scaled == 0.0)
    }
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFiniteIntegrand { node: x, value: y })
    }
}

/// Applies the 7/15 pair to `node(t)`, `t in [-1, 1]`, on a panel whose
/// half-width in the integration variable is `half`.
fn kronrod_rule<N: FnMut(f64) -> Result<f64>>(mut node: N, half: f64) -> Result<(f64, f64, bool)> {
    let f_center = node(0.0)?;
    let mut res_gauss = f_center * WG[3];
    let mut kronrod = CompensatedSum::default();
    kronrod.add(f_center * WGK[7]);
    let mut res_abs = (f_center * WGK[7]).abs();
    let mut fv = [(0.0, 0.0); 7];

    for j in 0..7 {
        let f1 = node(-XGK[j])?;
        let f2 = node(XGK[j])?;
        fv[j] = (f1, f2);
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
        kronrod.add(WGK[j] * f1);
        kronrod.add(WGK[j] * f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let res_kronrod = kronrod.total();
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }

    let abs_half = half.abs();
    let (error, at_floor) = rescale_error(
        (res_kronrod - res_gauss) * half,
        res_abs * abs_half,
        res_asc * abs_half,
    );
    Ok((res_kronrod, error, at_floor))
}

fn is_tiny(a: f64, b: f64) -> bool {
    (b - a).abs() <= 1e3 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn kronrod_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (sum, error, at_floor) = kronrod_rule(|t| eval(f, center + half * t), half)?;
    Ok(Panel {
        a,
        b,
        value: sum * half,
        error,
        at_floor: at_floor || is_tiny(a, b),
    })
}

/// Global adaptive bisection over an initial partition. `panel_at(a, b)`
/// integrates one panel in whatever parameterisation the caller uses.
fn bisect_adaptively<P: FnMut(f64, f64) -> Result<Panel>>(
    mut panel_at: P,
    edges: &[f64],
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let panels = edges.len() - 1;
    let mut active = BinaryHeap::with_capacity(panels + tol.max_subdivisions);
    let mut retired = Vec::new();
    let mut evaluations = 0usize;
    let mut total_value = 0.0;
    let mut total_error = 0.0;

    for w in edges.windows(2) {
        let panel = panel_at(w[0], w[1])?;
        evaluations += 15;
        total_value += panel.value;
        total_error += panel.error;
        if panel.at_floor {
            retired.push(panel);
        } else {
            active.push(panel);
        }
    }

    let mut subdivisions = 0usize;
    let termination = loop {
        if total_error <= tol.target(total_value) {
            break Termination::Converged;
        }
        let Some(worst) = active.pop() else {
            break Termination::RoundoffLimited;
        };
        if subdivisions >= tol.max_subdivisions {
            active.push(worst);
            break Termination::SubdivisionLimit;
        }
        subdivisions += 1;

        let mid = 0.5 * (worst.a + worst.b);
        let left = panel_at(worst.a, mid)?;
        let right = panel_at(mid, worst.b)?;
        evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;

        for child in [left, right] {
            if child.at_floor {
                retired.push(child);
            } else {
                active.push(child);
            }
        }
    };

    let mut all: Vec<Panel> = retired;
    all.extend(active);
    all.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = neumaier_sum(all.iter().map(|p| p.value));
    let error_estimate = neumaier_sum(all.iter().map(|p| p.error)).max(0.0);
    let termination = match termination {
        Termination::Converged if error_estimate > tol.target(value) => {
            Termination::RoundoffLimited
        }
        t => t,
    };

    Ok(IntegralEstimate {
        value,
        error_estimate,
        evaluations,
        converged: termination == Termination::Converged,
        termination,
    })
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    values.for_each(|v| acc.add(v));
    acc.total()
}

/// Adaptive integration of `f` over `[a, b]` starting from `panels` equal panels.
pub fn integrate_finite_paneled<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    tol.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("interval [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(IntegralEstimate::exact_zero());
    }
    if a > b {
        return Err(Error::Domain(format!(
            "interval requires a < b, got [{a}, {b}]"
        )));
    }

    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let edges: Vec<f64> = (0..=panels)
        .map(|k| if k == panels { b } else { a + width * k as f64 })
        .collect();
    bisect_adaptively(|lo, hi| kronrod_panel(&mut f, lo, hi), &edges, tol)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    integrate_finite_paneled(f, a, b, 1, tol)
}

/// Number of initial panels so that no panel exceeds a quarter period of
/// `cos(frequency * u)`.
pub fn oscillation_panels(a: f64, b: f64, frequency: f64) -> usize {
    let width = PI / (4.0 * frequency.abs().max(1.0));
    ((b - a) / width).ceil().max(1.0) as usize
}

/// Integration over `[a, b]` of an integrand carrying a `cos(frequency*u)` or
/// `sin(frequency*u)` factor; the initial panel width is at most
/// `pi / (4 * max(frequency, 1))`.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    frequency: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let panels = if b > a {
        oscillation_panels(a, b, frequency)
    } else {
        1
    };
    integrate_finite_paneled(f, a, b, panels, tol)
}

/// Integration over `[0, inf)` of an integrand decaying at least like
/// `exp(-decay.rate() * u)`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: F,
    decay: DecayHint,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    tol.validate()?;
    DecayHint::new(decay.rate)?;
    let upper = decay.truncation_point(tol.abs_tol);
    // Bisecting [0, U] a few times up front keeps the decaying part from
    // hiding inside one wide panel.
    let panels = (upper * decay.rate).ceil().clamp(1.0, 64.0) as usize;
    integrate_finite_paneled(f, 0.0, upper, panels, tol)
}

/// Integration over `[a, b]` of an integrand with an integrable power
/// singularity `(u - a)^(-gamma)` at the left endpoint.
///
/// The substitution `u = a + (b - a) t^p`, `p = 1 / (1 - gamma)`, turns the
/// singular factor into a bounded one before handing off to
/// [`integrate_finite`].
pub fn integrate_endpoint_singular<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    gamma: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    if !(gamma < 1.0) {
        return Err(Error::DivergentIntegral(gamma));
    }
    if !(a < b) {
        return Err(Error::Domain(format!(
            "interval requires a < b, got [{a}, {b}]"
        )));
    }
    let power = 1.0 / (1.0 - gamma.max(0.0));
    let len = b - a;
    if power == 1.0 {
        return integrate_finite(f, a, b, tol);
    }
    integrate_finite(
        |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            let tp1 = t.powf(power - 1.0);
            let u = a + len * tp1 * t;
            f(u) * len * power * tp1
        },
        0.0,
        1.0,
        tol,
    )
}

/// `pi` as an unevaluated sum `PI + PI_LO`.
pub const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Error-free sum: returns `(s, e)` with `s + e == a + b` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Integration over `[0, len_hi + len_lo]` on `2^k` uniform panels with the
/// nodes carried to roughly twice double precision.
///
/// The integrand receives each node as `(u, du)`, where `u` is the nearest
/// double and `du` the residual to the exact node. Integrands that apply the
/// first-order correction `g(u) + g'(u) du` remove the systematic error that
/// rounded node positions otherwise leave behind (about `1e-16 * max|g'|`),
/// which matters when the integral is a small remainder of large cancelling
/// contributions.
///
/// Refinement is the same global bisection as [`integrate_finite`], starting
/// from `min_panels` rounded up to a power of two.
pub fn integrate_compensated<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    len_hi: f64,
    len_lo: f64,
    min_panels: usize,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    tol.validate()?;
    if !(len_hi > 0.0 && len_hi.is_finite()) {
        return Err(Error::Domain(format!(
            "interval length must be positive, got {len_hi}"
        )));
    }
    let panels = min_panels.max(1).next_power_of_two();
    let edges: Vec<f64> = (0..=panels).map(|k| k as f64 / panels as f64).collect();
    // Panels are dyadic in v = u / len, so centres, half-widths and
    // half-width * abscissa are exact and `two_sum` recovers each node exactly.
    bisect_adaptively(
        |va, vb| {
            let center = 0.5 * (va + vb);
            let half = 0.5 * (vb - va);
            let (sum, error, at_floor) = kronrod_rule(
                |t| {
                    let (v, v_lo) = two_sum(center, half * t);
                    let u = len_hi * v;
                    let du = len_hi.mul_add(v, -u) + len_hi * v_lo + len_lo * v;
                    let y = f(u, du);
                    if y.is_finite() {
                        Ok(y)
                    } else {
                        Err(Error::NonFiniteIntegrand { node: u, value: y })
                    }
                },
                half * len_hi,
            )?;
            Ok(Panel {
                a: va,
                b: vb,
                value: sum * (half * len_hi) + sum * (half * len_lo),
                error,
                at_floor: at_floor || is_tiny(va, vb),
            })
        },
        &edges,
        tol,
    )
}

/// Integration over `[a, b]` of an integrand behaving like
/// `(u - a)^(-gamma)` times a bounded factor that may oscillate in
/// `ln(u - a)` as `u -> a`.
///
/// The map `u = a + (b - a) exp(-s)` turns the neighbourhood of `a` into a
/// semi-infinite range on which the integrand decays like
/// `exp(-(1 - gamma) s)`; log-periodic oscillation becomes ordinary
/// oscillation in `s`.
pub fn integrate_endpoint_exponential<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    gamma: f64,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    if !(gamma < 1.0) {
        return Err(Error::DivergentIntegral(gamma));
    }
    if !(a < b) {
        return Err(Error::Domain(format!(
            "interval requires a < b, got [{a}, {b}]"
        )));
    }
    let len = b - a;
    let decay = DecayHint::new(1.0 - gamma)?;
    integrate_semi_infinite(
        |s: f64| {
            let w = (-s).exp();
            if w == 0.0 {
                return 0.0;
            }
            f(a + len * w) * len * w
        },
        decay,
        tol,
    )
}

/// Integration over `x in (0, inf)` split at `x = 1`: the exponential
/// endpoint map with exponent `gamma` on `(0, 1]` and the decaying rule on
/// `[1, inf)`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    gamma: f64,
    decay: DecayHint,
    tol: &Tolerance,
) -> Result<IntegralEstimate> {
    let half = tol.scaled(0.5);
    let near = integrate_endpoint_exponential(&mut f, 0.0, 1.0, gamma, &half)?;
    let far = integrate_semi_infinite(|s: f64| f(1.0 + s), decay, &half)?;
    Ok(near.combine(far))
}
