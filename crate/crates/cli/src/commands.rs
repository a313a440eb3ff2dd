use std::f64::consts::PI;

use serde_json::{json, Value};

use lstx::identities::{check_identity, Identity, IdentityParams};
use lstx::kernels::{KernelKind, KernelPoint};
use lstx::transforms::{
    amplification, coeff_im, coeff_re, continuous_forward, continuous_inverse, forward_function,
    forward_report, precision_warnings, profile_coefficient, profile_function, reconstruct_im,
    reconstruct_re, reconstruct_until_stable, recover, represent_from_profile,
    round_trip_tolerance, CoefficientSequence, FunctionEvaluator, Part, PeriodicProfile,
    ProfileFlavor, Recovery, RecoveryOptions, SpectralDecay, TransformReport, TransformWarning,
    DEFAULT_MAX_INDEX,
};
use lstx::Tolerance;

use crate::args::{
    CoefficientSource, Command, Common, FlavorArg, IdentityArg, KernelArg, ProfileArg, Scheme,
    SeqArgs, Series, TableArg, Variant,
};
use crate::error::CliError;
use crate::report::{rows_to_csv, Report, Row};
use crate::row;

pub const GOLDEN_SCHEMA_VERSION: u32 = 1;

/// What a command produced: a standard report or a golden table body.
pub enum Output {
    Report(Report),
    Golden { json: String, csv: String },
}

fn kernel_kind(k: KernelArg) -> KernelKind {
    match k {
        KernelArg::ReK => KernelKind::ReK,
        KernelArg::ImK => KernelKind::ImK,
        KernelArg::ReJ => KernelKind::ReJ,
        KernelArg::ImJ => KernelKind::ImJ,
    }
}

fn identity(i: IdentityArg) -> Identity {
    match i {
        IdentityArg::LaplaceK => Identity::LaplaceK,
        IdentityArg::LaplaceRe => Identity::LaplaceReK,
        IdentityArg::LaplaceIm => Identity::LaplaceImK,
    }
}

fn part(v: Variant) -> Part {
    match v {
        Variant::Re => Part::Re,
        Variant::Im => Part::Im,
    }
}

/// Tolerance from the command default with the user's overrides applied.
fn tolerance(common: &Common, default: Tolerance) -> Result<Tolerance, CliError> {
    Ok(Tolerance::new(
        common.abs_tol.unwrap_or(default.abs_tol),
        common.rel_tol.unwrap_or(default.rel_tol),
        common.max_subdivisions.unwrap_or(default.max_subdivisions),
    )?)
}

fn tol_params(tol: &Tolerance) -> Value {
    json!({
        "abs_tol": tol.abs_tol,
        "rel_tol": tol.rel_tol,
        "max_subdivisions": tol.max_subdivisions,
    })
}

/// Precision ceiling, overridable through `LS_MAX_N`.
pub fn max_index() -> Result<usize, CliError> {
    match std::env::var("LS_MAX_N") {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!("LS_MAX_N must be a nonnegative integer, got {s:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_INDEX),
    }
}

/// Parses `3`, `0,2,5` or the inclusive range `0..8`; empty means none.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || CliError::Usage(format!("malformed index list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

fn sequence(args: &SeqArgs) -> Result<CoefficientSequence, CliError> {
    Ok(CoefficientSequence::with_delta(
        args.seq.clone(),
        args.delta,
    )?)
}

fn warning_strings(report: &TransformReport) -> Vec<String> {
    report.warnings.iter().map(ToString::to_string).collect()
}

fn check_points(xs: &[f64]) -> Result<(), CliError> {
    for &x in xs {
        KernelPoint::at(0.5, 0.0, x)?;
    }
    Ok(())
}

pub fn run(command: &Command, common: &Common) -> Result<Output, CliError> {
    match command {
        Command::Kernel {
            kind,
            alpha,
            tau,
            x,
        } => kernel(kind, alpha, tau, x, common),
        Command::Oracle {
            identity: which,
            alpha,
            tau,
            u,
        } => oracle(*which, *alpha, *tau, u, common),
        Command::Forward {
            series,
            variant,
            alpha,
            seq,
            x,
        } => forward(*series, *variant, *alpha, seq, x, common),
        Command::Invert {
            scheme,
            variant,
            u0,
            n,
            coefficient_tol,
        } => invert(*scheme, *variant, *u0, n, *coefficient_tol, common),
        Command::Roundtrip {
            scheme,
            variant,
            seq,
            coefficient_tol,
        } => roundtrip(*scheme, *variant, seq, *coefficient_tol, common),
        Command::Reconstruct {
            profile,
            flavor,
            x,
            order,
            coefficients,
        } => reconstruct(*profile, *flavor, x, *order, *coefficients, common),
        Command::Continuous {
            variant,
            u0,
            tau,
            x,
            tau_max,
        } => continuous(*variant, *u0, tau, x, *tau_max, common),
        Command::Golden {
            table,
            identity: which,
            alpha,
            n,
            x,
            u,
        } => golden(*table, *which, alpha, n, x, u, common),
    }
}

fn kernel(
    kinds: &[KernelArg],
    alphas: &[f64],
    taus: &[f64],
    xs: &[f64],
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::default())?;
    let mut points = Vec::new();
    for &alpha in alphas {
        for &tau in taus {
            for &x in xs {
                points.push(KernelPoint::at(alpha, tau, x)?);
            }
        }
    }
    let params = row!("kind" => kinds.iter().map(|k| kernel_kind(*k).name()).collect::<Vec<_>>(),
        "alpha" => alphas, "tau" => taus, "x" => xs, "tolerance" => tol_params(&tol));
    let mut report = Report::new("kernel", params);
    for &k in kinds {
        let kind = kernel_kind(k);
        for (p, est) in points
            .iter()
            .zip(lstx::kernels::evaluate_grid(kind, &points, &tol))
        {
            let est = est?;
            report.results.push(row!(
                "kind" => kind.name(), "alpha" => p.alpha(), "tau" => p.tau(), "x" => p.x(),
                "value" => est.value, "error_estimate" => est.error_estimate,
                "evaluations" => est.evaluations,
            ));
        }
    }
    Ok(Output::Report(report))
}

fn identity_row(
    which: Identity,
    alpha: f64,
    index: f64,
    u: f64,
    tol: &Tolerance,
) -> Result<Row, CliError> {
    let r = check_identity(which, IdentityParams { alpha, index, u }, tol)?;
    Ok(row!(
        "identity" => which.name(), "alpha" => alpha, "index" => index, "u" => u,
        "lhs" => r.lhs, "rhs" => r.rhs, "lhs_im" => r.lhs_im, "rhs_im" => r.rhs_im,
        "residual" => r.residual, "rel_residual" => r.rel_residual,
        "error_estimate" => r.error_estimate,
    ))
}

fn oracle(
    which: IdentityArg,
    alpha: f64,
    index: f64,
    us: &[f64],
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::default())?;
    let which = identity(which);
    let params = row!("identity" => which.name(), "alpha" => alpha, "index" => index, "u" => us,
        "tolerance" => tol_params(&tol));
    let mut report = Report::new("oracle", params);
    for &u in us {
        report
            .results
            .push(identity_row(which, alpha, index, u, &tol)?);
    }
    Ok(Output::Report(report))
}

fn forward(
    series: Series,
    variant: Variant,
    alpha: f64,
    seq: &SeqArgs,
    xs: &[f64],
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::new(1e-13, 1e-12, 4000)?)?;
    let s = sequence(seq)?;
    check_points(xs)?;
    let (kind, alpha) = match (series, variant) {
        (Series::Complete, Variant::Re) => (KernelKind::ReK, alpha),
        (Series::Complete, Variant::Im) => (KernelKind::ImK, alpha),
        (Series::Incomplete, Variant::Re) => (KernelKind::ReJ, 0.5),
        (Series::Incomplete, Variant::Im) => (KernelKind::ImJ, 0.5),
    };
    let out = forward_report(kind, alpha, &s, xs, &tol)?;
    let params = row!("series" => kind.name(), "alpha" => alpha, "seq" => s.values(),
        "delta" => seq.delta, "x" => xs, "tolerance" => tol_params(&tol));
    let mut report = Report::new("forward", params);
    report.warnings = warning_strings(&out);
    for (e, &x) in out.entries.iter().zip(xs) {
        report.results.push(row!(
            "x" => x, "value" => e.value, "error_estimate" => e.error_estimate,
            "truncation_index" => e.truncation_index,
        ));
    }
    Ok(Output::Report(report))
}

fn recovery(scheme: Scheme) -> Recovery {
    match scheme {
        Scheme::Complete => Recovery::Invert,
        Scheme::Incomplete => Recovery::InvertIncomplete,
        Scheme::Reciprocal => Recovery::Reciprocal,
    }
}

/// Kernel of the forward series that a scheme inverts.
fn forward_kind(scheme: Scheme, part: Part) -> KernelKind {
    match (scheme, part) {
        (Scheme::Incomplete, Part::Re) => KernelKind::ReJ,
        (Scheme::Incomplete, Part::Im) => KernelKind::ImJ,
        (_, Part::Re) => KernelKind::ReK,
        (_, Part::Im) => KernelKind::ImK,
    }
}

fn recovery_options(common: &Common, coefficient_tol: f64) -> Result<RecoveryOptions, CliError> {
    if coefficient_tol.is_nan() || coefficient_tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "coefficient tolerance must be positive, got {coefficient_tol}"
        )));
    }
    Ok(RecoveryOptions {
        quadrature: tolerance(common, round_trip_tolerance())?,
        coefficient_tol,
        max_index: max_index()?,
    })
}

fn invert(
    scheme: Scheme,
    variant: Variant,
    u0: f64,
    n: &str,
    coefficient_tol: f64,
    common: &Common,
) -> Result<Output, CliError> {
    let options = recovery_options(common, coefficient_tol)?;
    let indices = parse_indices(n)?;
    let f = FunctionEvaluator::laplace_kernel(u0)?;
    let out = recover(recovery(scheme), part(variant), &f, &indices, &options)?;
    let params = row!("scheme" => format!("{scheme:?}").to_lowercase(), "variant" => part(variant).name(),
        "function" => format!("exp(-x cosh {u0})"), "u0" => u0, "n" => indices,
        "coefficient_tol" => coefficient_tol, "max_index" => options.max_index,
        "tolerance" => tol_params(&options.quadrature));
    let mut report = Report::new("invert", params);
    report.warnings = warning_strings(&out);
    for e in &out.entries {
        report.results.push(row!(
            "index" => e.index, "value" => e.value, "error_estimate" => e.error_estimate,
            "amplification" => e.amplification,
        ));
    }
    Ok(Output::Report(report))
}

fn roundtrip(
    scheme: Scheme,
    variant: Variant,
    seq: &SeqArgs,
    coefficient_tol: f64,
    common: &Common,
) -> Result<Output, CliError> {
    let options = recovery_options(common, coefficient_tol)?;
    let s = sequence(seq)?;
    let p = part(variant);
    let first = if p == Part::Im { 1 } else { 0 };
    let indices: Vec<usize> = (first..s.len()).collect();
    let f = forward_function(forward_kind(scheme, p), 0.5, &s, &options.quadrature)?;
    let out = recover(recovery(scheme), p, &f, &indices, &options)?;
    let params = row!("scheme" => format!("{scheme:?}").to_lowercase(), "variant" => p.name(),
        "seq" => s.values(), "delta" => seq.delta, "coefficient_tol" => coefficient_tol,
        "max_index" => options.max_index, "tolerance" => tol_params(&options.quadrature));
    let mut report = Report::new("roundtrip", params);
    if p == Part::Im && s.get(0) != 0.0 {
        report
            .warnings
            .push(TransformWarning::IgnoredConstantTerm { value: s.get(0) }.to_string());
    }
    report.warnings.extend(warning_strings(&out));
    for e in &out.entries {
        // The reciprocal scheme recovers b_n / cosh(pi n).
        let recovered = if scheme == Scheme::Reciprocal {
            e.value * amplification(e.index)
        } else {
            e.value
        };
        report.results.push(row!(
            "index" => e.index, "input" => s.get(e.index), "value" => e.value,
            "recovered" => recovered, "abs_error" => (recovered - s.get(e.index)).abs(),
            "error_estimate" => e.error_estimate, "amplification" => e.amplification,
        ));
    }
    Ok(Output::Report(report))
}

fn profile(which: ProfileArg, flavor: FlavorArg) -> Result<PeriodicProfile, CliError> {
    let flavor = match flavor {
        FlavorArg::CoshHalf => ProfileFlavor::CoshHalf,
        FlavorArg::SinhHalf => ProfileFlavor::SinhHalf,
    };
    Ok(match which {
        ProfileArg::Cos => PeriodicProfile::new(f64::cos, 1.0, flavor)?,
        ProfileArg::Sin => PeriodicProfile::new(f64::sin, 1.0, flavor)?,
        ProfileArg::Triangle => PeriodicProfile::new(f64::abs, 1.0, flavor)?,
        ProfileArg::OddTriangle => {
            PeriodicProfile::new(|u: f64| u * (PI - u.abs()) / PI, 1.0, flavor)?
        }
    })
}

/// Tolerance for profile coefficients by x-quadrature. They carry no
/// `cosh` weight; reconstruction to order 8 scales their error by about 4e8.
fn coefficient_tolerance() -> Tolerance {
    Tolerance::new(1e-16, 1e-14, 20_000).expect("valid tolerance")
}

/// Coefficients kept by `reconstruct` when no order is given.
const AUTO_ORDER_LIMIT: usize = 16;

fn reconstruct(
    which: ProfileArg,
    flavor: FlavorArg,
    xs: &[f64],
    order: Option<usize>,
    source: CoefficientSource,
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::new(1e-15, 1e-14, 4000)?)?;
    let prof = profile(which, flavor)?;
    check_points(xs)?;
    let p = prof.flavor().part();
    let last = order.unwrap_or(AUTO_ORDER_LIMIT);
    let ceiling = max_index()?;
    let mut coeffs = Vec::with_capacity(last + 1);
    match source {
        CoefficientSource::Closed => {
            for n in 0..=last {
                coeffs.push(profile_coefficient(&prof, n, &tol)?);
            }
        }
        CoefficientSource::Quadrature => {
            let xtol = coefficient_tolerance();
            let f = profile_function(&prof, &tol).memoized();
            for n in 0..=last {
                coeffs.push(match p {
                    Part::Re => coeff_re(&f, 0.5, n, &xtol)?,
                    Part::Im => coeff_im(&f, 0.5, n, &xtol)?,
                });
            }
        }
    }
    let coeffs = CoefficientSequence::new(coeffs)?;
    let params = row!("profile" => format!("{which:?}").to_lowercase(), "flavor" => p.name(),
        "x" => xs, "order" => order, "coefficients" => format!("{source:?}").to_lowercase(),
        "tolerance" => tol_params(&tol));
    let mut report = Report::new("reconstruct", params);
    if source == CoefficientSource::Quadrature {
        for n in 0..=last {
            report.warnings.extend(
                precision_warnings(n, coefficient_tolerance().abs_tol, 1e-6, ceiling)
                    .iter()
                    .map(ToString::to_string),
            );
        }
    }
    for &x in xs {
        let (value, used) = match order {
            Some(n) => match p {
                Part::Re => (reconstruct_re(&coeffs, x, n, &tol)?, n),
                Part::Im => (reconstruct_im(&coeffs, x, n, &tol)?, n),
            },
            None => reconstruct_until_stable(p, &coeffs, x, &tol)?,
        };
        let oracle = represent_from_profile(&prof, x, &tol)?;
        report.results.push(row!(
            "x" => x, "order" => used, "value" => value, "represented" => oracle,
            "abs_error" => (value - oracle).abs(),
        ));
    }
    let listing: Vec<Value> = coeffs.values().iter().map(|&a| json!(a)).collect();
    report
        .params
        .insert("coefficient_values".into(), Value::Array(listing));
    Ok(Output::Report(report))
}

fn continuous(
    variant: Variant,
    u0: f64,
    taus: &[f64],
    xs: &[f64],
    tau_max: f64,
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::new(1e-13, 1e-12, 4000)?)?;
    let p = part(variant);
    check_points(xs)?;
    let f = FunctionEvaluator::laplace_kernel(u0)?;
    let half = 0.5 * u0;
    if p == Part::Im && half == 0.0 {
        return Err(CliError::Usage("the imaginary pair needs u0 != 0".into()));
    }
    // Closed-form spectrum of exp(-x cosh u0) and the bound on cosh(pi tau) F(tau).
    let (trig_scale, bound) = match p {
        Part::Re => (PI / (2.0 * half.cosh()), PI / (2.0 * half.cosh())),
        Part::Im => (PI / (2.0 * half.sinh()), PI / (2.0 * half.sinh()).abs()),
    };
    let spectrum = move |tau: f64| {
        let trig = match p {
            Part::Re => (tau * u0).cos(),
            Part::Im => (tau * u0).sin(),
        };
        trig_scale * trig / (PI * tau).cosh()
    };
    let params = row!("variant" => p.name(), "u0" => u0, "tau" => taus, "x" => xs,
        "tau_max" => tau_max, "tolerance" => tol_params(&tol));
    let mut report = Report::new("continuous", params);
    for &tau in taus {
        let value = continuous_forward(p, &f, tau, &tol)?;
        report.results.push(row!(
            "stage" => "forward", "tau" => tau, "value" => value, "closed_form" => spectrum(tau),
            "abs_error" => (value - spectrum(tau)).abs(),
        ));
    }
    let decay = Some(SpectralDecay::new(bound, 0.0)?);
    for &x in xs {
        let inv = continuous_inverse(p, spectrum, x, tau_max, decay, &tol)?;
        let exact = (-x * u0.cosh()).exp();
        report.results.push(row!(
            "stage" => "inverse", "x" => x, "value" => inv.value, "closed_form" => exact,
            "abs_error" => (inv.value - exact).abs(), "error_estimate" => inv.error_estimate,
            "tail_bound" => inv.tail_bound,
        ));
    }
    Ok(Output::Report(report))
}

const KERNEL_COLUMNS: [&str; 7] = [
    "kind",
    "alpha",
    "n",
    "x",
    "value",
    "error_estimate",
    "provenance",
];
const IDENTITY_COLUMNS: [&str; 9] = [
    "identity",
    "alpha",
    "n",
    "u",
    "lhs",
    "rhs",
    "residual",
    "error_estimate",
    "provenance",
];

fn golden(
    table: TableArg,
    which: IdentityArg,
    alphas: &[f64],
    n: &str,
    xs: &[f64],
    us: &[f64],
    common: &Common,
) -> Result<Output, CliError> {
    let tol = tolerance(common, Tolerance::default())?;
    let indices = parse_indices(n)?;
    let ceiling = max_index()?;
    if let Some(&top) = indices.iter().max() {
        if top > ceiling {
            return Err(CliError::Usage(format!(
                "index {top} is outside the precision envelope n <= {ceiling}"
            )));
        }
    }
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    let (rows, columns): (Vec<Row>, &[&str]) = match table {
        TableArg::Kernel => {
            let mut rows = Vec::new();
            for kind in [KernelKind::ImK, KernelKind::ReK] {
                for &alpha in &alphas {
                    for &n in &indices {
                        for &x in xs {
                            let est = kind.estimate(&KernelPoint::at(alpha, n as f64, x)?, &tol)?;
                            rows.push(row!(
                                "kind" => kind.name(), "alpha" => alpha, "n" => n, "x" => x,
                                "value" => est.value, "error_estimate" => est.error_estimate,
                                "provenance" => "compensated-gauss-kronrod",
                            ));
                        }
                    }
                }
            }
            (rows, &KERNEL_COLUMNS)
        }
        TableArg::Identity => {
            let which = identity(which);
            let mut rows = Vec::new();
            for &alpha in &alphas {
                for &n in &indices {
                    for &u in us {
                        let r = identity_row(which, alpha, n as f64, u, &tol)?;
                        let mut out = Row::new();
                        for key in IDENTITY_COLUMNS {
                            let source = if key == "n" { "index" } else { key };
                            if let Some(v) = r.get(source) {
                                out.insert(key.to_string(), v.clone());
                            }
                        }
                        out.insert("n".into(), json!(n));
                        out.insert("provenance".into(), json!("quadrature-vs-closed-form"));
                        rows.push(out);
                    }
                }
            }
            (rows, &IDENTITY_COLUMNS)
        }
    };
    let generation = json!({
        "table": format!("{table:?}").to_lowercase(),
        "identity": if table == TableArg::Identity { json!(identity(which).name()) } else { Value::Null },
        "alpha": alphas, "n": indices, "x": xs, "u": us,
        "tolerance": tol_params(&tol),
    });
    let body = json!({
        "schema_version": GOLDEN_SCHEMA_VERSION,
        "generation": generation,
        "columns": columns,
        "rows": rows,
    });
    let mut json_text = serde_json::to_string_pretty(&body).expect("table serialises");
    json_text.push('\n');
    let csv = format!(
        "# lstx golden table, schema {GOLDEN_SCHEMA_VERSION}\n{}",
        rows_to_csv(&rows, Some(columns))?
    );
    Ok(Output::Golden {
        json: json_text,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_indices("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_indices("4, 2").unwrap(), vec![4, 2]);
        assert!(parse_indices("").unwrap().is_empty());
        assert!(parse_indices("3..1").is_err());
        assert!(parse_indices("a").is_err());
    }
}
