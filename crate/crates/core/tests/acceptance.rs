//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs as a plain binary (no libtest harness) so the PASS/FAIL lines are
//! always printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lstx::identities::{check_identity, Identity, IdentityParams};
use lstx::kernels::{im_k, kernel_bound, re_k, KernelKind, KernelPoint};
use lstx::transforms::{
    amplification, coeff_im, coeff_re, continuous_forward, continuous_inverse, forward_function,
    forward_re, profile_coefficient, reciprocal_forward, reciprocal_reconstruct, reconstruct_im,
    reconstruct_re, recover, recover_one, represent_from_profile, round_trip_tolerance,
    CoefficientSequence, FunctionEvaluator, Part, PeriodicProfile, ProfileFlavor, Recovery,
    RecoveryOptions, SpectralDecay, TransformWarning,
};
use lstx::{Error, Tolerance};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn lib<T>(r: lstx::Result<T>) -> Result<T, String> {
    r.map_err(|e: Error| e.to_string())
}

fn random_sequences(count: usize, seed: u64) -> Vec<CoefficientSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let values = (0..=8).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            CoefficientSequence::new(values).unwrap()
        })
        .collect()
}

/// Round trip of `seq` through `forward` then `recovery`; max abs error.
fn round_trip(
    kind: KernelKind,
    recovery: Recovery,
    part: Part,
    seq: &CoefficientSequence,
) -> Result<f64, String> {
    let tol = round_trip_tolerance();
    let f = lib(forward_function(kind, 0.5, seq, &tol))?;
    let first = if part == Part::Im { 1 } else { 0 };
    let indices: Vec<usize> = (first..=8).collect();
    let report = lib(recover(
        recovery,
        part,
        &f,
        &indices,
        &RecoveryOptions::default(),
    ))?;
    if report.has_warnings() {
        return fail(format!("unexpected warnings: {:?}", report.warnings));
    }
    Ok(report
        .entries
        .iter()
        .map(|e| (e.value - seq.get(e.index)).abs())
        .fold(0.0, f64::max))
}

fn kernel_closed_form() -> Outcome {
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let v = lib(re_k(&lib(KernelPoint::at(0.5, 0.0, x))?, &tol))?;
        let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
        worst = worst.max(((v - exact) / exact).abs());
    }
    if worst <= 1e-10 {
        Ok(format!("max rel error {worst:.2e}"))
    } else {
        fail(format!("max rel error {worst:.2e} > 1e-10"))
    }
}

fn laplace_identities() -> Outcome {
    let tol = Tolerance::new(1e-11, 1e-10, 4000).unwrap();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut skipped = 0;
    for &alpha in &[-0.5, 0.3, 0.5] {
        for &u in &[0.0, 0.5, 1.0, 2.0] {
            let mut cases: Vec<(Identity, f64)> = Vec::new();
            for n in 0..=6 {
                for which in [
                    Identity::LaplaceK,
                    Identity::LaplaceReK,
                    Identity::LaplaceImK,
                ] {
                    cases.push((which, n as f64));
                }
            }
            for tau in [0.25, 1.5, 3.7] {
                cases.push((Identity::LaplaceK, tau));
            }
            for (which, index) in cases {
                match check_identity(which, IdentityParams { alpha, index, u }, &tol) {
                    Ok(r) => {
                        worst = worst.max(r.residual);
                        checked += 1;
                    }
                    Err(Error::SingularIdentity { .. }) => skipped += 1,
                    Err(e) => {
                        return fail(format!("{} at ({alpha}, {index}, {u}): {e}", which.name()))
                    }
                }
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!(
            "{checked} cases, {skipped} singular skipped, max residual {worst:.2e}"
        ))
    } else {
        fail(format!("max residual {worst:.2e} > 1e-8"))
    }
}

fn kernel_bound_grid() -> Outcome {
    let tol = Tolerance::default();
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for &alpha in &[-0.5, 0.0, 0.5] {
        for tau in 0..=8 {
            for &x in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                let p = lib(KernelPoint::at(alpha, tau as f64, x))?;
                let re = lib(re_k(&p, &tol))?.abs();
                let im = lib(im_k(&p, &tol))?.abs();
                for &delta in &[0.0, 0.5, 1.0, 1.4] {
                    let b = lib(kernel_bound(&p, delta))?;
                    worst = worst.max(re.max(im) - b);
                    count += 2;
                }
            }
        }
    }
    if worst <= 1e-10 {
        Ok(format!("{count} comparisons, max excess {worst:.2e}"))
    } else {
        fail(format!("bound exceeded by {worst:.2e}"))
    }
}

fn complete_round_trips() -> Outcome {
    let mut worst = 0.0f64;
    for seq in random_sequences(5, 2024) {
        worst = worst.max(round_trip(
            KernelKind::ReK,
            Recovery::Invert,
            Part::Re,
            &seq,
        )?);
        worst = worst.max(round_trip(
            KernelKind::ImK,
            Recovery::Invert,
            Part::Im,
            &seq,
        )?);
    }
    if worst <= 1e-6 {
        Ok(format!("5 sequences x (re, im), max abs error {worst:.2e}"))
    } else {
        fail(format!("max abs error {worst:.2e} > 1e-6"))
    }
}

fn incomplete_round_trips() -> Outcome {
    let mut worst = 0.0f64;
    for seq in random_sequences(2, 77) {
        worst = worst.max(round_trip(
            KernelKind::ReJ,
            Recovery::InvertIncomplete,
            Part::Re,
            &seq,
        )?);
        worst = worst.max(round_trip(
            KernelKind::ImJ,
            Recovery::InvertIncomplete,
            Part::Im,
            &seq,
        )?);
    }
    let halves = CoefficientSequence::new(vec![0.0, 0.5, 0.25, 0.125]).unwrap();
    worst = worst.max(round_trip(
        KernelKind::ReJ,
        Recovery::InvertIncomplete,
        Part::Re,
        &halves,
    )?);
    if worst <= 1e-6 {
        Ok(format!("3 sequences, max abs error {worst:.2e}"))
    } else {
        fail(format!("max abs error {worst:.2e} > 1e-6"))
    }
}

fn biorthogonality() -> Outcome {
    let tol = round_trip_tolerance();
    let options = RecoveryOptions::default();
    let mut worst = 0.0f64;
    for (part, kind) in [(Part::Re, KernelKind::ReK), (Part::Im, KernelKind::ImK)] {
        for m in 1..=8 {
            let f = lib(forward_function(
                kind,
                0.5,
                &CoefficientSequence::unit(m),
                &tol,
            ))?;
            let indices: Vec<usize> = (1..=8).collect();
            let row = lib(recover(Recovery::Invert, part, &f, &indices, &options))?;
            for e in &row.entries {
                let want = if e.index == m { 1.0 } else { 0.0 };
                worst = worst.max((e.value - want).abs());
            }
        }
    }
    let f0 = lib(forward_function(
        KernelKind::ReK,
        0.5,
        &CoefficientSequence::unit(0),
        &tol,
    ))?;
    // The implemented inversion halves n = 0; the raw entry is twice that.
    let raw00 = 2.0 * lib(recover_one(Recovery::Invert, Part::Re, &f0, 0, &tol))?.value;
    if (raw00 - 2.0).abs() > 1e-6 {
        return fail(format!("raw G[0][0] = {raw00}, expected 2"));
    }
    if worst <= 1e-6 {
        Ok(format!(
            "max |G - I| on 1..8 (re, im) {worst:.2e}; raw G[0][0] = {raw00:.9}"
        ))
    } else {
        fail(format!("max |G - I| {worst:.2e} > 1e-6"))
    }
}

fn smooth_profiles() -> Outcome {
    // Unweighted coefficients; reconstruction to order 8 multiplies their
    // error by at most cosh(8 pi) |J(x, 1/2+8i, pi)|, about 4e8.
    let tol = Tolerance::new(1e-16, 1e-14, 20_000).unwrap();
    let profile_tol = Tolerance::new(1e-15, 1e-14, 4000).unwrap();
    let cases = [
        (
            PeriodicProfile::new(f64::cos, 1.0, ProfileFlavor::CoshHalf).unwrap(),
            Part::Re,
        ),
        (
            PeriodicProfile::new(f64::sin, 1.0, ProfileFlavor::SinhHalf).unwrap(),
            Part::Im,
        ),
    ];
    let expected = 2.0 / PI.cosh();
    let mut coef_err = 0.0f64;
    let mut recon_err = 0.0f64;
    for (profile, part) in &cases {
        let f = FunctionEvaluator::new(
            {
                let p = profile.clone();
                move |x| represent_from_profile(&p, x, &profile_tol).unwrap_or(f64::NAN)
            },
            lstx::transforms::Integrability::new(0.0, 1.0).unwrap(),
        )
        .memoized();
        let mut coeffs = Vec::new();
        for n in 0..=8 {
            let a = match part {
                Part::Re => lib(coeff_re(&f, 0.5, n, &tol))?,
                Part::Im => lib(coeff_im(&f, 0.5, n, &tol))?,
            };
            let want = if n == 1 { expected } else { 0.0 };
            coef_err = coef_err.max((a - want).abs());
            coeffs.push(a);
        }
        let coeffs = CoefficientSequence::new(coeffs).unwrap();
        for &x in &[0.5, 1.0, 2.0] {
            let oracle = lib(represent_from_profile(profile, x, &profile_tol))?;
            for order in 1..=8 {
                let s = match part {
                    Part::Re => lib(reconstruct_re(&coeffs, x, order, &profile_tol))?,
                    Part::Im => lib(reconstruct_im(&coeffs, x, order, &profile_tol))?,
                };
                recon_err = recon_err.max((s - oracle).abs());
            }
        }
    }
    if coef_err <= 1e-6 && recon_err <= 1e-6 {
        Ok(format!(
            "coefficient error {coef_err:.2e}, reconstruction error {recon_err:.2e} (N = 1..8)"
        ))
    } else {
        fail(format!(
            "coefficient error {coef_err:.2e}, reconstruction error {recon_err:.2e}"
        ))
    }
}

fn triangle_wave_convergence() -> Outcome {
    let tol = Tolerance::new(1e-15, 1e-14, 4000).unwrap();
    let profile = PeriodicProfile::new(f64::abs, 1.0, ProfileFlavor::CoshHalf).unwrap();
    let coeffs: Vec<f64> = (0..=16)
        .map(|n| profile_coefficient(&profile, n, &tol))
        .collect::<lstx::Result<_>>()
        .map_err(|e| e.to_string())?;
    let coeffs = CoefficientSequence::new(coeffs).unwrap();
    let x = 1.0;
    let oracle = lib(represent_from_profile(&profile, x, &tol))?;
    let mut errors = Vec::new();
    for order in [2, 4, 8, 16] {
        let s = lib(reconstruct_re(&coeffs, x, order, &tol))?;
        errors.push((order, (s - oracle).abs()));
    }
    let monotone = errors.windows(2).all(|w| w[1].1 <= 1.1 * w[0].1);
    let listing: Vec<String> = errors
        .iter()
        .map(|(n, e)| format!("N={n}: {e:.2e}"))
        .collect();
    if monotone {
        Ok(listing.join(", "))
    } else {
        fail(format!("not decreasing: {}", listing.join(", ")))
    }
}

fn reciprocal_pair() -> Outcome {
    let tol = round_trip_tolerance();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut values = vec![0.0];
    values.extend((1..=6).map(|_| rng.gen_range(-1.0..=1.0)));
    let b = CoefficientSequence::new(values).unwrap();
    let mut spectral = 0.0f64;
    let mut a = vec![0.0];
    for n in 1..=6 {
        let an = lib(reciprocal_forward(Part::Re, &b, 0.5, n, &tol))?;
        spectral = spectral.max((an * amplification(n) - b.get(n)).abs());
        a.push(an);
    }
    let a = CoefficientSequence::new(a).unwrap();
    let mut pointwise = 0.0f64;
    for &x in &[0.5, 1.0, 2.0] {
        let rebuilt = lib(reciprocal_reconstruct(Part::Re, &a, 0.5, x, &tol))?;
        let direct = lib(forward_re(&b, 0.5, x, &tol))?;
        pointwise = pointwise.max((rebuilt - direct).abs());
    }
    if spectral <= 1e-6 && pointwise <= 1e-6 {
        Ok(format!(
            "max |a_n cosh(pi n) - b_n| {spectral:.2e}, pointwise {pointwise:.2e}"
        ))
    } else {
        fail(format!(
            "spectral {spectral:.2e}, pointwise {pointwise:.2e}"
        ))
    }
}

fn continuous_pair() -> Outcome {
    let u0: f64 = 0.7;
    let tol = Tolerance::new(1e-13, 1e-12, 4000).unwrap();
    let f = FunctionEvaluator::laplace_kernel(u0).unwrap();
    let denom = 2.0 * (0.5 * u0).cosh();
    let mut forward_err = 0.0f64;
    let mut inverse_err = 0.0f64;
    for part in [Part::Re, Part::Im] {
        let closed = move |tau: f64| {
            let trig = match part {
                Part::Re => (tau * u0).cos() / (2.0 * (0.5 * u0).cosh()),
                Part::Im => (tau * u0).sin() / (2.0 * (0.5 * u0).sinh()),
            };
            PI * trig / (PI * tau).cosh()
        };
        for &tau in &[0.0, 0.5, 1.0, 2.0] {
            let got = lib(continuous_forward(part, &f, tau, &tol))?;
            forward_err = forward_err.max((got - closed(tau)).abs());
        }
        let bound = match part {
            Part::Re => PI / denom,
            Part::Im => PI / (2.0 * (0.5 * u0).sinh()),
        };
        let decay = SpectralDecay::new(bound, 0.0).ok();
        for &x in &[0.5, 1.0, 2.0] {
            let inv = lib(continuous_inverse(part, closed, x, 12.0, decay, &tol))?;
            inverse_err = inverse_err.max((inv.value - (-x * u0.cosh()).exp()).abs());
        }
    }
    if forward_err <= 1e-8 && inverse_err <= 1e-5 {
        Ok(format!(
            "forward error {forward_err:.2e}, inverse error {inverse_err:.2e}"
        ))
    } else {
        fail(format!(
            "forward error {forward_err:.2e}, inverse error {inverse_err:.2e}"
        ))
    }
}

fn precision_envelope() -> Outcome {
    let f = FunctionEvaluator::laplace_kernel(0.4).unwrap();
    let report = lib(recover(
        Recovery::Invert,
        Part::Re,
        &f,
        &[14],
        &RecoveryOptions::default(),
    ))?;
    let amplified = report
        .warnings
        .iter()
        .any(|w| matches!(w, TransformWarning::Amplification { index: 14, .. }));
    let ceiling = report
        .warnings
        .iter()
        .any(|w| matches!(w, TransformWarning::BeyondCeiling { index: 14, .. }));
    if amplified && ceiling {
        Ok(format!(
            "{} warnings at n = 14 (CLI surfacing covered by the cli tests)",
            report.warnings.len()
        ))
    } else {
        fail(format!("missing warnings: {:?}", report.warnings))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("kernel closed form at alpha = 1/2", kernel_closed_form),
        ("Laplace identity residuals", laplace_identities),
        ("kernel bound on the test grid", kernel_bound_grid),
        ("complete-kernel series round trips", complete_round_trips),
        (
            "incomplete-kernel series round trips",
            incomplete_round_trips,
        ),
        ("biorthogonality matrices", biorthogonality),
        (
            "smooth profile coefficients and reconstruction",
            smooth_profiles,
        ),
        (
            "triangle-wave partial-sum convergence",
            triangle_wave_convergence,
        ),
        ("reciprocal pair spectral identity", reciprocal_pair),
        ("continuous pair round trip", continuous_pair),
        ("precision envelope warnings", precision_envelope),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|k| k != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} [{secs:.1} s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name} [{secs:.1} s]: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
