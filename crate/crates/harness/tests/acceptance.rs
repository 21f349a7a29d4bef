//! Acceptance run: the default config plus the worked M2 examples.
//!
//! Every criterion is judged from raw margins at its own tolerance, so the
//! tolerances written in the config file do not affect the verdict.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use petz_core::entropy::EntropyContext;
use petz_core::{Element, ReferenceState, TracialAlgebra};
use petz_harness::demo::{demo, DemoChannel};
use petz_harness::{run_suite, Check, HarnessConfig, SuiteOutcome};

struct Verdict {
    pass: bool,
    detail: String,
}

/// Counts of margins below `-tol`, the smallest margin and the evaluated count.
fn judge(outcome: &SuiteOutcome, check: Check, tol: f64) -> (usize, usize, f64) {
    let mut evaluated = 0;
    let mut failed = 0;
    let mut worst = f64::INFINITY;
    for r in &outcome.reports {
        if let Some(&m) = r.margins.get(&check) {
            evaluated += 1;
            worst = worst.min(m);
            if !(m >= -tol) {
                failed += 1;
            }
        }
    }
    (evaluated, failed, worst)
}

fn margins(outcome: &SuiteOutcome, checks: &[(Check, f64, usize)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(check, tol, min_count) in checks {
        let (n, failed, worst) = judge(outcome, check, tol);
        let ok = failed == 0 && n >= min_count;
        pass &= ok;
        parts.push(format!("{}: {failed}/{n} below -{tol:.0e} (min {worst:.3e})", check.name()));
    }
    Verdict {
        pass,
        detail: parts.join("; "),
    }
}

fn criterion_chain(outcome: &SuiteOutcome) -> Verdict {
    let mut v = margins(
        outcome,
        &[
            (Check::ChainFidelity, 1e-9, 1000),
            (Check::ChainL1, 1e-9, 1000),
            (Check::ChainAm, 1e-9, 1000),
        ],
    );
    let per_combo = outcome.summary.combos.iter().map(|c| c.trials).min().unwrap_or(0);
    let errors = outcome.summary.error_trials;
    v.pass &= per_combo >= 1000 && errors == 0;
    v.detail = format!("{}; min trials per combo {per_combo}; errored trials {errors}", v.detail);
    v
}

fn criterion_worked_example() -> Verdict {
    let t = match demo(DemoChannel::Pinching) {
        Ok(t) => t,
        Err(e) => {
            return Verdict {
                pass: false,
                detail: format!("demo failed: {e}"),
            }
        }
    };
    let f = ((1.5f64).sqrt() + (0.5f64).sqrt()) / 2.0;
    let term = 4.0 * (1.0 - f) * (1.0 - f);
    let exact = [t.entropy_gap, t.am_residual_sq, t.l1_residual_sq]
        .iter()
        .all(|v| (v - 0.25).abs() <= 1e-12);
    let fid = (t.fidelity - f).abs() <= 1e-12 && (t.fidelity_term - term).abs() <= 1e-6;
    Verdict {
        pass: exact && fid,
        detail: format!(
            "gap {:.15} am² {:.15} l1² {:.15}; F {:.12} (closed form {f:.12}); 4(1-F)² {:.9} vs {term:.9}; \
             literal 0.004641 differs by {:.2e}",
            t.entropy_gap,
            t.am_residual_sq,
            t.l1_residual_sq,
            t.fidelity,
            t.fidelity_term,
            (t.fidelity_term - 0.004641).abs()
        ),
    }
}

/// `‖X‖₁² = ‖X‖²_{1,2}` for traceless Hermitian `X` with spectrum `±c` on `(M₂, Tr/2)`.
fn saturating_trace_vs_am() -> Result<f64, String> {
    let alg = Arc::new(TracialAlgebra::matrix(2).map_err(|e| e.to_string())?);
    let ctx = EntropyContext::new(&ReferenceState::maximally_mixed(&alg));
    let mut worst: f64 = 0.0;
    for &c in &[1e-3, 0.5, 1.0, 3.7] {
        for k in 0..8 {
            let theta = k as f64 * 0.4;
            let (a, b) = ((2.0 * theta).cos(), (2.0 * theta).sin());
            let x = Element::from_real_rows(&alg, &[&[c * a, c * b], &[c * b, -c * a]]).map_err(|e| e.to_string())?;
            let l1 = x.norm1();
            let am = ctx.am_norm(&x, 2.0).map_err(|e| e.to_string())?;
            worst = worst.max((l1 * l1 - am * am).abs());
        }
    }
    Ok(worst)
}

fn criterion_trace_vs_am(outcome: &SuiteOutcome) -> Verdict {
    let mut v = margins(outcome, &[(Check::TraceVsAm, 1e-9, 1000)]);
    match saturating_trace_vs_am() {
        Ok(gap) => {
            v.pass &= gap <= 1e-12;
            v.detail = format!("{}; saturating case |gap| {gap:.3e}", v.detail);
        }
        Err(e) => {
            v.pass = false;
            v.detail = format!("{}; saturating case failed: {e}", v.detail);
        }
    }
    v
}

fn criterion_swb(outcome: &SuiteOutcome) -> Verdict {
    let h = &outcome.summary.swb;
    let completed = outcome.reports.iter().filter(|r| r.error.is_none()).count();
    let logged = outcome.reports.iter().filter(|r| r.swb_gap.is_some()).count();
    Verdict {
        pass: completed > 0 && logged == completed && h.total() == logged,
        detail: format!(
            "logged {logged}/{completed}; histogram negative {} zero {} positive {}",
            h.negative, h.zero, h.positive
        ),
    }
}

fn main() -> ExitCode {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let config = match HarnessConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            println!("[FAIL] cannot load {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    };
    let start = Instant::now();
    let outcome = match run_suite(&config) {
        Ok(o) => o,
        Err(e) => {
            println!("[FAIL] suite did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "default grid: {} trials in {:.1}s",
        outcome.summary.total_trials,
        start.elapsed().as_secs_f64()
    );

    let verdicts = [
        ("recoverability chain", criterion_chain(&outcome)),
        ("saturating worked example", criterion_worked_example()),
        (
            "Petz fixed point and CPTP",
            margins(
                &outcome,
                &[
                    (Check::FixedPoint, 1e-9, 1000),
                    (Check::PetzChoi, 1e-10, 1000),
                    (Check::PetzTracePreservation, 1e-10, 1000),
                ],
            ),
        ),
        (
            "superoperator inequalities",
            margins(
                &outcome,
                &[
                    (Check::AmContraction, 1e-9, 200),
                    (Check::SandwichDomination, 1e-9, 200),
                    (Check::VContraction, 1e-9, 200),
                    (Check::ModularSandwich, 1e-9, 200),
                    (Check::Concavity, 1e-9, 200),
                    (Check::Amgm, 1e-9, 200),
                ],
            ),
        ),
        ("trace norm vs AM norm", criterion_trace_vs_am(&outcome)),
        (
            "channel norm bound and adjoint positivity",
            margins(&outcome, &[(Check::L2Bound, 1e-9, 500), (Check::AdjointPositivity, 1e-9, 500)]),
        ),
        (
            "fidelity suite",
            margins(
                &outcome,
                &[
                    (Check::OracleDominance, 1e-12, 200),
                    (Check::PolarAttainment, 1e-10, 200),
                    (Check::BuresTriangle, 1e-9, 500),
                    (Check::PowersStormer, 1e-10, 500),
                    (Check::FidelityBound, 1e-10, 500),
                    (Check::Monotonicity, 1e-9, 500),
                    (Check::JointConcavity, 1e-9, 500),
                ],
            ),
        ),
        (
            "unitary-channel equality",
            margins(&outcome, &[(Check::UnitaryEquality, 1e-10, 100)]),
        ),
        ("Petz sufficiency", margins(&outcome, &[(Check::Sufficiency, 1e-6, 1)])),
        ("SWB gap histogram", criterion_swb(&outcome)),
    ];

    let mut all = true;
    for (i, (name, v)) in verdicts.iter().enumerate() {
        all &= v.pass;
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {} {name}: {}", i + 1, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
