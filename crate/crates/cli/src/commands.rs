//! One function per subcommand. Each returns whether its checks passed;
//! parameter problems come back as [`UsageError`].

use std::io::Write;
use std::time::Instant;

use posbound::bounds::{evaluate_all_with, BoundOutcome, EvalOptions};
use posbound::models::{summary, trial_rng};
use posbound::oracles::{
    exact_zero_prob, mgf_gap_check, monte_carlo, monte_carlo_with_workers, random_monotone_law,
    JointLaw,
};
use posbound::{Eq2Form, EstimateWithCI, FamilySummary, Method, ModelSpec, Violation};
use serde::Serialize;

use crate::args::{
    parse_summary, BoundArgs, BoundFlags, CompareArgs, Format, LawKind, LemmaArgs, McArgs, McFlags,
    VerifyArgs,
};
use crate::report::{csv_header, tightest, ComparisonRow};
use crate::UsageError;

/// Slack for comparisons against an exact probability.
pub const EXACT_TOL: f64 = 1e-9;

fn options(flags: &BoundFlags) -> EvalOptions {
    EvalOptions {
        eq2_form: flags.eq2_form.into(),
        tilt: flags.t,
        ..Default::default()
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), UsageError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| UsageError::new(e.to_string()))?;
    write_stdout(&text)
}

/// Writes `text` and a newline; a closed pipe is not an error.
fn write_stdout(text: &str) -> Result<(), UsageError> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(UsageError::new(e.to_string())),
        _ => Ok(()),
    }
}

fn run_mc(spec: &ModelSpec, f: &McFlags) -> Result<EstimateWithCI, UsageError> {
    let e = match f.workers {
        Some(w) => monte_carlo_with_workers(spec, f.trials, f.seed, f.level, w),
        None => monte_carlo(spec, f.trials, f.seed, f.level),
    };
    e.map_err(UsageError::from)
}

#[derive(Serialize)]
struct BoundReport<'a> {
    model: Option<&'a ModelSpec>,
    formula_variant: Option<&'static str>,
    eq2_form: Eq2Form,
    summary: &'a FamilySummary,
    violations: Vec<Violation>,
    bounds: Vec<BoundOutcome>,
    tightest_method: Option<Method>,
}

pub fn bound(a: &BoundArgs) -> Result<bool, UsageError> {
    let opts = options(&a.bound);
    if let Some(text) = &a.summary {
        let s = parse_summary(text)?;
        let bounds = evaluate_all_with(&s, &opts);
        print_json(&BoundReport {
            model: None,
            formula_variant: None,
            eq2_form: opts.eq2_form,
            summary: &s,
            violations: Vec::new(),
            tightest_method: tightest(&bounds),
            bounds,
        })?;
        return Ok(true);
    }
    let spec = a.model.spec()?;
    let summaries = a
        .bound
        .variant
        .variants()
        .into_iter()
        .map(|v| Ok((v, summary(&spec, v)?)))
        .collect::<posbound::Result<Vec<_>>>()?;
    let reports: Vec<BoundReport> = summaries
        .iter()
        .map(|(v, s)| {
            let bounds = evaluate_all_with(s, &opts);
            BoundReport {
                model: Some(&spec),
                formula_variant: Some(v.tag()),
                eq2_form: opts.eq2_form,
                summary: s,
                violations: s.validate(),
                tightest_method: tightest(&bounds),
                bounds,
            }
        })
        .collect();
    if reports.len() == 1 {
        print_json(&reports[0])?;
    } else {
        print_json(&reports)?;
    }
    Ok(true)
}

pub fn compare(a: &CompareArgs) -> Result<bool, UsageError> {
    let template = a.model.spec()?;
    let opts = options(&a.bound);
    let mut rows = Vec::new();
    for x in a.sweep.points() {
        let spec = a.sweep.apply(&template, x)?;
        let exact = if a.oracle { exact_zero_prob(&spec).ok() } else { None };
        let mc = if a.mc { Some(run_mc(&spec, &a.mc_flags)?) } else { None };
        for v in a.bound.variant.variants() {
            let s = summary(&spec, v)?;
            let bounds = evaluate_all_with(&s, &opts);
            rows.push(ComparisonRow::new(&spec, v, &s, &bounds, exact, mc.as_ref()));
        }
    }
    match a.format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            let stdout = std::io::stdout();
            let mut w = csv::Writer::from_writer(stdout.lock());
            let io = |e: csv::Error| UsageError::new(e.to_string());
            let written = std::iter::once(csv_header())
                .chain(rows.iter().map(ComparisonRow::csv_record))
                .try_for_each(|r| w.write_record(r));
            match written {
                Err(e) if !is_broken_pipe(&e) => return Err(io(e)),
                _ => {
                    let _ = w.flush();
                }
            }
        }
    }
    Ok(true)
}

fn is_broken_pipe(e: &csv::Error) -> bool {
    matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Reference {
    Exact { value: f64, log_value: Option<f64> },
    MonteCarlo(EstimateWithCI),
}

#[derive(Serialize)]
struct Check {
    method: Method,
    formula_variant: &'static str,
    kind: &'static str,
    value: Option<f64>,
    log_value: Option<f64>,
    /// `None` when the bound was skipped or is vacuous.
    passed: Option<bool>,
    note: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    model: &'a ModelSpec,
    reference: Reference,
    checks: Vec<Check>,
    passed: bool,
}

pub fn verify(a: &VerifyArgs) -> Result<bool, UsageError> {
    let spec = a.model.spec()?;
    let reference = if a.mc {
        Reference::MonteCarlo(run_mc(&spec, &a.mc_flags)?)
    } else {
        let truth = exact_zero_prob(&spec).map_err(|e| {
            UsageError::new(format!("{e}; pass --mc to verify against Monte Carlo"))
        })?;
        Reference::Exact {
            value: truth.linear(),
            log_value: Some(truth.log_value()).filter(|v| v.is_finite()),
        }
    };
    // Uppers must clear `floor`, the lower bound must stay under `ceiling`.
    let (floor, ceiling) = match &reference {
        Reference::Exact { value, .. } => (value - EXACT_TOL, value + EXACT_TOL),
        Reference::MonteCarlo(e) => (e.ci.lower, e.ci.upper),
    };
    let opts = options(&a.bound);
    let mut checks = Vec::new();
    for v in a.bound.variant.variants() {
        let s = summary(&spec, v)?;
        for o in evaluate_all_with(&s, &opts) {
            let kind = if o.method.is_upper() { "upper" } else { "lower" };
            let check = match &o.result {
                None => Check {
                    method: o.method,
                    formula_variant: v.tag(),
                    kind,
                    value: None,
                    log_value: None,
                    passed: None,
                    note: o.skipped_reason.clone(),
                },
                Some(r) => {
                    let x = r.linear();
                    let (passed, note) = if !o.method.is_upper() {
                        (Some(x <= ceiling), None)
                    } else if r.vacuous {
                        (None, Some("vacuous".to_string()))
                    } else {
                        (Some(x >= floor), None)
                    };
                    Check {
                        method: o.method,
                        formula_variant: v.tag(),
                        kind,
                        value: Some(x),
                        log_value: Some(r.value.log_value()).filter(|l| l.is_finite()),
                        passed,
                        note,
                    }
                }
            };
            checks.push(check);
        }
    }
    let passed = checks.iter().all(|c| c.passed != Some(false));
    print_json(&VerifyReport { model: &spec, reference, checks, passed })?;
    Ok(passed)
}

#[derive(Serialize)]
struct McReport<'a> {
    model: &'a ModelSpec,
    #[serde(flatten)]
    estimate: EstimateWithCI,
}

pub fn mc(a: &McArgs) -> Result<bool, UsageError> {
    let spec = a.model.spec()?;
    let start = Instant::now();
    let estimate = run_mc(&spec, &a.mc_flags)?;
    let secs = start.elapsed().as_secs_f64();
    // Timing goes to stderr so stdout stays byte-identical between runs.
    let _ = writeln!(
        std::io::stderr(),
        "{} trials in {:.3} s ({:.0} trials/s)",
        estimate.trials,
        secs,
        estimate.trials as f64 / secs.max(1e-9)
    );
    print_json(&McReport { model: &spec, estimate })?;
    Ok(true)
}

#[derive(Serialize)]
struct LemmaReport {
    m: usize,
    t: f64,
    kappa: f64,
    law: &'static str,
    seed: u64,
    laws_checked: u64,
    violations: u64,
    max_gap: f64,
    max_ratio: f64,
    passed: bool,
}

/// Largest number of indicators `lemma-check` enumerates.
pub const LEMMA_MAX_M: usize = 10;

pub fn lemma_check(a: &LemmaArgs) -> Result<bool, UsageError> {
    if a.m == 0 || a.m > LEMMA_MAX_M {
        return Err(UsageError::new(format!(
            "--m must be in 1..={LEMMA_MAX_M} (the check enumerates 2^m atoms), got {}",
            a.m
        )));
    }
    if a.count == 0 {
        return Err(UsageError::new("--count must be at least 1"));
    }
    let laws: Box<dyn Iterator<Item = posbound::Result<JointLaw>>> = match a.law {
        LawKind::Random => Box::new(
            (0..a.count).map(|i| random_monotone_law(&mut trial_rng(a.seed, i), a.m, a.m)),
        ),
        LawKind::Comonotone => {
            if !(0.0..=1.0).contains(&a.p) {
                return Err(UsageError::new(format!("--p must lie in [0,1], got {}", a.p)));
            }
            let mut probs = vec![0.0; 1 << a.m];
            probs[0] = 1.0 - a.p;
            probs[(1 << a.m) - 1] += a.p;
            Box::new(std::iter::once(JointLaw::new(a.m, probs)))
        }
    };
    let (mut checked, mut violations, mut max_gap, mut max_ratio) = (0u64, 0u64, 0.0f64, 0.0f64);
    for law in laws {
        let r = mgf_gap_check(&law?, a.t, a.kappa)?;
        checked += 1;
        if !r.holds {
            violations += 1;
        }
        max_gap = max_gap.max(r.gap);
        if r.bound > 0.0 {
            max_ratio = max_ratio.max(r.gap / r.bound);
        } else if !r.holds {
            max_ratio = f64::INFINITY;
        }
    }
    let passed = violations == 0;
    print_json(&LemmaReport {
        m: a.m,
        t: a.t,
        kappa: a.kappa,
        law: match a.law {
            LawKind::Random => "random-monotone",
            LawKind::Comonotone => "comonotone",
        },
        seed: a.seed,
        laws_checked: checked,
        violations,
        max_gap,
        max_ratio,
        passed,
    })?;
    Ok(passed)
}
