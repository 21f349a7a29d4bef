//! Batch orchestration, aggregation and report output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::config::{HarnessConfig, OutputFormat};
use crate::data::AlgebraSpec;
use crate::error::HarnessError;
use crate::family::Family;
use crate::seed::trial_seed;
use crate::trial::{evaluate, Judging, ReplayFile, Sufficiency, TrialInstance, TrialReport, TrialSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// SWB gaps inside `±SWB_ZERO_BAND` count as zero in the sign histogram.
pub const SWB_ZERO_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub evaluated: usize,
    pub failed: usize,
    pub min_margin: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboSummary {
    pub algebra: String,
    pub family: Family,
    pub trials: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotApplicable {
    pub algebra: String,
    pub family: Family,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SwbHistogram {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl SwbHistogram {
    pub fn record(&mut self, v: f64) {
        if v < -SWB_ZERO_BAND {
            self.negative += 1;
        } else if v > SWB_ZERO_BAND {
            self.positive += 1;
        } else {
            self.zero += 1;
        }
        self.min = Some(self.min.map_or(v, |m| m.min(v)));
        self.max = Some(self.max.map_or(v, |m| m.max(v)));
    }

    pub fn total(&self) -> usize {
        self.negative + self.zero + self.positive
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyCounts {
    pub vacuous: usize,
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total_trials: usize,
    pub passed_trials: usize,
    pub failed_trials: usize,
    pub error_trials: usize,
    pub checks: BTreeMap<Check, CheckSummary>,
    pub skipped: Vec<Check>,
    pub combos: Vec<ComboSummary>,
    pub not_applicable: Vec<NotApplicable>,
    pub swb: SwbHistogram,
    pub sufficiency: SufficiencyCounts,
    pub resamples: usize,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.failed_trials == 0 && self.error_trials == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub summary: Summary,
    pub reports: Vec<TrialReport>,
    /// Failing trials and SWB counterexample candidates, ready for replay.
    pub persisted: Vec<ReplayFile>,
    pub judging: Judging,
}

struct Job {
    spec: AlgebraSpec,
    trial: TrialSpec,
}

struct JobResult {
    report: TrialReport,
    instance: Option<TrialInstance>,
}

fn run_job(job: &Job, judging: &Judging) -> JobResult {
    let generated = job
        .spec
        .build()
        .and_then(|alg| TrialInstance::generate(&alg, job.trial));
    match generated {
        Ok(instance) => JobResult {
            report: evaluate(&instance, judging),
            instance: Some(instance),
        },
        Err(e) => JobResult {
            report: TrialReport {
                trial_id: job.trial.trial_id,
                seed: job.trial.seed,
                algebra: job.spec.clone(),
                family: job.trial.family,
                superop: job.trial.superop,
                margins: BTreeMap::new(),
                failed: Vec::new(),
                passed: false,
                error: Some(e.to_string()),
                chain: None,
                swb_gap: None,
                sufficiency: None,
                recovery_residual: None,
            },
            instance: None,
        },
    }
}

fn is_swb_candidate(r: &TrialReport) -> bool {
    r.swb_gap.is_some_and(|v| v < -SWB_ZERO_BAND)
}

/// Runs every (algebra, family, trial) job. Trial seeds come from a global counter.
pub fn run_suite(config: &HarnessConfig) -> Result<SuiteOutcome, HarnessError> {
    config.validate()?;
    let judging = config.judging()?;
    let mut jobs = Vec::new();
    let mut not_applicable = Vec::new();
    let mut counter = 0u64;
    for entry in &config.algebras {
        let spec = entry.spec();
        let alg = spec.build()?;
        for &family in &config.families {
            if !family.applicable(&alg) {
                not_applicable.push(NotApplicable {
                    algebra: spec.label(),
                    family,
                    reason: "direct sums need at least two blocks".into(),
                });
                continue;
            }
            for t in 0..config.trials {
                jobs.push(Job {
                    spec: spec.clone(),
                    trial: TrialSpec {
                        trial_id: counter,
                        seed: trial_seed(config.master_seed, counter),
                        family,
                        superop: t < config.superop_trials,
                        oracle_samples: config.oracle_samples,
                        floor: config.invertibility_floor,
                    },
                });
                counter += 1;
            }
        }
    }

    let results: Vec<JobResult> = jobs.par_iter().map(|j| run_job(j, &judging)).collect();

    let mut checks: BTreeMap<Check, CheckSummary> = Check::ALL
        .iter()
        .filter(|c| !judging.skip.contains(c))
        .map(|&c| {
            (c, CheckSummary { evaluated: 0, failed: 0, min_margin: None, tolerance: judging.tolerance(c) })
        })
        .collect();
    let mut combos: Vec<ComboSummary> = Vec::new();
    let mut swb = SwbHistogram::default();
    let mut sufficiency = SufficiencyCounts::default();
    let (mut passed, mut failed, mut errors, mut resamples) = (0, 0, 0, 0);
    let mut reports = Vec::with_capacity(results.len());
    let mut persisted = Vec::new();

    for res in results {
        let r = res.report;
        let label = r.algebra.label();
        let combo = match combos.last_mut() {
            Some(c) if c.algebra == label && c.family == r.family => c,
            _ => {
                combos.push(ComboSummary { algebra: label, family: r.family, trials: 0, failed: 0, errors: 0 });
                combos.last_mut().expect("just pushed")
            }
        };
        combo.trials += 1;
        if r.error.is_some() {
            errors += 1;
            combo.errors += 1;
        } else if r.passed {
            passed += 1;
        } else {
            failed += 1;
            combo.failed += 1;
        }
        for (c, &v) in &r.margins {
            let s = checks.get_mut(c).expect("margins only hold judged checks");
            s.evaluated += 1;
            s.min_margin = Some(s.min_margin.map_or(v, |m| m.min(v)));
        }
        for c in &r.failed {
            checks.get_mut(c).expect("failed checks are judged").failed += 1;
        }
        if let Some(v) = r.swb_gap {
            swb.record(v);
        }
        match r.sufficiency {
            Some(Sufficiency::Vacuous) => sufficiency.vacuous += 1,
            Some(Sufficiency::Pass) => sufficiency.pass += 1,
            Some(Sufficiency::Fail) => sufficiency.fail += 1,
            None => {}
        }
        if let Some(inst) = res.instance {
            resamples += inst.resamples;
            if !r.passed || is_swb_candidate(&r) {
                persisted.push(ReplayFile {
                    schema_version: SCHEMA_VERSION,
                    judging: judging.clone(),
                    instance: inst,
                    report: r.clone(),
                });
            }
        }
        reports.push(r);
    }

    let summary = Summary {
        total_trials: reports.len(),
        passed_trials: passed,
        failed_trials: failed,
        error_trials: errors,
        checks,
        skipped: judging.skip.iter().copied().collect(),
        combos,
        not_applicable,
        swb,
        sufficiency,
        resamples,
    };
    Ok(SuiteOutcome { summary, reports, persisted, judging })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub generated_at_unix: u64,
    pub tool_version: String,
}

impl Header {
    pub fn now() -> Self {
        Self {
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: u32,
    header: &'a Header,
    config: &'a HarnessConfig,
    summary: &'a Summary,
    failures: Vec<u64>,
    swb_candidates: Vec<u64>,
    trials: &'a [TrialReport],
}

/// Full JSON report. Everything except `header` depends only on the config.
pub fn render_json(outcome: &SuiteOutcome, config: &HarnessConfig, header: &Header) -> Result<String, HarnessError> {
    let doc = JsonReport {
        schema_version: SCHEMA_VERSION,
        header,
        config,
        summary: &outcome.summary,
        failures: outcome.reports.iter().filter(|r| !r.passed).map(|r| r.trial_id).collect(),
        swb_candidates: outcome
            .reports
            .iter()
            .filter(|r| is_swb_candidate(r))
            .map(|r| r.trial_id)
            .collect(),
        trials: &outcome.reports,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// One row per trial; margins of checks that did not run are left empty.
pub fn render_csv(outcome: &SuiteOutcome) -> Result<String, HarnessError> {
    let checks: Vec<Check> = outcome.summary.checks.keys().copied().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head: Vec<String> = ["trial_id", "seed", "algebra", "family", "superop", "passed", "error", "swb_gap", "sufficiency"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    head.extend(checks.iter().map(|c| c.name().to_string()));
    w.write_record(&head)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
    for r in &outcome.reports {
        let mut row = vec![
            r.trial_id.to_string(),
            r.seed.to_string(),
            r.algebra.label(),
            r.family.to_string(),
            r.superop.to_string(),
            r.passed.to_string(),
            r.error.clone().unwrap_or_default(),
            opt(r.swb_gap),
            r.sufficiency
                .map(|s| serde_json::to_value(s).map(|v| v.as_str().unwrap_or_default().to_string()))
                .transpose()?
                .unwrap_or_default(),
        ];
        row.extend(checks.iter().map(|c| opt(r.margins.get(c).copied())));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Malformed(e.to_string()))
}

/// Directory next to the report that holds persisted instances.
pub fn instances_dir(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".instances");
    out.with_file_name(name)
}

pub fn instance_file_name(trial_id: u64) -> String {
    format!("trial-{trial_id:08}.json")
}

/// Writes the report and one replay file per persisted instance.
pub fn write_outputs(
    outcome: &SuiteOutcome,
    config: &HarnessConfig,
    out: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, HarnessError> {
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let text = match format {
        OutputFormat::Json => render_json(outcome, config, &Header::now())?,
        OutputFormat::Csv => render_csv(outcome)?,
    };
    fs::write(out, text)?;
    let mut written = Vec::new();
    let dir = instances_dir(out);
    if dir.is_dir() {
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            let stale = path
                .file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("trial-") && n.ends_with(".json"));
            if stale {
                fs::remove_file(path)?;
            }
        }
    }
    if !outcome.persisted.is_empty() {
        fs::create_dir_all(&dir)?;
        for file in &outcome.persisted {
            let path = dir.join(instance_file_name(file.instance.trial_id));
            fs::write(&path, serde_json::to_string_pretty(file)?)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn load_replay_file(path: &Path) -> Result<ReplayFile, HarnessError> {
    let text = fs::read_to_string(path)?;
    let file: ReplayFile =
        serde_json::from_str(&text).map_err(|e| HarnessError::Malformed(format!("{}: {e}", path.display())))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(HarnessError::Malformed(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    Ok(file)
}
