//! Scenario runner behind the `hlab` binary: named experiments wired from
//! `hlab-core`, deterministic reports, and the json/csv/human emitters.
//!
//! Scenarios add no mathematics of their own — every asserted metric
//! delegates to a core routine and records the threshold it was checked
//! against.  A fixed seed yields a byte-identical report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

mod scenarios;

/// Named experiment selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    VerifyCore,
    VerifyLorentz,
    VerifyLemmas,
    DecomposeCheck,
    Theorem1Ratio,
    Lemma31Check,
    TransposeCheck,
    SharpnessSweep,
    RegionCheck,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::VerifyCore,
        Scenario::VerifyLorentz,
        Scenario::VerifyLemmas,
        Scenario::DecomposeCheck,
        Scenario::Theorem1Ratio,
        Scenario::Lemma31Check,
        Scenario::TransposeCheck,
        Scenario::SharpnessSweep,
        Scenario::RegionCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::VerifyCore => "verify-core",
            Scenario::VerifyLorentz => "verify-lorentz",
            Scenario::VerifyLemmas => "verify-lemmas",
            Scenario::DecomposeCheck => "decompose-check",
            Scenario::Theorem1Ratio => "theorem1-ratio",
            Scenario::Lemma31Check => "lemma31-check",
            Scenario::TransposeCheck => "transpose-check",
            Scenario::SharpnessSweep => "sharpness-sweep",
            Scenario::RegionCheck => "region-check",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                format!("unknown scenario '{s}'; expected one of {}", names.join(", "))
            })
    }
}

/// Outcome of one metric: `Info` rows report context without asserting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        })
    }
}

/// One report row.  `tolerance` is the acceptance threshold the verdict was
/// computed against; its direction (ceiling or floor) is part of the label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metric {
    pub label: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

impl Metric {
    /// Assert `value ≤ ceiling`.
    pub fn ceiling(label: impl Into<String>, value: f64, ceiling: f64) -> Self {
        Self {
            label: label.into(),
            value,
            tolerance: Some(ceiling),
            verdict: if value.is_finite() && value <= ceiling {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    /// Assert `value ≥ floor`.
    pub fn floor(label: impl Into<String>, value: f64, floor: f64) -> Self {
        Self {
            label: label.into(),
            value,
            tolerance: Some(floor),
            verdict: if value.is_finite() && value >= floor {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    /// Report a value without asserting anything.
    pub fn info(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
            tolerance: None,
            verdict: Verdict::Info,
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub grid_m: Option<usize>,
    pub half_width: Option<f64>,
    pub preset: Option<String>,
    /// Free-form `key = value` settings from the config file; threshold
    /// overrides use keys of the form `tol.<name>`.
    pub overrides: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            seed: 0,
            grid_m: None,
            half_width: None,
            preset: None,
            overrides: BTreeMap::new(),
        }
    }

    /// Threshold for `name`, honoring a `tol.<name>` override.
    pub fn threshold(&self, name: &str, default: f64) -> f64 {
        self.overrides
            .get(&format!("tol.{name}"))
            .and_then(|v| v.parse().ok())
            .unwrap_or(default)
    }
}

/// Deterministic experiment record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario: String,
    pub seed: u64,
    pub environment: BTreeMap<String, String>,
    pub metrics: Vec<Metric>,
    pub passed: bool,
    pub provenance: BTreeMap<String, String>,
}

impl ExperimentReport {
    fn assemble(
        cfg: &RunConfig,
        environment: BTreeMap<String, String>,
        metrics: Vec<Metric>,
    ) -> Self {
        let passed = metrics.iter().all(|m| m.verdict != Verdict::Fail);
        let mut provenance = BTreeMap::new();
        provenance.insert("hlab".into(), env!("CARGO_PKG_VERSION").into());
        provenance.insert("hlab-core".into(), hlab_core::VERSION.into());
        Self {
            scenario: cfg.scenario.name().into(),
            seed: cfg.seed,
            environment,
            metrics,
            passed,
            provenance,
        }
    }
}

/// Sidecar artifacts a scenario can dump next to the report on request.
#[derive(Clone, Debug, Default)]
pub struct FieldDumps {
    /// Relative file name → file contents.
    pub files: BTreeMap<String, String>,
}

/// Run one scenario to a report plus optional dump artifacts.
pub fn run_with_dumps(cfg: &RunConfig) -> anyhow::Result<(ExperimentReport, FieldDumps)> {
    let mut environment = BTreeMap::new();
    environment.insert("scenario".into(), cfg.scenario.name().into());
    environment.insert("seed".into(), cfg.seed.to_string());
    if let Some(p) = &cfg.preset {
        environment.insert("preset".into(), p.clone());
    }
    for (k, v) in &cfg.overrides {
        environment.insert(format!("override.{k}"), v.clone());
    }
    let mut dumps = FieldDumps::default();
    let metrics = match cfg.scenario {
        Scenario::VerifyCore => scenarios::verify_core(cfg, &mut environment)?,
        Scenario::VerifyLorentz => scenarios::verify_lorentz(cfg, &mut environment)?,
        Scenario::VerifyLemmas => scenarios::verify_lemmas(cfg, &mut environment)?,
        Scenario::DecomposeCheck => scenarios::decompose_check(cfg, &mut environment, &mut dumps)?,
        Scenario::Theorem1Ratio => scenarios::theorem1_ratio(cfg, &mut environment)?,
        Scenario::Lemma31Check => scenarios::lemma31_check(cfg, &mut environment)?,
        Scenario::TransposeCheck => scenarios::transpose_check(cfg, &mut environment)?,
        Scenario::SharpnessSweep => scenarios::sharpness_sweep(cfg, &mut environment, &mut dumps)?,
        Scenario::RegionCheck => scenarios::region_check(cfg, &mut environment)?,
    };
    Ok((ExperimentReport::assemble(cfg, environment, metrics), dumps))
}

/// Run one scenario to a report.
pub fn run(cfg: &RunConfig) -> anyhow::Result<ExperimentReport> {
    run_with_dumps(cfg).map(|(report, _)| report)
}

/// Report serialization format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "human" => Ok(Format::Human),
            other => Err(format!("unknown format '{other}'; expected json, csv or human")),
        }
    }
}

/// Render a report with stable field ordering.
pub fn emit(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report)
                .expect("report serialization cannot fail");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# scenario = {}\n", report.scenario));
            out.push_str(&format!("# seed = {}\n", report.seed));
            for (k, v) in &report.environment {
                if k != "scenario" && k != "seed" {
                    out.push_str(&format!("# {k} = {v}\n"));
                }
            }
            out.push_str("label,value,tolerance,verdict\n");
            for m in &report.metrics {
                let tol = m
                    .tolerance
                    .map(|t| t.to_string())
                    .unwrap_or_default();
                out.push_str(&format!("{},{},{},{}\n", m.label, m.value, tol, m.verdict));
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            out.push_str(&format!("scenario: {}\n", report.scenario));
            for (k, v) in &report.environment {
                if k != "scenario" {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
            }
            out.push('\n');
            let label_w = report
                .metrics
                .iter()
                .map(|m| m.label.len())
                .max()
                .unwrap_or(6)
                .max(6);
            out.push_str(&format!(
                "{:<label_w$}  {:>14}  {:>14}  {:>7}\n",
                "metric", "value", "tolerance", "verdict"
            ));
            for m in &report.metrics {
                let tol = m
                    .tolerance
                    .map(|t| format!("{t:.6e}"))
                    .unwrap_or_else(|| "-".into());
                out.push_str(&format!(
                    "{:<label_w$}  {:>14.6e}  {:>14}  {:>7}\n",
                    m.label, m.value, tol, m.verdict
                ));
            }
            out.push_str(&format!(
                "\noverall: {}\n",
                if report.passed { "pass" } else { "FAIL" }
            ));
            out
        }
    }
}

/// Parse a `key = value` config file: one pair per line, `#` comments,
/// blank lines ignored.
pub fn parse_config_text(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            anyhow::bail!("config line {}: expected 'key = value', got '{raw}'", lineno + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
