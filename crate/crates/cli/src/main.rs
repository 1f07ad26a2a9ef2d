use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use hlab::{emit, parse_config_text, run_with_dumps, Format, RunConfig, Scenario};

/// Deterministic experiment runner for the multiplier laboratory.
#[derive(Parser)]
#[command(name = "hlab", version, about)]
struct Cli {
    /// Scenario name: verify-core, verify-lorentz, verify-lemmas,
    /// decompose-check, theorem1-ratio, lemma31-check, transpose-check,
    /// sharpness-sweep or region-check.
    scenario: String,

    /// Samples per axis override.
    #[arg(long = "grid-m")]
    grid_m: Option<usize>,

    /// Box half-width override.
    #[arg(long = "half-width")]
    half_width: Option<f64>,

    /// Base seed for all random draws.
    #[arg(long)]
    seed: Option<u64>,

    /// Named parameter preset (sharpness-sweep: case1, case2, control).
    #[arg(long)]
    preset: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format: json, csv or human.
    #[arg(long)]
    format: Option<String>,

    /// Optional `key = value` config file; flags override file entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Also write raw curve/profile artifacts to a sibling directory.
    #[arg(long = "dump-fields")]
    dump_fields: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let scenario: Scenario = cli.scenario.parse().map_err(anyhow::Error::msg)?;

    let mut file_cfg = BTreeMap::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        file_cfg = parse_config_text(&text)?;
    }
    let file_parse = |key: &str| -> anyhow::Result<Option<f64>> {
        file_cfg
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .with_context(|| format!("config key '{key}': invalid number '{v}'"))
            })
            .transpose()
    };

    let mut cfg = RunConfig::new(scenario);
    cfg.seed = match cli.seed {
        Some(s) => s,
        None => match file_cfg.get("seed") {
            Some(v) => v
                .parse()
                .with_context(|| format!("config key 'seed': invalid integer '{v}'"))?,
            None => 0,
        },
    };
    cfg.grid_m = match cli.grid_m {
        Some(m) => Some(m),
        None => file_parse("grid-m")?.map(|v| v as usize),
    };
    cfg.half_width = match cli.half_width {
        Some(l) => Some(l),
        None => file_parse("half-width")?,
    };
    cfg.preset = cli.preset.or_else(|| file_cfg.get("preset").cloned());
    let format: Format = cli
        .format
        .or_else(|| file_cfg.get("format").cloned())
        .unwrap_or_else(|| "human".into())
        .parse()
        .map_err(anyhow::Error::msg)?;
    for (key, value) in &file_cfg {
        if !matches!(key.as_str(), "seed" | "grid-m" | "half-width" | "preset" | "format") {
            cfg.overrides.insert(key.clone(), value.clone());
        }
    }

    let (report, dumps) = run_with_dumps(&cfg)?;
    let rendered = emit(&report, format);
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{rendered}"),
    }
    if cli.dump_fields && !dumps.files.is_empty() {
        let dir = dump_dir(cli.out.as_deref());
        std::fs::create_dir_all(&dir)
            .with_context(|| format!("creating dump directory {}", dir.display()))?;
        for (name, contents) in &dumps.files {
            std::fs::write(dir.join(name), contents)
                .with_context(|| format!("writing field dump {name}"))?;
        }
    }
    Ok(report.passed)
}

fn dump_dir(out: Option<&Path>) -> PathBuf {
    match out {
        Some(path) => path.with_extension("fields"),
        None => PathBuf::from("hlab-fields"),
    }
}
