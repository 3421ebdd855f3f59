//! `nrg verify`: run a batch of experiments from a JSON config and check
//! every bound.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nrg_core::mc::{Experiment, ExperimentConfig, McReport, Runner, Verdict};
use serde::{Deserialize, Serialize};

use crate::output::{sha256_hex, to_json, versions, write_atomic, Versions};
use crate::Failure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Experiment name → definition; names become file stems.
    pub experiments: BTreeMap<String, ExperimentConfig>,
    pub output_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub format: Format,
    /// Seed for experiments that do not set their own.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct ReportEntry {
    file: String,
    seed: u64,
    verdict: Verdict,
    /// sha256 of the report with `runtime_s` zeroed.
    canonical_sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    config_path: String,
    config_sha256: String,
    workers: usize,
    versions: Versions,
    reports: BTreeMap<String, ReportEntry>,
}

pub struct VerifyArgs {
    pub config: PathBuf,
    pub seed: u64,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

pub fn parse_config(bytes: &[u8]) -> Result<RunConfig, Failure> {
    serde_json::from_slice(bytes)
        .map_err(|e| Failure::Config(format!("config error at line {}, column {}: {e}", e.line(), e.column())))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.starts_with('.') && name.chars().all(|c| c.is_ascii_alphanumeric() || "._-".contains(c))
}

fn build_all(cfg: &RunConfig, default_seed: u64) -> Result<Vec<(String, Experiment)>, Failure> {
    if cfg.experiments.is_empty() {
        return Err(Failure::Config("config error: field `experiments` is empty".into()));
    }
    if cfg.workers == 0 {
        return Err(Failure::Config(
            "config error: field `workers` must be at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for (name, ec) in &cfg.experiments {
        if !valid_name(name) {
            return Err(Failure::Config(format!(
                "config error: experiment name `{name}` must use only letters, digits, '.', '_' and '-'"
            )));
        }
        let e = ec
            .build(default_seed)
            .map_err(|err| Failure::Config(format!("config error in experiments.{name}: {err}")))?;
        out.push((name.clone(), e));
    }
    for (name, e) in &out {
        e.check_resources()
            .map_err(|err| Failure::Refused(format!("experiments.{name}: {err}")))?;
    }
    Ok(out)
}

pub fn run(args: VerifyArgs) -> Result<(), Failure> {
    let bytes = std::fs::read(&args.config).map_err(|e| Failure::io(&args.config, e))?;
    let cfg = parse_config(&bytes)?;
    let default_seed = cfg.seed.unwrap_or(args.seed);
    let experiments = build_all(&cfg, default_seed)?;
    let workers = args.workers.unwrap_or(cfg.workers).max(1);
    let dir = args.output_dir.clone().unwrap_or_else(|| cfg.output_dir.clone());

    let runner = Runner::new(workers);
    let mut reports = Vec::new();
    for (name, e) in &experiments {
        let r = runner.run(e)?;
        println!(
            "{name}: {} estimate {:.6} ± {:.6}{}",
            verdict_name(r.verdict),
            r.estimate,
            r.stderr,
            r.bound_value.map(|b| format!(", bound {b:.6}")).unwrap_or_default()
        );
        reports.push((name.clone(), e.seed, r));
    }

    let mut entries = BTreeMap::new();
    match cfg.format {
        Format::Json => {
            for (name, seed, r) in &reports {
                let file = format!("{name}.json");
                write_atomic(&dir.join(&file), to_json(r)?.as_bytes())?;
                entries.insert(name.clone(), entry(file, *seed, r)?);
            }
        }
        Format::Csv => {
            write_atomic(&dir.join("reports.csv"), &reports_csv(&reports)?)?;
            for (name, seed, r) in &reports {
                entries.insert(name.clone(), entry("reports.csv".into(), *seed, r)?);
            }
        }
    }
    let manifest = RunManifest {
        config_path: args.config.display().to_string(),
        config_sha256: sha256_hex(&bytes),
        workers,
        versions: versions(),
        reports: entries,
    };
    write_atomic(&dir.join("manifest.json"), to_json(&manifest)?.as_bytes())?;

    let failing: Vec<&str> = reports
        .iter()
        .filter(|(_, _, r)| matches!(r.verdict, Verdict::BoundViolated | Verdict::Vacuous))
        .map(|(n, _, _)| n.as_str())
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violated(format!(
            "bound not established for: {}",
            failing.join(", ")
        )))
    }
}

fn entry(file: String, seed: u64, r: &McReport) -> Result<ReportEntry, Failure> {
    Ok(ReportEntry {
        file,
        seed,
        verdict: r.verdict,
        canonical_sha256: sha256_hex(r.canonical_json()?.as_bytes()),
    })
}

fn reports_csv(reports: &[(String, u64, McReport)]) -> Result<Vec<u8>, Failure> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["name"];
    header.extend(McReport::CSV_HEADER);
    wtr.write_record(header).map_err(nrg_core::Error::from)?;
    for (name, _, r) in reports {
        let mut row = vec![name.clone()];
        row.extend(r.csv_record());
        wtr.write_record(row).map_err(nrg_core::Error::from)?;
    }
    wtr.into_inner().map_err(|e| Failure::Runtime(e.to_string()))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::BoundHolds => "bound_holds",
        Verdict::BoundViolated => "bound_violated",
        Verdict::Vacuous => "vacuous",
        Verdict::Informational => "informational",
    }
}
