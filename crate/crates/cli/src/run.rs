use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use sumprod_core::distance::{distance_min_search, DistanceReport};
use sumprod_core::incidence::{st_experiment, StReport};
use sumprod_core::kakeya::{kakeya_min_search, write_lines, KakeyaReport};
use sumprod_core::sumprod::{sumprod_min_search, ExponentRow, SearchMode};
use sumprod_core::verify::{verify_all, SuiteRow};

use crate::config::{ExperimentConfig, Format, Kind};
use crate::CliError;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
/// `verify-manifest.json`, `sumprod-manifest.json`, ...
pub fn manifest_name(kind: Kind) -> String {
    format!("{}-manifest.json", kind.stem())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub file: String,
    pub row: usize,
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config_hash: String,
    pub artifact_version: String,
    pub config: ExperimentConfig,
    pub files: Vec<String>,
    pub provenance: Vec<Provenance>,
    /// Not covered by replay comparisons.
    pub wall_clock_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    /// Human-readable descriptions of failed invariants.
    pub violations: Vec<String>,
}

/// SHA-256 over the artifact version and every configuration field that
/// reaches the output.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Input<'a> {
        artifact_version: &'a str,
        config: &'a ExperimentConfig,
    }
    let bytes = serde_json::to_vec(&Input { artifact_version: ARTIFACT_VERSION, config: cfg }).expect("serializable");
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Table {
    header: &'static str,
    records: Vec<String>,
    json: serde_json::Value,
    oracles: Vec<String>,
}

impl Table {
    fn csv(&self) -> String {
        let mut s = String::from(self.header);
        s.push('\n');
        for r in &self.records {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

fn search_oracle(mode: SearchMode) -> String {
    match mode {
        SearchMode::Exhaustive => "exhaustive-enumeration".into(),
        SearchMode::Randomized => "seeded-hill-climb".into(),
    }
}

fn json<T: Serialize>(rows: &[T]) -> serde_json::Value {
    serde_json::to_value(rows).expect("serializable")
}

/// Runs the experiment, writes the result files and the manifest into
/// `cfg.out`, and reports invariant failures.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut extra: Vec<(String, String)> = Vec::new();
    let table = match cfg.kind {
        Kind::Sumprod => {
            let mode = cfg.mode.unwrap_or(SearchMode::Exhaustive);
            let mut rows: Vec<ExponentRow> = Vec::new();
            for &q in &cfg.q {
                for &n in &cfg.n {
                    let row = sumprod_min_search(q, n as usize, mode, cfg.trials.unwrap_or(0), cfg.seed.unwrap_or(0))?;
                    let floor = (2 * row.n - 1).min(row.q as usize);
                    if row.min_max < floor {
                        violations.push(format!("sumprod q={q} n={n}: minMax {} below {floor}", row.min_max));
                    }
                    rows.push(row);
                }
            }
            Table {
                header: ExponentRow::CSV_HEADER,
                records: rows.iter().map(ExponentRow::csv_record).collect(),
                json: json(&rows),
                oracles: rows.iter().map(|r| search_oracle(r.mode)).collect(),
            }
        }
        Kind::Distance => {
            let mode = cfg.mode.unwrap_or(SearchMode::Exhaustive);
            let mut rows: Vec<DistanceReport> = Vec::new();
            for &q in &cfg.q {
                for &n in &cfg.n {
                    rows.push(distance_min_search(
                        q,
                        n as usize,
                        mode,
                        cfg.trials.unwrap_or(0),
                        cfg.seed.unwrap_or(0),
                        cfg.exclude_zero.unwrap_or(false),
                    )?);
                }
            }
            Table {
                header: DistanceReport::CSV_HEADER,
                records: rows.iter().map(DistanceReport::csv_record).collect(),
                json: json(&rows),
                oracles: rows.iter().map(|r| search_oracle(r.mode)).collect(),
            }
        }
        Kind::Incidence => {
            let generator = cfg.generator.expect("resolved");
            let mut rows: Vec<StReport> = Vec::new();
            for &q in &cfg.q {
                for &n in &cfg.n {
                    let r = st_experiment(q, n as usize, generator, cfg.trials.expect("resolved"), cfg.seed.expect("resolved"))?;
                    // I <= N^{1/2}·N + N, decided exactly.
                    let (i, nn) = (r.max_incidences as u128, n as u128);
                    if i > nn && (i - nn) * (i - nn) > nn * nn * nn {
                        violations.push(format!("incidence q={q} N={n}: maxI {i} above N^1.5 + N"));
                    }
                    rows.push(r);
                }
            }
            Table {
                header: StReport::CSV_HEADER,
                records: rows.iter().map(StReport::csv_record).collect(),
                json: json(&rows),
                oracles: rows.iter().map(|r| format!("seeded-{}-generator+pencil-count", r.generator)).collect(),
            }
        }
        Kind::Kakeya => {
            let mut rows: Vec<KakeyaReport> = Vec::new();
            for &q in &cfg.q {
                let r = kakeya_min_search(q, cfg.trials.expect("resolved"), cfg.seed.expect("resolved"))?;
                if (r.min_size as u64) < r.cs_lower_bound || r.min_size as u64 > q * q * q {
                    violations.push(format!("kakeya q={q}: size {} outside [{}, q^3]", r.min_size, r.cs_lower_bound));
                }
                extra.push((format!("kakeya-q{q}.lines"), write_lines(&r.best_assignment)));
                rows.push(r);
            }
            Table {
                header: KakeyaReport::CSV_HEADER,
                records: rows.iter().map(KakeyaReport::csv_record).collect(),
                json: json(&rows),
                oracles: rows.iter().map(|_| "seeded-best-response-descent".to_string()).collect(),
            }
        }
        Kind::VerifyAll => {
            let mut rows: Vec<SuiteRow> = Vec::new();
            for &q in &cfg.q {
                rows.extend(verify_all(q, cfg.seed.unwrap_or(0))?);
            }
            for r in rows.iter().filter(|r| !r.passed()) {
                violations.push(format!("suite {} at q={}: {} of {} cases failed", r.suite, r.q, r.violations, r.cases));
            }
            Table {
                header: SuiteRow::CSV_HEADER,
                records: rows.iter().map(SuiteRow::csv_record).collect(),
                json: json(&rows),
                oracles: rows.iter().map(|r| format!("suite:{}/{}", r.suite, r.mode)).collect(),
            }
        }
    };

    let out = &cfg.out;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let mut files = Vec::new();
    let csv_name = format!("{}.csv", cfg.kind.stem());
    write(out, &csv_name, &table.csv())?;
    files.push(csv_name.clone());
    if cfg.format == Format::Json {
        let name = format!("{}.json", cfg.kind.stem());
        let mut text = serde_json::to_string_pretty(&table.json).expect("serializable");
        text.push('\n');
        write(out, &name, &text)?;
        files.push(name);
    }
    for (name, text) in &extra {
        write(out, name, text)?;
        files.push(name.clone());
    }
    let provenance = table
        .oracles
        .into_iter()
        .enumerate()
        .map(|(row, oracle)| Provenance { file: csv_name.clone(), row, oracle })
        .collect();
    let manifest = RunManifest {
        config_hash: config_hash(cfg),
        artifact_version: ARTIFACT_VERSION.into(),
        config: cfg.clone(),
        files,
        provenance,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable");
    text.push('\n');
    write(out, &manifest_name(cfg.kind), &text)?;
    Ok(RunOutcome { manifest, violations })
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| io_err(&path, e))
}
