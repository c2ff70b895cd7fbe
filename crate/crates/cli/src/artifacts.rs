//! Running an experiment and writing its artifacts.
//!
//! A run writes three files into the output directory:
//!
//! * `summary.json`: experiment name, canonical config (without `out` and
//!   `threads`), reported values and checks.
//! * `curves.csv`: the experiment's curve, LF line endings, header row.
//! * `manifest.json`: tool versions, the full canonical config, thread
//!   count, wall time and status. Feeding it back through `--manifest`
//!   reproduces `summary.json` and `curves.csv` byte for byte.
//!
//! Nothing is written when the experiment itself errors. Each file goes to a
//! temporary name first and is renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::experiments::{run_experiment, Outcome};
use crate::CliError;

pub const SUMMARY: &str = "summary.json";
pub const CURVES: &str = "curves.csv";
pub const MANIFEST: &str = "manifest.json";

/// Serialised artifact contents, before they touch the disk.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub summary: String,
    pub curves: String,
    pub manifest: String,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    /// Names of checks that failed; the artifacts are still written.
    pub failed: Vec<String>,
    pub wall_time: f64,
}

fn config_map(cfg: &ExperimentConfig, skip: &[&str]) -> Map<String, Value> {
    cfg.to_pairs()
        .into_iter()
        .filter(|(k, _)| !skip.contains(&k.as_str()))
        .map(|(k, v)| (k, Value::String(v)))
        .collect()
}

impl Artifacts {
    pub fn render(cfg: &ExperimentConfig, outcome: &Outcome, wall_time: f64) -> Self {
        let failed: Vec<&str> = outcome.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let summary = json!({
            "experiment": cfg.experiment,
            "config": config_map(cfg, &["out", "threads"]),
            "values": outcome.values,
            "checks": outcome.checks,
        });
        let manifest = json!({
            "tool": "skewlab",
            "versions": { "skewlab-cli": env!("CARGO_PKG_VERSION"), "skewlab-core": skewlab_core::VERSION },
            "config": config_map(cfg, &[]),
            "threads": cfg.threads,
            "wall_time_seconds": wall_time,
            "artifacts": [SUMMARY, CURVES, MANIFEST],
            "status": if failed.is_empty() { "ok" } else { "failed" },
            "failed_checks": failed,
        });
        let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("JSON values serialise") + "\n";
        Artifacts { summary: pretty(&summary), curves: outcome.curves.to_csv(), manifest: pretty(&manifest) }
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        for (name, body) in [(SUMMARY, &self.summary), (CURVES, &self.curves), (MANIFEST, &self.manifest)] {
            let tmp = dir.join(format!(".{name}.tmp"));
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, dir.join(name))?;
        }
        Ok(())
    }
}

/// Runs `cfg` (inside a pool of `threads` workers when nonzero) and writes
/// its artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    let dir = cfg.resolve_out();
    let start = Instant::now();
    let outcome = if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cfg.threads)))?;
        pool.install(|| run_experiment(&cfg))?
    } else {
        run_experiment(&cfg)?
    };
    let wall_time = start.elapsed().as_secs_f64();
    Artifacts::render(&cfg, &outcome, wall_time).write(&dir)?;
    let failed = outcome.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    Ok(RunOutcome { dir, failed, wall_time })
}
