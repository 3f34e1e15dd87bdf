//! Report serialization: per-pair CSV series, the run manifest, and
//! plot-ready exports.
//!
//! All floating-point output goes through [`fmt_sig9`] (9 significant
//! digits), so repeated runs over the same inputs produce byte-identical
//! files. Files are written atomically (temp file + rename).

use std::path::{Path, PathBuf};

use serde::Serialize;

use locdiag_core::window::AssessmentRecord;

use crate::config::{ResolvedConfig, RunConfig};
use crate::error::CliError;

/// Time series for one ordered pair `(system, reference)`.
#[derive(Debug, Clone)]
pub struct PairSeries {
    pub system: String,
    pub reference: String,
    pub records: Vec<AssessmentRecord<f64>>,
}

/// Full result of one `assess` run.
///
/// Step indices count from 0 at `t_start`: step 0 is the anchor position
/// and carries no record, record `i` covers the interval ending at
/// `t_start + i / rate_hz`.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub pairs: Vec<PairSeries>,
    pub t_start: f64,
    pub t_end: f64,
    pub rate_hz: f64,
}

impl RunReport {
    pub fn steps(&self) -> usize {
        self.pairs.first().map_or(0, |p| p.records.len())
    }
}

/// 9 significant digits, scientific: `2.40000000e2`.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Writes via a sibling temp file and renames into place.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::data(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(|e| CliError::data(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// File name for one ordered pair's series.
pub fn pair_file_name(system: &str, reference: &str) -> String {
    format!("{system}_with_{reference}_ref.csv")
}

pub fn plot_file_name(system: &str, reference: &str) -> String {
    format!("plot_{system}_with_{reference}_ref.csv")
}

fn pair_csv(series: &PairSeries, report: &RunReport) -> String {
    let mut out = String::with_capacity(series.records.len() * 48 + 64);
    out.push_str("step,t,delta,uncertainty,flagged\n");
    for r in &series.records {
        let t = report.t_start + r.t as f64 / report.rate_hz;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.t,
            fmt_sig9(t),
            fmt_sig9(r.delta),
            fmt_sig9(r.uncertainty),
            u8::from(r.flagged),
        ));
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    meta: ManifestMeta<'a>,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct ManifestMeta<'a> {
    tool: &'a str,
    version: &'a str,
    config_path: String,
    seed: u64,
    rate_hz: f64,
    t_start: f64,
    t_end: f64,
    steps: usize,
    wall_ms: u128,
}

/// Writes one CSV per ordered pair plus `manifest.toml` into `out_dir`.
///
/// The manifest echoes the fully resolved config (defaults and derived
/// seeds included); everything in it except `wall_ms` is reproducible.
pub fn write_report(
    report: &RunReport,
    cfg: &ResolvedConfig,
    out_dir: &Path,
    wall_ms: u128,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("{}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for series in &report.pairs {
        let path = out_dir.join(pair_file_name(&series.system, &series.reference));
        atomic_write(&path, &pair_csv(series, report))?;
        written.push(path);
    }

    let manifest = Manifest {
        meta: ManifestMeta {
            tool: "locdiag",
            version: env!("CARGO_PKG_VERSION"),
            config_path: cfg.config_path.display().to_string(),
            seed: cfg.raw.seed,
            rate_hz: report.rate_hz,
            t_start: report.t_start,
            t_end: report.t_end,
            steps: report.steps(),
            wall_ms,
        },
        config: &cfg.raw,
    };
    let text = toml::to_string_pretty(&manifest)
        .map_err(|e| CliError::data(format!("manifest serialization: {e}")))?;
    let path = out_dir.join("manifest.toml");
    atomic_write(&path, &text)?;
    written.push(path);
    Ok(written)
}

/// Re-emits a pair series with the event threshold as an explicit column:
/// `step,t,delta,uncertainty,threshold,flagged`. Values are copied verbatim
/// from the assess output so the two files agree byte-for-byte where they
/// overlap.
pub fn write_plotdata(
    report_dir: &Path,
    out_dir: &Path,
    system: &str,
    reference: &str,
    event_threshold: f64,
) -> Result<PathBuf, CliError> {
    let src = report_dir.join(pair_file_name(system, reference));
    let text = std::fs::read_to_string(&src)
        .map_err(|e| CliError::data(format!("{}: {e}", src.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::data(format!("{}: empty file", src.display())))?;
    if header != "step,t,delta,uncertainty,flagged" {
        return Err(CliError::data(format!(
            "{}: unexpected header `{header}`",
            src.display()
        )));
    }
    let threshold = fmt_sig9(event_threshold);
    let mut out = String::with_capacity(text.len() + 16 * 64);
    out.push_str("step,t,delta,uncertainty,threshold,flagged\n");
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::data(format!(
                "{}: row {} has {} fields",
                src.display(),
                i + 2,
                fields.len()
            )));
        }
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fields[0], fields[1], fields[2], fields[3], threshold, fields[4]
        ));
    }
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("{}: {e}", out_dir.display())))?;
    let dst = out_dir.join(plot_file_name(system, reference));
    atomic_write(&dst, &out)?;
    Ok(dst)
}
