//! Artifact emission: CSV tables, JSON summary and manifest, SVG quick looks.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::runner::{RunArtifacts, RunError};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const ESTIMATES_FILE: &str = "estimates.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub seed: u64,
    pub qsense_version: &'static str,
    pub core_version: &'static str,
    pub created: String,
    pub files: Vec<String>,
    pub config: crate::config::ExperimentConfig,
}

/// The configuration without its output location.
fn location_free(config: &crate::config::ExperimentConfig) -> crate::config::ExperimentConfig {
    crate::config::ExperimentConfig { output_dir: None, ..config.clone() }
}

/// Lower-case hex SHA-256 of the compact config JSON, output location excluded.
pub fn config_hash(config: &crate::config::ExperimentConfig) -> String {
    let text = serde_json::to_string(&location_free(config)).expect("configuration serializes");
    Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes every artifact of a run into `dir`; returns the paths written.
pub fn write_artifacts(artifacts: &RunArtifacts, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    if artifacts.config.trajectory && !artifacts.trajectory.is_empty() {
        write_csv(&dir.join(TRAJECTORY_FILE), &artifacts.trajectory)?;
        files.push(TRAJECTORY_FILE.to_string());
    }
    if !artifacts.estimates.is_empty() {
        write_csv(&dir.join(ESTIMATES_FILE), &artifacts.estimates)?;
        files.push(ESTIMATES_FILE.to_string());
    }
    if let Some(sweep) = &artifacts.summary.sweep {
        write_csv(&dir.join(SWEEP_FILE), &sweep.rows)?;
        files.push(SWEEP_FILE.to_string());
    }
    write_json(&dir.join(SUMMARY_FILE), &artifacts.summary)?;
    files.push(SUMMARY_FILE.to_string());
    if artifacts.config.plots {
        for (name, svg) in plots(artifacts) {
            fs::write(dir.join(&name), svg)?;
            files.push(name);
        }
    }
    let manifest = Manifest {
        config_sha256: config_hash(&artifacts.config),
        seed: artifacts.config.seed,
        qsense_version: env!("CARGO_PKG_VERSION"),
        core_version: qsense_core::VERSION,
        created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        files: files.clone(),
        config: location_free(&artifacts.config),
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    files.push(MANIFEST_FILE.to_string());
    Ok(files.into_iter().map(|f| dir.join(f)).collect())
}

const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];
const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

/// Minimal line chart: one polyline with markers per series.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let pts = series.iter().flat_map(|(_, p)| p.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{y}" text-anchor="middle" transform="rotate(-90 14 {y})">{y_label}</text>"#,
        y = HEIGHT / 2.0
    );
    for (v, anchor, x, y) in [
        (x0, "start", MARGIN, HEIGHT - MARGIN + 14.0),
        (x1, "end", WIDTH - MARGIN, HEIGHT - MARGIN + 14.0),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{v:.4}</text>"#);
    }
    for (v, y) in [(y0, HEIGHT - MARGIN), (y1, MARGIN)] {
        let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">{v:.4}</text>"#, MARGIN - 4.0);
    }
    for (k, (name, p)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let path: Vec<String> =
            p.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}"/>"#, path.join(" "));
        for pt in &path {
            let (cx, cy) = pt.split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>"#);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            WIDTH - MARGIN - 90.0,
            MARGIN + 14.0 * k as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Quick-look plots derived from the emitted tables.
pub fn plots(artifacts: &RunArtifacts) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let frameworks: Vec<&str> = artifacts.summary.frameworks.iter().map(|f| f.framework).collect();
    if let Some(sweep) = &artifacts.summary.sweep {
        let names: Vec<&str> = {
            let mut v: Vec<&str> = sweep.rows.iter().map(|r| r.framework).collect();
            v.sort();
            v.dedup();
            v
        };
        let metric = |r: &crate::runner::SweepRow| r.intrinsic_gain.or(r.nsr).unwrap_or(f64::NAN);
        let series: Vec<(&str, Vec<(f64, f64)>)> = names
            .iter()
            .map(|n| (*n, sweep.rows.iter().filter(|r| r.framework == *n).map(|r| (r.value, metric(r))).collect()))
            .collect();
        let axis = serde_json::to_value(sweep.axis).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        out.push(("sweep.svg".to_string(), line_chart("sweep", &axis, "intrinsic gain / NSR", &series)));
    }
    if !artifacts.estimates.is_empty() {
        let series: Vec<(&str, Vec<(f64, f64)>)> = frameworks
            .iter()
            .map(|n| {
                (*n, artifacts.estimates.iter().filter(|r| r.framework == *n).map(|r| (r.repetition as f64, r.estimate)).collect())
            })
            .collect();
        out.push(("estimates.svg".to_string(), line_chart("estimates", "repetition", "estimate", &series)));
    }
    if !artifacts.trajectory.is_empty() {
        let first: Vec<(&str, Vec<(f64, f64)>)> = frameworks
            .iter()
            .map(|n| {
                (
                    *n,
                    artifacts
                        .trajectory
                        .iter()
                        .filter(|r| r.repetition == 0 && r.framework == *n)
                        .map(|r| (r.shot as f64, r.estimate))
                        .collect(),
                )
            })
            .collect();
        out.push(("trajectory.svg".to_string(), line_chart("repetition 0", "shot", "estimate", &first)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_is_wellformed() {
        let svg = line_chart("t", "x", "y", &[("a", vec![(0.0, 1.0), (1.0, 2.0)]), ("b", vec![(0.5, f64::NAN)])]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn hash_is_hex_sha256() {
        let h = config_hash(&crate::presets::preset("rate").unwrap());
        assert_eq!(h.len(), 64);
        assert!(h.chars().all(|c| c.is_ascii_hexdigit()));
    }
}
