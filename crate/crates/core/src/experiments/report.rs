use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::svg;
use super::{AgreementReport, KSweepReport, StabilityReport};
use crate::error::{Error, Result};
use crate::structcmp::GroupStats;
use crate::textio::write_atomic;

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn put(dir: &Path, name: String, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    write_atomic(&path, bytes)?;
    written.push(path);
    Ok(())
}

fn json<S: Serialize>(value: &S) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

#[derive(Serialize)]
struct StabilityRow<'a> {
    k: usize,
    delta: &'a str,
    models: usize,
    pairs: usize,
    lda: GroupStats,
    random: GroupStats,
    null: GroupStats,
    random_seeds: &'a [u64],
}

/// `stability_pairs_<tag>.csv` (one row per within-k pair),
/// `stability_summary_<tag>.csv` (one row per k), `stability_<tag>.json`
/// and the per-k boxplot `stability_<tag>.svg`.
pub fn write_stability(dir: &Path, tag: &str, reports: &[StabilityReport]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let pairs = reports.iter().flat_map(|r| {
        r.within
            .iter()
            .map(move |p| vec![r.k.to_string(), p.a.clone(), p.b.clone(), p.value.to_string()])
    });
    put(dir, format!("stability_pairs_{tag}.csv"), &csv_bytes(&["k", "label_a", "label_b", "value"], pairs), &mut written)?;
    let summary = reports.iter().map(|r| {
        vec![
            r.k.to_string(),
            r.models.to_string(),
            r.within.len().to_string(),
            r.lda.mean.to_string(),
            r.lda.std.to_string(),
            r.random.mean.to_string(),
            r.random.std.to_string(),
            r.null.mean.to_string(),
            r.null.std.to_string(),
        ]
    });
    put(
        dir,
        format!("stability_summary_{tag}.csv"),
        &csv_bytes(
            &["k", "models", "pairs", "lda_mean", "lda_std", "random_mean", "random_std", "null_mean", "null_std"],
            summary,
        ),
        &mut written,
    )?;
    let rows: Vec<StabilityRow> = reports
        .iter()
        .map(|r| StabilityRow {
            k: r.k,
            delta: &r.delta,
            models: r.models,
            pairs: r.within.len(),
            lda: r.lda,
            random: r.random,
            null: r.null,
            random_seeds: &r.random_seeds,
        })
        .collect();
    put(dir, format!("stability_{tag}.json"), &json(&rows), &mut written)?;
    let groups: Vec<(String, Vec<f64>)> = reports
        .iter()
        .map(|r| (format!("k={}", r.k), r.within.iter().map(|p| p.value).collect()))
        .collect();
    let delta = reports.first().map(|r| r.delta.as_str()).unwrap_or("δ");
    let plot = svg::boxplot("Pairwise structural distance between seeds, per k", delta, &groups);
    put(dir, format!("stability_{tag}.svg"), plot.as_bytes(), &mut written)?;
    Ok(written)
}

/// `ksweep_<tag>.csv` (one row per ordered group pair), `ksweep_<tag>.json`
/// and the heatmap `ksweep_<tag>.svg`.
pub fn write_ksweep(dir: &Path, tag: &str, report: &KSweepReport) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let rows = report.cells.iter().map(|c| {
        vec![
            c.k_a.to_string(),
            c.k_b.to_string(),
            c.mean.to_string(),
            c.std.to_string(),
            c.count.to_string(),
        ]
    });
    put(dir, format!("ksweep_{tag}.csv"), &csv_bytes(&["k_a", "k_b", "mean", "std", "count"], rows), &mut written)?;
    put(dir, format!("ksweep_{tag}.json"), &json(report), &mut written)?;
    let n = report.ks.len();
    let labels: Vec<String> = report.ks.iter().map(|k| k.to_string()).collect();
    let values: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| report.mean(i, j)).collect()).collect();
    let title = format!("Mean {} between models across k", report.delta);
    put(dir, format!("ksweep_{tag}.svg"), svg::heatmap(&title, &labels, &values).as_bytes(), &mut written)?;
    Ok(written)
}

#[derive(Serialize)]
struct AgreementSummary<'a> {
    delta_a: &'a str,
    delta_b: &'a str,
    pairs: usize,
    correlation: f64,
}

/// `deltacmp_<tag>.csv` (one row per unordered pair), `deltacmp_<tag>.json`
/// and the scatter `deltacmp_<tag>.svg`.
pub fn write_agreement(dir: &Path, tag: &str, report: &AgreementReport) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let rows = report
        .pairs
        .iter()
        .map(|p| vec![p.a.clone(), p.b.clone(), p.value_a.to_string(), p.value_b.to_string()]);
    put(
        dir,
        format!("deltacmp_{tag}.csv"),
        &csv_bytes(&["label_a", "label_b", "value_a", "value_b"], rows),
        &mut written,
    )?;
    let summary = AgreementSummary {
        delta_a: &report.delta_a,
        delta_b: &report.delta_b,
        pairs: report.pairs.len(),
        correlation: report.correlation,
    };
    put(dir, format!("deltacmp_{tag}.json"), &json(&summary), &mut written)?;
    let points: Vec<(f64, f64)> = report.pairs.iter().map(|p| (p.value_a, p.value_b)).collect();
    let plot = svg::scatter(
        "Structural measures over model pairs",
        &report.delta_a,
        &report.delta_b,
        &points,
        &format!("r = {:.4} over {} pairs", report.correlation, points.len()),
    );
    put(dir, format!("deltacmp_{tag}.svg"), plot.as_bytes(), &mut written)?;
    Ok(written)
}
