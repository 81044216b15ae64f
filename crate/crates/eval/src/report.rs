//! On-disk report formats.
//!
//! Simulation: `consistency.csv` with one row per (time, method) plus a JSON
//! summary. Dataset evaluation: `segments.csv` with one row per (segment,
//! method) plus a JSON summary shaped (Δt × method). All schemas are
//! versioned through the `schema` field.

use crate::euroc::{SequenceEvaluation, SkipCounts};
use crate::metrics::SampleStats;
use crate::sim::{ConsistencyReport, McConfig, TrajectoryParams};
use crate::Method;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

pub const CONSISTENCY_SCHEMA: &str = "consistency-report/1";
pub const SEGMENTS_SCHEMA: &str = "segment-report/1";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, ReportError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| ReportError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    Ok(std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|source| ReportError::Io {
            path: path.display().to_string(),
            source,
        })?,
    ))
}

/// `time,method,anees,ale,excluded_count` rows.
pub fn write_consistency_csv(report: &ConsistencyReport, path: &Path) -> Result<(), ReportError> {
    let mut out = create(path)?;
    let io_err = |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    };
    writeln!(out, "time,method,anees,ale,excluded_count").map_err(io_err)?;
    for series in &report.series {
        for (i, t) in report.times.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                t,
                series.method.name(),
                series.anees[i],
                series.ale[i],
                series.excluded
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencySummary {
    pub schema: String,
    pub config: McConfig,
    pub trajectory: TrajectoryParams,
    pub degenerate: bool,
    pub methods: Vec<ConsistencyMethodSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyMethodSummary {
    pub method: Method,
    pub excluded: usize,
    pub terminal_time: f64,
    pub terminal_anees: f64,
    pub terminal_ale: f64,
    pub terminal_nees: Option<SampleStats>,
}

pub fn consistency_summary(
    report: &ConsistencyReport,
    cfg: &McConfig,
    trajectory: &TrajectoryParams,
) -> ConsistencySummary {
    let terminal_time = report.times.last().copied().unwrap_or(0.0);
    let methods = report
        .series
        .iter()
        .map(|s| ConsistencyMethodSummary {
            method: s.method,
            excluded: s.excluded,
            terminal_time,
            terminal_anees: s.anees.last().copied().unwrap_or(f64::NAN),
            terminal_ale: s.ale.last().copied().unwrap_or(f64::NAN),
            terminal_nees: s
                .nees_samples
                .last()
                .and_then(|v| SampleStats::from_samples(v)),
        })
        .collect();
    ConsistencySummary {
        schema: CONSISTENCY_SCHEMA.to_owned(),
        config: *cfg,
        trajectory: *trajectory,
        degenerate: report.degenerate,
        methods,
    }
}

pub fn write_consistency_summary(
    summary: &ConsistencySummary,
    path: &Path,
) -> Result<(), ReportError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n").map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// `dt_ij,t_start,method,nees` rows across all evaluated Δt settings.
pub fn write_segments_csv(
    evaluations: &[SequenceEvaluation],
    path: &Path,
) -> Result<(), ReportError> {
    let mut out = create(path)?;
    let io_err = |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    };
    writeln!(out, "dt_ij,t_start,method,nees").map_err(io_err)?;
    for eval in evaluations {
        for seg in &eval.segments {
            for (method, nees) in &seg.nees {
                writeln!(
                    out,
                    "{},{},{},{}",
                    eval.dt_ij,
                    seg.t_start,
                    method.name(),
                    nees
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentsSummary {
    pub schema: String,
    pub dataset: String,
    pub sigma0: f64,
    pub gravity: [f64; 3],
    pub rows: Vec<SegmentsSummaryRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentsSummaryRow {
    pub dt_ij: f64,
    pub method: Method,
    pub segments: usize,
    pub nees: SampleStats,
    pub skipped: SkipCounts,
}

pub fn segments_summary(
    dataset: &str,
    sigma0: f64,
    gravity: [f64; 3],
    evaluations: &[SequenceEvaluation],
) -> SegmentsSummary {
    let mut rows = Vec::new();
    for eval in evaluations {
        for summary in &eval.summaries {
            rows.push(SegmentsSummaryRow {
                dt_ij: eval.dt_ij,
                method: summary.method,
                segments: summary.stats.count,
                nees: summary.stats,
                skipped: eval.skipped.clone(),
            });
        }
    }
    SegmentsSummary {
        schema: SEGMENTS_SCHEMA.to_owned(),
        dataset: dataset.to_owned(),
        sigma0,
        gravity,
        rows,
    }
}

pub fn write_segments_summary(summary: &SegmentsSummary, path: &Path) -> Result<(), ReportError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n").map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_monte_carlo, McConfig, TrajectoryParams};
    use preint::GravityModel;

    #[test]
    fn csv_and_json_round_trip() {
        let cfg = McConfig {
            realizations: 2,
            ..McConfig::default()
        };
        let p = TrajectoryParams {
            duration: 0.3,
            ..TrajectoryParams::default()
        };
        let report = run_monte_carlo(&cfg, &p, &Method::ALL, &GravityModel::default(), 0);
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("consistency.csv");
        write_consistency_csv(&report, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("time,method,anees,ale,excluded_count"));
        assert_eq!(text.lines().count(), 1 + 2 * report.times.len());

        let summary = consistency_summary(&report, &cfg, &p);
        let json_path = dir.path().join("summary.json");
        write_consistency_summary(&summary, &json_path).unwrap();
        let parsed: ConsistencySummary =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(parsed.schema, CONSISTENCY_SCHEMA);
        assert_eq!(parsed.methods.len(), 2);
    }
}
