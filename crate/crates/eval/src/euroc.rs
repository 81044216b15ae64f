//! ASL-layout dataset evaluation: CSV parsing, ground-truth interpolation,
//! and segment-wise NEES statistics.
//!
//! Expected directory layout:
//!
//! ```text
//! <root>/mav0/imu0/data.csv
//! <root>/mav0/state_groundtruth_estimate0/data.csv
//! ```
//!
//! The IMU file carries `timestamp [ns], ω_xyz [rad/s], a_xyz [m/s²]`; the
//! ground-truth file carries `timestamp, p_xyz, q_wxyz, v_xyz, b_ω_xyz,
//! b_a_xyz` (Hamilton quaternion, scalar first).

use crate::metrics::{self, SampleStats};
use crate::Method;
use lie::se23::ExtendedPose;
use lie::so3::Rotation;
use lie::{Matrix20, Vector10, Vector3};
use nalgebra::{Quaternion, UnitQuaternion};
use preint::baseline::{BaselineState, Matrix15, Vector6};
use preint::{GravityModel, ImuInput, ImuSample, NoiseParams, PreintState, StampedPose};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum EurocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: parse error: {detail}")]
    Parse {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("{path}:{line}: non-monotonic timestamp")]
    NonMonotonicTimestamp { path: String, line: usize },
    #[error("{path}: no data rows")]
    Empty { path: String },
}

/// One ground-truth record, time in seconds relative to the stream start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruthRecord {
    pub t: f64,
    pub position: Vector3<f64>,
    pub orientation: UnitQuaternion<f64>,
    pub velocity: Vector3<f64>,
    pub gyro_bias: Vector3<f64>,
    pub accel_bias: Vector3<f64>,
}

impl GroundTruthRecord {
    pub fn pose(&self) -> ExtendedPose<f64> {
        ExtendedPose::new(
            Rotation::from_matrix_unchecked(self.orientation.to_rotation_matrix().into_inner()),
            self.velocity,
            self.position,
        )
    }

    pub fn bias10(&self) -> Vector10<f64> {
        let mut b = Vector10::zeros();
        b.fixed_rows_mut::<3>(0).copy_from(&self.gyro_bias);
        b.fixed_rows_mut::<3>(3).copy_from(&self.accel_bias);
        b
    }
}

/// Parsed IMU stream with ingest statistics.
#[derive(Debug, Clone)]
pub struct ImuStream {
    /// Absolute timestamp of the first sample, nanoseconds.
    pub start_ns: u64,
    /// Samples with `t` in seconds since `start_ns`.
    pub samples: Vec<ImuSample>,
    /// Median sample rate, Hz.
    pub median_rate_hz: f64,
    /// Count of inter-sample gaps larger than 3× the median interval.
    pub gap_count: usize,
}

/// Parsed ground-truth stream.
#[derive(Debug, Clone)]
pub struct GroundTruthStream {
    pub start_ns: u64,
    pub records: Vec<GroundTruthRecord>,
}

fn read_rows(path: &Path, want_fields: usize) -> Result<Vec<(usize, Vec<f64>)>, EurocError> {
    let file = std::fs::File::open(path).map_err(|source| EurocError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| EurocError::Parse {
            path: path.display().to_string(),
            line: rows.len() + 1,
            detail: e.to_string(),
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(rows.len() + 1);
        if record.is_empty() || (record.len() == 1 && record[0].is_empty()) {
            continue;
        }
        // A non-numeric first field on the first data row is a header.
        if rows.is_empty() && record[0].parse::<f64>().is_err() {
            continue;
        }
        if record.len() != want_fields {
            return Err(EurocError::Parse {
                path: path.display().to_string(),
                line,
                detail: format!("expected {want_fields} fields, found {}", record.len()),
            });
        }
        let mut values = Vec::with_capacity(want_fields);
        for f in record.iter() {
            values.push(f.parse::<f64>().map_err(|e| EurocError::Parse {
                path: path.display().to_string(),
                line,
                detail: format!("{f:?}: {e}"),
            })?);
        }
        rows.push((line, values));
    }
    if rows.is_empty() {
        return Err(EurocError::Empty {
            path: path.display().to_string(),
        });
    }
    Ok(rows)
}

/// Parses `mav0/imu0/data.csv`-style files.
pub fn parse_imu_csv(path: &Path) -> Result<ImuStream, EurocError> {
    let rows = read_rows(path, 7)?;
    let start_ns = rows[0].1[0] as u64;
    let mut samples = Vec::with_capacity(rows.len());
    let mut last_ns = None;
    for (line, v) in &rows {
        let t_ns = v[0] as u64;
        if let Some(prev) = last_ns {
            if t_ns <= prev {
                return Err(EurocError::NonMonotonicTimestamp {
                    path: path.display().to_string(),
                    line: *line,
                });
            }
        }
        last_ns = Some(t_ns);
        samples.push(ImuSample {
            t: (t_ns - start_ns) as f64 * 1e-9,
            gyro: Vector3::new(v[1], v[2], v[3]),
            accel: Vector3::new(v[4], v[5], v[6]),
        });
    }

    let mut intervals: Vec<f64> = samples.windows(2).map(|w| w[1].t - w[0].t).collect();
    let (median_rate_hz, gap_count) = if intervals.is_empty() {
        (0.0, 0)
    } else {
        intervals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let median_dt = intervals[intervals.len() / 2];
        let gaps = samples
            .windows(2)
            .filter(|w| w[1].t - w[0].t > 3.0 * median_dt)
            .count();
        (1.0 / median_dt, gaps)
    };
    Ok(ImuStream {
        start_ns,
        samples,
        median_rate_hz,
        gap_count,
    })
}

/// Parses `mav0/state_groundtruth_estimate0/data.csv`-style files.
pub fn parse_groundtruth_csv(path: &Path) -> Result<GroundTruthStream, EurocError> {
    let rows = read_rows(path, 17)?;
    let start_ns = rows[0].1[0] as u64;
    let mut records = Vec::with_capacity(rows.len());
    let mut last_ns = None;
    for (line, v) in &rows {
        let t_ns = v[0] as u64;
        if let Some(prev) = last_ns {
            if t_ns <= prev {
                return Err(EurocError::NonMonotonicTimestamp {
                    path: path.display().to_string(),
                    line: *line,
                });
            }
        }
        last_ns = Some(t_ns);
        let q = Quaternion::new(v[4], v[5], v[6], v[7]);
        let norm = q.norm();
        if (norm - 1.0).abs() > 1e-2 {
            return Err(EurocError::Parse {
                path: path.display().to_string(),
                line: *line,
                detail: format!("quaternion norm {norm} too far from 1"),
            });
        }
        records.push(GroundTruthRecord {
            t: (t_ns - start_ns) as f64 * 1e-9,
            position: Vector3::new(v[1], v[2], v[3]),
            orientation: UnitQuaternion::from_quaternion(q),
            velocity: Vector3::new(v[8], v[9], v[10]),
            gyro_bias: Vector3::new(v[11], v[12], v[13]),
            accel_bias: Vector3::new(v[14], v[15], v[16]),
        });
    }
    Ok(GroundTruthStream { start_ns, records })
}

/// Shortest-arc interpolation of ground truth at time `t` (seconds in the
/// stream's own time base). `None` when the bracketing records are farther
/// than `tolerance` away.
pub fn interpolate(
    records: &[GroundTruthRecord],
    t: f64,
    tolerance: f64,
) -> Option<GroundTruthRecord> {
    let idx = records.partition_point(|r| r.t <= t);
    if idx == 0 {
        let first = records.first()?;
        return ((first.t - t).abs() <= tolerance).then_some(*first);
    }
    if idx == records.len() {
        let last = records.last()?;
        return ((t - last.t).abs() <= tolerance).then_some(*last);
    }
    let a = &records[idx - 1];
    let b = &records[idx];
    if t - a.t > tolerance && b.t - t > tolerance {
        return None;
    }
    let span = b.t - a.t;
    let frac = if span > 0.0 { (t - a.t) / span } else { 0.0 };
    // Shortest arc: flip one quaternion if the dot product is negative.
    let qa = a.orientation;
    let qb = if qa.coords.dot(&b.orientation.coords) < 0.0 {
        UnitQuaternion::new_unchecked(-b.orientation.into_inner())
    } else {
        b.orientation
    };
    let orientation = qa
        .try_slerp(&qb, frac, 1e-9)
        .unwrap_or(if frac < 0.5 { qa } else { qb });
    Some(GroundTruthRecord {
        t,
        position: a.position.lerp(&b.position, frac),
        orientation,
        velocity: a.velocity.lerp(&b.velocity, frac),
        gyro_bias: a.gyro_bias.lerp(&b.gyro_bias, frac),
        accel_bias: a.accel_bias.lerp(&b.accel_bias, frac),
    })
}

/// Ground-truth alignment tolerance, seconds.
pub const GT_MATCH_TOLERANCE: f64 = 5e-3;

/// Result of one evaluated segment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentResult {
    pub t_start: f64,
    pub dt_ij: f64,
    /// `(method, NEES)` pairs for this segment.
    pub nees: Vec<(Method, f64)>,
}

/// Why segments were skipped, with counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SkipCounts {
    pub ground_truth_gap: usize,
    pub near_pi: usize,
    pub ill_conditioned: usize,
}

/// Per-method summary over all segments of one `Δt` setting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub dt_ij: f64,
    pub stats: SampleStats,
}

/// Full evaluation output for one `Δt` setting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceEvaluation {
    pub dt_ij: f64,
    pub segments: Vec<SegmentResult>,
    pub summaries: Vec<MethodSummary>,
    pub skipped: SkipCounts,
}

/// Evaluation configuration shared across segments.
#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub gravity: GravityModel<f64>,
    pub noise: NoiseParams<f64>,
    /// Initial standard deviation per effective error axis.
    pub sigma0: f64,
}

struct Segment {
    start_idx: usize,
    end_idx: usize,
    t_end: f64,
}

/// Partitions the stream into consecutive segments of duration `dt_ij` and
/// evaluates each method's NEES at the segment end, starting every segment
/// from interpolated ground truth.
pub fn evaluate_sequence(
    imu: &ImuStream,
    gt: &GroundTruthStream,
    dt_ij: f64,
    methods: &[Method],
    cfg: &EvalConfig,
) -> SequenceEvaluation {
    assert!(dt_ij > 0.0, "preintegration time must be positive");
    // Ground-truth times re-based into the IMU clock.
    let gt_offset = (gt.start_ns as f64 - imu.start_ns as f64) * 1e-9;
    let records: Vec<GroundTruthRecord> = gt
        .records
        .iter()
        .map(|r| GroundTruthRecord {
            t: r.t + gt_offset,
            ..*r
        })
        .collect();

    // Consecutive partition of the IMU stream, starting at the first sample
    // covered by ground truth. The final sample's hold interval extends one
    // nominal period past its stamp, so a stream of N samples at a constant
    // rate covers exactly N periods.
    let t_lo = records.first().map(|r| r.t).unwrap_or(0.0);
    let t_hi = records.last().map(|r| r.t).unwrap_or(0.0);
    let nominal_dt = if imu.median_rate_hz > 0.0 {
        1.0 / imu.median_rate_hz
    } else {
        0.0
    };
    let stream_end = imu.samples.last().map(|s| s.t + nominal_dt).unwrap_or(0.0);
    let first = imu.samples.partition_point(|s| s.t < t_lo);
    let mut segments = Vec::new();
    let mut k0 = first;
    while k0 < imu.samples.len() {
        let t_start = imu.samples[k0].t;
        let t_end = t_start + dt_ij;
        let margin = 1e-9;
        if t_end > t_hi + margin || t_end > stream_end + margin {
            break;
        }
        let k1 = imu.samples.partition_point(|s| s.t < t_end - margin);
        if k1 <= k0 {
            break;
        }
        // Non-final segments snap to the next stamp; the final one may end
        // inside the last sample's hold interval.
        let t_end = imu.samples.get(k1).map(|s| s.t).unwrap_or(t_end);
        segments.push(Segment {
            start_idx: k0,
            end_idx: k1,
            t_end,
        });
        k0 = k1;
    }

    let outcomes: Vec<Result<SegmentResult, SkipReason>> = segments
        .par_iter()
        .map(|seg| evaluate_segment(imu, &records, seg, methods, cfg))
        .collect();

    let mut skipped = SkipCounts::default();
    let mut results = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => results.push(r),
            Err(SkipReason::GroundTruthGap) => skipped.ground_truth_gap += 1,
            Err(SkipReason::NearPi) => skipped.near_pi += 1,
            Err(SkipReason::IllConditioned) => skipped.ill_conditioned += 1,
        }
    }

    let summaries = methods
        .iter()
        .filter_map(|&method| {
            let samples: Vec<f64> = results
                .iter()
                .flat_map(|r| r.nees.iter().filter(|(m, _)| *m == method).map(|(_, n)| *n))
                .collect();
            SampleStats::from_samples(&samples).map(|stats| MethodSummary {
                method,
                dt_ij,
                stats,
            })
        })
        .collect();

    SequenceEvaluation {
        dt_ij,
        segments: results,
        summaries,
        skipped,
    }
}

enum SkipReason {
    GroundTruthGap,
    NearPi,
    IllConditioned,
}

fn evaluate_segment(
    imu: &ImuStream,
    records: &[GroundTruthRecord],
    seg: &Segment,
    methods: &[Method],
    cfg: &EvalConfig,
) -> Result<SegmentResult, SkipReason> {
    let t_start = imu.samples[seg.start_idx].t;
    let t_end = seg.t_end;
    let gt_start =
        interpolate(records, t_start, GT_MATCH_TOLERANCE).ok_or(SkipReason::GroundTruthGap)?;
    let gt_end =
        interpolate(records, t_end, GT_MATCH_TOLERANCE).ok_or(SkipReason::GroundTruthGap)?;

    let bias0 = gt_start.bias10();
    let mut sigma0_20 = Matrix20::zeros();
    for &i in preint::checkpoint::EFFECTIVE_AXES.iter() {
        sigma0_20[(i, i)] = cfg.sigma0 * cfg.sigma0;
    }
    let sigma0_15 = Matrix15::from_diagonal_element(cfg.sigma0 * cfg.sigma0);

    let mut equivariant = PreintState::new(bias0, sigma0_20);
    let mut baseline = BaselineState::new(Vector6::from_fn(|i, _| bias0[i]), sigma0_15);
    let qd = cfg.noise.qd();

    let want_equivariant = methods.contains(&Method::Equivariant);
    let want_baseline = methods.contains(&Method::Baseline);
    for k in seg.start_idx..seg.end_idx {
        let t_next = imu
            .samples
            .get(k + 1)
            .map(|s| s.t)
            .unwrap_or(t_end)
            .min(t_end);
        let sample = &imu.samples[k];
        if t_next <= sample.t {
            continue;
        }
        let input = ImuInput::from_sample(sample, t_next);
        if want_equivariant {
            equivariant.step(&input, &qd);
        }
        if want_baseline {
            baseline.step(&input, &cfg.noise);
        }
    }

    // True terminal increment from ground truth.
    let start_pose = StampedPose {
        t: t_start,
        pose: gt_start.pose(),
    };
    let end_pose = StampedPose {
        t: t_end,
        pose: gt_end.pose(),
    };
    let upsilon_true = preint::gravity::true_increment(&start_pose, &end_pose, &cfg.gravity);
    let bias_true = gt_end.bias10();

    let mut nees = Vec::new();
    for &method in methods {
        let value = match method {
            Method::Equivariant => {
                let truth = preint::ManifoldState::new(upsilon_true, bias_true);
                let eps = equivariant
                    .equivariant_error(&truth)
                    .map_err(|_| SkipReason::NearPi)?;
                metrics::nees_effective(&eps, &equivariant.sigma)
                    .map_err(|_| SkipReason::IllConditioned)?
            }
            Method::Baseline => {
                let eps = baseline
                    .error(
                        &upsilon_true.extended_pose(),
                        &Vector6::from_fn(|i, _| bias_true[i]),
                    )
                    .map_err(|_| SkipReason::NearPi)?;
                metrics::nees(&eps, &baseline.sigma).map_err(|_| SkipReason::IllConditioned)?
            }
        };
        nees.push((method, value));
    }

    Ok(SegmentResult {
        t_start,
        dt_ij: t_end - t_start,
        nees,
    })
}

/// Opens the two CSVs under an ASL-layout dataset root.
pub fn load_dataset(root: &Path) -> Result<(ImuStream, GroundTruthStream), EurocError> {
    let imu = parse_imu_csv(&root.join("mav0/imu0/data.csv"))?;
    let gt = parse_groundtruth_csv(&root.join("mav0/state_groundtruth_estimate0/data.csv"))?;
    Ok((imu, gt))
}
