//! Per-frame buffer-size, compression-ratio and build-time measurements,
//! comparing the spatio-temporal encoder with the temporal-only baseline.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sfix_core::wire::{frame_message, Hello};
use sfix_core::{decode_delta, encode_delta, EncoderConfig, EncoderMode, Frame};

use crate::codec::delta_message;
use crate::error::{Error, Result};
use crate::ingest::VideoSource;
use crate::session::DeltaStats;

pub const CSV_HEADER: &str = "frame_no,mode,total_samples,diff_samples,diff_pct,index_entries,wire_bytes,ratio_samples,ratio_wire,encode_seconds,build_seconds";

/// Shortest duration recorded; a timer reading of zero is below its
/// resolution, not free.
const TIMER_FLOOR_SECONDS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spatio,
    Standard,
}

impl From<EncoderMode> for Mode {
    fn from(m: EncoderMode) -> Self {
        match m {
            EncoderMode::SpatioTemporal => Mode::Spatio,
            EncoderMode::StandardBaseline => Mode::Standard,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Spatio => "spatio",
            Mode::Standard => "standard",
        })
    }
}

/// One report row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMetrics {
    pub frame_no: u32,
    pub mode: Mode,
    pub total_samples: u32,
    pub diff_samples: u32,
    pub diff_pct: f64,
    pub index_entries: u32,
    pub wire_bytes: u64,
    pub ratio_samples: f64,
    pub ratio_wire: f64,
    pub encode_seconds: f64,
    pub build_seconds: f64,
}

impl FrameMetrics {
    fn new(
        frame_no: u32,
        mode: Mode,
        total_samples: u32,
        diff_samples: u32,
        index_entries: u32,
        wire_bytes: u64,
    ) -> Self {
        let total = f64::from(total_samples);
        Self {
            frame_no,
            mode,
            total_samples,
            diff_samples,
            diff_pct: 100.0 * f64::from(diff_samples) / total,
            index_entries,
            wire_bytes,
            ratio_samples: f64::from(diff_samples) / total,
            ratio_wire: wire_bytes as f64 / total,
            encode_seconds: 0.0,
            build_seconds: 0.0,
        }
    }

    /// Row for a frame rebuilt by a streaming client. The encoder time is
    /// not observable there and is left at 0.
    pub fn from_received(stats: &DeltaStats, hello: &Hello) -> Self {
        let mut m = Self::new(
            stats.frame_no,
            hello.mode.into(),
            hello.geometry.total_samples(),
            stats.diff_samples as u32,
            stats.index_entries as u32,
            stats.wire_bytes as u64,
        );
        m.build_seconds = stats.build_seconds.max(TIMER_FLOOR_SECONDS);
        m
    }
}

/// Runs `f` three times and returns the last result with the median time.
fn median_of_3<T>(mut f: impl FnMut() -> T) -> (T, f64) {
    let mut times = [0.0; 3];
    let mut out = None;
    for t in &mut times {
        let start = Instant::now();
        out = Some(f());
        *t = start.elapsed().as_secs_f64();
    }
    times.sort_by(f64::total_cmp);
    (
        out.expect("ran three times"),
        times[1].max(TIMER_FLOOR_SECONDS),
    )
}

/// Encodes, frames and decodes one pair, checking the round trip.
pub fn measure_pair(
    reference: &Frame,
    new: &Frame,
    config: &EncoderConfig,
    frame_no: u32,
) -> Result<FrameMetrics> {
    let (delta, encode_seconds) = median_of_3(|| encode_delta(reference, new, config));
    let delta = delta?;
    let wire_bytes = frame_message(&delta_message(frame_no, &delta)).len() as u64;
    let (decoded, build_seconds) = median_of_3(|| decode_delta(reference, &delta));
    if decoded? != *new {
        return Err(Error::RoundTrip(frame_no));
    }
    let mut m = FrameMetrics::new(
        frame_no,
        config.mode().into(),
        new.geometry().total_samples(),
        delta.diff().len() as u32,
        delta.index().len() as u32,
        wire_bytes,
    );
    m.encode_seconds = encode_seconds;
    m.build_seconds = build_seconds;
    Ok(m)
}

/// Chains frame `k - 1` as the reference of frame `k` and measures every
/// frame under each configuration. Rows are ordered by frame, then config.
pub fn measure_video(
    source: &mut dyn VideoSource,
    configs: &[EncoderConfig],
) -> Result<Vec<FrameMetrics>> {
    let mut rows = Vec::new();
    let Some(mut reference) = source.next_frame()? else {
        return Err(Error::SourceTooShort(0));
    };
    let mut frame_no = 0;
    while let Some(frame) = source.next_frame()? {
        frame_no += 1;
        for cfg in configs {
            rows.push(measure_pair(&reference, &frame, cfg, frame_no)?);
        }
        reference = frame;
    }
    if frame_no == 0 {
        return Err(Error::SourceTooShort(1));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSummary {
    pub mode: Mode,
    pub frames: usize,
    pub mean_diff_pct: f64,
    pub mean_ratio_samples: f64,
    pub mean_ratio_wire: f64,
    pub mean_encode_seconds: f64,
    pub mean_build_seconds: f64,
    pub total_wire_bytes: u64,
}

/// Spatio-temporal relative to baseline, in percent of the baseline value.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// `100 * (standard - spatio) / standard` of the mean difference-buffer
    /// percentage; identical to the improvement in `ratio_samples`.
    pub improvement_diff_pct: f64,
    pub improvement_wire_pct: f64,
    /// Positive when the spatio-temporal decoder is slower.
    pub build_time_change_pct: f64,
    /// False when the baseline buffers nothing, making the improvement
    /// undefined; it is then reported as 0.
    pub improvement_defined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub spatio: Option<ModeSummary>,
    pub standard: Option<ModeSummary>,
    pub comparison: Option<Comparison>,
}

fn relative_pct(standard: f64, spatio: f64) -> Option<f64> {
    (standard != 0.0).then(|| 100.0 * (standard - spatio) / standard)
}

pub fn summarize(rows: &[FrameMetrics]) -> RunSummary {
    let per_mode = |mode: Mode| {
        let rows: Vec<&FrameMetrics> = rows.iter().filter(|r| r.mode == mode).collect();
        if rows.is_empty() {
            return None;
        }
        let n = rows.len() as f64;
        let mean = |f: fn(&FrameMetrics) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
        Some(ModeSummary {
            mode,
            frames: rows.len(),
            mean_diff_pct: mean(|r| r.diff_pct),
            mean_ratio_samples: mean(|r| r.ratio_samples),
            mean_ratio_wire: mean(|r| r.ratio_wire),
            mean_encode_seconds: mean(|r| r.encode_seconds),
            mean_build_seconds: mean(|r| r.build_seconds),
            total_wire_bytes: rows.iter().map(|r| r.wire_bytes).sum(),
        })
    };
    let spatio = per_mode(Mode::Spatio);
    let standard = per_mode(Mode::Standard);
    let comparison = match (&spatio, &standard) {
        (Some(sp), Some(st)) => {
            let diff = relative_pct(st.mean_diff_pct, sp.mean_diff_pct);
            Some(Comparison {
                improvement_diff_pct: diff.unwrap_or(0.0),
                improvement_wire_pct: relative_pct(st.mean_ratio_wire, sp.mean_ratio_wire)
                    .unwrap_or(0.0),
                build_time_change_pct: -relative_pct(st.mean_build_seconds, sp.mean_build_seconds)
                    .unwrap_or(0.0),
                improvement_defined: diff.is_some(),
            })
        }
        _ => None,
    };
    RunSummary {
        spatio,
        standard,
        comparison,
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[FrameMetrics]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report(path: &Path, rows: &[FrameMetrics]) -> Result<()> {
    write_csv(io::BufWriter::new(File::create(path)?), rows)
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<FrameMetrics>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::protocol(format!(
            "unexpected report header {header:?}"
        )));
    }
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub fn read_report(path: &Path) -> Result<Vec<FrameMetrics>> {
    read_csv(File::open(path)?)
}

/// Measures `source` under each mode, writes the CSV report if a path is
/// given, and returns the summary.
pub fn run_benchmark(
    source: &mut dyn VideoSource,
    modes: &[EncoderMode],
    min_repeat_run: u32,
    report_path: Option<&Path>,
) -> Result<RunSummary> {
    let configs = modes
        .iter()
        .map(|&m| EncoderConfig::new(m, min_repeat_run))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let rows = measure_video(source, &configs)?;
    if let Some(path) = report_path {
        write_report(path, &rows)?;
    }
    Ok(summarize(&rows))
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in [&self.spatio, &self.standard].into_iter().flatten() {
            writeln!(
                f,
                "{:<8} frames={} diff_pct={:.4} ratio={:.4} ratio_wire={:.4} build_s={:.6} encode_s={:.6} wire_bytes={}",
                m.mode,
                m.frames,
                m.mean_diff_pct,
                m.mean_ratio_samples,
                m.mean_ratio_wire,
                m.mean_build_seconds,
                m.mean_encode_seconds,
                m.total_wire_bytes
            )?;
        }
        if let Some(c) = &self.comparison {
            writeln!(
                f,
                "improvement diff_pct={:.4}% wire={:.4}% build_time_change={:+.2}%{}",
                c.improvement_diff_pct,
                c.improvement_wire_pct,
                c.build_time_change_pct,
                if c.improvement_defined {
                    ""
                } else {
                    " (undefined: baseline buffers nothing)"
                }
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{gen_low_motion, Fps, MemorySource, SynthParams};
    use sfix_core::FrameGeometry;

    #[test]
    fn identical_pair_buffers_nothing() {
        let g = FrameGeometry::new(8, 8, 1).unwrap();
        let f = Frame::filled(g, 3);
        let m = measure_pair(&f, &f, &EncoderConfig::default(), 1).unwrap();
        assert_eq!((m.diff_samples, m.diff_pct, m.ratio_samples), (0, 0.0, 0.0));
        assert_eq!(m.index_entries, 1);
        assert!(m.build_seconds > 0.0 && m.encode_seconds > 0.0);
    }

    #[test]
    fn still_video_has_undefined_improvement() {
        let params = SynthParams {
            block_count: 0,
            n_frames: 5,
            ..Default::default()
        };
        let mut src = gen_low_motion(params).unwrap();
        let summary = run_benchmark(
            &mut src,
            &[EncoderMode::SpatioTemporal, EncoderMode::StandardBaseline],
            3,
            None,
        )
        .unwrap();
        let c = summary.comparison.unwrap();
        assert!(!c.improvement_defined);
        assert_eq!(c.improvement_diff_pct, 0.0);
        assert_eq!(summary.spatio.unwrap().mean_diff_pct, 0.0);
    }

    #[test]
    fn needs_two_frames() {
        let g = FrameGeometry::new(2, 2, 1).unwrap();
        let mut one = MemorySource::new(g, Fps { num: 1, den: 1 }, vec![Frame::filled(g, 0)]);
        assert!(matches!(
            run_benchmark(&mut one, &[EncoderMode::SpatioTemporal], 3, None),
            Err(Error::SourceTooShort(1))
        ));
    }

    #[test]
    fn csv_header_and_round_trip() {
        let mut src = gen_low_motion(SynthParams {
            n_frames: 4,
            ..Default::default()
        })
        .unwrap();
        let rows = measure_video(
            &mut src,
            &[EncoderConfig::default(), EncoderConfig::baseline()],
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        let mut bytes = Vec::new();
        write_csv(&mut bytes, &rows).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(read_csv(bytes.as_slice()).unwrap(), rows);
    }

    #[test]
    fn empty_report_still_has_header() {
        let mut bytes = Vec::new();
        write_csv(&mut bytes, &[]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap().trim_end(), CSV_HEADER);
    }
}
