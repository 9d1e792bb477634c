//! Audio-label and video-score streams: CSV parsing, serialization, and
//! alignment onto a shared 1 Hz session timeline.
//!
//! Video CSV header: `t,angry,disgust,fear,happy,neutral,sad,surprise`.
//! Audio CSV header: `t,label` with an optional third `confidence` column.
//! `t` is seconds from session start. Cells are trimmed before parsing.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use csv::{ReaderBuilder, StringRecord, Trim};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emotion::{Emotion, EmotionMap, EmotionVector, EMOTION_COUNT};

pub const VIDEO_HEADER: [&str; 8] = ["t", "angry", "disgust", "fear", "happy", "neutral", "sad", "surprise"];
pub const AUDIO_HEADER: [&str; 2] = ["t", "label"];
pub const AUDIO_HEADER_WITH_CONFIDENCE: [&str; 3] = ["t", "label", "confidence"];

#[derive(Debug, Error)]
pub enum TimelineError {
    #[error("no data rows")]
    NoData,
    #[error("bad header: expected '{expected}', found '{found}'")]
    Header { expected: String, found: String },
    #[error("line {line}: {detail}")]
    Row { line: u64, detail: String },
    #[error("{0} stream is empty")]
    EmptyStream(&'static str),
    #[error("no overlap between audio seconds {audio:?} and video seconds {video:?}")]
    EmptyOverlap { audio: (u64, u64), video: (u64, u64) },
    #[error("invalid session timeline: {0}")]
    Invalid(String),
}

/// Non-fatal findings while parsing, e.g. out-of-range scores.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    Clamped { line: u64, column: String, value: f64 },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Clamped { line, column, value } => {
                write!(f, "line {line}: {column}={value} clamped to [0,1]")
            }
        }
    }
}

/// One observation: scores at `t` seconds from session start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelinePoint {
    pub t: f64,
    pub v: EmotionVector,
}

impl TimelinePoint {
    pub fn new(t: f64, v: EmotionVector) -> Self {
        Self { t, v }
    }
}

/// A parsed stream sorted by `t`, plus any diagnostics raised while parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedStream {
    pub points: Vec<TimelinePoint>,
    pub diagnostics: Vec<Diagnostic>,
}

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    ReaderBuilder::new()
        .trim(Trim::All)
        .flexible(true)
        .has_headers(false)
        .from_reader(bytes)
}

/// Yields `(line, record)` for every non-blank row after the header.
fn data_rows(bytes: &[u8], accepted: &[&[&str]]) -> Result<Vec<(u64, StringRecord)>, TimelineError> {
    let mut rows = Vec::new();
    let mut header: Option<StringRecord> = None;
    for rec in reader(bytes).records() {
        let rec = rec.map_err(|e| TimelineError::Row {
            line: e.position().map_or(0, |p| p.line()),
            detail: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let line = rec.position().map_or(0, |p| p.line());
        match &header {
            None => {
                let found: Vec<&str> = rec.iter().collect();
                if !accepted.contains(&found.as_slice()) {
                    return Err(TimelineError::Header {
                        expected: accepted[0].join(","),
                        found: found.join(","),
                    });
                }
                header = Some(rec);
            }
            Some(h) => {
                if rec.len() != h.len() {
                    return Err(TimelineError::Row {
                        line,
                        detail: format!("expected {} columns, found {}", h.len(), rec.len()),
                    });
                }
                rows.push((line, rec));
            }
        }
    }
    if rows.is_empty() {
        return Err(TimelineError::NoData);
    }
    Ok(rows)
}

fn parse_number(line: u64, column: &str, cell: &str) -> Result<f64, TimelineError> {
    let value: f64 = cell.parse().map_err(|_| TimelineError::Row {
        line,
        detail: format!("column '{column}': '{cell}' is not a number"),
    })?;
    if !value.is_finite() {
        return Err(TimelineError::Row {
            line,
            detail: format!("column '{column}': '{cell}' is not finite"),
        });
    }
    Ok(value)
}

fn parse_time(line: u64, cell: &str, seen: &mut HashSet<u64>) -> Result<f64, TimelineError> {
    let t = parse_number(line, "t", cell)?;
    if t < 0.0 {
        return Err(TimelineError::Row {
            line,
            detail: format!("t={cell} is negative"),
        });
    }
    if !seen.insert(t.to_bits()) {
        return Err(TimelineError::Row {
            line,
            detail: format!("duplicate t={cell}"),
        });
    }
    Ok(t)
}

fn sort_points(points: &mut [TimelinePoint]) {
    points.sort_by(|a, b| a.t.total_cmp(&b.t));
}

/// Parses a video score stream. Scores outside [0,1] are clamped and reported.
pub fn parse_video_csv(bytes: &[u8]) -> Result<ParsedStream, TimelineError> {
    let rows = data_rows(bytes, &[&VIDEO_HEADER])?;
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(rows.len());
    let mut diagnostics = Vec::new();
    for (line, rec) in rows {
        let t = parse_time(line, &rec[0], &mut seen)?;
        let mut raw = [0.0; EMOTION_COUNT];
        for (i, e) in Emotion::ALL.iter().enumerate() {
            raw[i] = parse_number(line, e.as_str(), &rec[i + 1])?;
        }
        let (v, clamped) = EmotionVector::clamped(EmotionMap::from_array(raw)).expect("finite scores checked above");
        diagnostics.extend(clamped.into_iter().map(|e| Diagnostic::Clamped {
            line,
            column: e.as_str().to_string(),
            value: raw[e.index()],
        }));
        points.push(TimelinePoint::new(t, v));
    }
    sort_points(&mut points);
    Ok(ParsedStream { points, diagnostics })
}

/// Parses per-second categorical labels into one-hot vectors weighted by the
/// optional confidence column (1 when absent).
pub fn parse_audio_labels(bytes: &[u8]) -> Result<ParsedStream, TimelineError> {
    let rows = data_rows(bytes, &[&AUDIO_HEADER, &AUDIO_HEADER_WITH_CONFIDENCE])?;
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(rows.len());
    let mut diagnostics = Vec::new();
    for (line, rec) in rows {
        let t = parse_time(line, &rec[0], &mut seen)?;
        let emotion: Emotion = rec[1].parse().map_err(|e| TimelineError::Row {
            line,
            detail: format!("{e}"),
        })?;
        let mut weight = 1.0;
        if let Some(cell) = rec.get(2) {
            let raw = parse_number(line, "confidence", cell)?;
            weight = raw.clamp(0.0, 1.0);
            if weight != raw {
                diagnostics.push(Diagnostic::Clamped {
                    line,
                    column: "confidence".into(),
                    value: raw,
                });
            }
        }
        points.push(TimelinePoint::new(t, EmotionVector::one_hot(emotion, weight)));
    }
    sort_points(&mut points);
    Ok(ParsedStream { points, diagnostics })
}

/// Shortest decimal that parses back to the same `f64`.
fn fmt_num(x: f64) -> String {
    format!("{x}")
}

pub fn write_video_csv(points: &[TimelinePoint]) -> Vec<u8> {
    let mut out = VIDEO_HEADER.join(",");
    out.push('\n');
    for p in points {
        out.push_str(&fmt_num(p.t));
        for &s in p.v.scores().values() {
            out.push(',');
            out.push_str(&fmt_num(s));
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// Writes the dominant label per point. The confidence column is only
/// emitted when some point's dominant score differs from 1.
pub fn write_audio_labels(points: &[TimelinePoint]) -> Vec<u8> {
    let with_confidence = points.iter().any(|p| p.v.score(p.v.dominant()) != 1.0);
    let header: &[&str] = if with_confidence {
        &AUDIO_HEADER_WITH_CONFIDENCE
    } else {
        &AUDIO_HEADER
    };
    let mut out = header.join(",");
    out.push('\n');
    for p in points {
        let e = p.v.dominant();
        out.push_str(&format!("{},{}", fmt_num(p.t), e));
        if with_confidence {
            out.push(',');
            out.push_str(&fmt_num(p.v.score(e)));
        }
        out.push('\n');
    }
    out.into_bytes()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionMeta {
    pub game: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participant: Option<String>,
}

/// Audio and video streams sharing one whole-second time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionTimeline {
    audio: Vec<TimelinePoint>,
    video: Vec<TimelinePoint>,
    pub meta: SessionMeta,
}

impl SessionTimeline {
    /// Checks that both streams are non-empty, equally long, on the same
    /// strictly increasing whole-second axis, and free of non-finite values.
    pub fn new(audio: Vec<TimelinePoint>, video: Vec<TimelinePoint>, meta: SessionMeta) -> Result<Self, TimelineError> {
        let invalid = |m: String| Err(TimelineError::Invalid(m));
        if audio.is_empty() || video.is_empty() {
            return invalid("streams must be non-empty".into());
        }
        if audio.len() != video.len() {
            return invalid(format!("{} audio vs {} video points", audio.len(), video.len()));
        }
        for (i, (a, v)) in audio.iter().zip(&video).enumerate() {
            if a.t != v.t {
                return invalid(format!("step {i}: audio t={} vs video t={}", a.t, v.t));
            }
            if !a.t.is_finite() || a.t < 0.0 || a.t.fract() != 0.0 {
                return invalid(format!("step {i}: t={} is not a whole second", a.t));
            }
            if i > 0 && a.t <= audio[i - 1].t {
                return invalid(format!("step {i}: t={} not increasing", a.t));
            }
            let finite = |p: &TimelinePoint| p.v.scores().values().all(|s| s.is_finite());
            if !finite(a) || !finite(v) {
                return invalid(format!("step {i}: non-finite score"));
            }
        }
        Ok(Self { audio, video, meta })
    }

    pub fn with_meta(mut self, meta: SessionMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn audio(&self) -> &[TimelinePoint] {
        &self.audio
    }

    pub fn video(&self) -> &[TimelinePoint] {
        &self.video
    }

    pub fn len(&self) -> usize {
        self.audio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.audio.is_empty()
    }

    /// Whole-second timestamps shared by both streams.
    pub fn times(&self) -> impl Iterator<Item = u64> + '_ {
        self.audio.iter().map(|p| p.t as u64)
    }

    /// `(t, audio, video)` per step.
    pub fn steps(&self) -> impl Iterator<Item = (u64, &EmotionVector, &EmotionVector)> + '_ {
        self.audio
            .iter()
            .zip(&self.video)
            .map(|(a, v)| (a.t as u64, &a.v, &v.v))
    }
}

/// Sums and counts per whole second.
fn buckets(points: &[TimelinePoint]) -> BTreeMap<u64, ([f64; EMOTION_COUNT], usize)> {
    let mut out: BTreeMap<u64, ([f64; EMOTION_COUNT], usize)> = BTreeMap::new();
    for p in points {
        let entry = out.entry(p.t.floor() as u64).or_insert(([0.0; EMOTION_COUNT], 0));
        for (acc, &s) in entry.0.iter_mut().zip(p.v.scores().values()) {
            *acc += s;
        }
        entry.1 += 1;
    }
    out
}

fn resample(buckets: &BTreeMap<u64, ([f64; EMOTION_COUNT], usize)>, start: u64, end: u64) -> Vec<TimelinePoint> {
    let mean = |(sum, n): &([f64; EMOTION_COUNT], usize)| {
        let m = EmotionMap::from_array(sum.map(|s| s / *n as f64));
        EmotionVector::clamped(m).expect("means of finite scores").0
    };
    let mut last = buckets
        .range(..=start)
        .next_back()
        .map(|(_, b)| mean(b))
        .expect("window starts at or after the first observation");
    (start..=end)
        .map(|s| {
            if let Some(b) = buckets.get(&s) {
                last = mean(b);
            }
            TimelinePoint::new(s as f64, last)
        })
        .collect()
}

/// Aligns both streams onto the whole seconds they share.
///
/// Observations are bucketed by whole second and averaged component-wise;
/// seconds with no observation carry the previous vector forward.
pub fn align(audio: &[TimelinePoint], video: &[TimelinePoint]) -> Result<SessionTimeline, TimelineError> {
    if audio.is_empty() {
        return Err(TimelineError::EmptyStream("audio"));
    }
    if video.is_empty() {
        return Err(TimelineError::EmptyStream("video"));
    }
    if let Some(p) = audio.iter().chain(video).find(|p| !p.t.is_finite() || p.t < 0.0) {
        return Err(TimelineError::Invalid(format!("t={} is not a valid time", p.t)));
    }
    let a = buckets(audio);
    let v = buckets(video);
    let span = |b: &BTreeMap<u64, _>| (*b.keys().next().unwrap(), *b.keys().next_back().unwrap());
    let (a_span, v_span) = (span(&a), span(&v));
    let start = a_span.0.max(v_span.0);
    let end = a_span.1.min(v_span.1);
    if start > end {
        return Err(TimelineError::EmptyOverlap {
            audio: a_span,
            video: v_span,
        });
    }
    SessionTimeline::new(
        resample(&a, start, end),
        resample(&v, start, end),
        SessionMeta::default(),
    )
}
