//! Per-timestep, per-emotion fuzzy fusion of aligned audio and video scores.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emotion::{Emotion, EmotionMap, EmotionVector};
use crate::fuzzy::{FuzzyError, InferenceSystem};
use crate::timeline::{SessionTimeline, VIDEO_HEADER};

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("session has no timesteps")]
    EmptySession,
    #[error("t={t}, {emotion}: {source}")]
    Step {
        t: u64,
        emotion: Emotion,
        source: FuzzyError,
    },
    #[error("invalid fused timeline: {0}")]
    Invalid(String),
}

/// Overall intensity (percent) per emotion at one second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusedPoint {
    pub t: u64,
    pub intensity: EmotionMap<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusedTimeline {
    points: Vec<FusedPoint>,
    system_fingerprint: String,
}

impl FusedTimeline {
    /// Requires strictly increasing `t` and every intensity within [0,100].
    pub fn new(points: Vec<FusedPoint>, system_fingerprint: impl Into<String>) -> Result<Self, FusionError> {
        if points.is_empty() {
            return Err(FusionError::EmptySession);
        }
        for (i, p) in points.iter().enumerate() {
            if i > 0 && p.t <= points[i - 1].t {
                return Err(FusionError::Invalid(format!("t={} not increasing", p.t)));
            }
            if let Some((e, v)) = p.intensity.iter().find(|(_, v)| !(0.0..=100.0).contains(*v)) {
                return Err(FusionError::Invalid(format!("t={}: {e}={v} outside [0,100]", p.t)));
            }
        }
        Ok(Self {
            points,
            system_fingerprint: system_fingerprint.into(),
        })
    }

    pub fn points(&self) -> &[FusedPoint] {
        &self.points
    }

    pub fn system_fingerprint(&self) -> &str {
        &self.system_fingerprint
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The fused series of one emotion, in time order.
    pub fn series(&self, e: Emotion) -> Vec<f64> {
        self.points.iter().map(|p| p.intensity[e]).collect()
    }

    /// CSV with the video header and percent values to 2 decimals.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut out = VIDEO_HEADER.join(",");
        out.push('\n');
        for p in &self.points {
            out.push_str(&p.t.to_string());
            for v in p.intensity.values() {
                out.push_str(&format!(",{v:.2}"));
            }
            out.push('\n');
        }
        out.into_bytes()
    }
}

/// Fuses each emotion independently: audio and video scores are scaled to
/// percent and passed through the inference system.
pub fn fuse_timestep(
    system: &InferenceSystem,
    audio: &EmotionVector,
    video: &EmotionVector,
) -> Result<EmotionMap<f64>, (Emotion, FuzzyError)> {
    let mut out = EmotionMap::default();
    for e in Emotion::ALL {
        out[e] = system
            .fuse_intensity(100.0 * audio[e], 100.0 * video[e])
            .map_err(|err| (e, err))?;
    }
    Ok(out)
}

/// Fuses every timestep of an aligned session. Steps are evaluated in
/// parallel; output order always follows the session's time axis.
pub fn fuse_session(system: &InferenceSystem, session: &SessionTimeline) -> Result<FusedTimeline, FusionError> {
    if session.is_empty() {
        return Err(FusionError::EmptySession);
    }
    let steps: Vec<_> = session.steps().collect();
    let results: Vec<_> = steps
        .par_iter()
        .map(|&(t, a, v)| {
            fuse_timestep(system, a, v)
                .map(|intensity| FusedPoint { t, intensity })
                .map_err(|(emotion, source)| FusionError::Step { t, emotion, source })
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    FusedTimeline::new(points, system.fingerprint())
}
