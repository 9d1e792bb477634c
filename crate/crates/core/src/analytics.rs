//! Session analytics: per-emotion statistics, prevailing emotion, emotional
//! stability and diversity, and the JSON session report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emotion::{Emotion, EmotionMap};
use crate::fusion::FusedTimeline;
use crate::fuzzy::InferenceSystem;
use crate::timeline::SessionTimeline;

/// Largest possible standard deviation of a series bounded in [0,100].
pub const MAX_PERCENT_SD: f64 = 50.0;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("series is empty")]
    EmptySeries,
    #[error("need at least {needed} timesteps, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("session and fused timestamps differ: {0}")]
    TimestampMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesStats {
    pub mean: f64,
    pub median: f64,
    /// Population variance (divides by N).
    pub variance: f64,
    pub sd: f64,
}

pub type EmotionStats = EmotionMap<SeriesStats>;

pub fn series_stats(values: &[f64]) -> Result<SeriesStats, AnalyticsError> {
    if values.is_empty() {
        return Err(AnalyticsError::EmptySeries);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;

    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    // keep the mean inside [min, max] despite rounding
    let mean = mean.clamp(sorted[0], sorted[sorted.len() - 1]);

    Ok(SeriesStats {
        mean,
        median,
        variance,
        sd: variance.sqrt(),
    })
}

fn stats_by_emotion(series: impl Fn(Emotion) -> Vec<f64>) -> Result<EmotionStats, AnalyticsError> {
    let mut out = EmotionMap::from_fn(|_| None);
    for e in Emotion::ALL {
        out[e] = Some(series_stats(&series(e))?);
    }
    Ok(out.map(|_, s| s.expect("filled above")))
}

/// Statistics of the raw video scores, in [0,1] units.
pub fn video_stats(session: &SessionTimeline) -> Result<EmotionStats, AnalyticsError> {
    stats_by_emotion(|e| session.video().iter().map(|p| p.v[e]).collect())
}

/// Statistics of the fused intensities, in percent.
pub fn fused_stats(fused: &FusedTimeline) -> Result<EmotionStats, AnalyticsError> {
    stats_by_emotion(|e| fused.series(e))
}

/// Most frequent per-step dominant emotion. Ties go to the earliest emotion
/// in canonical order, both within a step and across the final count.
pub fn prevailing_emotion<'a>(steps: impl IntoIterator<Item = &'a EmotionMap<f64>>) -> Result<Emotion, AnalyticsError> {
    let mut counts = EmotionMap::<usize>::default();
    let mut total = 0;
    for scores in steps {
        counts[scores.argmax()] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(AnalyticsError::EmptySeries);
    }
    let mut best = Emotion::Angry;
    for (e, &c) in counts.iter() {
        if c > counts[best] {
            best = e;
        }
    }
    Ok(best)
}

/// `1 - mean(SD of each emotion's fused series) / 50`, clamped to [0,1].
pub fn stability(fused: &FusedTimeline) -> Result<f64, AnalyticsError> {
    if fused.len() < 2 {
        return Err(AnalyticsError::TooShort {
            needed: 2,
            got: fused.len(),
        });
    }
    let mut total_sd = 0.0;
    for e in Emotion::ALL {
        total_sd += series_stats(&fused.series(e))?.sd;
    }
    let instability = total_sd / Emotion::ALL.len() as f64;
    Ok((1.0 - instability / MAX_PERCENT_SD).clamp(0.0, 1.0))
}

/// Which session-level value of each fused series is fuzzified for diversity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiversityMode {
    #[default]
    Mean,
    Peak,
}

impl std::str::FromStr for DiversityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(Self::Mean),
            "peak" => Ok(Self::Peak),
            other => Err(format!("unknown diversity mode '{other}' (expected mean|peak)")),
        }
    }
}

/// Number of emotions whose session-level fused intensity fuzzifies to a set
/// above the lowest one (Medium or High under the default partition) on the
/// system's first input variable. Argmax ties resolve toward the higher set.
pub fn diversity(fused: &FusedTimeline, system: &InferenceSystem, mode: DiversityMode) -> Result<u8, AnalyticsError> {
    if fused.is_empty() {
        return Err(AnalyticsError::EmptySeries);
    }
    let variable = &system.inputs()[0];
    let mut count = 0;
    for e in Emotion::ALL {
        let series = fused.series(e);
        let level = match mode {
            DiversityMode::Mean => series.iter().sum::<f64>() / series.len() as f64,
            DiversityMode::Peak => series.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        };
        if variable.fuzzify(level).argmax() > 0 {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prevailing {
    pub audio: Emotion,
    pub video: Emotion,
    pub fused: Emotion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionReport {
    pub game: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participant: Option<String>,
    pub prevailing: Prevailing,
    pub stats_video: EmotionStats,
    pub stats_fused: EmotionStats,
    pub stability: f64,
    pub diversity: u8,
    pub system_fingerprint: String,
}

impl SessionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn build_report(
    session: &SessionTimeline,
    fused: &FusedTimeline,
    system: &InferenceSystem,
    mode: DiversityMode,
) -> Result<SessionReport, AnalyticsError> {
    let session_t: Vec<u64> = session.times().collect();
    let fused_t: Vec<u64> = fused.points().iter().map(|p| p.t).collect();
    if session_t != fused_t {
        return Err(AnalyticsError::TimestampMismatch(format!(
            "{} session steps vs {} fused steps",
            session_t.len(),
            fused_t.len()
        )));
    }
    let stability = stability(fused)?;
    Ok(SessionReport {
        game: session.meta.game.clone(),
        participant: session.meta.participant.clone(),
        prevailing: Prevailing {
            audio: prevailing_emotion(session.audio().iter().map(|p| p.v.scores()))?,
            video: prevailing_emotion(session.video().iter().map(|p| p.v.scores()))?,
            fused: prevailing_emotion(fused.points().iter().map(|p| &p.intensity))?,
        },
        stats_video: video_stats(session)?,
        stats_fused: fused_stats(fused)?,
        stability,
        diversity: diversity(fused, system, mode)?,
        system_fingerprint: fused.system_fingerprint().to_string(),
    })
}
