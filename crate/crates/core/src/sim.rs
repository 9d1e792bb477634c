//! Seeded synthetic sessions for the three game archetypes.
//!
//! A latent dominant emotion evolves second by second: with the archetype's
//! switch probability a new dominant is drawn from its base weights. The
//! audio stream labels the latent state (occasionally confused with a fresh
//! draw); the video stream is a softened one-hot of the latent state plus
//! bounded uniform noise.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::emotion::{Emotion, EmotionMap, EmotionVector};
use crate::timeline::{write_video_csv, TimelinePoint, AUDIO_HEADER};

/// Video score of the latent dominant emotion before noise.
const VIDEO_PEAK: f64 = 0.7;
/// Video score of every other emotion before noise.
const VIDEO_FLOOR: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("duration must be at least 2 seconds, got {0}")]
    DurationTooShort(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Archetype {
    Fight,
    Racing,
    Logic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchetypeParams {
    pub base_weights: EmotionMap<f64>,
    pub switch_probability: f64,
    /// Half-width of the uniform noise added to every video score.
    pub video_noise: f64,
    /// Chance that the audio label is an independent draw instead of the
    /// latent state.
    pub audio_confusion: f64,
    /// Emotion guaranteed to be the latent state in at least the given
    /// percentage of seconds.
    pub anchor: Option<(Emotion, u32)>,
}

fn weights(pairs: &[(Emotion, f64)]) -> EmotionMap<f64> {
    let mut m = EmotionMap::default();
    for &(e, w) in pairs {
        m[e] = w;
    }
    m
}

impl Archetype {
    pub const ALL: [Archetype; 3] = [Archetype::Fight, Archetype::Racing, Archetype::Logic];

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::Fight => "fight",
            Archetype::Racing => "racing",
            Archetype::Logic => "logic",
        }
    }

    pub fn params(self) -> ArchetypeParams {
        use Emotion::*;
        match self {
            Archetype::Fight => ArchetypeParams {
                base_weights: weights(&[
                    (Sad, 0.5),
                    (Happy, 0.16),
                    (Neutral, 0.14),
                    (Fear, 0.11),
                    (Disgust, 0.06),
                    (Angry, 0.03),
                ]),
                switch_probability: 0.45,
                video_noise: 0.15,
                audio_confusion: 0.1,
                anchor: None,
            },
            Archetype::Racing => ArchetypeParams {
                base_weights: weights(&[
                    (Sad, 0.35),
                    (Neutral, 0.25),
                    (Fear, 0.2),
                    (Happy, 0.12),
                    (Disgust, 0.08),
                ]),
                switch_probability: 0.3,
                video_noise: 0.1,
                audio_confusion: 0.1,
                anchor: None,
            },
            Archetype::Logic => ArchetypeParams {
                base_weights: weights(&[
                    (Neutral, 0.8),
                    (Happy, 0.06),
                    (Sad, 0.05),
                    (Disgust, 0.04),
                    (Angry, 0.03),
                    (Fear, 0.01),
                    (Surprise, 0.01),
                ]),
                switch_probability: 0.15,
                video_noise: 0.05,
                audio_confusion: 0.0,
                anchor: Some((Neutral, 70)),
            },
        }
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Archetype {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fight" => Ok(Self::Fight),
            "racing" => Ok(Self::Racing),
            "logic" => Ok(Self::Logic),
            other => Err(format!("unknown archetype '{other}' (expected fight|racing|logic)")),
        }
    }
}

/// Generated audio and video CSV streams.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSession {
    pub audio_csv: Vec<u8>,
    pub video_csv: Vec<u8>,
}

pub fn simulate(archetype: Archetype, duration_s: u32, seed: u64) -> Result<SimulatedSession, SimError> {
    if duration_s < 2 {
        return Err(SimError::DurationTooShort(duration_s));
    }
    let p = archetype.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = WeightedIndex::new(p.base_weights.values()).expect("archetype weights are valid");

    let n = duration_s as usize;
    // seconds that may be spent away from the anchor emotion
    let budget = p
        .anchor
        .map(|(_, pct)| n - (n * pct as usize).div_ceil(100))
        .unwrap_or(n);
    let mut away = 0;
    let mut constrain = |e: Emotion| match p.anchor {
        Some((anchor, _)) if e != anchor => {
            if away < budget {
                away += 1;
                e
            } else {
                anchor
            }
        }
        _ => e,
    };

    let mut audio = AUDIO_HEADER.join(",");
    audio.push('\n');
    let mut video = Vec::with_capacity(n);
    let mut latent = Emotion::ALL[draw.sample(&mut rng)];
    for t in 0..n {
        if t > 0 && rng.gen_bool(p.switch_probability) {
            latent = Emotion::ALL[draw.sample(&mut rng)];
        }
        latent = constrain(latent);

        let label = if p.audio_confusion > 0.0 && rng.gen_bool(p.audio_confusion) {
            Emotion::ALL[draw.sample(&mut rng)]
        } else {
            latent
        };
        audio.push_str(&format!("{t},{label}\n"));

        let scores = EmotionMap::from_fn(|e| {
            let base = if e == latent { VIDEO_PEAK } else { VIDEO_FLOOR };
            let noisy = base + rng.gen_range(-p.video_noise..=p.video_noise);
            // 4 decimals keeps the files readable
            (noisy.clamp(0.0, 1.0) * 1e4).round() / 1e4
        });
        let v = EmotionVector::clamped(scores).expect("finite scores").0;
        video.push(TimelinePoint::new(t as f64, v));
    }

    Ok(SimulatedSession {
        audio_csv: audio.into_bytes(),
        video_csv: write_video_csv(&video),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeline::{parse_audio_labels, parse_video_csv};

    fn dominants(bytes: &[u8], audio: bool) -> Vec<Emotion> {
        let parsed = if audio {
            parse_audio_labels(bytes).unwrap()
        } else {
            parse_video_csv(bytes).unwrap()
        };
        assert!(parsed.diagnostics.is_empty());
        parsed.points.iter().map(|p| p.v.dominant()).collect()
    }

    #[test]
    fn rejects_short_sessions() {
        assert_eq!(simulate(Archetype::Fight, 1, 0), Err(SimError::DurationTooShort(1)));
        assert!(simulate(Archetype::Fight, 2, 0).is_ok());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = simulate(Archetype::Fight, 60, 42).unwrap();
        let b = simulate(Archetype::Fight, 60, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, simulate(Archetype::Fight, 60, 43).unwrap());
    }

    #[test]
    fn logic_is_mostly_neutral_for_any_seed() {
        for seed in 0..200 {
            for duration in [2, 3, 10, 37, 600] {
                let s = simulate(Archetype::Logic, duration, seed).unwrap();
                for audio in [true, false] {
                    let d = dominants(if audio { &s.audio_csv } else { &s.video_csv }, audio);
                    let neutral = d.iter().filter(|&&e| e == Emotion::Neutral).count();
                    assert!(neutral * 100 >= 70 * d.len(), "seed {seed} duration {duration}");
                }
            }
        }
    }

    #[test]
    fn video_follows_latent_state() {
        // noise never flips the video dominant, so audio and video agree
        // whenever the audio label was not confused
        let s = simulate(Archetype::Logic, 300, 9).unwrap();
        assert_eq!(dominants(&s.audio_csv, true), dominants(&s.video_csv, false));
    }

    #[test]
    fn fight_is_varied() {
        let p = Archetype::Fight.params();
        assert!(p.switch_probability >= 0.3);
        let s = simulate(Archetype::Fight, 600, 1).unwrap();
        let d = dominants(&s.video_csv, false);
        let distinct: std::collections::HashSet<_> = d.iter().collect();
        assert!(distinct.len() >= 4);
    }

    #[test]
    fn params_are_well_formed() {
        for a in Archetype::ALL {
            let p = a.params();
            assert!(p.base_weights.values().all(|&w| w >= 0.0));
            assert!((0.0..=1.0).contains(&p.switch_probability));
            assert!((0.0..=1.0).contains(&p.audio_confusion));
            assert!(VIDEO_PEAK - p.video_noise > VIDEO_FLOOR + p.video_noise);
            assert_eq!(a.as_str().parse::<Archetype>().unwrap(), a);
        }
        let logic = Archetype::Logic.params().switch_probability;
        let racing = Archetype::Racing.params().switch_probability;
        let fight = Archetype::Fight.params().switch_probability;
        assert!(logic < racing && racing < fight);
    }
}
