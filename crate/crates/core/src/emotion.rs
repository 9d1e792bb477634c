//! Emotion taxonomy: the seven categories, their arousal-valence quadrant,
//! and per-timestep score vectors.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of emotion categories.
pub const EMOTION_COUNT: usize = 7;

/// One of the seven recognized emotions. Declaration order is the canonical
/// ordering used for tie-breaking and for every file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emotion {
    Angry,
    Disgust,
    Fear,
    Happy,
    Neutral,
    Sad,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; EMOTION_COUNT] = [
        Emotion::Angry,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Happy,
        Emotion::Neutral,
        Emotion::Sad,
        Emotion::Surprise,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lowercase token used in every file format.
    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Angry => "angry",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Happy => "happy",
            Emotion::Neutral => "neutral",
            Emotion::Sad => "sad",
            Emotion::Surprise => "surprise",
        }
    }

    pub fn quadrant(self) -> QuadrantTag {
        use Arousal as A;
        use Valence as V;
        let (valence, arousal) = match self {
            Emotion::Happy | Emotion::Surprise => (V::Positive, A::High),
            Emotion::Angry | Emotion::Fear => (V::Negative, A::High),
            Emotion::Sad | Emotion::Disgust => (V::Negative, A::Low),
            Emotion::Neutral => (V::Neutral, A::Neutral),
        };
        QuadrantTag { valence, arousal }
    }

    /// Early-perception grouping: anger/disgust and fear/surprise are
    /// indistinguishable in the first phase of facial signalling. Metadata
    /// only; fusion never consults it.
    pub fn early_perception_group(self) -> Option<&'static str> {
        match self {
            Emotion::Angry | Emotion::Disgust => Some("anger-disgust"),
            Emotion::Fear | Emotion::Surprise => Some("fear-surprise"),
            Emotion::Happy => Some("happy"),
            Emotion::Sad => Some("sad"),
            Emotion::Neutral => None,
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown emotion label '{token}'")]
pub struct ParseEmotionError {
    pub token: String,
}

impl FromStr for Emotion {
    type Err = ParseEmotionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = s.trim().to_ascii_lowercase();
        let e = match token.as_str() {
            "angry" => Emotion::Angry,
            "disgust" => Emotion::Disgust,
            "fear" | "fearful" => Emotion::Fear,
            "happy" => Emotion::Happy,
            "neutral" => Emotion::Neutral,
            "sad" => Emotion::Sad,
            "surprise" => Emotion::Surprise,
            _ => return Err(ParseEmotionError { token: s.to_string() }),
        };
        Ok(e)
    }
}

impl Serialize for Emotion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Emotion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Valence {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arousal {
    Low,
    Neutral,
    High,
}

/// Quadrant of the arousal-valence plane an emotion belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantTag {
    pub valence: Valence,
    pub arousal: Arousal,
}

/// A fixed-size table holding one value per emotion, in canonical order.
///
/// Serializes as a JSON object keyed by the lowercase emotion names; all
/// seven keys are required when deserializing.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmotionMap<T>([T; EMOTION_COUNT]);

impl<T> EmotionMap<T> {
    pub fn from_array(values: [T; EMOTION_COUNT]) -> Self {
        Self(values)
    }

    pub fn from_fn(mut f: impl FnMut(Emotion) -> T) -> Self {
        Self(Emotion::ALL.map(&mut f))
    }

    pub fn as_array(&self) -> &[T; EMOTION_COUNT] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Emotion, &T)> {
        Emotion::ALL.into_iter().zip(self.0.iter())
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }

    pub fn map<U>(&self, mut f: impl FnMut(Emotion, &T) -> U) -> EmotionMap<U> {
        EmotionMap::from_fn(|e| f(e, &self.0[e.index()]))
    }
}

impl<T> Index<Emotion> for EmotionMap<T> {
    type Output = T;

    fn index(&self, e: Emotion) -> &T {
        &self.0[e.index()]
    }
}

impl<T> IndexMut<Emotion> for EmotionMap<T> {
    fn index_mut(&mut self, e: Emotion) -> &mut T {
        &mut self.0[e.index()]
    }
}

impl EmotionMap<f64> {
    /// Emotion with the largest value; ties go to the earliest emotion in
    /// canonical order.
    pub fn argmax(&self) -> Emotion {
        let mut best = Emotion::Angry;
        for (e, &v) in self.iter() {
            if v > self[best] {
                best = e;
            }
        }
        best
    }
}

impl<T: Serialize> Serialize for EmotionMap<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(EMOTION_COUNT))?;
        for (e, v) in self.iter() {
            map.serialize_entry(e.as_str(), v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for EmotionMap<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MapVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Deserialize<'de>> Visitor<'de> for MapVisitor<T> {
            type Value = EmotionMap<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object with one entry per emotion")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut slots: [Option<T>; EMOTION_COUNT] = Default::default();
                while let Some(key) = access.next_key::<String>()? {
                    let e: Emotion = key.parse().map_err(de::Error::custom)?;
                    if slots[e.index()].is_some() {
                        return Err(de::Error::custom(format!("duplicate emotion '{e}'")));
                    }
                    slots[e.index()] = Some(access.next_value()?);
                }
                let mut out = Vec::with_capacity(EMOTION_COUNT);
                for (e, slot) in Emotion::ALL.into_iter().zip(slots) {
                    out.push(slot.ok_or_else(|| de::Error::custom(format!("missing emotion '{e}'")))?);
                }
                let arr: [T; EMOTION_COUNT] = out.try_into().map_err(|_| de::Error::custom("wrong emotion count"))?;
                Ok(EmotionMap(arr))
            }
        }

        deserializer.deserialize_map(MapVisitor(std::marker::PhantomData))
    }
}

/// Per-emotion scores in [0,1] at one timestep. Scores are independent and
/// are not normalized to sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "EmotionMap<f64>", into = "EmotionMap<f64>")]
pub struct EmotionVector(EmotionMap<f64>);

#[derive(Debug, Clone, PartialEq, Error)]
#[error("score for {emotion} is not finite")]
pub struct NonFiniteScore {
    pub emotion: Emotion,
}

impl EmotionVector {
    pub fn zeros() -> Self {
        Self::default()
    }

    /// Builds a vector from raw scores, clamping each into [0,1]. Returns the
    /// vector and the emotions whose score had to be clamped.
    pub fn clamped(scores: EmotionMap<f64>) -> Result<(Self, Vec<Emotion>), NonFiniteScore> {
        let mut clamped = Vec::new();
        let mut out = scores;
        for e in Emotion::ALL {
            let v = scores[e];
            if !v.is_finite() {
                return Err(NonFiniteScore { emotion: e });
            }
            let c = v.clamp(0.0, 1.0);
            if c != v {
                clamped.push(e);
            }
            out[e] = c;
        }
        Ok((Self(out), clamped))
    }

    /// One-hot vector for `e`, scaled by `weight` (clamped into [0,1]).
    pub fn one_hot(e: Emotion, weight: f64) -> Self {
        let mut m = EmotionMap::default();
        m[e] = if weight.is_finite() {
            weight.clamp(0.0, 1.0)
        } else {
            0.0
        };
        Self(m)
    }

    /// Parses `label` (case-insensitive, "fearful" accepted) into a one-hot
    /// vector scaled by `weight`.
    pub fn from_label(label: &str, weight: f64) -> Result<Self, ParseEmotionError> {
        Ok(Self::one_hot(label.parse()?, weight))
    }

    pub fn score(&self, e: Emotion) -> f64 {
        self.0[e]
    }

    pub fn scores(&self) -> &EmotionMap<f64> {
        &self.0
    }

    /// Emotion with the maximal score, ties broken by canonical order.
    pub fn dominant(&self) -> Emotion {
        self.0.argmax()
    }
}

impl TryFrom<EmotionMap<f64>> for EmotionVector {
    type Error = String;

    fn try_from(m: EmotionMap<f64>) -> Result<Self, Self::Error> {
        for (e, &v) in m.iter() {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("score for {e} outside [0,1]: {v}"));
            }
        }
        Ok(Self(m))
    }
}

impl From<EmotionVector> for EmotionMap<f64> {
    fn from(v: EmotionVector) -> Self {
        v.0
    }
}

impl Index<Emotion> for EmotionVector {
    type Output = f64;

    fn index(&self, e: Emotion) -> &f64 {
        &self.0[e]
    }
}
