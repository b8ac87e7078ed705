//! Valence, arousal, and their placement on the emotion circumplex.
//!
//! Valence is the utility of what was just observed minus the utility the
//! agent expected before observing it. Arousal is the entropy of the
//! posterior belief. Both are rescaled to `[-1, 1]`, converted to polar
//! coordinates, and labeled by 45-degree sector:
//!
//! | angle (deg)     | label     |
//! |-----------------|-----------|
//! | [337.5, 22.5)   | happy     |
//! | [22.5, 67.5)    | excited   |
//! | [67.5, 112.5)   | alert     |
//! | [112.5, 157.5)  | angry     |
//! | [157.5, 202.5)  | sad       |
//! | [202.5, 247.5)  | depressed |
//! | [247.5, 292.5)  | calm      |
//! | [292.5, 337.5)  | relaxed   |
//!
//! Points closer to the origin than `neutral_radius` are neutral.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::categorical::{safe_ln, Categorical, LOG_FLOOR};
use crate::error::{Error, Result};
use crate::model::{BeliefState, GenerativeModel};

pub const DEFAULT_NEUTRAL_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectConfig {
    /// Raw valence that maps to `+/-1`, nats.
    pub valence_scale: f64,
    /// Raw arousal that maps to `+1`, nats.
    pub max_entropy: f64,
    pub neutral_radius: f64,
}

impl AffectConfig {
    pub fn new(valence_scale: f64, max_entropy: f64, neutral_radius: f64) -> Result<Self> {
        if !(valence_scale.is_finite() && valence_scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "valence scale must be positive, got {valence_scale}"
            )));
        }
        if !(max_entropy.is_finite() && max_entropy > 0.0) {
            return Err(Error::InvalidInput(format!(
                "max entropy must be positive, got {max_entropy}"
            )));
        }
        if !(neutral_radius > 0.0 && neutral_radius < 1.0) {
            return Err(Error::InvalidInput(format!(
                "neutral radius must lie in (0, 1), got {neutral_radius}"
            )));
        }
        Ok(Self {
            valence_scale,
            max_entropy,
            neutral_radius,
        })
    }

    /// Scales derived from a model: valence by the widest log-preference gap,
    /// arousal by the entropy of a uniform object belief.
    ///
    /// A flat preference vector yields zero valence everywhere; its scale
    /// falls back to 1 nat.
    pub fn for_model(model: &GenerativeModel, neutral_radius: f64) -> Result<Self> {
        let logs = model.preferences().probs().iter().map(|c| safe_ln(*c));
        let (lo, hi) = logs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
            (lo.min(l), hi.max(l))
        });
        let gap = (hi - lo).abs();
        let valence_scale = if gap > 0.0 { gap } else { 1.0 };
        let max_entropy = (model.object_states() as f64).ln();
        Self::new(valence_scale, max_entropy, neutral_radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmotionLabel {
    Happy,
    Excited,
    Alert,
    Angry,
    Sad,
    Depressed,
    Calm,
    Relaxed,
    Neutral,
}

impl EmotionLabel {
    /// Sector labels counter-clockwise from the positive valence axis.
    pub const SECTORS: [EmotionLabel; 8] = [
        EmotionLabel::Happy,
        EmotionLabel::Excited,
        EmotionLabel::Alert,
        EmotionLabel::Angry,
        EmotionLabel::Sad,
        EmotionLabel::Depressed,
        EmotionLabel::Calm,
        EmotionLabel::Relaxed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Happy => "happy",
            EmotionLabel::Excited => "excited",
            EmotionLabel::Alert => "alert",
            EmotionLabel::Angry => "angry",
            EmotionLabel::Sad => "sad",
            EmotionLabel::Depressed => "depressed",
            EmotionLabel::Calm => "calm",
            EmotionLabel::Relaxed => "relaxed",
            EmotionLabel::Neutral => "neutral",
        }
    }

    /// Angle at the middle of the label's sector; `None` for neutral.
    pub fn center_deg(self) -> Option<f64> {
        Self::SECTORS
            .iter()
            .position(|l| *l == self)
            .map(|i| i as f64 * 45.0)
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EmotionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::SECTORS
            .iter()
            .chain(std::iter::once(&EmotionLabel::Neutral))
            .find(|l| l.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown emotion label {s:?}")))
    }
}

/// One step's affective readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectSample {
    pub utility: f64,
    pub expected_utility: f64,
    pub valence_raw: f64,
    pub arousal_raw: f64,
    pub valence_norm: f64,
    pub arousal_norm: f64,
    pub radius: f64,
    pub angle_deg: f64,
    pub label: EmotionLabel,
    /// The observed outcome had zero preference and its log was floored.
    pub utility_floored: bool,
}

impl AffectSample {
    /// Builds a sample from the observed outcome, the predictive distribution
    /// held before observing it, and the posterior after.
    pub fn compute(
        outcome: usize,
        predictive: &Categorical,
        preferences: &Categorical,
        posterior: &BeliefState,
        config: &AffectConfig,
    ) -> Result<Self> {
        if outcome >= preferences.len() {
            return Err(Error::InvalidInput(format!(
                "outcome {outcome} outside {} preference entries",
                preferences.len()
            )));
        }
        let u = utility(outcome, preferences);
        let eu = expected_utility(predictive, preferences)?;
        Ok(Self::from_raw(
            u,
            eu,
            arousal(posterior),
            preferences.get(outcome) < LOG_FLOOR,
            config,
        ))
    }

    pub fn from_raw(
        utility: f64,
        expected_utility: f64,
        arousal_raw: f64,
        utility_floored: bool,
        config: &AffectConfig,
    ) -> Self {
        let valence_raw = valence(utility, expected_utility);
        let (valence_norm, arousal_norm) = normalize_affect(valence_raw, arousal_raw, config);
        let (radius, angle_deg) = to_polar(valence_norm, arousal_norm);
        Self {
            utility,
            expected_utility,
            valence_raw,
            arousal_raw,
            valence_norm,
            arousal_norm,
            radius,
            angle_deg,
            label: label_emotion(radius, angle_deg, config),
            utility_floored,
        }
    }
}

/// `ln P(o | C)` for the observed outcome index.
pub fn utility(outcome: usize, preferences: &Categorical) -> f64 {
    safe_ln(preferences.get(outcome))
}

/// `E_predictive[ln P(o | C)]`.
pub fn expected_utility(predictive: &Categorical, preferences: &Categorical) -> Result<f64> {
    if predictive.len() != preferences.len() {
        return Err(Error::InvalidInput(format!(
            "predictive has {} outcomes, preferences {}",
            predictive.len(),
            preferences.len()
        )));
    }
    let logs: Vec<f64> = preferences.probs().iter().map(|c| safe_ln(*c)).collect();
    Ok(predictive.expectation(&logs))
}

pub fn valence(utility: f64, expected_utility: f64) -> f64 {
    utility - expected_utility
}

/// Sum of per-factor posterior entropies, nats.
pub fn arousal(posterior: &BeliefState) -> f64 {
    posterior.agent.entropy() + posterior.object.entropy()
}

/// Maps raw valence by `valence_scale` and raw arousal affinely so that zero
/// entropy lands on -1 and `max_entropy` on +1; both clamped to `[-1, 1]`.
pub fn normalize_affect(valence_raw: f64, arousal_raw: f64, config: &AffectConfig) -> (f64, f64) {
    let v = (valence_raw / config.valence_scale).clamp(-1.0, 1.0);
    let a = (2.0 * arousal_raw / config.max_entropy - 1.0).clamp(-1.0, 1.0);
    (v, a)
}

/// `(radius, angle in degrees within [0, 360))`; the origin has angle 0.
pub fn to_polar(valence_norm: f64, arousal_norm: f64) -> (f64, f64) {
    let radius = valence_norm.hypot(arousal_norm);
    if radius == 0.0 {
        return (0.0, 0.0);
    }
    let mut angle = arousal_norm.atan2(valence_norm).to_degrees();
    if angle < 0.0 {
        angle += 360.0;
    }
    if angle >= 360.0 {
        angle = 0.0;
    }
    (radius, angle)
}

pub fn label_emotion(radius: f64, angle_deg: f64, config: &AffectConfig) -> EmotionLabel {
    if radius < config.neutral_radius {
        return EmotionLabel::Neutral;
    }
    let shifted = (angle_deg + 22.5).rem_euclid(360.0);
    let sector = ((shifted / 45.0).floor() as usize).min(7);
    EmotionLabel::SECTORS[sector]
}
