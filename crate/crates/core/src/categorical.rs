//! Normalized probability vectors over finite outcome sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities are floored at this value inside logarithms only.
pub const LOG_FLOOR: f64 = 1e-16;

/// Tolerance on the sum of a stored distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `ln(max(p, LOG_FLOOR))`.
#[inline]
pub fn safe_ln(p: f64) -> f64 {
    p.max(LOG_FLOOR).ln()
}

/// A probability vector: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Categorical {
    probs: Vec<f64>,
}

impl Categorical {
    /// Divides non-negative weights by their sum.
    pub fn normalize(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::DegenerateDistribution("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::DegenerateDistribution(format!(
                "weight {w} is negative or not finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateDistribution("all weights are zero".into()));
        }
        Ok(Self {
            probs: weights.iter().map(|w| w / total).collect(),
        })
    }

    /// Wraps an already-normalized vector, checking the invariants.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::DegenerateDistribution("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::DegenerateDistribution(format!(
                "probability {p} is negative or not finite"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::DegenerateDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one outcome");
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn delta(n: usize, index: usize) -> Self {
        assert!(
            index < n,
            "delta index {index} out of range for {n} outcomes"
        );
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Self { probs }
    }

    /// `exp(precision * v_i) / sum_j exp(precision * v_j)`, with max-subtraction.
    pub fn softmax(values: &[f64], precision: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("softmax of an empty vector".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "softmax input contains NaN or infinity".into(),
            ));
        }
        if !(precision.is_finite() && precision > 0.0) {
            return Err(Error::InvalidInput(format!(
                "softmax precision must be positive, got {precision}"
            )));
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = values
            .iter()
            .map(|v| (precision * (v - max)).exp())
            .collect();
        let total: f64 = exps.iter().sum();
        Ok(Self {
            probs: exps.into_iter().map(|e| e / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|p| **p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }

    /// `KL[self || other]` in nats; `other` is floored inside the log.
    pub fn kl_divergence(&self, other: &Categorical) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.probs
            .iter()
            .zip(&other.probs)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, q)| p * (p.ln() - safe_ln(*q)))
            .sum()
    }

    /// `sum_i self_i * values_i`.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(self.len(), values.len());
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl TryFrom<Vec<f64>> for Categorical {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Categorical::from_probs(probs)
    }
}

impl From<Categorical> for Vec<f64> {
    fn from(c: Categorical) -> Self {
        c.probs
    }
}

impl AsRef<[f64]> for Categorical {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}
