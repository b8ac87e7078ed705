//! The agent's generative model of the search task.
//!
//! Two hidden state factors: the agent's own location and the object's
//! location (optionally with an extra "not here" state). Two outcome
//! modalities: the observed location (identity likelihood) and whether the
//! object is visible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::categorical::Categorical;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Visible,
    Invisible,
}

impl Visibility {
    pub const ALL: [Visibility; 2] = [Visibility::Visible, Visibility::Invisible];

    pub fn index(self) -> usize {
        match self {
            Visibility::Visible => 0,
            Visibility::Invisible => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Visible => "visible",
            Visibility::Invisible => "invisible",
        }
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub location: usize,
    pub visibility: Visibility,
}

impl Observation {
    pub fn new(location: usize, visibility: Visibility) -> Self {
        Self {
            location,
            visibility,
        }
    }
}

/// Per-factor posterior marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefState {
    pub agent: Categorical,
    pub object: Categorical,
}

impl BeliefState {
    pub fn new(agent: Categorical, object: Categorical) -> Self {
        Self { agent, object }
    }
}

/// Everything needed to build the search model; see [`GenerativeModel::search`].
#[derive(Debug, Clone)]
pub struct SearchModelSpec<'a> {
    pub graph: &'a Graph,
    /// Probability of seeing the object when standing on it.
    pub visibility_prob: f64,
    /// Adds an object state that emits "invisible" everywhere.
    pub with_not_here: bool,
    /// Preference over `[visible, invisible]`.
    pub preferences: Categorical,
    pub prior_agent: Categorical,
    pub prior_object: Categorical,
    pub horizon: usize,
    pub policy_precision: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerativeModel {
    num_locations: usize,
    object_states: usize,
    /// `[outcome][agent]`, the identity.
    likelihood_location: Vec<Vec<f64>>,
    /// `[agent][object]` -> `[P(visible), P(invisible)]`.
    likelihood_visibility: Vec<Vec<[f64; 2]>>,
    /// `[action][from]` -> distribution over the next agent location.
    transition_agent: Vec<Vec<Categorical>>,
    /// `[from][to]`, the identity.
    transition_object: Vec<Vec<f64>>,
    preference_visibility: Categorical,
    prior_agent: Categorical,
    prior_object: Categorical,
    horizon: usize,
    policy_precision: f64,
}

impl GenerativeModel {
    pub fn search(spec: SearchModelSpec<'_>) -> Result<Self> {
        let n = spec.graph.num_locations();
        let object_states = if spec.with_not_here { n + 1 } else { n };
        let p = spec.visibility_prob;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "visibility probability must lie in (0, 1], got {p}"
            )));
        }
        if spec.preferences.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "preferences must cover [visible, invisible], got {} entries",
                spec.preferences.len()
            )));
        }
        if spec.prior_agent.len() != n {
            return Err(Error::InvalidInput(format!(
                "agent prior has {} entries for {n} locations",
                spec.prior_agent.len()
            )));
        }
        if spec.prior_object.len() != object_states {
            return Err(Error::InvalidInput(format!(
                "object prior has {} entries for {object_states} object states",
                spec.prior_object.len()
            )));
        }
        if spec.horizon == 0 {
            return Err(Error::InvalidInput("horizon must be at least 1".into()));
        }
        if !(spec.policy_precision.is_finite() && spec.policy_precision > 0.0) {
            return Err(Error::InvalidInput(format!(
                "policy precision must be positive, got {}",
                spec.policy_precision
            )));
        }

        let likelihood_location = identity(n);
        let likelihood_visibility = (0..n)
            .map(|agent| {
                (0..object_states)
                    .map(|object| {
                        let visible = if object == agent { p } else { 0.0 };
                        [visible, 1.0 - visible]
                    })
                    .collect()
            })
            .collect();
        let transition_agent = (0..n)
            .map(|action| {
                (0..n)
                    .map(|from| {
                        let to = if spec.graph.can_move(from, action) {
                            action
                        } else {
                            from
                        };
                        Categorical::delta(n, to)
                    })
                    .collect()
            })
            .collect();

        Ok(Self {
            num_locations: n,
            object_states,
            likelihood_location,
            likelihood_visibility,
            transition_agent,
            transition_object: identity(object_states),
            preference_visibility: spec.preferences,
            prior_agent: spec.prior_agent,
            prior_object: spec.prior_object,
            horizon: spec.horizon,
            policy_precision: spec.policy_precision,
        })
    }

    pub fn num_locations(&self) -> usize {
        self.num_locations
    }

    pub fn object_states(&self) -> usize {
        self.object_states
    }

    /// Index of the "not here" object state, when the model has one.
    pub fn not_here_state(&self) -> Option<usize> {
        (self.object_states > self.num_locations).then_some(self.num_locations)
    }

    /// `P(location outcome | agent location)`.
    pub fn location_likelihood(&self, outcome: usize, agent: usize) -> f64 {
        self.likelihood_location[outcome][agent]
    }

    /// `P(visibility | agent location, object state)`.
    pub fn visibility_likelihood(
        &self,
        visibility: Visibility,
        agent: usize,
        object: usize,
    ) -> f64 {
        self.likelihood_visibility[agent][object][visibility.index()]
    }

    /// `P(next agent location | current location, action)`.
    pub fn agent_transition(&self, action: usize, from: usize) -> &Categorical {
        &self.transition_agent[action][from]
    }

    /// `P(next object state | current object state)`.
    pub fn object_transition(&self, from: usize, to: usize) -> f64 {
        self.transition_object[from][to]
    }

    pub fn preferences(&self) -> &Categorical {
        &self.preference_visibility
    }

    pub fn prior_agent(&self) -> &Categorical {
        &self.prior_agent
    }

    pub fn prior_object(&self) -> &Categorical {
        &self.prior_object
    }

    pub fn initial_belief(&self) -> BeliefState {
        BeliefState::new(self.prior_agent.clone(), self.prior_object.clone())
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn policy_precision(&self) -> f64 {
        self.policy_precision
    }

    /// Copy of the model with a different planning depth.
    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidInput("horizon must be at least 1".into()));
        }
        self.horizon = horizon;
        Ok(self)
    }

    /// Checks that a belief has one entry per state in each factor.
    pub fn check_belief(&self, belief: &BeliefState) -> Result<()> {
        if belief.agent.len() != self.num_locations || belief.object.len() != self.object_states {
            return Err(Error::InvalidInput(format!(
                "belief dimensions ({}, {}) do not match the model ({}, {})",
                belief.agent.len(),
                belief.object.len(),
                self.num_locations,
                self.object_states
            )));
        }
        Ok(())
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
