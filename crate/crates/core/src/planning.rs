//! Expected free energy, policy posterior, and action selection.
//!
//! For each step of a policy the belief is pushed through the transition
//! model, and the step scores
//!
//! ```text
//! G_tau = -E_{Q(o|pi)}[ KL[Q(s|o,pi) || Q(s|pi)] ] - E_{Q(o|pi)}[ ln P(o|C) ]
//! ```
//!
//! over the visibility modality. Later steps are conditioned on each possible
//! earlier outcome and weighted by its predictive probability, so the total
//! is an expectation over the full observation tree of the policy.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::categorical::{safe_ln, Categorical};
use crate::error::{Error, Result};
use crate::inference::{condition_object, predict, predictive_observation};
use crate::model::{BeliefState, GenerativeModel, Visibility};

/// A sequence of target locations, one per planning step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Policy {
    pub actions: Vec<usize>,
}

impl Policy {
    pub fn new(actions: Vec<usize>) -> Self {
        Self { actions }
    }

    pub fn first_action(&self) -> usize {
        self.actions[0]
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvaluation {
    pub policy: Policy,
    /// Expected free energy `G`, nats.
    pub efe: f64,
    pub info_gain: f64,
    pub expected_utility: f64,
    /// `(info_gain, expected_utility)` per planning step.
    pub per_step: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Highest posterior probability, lowest index on ties.
    #[default]
    Argmax,
    /// Draw from the policy posterior.
    Sample,
}

/// Every action sequence of length `horizon`, in lexicographic order.
pub fn enumerate_policies(num_locations: usize, horizon: usize) -> Vec<Policy> {
    let total = num_locations.pow(horizon as u32);
    (0..total)
        .map(|mut code| {
            let mut actions = vec![0; horizon];
            for slot in actions.iter_mut().rev() {
                *slot = code % num_locations;
                code /= num_locations;
            }
            Policy::new(actions)
        })
        .collect()
}

pub fn expected_free_energy(
    model: &GenerativeModel,
    belief: &BeliefState,
    policy: &Policy,
) -> Result<PolicyEvaluation> {
    model.check_belief(belief)?;
    if policy.len() != model.horizon() {
        return Err(Error::InvalidInput(format!(
            "policy has {} actions but the horizon is {}",
            policy.len(),
            model.horizon()
        )));
    }
    let log_c: Vec<f64> = model
        .preferences()
        .probs()
        .iter()
        .map(|c| safe_ln(*c))
        .collect();
    let mut per_step = vec![(0.0, 0.0); policy.len()];
    rollout(model, belief, &policy.actions, &log_c, 1.0, &mut per_step)?;

    let info_gain: f64 = per_step.iter().map(|s| s.0).sum();
    let expected_utility: f64 = per_step.iter().map(|s| s.1).sum();
    let efe = per_step.iter().map(|(ig, eu)| -ig - eu).sum();
    Ok(PolicyEvaluation {
        policy: policy.clone(),
        efe,
        info_gain,
        expected_utility,
        per_step,
    })
}

fn rollout(
    model: &GenerativeModel,
    belief: &BeliefState,
    actions: &[usize],
    log_c: &[f64],
    weight: f64,
    per_step: &mut [(f64, f64)],
) -> Result<()> {
    let predicted = predict(model, belief, actions[0])?;
    let outcomes = predictive_observation(model, &predicted)?;
    let mut info_gain = 0.0;
    for visibility in Visibility::ALL {
        let q = outcomes.get(visibility.index());
        if q <= 0.0 {
            continue;
        }
        let Some(object) = condition_object(model, &predicted, visibility) else {
            continue;
        };
        info_gain += q * object.kl_divergence(&predicted.object);
        if actions.len() > 1 {
            let next = BeliefState::new(predicted.agent.clone(), object);
            rollout(
                model,
                &next,
                &actions[1..],
                log_c,
                weight * q,
                &mut per_step[1..],
            )?;
        }
    }
    per_step[0].0 += weight * info_gain.max(0.0);
    per_step[0].1 += weight * outcomes.expectation(log_c);
    Ok(())
}

pub fn evaluate_policies(
    model: &GenerativeModel,
    belief: &BeliefState,
    policies: &[Policy],
) -> Result<Vec<PolicyEvaluation>> {
    policies
        .iter()
        .map(|policy| expected_free_energy(model, belief, policy))
        .collect()
}

/// `softmax(-precision * G)`.
pub fn policy_posterior(evaluations: &[PolicyEvaluation], precision: f64) -> Result<Categorical> {
    if evaluations.is_empty() {
        return Err(Error::InvalidInput("no policies to weigh".into()));
    }
    let neg_g: Vec<f64> = evaluations.iter().map(|e| -e.efe).collect();
    Categorical::softmax(&neg_g, precision)
}

/// Returns the index of the chosen policy.
pub fn select_policy<R: Rng + ?Sized>(
    posterior: &Categorical,
    mode: SelectionMode,
    rng: &mut R,
) -> Result<usize> {
    match mode {
        SelectionMode::Argmax => Ok(posterior.argmax()),
        SelectionMode::Sample => {
            let dist = WeightedIndex::new(posterior.probs())
                .map_err(|e| Error::InvalidInput(format!("cannot sample policy: {e}")))?;
            Ok(dist.sample(rng))
        }
    }
}

/// First action of the selected policy.
pub fn select_action<R: Rng + ?Sized>(
    posterior: &Categorical,
    policies: &[Policy],
    mode: SelectionMode,
    rng: &mut R,
) -> Result<usize> {
    if posterior.len() != policies.len() {
        return Err(Error::InvalidInput(format!(
            "posterior over {} policies but {} policies given",
            posterior.len(),
            policies.len()
        )));
    }
    let index = select_policy(posterior, mode, rng)?;
    Ok(policies[index].first_action())
}
