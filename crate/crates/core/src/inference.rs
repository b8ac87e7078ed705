//! Exact belief filtering.
//!
//! The agent's location is observed through an identity likelihood, so its
//! posterior is always a delta and the factorized update below equals exact
//! Bayes over the joint (agent, object) state space.

use crate::categorical::Categorical;
use crate::error::{Error, Result};
use crate::model::{BeliefState, GenerativeModel, Observation, Visibility};

/// Pushes the belief one step through the transition model for `action`.
pub fn predict(
    model: &GenerativeModel,
    belief: &BeliefState,
    action: usize,
) -> Result<BeliefState> {
    model.check_belief(belief)?;
    let n = model.num_locations();
    if action >= n {
        return Err(Error::InvalidInput(format!(
            "action {action} is not a location in 0..{n}"
        )));
    }
    let mut agent = vec![0.0; n];
    for (from, mass) in belief.agent.probs().iter().enumerate() {
        if *mass == 0.0 {
            continue;
        }
        for (to, p) in model
            .agent_transition(action, from)
            .probs()
            .iter()
            .enumerate()
        {
            agent[to] += mass * p;
        }
    }
    let k = model.object_states();
    let mut object = vec![0.0; k];
    for (from, mass) in belief.object.probs().iter().enumerate() {
        if *mass == 0.0 {
            continue;
        }
        for (to, slot) in object.iter_mut().enumerate() {
            *slot += mass * model.object_transition(from, to);
        }
    }
    Ok(BeliefState::new(
        Categorical::normalize(&agent)?,
        Categorical::normalize(&object)?,
    ))
}

/// `P(visibility | object state)` with the agent factor marginalized out.
fn visibility_column(
    model: &GenerativeModel,
    agent: &Categorical,
    visibility: Visibility,
) -> Vec<f64> {
    (0..model.object_states())
        .map(|object| {
            agent
                .probs()
                .iter()
                .enumerate()
                .filter(|(_, a)| **a > 0.0)
                .map(|(i, a)| a * model.visibility_likelihood(visibility, i, object))
                .sum()
        })
        .collect()
}

/// Predicted distribution over `[visible, invisible]`.
pub fn predictive_observation(
    model: &GenerativeModel,
    belief: &BeliefState,
) -> Result<Categorical> {
    model.check_belief(belief)?;
    let visible: f64 = visibility_column(model, &belief.agent, Visibility::Visible)
        .iter()
        .zip(belief.object.probs())
        .map(|(l, q)| l * q)
        .sum();
    let visible = visible.clamp(0.0, 1.0);
    Categorical::from_probs(vec![visible, 1.0 - visible])
}

/// Object-factor posterior after a visibility outcome, with the agent factor
/// held at `belief.agent`. `None` when the outcome has zero probability.
pub fn condition_object(
    model: &GenerativeModel,
    belief: &BeliefState,
    visibility: Visibility,
) -> Option<Categorical> {
    let column = visibility_column(model, &belief.agent, visibility);
    let weights: Vec<f64> = column
        .iter()
        .zip(belief.object.probs())
        .map(|(l, q)| l * q)
        .collect();
    Categorical::normalize(&weights).ok()
}

/// Exact posterior after `observation`, given the predicted (pre-update) belief.
pub fn update_beliefs(
    model: &GenerativeModel,
    predicted: &BeliefState,
    observation: Observation,
) -> Result<BeliefState> {
    model.check_belief(predicted)?;
    let n = model.num_locations();
    if observation.location >= n {
        return Err(Error::InvalidInput(format!(
            "observed location {} is not in 0..{n}",
            observation.location
        )));
    }
    let impossible = || Error::ImpossibleObservation {
        location: observation.location,
        visibility: observation.visibility.as_str(),
    };
    let agent_weights: Vec<f64> = predicted
        .agent
        .probs()
        .iter()
        .enumerate()
        .map(|(i, q)| q * model.location_likelihood(observation.location, i))
        .collect();
    let agent = Categorical::normalize(&agent_weights).map_err(|_| impossible())?;
    let conditioned = BeliefState::new(agent, predicted.object.clone());
    let object =
        condition_object(model, &conditioned, observation.visibility).ok_or_else(impossible)?;
    Ok(BeliefState::new(conditioned.agent, object))
}

/// Marginal likelihood `P(o)` of an observation under a predicted belief.
pub fn evidence(
    model: &GenerativeModel,
    predicted: &BeliefState,
    observation: Observation,
) -> Result<f64> {
    model.check_belief(predicted)?;
    let mut total = 0.0;
    for (i, a) in predicted.agent.probs().iter().enumerate() {
        let loc = model.location_likelihood(observation.location, i);
        if *a == 0.0 || loc == 0.0 {
            continue;
        }
        for (j, q) in predicted.object.probs().iter().enumerate() {
            total += a * q * loc * model.visibility_likelihood(observation.visibility, i, j);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::model::SearchModelSpec;

    fn model_on(graph: &Graph, object_states: usize) -> GenerativeModel {
        GenerativeModel::search(SearchModelSpec {
            graph,
            visibility_prob: 0.95,
            with_not_here: object_states > graph.num_locations(),
            preferences: Categorical::from_probs(vec![0.99, 0.01]).unwrap(),
            prior_agent: Categorical::delta(graph.num_locations(), 0),
            prior_object: Categorical::uniform(object_states),
            horizon: 2,
            policy_precision: 1.0,
        })
        .unwrap()
    }

    #[test]
    fn predict_moves_along_edges_only() {
        let g = Graph::default_world();
        let m = model_on(&g, 8);
        let b = BeliefState::new(Categorical::delta(8, 0), Categorical::uniform(8));
        assert_eq!(predict(&m, &b, 1).unwrap().agent, Categorical::delta(8, 1));
        assert_eq!(predict(&m, &b, 5).unwrap().agent, Categorical::delta(8, 0));
        assert!(predict(&m, &b, 8).is_err());
    }

    #[test]
    fn predict_keeps_object_belief() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = model_on(&g, 2);
        let object = Categorical::from_probs(vec![0.3, 0.7]).unwrap();
        let b = BeliefState::new(Categorical::delta(2, 0), object.clone());
        assert_eq!(predict(&m, &b, 1).unwrap().object, object);
    }

    #[test]
    fn predictive_observation_examples() {
        let g = Graph::default_world();
        let m = model_on(&g, 8);
        let same = BeliefState::new(Categorical::delta(8, 2), Categorical::delta(8, 2));
        let q = predictive_observation(&m, &same).unwrap();
        assert!((q.get(0) - 0.95).abs() < 1e-15 && (q.get(1) - 0.05).abs() < 1e-15);

        let other = BeliefState::new(Categorical::delta(8, 2), Categorical::delta(8, 5));
        assert_eq!(
            predictive_observation(&m, &other).unwrap().probs(),
            &[0.0, 1.0]
        );

        let g4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m4 = model_on(&g4, 4);
        let spread = BeliefState::new(Categorical::delta(4, 1), Categorical::uniform(4));
        let q = predictive_observation(&m4, &spread).unwrap();
        assert!((q.get(0) - 0.2375).abs() < 1e-15);
        assert!((q.get(1) - 0.7625).abs() < 1e-15);
    }

    #[test]
    fn update_two_location_example() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = model_on(&g, 2);
        let predicted = BeliefState::new(Categorical::delta(2, 0), Categorical::uniform(2));
        let post =
            update_beliefs(&m, &predicted, Observation::new(0, Visibility::Invisible)).unwrap();
        assert!((post.object.get(0) - 0.05 / 1.05).abs() < 1e-15);
        assert!((post.object.get(1) - 1.0 / 1.05).abs() < 1e-15);
        assert_eq!(post.agent, Categorical::delta(2, 0));
    }

    #[test]
    fn update_sets_agent_to_observed_location() {
        let g = Graph::default_world();
        let m = model_on(&g, 8);
        let predicted = BeliefState::new(
            Categorical::from_probs(vec![0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(),
            Categorical::uniform(8),
        );
        let post =
            update_beliefs(&m, &predicted, Observation::new(1, Visibility::Visible)).unwrap();
        assert_eq!(post.agent, Categorical::delta(8, 1));
        assert_eq!(post.object, Categorical::delta(8, 1));
    }

    #[test]
    fn invisible_elsewhere_leaves_delta_unchanged() {
        let g = Graph::default_world();
        let m = model_on(&g, 8);
        let predicted = BeliefState::new(Categorical::delta(8, 0), Categorical::delta(8, 6));
        let post =
            update_beliefs(&m, &predicted, Observation::new(0, Visibility::Invisible)).unwrap();
        assert_eq!(post.object, Categorical::delta(8, 6));
    }

    #[test]
    fn impossible_observations_are_reported() {
        let g = Graph::default_world();
        let m = model_on(&g, 8);
        let predicted = BeliefState::new(Categorical::delta(8, 0), Categorical::delta(8, 6));
        let err =
            update_beliefs(&m, &predicted, Observation::new(0, Visibility::Visible)).unwrap_err();
        assert!(matches!(
            err,
            Error::ImpossibleObservation { location: 0, .. }
        ));
        let err =
            update_beliefs(&m, &predicted, Observation::new(3, Visibility::Invisible)).unwrap_err();
        assert!(matches!(
            err,
            Error::ImpossibleObservation { location: 3, .. }
        ));
    }

    #[test]
    fn not_here_state_absorbs_misses() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = model_on(&g, 3);
        let predicted = BeliefState::new(Categorical::delta(2, 0), Categorical::uniform(3));
        let post =
            update_beliefs(&m, &predicted, Observation::new(0, Visibility::Invisible)).unwrap();
        assert!(post.object.get(2) > 1.0 / 3.0);
        assert_eq!(post.object.get(1), post.object.get(2));
    }
}
