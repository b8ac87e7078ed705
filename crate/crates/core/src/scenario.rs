//! The five search scenarios and the perception-affect-action loop.
//!
//! | id | object  | location prior   |
//! |----|---------|------------------|
//! | 1  | present | uniform          |
//! | 2  | present | correct          |
//! | 3  | present | incorrect        |
//! | 4  | absent  | maybe here       |
//! | 5  | absent  | definitely here  |

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affect::{AffectConfig, AffectSample, DEFAULT_NEUTRAL_RADIUS};
use crate::categorical::Categorical;
use crate::environment::GraphWorld;
use crate::error::{Error, Result};
use crate::free_energy::{variational_free_energy, FreeEnergyReport};
use crate::graph::{Graph, GraphSpec};
use crate::inference::{predict, predictive_observation, update_beliefs};
use crate::model::{GenerativeModel, Observation, SearchModelSpec, Visibility};
use crate::planning::{
    enumerate_policies, evaluate_policies, policy_posterior, select_policy, SelectionMode,
};

pub const DEFAULT_VISIBILITY_PROB: f64 = 0.95;
pub const DEFAULT_PREFERENCE_VISIBLE: f64 = 0.99;
pub const DEFAULT_PRIOR_CONCENTRATION: f64 = 0.9;
pub const DEFAULT_HORIZON: usize = 3;
pub const DEFAULT_POLICY_PRECISION: f64 = 1.0;
pub const DEFAULT_MAX_STEPS: usize = 40;

/// Upper bound on `locations^horizon`, the number of policies scored per step.
pub const MAX_POLICIES: usize = 1 << 20;

/// Where the object sits in scenarios 1-3 on the default graph.
pub const SCENARIO1_OBJECT: usize = 2;
pub const SCENARIO2_OBJECT: usize = 4;
pub const SCENARIO3_OBJECT: usize = 7;
/// Where the scenario-3 agent wrongly believes the object is: two hops from
/// the start, so the first step is spent before the belief is tested.
pub const SCENARIO3_PRIOR: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorKind {
    Uniform,
    Correct,
    Incorrect,
    MaybeHere,
    DefinitelyHere,
}

impl PriorKind {
    fn for_scenario(id: u8) -> Option<Self> {
        match id {
            1 => Some(PriorKind::Uniform),
            2 => Some(PriorKind::Correct),
            3 => Some(PriorKind::Incorrect),
            4 => Some(PriorKind::MaybeHere),
            5 => Some(PriorKind::DefinitelyHere),
            _ => None,
        }
    }
}

/// A fully resolved episode description. The agent always starts at location 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// 1-5 for the built-in scenarios, `None` for a custom one.
    pub scenario_id: Option<u8>,
    pub graph: GraphSpec,
    pub object_present: bool,
    pub object_location: Option<usize>,
    pub prior_kind: PriorKind,
    /// Location carrying the concentrated prior mass (correct/incorrect priors).
    pub prior_location: Option<usize>,
    pub prior_concentration: f64,
    /// Probability of seeing the object when standing on it.
    pub p: f64,
    /// Preference for the "visible" outcome; "invisible" gets the remainder.
    pub preference_visible: f64,
    pub horizon: usize,
    pub policy_precision: f64,
    pub max_steps: usize,
    pub seed: u64,
    pub stop_on_found: bool,
    pub selection: SelectionMode,
    pub neutral_radius: f64,
}

/// Optional overrides as read from a config file; see [`ScenarioOverrides::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOverrides {
    pub scenario_id: Option<u8>,
    pub graph: Option<GraphSpec>,
    pub object_present: Option<bool>,
    pub object_location: Option<usize>,
    pub prior_kind: Option<PriorKind>,
    pub prior_location: Option<usize>,
    pub prior_concentration: Option<f64>,
    pub p: Option<f64>,
    pub preference_visible: Option<f64>,
    pub horizon: Option<usize>,
    pub policy_precision: Option<f64>,
    pub max_steps: Option<usize>,
    pub seed: Option<u64>,
    pub stop_on_found: Option<bool>,
    pub selection: Option<SelectionMode>,
    pub neutral_radius: Option<f64>,
}

impl ScenarioConfig {
    fn base(
        scenario_id: Option<u8>,
        object_location: Option<usize>,
        prior_kind: PriorKind,
    ) -> Self {
        Self {
            scenario_id,
            graph: Graph::default_world().to_spec(),
            object_present: object_location.is_some(),
            object_location,
            prior_kind,
            prior_location: None,
            prior_concentration: DEFAULT_PRIOR_CONCENTRATION,
            p: DEFAULT_VISIBILITY_PROB,
            preference_visible: DEFAULT_PREFERENCE_VISIBLE,
            horizon: DEFAULT_HORIZON,
            policy_precision: DEFAULT_POLICY_PRECISION,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            stop_on_found: true,
            selection: SelectionMode::Argmax,
            neutral_radius: DEFAULT_NEUTRAL_RADIUS,
        }
    }

    /// The built-in configuration for scenario `id` (1-5) on the default graph.
    pub fn preset(id: u8) -> Result<Self> {
        let kind = PriorKind::for_scenario(id)
            .ok_or_else(|| Error::Config(format!("scenario_id must be 1..5, got {id}")))?;
        let object = match id {
            1 => Some(SCENARIO1_OBJECT),
            2 => Some(SCENARIO2_OBJECT),
            3 => Some(SCENARIO3_OBJECT),
            _ => None,
        };
        let mut config = Self::base(Some(id), object, kind);
        if id == 3 {
            config.prior_location = Some(SCENARIO3_PRIOR);
        }
        config.fill_prior_location()?;
        Ok(config)
    }

    pub fn presets() -> Vec<Self> {
        (1..=5)
            .map(|id| Self::preset(id).expect("built-in presets are valid"))
            .collect()
    }

    /// Moves the object (when present) and re-derives the prior location.
    pub fn with_graph(mut self, graph: &Graph, object_location: Option<usize>) -> Result<Self> {
        self.graph = graph.to_spec();
        self.object_present = object_location.is_some();
        self.object_location = object_location;
        self.prior_location = None;
        self.fill_prior_location()?;
        self.validate()?;
        Ok(self)
    }

    fn fill_prior_location(&mut self) -> Result<()> {
        if self.prior_location.is_some() {
            return Ok(());
        }
        match self.prior_kind {
            PriorKind::Correct => self.prior_location = self.object_location,
            PriorKind::Incorrect => {
                let graph = Graph::try_from(&self.graph)?;
                let anchor = self.object_location.unwrap_or(0);
                if anchor < graph.num_locations() {
                    self.prior_location = Some(graph.farthest_from(anchor));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let graph = Graph::try_from(&self.graph)?;
        let n = graph.num_locations();
        if n < 2 {
            return Err(Error::Config("graph needs at least two locations".into()));
        }
        if let Some(id) = self.scenario_id {
            let kind = PriorKind::for_scenario(id)
                .ok_or_else(|| Error::Config(format!("scenario_id must be 1..5, got {id}")))?;
            let present = id <= 3;
            if self.object_present != present {
                return Err(Error::Config(format!(
                    "scenario {id} requires object_present = {present}"
                )));
            }
            if self.prior_kind != kind {
                return Err(Error::Config(format!(
                    "scenario {id} requires prior_kind {kind:?}, got {:?}",
                    self.prior_kind
                )));
            }
        }
        match (self.object_present, self.object_location) {
            (true, None) => {
                return Err(Error::Config(
                    "object_present is true but object_location is missing".into(),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::Config(
                    "object_location is set but object_present is false".into(),
                ))
            }
            (true, Some(loc)) if loc >= n => {
                return Err(Error::Config(format!(
                    "object_location {loc} is not in 0..{n}"
                )))
            }
            _ => {}
        }
        match self.prior_kind {
            PriorKind::Correct | PriorKind::Incorrect => {
                if !self.object_present {
                    return Err(Error::Config(format!(
                        "a {:?} prior needs the object to be present",
                        self.prior_kind
                    )));
                }
                let loc = self.prior_location.ok_or_else(|| {
                    Error::Config("prior_location is required for correct/incorrect priors".into())
                })?;
                if loc >= n {
                    return Err(Error::Config(format!(
                        "prior_location {loc} is not in 0..{n}"
                    )));
                }
                let correct = Some(loc) == self.object_location;
                if correct != (self.prior_kind == PriorKind::Correct) {
                    return Err(Error::Config(format!(
                        "prior_location {loc} contradicts a {:?} prior with the object at {:?}",
                        self.prior_kind, self.object_location
                    )));
                }
            }
            PriorKind::DefinitelyHere if self.object_present => {
                return Err(Error::Config(
                    "a definitely_here prior is for an absent object; use uniform instead".into(),
                ));
            }
            _ => {
                if self.prior_location.is_some() {
                    return Err(Error::Config(format!(
                        "prior_location has no meaning for a {:?} prior",
                        self.prior_kind
                    )));
                }
            }
        }
        if !(self.prior_concentration > 0.0 && self.prior_concentration < 1.0) {
            return Err(Error::Config(format!(
                "prior_concentration must lie in (0, 1), got {}",
                self.prior_concentration
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Config(format!(
                "p must lie in (0, 1], got {}",
                self.p
            )));
        }
        if !(self.preference_visible > 0.0 && self.preference_visible < 1.0) {
            return Err(Error::Config(format!(
                "preference_visible must lie in (0, 1), got {}",
                self.preference_visible
            )));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let policies = (n as f64).powi(self.horizon as i32);
        if policies > MAX_POLICIES as f64 {
            return Err(Error::Config(format!(
                "{n}^{} = {policies} policies exceeds the cap of {MAX_POLICIES}",
                self.horizon
            )));
        }
        if !(self.policy_precision.is_finite() && self.policy_precision > 0.0) {
            return Err(Error::Config(format!(
                "policy_precision must be positive, got {}",
                self.policy_precision
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if !(self.neutral_radius > 0.0 && self.neutral_radius < 1.0) {
            return Err(Error::Config(format!(
                "neutral_radius must lie in (0, 1), got {}",
                self.neutral_radius
            )));
        }
        Ok(())
    }

    /// Short name used for output files.
    pub fn name(&self) -> String {
        match self.scenario_id {
            Some(id) => format!("scenario{id}_seed{}", self.seed),
            None => format!("custom_seed{}", self.seed),
        }
    }
}

impl ScenarioOverrides {
    /// Applies the overrides on top of the preset for `scenario_id` (or a
    /// custom base with a uniform prior and a present object) and validates.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let mut config = match self.scenario_id {
            Some(id) => ScenarioConfig::preset(id)?,
            None => {
                let kind = self.prior_kind.unwrap_or(PriorKind::Uniform);
                let absent = matches!(kind, PriorKind::MaybeHere | PriorKind::DefinitelyHere);
                let object = if absent { None } else { Some(SCENARIO1_OBJECT) };
                ScenarioConfig::base(None, object, kind)
            }
        };
        let graph_changed = self.graph.as_ref().is_some_and(|g| *g != config.graph);
        if let Some(graph) = &self.graph {
            config.graph = graph.clone();
        }
        if let Some(present) = self.object_present {
            config.object_present = present;
            if !present {
                config.object_location = None;
            }
        }
        if let Some(loc) = self.object_location {
            config.object_location = Some(loc);
        } else if graph_changed && config.object_present {
            return Err(Error::Config(
                "object_location is required when overriding the graph with the object present"
                    .into(),
            ));
        }
        if let Some(kind) = self.prior_kind {
            config.prior_kind = kind;
        }
        let relocated =
            graph_changed || self.object_location.is_some() || self.prior_kind.is_some();
        config.prior_location = match self.prior_location {
            Some(loc) => Some(loc),
            None if relocated => None,
            None => config.prior_location,
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field { config.$field = v; }
            )*};
        }
        set!(
            prior_concentration,
            p,
            preference_visible,
            horizon,
            policy_precision,
            max_steps,
            seed,
            stop_on_found,
            selection,
            neutral_radius
        );
        config.fill_prior_location()?;
        config.validate()?;
        Ok(config)
    }
}

impl From<&ScenarioConfig> for ScenarioOverrides {
    fn from(c: &ScenarioConfig) -> Self {
        Self {
            scenario_id: c.scenario_id,
            graph: Some(c.graph.clone()),
            object_present: Some(c.object_present),
            object_location: c.object_location,
            prior_kind: Some(c.prior_kind),
            prior_location: c.prior_location,
            prior_concentration: Some(c.prior_concentration),
            p: Some(c.p),
            preference_visible: Some(c.preference_visible),
            horizon: Some(c.horizon),
            policy_precision: Some(c.policy_precision),
            max_steps: Some(c.max_steps),
            seed: Some(c.seed),
            stop_on_found: Some(c.stop_on_found),
            selection: Some(c.selection),
            neutral_radius: Some(c.neutral_radius),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub t: usize,
    pub agent_location: usize,
    pub action: usize,
    pub observation: Observation,
    pub object_belief: Categorical,
    pub free_energy: FreeEnergyReport,
    pub selected_policy_g: f64,
    pub affect: AffectSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub config: ScenarioConfig,
    pub steps: Vec<TrajectoryStep>,
    pub outcome: Outcome,
}

impl TrajectoryLog {
    pub fn labels(&self) -> Vec<crate::affect::EmotionLabel> {
        self.steps.iter().map(|s| s.affect.label).collect()
    }
}

/// Object-location prior for a config.
fn object_prior(config: &ScenarioConfig, n: usize) -> Result<Categorical> {
    Ok(match config.prior_kind {
        PriorKind::Uniform | PriorKind::DefinitelyHere => Categorical::uniform(n),
        PriorKind::MaybeHere => Categorical::uniform(n + 1),
        PriorKind::Correct | PriorKind::Incorrect => {
            let favored = config
                .prior_location
                .ok_or_else(|| Error::Config("prior_location is unset".into()))?;
            let c = config.prior_concentration;
            let rest = (1.0 - c) / (n - 1) as f64;
            let weights: Vec<f64> = (0..n)
                .map(|i| if i == favored { c } else { rest })
                .collect();
            Categorical::normalize(&weights)?
        }
    })
}

pub fn build_scenario(config: &ScenarioConfig) -> Result<(GenerativeModel, GraphWorld)> {
    config.validate()?;
    let graph = Graph::try_from(&config.graph)?;
    let n = graph.num_locations();
    let model = GenerativeModel::search(SearchModelSpec {
        graph: &graph,
        visibility_prob: config.p,
        with_not_here: config.prior_kind == PriorKind::MaybeHere,
        preferences: Categorical::from_probs(vec![
            config.preference_visible,
            1.0 - config.preference_visible,
        ])?,
        prior_agent: Categorical::delta(n, 0),
        prior_object: object_prior(config, n)?,
        horizon: config.horizon,
        policy_precision: config.policy_precision,
    })?;
    let world = GraphWorld::new(graph, config.object_location, config.p, 0)?;
    Ok((model, world))
}

/// Runs one episode, replanning at every step.
pub fn run_episode(
    model: &GenerativeModel,
    mut world: GraphWorld,
    config: &ScenarioConfig,
) -> Result<TrajectoryLog> {
    if world.graph().num_locations() != model.num_locations() {
        return Err(Error::InvalidInput(format!(
            "world has {} locations, model {}",
            world.graph().num_locations(),
            model.num_locations()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let policies = enumerate_policies(model.num_locations(), model.horizon());
    let affect_config = AffectConfig::for_model(model, config.neutral_radius)?;
    let mut belief = model.initial_belief();
    let mut steps = Vec::with_capacity(config.max_steps);
    let mut found = false;

    for t in 0..config.max_steps {
        let evaluations = evaluate_policies(model, &belief, &policies)?;
        let posterior = policy_posterior(&evaluations, model.policy_precision())?;
        let chosen = select_policy(&posterior, config.selection, &mut rng)?;
        let action = policies[chosen].first_action();

        // Expected utility is taken before the outcome arrives.
        let predicted = predict(model, &belief, action)?;
        let predictive = predictive_observation(model, &predicted)?;

        let agent_location = world.step(action)?;
        let observation = world.observe(&mut rng);

        let updated = update_beliefs(model, &predicted, observation)?;
        let free_energy = variational_free_energy(model, &predicted, &updated, observation)?;
        let affect = AffectSample::compute(
            observation.visibility.index(),
            &predictive,
            model.preferences(),
            &updated,
            &affect_config,
        )?;

        steps.push(TrajectoryStep {
            t,
            agent_location,
            action,
            observation,
            object_belief: updated.object.clone(),
            free_energy,
            selected_policy_g: evaluations[chosen].efe,
            affect,
        });
        belief = updated;

        if observation.visibility == Visibility::Visible {
            found = true;
            if config.stop_on_found {
                break;
            }
        }
    }

    Ok(TrajectoryLog {
        config: config.clone(),
        steps,
        outcome: if found {
            Outcome::Found
        } else {
            Outcome::Exhausted
        },
    })
}

pub fn run_config(config: &ScenarioConfig) -> Result<TrajectoryLog> {
    let (model, world) = build_scenario(config)?;
    run_episode(&model, world, config)
}

/// Runs every config (in parallel), keeping input order. Each entry carries
/// its own result; one failing episode does not stop the others.
pub fn run_suite_each(configs: &[ScenarioConfig]) -> Result<Vec<Result<TrajectoryLog>>> {
    if configs.is_empty() {
        return Err(Error::InvalidInput("scenario suite is empty".into()));
    }
    Ok(configs.par_iter().map(run_config).collect())
}

/// Like [`run_suite_each`], but fails with every episode error collected
/// if any episode failed.
pub fn run_suite(configs: &[ScenarioConfig]) -> Result<Vec<TrajectoryLog>> {
    let results = run_suite_each(configs)?;
    let total = results.len();
    let mut logs = Vec::with_capacity(total);
    let mut messages = Vec::new();
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(log) => logs.push(log),
            Err(e) => messages.push(format!("episode {i}: {e}")),
        }
    }
    if messages.is_empty() {
        Ok(logs)
    } else {
        Err(Error::Suite {
            failed: messages.len(),
            total,
            messages,
        })
    }
}
