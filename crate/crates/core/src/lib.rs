//! Discrete active-inference search agent with a circumplex readout of affect.
//!
//! An agent walks a graph looking for an object. It keeps factorized beliefs
//! over its own location and the object's location, plans by expected free
//! energy, and reports a valence/arousal sample after every observation:
//! valence is utility minus expected utility, arousal is posterior entropy.
//!
//! Module map:
//! - [`categorical`]: probability vectors and the log/entropy/KL helpers.
//! - [`graph`], [`model`], [`inference`]: the generative model and exact filtering.
//! - [`free_energy`], [`planning`]: variational and expected free energy.
//! - [`affect`]: valence, arousal, polar transform, emotion labels.
//! - [`environment`]: the ground-truth world the agent moves in.
//! - [`scenario`]: the five search scenarios and the episode loop.
//! - [`io`]: config parsing and CSV/JSON/SVG emission.

pub mod affect;
pub mod categorical;
pub mod environment;
pub mod error;
pub mod free_energy;
pub mod graph;
pub mod inference;
pub mod io;
pub mod model;
pub mod planning;
pub mod scenario;

pub use affect::{AffectConfig, AffectSample, EmotionLabel};
pub use categorical::Categorical;
pub use environment::GraphWorld;
pub use error::{Error, Result};
pub use free_energy::FreeEnergyReport;
pub use graph::Graph;
pub use model::{BeliefState, GenerativeModel, Observation, Visibility};
pub use planning::{Policy, PolicyEvaluation, SelectionMode};
pub use scenario::{PriorKind, ScenarioConfig, TrajectoryLog, TrajectoryStep};
