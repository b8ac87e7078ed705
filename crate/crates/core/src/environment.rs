//! Ground-truth graph world.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{Observation, Visibility};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphWorld {
    graph: Graph,
    object_location: Option<usize>,
    visibility_prob: f64,
    agent_location: usize,
}

impl GraphWorld {
    pub fn new(
        graph: Graph,
        object_location: Option<usize>,
        visibility_prob: f64,
        agent_location: usize,
    ) -> Result<Self> {
        let n = graph.num_locations();
        if agent_location >= n {
            return Err(Error::Config(format!(
                "agent location {agent_location} is not in 0..{n}"
            )));
        }
        if let Some(loc) = object_location {
            if loc >= n {
                return Err(Error::Config(format!(
                    "object location {loc} is not in 0..{n}"
                )));
            }
        }
        if !(visibility_prob > 0.0 && visibility_prob <= 1.0) {
            return Err(Error::Config(format!(
                "visibility probability must lie in (0, 1], got {visibility_prob}"
            )));
        }
        Ok(Self {
            graph,
            object_location,
            visibility_prob,
            agent_location,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn agent_location(&self) -> usize {
        self.agent_location
    }

    pub fn object_location(&self) -> Option<usize> {
        self.object_location
    }

    pub fn visibility_prob(&self) -> f64 {
        self.visibility_prob
    }

    /// Moves to `target` if it is adjacent (or the current location);
    /// otherwise stays put. Returns the new location.
    pub fn step(&mut self, target: usize) -> Result<usize> {
        if target >= self.graph.num_locations() {
            return Err(Error::InvalidInput(format!(
                "target {target} is not in 0..{}",
                self.graph.num_locations()
            )));
        }
        if self.graph.can_move(self.agent_location, target) {
            self.agent_location = target;
        }
        Ok(self.agent_location)
    }

    /// Location is reported exactly; the object is seen with probability `p`
    /// when the agent stands on it and never otherwise.
    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> Observation {
        let visibility = match self.object_location {
            Some(loc) if loc == self.agent_location => {
                if rng.random::<f64>() < self.visibility_prob {
                    Visibility::Visible
                } else {
                    Visibility::Invisible
                }
            }
            _ => Visibility::Invisible,
        };
        Observation::new(self.agent_location, visibility)
    }
}
