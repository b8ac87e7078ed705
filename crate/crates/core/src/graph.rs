//! Undirected location graphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge list of the default eight-location world.
pub const DEFAULT_EDGES: [(usize, usize); 9] = [
    (0, 1),
    (0, 2),
    (1, 3),
    (2, 3),
    (3, 4),
    (4, 5),
    (4, 6),
    (5, 7),
    (6, 7),
];

/// Edge list of a six-location ring, used as a second topology.
pub const RING6_EDGES: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)];

/// Serialized form: a location count and an undirected edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub num_locations: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Symmetric adjacency over `0..num_locations`. Moving to the current
/// location is always allowed; self-loops in the edge list are accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<bool>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn from_edges(num_locations: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_locations == 0 {
            return Err(Error::Config("graph needs at least one location".into()));
        }
        let mut adjacency = vec![vec![false; num_locations]; num_locations];
        for &(a, b) in edges {
            if a >= num_locations || b >= num_locations {
                return Err(Error::Config(format!(
                    "edge ({a}, {b}) references a location outside 0..{num_locations}"
                )));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        let graph = Self {
            adjacency,
            edges: edges.to_vec(),
        };
        if let Some(unreachable) = graph.first_unreachable() {
            return Err(Error::Config(format!(
                "graph is not connected: location {unreachable} is unreachable from location 0"
            )));
        }
        Ok(graph)
    }

    pub fn default_world() -> Self {
        Self::from_edges(8, &DEFAULT_EDGES).expect("default graph is valid")
    }

    pub fn ring6() -> Self {
        Self::from_edges(6, &RING6_EDGES).expect("ring graph is valid")
    }

    pub fn num_locations(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// True when a move from `from` to `to` succeeds in one step.
    pub fn can_move(&self, from: usize, to: usize) -> bool {
        from == to || self.adjacency[from][to]
    }

    pub fn neighbors(&self, location: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[location]
            .iter()
            .enumerate()
            .filter(move |(j, adj)| **adj && *j != location)
            .map(|(j, _)| j)
    }

    /// Hop counts from `source`; `None` for unreachable locations.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_locations()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distances_from(a)[b].expect("graph is connected")
    }

    /// Location at maximum hop distance from `source`; ties go to the lowest index.
    pub fn farthest_from(&self, source: usize) -> usize {
        let dist = self.distances_from(source);
        let mut best = source;
        for (i, d) in dist.iter().enumerate() {
            if d.unwrap_or(0) > dist[best].unwrap_or(0) {
                best = i;
            }
        }
        best
    }

    fn first_unreachable(&self) -> Option<usize> {
        self.distances_from(0).iter().position(Option::is_none)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            num_locations: self.num_locations(),
            edges: self.edges.clone(),
        }
    }
}

impl TryFrom<&GraphSpec> for Graph {
    type Error = Error;

    fn try_from(spec: &GraphSpec) -> Result<Self> {
        Graph::from_edges(spec.num_locations, &spec.edges)
    }
}
