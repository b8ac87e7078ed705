//! Reference implementations over the flat joint state space, plus random
//! instance generators shared by the integration and acceptance tests.
//!
//! Nothing here goes through the library's inference or planning code; the
//! oracles rebuild the likelihood and transition tables from the raw
//! parameters and work on `agent * object_states + object` indices.

#![allow(dead_code)]

use affect_engine::graph::Graph;
use affect_engine::model::SearchModelSpec;
use affect_engine::{BeliefState, Categorical, GenerativeModel};
use rand::Rng;

/// Raw parameters of a small search model.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub p: f64,
    pub not_here: bool,
    /// `[visible, invisible]`.
    pub c: [f64; 2],
    pub horizon: usize,
}

impl Instance {
    pub fn k(&self) -> usize {
        if self.not_here {
            self.n + 1
        } else {
            self.n
        }
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).unwrap()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a == b
            || self
                .edges
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }

    pub fn model(&self, prior_agent: &[f64], prior_object: &[f64]) -> GenerativeModel {
        GenerativeModel::search(SearchModelSpec {
            graph: &self.graph(),
            visibility_prob: self.p,
            with_not_here: self.not_here,
            preferences: Categorical::from_probs(self.c.to_vec()).unwrap(),
            prior_agent: Categorical::from_probs(prior_agent.to_vec()).unwrap(),
            prior_object: Categorical::from_probs(prior_object.to_vec()).unwrap(),
            horizon: self.horizon,
            policy_precision: 1.0,
        })
        .unwrap()
    }

    /// `P(visible | agent, object)`.
    pub fn p_visible(&self, agent: usize, object: usize) -> f64 {
        if object == agent {
            self.p
        } else {
            0.0
        }
    }

    /// `P(location outcome, visibility | agent, object)`; `vis` 0 = visible.
    pub fn likelihood(&self, loc: usize, vis: usize, agent: usize, object: usize) -> f64 {
        if loc != agent {
            return 0.0;
        }
        let pv = self.p_visible(agent, object);
        if vis == 0 {
            pv
        } else {
            1.0 - pv
        }
    }

    /// Next joint state distribution after moving toward `action`.
    pub fn transition(&self, joint: &[f64], action: usize) -> Vec<f64> {
        let k = self.k();
        let mut out = vec![0.0; joint.len()];
        for (s, q) in joint.iter().enumerate() {
            let (a, o) = (s / k, s % k);
            let next = if self.adjacent(a, action) { action } else { a };
            out[next * k + o] += q;
        }
        out
    }

    pub fn joint(&self, agent: &[f64], object: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(agent.len() * object.len());
        for a in agent {
            for o in object {
                out.push(a * o);
            }
        }
        out
    }

    /// `(P(o), posterior)` for the observation `(loc, vis)`.
    pub fn bayes(&self, joint: &[f64], loc: usize, vis: usize) -> (f64, Vec<f64>) {
        let k = self.k();
        let weighted: Vec<f64> = joint
            .iter()
            .enumerate()
            .map(|(s, q)| q * self.likelihood(loc, vis, s / k, s % k))
            .collect();
        let evidence: f64 = weighted.iter().sum();
        let posterior = if evidence > 0.0 {
            weighted.iter().map(|w| w / evidence).collect()
        } else {
            weighted
        };
        (evidence, posterior)
    }
}

pub fn kl(q: &[f64], p: &[f64]) -> f64 {
    q.iter()
        .zip(p)
        .filter(|(qi, _)| **qi > 0.0)
        .map(|(qi, pi)| qi * (qi / pi).ln())
        .sum()
}

/// Result of the exhaustive tree evaluation of one policy.
#[derive(Debug, Clone, Copy, Default)]
pub struct TreeEfe {
    pub efe: f64,
    pub info_gain: f64,
    pub expected_utility: f64,
    /// Smallest information gain seen in any branch of the tree.
    pub min_branch_gain: f64,
}

/// Expected free energy of `policy` by enumerating every sequence of full
/// `(location, visibility)` outcomes over the joint state space.
pub fn tree_efe(inst: &Instance, joint: &[f64], policy: &[usize]) -> TreeEfe {
    let mut acc = TreeEfe {
        min_branch_gain: f64::INFINITY,
        ..TreeEfe::default()
    };
    walk(inst, joint, policy, 1.0, &mut acc);
    acc.efe = -acc.info_gain - acc.expected_utility;
    acc
}

fn walk(inst: &Instance, joint: &[f64], policy: &[usize], weight: f64, acc: &mut TreeEfe) {
    let Some((&action, rest)) = policy.split_first() else {
        return;
    };
    let predicted = inst.transition(joint, action);
    let mut branch_gain = 0.0;
    for loc in 0..inst.n {
        for vis in 0..2 {
            let (prob, posterior) = inst.bayes(&predicted, loc, vis);
            if prob <= 0.0 {
                continue;
            }
            branch_gain += prob * kl(&posterior, &predicted);
            acc.expected_utility += weight * prob * inst.c[vis].ln();
            walk(inst, &posterior, rest, weight * prob, acc);
        }
    }
    acc.min_branch_gain = acc.min_branch_gain.min(branch_gain);
    acc.info_gain += weight * branch_gain;
}

/// A random connected graph on `n` nodes: a random spanning tree plus extras.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.random_bool(0.3) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Random probability vector of length `n`, optionally with some exact zeros.
pub fn random_dist<R: Rng>(rng: &mut R, n: usize, allow_zeros: bool) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if allow_zeros && rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(0.01..1.0)
                }
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            return w.iter().map(|x| x / total).collect();
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_horizon: usize) -> Instance {
    let n = rng.random_range(2..=max_n);
    let pv = rng.random_range(0.05..0.995);
    Instance {
        n,
        edges: random_edges(rng, n),
        p: if rng.random_bool(0.1) {
            1.0
        } else {
            rng.random_range(0.05..0.999)
        },
        not_here: rng.random_bool(0.5),
        c: [pv, 1.0 - pv],
        horizon: rng.random_range(1..=max_horizon),
    }
}

pub fn belief(agent: &[f64], object: &[f64]) -> BeliefState {
    BeliefState::new(
        Categorical::from_probs(agent.to_vec()).unwrap(),
        Categorical::from_probs(object.to_vec()).unwrap(),
    )
}

pub fn delta(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
