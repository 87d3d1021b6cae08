//! Independent-cascade and linear-threshold baselines.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::graph::{Graph, NodeId};
use crate::rng::rng_from_seed;

/// Edge weights `b(u, v)` for the linear-threshold model: how strongly an
/// active `u` pushes its neighbor `v`.
#[derive(Debug, Clone)]
pub enum LtWeights {
    /// `b(u, v) = 1 / deg(v)`; weight sums are exactly 1.
    DegreeNormalized,
    /// The same weight on every edge; rejected when `b * deg(v) > 1`.
    Uniform(f64),
    /// Explicit directed weights keyed `(u, v)`; missing pairs weigh 0.
    PerEdge(BTreeMap<(NodeId, NodeId), f64>),
}

impl LtWeights {
    fn weight(&self, u: NodeId, v: NodeId, graph: &Graph) -> f64 {
        match self {
            LtWeights::DegreeNormalized => 1.0 / graph.degree(v) as f64,
            LtWeights::Uniform(b) => *b,
            LtWeights::PerEdge(map) => map.get(&(u, v)).copied().unwrap_or(0.0),
        }
    }
}

/// Configuration shared by both cascade models.
#[derive(Debug, Clone)]
pub struct CascadeConfig {
    /// Initially active nodes.
    pub seed_set: BTreeSet<NodeId>,
    /// Uniform propagation probability (independent cascade).
    pub p_edge: f64,
    /// Incoming-influence weights (linear threshold).
    pub lt_weights: LtWeights,
    pub seed: u64,
}

impl CascadeConfig {
    pub fn new(seed_set: BTreeSet<NodeId>, seed: u64) -> CascadeConfig {
        CascadeConfig {
            seed_set,
            p_edge: 0.1,
            lt_weights: LtWeights::DegreeNormalized,
            seed,
        }
    }
}

fn check_seed_set(graph: &Graph, config: &CascadeConfig) -> Result<()> {
    if let Some(&v) = config.seed_set.iter().find(|&&v| v >= graph.node_count()) {
        return Err(Error::Range(format!(
            "seed node {v} outside 0..{}",
            graph.node_count()
        )));
    }
    Ok(())
}

/// Independent cascade: each node, on the round it becomes active, gets one
/// chance to activate each still-inactive neighbor with probability
/// `p_edge`. Returns the final active set.
pub fn run_independent_cascade(graph: &Graph, config: &CascadeConfig) -> Result<BTreeSet<NodeId>> {
    if config.seed_set.is_empty() {
        return Err(Error::Argument("seed set is empty".into()));
    }
    check_seed_set(graph, config)?;
    if !(0.0..=1.0).contains(&config.p_edge) {
        return Err(Error::Config(format!(
            "p_edge = {} outside [0, 1]",
            config.p_edge
        )));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut active = vec![false; graph.node_count()];
    for &v in &config.seed_set {
        active[v] = true;
    }
    let mut frontier: Vec<NodeId> = config.seed_set.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in graph.neighbors(u) {
                if !active[v] && rng.random::<f64>() < config.p_edge {
                    active[v] = true;
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Ok(active
        .iter()
        .enumerate()
        .filter_map(|(v, &a)| a.then_some(v))
        .collect())
}

/// Linear threshold: every node draws a threshold `θ_v` uniformly from
/// `[0, 1)` once; a node activates as soon as the summed weight of its
/// active neighbors reaches `θ_v`. Returns the fixed point.
pub fn run_linear_threshold(graph: &Graph, config: &CascadeConfig) -> Result<BTreeSet<NodeId>> {
    check_seed_set(graph, config)?;
    let n = graph.node_count();
    for v in 0..n {
        let total: f64 = graph
            .neighbors(v)
            .iter()
            .map(|&u| config.lt_weights.weight(u, v, graph))
            .sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::Config(format!(
                "incoming weights of node {v} sum to {total} > 1"
            )));
        }
    }
    let mut rng = rng_from_seed(config.seed);
    let thresholds: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let mut active = vec![false; n];
    for &v in &config.seed_set {
        active[v] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if active[v] {
                continue;
            }
            let influence: f64 = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| active[u])
                .map(|&u| config.lt_weights.weight(u, v, graph))
                .sum();
            if influence >= thresholds[v] {
                active[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(active
        .iter()
        .enumerate()
        .filter_map(|(v, &a)| a.then_some(v))
        .collect())
}

/// Monte-Carlo mean of the final active-set size under independent cascade.
/// Trial `k` runs with seed `config.seed ^ k`.
pub fn ic_mean_active(
    graph: &Graph,
    config: &CascadeConfig,
    trials: usize,
    exec: Execution,
) -> Result<f64> {
    let sizes = map_indexed(exec, trials, |k| {
        let mut cfg = config.clone();
        cfg.seed = config.seed ^ k as u64;
        run_independent_cascade(graph, &cfg).map(|s| s.len())
    });
    let mut total = 0usize;
    for s in sizes {
        total += s?;
    }
    Ok(total as f64 / trials as f64)
}

/// Monte-Carlo mean of the final active-set size under linear threshold.
pub fn lt_mean_active(
    graph: &Graph,
    config: &CascadeConfig,
    trials: usize,
    exec: Execution,
) -> Result<f64> {
    let sizes = map_indexed(exec, trials, |k| {
        let mut cfg = config.clone();
        cfg.seed = config.seed ^ k as u64;
        run_linear_threshold(graph, &cfg).map(|s| s.len())
    });
    let mut total = 0usize;
    for s in sizes {
        total += s?;
    }
    Ok(total as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn ic_p_one_floods_connected_graph() {
        let g = path3();
        let mut cfg = CascadeConfig::new([1].into(), 0);
        cfg.p_edge = 1.0;
        let active = run_independent_cascade(&g, &cfg).unwrap();
        assert_eq!(active.len(), 3);
    }

    #[test]
    fn ic_p_zero_keeps_seeds() {
        let g = path3();
        let mut cfg = CascadeConfig::new([0, 2].into(), 0);
        cfg.p_edge = 0.0;
        let active = run_independent_cascade(&g, &cfg).unwrap();
        assert_eq!(active, [0, 2].into());
    }

    #[test]
    fn ic_empty_seed_set_rejected() {
        let g = path3();
        let cfg = CascadeConfig::new(BTreeSet::new(), 0);
        assert!(matches!(
            run_independent_cascade(&g, &cfg),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn ic_active_set_contains_seeds() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut cfg = CascadeConfig::new([0, 3].into(), 5);
        cfg.p_edge = 0.5;
        let active = run_independent_cascade(&g, &cfg).unwrap();
        assert!(active.contains(&0) && active.contains(&3));
        assert!(!active.contains(&5)); // isolated node stays inactive
    }

    #[test]
    fn lt_single_neighbor_full_weight_always_fires() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        for seed in 0..50 {
            let mut cfg = CascadeConfig::new([0].into(), seed);
            cfg.lt_weights = LtWeights::Uniform(1.0);
            let active = run_linear_threshold(&g, &cfg).unwrap();
            assert_eq!(active.len(), 2, "seed {seed}");
        }
    }

    #[test]
    fn lt_empty_seed_set_stays_empty() {
        let g = path3();
        let cfg = CascadeConfig::new(BTreeSet::new(), 3);
        let active = run_linear_threshold(&g, &cfg).unwrap();
        assert!(active.is_empty());
    }

    #[test]
    fn lt_overweight_rejected() {
        let g = path3();
        let mut cfg = CascadeConfig::new([0].into(), 0);
        cfg.lt_weights = LtWeights::Uniform(0.9); // node 1 has degree 2
        assert!(matches!(
            run_linear_threshold(&g, &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn ic_path_mean_matches_enumeration() {
        // Seed {0} on 0-1-2 with p = 0.5: outcomes 1, 2, 3 nodes with
        // probabilities 0.5, 0.25, 0.25, so the mean is 1.75.
        let g = path3();
        let mut cfg = CascadeConfig::new([0].into(), 123);
        cfg.p_edge = 0.5;
        let mean = ic_mean_active(&g, &cfg, 20_000, Execution::Sequential).unwrap();
        assert!((mean - 1.75).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn lt_triangle_matches_integration() {
        // Triangle, all weights 0.5, seed {0}. Either neighbor fires iff
        // its threshold is at most 0.5; once one fires the other sees total
        // weight 1 and always follows. P(all three) = 1 - 0.25 = 0.75, so
        // the mean size is 3 * 0.75 + 1 * 0.25 = 2.5.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut cfg = CascadeConfig::new([0].into(), 9);
        cfg.lt_weights = LtWeights::Uniform(0.5);
        let mean = lt_mean_active(&g, &cfg, 20_000, Execution::Sequential).unwrap();
        assert!((mean - 2.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn active_sets_only_grow_within_budget() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut cfg = CascadeConfig::new([2].into(), 17);
        cfg.p_edge = 0.7;
        let active = run_independent_cascade(&g, &cfg).unwrap();
        assert!(active.contains(&2));
        assert!(active.len() <= 5);
    }
}
