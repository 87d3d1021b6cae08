//! Synthetic benchmark graphs with known ground truth.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CommunityCover, CoverMode, Graph, NodeId};
use crate::rng::rng_from_seed;

/// GN benchmark layout: 128 nodes in 4 communities of 32, expected degree 16.
pub const GN_NODES: usize = 128;
pub const GN_COMMUNITIES: usize = 4;
pub const GN_BLOCK: usize = 32;
pub const GN_DEGREE: f64 = 16.0;

/// GN benchmark configuration. Only the mixing parameter and the seed vary;
/// the structure is fixed by the benchmark definition.
#[derive(Debug, Clone, Copy)]
pub struct GnConfig {
    /// Fraction of a node's expected degree that crosses communities.
    pub mu: f64,
    pub seed: u64,
}

/// Erdős–Rényi G(n, p) configuration.
#[derive(Debug, Clone, Copy)]
pub struct ErConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// Generates a GN benchmark graph and its 4-block ground truth.
///
/// Edges are independent Bernoulli draws with
/// `p_in = (1 - mu) * 16 / 31` inside a block and `p_out = mu * 16 / 96`
/// across blocks, which makes every node's expected degree exactly 16 and
/// the expected cross-edge fraction `mu`.
pub fn generate_gn(config: &GnConfig) -> Result<(Graph, CommunityCover)> {
    if !(0.0..=1.0).contains(&config.mu) {
        return Err(Error::Config(format!("mu = {} outside [0, 1]", config.mu)));
    }
    let p_in = (1.0 - config.mu) * GN_DEGREE / (GN_BLOCK as f64 - 1.0);
    let p_out = config.mu * GN_DEGREE / ((GN_NODES - GN_BLOCK) as f64);
    let mut rng = rng_from_seed(config.seed);
    let mut edges = Vec::new();
    for u in 0..GN_NODES {
        for v in (u + 1)..GN_NODES {
            let p = if u / GN_BLOCK == v / GN_BLOCK { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(GN_NODES, &edges)?;
    Ok((graph, gn_ground_truth()))
}

/// The fixed GN ground truth: `{0..31}, {32..63}, {64..95}, {96..127}`.
pub fn gn_ground_truth() -> CommunityCover {
    let blocks: Vec<BTreeSet<NodeId>> = (0..GN_COMMUNITIES)
        .map(|b| (b * GN_BLOCK..(b + 1) * GN_BLOCK).collect())
        .collect();
    CommunityCover::new(blocks, CoverMode::Disjoint).expect("blocks are disjoint and nonempty")
}

/// Generates G(n, p): every unordered pair is an edge independently with
/// probability `p`.
pub fn generate_er(config: &ErConfig) -> Result<Graph> {
    if config.n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&config.p) {
        return Err(Error::Config(format!("p = {} outside [0, 1]", config.p)));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut edges = Vec::new();
    for u in 0..config.n {
        for v in (u + 1)..config.n {
            if rng.random::<f64>() < config.p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(config.n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gn_mu_zero_has_no_cross_edges() {
        let (g, truth) = generate_gn(&GnConfig { mu: 0.0, seed: 1 }).unwrap();
        for &(u, v) in g.edges() {
            assert_eq!(u / GN_BLOCK, v / GN_BLOCK);
        }
        assert_eq!(truth.len(), 4);
        // Every connected component stays inside one community: immediate
        // from the absence of cross edges, checked via a BFS sweep.
        let mut seen = vec![false; g.node_count()];
        for start in 0..g.node_count() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for &y in g.neighbors(x) {
                    assert_eq!(y / GN_BLOCK, start / GN_BLOCK);
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
    }

    #[test]
    fn gn_mean_degree_near_sixteen() {
        let (g, _) = generate_gn(&GnConfig { mu: 0.3, seed: 42 }).unwrap();
        let mean = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
        assert!((mean - 16.0).abs() < 1.0, "mean degree {mean}");
    }

    #[test]
    fn gn_cross_fraction_tracks_mu() {
        let (g, _) = generate_gn(&GnConfig { mu: 0.5, seed: 7 }).unwrap();
        let cross = g
            .edges()
            .iter()
            .filter(|&&(u, v)| u / GN_BLOCK != v / GN_BLOCK)
            .count();
        let frac = cross as f64 / g.edge_count() as f64;
        assert!((frac - 0.5).abs() < 0.07, "cross fraction {frac}");
    }

    #[test]
    fn gn_ground_truth_blocks() {
        let truth = gn_ground_truth();
        assert!(truth.is_partition(GN_NODES));
        assert!(truth.communities()[0].contains(&0));
        assert!(truth.communities()[3].contains(&127));
    }

    #[test]
    fn gn_deterministic() {
        let a = generate_gn(&GnConfig { mu: 0.2, seed: 5 }).unwrap().0;
        let b = generate_gn(&GnConfig { mu: 0.2, seed: 5 }).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn er_extremes() {
        let empty = generate_er(&ErConfig { n: 100, p: 0.0, seed: 1 }).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = generate_er(&ErConfig { n: 100, p: 1.0, seed: 1 }).unwrap();
        assert_eq!(full.edge_count(), 4950);
    }

    #[test]
    fn er_edge_count_concentrates() {
        // E = C(200,2) * 0.05 = 995; 3 sigma ~ 92.
        let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: 11 }).unwrap();
        let count = g.edge_count() as f64;
        assert!((count - 995.0).abs() < 100.0, "edge count {count}");
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(generate_gn(&GnConfig { mu: 1.5, seed: 0 }).is_err());
        assert!(generate_er(&ErConfig { n: 0, p: 0.5, seed: 0 }).is_err());
        assert!(generate_er(&ErConfig { n: 5, p: -0.1, seed: 0 }).is_err());
    }
}
