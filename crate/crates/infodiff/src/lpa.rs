//! Asynchronous label propagation, the in-repo comparison baseline.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};

use crate::error::{Error, Result};
use crate::graph::{CommunityCover, Graph};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy)]
pub struct LpaConfig {
    pub max_sweeps: usize,
    pub seed: u64,
}

impl LpaConfig {
    pub fn new(seed: u64) -> LpaConfig {
        LpaConfig {
            max_sweeps: 100,
            seed,
        }
    }
}

/// Runs label propagation: every node starts with a unique label and, in
/// random order per sweep, adopts the most common label among its
/// neighbors (ties broken uniformly at random). Stops when a sweep changes
/// nothing or after `max_sweeps`.
pub fn lpa_detect(graph: &Graph, config: &LpaConfig) -> Result<CommunityCover> {
    if config.max_sweeps == 0 {
        return Err(Error::Config("max_sweeps must be >= 1".into()));
    }
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::Argument("empty graph".into()));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..config.max_sweeps {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if graph.degree(v) == 0 {
                continue;
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &w in graph.neighbors(v) {
                *counts.entry(labels[w]).or_insert(0) += 1;
            }
            let max = *counts.values().max().expect("node has neighbors");
            let top: Vec<usize> = counts
                .iter()
                .filter(|(_, &c)| c == max)
                .map(|(&l, _)| l)
                .collect();
            let new = if top.contains(&labels[v]) && top.len() == 1 {
                labels[v]
            } else {
                *top.choose(&mut rng).expect("at least one top label")
            };
            if new != labels[v] {
                labels[v] = new;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(CommunityCover::from_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_collapses_to_one_community() {
        let mut edges = Vec::new();
        for a in 0..8 {
            for b in (a + 1)..8 {
                edges.push((a, b));
            }
        }
        let g = Graph::from_edges(8, &edges).unwrap();
        let cover = lpa_detect(&g, &LpaConfig::new(4)).unwrap();
        assert_eq!(cover.len(), 1);
    }

    #[test]
    fn edgeless_graph_stays_singletons() {
        let g = Graph::from_edges(5, &[]).unwrap();
        let cover = lpa_detect(&g, &LpaConfig::new(0)).unwrap();
        assert_eq!(cover.len(), 5);
        assert!(cover.is_partition(5));
    }

    #[test]
    fn bridged_cliques_usually_split() {
        let mut edges = Vec::new();
        for base in [0usize, 5] {
            for a in base..base + 5 {
                for b in (a + 1)..base + 5 {
                    edges.push((a, b));
                }
            }
        }
        edges.push((4, 5)); // bridge
        let g = Graph::from_edges(10, &edges).unwrap();
        let mut two = 0;
        for seed in 0..100 {
            let cover = lpa_detect(&g, &LpaConfig::new(seed)).unwrap();
            assert!(cover.is_partition(10));
            if cover.len() == 2 {
                two += 1;
            }
        }
        assert!(two >= 95, "two communities in only {two}/100 runs");
    }

    #[test]
    fn output_is_always_a_partition() {
        let g = crate::generators::generate_er(&crate::generators::ErConfig {
            n: 40,
            p: 0.1,
            seed: 2,
        })
        .unwrap();
        for seed in 0..5 {
            let cover = lpa_detect(&g, &LpaConfig::new(seed)).unwrap();
            assert!(cover.is_partition(40));
        }
    }
}
