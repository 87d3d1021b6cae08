use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, InfoMatrix, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::graph::{CommunityCover, CoverMode};
use infodiff::rng::cell_seed;
use std::collections::BTreeSet;

fn main() {
    let (graph, truth) = karate_club();
    let f = HdfFunction::example();
    let faction_a: BTreeSet<usize> = truth.communities()[0].iter().copied().collect();
    let in_a = |v: usize| faction_a.contains(&v);

    for model in [Model::Psodm, Model::Gadm] {
        let mut intra = 0.0;
        let mut cross = 0.0;
        let mut top_share = 0.0;
        let mut rows = 0usize;
        for seed in 0..10u64 {
            let stream = build_event_stream(&graph, 5, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(model, 10);
            cfg.epochs = 5;
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
            for i in 0..34 {
                let row = out.info.row(i);
                let total: f64 = row.values().sum();
                if total <= 0.0 { continue; }
                let max = row.values().cloned().fold(0.0, f64::max);
                top_share += max / total;
                rows += 1;
                for (&j, &x) in row {
                    if in_a(i) == in_a(j) { intra += x } else { cross += x }
                }
            }
        }
        println!(
            "{model:?}: intra share {:.3}, mean top-entry row share {:.3}",
            intra / (intra + cross),
            top_share / rows as f64
        );
    }
    // Cross-edge fraction of the raw graph for reference.
    let cross_edges = graph.edges().iter().filter(|&&(u, v)| in_a(u) != in_a(v)).count();
    println!("raw graph: intra edge share {:.3}", 1.0 - cross_edges as f64 / graph.edge_count() as f64);

    // NMI reference points.
    let nmi = |sets: Vec<Vec<usize>>| {
        let cover = CommunityCover::new(
            sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            CoverMode::Disjoint,
        )
        .unwrap();
        nmi_overlapping(&cover, &truth, 34).unwrap()
    };
    // Faction A with the "arm" split out (1-based 5,6,7,11,17 = 0-based 4,5,6,10,16).
    let arm = vec![4usize, 5, 6, 10, 16];
    let a_rest: Vec<usize> = faction_a.iter().copied().filter(|v| !arm.contains(v)).collect();
    let b: Vec<usize> = (0..34).filter(|v| !faction_a.contains(v)).collect();
    println!("NMI(arm split) = {:.3}", nmi(vec![arm.clone(), a_rest.clone(), b.clone()]));
    // One misplaced node (0-based 8 moved to A).
    let mut a2 = faction_a.iter().copied().collect::<Vec<_>>();
    a2.push(8);
    let b2: Vec<usize> = b.iter().copied().filter(|&v| v != 8).collect();
    println!("NMI(one flip)  = {:.3}", nmi(vec![a2, b2]));
    println!("NMI(exact)     = {:.3}", nmi(vec![faction_a.iter().copied().collect(), b.clone()]));

    // GID on a synthetic uniform-on-edges matrix, for comparison.
    let mut entries = Vec::new();
    for &(u, v) in graph.edges() {
        entries.push((u, v, 1.0));
        entries.push((v, u, 1.0));
    }
    let uniform = InfoMatrix::from_entries(34, &entries, 1).unwrap();
    let mut nmis = Vec::new();
    for seed in 0..20u64 {
        let det = detect_communities(&graph, &uniform, &GameConfig::for_nodes(34, seed)).unwrap();
        nmis.push(nmi_overlapping(&det.cover, &truth, 34).unwrap());
    }
    let mean: f64 = nmis.iter().sum::<f64>() / 20.0;
    let max = nmis.iter().cloned().fold(0.0, f64::max);
    println!("uniform-I GID: mean {mean:.3} max {max:.3}");
}
