use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::rng::cell_seed;

fn main() {
    let (graph, truth) = karate_club();
    let f = HdfFunction::example();
    for model in [Model::Psodm, Model::Gadm, Model::Egadm] {
        for runs in [10usize, 30, 100] {
            let mut nmis = Vec::new();
            let mut ks = Vec::new();
            for seed in 0..20u64 {
                let stream = build_event_stream(&graph, 5, cell_seed(seed, "stream")).unwrap();
                let mut cfg = ModelConfig::new(model, 10);
                cfg.epochs = 5;
                cfg.runs = runs;
                cfg.seed = cell_seed(seed, "diffusion");
                let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
                let det = detect_communities(&graph, &out.info, &GameConfig::for_nodes(34, cell_seed(seed, "game"))).unwrap();
                nmis.push(nmi_overlapping(&det.cover, &truth, 34).unwrap());
                ks.push(det.cover.len());
            }
            let mean: f64 = nmis.iter().sum::<f64>() / 20.0;
            let max = nmis.iter().cloned().fold(0.0, f64::max);
            let mean_k: f64 = ks.iter().sum::<usize>() as f64 / 20.0;
            println!("{model:?} runs={runs:>3}: mean {mean:.3} max {max:.3} mean_k {mean_k:.1}");
        }
    }
}
