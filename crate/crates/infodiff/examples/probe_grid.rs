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
    for model in [Model::Psodm, Model::Gadm] {
        for epochs in [1usize, 2, 3, 5, 10, 40] {
            for runs in [10usize, 1, 3] {
                let mut nmis = Vec::new();
                let mut counts = Vec::new();
                for seed in 0..20u64 {
                    let stream =
                        build_event_stream(&graph, epochs, cell_seed(seed, "stream")).unwrap();
                    let mut cfg = ModelConfig::new(model, 10);
                    cfg.epochs = epochs;
                    cfg.runs = runs;
                    cfg.seed = cell_seed(seed, "diffusion");
                    let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
                    let game = GameConfig::for_nodes(34, cell_seed(seed, "game"));
                    let det = detect_communities(&graph, &out.info, &game).unwrap();
                    nmis.push(nmi_overlapping(&det.cover, &truth, 34).unwrap());
                    counts.push(det.cover.len());
                }
                let mean: f64 = nmis.iter().sum::<f64>() / nmis.len() as f64;
                let max = nmis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean_count: f64 =
                    counts.iter().sum::<usize>() as f64 / counts.len() as f64;
                println!(
                    "{:?} epochs={epochs:>2} runs={runs:>2}: mean {mean:.3} max {max:.3} mean_k {mean_count:.1}",
                    model
                );
            }
        }
    }
}
