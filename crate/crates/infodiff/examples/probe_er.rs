use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::generators::{generate_er, ErConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::rng::cell_seed;

fn main() {
    let f = HdfFunction::example();
    for credit in [0.5f64, 0.75, 1.0] {
        for runs in [10usize, 30] {
            for epochs in [5usize, 20] {
                let mut covers = Vec::new();
                for seed in 0..10u64 {
                    let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: cell_seed(seed, "er") }).unwrap();
                    let stream = build_event_stream(&g, epochs, cell_seed(seed, "stream")).unwrap();
                    let mut cfg = ModelConfig::new(Model::Psodm, 10);
                    cfg.epochs = epochs;
                    cfg.runs = runs;
                    cfg.seed = cell_seed(seed, "diffusion");
                    cfg.source_credit = credit;
                    let out = run_diffusion(&cfg, &g, &stream, &f).unwrap();
                    let det = detect_communities(&g, &out.info, &GameConfig::for_nodes(200, cell_seed(seed, "game"))).unwrap();
                    let biggest = det.cover.communities().iter().map(|c| c.len()).max().unwrap();
                    covers.push((biggest, det.cover.len()));
                }
                let hits = covers.iter().filter(|(b, _)| *b >= 190).count();
                println!(
                    "credit={credit} runs={runs} epochs={epochs}: {hits}/10  {:?}",
                    covers
                );
            }
        }
    }
}
