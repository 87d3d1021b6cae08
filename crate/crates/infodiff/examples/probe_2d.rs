use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::generators::{generate_er, ErConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::rng::cell_seed;

fn main() {
    let (graph, truth) = karate_club();
    let f = HdfFunction::example();
    for credit in [0.25f64, 0.4, 0.5, 0.6] {
        for runs in [10usize, 30, 100] {
            // Karate
            let mut nmis = Vec::new();
            for seed in 0..20u64 {
                let stream = build_event_stream(&graph, 5, cell_seed(seed, "stream")).unwrap();
                let mut cfg = ModelConfig::new(Model::Psodm, 10);
                cfg.epochs = 5;
                cfg.runs = runs;
                cfg.seed = cell_seed(seed, "diffusion");
                cfg.source_credit = credit;
                let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
                let det = detect_communities(&graph, &out.info, &GameConfig::for_nodes(34, cell_seed(seed, "game"))).unwrap();
                nmis.push(nmi_overlapping(&det.cover, &truth, 34).unwrap());
            }
            let mean: f64 = nmis.iter().sum::<f64>() / 20.0;
            let max = nmis.iter().cloned().fold(0.0, f64::max);
            // ER
            let mut hits = 0;
            let mut biggest_all = Vec::new();
            for seed in 0..10u64 {
                let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: cell_seed(seed, "er") }).unwrap();
                let stream = build_event_stream(&g, 5, cell_seed(seed, "stream")).unwrap();
                let mut cfg = ModelConfig::new(Model::Psodm, 10);
                cfg.epochs = 5;
                cfg.runs = runs;
                cfg.seed = cell_seed(seed, "diffusion");
                cfg.source_credit = credit;
                let out = run_diffusion(&cfg, &g, &stream, &f).unwrap();
                let det = detect_communities(&g, &out.info, &GameConfig::for_nodes(200, cell_seed(seed, "game"))).unwrap();
                let biggest = det.cover.communities().iter().map(|c| c.len()).max().unwrap();
                biggest_all.push(biggest);
                if biggest >= 190 { hits += 1; }
            }
            println!(
                "credit={credit:.2} runs={runs:>3}: karate mean {mean:.3} max {max:.3} | er {hits}/10 {:?}",
                biggest_all
            );
        }
    }
}
