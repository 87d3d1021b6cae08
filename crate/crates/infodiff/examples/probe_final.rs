use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::generators::{generate_er, generate_gn, ErConfig, GnConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::rng::cell_seed;

fn main() {
    let (graph, truth) = karate_club();
    let f = HdfFunction::example();
    // Karate at pipeline defaults (epochs=20, runs=10, credit=0.5).
    for model in [Model::Psodm, Model::Gadm] {
        let mut nmis = Vec::new();
        for seed in 0..20u64 {
            let stream = build_event_stream(&graph, 20, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(model, 10);
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
            let det = detect_communities(&graph, &out.info, &GameConfig::for_nodes(34, cell_seed(seed, "game"))).unwrap();
            nmis.push(nmi_overlapping(&det.cover, &truth, 34).unwrap());
        }
        let mean: f64 = nmis.iter().sum::<f64>() / 20.0;
        let max = nmis.iter().cloned().fold(0.0, f64::max);
        println!("karate {model:?}: mean {mean:.3} max {max:.3}");
    }
    // ER for all three models at defaults.
    for model in [Model::Psodm, Model::Gadm, Model::Egadm] {
        let mut hits = 0;
        let mut sizes = Vec::new();
        for seed in 0..10u64 {
            let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: cell_seed(seed, "er") }).unwrap();
            let stream = build_event_stream(&g, 20, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(model, 10);
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &g, &stream, &f).unwrap();
            let det = detect_communities(&g, &out.info, &GameConfig::for_nodes(200, cell_seed(seed, "game"))).unwrap();
            let biggest = det.cover.communities().iter().map(|c| c.len()).max().unwrap();
            sizes.push(biggest);
            if biggest >= 190 { hits += 1; }
        }
        println!("er {model:?}: {hits}/10 {sizes:?}");
    }
    // Mu-sweep shape for GPSODM at defaults, 10 seeds per point.
    let mut curve = Vec::new();
    for mu in [0.1f64, 0.2, 0.3, 0.4, 0.5] {
        let mut nmis = Vec::new();
        for seed in 0..10u64 {
            let (g, t) = generate_gn(&GnConfig { mu, seed: cell_seed(seed, "gn") }).unwrap();
            let stream = build_event_stream(&g, 20, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(Model::Psodm, 10);
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &g, &stream, &f).unwrap();
            let det = detect_communities(&g, &out.info, &GameConfig::for_nodes(128, cell_seed(seed, "game"))).unwrap();
            nmis.push(nmi_overlapping(&det.cover, &t, 128).unwrap());
        }
        curve.push(nmis.iter().sum::<f64>() / 10.0);
    }
    println!("gpsodm mu curve: {curve:?}");
}
