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
        println!("=== {model:?} ===");
        for seed in 0..4u64 {
            let stream = build_event_stream(&graph, 5, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(model, 10);
            cfg.epochs = 5;
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
            let empty_rows = (0..34).filter(|&i| out.info.row(i).is_empty()).count();
            let mean_support: f64 = (0..34).map(|i| out.info.row(i).len() as f64).sum::<f64>() / 34.0;
            let det = detect_communities(&graph, &out.info, &GameConfig::for_nodes(34, cell_seed(seed, "game"))).unwrap();
            let nmi = nmi_overlapping(&det.cover, &truth, 34).unwrap();
            println!(
                "seed {seed}: empty_rows {empty_rows} mean_support {mean_support:.1} k={} nmi {nmi:.3} picks {} {:?}",
                det.cover.len(), det.picks, det.termination
            );
            for c in det.cover.communities() {
                println!("   {:?}", c.iter().collect::<Vec<_>>());
            }
        }
    }
}
