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
        let mut nmis = Vec::new();
        let mut counts = Vec::new();
        for seed in 0..20u64 {
            let stream = build_event_stream(&graph, 20, cell_seed(seed, "stream")).unwrap();
            let mut cfg = ModelConfig::new(model, 10);
            cfg.seed = cell_seed(seed, "diffusion");
            let out = run_diffusion(&cfg, &graph, &stream, &f).unwrap();
            let game = GameConfig::for_nodes(34, cell_seed(seed, "game"));
            let det = detect_communities(&graph, &out.info, &game).unwrap();
            let nmi = nmi_overlapping(&det.cover, &truth, 34).unwrap();
            nmis.push(nmi);
            counts.push(det.cover.len());
        }
        let mean: f64 = nmis.iter().sum::<f64>() / nmis.len() as f64;
        let max = nmis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{:?}: mean NMI {:.3}, max {:.3}, counts {:?}",
            model, mean, max, counts
        );
        println!("   nmis: {:?}", nmis.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>());
    }
}
