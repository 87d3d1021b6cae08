use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::generators::{generate_er, generate_gn, ErConfig, GnConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::rng::cell_seed;

fn run_one(model: Model, g: &infodiff::Graph, truth: Option<&infodiff::CommunityCover>,
           seed: u64, credit: f64, runs: usize, c: f64, f: &HdfFunction) -> (f64, usize) {
    let stream = build_event_stream(g, 20, cell_seed(seed, "stream")).unwrap();
    let mut cfg = ModelConfig::new(model, 10);
    cfg.seed = cell_seed(seed, "diffusion");
    cfg.source_credit = credit;
    cfg.runs = runs;
    cfg.c_accel = c;
    let out = run_diffusion(&cfg, g, &stream, f).unwrap();
    let det = detect_communities(g, &out.info, &GameConfig::for_nodes(g.node_count(), cell_seed(seed, "game"))).unwrap();
    let biggest = det.cover.communities().iter().map(|s| s.len()).max().unwrap();
    let nmi = truth.map(|t| nmi_overlapping(&det.cover, t, g.node_count()).unwrap()).unwrap_or(0.0);
    (nmi, biggest)
}

fn main() {
    let (kg, kt) = karate_club();
    let f = HdfFunction::example();
    for &(credit, runs, c) in &[(0.4f64, 10usize, 0.3f64), (0.4, 10, 0.5), (0.4, 10, 0.7), (0.5, 10, 0.3), (0.5, 10, 0.4), (0.5, 10, 0.6), (0.5, 10, 0.7), (0.6, 10, 0.5), (0.5, 10, 1.0)] {
        // karate
        let mut nmis = Vec::new();
        for seed in 0..20 {
            nmis.push(run_one(Model::Psodm, &kg, Some(&kt), seed, credit, runs, c, &f).0);
        }
        let kmean: f64 = nmis.iter().sum::<f64>() / 20.0;
        let kmax = nmis.iter().cloned().fold(0.0, f64::max);
        // er
        let mut hits = 0;
        for seed in 0..10u64 {
            let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: cell_seed(seed, "er") }).unwrap();
            if run_one(Model::Psodm, &g, None, seed, credit, runs, c, &f).1 >= 190 { hits += 1; }
        }
        // sweep
        let mut curve = Vec::new();
        for mu in [0.1f64, 0.2, 0.3, 0.4, 0.5] {
            let mut s = 0.0;
            for seed in 0..10u64 {
                let (g, t) = generate_gn(&GnConfig { mu, seed: cell_seed(seed ^ (mu*100.0) as u64, "gn") }).unwrap();
                s += run_one(Model::Psodm, &g, Some(&t), seed, credit, runs, c, &f).0;
            }
            curve.push((s / 10.0 * 1000.0).round() / 1000.0);
        }
        println!("credit={credit} runs={runs} C={c}: karate {kmean:.3}/{kmax:.3} er {hits}/10 curve {curve:?}");
    }
}
