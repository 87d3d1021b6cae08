use infodiff::datasets::karate_club;
use infodiff::diffusion::{run_diffusion, Model, ModelConfig};
use infodiff::game::{detect_communities, GameConfig};
use infodiff::generators::{generate_er, generate_gn, ErConfig, GnConfig};
use infodiff::graph::build_event_stream;
use infodiff::hdf::HdfFunction;
use infodiff::metrics::nmi_overlapping;
use infodiff::rng::cell_seed;

fn run_one(g: &infodiff::Graph, truth: Option<&infodiff::CommunityCover>,
           seed: u64, credit: f64, c: f64, f: &HdfFunction) -> (f64, usize) {
    let stream = build_event_stream(g, 20, cell_seed(seed, "stream")).unwrap();
    let mut cfg = ModelConfig::new(Model::Psodm, 10);
    cfg.seed = cell_seed(seed, "diffusion");
    cfg.source_credit = credit;
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
    for &(credit, c) in &[(0.3f64, 0.3f64), (0.3, 0.4), (0.35, 0.3), (0.35, 0.4), (0.4, 0.3), (0.4, 0.4), (0.4, 0.5)] {
        let mut nmis = Vec::new();
        for seed in 0..20 {
            nmis.push(run_one(&kg, Some(&kt), seed, credit, c, &f).0);
        }
        let kmean: f64 = nmis.iter().sum::<f64>() / 20.0;
        let kmax = nmis.iter().cloned().fold(0.0, f64::max);
        let mut hits = 0;
        for seed in 0..10u64 {
            let g = generate_er(&ErConfig { n: 200, p: 0.05, seed: cell_seed(seed, "er") }).unwrap();
            if run_one(&g, None, seed, credit, c, &f).1 >= 190 { hits += 1; }
        }
        // Two independent sweep seed sets; report worst adjacent bump.
        let mut worst_bump = f64::NEG_INFINITY;
        let mut curves = Vec::new();
        for set in 0..2u64 {
            let mut curve = Vec::new();
            for mu in [0.1f64, 0.2, 0.3, 0.4, 0.5] {
                let mut s = 0.0;
                for rep in 0..10u64 {
                    let seed = cell_seed(set * 1000 + rep, &format!("sweepcell|{mu:.2}"));
                    let (g, t) = generate_gn(&GnConfig { mu, seed: cell_seed(seed, "gn") }).unwrap();
                    s += run_one(&g, Some(&t), seed, credit, c, &f).0;
                }
                curve.push(s / 10.0);
            }
            for w in curve.windows(2) {
                worst_bump = worst_bump.max(w[1] - w[0]);
            }
            curves.push(curve.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>());
        }
        println!("credit={credit} C={c}: karate {kmean:.3}/{kmax:.3} er {hits}/10 worst_bump {worst_bump:+.3}");
        for c in curves { println!("    {c:?}"); }
    }
}
