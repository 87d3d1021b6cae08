//! Command-line front end: benchmark generation, diffusion runs, community
//! detection, metric evaluation and full experiment pipelines.

use std::fs;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use infodiff::diffusion::{run_diffusion, Init, Model, ModelConfig};
use infodiff::game::{detect_communities, GameMode};
use infodiff::generators::{generate_er, generate_gn, ErConfig, GnConfig};
use infodiff::graph::{
    build_event_stream, parse_communities, parse_edge_list, CommunityFormat, EventStream, Graph,
    ParsedInput, StreamSource,
};
use infodiff::metrics::{fccn, modularity, nmi_overlapping};
use infodiff::pipeline::{
    run_pipeline, write_outputs, ExperimentConfig, SweepSpec,
};
use infodiff::rng::cell_seed;
use infodiff::{Error, HdfFunction, Result};

#[derive(Parser)]
#[command(name = "infodiff", version, about = "Information diffusion and community detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a GN benchmark graph with its 4-block ground truth.
    GenGn {
        /// Mixing parameter in [0, 1].
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output base path; writes `<out>.edges` and `<out>.communities`.
        #[arg(long)]
        out: PathBuf,
        /// Emit 1-based node ids.
        #[arg(long)]
        one_based: bool,
    },
    /// Generate an Erdős–Rényi G(n, p) graph.
    GenEr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output base path; writes `<out>.edges`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        one_based: bool,
    },
    /// Run a diffusion model and dump the information matrix + trajectory.
    Diffuse {
        /// Static edge list (2 tokens per line).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Timed contact list (3 tokens per line); overrides epoch unrolling.
        #[arg(long)]
        stream: Option<PathBuf>,
        #[arg(long, default_value = "psodm")]
        model: Model,
        /// Schema file; defaults to the built-in width-10 example function.
        #[arg(long)]
        hdf: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        epochs: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 0.05)]
        p_m: f64,
        #[arg(long, default_value_t = 0.4)]
        c_accel: f64,
        /// `uniform` or `zero`.
        #[arg(long, default_value = "uniform")]
        init: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        one_based: bool,
        /// Output directory; writes `info.tsv` and `trajectory.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect communities from an information matrix (or via LPA).
    Detect {
        /// Information matrix TSV (required for the game detector).
        #[arg(long)]
        info: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
        /// `gid` (the best-response game) or `lpa`.
        #[arg(long, default_value = "gid")]
        algo: String,
        /// `disjoint` or `overlap`.
        #[arg(long, default_value = "disjoint")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        one_based: bool,
        /// Output community file (one community per line).
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a detected cover against ground truth and/or the graph.
    Eval {
        #[arg(long)]
        detected: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated subset of nmi, fccn, q.
        #[arg(long, default_value = "nmi,fccn,q")]
        metrics: String,
        #[arg(long)]
        one_based: bool,
    },
    /// Run a μ-sweep over GN benchmarks and emit curve tables.
    Sweep {
        /// Comma-separated μ grid.
        #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5")]
        mu: String,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        /// Comma-separated algorithms.
        #[arg(long, default_value = "ggadm,gegadm,gpsodm,lpa")]
        algorithms: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a full experiment from a TOML config.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_graph(path: &PathBuf, one_based: bool) -> Result<Graph> {
    let file = fs::File::open(path)?;
    let outcome = parse_edge_list(BufReader::new(file), one_based)?;
    match outcome.input {
        ParsedInput::Static(g) => Ok(g),
        ParsedInput::Temporal(_) => Err(Error::Format(format!(
            "{path:?} holds timed events, expected a static edge list"
        ))),
    }
}

fn load_cover(path: &PathBuf, one_based: bool) -> Result<infodiff::CommunityCover> {
    let file = fs::File::open(path)?;
    parse_communities(
        BufReader::new(file),
        CommunityFormat::PerLineCommunity,
        one_based,
    )
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenGn {
            mu,
            seed,
            out,
            one_based,
        } => {
            let (graph, truth) = generate_gn(&GnConfig { mu, seed })?;
            let mut edges = fs::File::create(with_ext(&out, "edges"))?;
            graph.write_edge_list(&mut edges, one_based)?;
            let mut comms = fs::File::create(with_ext(&out, "communities"))?;
            truth.write(&mut comms, one_based)?;
            eprintln!(
                "wrote GN(mu={mu}) with {} edges to {}.{{edges,communities}}",
                graph.edge_count(),
                out.display()
            );
            Ok(())
        }
        Command::GenEr {
            n,
            p,
            seed,
            out,
            one_based,
        } => {
            let graph = generate_er(&ErConfig { n, p, seed })?;
            let mut edges = fs::File::create(with_ext(&out, "edges"))?;
            graph.write_edge_list(&mut edges, one_based)?;
            eprintln!(
                "wrote ER(n={n}, p={p}) with {} edges to {}.edges",
                graph.edge_count(),
                out.display()
            );
            Ok(())
        }
        Command::Diffuse {
            graph,
            stream,
            model,
            hdf,
            epochs,
            runs,
            p_m,
            c_accel,
            init,
            seed,
            one_based,
            out,
        } => {
            let f = match hdf {
                Some(path) => HdfFunction::parse(&fs::read_to_string(path)?)?,
                None => HdfFunction::example(),
            };
            let (g, s) = resolve_inputs(graph, stream, one_based, epochs, seed)?;
            let mut cfg = ModelConfig::new(model, f.beta());
            cfg.p_m = p_m;
            cfg.c_accel = c_accel;
            cfg.init = match init.as_str() {
                "uniform" => Init::UniformRandom,
                "zero" => Init::Zero,
                other => return Err(Error::Argument(format!("unknown init {other:?}"))),
            };
            cfg.epochs = epochs;
            cfg.runs = runs;
            cfg.seed = seed;
            let outcome = run_diffusion(&cfg, &g, &s, &f)?;
            fs::create_dir_all(&out)?;
            let mut tsv = fs::File::create(out.join("info.tsv"))?;
            outcome.info.dump_tsv(&mut tsv)?;
            let mut csv = fs::File::create(out.join("trajectory.csv"))?;
            writeln!(csv, "epoch,total_fitness")?;
            for (epoch, fit) in &outcome.trajectory {
                writeln!(csv, "{epoch},{fit:?}")?;
            }
            eprintln!(
                "ran {} over {} events x {} runs; outputs in {}",
                model.name(),
                s.len(),
                runs,
                out.display()
            );
            Ok(())
        }
        Command::Detect {
            info,
            graph,
            algo,
            mode,
            seed,
            one_based,
            out,
        } => {
            let g = load_graph(&graph, one_based)?;
            let cover = match algo.as_str() {
                "lpa" => infodiff::lpa::lpa_detect(&g, &infodiff::lpa::LpaConfig::new(seed))?,
                "gid" => {
                    let Some(info_path) = info else {
                        return Err(Error::Argument(
                            "the game detector needs --info <tsv>".into(),
                        ));
                    };
                    let file = fs::File::open(&info_path)?;
                    let matrix =
                        infodiff::diffusion::InfoMatrix::parse_tsv(BufReader::new(file))?;
                    let mut cfg =
                        infodiff::game::GameConfig::for_nodes(g.node_count(), seed);
                    cfg.mode = match mode.as_str() {
                        "disjoint" => GameMode::Disjoint,
                        "overlap" | "overlapping" => GameMode::Overlapping,
                        other => {
                            return Err(Error::Argument(format!("unknown mode {other:?}")))
                        }
                    };
                    let outcome = detect_communities(&g, &matrix, &cfg)?;
                    eprintln!(
                        "game terminated: {:?} after {} picks",
                        outcome.termination, outcome.picks
                    );
                    outcome.cover
                }
                other => return Err(Error::Argument(format!("unknown algorithm {other:?}"))),
            };
            let mut file = fs::File::create(&out)?;
            cover.write(&mut file, one_based)?;
            println!(
                "{}",
                serde_json::json!({ "communities": cover.len(), "out": out.display().to_string() })
            );
            Ok(())
        }
        Command::Eval {
            detected,
            truth,
            graph,
            metrics,
            one_based,
        } => {
            let g = load_graph(&graph, one_based)?;
            let det = load_cover(&detected, one_based)?;
            let truth = truth.map(|p| load_cover(&p, one_based)).transpose()?;
            let want: Vec<&str> = metrics.split(',').map(str::trim).collect();
            let n = g.node_count();
            let nmi_val = match (&truth, want.iter().any(|&m| m == "nmi")) {
                (Some(t), true) => Some(nmi_overlapping(&det, t, n)?),
                _ => None,
            };
            let fccn_val = match (&truth, want.iter().any(|&m| m == "fccn")) {
                (Some(t), true) => Some(fccn(&det, t, n)?),
                _ => None,
            };
            let q_val = if want.iter().any(|&m| m == "q" || m == "modularity")
                && det.is_partition(n)
                && g.edge_count() > 0
            {
                Some(modularity(&g, &det)?)
            } else {
                None
            };
            println!(
                "{}",
                serde_json::json!({ "nmi": nmi_val, "fccn": fccn_val, "modularity": q_val })
            );
            Ok(())
        }
        Command::Sweep {
            mu,
            repeats,
            algorithms,
            seed,
            out,
        } => {
            let grid: Vec<f64> = mu
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Argument(format!("bad mu {t:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            let cfg = ExperimentConfig {
                master_seed: seed,
                repeats,
                algorithms: algorithms.split(',').map(|s| s.trim().to_string()).collect(),
                sweep: Some(SweepSpec { mu: grid }),
                ..ExperimentConfig::default()
            };
            let records = run_pipeline(&cfg)?;
            write_outputs(&records, &out)?;
            eprintln!("{} records written to {}", records.len(), out.display());
            Ok(())
        }
        Command::Pipeline { config, seed, out } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let records = run_pipeline(&cfg)?;
            write_outputs(&records, &out)?;
            eprintln!("{} records written to {}", records.len(), out.display());
            Ok(())
        }
    }
}

/// Resolves the diffuse inputs: a static graph, a timed stream, or both
/// (the stream drives events, the graph provides adjacency).
fn resolve_inputs(
    graph: Option<PathBuf>,
    stream: Option<PathBuf>,
    one_based: bool,
    epochs: usize,
    seed: u64,
) -> Result<(Graph, EventStream)> {
    match (graph, stream) {
        (Some(gp), None) => {
            let g = load_graph(&gp, one_based)?;
            let s = build_event_stream(&g, epochs, cell_seed(seed, "stream"))?;
            Ok((g, s))
        }
        (gp, Some(sp)) => {
            let file = fs::File::open(&sp)?;
            let outcome = parse_edge_list(BufReader::new(file), one_based)?;
            let ParsedInput::Temporal(s) = outcome.input else {
                return Err(Error::Format(format!(
                    "{sp:?} holds a static edge list, expected timed events"
                )));
            };
            match gp {
                None => {
                    let g = Graph::from_edges(s.node_count(), &[])?;
                    Ok((g, s))
                }
                Some(gp) => {
                    let g = load_graph(&gp, one_based)?;
                    if s.node_count() > g.node_count() {
                        return Err(Error::Config(
                            "stream references nodes outside the graph".into(),
                        ));
                    }
                    // Static adjacency is authoritative when a graph exists.
                    let events = s.events().to_vec();
                    let s = EventStream::new(g.node_count(), events, StreamSource::Static);
                    Ok((g, s))
                }
            }
        }
        (None, None) => Err(Error::Argument("need --graph and/or --stream".into())),
    }
}

fn with_ext(base: &PathBuf, ext: &str) -> PathBuf {
    let mut s = base.clone().into_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
