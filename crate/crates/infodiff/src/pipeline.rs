//! Experiment pipeline: datasets × algorithms × repeats, with per-cell
//! seeding so any cell can be re-run in isolation, plus CSV/JSONL emission
//! and summary tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::datasets::karate_club;
use crate::diffusion::{run_diffusion_exec, Init, Model, ModelConfig};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::game::{detect_communities, GameConfig, GameMode};
use crate::generators::{generate_er, generate_gn, ErConfig, GnConfig};
use crate::graph::{
    build_event_stream, parse_communities, parse_edge_list, CommunityCover, CommunityFormat,
    CoverMode, Graph, ParsedInput,
};
use crate::hdf::{build_random_hdf, HdfFunction};
use crate::lpa::{lpa_detect, LpaConfig};
use crate::metrics::{fccn, modularity, nmi_overlapping};
use crate::rng::cell_seed;

/// One dataset of an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub id: String,
    /// `karate`, `gn`, `er` or `file`.
    pub kind: String,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    #[serde(default)]
    pub truth: Option<PathBuf>,
    #[serde(default)]
    pub one_based: bool,
}

/// Fitness-function source.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct HdfSpec {
    /// `example`, `random` or `file`.
    pub source: String,
    pub beta: usize,
    pub order1: usize,
    pub higher: usize,
    pub score_low: f64,
    pub score_high: f64,
    pub file: Option<PathBuf>,
}

impl Default for HdfSpec {
    fn default() -> HdfSpec {
        HdfSpec {
            source: "example".into(),
            beta: 10,
            order1: 3,
            higher: 2,
            score_low: -4.0,
            score_high: 4.0,
            file: None,
        }
    }
}

/// Diffusion-model knobs shared by all cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSpec {
    pub epochs: usize,
    pub runs: usize,
    pub p_m: f64,
    pub c_accel: f64,
    pub source_credit: f64,
    /// `uniform` or `zero`.
    pub init: String,
    pub early_stop: bool,
}

impl Default for ModelSpec {
    fn default() -> ModelSpec {
        ModelSpec {
            epochs: 20,
            runs: 10,
            p_m: 0.05,
            c_accel: 0.4,
            source_credit: 0.3,
            init: "uniform".into(),
            early_stop: true,
        }
    }
}

/// Community-game knobs.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GameSpec {
    pub max_picks: Option<usize>,
    pub stall_threshold: Option<usize>,
    pub exact_sweep_n_max: Option<usize>,
    /// `disjoint` or `overlap`.
    pub mode: Option<String>,
    pub m_norm: Option<f64>,
    pub lambda: Option<f64>,
}

impl GameSpec {
    pub fn to_config(&self, n: usize, seed: u64) -> Result<GameConfig> {
        let mut cfg = GameConfig::for_nodes(n, seed);
        if let Some(v) = self.max_picks {
            cfg.max_picks = v;
        }
        if let Some(v) = self.stall_threshold {
            cfg.stall_threshold = v;
        }
        if let Some(v) = self.exact_sweep_n_max {
            cfg.exact_sweep_n_max = v;
        }
        cfg.mode = match self.mode.as_deref() {
            None | Some("disjoint") => GameMode::Disjoint,
            Some("overlap") | Some("overlapping") => GameMode::Overlapping,
            Some(other) => return Err(Error::Config(format!("unknown game mode {other:?}"))),
        };
        cfg.m_norm = self.m_norm;
        cfg.lambda = self.lambda;
        Ok(cfg)
    }
}

/// A μ-sweep over GN benchmarks; expands into one dataset per grid value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mu: Vec<f64>,
}

/// Whole-experiment configuration (TOML).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub repeats: usize,
    pub algorithms: Vec<String>,
    pub metrics: Vec<String>,
    pub datasets: Vec<DatasetSpec>,
    pub sweep: Option<SweepSpec>,
    pub hdf: HdfSpec,
    pub model: ModelSpec,
    pub game: GameSpec,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            master_seed: 0,
            repeats: 1,
            algorithms: vec!["ggadm".into(), "gegadm".into(), "gpsodm".into()],
            metrics: vec!["nmi".into(), "fccn".into(), "modularity".into()],
            datasets: Vec::new(),
            sweep: None,
            hdf: HdfSpec::default(),
            model: ModelSpec::default(),
            game: GameSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms configured".into()));
        }
        if self.datasets.is_empty() && self.sweep.is_none() {
            return Err(Error::Config("no datasets configured".into()));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.mu.iter().any(|m| !(0.0..=1.0).contains(m)) {
                return Err(Error::Config("sweep mu values must lie in [0, 1]".into()));
            }
        }
        for ds in &self.datasets {
            if ds.kind == "file" {
                let Some(path) = &ds.graph else {
                    return Err(Error::Config(format!("dataset {} has no graph path", ds.id)));
                };
                if !path.exists() {
                    return Err(Error::Config(format!("graph file {path:?} does not exist")));
                }
                if let Some(truth) = &ds.truth {
                    if !truth.exists() {
                        return Err(Error::Config(format!(
                            "truth file {truth:?} does not exist"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// All datasets including the expanded sweep grid.
    pub fn all_datasets(&self) -> Vec<DatasetSpec> {
        let mut out = self.datasets.clone();
        if let Some(sweep) = &self.sweep {
            for &mu in &sweep.mu {
                out.push(DatasetSpec {
                    id: format!("gn_mu{mu:.2}"),
                    kind: "gn".into(),
                    mu: Some(mu),
                    n: None,
                    p: None,
                    graph: None,
                    truth: None,
                    one_based: false,
                });
            }
        }
        out
    }

    /// Builds the experiment-wide fitness function (deterministic in the
    /// master seed).
    pub fn build_hdf(&self) -> Result<HdfFunction> {
        match self.hdf.source.as_str() {
            "example" => Ok(HdfFunction::example()),
            "random" => build_random_hdf(
                self.hdf.beta,
                self.hdf.order1,
                self.hdf.higher,
                self.hdf.score_low,
                self.hdf.score_high,
                cell_seed(self.master_seed, "hdf"),
            ),
            "file" => {
                let Some(path) = &self.hdf.file else {
                    return Err(Error::Config("hdf.source = \"file\" needs hdf.file".into()));
                };
                HdfFunction::parse(&fs::read_to_string(path)?)
            }
            other => Err(Error::Config(format!("unknown hdf source {other:?}"))),
        }
    }
}

/// Identifies one pipeline cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellKey {
    pub dataset: String,
    pub algorithm: String,
    pub repeat: usize,
}

/// One row of the raw results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub dataset: String,
    pub algorithm: String,
    pub repeat: usize,
    pub seed: u64,
    pub mu: Option<f64>,
    pub community_count: Option<usize>,
    pub nmi: Option<f64>,
    pub fccn: Option<f64>,
    pub modularity: Option<f64>,
    pub wall_time_ms: f64,
    pub converged: Option<bool>,
    pub failed: Option<String>,
}

impl ResultRecord {
    /// Copy with the wall-time field zeroed, for determinism comparisons.
    pub fn without_wall_time(&self) -> ResultRecord {
        ResultRecord {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

/// Cartesian product of datasets × algorithms × repeats, in emission order.
pub fn expand_cells(config: &ExperimentConfig) -> Vec<CellKey> {
    let mut cells = Vec::new();
    for ds in config.all_datasets() {
        for algo in &config.algorithms {
            for repeat in 0..config.repeats {
                cells.push(CellKey {
                    dataset: ds.id.clone(),
                    algorithm: algo.clone(),
                    repeat,
                });
            }
        }
    }
    cells
}

fn dataset_by_id<'a>(config: &'a ExperimentConfig, id: &str) -> Result<DatasetSpec> {
    config
        .all_datasets()
        .into_iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::Config(format!("unknown dataset {id:?}")))
}

/// Materializes a dataset instance for one repeat. Generated graphs draw
/// from a `(dataset, repeat)` seed so every algorithm sees the same
/// instance within a repeat.
fn build_dataset(
    config: &ExperimentConfig,
    spec: &DatasetSpec,
    repeat: usize,
) -> Result<(Graph, Option<CommunityCover>)> {
    let graph_seed = cell_seed(
        config.master_seed,
        &format!("graph|{}|{repeat}", spec.id),
    );
    match spec.kind.as_str() {
        "karate" => {
            let (graph, truth) = karate_club();
            Ok((graph, Some(truth)))
        }
        "gn" => {
            let mu = spec
                .mu
                .ok_or_else(|| Error::Config(format!("dataset {} needs mu", spec.id)))?;
            let (graph, truth) = generate_gn(&GnConfig {
                mu,
                seed: graph_seed,
            })?;
            Ok((graph, Some(truth)))
        }
        "er" => {
            let n = spec
                .n
                .ok_or_else(|| Error::Config(format!("dataset {} needs n", spec.id)))?;
            let p = spec
                .p
                .ok_or_else(|| Error::Config(format!("dataset {} needs p", spec.id)))?;
            let graph = generate_er(&ErConfig {
                n,
                p,
                seed: graph_seed,
            })?;
            Ok((graph, None))
        }
        "file" => {
            let path = spec
                .graph
                .as_ref()
                .ok_or_else(|| Error::Config(format!("dataset {} needs a graph path", spec.id)))?;
            let file = fs::File::open(path)?;
            let outcome = parse_edge_list(std::io::BufReader::new(file), spec.one_based)?;
            let ParsedInput::Static(graph) = outcome.input else {
                return Err(Error::Config(format!(
                    "dataset {}: pipeline inputs must be static edge lists",
                    spec.id
                )));
            };
            let truth = match &spec.truth {
                Some(tp) => {
                    let tf = fs::File::open(tp)?;
                    Some(parse_communities(
                        std::io::BufReader::new(tf),
                        CommunityFormat::PerLineCommunity,
                        spec.one_based,
                    )?)
                }
                None => None,
            };
            Ok((graph, truth))
        }
        other => Err(Error::Config(format!("unknown dataset kind {other:?}"))),
    }
}

fn algorithm_model(name: &str) -> Option<Model> {
    match name {
        "ggadm" => Some(Model::Gadm),
        "gegadm" => Some(Model::Egadm),
        "gpsodm" => Some(Model::Psodm),
        _ => None,
    }
}

fn parse_init(name: &str) -> Result<Init> {
    match name {
        "uniform" => Ok(Init::UniformRandom),
        "zero" => Ok(Init::Zero),
        other => Err(Error::Config(format!("unknown init {other:?}"))),
    }
}

/// Runs a single cell. The cell seed is
/// `master ⊕ stable_hash("dataset|algorithm|repeat")`, so re-running a cell
/// reproduces it exactly (wall time aside).
pub fn run_cell(config: &ExperimentConfig, key: &CellKey, f: &HdfFunction) -> ResultRecord {
    let started = Instant::now();
    let seed = cell_seed(
        config.master_seed,
        &format!("{}|{}|{}", key.dataset, key.algorithm, key.repeat),
    );
    let mut record = ResultRecord {
        dataset: key.dataset.clone(),
        algorithm: key.algorithm.clone(),
        repeat: key.repeat,
        seed,
        mu: None,
        community_count: None,
        nmi: None,
        fccn: None,
        modularity: None,
        wall_time_ms: 0.0,
        converged: None,
        failed: None,
    };
    match run_cell_inner(config, key, f, seed, &mut record) {
        Ok(()) => {}
        Err(e) => record.failed = Some(e.to_string()),
    }
    record.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    record
}

fn run_cell_inner(
    config: &ExperimentConfig,
    key: &CellKey,
    f: &HdfFunction,
    seed: u64,
    record: &mut ResultRecord,
) -> Result<()> {
    let spec = dataset_by_id(config, &key.dataset)?;
    record.mu = spec.mu;
    let (graph, truth) = build_dataset(config, &spec, key.repeat)?;
    let n = graph.node_count();

    let (cover, converged) = if key.algorithm == "lpa" {
        let cover = lpa_detect(&graph, &LpaConfig::new(cell_seed(seed, "lpa")))?;
        (cover, None)
    } else {
        let model = algorithm_model(&key.algorithm).ok_or_else(|| {
            Error::Config(format!("unknown algorithm {:?}", key.algorithm))
        })?;
        let stream = build_event_stream(&graph, config.model.epochs, cell_seed(seed, "stream"))?;
        let mut model_cfg = ModelConfig::new(model, f.beta());
        model_cfg.p_m = config.model.p_m;
        model_cfg.c_accel = config.model.c_accel;
        model_cfg.source_credit = config.model.source_credit;
        model_cfg.init = parse_init(&config.model.init)?;
        model_cfg.epochs = config.model.epochs;
        model_cfg.runs = config.model.runs;
        model_cfg.early_stop = config.model.early_stop;
        model_cfg.seed = cell_seed(seed, "diffusion");
        // Runs parallelize at the cell level already; keep the inner loop
        // sequential to avoid pool oversubscription.
        let outcome = run_diffusion_exec(Execution::Sequential, &model_cfg, &graph, &stream, f)?;
        let game_cfg = config.game.to_config(n, cell_seed(seed, "game"))?;
        let detect = detect_communities(&graph, &outcome.info, &game_cfg)?;
        let converged = detect.converged();
        (detect.cover, Some(converged))
    };

    record.community_count = Some(cover.len());
    record.converged = converged;

    let want = |m: &str| config.metrics.iter().any(|x| x == m);
    if let Some(truth) = &truth {
        if want("nmi") {
            record.nmi = Some(nmi_overlapping(&cover, truth, n)?);
        }
        if want("fccn") {
            record.fccn = Some(fccn(&cover, truth, n)?);
        }
    }
    if (want("modularity") || want("q"))
        && cover.mode() == CoverMode::Disjoint
        && cover.is_partition(n)
        && graph.edge_count() > 0
    {
        record.modularity = Some(modularity(&graph, &cover)?);
    }
    Ok(())
}

/// Runs every cell of the experiment; cells are independent jobs.
pub fn run_pipeline_exec(
    config: &ExperimentConfig,
    exec: Execution,
) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let f = config.build_hdf()?;
    let cells = expand_cells(config);
    Ok(map_indexed(exec, cells.len(), |i| {
        run_cell(config, &cells[i], &f)
    }))
}

pub fn run_pipeline(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    run_pipeline_exec(config, Execution::default())
}

/// One `(dataset, algorithm)` aggregation row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub algorithm: String,
    pub n_records: usize,
    pub nmi_mean: Option<f64>,
    pub nmi_max: Option<f64>,
    pub nmi_n_valid: usize,
    pub fccn_mean: Option<f64>,
    pub fccn_max: Option<f64>,
    pub fccn_n_valid: usize,
    pub modularity_mean: Option<f64>,
    pub modularity_max: Option<f64>,
    pub modularity_n_valid: usize,
    pub mean_wall_time_ms: f64,
    pub mean_community_count: Option<f64>,
}

fn aggregate(values: &[f64]) -> (Option<f64>, Option<f64>, usize) {
    if values.is_empty() {
        return (None, None, 0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (Some(mean), Some(max), values.len())
}

/// Per-(dataset, algorithm) means and maxima. Records with a null metric
/// are excluded from that metric's aggregation but still counted in
/// `n_records`.
pub fn emit_summary(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, String)> = records
        .iter()
        .map(|r| (r.dataset.clone(), r.algorithm.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let mut rows = Vec::new();
    for (dataset, algorithm) in keys {
        let group: Vec<&ResultRecord> = records
            .iter()
            .filter(|r| r.dataset == dataset && r.algorithm == algorithm)
            .collect();
        let nmi_vals: Vec<f64> = group.iter().filter_map(|r| r.nmi).collect();
        let fccn_vals: Vec<f64> = group.iter().filter_map(|r| r.fccn).collect();
        let q_vals: Vec<f64> = group.iter().filter_map(|r| r.modularity).collect();
        let cc_vals: Vec<f64> = group
            .iter()
            .filter_map(|r| r.community_count.map(|c| c as f64))
            .collect();
        let (nmi_mean, nmi_max, nmi_n_valid) = aggregate(&nmi_vals);
        let (fccn_mean, fccn_max, fccn_n_valid) = aggregate(&fccn_vals);
        let (modularity_mean, modularity_max, modularity_n_valid) = aggregate(&q_vals);
        rows.push(SummaryRow {
            dataset,
            algorithm,
            n_records: group.len(),
            nmi_mean,
            nmi_max,
            nmi_n_valid,
            fccn_mean,
            fccn_max,
            fccn_n_valid,
            modularity_mean,
            modularity_max,
            modularity_n_valid,
            mean_wall_time_ms: group.iter().map(|r| r.wall_time_ms).sum::<f64>()
                / group.len() as f64,
            mean_community_count: aggregate(&cc_vals).0,
        });
    }
    rows
}

/// One μ-sweep curve point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePoint {
    pub mu: f64,
    pub algorithm: String,
    pub mean_nmi: f64,
    pub stderr: f64,
}

/// Aggregates swept records (those carrying μ) into per-(μ, algorithm)
/// mean NMI with its standard error.
pub fn emit_curve(records: &[ResultRecord]) -> Vec<CurvePoint> {
    let mut keys: Vec<(String, String)> = records
        .iter()
        .filter(|r| r.mu.is_some())
        .map(|r| (format!("{:.6}", r.mu.unwrap()), r.algorithm.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let mut points = Vec::new();
    for (mu_key, algorithm) in keys {
        let vals: Vec<f64> = records
            .iter()
            .filter(|r| {
                r.algorithm == algorithm
                    && r.mu.is_some_and(|m| format!("{m:.6}") == mu_key)
            })
            .filter_map(|r| r.nmi)
            .collect();
        if vals.is_empty() {
            continue;
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (vals.len().max(2) - 1) as f64;
        points.push(CurvePoint {
            mu: mu_key.parse().expect("formatted above"),
            algorithm,
            mean_nmi: mean,
            stderr: (var / vals.len() as f64).sqrt(),
        });
    }
    points
}

/// Writes `records.csv`, `records.jsonl`, `summary.csv` and, when swept
/// records exist, `curve_gn.csv` into `out_dir`.
pub fn write_outputs(records: &[ResultRecord], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;

    let mut csv_writer = csv::Writer::from_path(out_dir.join("records.csv"))
        .map_err(|e| Error::Format(format!("records.csv: {e}")))?;
    for r in records {
        csv_writer
            .serialize(r)
            .map_err(|e| Error::Format(format!("records.csv: {e}")))?;
    }
    csv_writer
        .flush()
        .map_err(|e| Error::Format(format!("records.csv: {e}")))?;

    let mut jsonl = fs::File::create(out_dir.join("records.jsonl"))?;
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(jsonl, "{line}")?;
    }

    let mut summary = csv::Writer::from_path(out_dir.join("summary.csv"))
        .map_err(|e| Error::Format(format!("summary.csv: {e}")))?;
    for row in emit_summary(records) {
        summary
            .serialize(row)
            .map_err(|e| Error::Format(format!("summary.csv: {e}")))?;
    }
    summary
        .flush()
        .map_err(|e| Error::Format(format!("summary.csv: {e}")))?;

    let curve = emit_curve(records);
    if !curve.is_empty() {
        let mut w = csv::Writer::from_path(out_dir.join("curve_gn.csv"))
            .map_err(|e| Error::Format(format!("curve_gn.csv: {e}")))?;
        for p in curve {
            w.serialize(p)
                .map_err(|e| Error::Format(format!("curve_gn.csv: {e}")))?;
        }
        w.flush()
            .map_err(|e| Error::Format(format!("curve_gn.csv: {e}")))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            master_seed: 7,
            repeats: 2,
            algorithms: vec!["ggadm".into(), "lpa".into()],
            ..ExperimentConfig::default()
        };
        cfg.datasets.push(DatasetSpec {
            id: "karate".into(),
            kind: "karate".into(),
            mu: None,
            n: None,
            p: None,
            graph: None,
            truth: None,
            one_based: false,
        });
        cfg.model.epochs = 3;
        cfg.model.runs = 2;
        cfg
    }

    #[test]
    fn cell_count_is_cartesian_product() {
        let cfg = tiny_config();
        assert_eq!(expand_cells(&cfg).len(), 1 * 2 * 2);
        let records = run_pipeline(&cfg).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.failed.is_none()), "{records:?}");
    }

    #[test]
    fn cells_rerun_identically() {
        let cfg = tiny_config();
        let f = cfg.build_hdf().unwrap();
        let records = run_pipeline(&cfg).unwrap();
        for key in expand_cells(&cfg) {
            let again = run_cell(&cfg, &key, &f);
            let original = records
                .iter()
                .find(|r| {
                    r.dataset == key.dataset
                        && r.algorithm == key.algorithm
                        && r.repeat == key.repeat
                })
                .unwrap();
            assert_eq!(again.without_wall_time(), original.without_wall_time());
        }
    }

    #[test]
    fn sweep_expands_datasets() {
        let mut cfg = tiny_config();
        cfg.datasets.clear();
        cfg.sweep = Some(SweepSpec {
            mu: vec![0.1, 0.3],
        });
        cfg.algorithms = vec!["lpa".into()];
        let cells = expand_cells(&cfg);
        assert_eq!(cells.len(), 2 * 1 * 2);
        let records = run_pipeline(&cfg).unwrap();
        let curve = emit_curve(&records);
        assert_eq!(curve.len(), 2);
        assert!(curve[0].mu < curve[1].mu);
    }

    #[test]
    fn summary_null_policy() {
        let r = |nmi: Option<f64>| ResultRecord {
            dataset: "d".into(),
            algorithm: "a".into(),
            repeat: 0,
            seed: 0,
            mu: None,
            community_count: Some(3),
            nmi,
            fccn: None,
            modularity: None,
            wall_time_ms: 1.0,
            converged: None,
            failed: None,
        };
        let rows = emit_summary(&[r(Some(0.4)), r(Some(0.6)), r(None)]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_records, 3);
        assert_eq!(rows[0].nmi_n_valid, 2);
        assert!((rows[0].nmi_mean.unwrap() - 0.5).abs() < 1e-12);
        assert!((rows[0].nmi_max.unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(rows[0].fccn_n_valid, 0);
        assert!(rows[0].fccn_mean.is_none());
    }

    #[test]
    fn single_record_summary_is_itself() {
        let r = ResultRecord {
            dataset: "d".into(),
            algorithm: "a".into(),
            repeat: 0,
            seed: 1,
            mu: None,
            community_count: Some(5),
            nmi: Some(0.9),
            fccn: Some(0.8),
            modularity: Some(0.3),
            wall_time_ms: 2.0,
            converged: Some(true),
            failed: None,
        };
        let rows = emit_summary(&[r.clone()]);
        assert_eq!(rows[0].nmi_mean, r.nmi);
        assert_eq!(rows[0].fccn_max, r.fccn);
        assert_eq!(rows[0].modularity_mean, r.modularity);
        assert_eq!(rows[0].mean_community_count, Some(5.0));
    }

    #[test]
    fn failed_cells_keep_pipeline_running() {
        let mut cfg = tiny_config();
        cfg.algorithms = vec!["nonsense".into(), "lpa".into()];
        let records = run_pipeline(&cfg).unwrap();
        assert_eq!(records.len(), 4);
        let failed: Vec<_> = records.iter().filter(|r| r.failed.is_some()).collect();
        assert_eq!(failed.len(), 2);
        assert!(failed.iter().all(|r| r.algorithm == "nonsense"));
    }

    #[test]
    fn outputs_round_trip_through_csv() {
        let cfg = tiny_config();
        let records = run_pipeline(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_outputs(&records, dir.path()).unwrap();
        assert!(dir.path().join("records.csv").exists());
        assert!(dir.path().join("records.jsonl").exists());
        assert!(dir.path().join("summary.csv").exists());
        // Reload records from CSV and re-derive the summary.
        let mut rdr = csv::Reader::from_path(dir.path().join("records.csv")).unwrap();
        let reloaded: Vec<ResultRecord> = rdr.deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(reloaded.len(), records.len());
        let a = emit_summary(&records);
        let b = emit_summary(&reloaded);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.dataset, y.dataset);
            assert!((x.nmi_mean.unwrap_or(0.0) - y.nmi_mean.unwrap_or(0.0)).abs() < 1e-9);
            assert!(
                (x.mean_wall_time_ms - y.mean_wall_time_ms).abs()
                    < 1e-9 * x.mean_wall_time_ms.max(1.0)
            );
        }
    }
}
