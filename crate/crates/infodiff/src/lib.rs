//! Information diffusion on social-network graphs, and community detection
//! built on top of it.
//!
//! The crate has three layers:
//!
//! * **Diffusion engines** ([`diffusion`]): three models that propagate
//!   information along timed contact events — a crossover-based model
//!   (`Gadm`), its mutation-extended variant (`Egadm`) and a particle-swarm
//!   model with real-valued state vectors (`Psodm`) — plus the classic
//!   independent-cascade and linear-threshold baselines. Node fitness is
//!   measured by hyperplane-defined functions ([`hdf`]). Every run records
//!   how much information each node gained from each partner into an
//!   [`diffusion::InfoMatrix`].
//! * **Community game** ([`game`]): selfish agents maximise the information
//!   they share with their community, via best-response moves (join, leave,
//!   stay) until a local Nash equilibrium. Label propagation ([`lpa`])
//!   serves as an in-repo baseline.
//! * **Evaluation** ([`metrics`], [`pipeline`]): overlapping NMI, FCCN and
//!   modularity over generated (GN, Erdős–Rényi) and ingested benchmarks,
//!   with a reproducible experiment pipeline behind the `infodiff` CLI.
//!
//! Independent runs, Monte-Carlo trials and pipeline cells execute in
//! parallel through [`exec`] when the `parallel` feature (default) is
//! enabled; a sequential fallback is always available.

pub mod datasets;
pub mod diffusion;
pub mod error;
pub mod exec;
pub mod game;
pub mod generators;
pub mod graph;
pub mod hdf;
pub mod lpa;
pub mod metrics;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{CommunityCover, CoverMode, EventStream, Graph, NodeId};
pub use hdf::HdfFunction;
