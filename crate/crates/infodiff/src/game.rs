//! Community formation as a game of selfish agents.
//!
//! Every node is an agent whose utility is the information it received from
//! nodes sharing a community with it, normalized by `m` (default `|E|`).
//! Agents are picked uniformly at random and play their best response among
//! joining a graph-neighbor's community, leaving into a fresh singleton, or
//! staying put. The dynamics stop at a local Nash equilibrium: no agent can
//! improve within its local strategy space.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::diffusion::InfoMatrix;
use crate::error::{Error, Result};
use crate::graph::{CommunityCover, CoverMode, Graph, NodeId};
use crate::rng::rng_from_seed;

/// Community membership semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GameMode {
    /// Exactly one community per node; joining implies leaving.
    #[default]
    Disjoint,
    /// Nodes may hold several labels; each extra label costs `lambda`.
    Overlapping,
}

/// A move in the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    NoOp,
    Join(usize),
    Leave,
}

/// The strategy profile: per-node community labels plus the community
/// member sets they induce.
#[derive(Debug, Clone)]
pub struct GameState {
    labels: Vec<BTreeSet<usize>>,
    members: BTreeMap<usize, BTreeSet<NodeId>>,
    mode: GameMode,
    /// Utility normalizer (default `|E|`).
    m_norm: f64,
    /// Per-extra-label cost in overlapping mode.
    lambda: f64,
    next_id: usize,
}

impl GameState {
    /// Every node starts as its own singleton community.
    pub fn singletons(n: usize, mode: GameMode, m_norm: f64, lambda: f64) -> GameState {
        let labels = (0..n).map(|v| BTreeSet::from([v])).collect();
        let members = (0..n).map(|v| (v, BTreeSet::from([v]))).collect();
        GameState {
            labels,
            members,
            mode,
            m_norm,
            lambda,
            next_id: n,
        }
    }

    /// Builds a disjoint state from an explicit label per node.
    pub fn from_labels(labels: &[usize], m_norm: f64) -> GameState {
        let mut members: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            members.entry(l).or_default().insert(v);
        }
        let next_id = labels.iter().max().map_or(0, |&l| l + 1);
        GameState {
            labels: labels.iter().map(|&l| BTreeSet::from([l])).collect(),
            members,
            mode: GameMode::Disjoint,
            m_norm,
            lambda: 0.0,
            next_id,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self, v: NodeId) -> &BTreeSet<usize> {
        &self.labels[v]
    }

    pub fn mode(&self) -> GameMode {
        self.mode
    }

    fn shares(&self, i: NodeId, j: NodeId) -> bool {
        let (a, b) = if self.labels[i].len() <= self.labels[j].len() {
            (&self.labels[i], &self.labels[j])
        } else {
            (&self.labels[j], &self.labels[i])
        };
        a.iter().any(|l| b.contains(l))
    }

    fn remove_label(&mut self, v: NodeId, c: usize) {
        self.labels[v].remove(&c);
        if let Some(set) = self.members.get_mut(&c) {
            set.remove(&v);
            if set.is_empty() {
                self.members.remove(&c);
            }
        }
    }

    fn add_label(&mut self, v: NodeId, c: usize) {
        self.labels[v].insert(c);
        self.members.entry(c).or_default().insert(v);
    }

    /// Applies a move for agent `v`.
    pub fn apply(&mut self, v: NodeId, mv: Move) {
        match mv {
            Move::NoOp => {}
            Move::Join(c) => {
                if self.mode == GameMode::Disjoint {
                    for old in self.labels[v].clone() {
                        self.remove_label(v, old);
                    }
                }
                self.add_label(v, c);
            }
            Move::Leave => {
                for old in self.labels[v].clone() {
                    self.remove_label(v, old);
                }
                let fresh = self.next_id;
                self.next_id += 1;
                self.add_label(v, fresh);
            }
        }
    }

    /// The live communities as a cover. Identical member sets merge.
    pub fn cover(&self) -> CommunityCover {
        let mode = match self.mode {
            GameMode::Disjoint => CoverMode::Disjoint,
            GameMode::Overlapping => CoverMode::Overlapping,
        };
        CommunityCover::new(self.members.values().cloned().collect(), mode)
            .expect("game state always holds nonempty communities")
    }
}

/// Utility of agent `i`: received information from community-sharing nodes
/// over `m`, minus the label cost in overlapping mode.
pub fn utility(i: NodeId, state: &GameState, info: &InfoMatrix) -> f64 {
    let mut sum = 0.0;
    for (&j, &x) in info.row(i) {
        if state.shares(i, j) {
            sum += x;
        }
    }
    let mut u = sum / state.m_norm;
    if state.mode == GameMode::Overlapping {
        u -= state.lambda * (state.labels[i].len() as f64 - 1.0);
    }
    u
}

/// Best response of agent `i` within its local strategy space: the current
/// strategy, joining any community holding a graph-neighbor, or leaving
/// into a fresh singleton. Ties prefer staying, then the lowest community
/// id; leaving requires a strict improvement over every alternative.
pub fn best_response(i: NodeId, state: &GameState, info: &InfoMatrix, graph: &Graph) -> Move {
    // Candidate communities: those of the graph-neighbors, minus our own.
    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for &w in graph.neighbors(i) {
        for &c in &state.labels[w] {
            if !state.labels[i].contains(&c) {
                candidates.insert(c);
            }
        }
    }

    let row = info.row(i);
    let u_current = utility(i, state, info);
    let mut best_mv = Move::NoOp;
    let mut best_u = u_current;

    match state.mode {
        GameMode::Disjoint => {
            // Mass an agent would share inside each candidate community.
            let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
            for (&j, &x) in row {
                for &c in &state.labels[j] {
                    *mass.entry(c).or_insert(0.0) += x;
                }
            }
            for &c in &candidates {
                let u = mass.get(&c).copied().unwrap_or(0.0) / state.m_norm;
                if u > best_u {
                    best_u = u;
                    best_mv = Move::Join(c);
                }
            }
        }
        GameMode::Overlapping => {
            for &c in &candidates {
                let mut sum = 0.0;
                for (&j, &x) in row {
                    if state.shares(i, j) || state.labels[j].contains(&c) {
                        sum += x;
                    }
                }
                let u = sum / state.m_norm - state.lambda * state.labels[i].len() as f64;
                if u > best_u {
                    best_u = u;
                    best_mv = Move::Join(c);
                }
            }
        }
    }

    // Leaving into a fresh singleton shares with nobody.
    if 0.0 > best_u {
        best_mv = Move::Leave;
    }
    best_mv
}

/// How a detection run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// A full pass over all agents found no improving move.
    VerifiedNash,
    /// The stall threshold fired on a graph too large for the exact sweep.
    Stalled,
    /// The pick budget ran out; the state may not be an equilibrium.
    PickLimit,
}

/// Result of [`detect_communities`].
#[derive(Debug, Clone)]
pub struct DetectOutcome {
    pub cover: CommunityCover,
    pub termination: Termination,
    /// Random agent picks consumed.
    pub picks: usize,
    /// Final strategy profile, for post-hoc equilibrium checks.
    pub state: GameState,
}

impl DetectOutcome {
    pub fn converged(&self) -> bool {
        self.termination != Termination::PickLimit
    }
}

/// Knobs of the best-response loop.
#[derive(Debug, Clone)]
pub struct GameConfig {
    /// Hard cap on random agent picks.
    pub max_picks: usize,
    /// Consecutive no-improvement picks before attempting termination.
    pub stall_threshold: usize,
    /// Largest node count for which the exact Nash sweep runs.
    pub exact_sweep_n_max: usize,
    pub seed: u64,
    pub mode: GameMode,
    /// Overrides the `|E|` normalizer when set.
    pub m_norm: Option<f64>,
    /// Overrides the default label cost (overlapping mode).
    pub lambda: Option<f64>,
}

impl GameConfig {
    pub fn for_nodes(n: usize, seed: u64) -> GameConfig {
        GameConfig {
            max_picks: 400 * n.max(16),
            stall_threshold: (2 * n).max(64),
            exact_sweep_n_max: 1024,
            seed,
            mode: GameMode::Disjoint,
            m_norm: None,
            lambda: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_picks == 0 || self.stall_threshold == 0 || self.exact_sweep_n_max == 0 {
            return Err(Error::Config(
                "max_picks, stall_threshold and exact_sweep_n_max must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Runs best-response dynamics from all-singletons until a local Nash
/// equilibrium (or the pick budget). Deterministic for a fixed seed.
pub fn detect_communities(
    graph: &Graph,
    info: &InfoMatrix,
    config: &GameConfig,
) -> Result<DetectOutcome> {
    config.validate()?;
    let n = graph.node_count();
    if info.n() != n {
        return Err(Error::Config(format!(
            "info matrix covers {} nodes, graph has {n}",
            info.n()
        )));
    }
    if info.run_count() == 0 {
        return Err(Error::State("information matrix is not finalized".into()));
    }
    if n == 0 {
        return Err(Error::Argument("empty graph".into()));
    }

    let m_norm = config
        .m_norm
        .unwrap_or_else(|| (graph.edge_count() as f64).max(1.0));
    let lambda = match config.mode {
        GameMode::Disjoint => 0.0,
        GameMode::Overlapping => config
            .lambda
            .unwrap_or_else(|| info.nonzero_mean() / m_norm),
    };
    let mut state = GameState::singletons(n, config.mode, m_norm, lambda);
    let mut rng = rng_from_seed(config.seed);

    let mut picks = 0usize;
    let mut consecutive_noop = 0usize;
    let termination = loop {
        if picks >= config.max_picks {
            break Termination::PickLimit;
        }
        let agent = rng.random_range(0..n);
        picks += 1;
        let mv = best_response(agent, &state, info, graph);
        if mv == Move::NoOp {
            consecutive_noop += 1;
        } else {
            apply_improving(&mut state, agent, mv, info);
            consecutive_noop = 0;
        }
        if consecutive_noop >= config.stall_threshold {
            if n <= config.exact_sweep_n_max {
                let mut improved = false;
                for agent in 0..n {
                    let mv = best_response(agent, &state, info, graph);
                    if mv != Move::NoOp {
                        apply_improving(&mut state, agent, mv, info);
                        improved = true;
                    }
                }
                if !improved {
                    break Termination::VerifiedNash;
                }
                consecutive_noop = 0;
            } else {
                break Termination::Stalled;
            }
        }
    };

    Ok(DetectOutcome {
        cover: state.cover(),
        termination,
        picks,
        state,
    })
}

fn apply_improving(state: &mut GameState, agent: NodeId, mv: Move, info: &InfoMatrix) {
    let before = utility(agent, state, info);
    state.apply(agent, mv);
    let after = utility(agent, state, info);
    debug_assert!(
        after > before,
        "applied move must strictly improve the mover ({before} -> {after})"
    );
    let _ = (before, after);
}

/// Literal local-Nash check: re-evaluates every candidate of every agent by
/// applying it to a copied state, independently of the incremental
/// evaluation inside [`best_response`].
pub fn verify_local_nash(state: &GameState, info: &InfoMatrix, graph: &Graph) -> bool {
    let n = state.node_count();
    for i in 0..n {
        let u_current = utility(i, state, info);
        let mut candidates: Vec<Move> = vec![Move::Leave];
        let mut seen = BTreeSet::new();
        for &w in graph.neighbors(i) {
            for &c in state.labels(w) {
                if !state.labels(i).contains(&c) && seen.insert(c) {
                    candidates.push(Move::Join(c));
                }
            }
        }
        for mv in candidates {
            let mut probe = state.clone();
            probe.apply(i, mv);
            if utility(i, &probe, info) > u_current + 1e-12 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_pair() -> (Graph, InfoMatrix) {
        // Two disjoint 5-cliques; unit information on every intra pair.
        let mut edges = Vec::new();
        let mut entries = Vec::new();
        for base in [0usize, 5] {
            for a in base..base + 5 {
                for b in (a + 1)..base + 5 {
                    edges.push((a, b));
                    entries.push((a, b, 1.0));
                    entries.push((b, a, 1.0));
                }
            }
        }
        let graph = Graph::from_edges(10, &edges).unwrap();
        let info = InfoMatrix::from_entries(10, &entries, 1).unwrap();
        (graph, info)
    }

    #[test]
    fn utility_matches_hand_computation() {
        // m = 2, I[0][1] = 4, I[0][2] = 1. Grouped with node 1 only:
        // U = 4/2 = 2; grouped with both: U = 5/2 = 2.5.
        let info = InfoMatrix::from_entries(3, &[(0, 1, 4.0), (0, 2, 1.0)], 1).unwrap();
        let state = GameState::from_labels(&[7, 7, 9], 2.0);
        assert_eq!(utility(0, &state, &info), 2.0);
        let state = GameState::from_labels(&[7, 7, 7], 2.0);
        assert_eq!(utility(0, &state, &info), 2.5);
    }

    #[test]
    fn utility_zero_matrix_is_zero() {
        let info = InfoMatrix::from_entries(4, &[], 1).unwrap();
        let state = GameState::from_labels(&[0, 0, 0, 0], 3.0);
        for i in 0..4 {
            assert_eq!(utility(i, &state, &info), 0.0);
        }
    }

    #[test]
    fn best_response_prefers_own_clique() {
        let (graph, info) = clique_pair();
        // Node 0 misplaced into the second clique's community.
        let state = GameState::from_labels(&[200, 100, 100, 100, 100, 200, 200, 200, 200, 200], 20.0);
        assert_eq!(best_response(0, &state, &info, &graph), Move::Join(100));
    }

    #[test]
    fn best_response_all_ties_is_noop() {
        let (graph, _) = clique_pair();
        let info = InfoMatrix::from_entries(10, &[], 1).unwrap();
        let state = GameState::singletons(10, GameMode::Disjoint, 20.0, 0.0);
        for i in 0..10 {
            assert_eq!(best_response(i, &state, &info, &graph), Move::NoOp);
        }
    }

    #[test]
    fn best_response_isolated_node_cannot_join() {
        let graph = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let info = InfoMatrix::from_entries(3, &[(2, 0, 5.0)], 1).unwrap();
        let state = GameState::singletons(3, GameMode::Disjoint, 1.0, 0.0);
        // Node 2 has information from node 0 but no edge, so its local
        // strategy space holds only leave and no-op; both yield 0.
        assert_eq!(best_response(2, &state, &info, &graph), Move::NoOp);
    }

    #[test]
    fn zero_information_yields_singletons() {
        let (graph, _) = clique_pair();
        let info = InfoMatrix::from_entries(10, &[], 1).unwrap();
        let out = detect_communities(&graph, &info, &GameConfig::for_nodes(10, 5)).unwrap();
        assert_eq!(out.termination, Termination::VerifiedNash);
        assert_eq!(out.cover.len(), 10);
        assert!(out.cover.is_partition(10));
    }

    #[test]
    fn two_cliques_are_recovered_exactly() {
        let (graph, info) = clique_pair();
        for seed in 0..20 {
            let out = detect_communities(&graph, &info, &GameConfig::for_nodes(10, seed)).unwrap();
            assert!(out.converged(), "seed {seed} hit the pick limit");
            assert_eq!(out.termination, Termination::VerifiedNash);
            let sets: Vec<Vec<NodeId>> = out
                .cover
                .communities()
                .iter()
                .map(|c| c.iter().copied().collect())
                .collect();
            assert_eq!(
                sets,
                vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]],
                "seed {seed}"
            );
            assert!(verify_local_nash(&out.state, &info, &graph));
        }
    }

    #[test]
    fn detection_is_deterministic() {
        let (graph, info) = clique_pair();
        let a = detect_communities(&graph, &info, &GameConfig::for_nodes(10, 42)).unwrap();
        let b = detect_communities(&graph, &info, &GameConfig::for_nodes(10, 42)).unwrap();
        assert_eq!(a.cover, b.cover);
        assert_eq!(a.picks, b.picks);
    }

    #[test]
    fn unfinalized_info_is_state_error() {
        let (graph, _) = clique_pair();
        let info = InfoMatrix::from_entries(10, &[], 0).unwrap();
        assert!(matches!(
            detect_communities(&graph, &info, &GameConfig::for_nodes(10, 0)),
            Err(Error::State(_))
        ));
    }

    #[test]
    fn overlapping_mode_respects_label_cost() {
        // Node 3 receives 2.0 from node 0 and 1.0 from node 1. With
        // lambda = 1.5 the first membership pays off (2 - 1.5 > 0) but the
        // marginal second one does not (1 - 1.5 < 0).
        let graph = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]).unwrap();
        let info =
            InfoMatrix::from_entries(4, &[(3, 0, 2.0), (3, 1, 1.0), (0, 1, 1.0)], 1).unwrap();
        let mut state = GameState::singletons(4, GameMode::Overlapping, 1.0, 1.5);
        let mv = best_response(3, &state, &info, &graph);
        assert!(matches!(mv, Move::Join(_)), "got {mv:?}");
        state.apply(3, mv);
        assert!(state.shares(3, 0));
        assert_eq!(best_response(3, &state, &info, &graph), Move::NoOp);
        // With zero lambda the second membership becomes attractive too.
        let mut free = GameState::singletons(4, GameMode::Overlapping, 1.0, 0.0);
        free.apply(3, best_response(3, &free, &info, &graph));
        let mv = best_response(3, &free, &info, &graph);
        assert!(matches!(mv, Move::Join(_)), "got {mv:?}");
        free.apply(3, mv);
        assert!(free.shares(3, 0) && free.shares(3, 1));
    }

    #[test]
    fn overlap_join_keeps_existing_labels() {
        let mut state = GameState::singletons(2, GameMode::Overlapping, 1.0, 0.0);
        state.apply(0, Move::Join(1));
        assert_eq!(state.labels(0).len(), 2);
        state.apply(0, Move::Leave);
        assert_eq!(state.labels(0).len(), 1);
        assert!(!state.labels(0).contains(&1));
    }
}
