//! Graph representation, timed contact streams, community covers and the
//! text formats they are exchanged in.
//!
//! Node ids are dense `0..n`. Input files with sparse or 1-based ids are
//! normalized on parse; the original labels are kept in an [`IdMap`] so
//! results can be related back to the source data.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub type NodeId = usize;

/// Undirected simple graph: no self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Edges stored as (u, v) with u < v, sorted.
    edges: Vec<(NodeId, NodeId)>,
    /// Sorted neighbor list per node, consistent with `edges`.
    adj: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph over `n` nodes, deduplicating edges and dropping
    /// self-loops. Returns an error if an endpoint is out of range.
    pub fn from_edges(n: usize, raw: &[(NodeId, NodeId)]) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for &(u, v) in raw {
            if u >= n || v >= n {
                return Err(Error::Range(format!(
                    "edge ({u}, {v}) outside node range 0..{n}"
                )));
            }
            if u == v {
                continue;
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(NodeId, NodeId)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Writes the edge list, one `u v` pair per line.
    pub fn write_edge_list<W: Write>(&self, w: &mut W, one_based: bool) -> Result<()> {
        let off = usize::from(one_based);
        for &(u, v) in &self.edges {
            writeln!(w, "{} {}", u + off, v + off)?;
        }
        Ok(())
    }
}

/// Where an event stream came from; decides how diffusion models resolve
/// the neighbourhood of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamSource {
    /// Synthesized from a static graph; the static adjacency is authoritative.
    Static,
    /// Read from timed contacts; neighbourhoods accumulate over time.
    Dynamic,
}

/// One timed contact between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub u: NodeId,
    pub v: NodeId,
    pub t: u64,
}

/// Time-ordered multiset of contacts. Duplicate `(u, v, t)` entries are
/// allowed; events are non-decreasing in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventStream {
    node_count: usize,
    events: Vec<Event>,
    source: StreamSource,
    /// Number of events per epoch, when the stream has a natural epoch
    /// structure (one pass over a static edge set).
    epoch_len: Option<usize>,
}

impl EventStream {
    pub fn new(node_count: usize, mut events: Vec<Event>, source: StreamSource) -> EventStream {
        // Stable: equal-time events keep their input order.
        events.sort_by_key(|e| e.t);
        EventStream {
            node_count,
            events,
            source,
            epoch_len: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn source(&self) -> StreamSource {
        self.source
    }

    /// Events per epoch: the edge count for streams built from a static
    /// graph, otherwise the whole stream counts as a single epoch.
    pub fn epoch_len(&self) -> usize {
        self.epoch_len.unwrap_or_else(|| self.events.len().max(1))
    }
}

/// Unrolls a static graph into `epochs` timed passes over its edge set.
///
/// Epoch `k` covers times `k*|E| .. (k+1)*|E| - 1` and visits every edge
/// exactly once, in an independent uniform random order. Deterministic for
/// a fixed seed.
pub fn build_event_stream(graph: &Graph, epochs: usize, seed: u64) -> Result<EventStream> {
    if epochs == 0 {
        return Err(Error::Argument("epochs must be positive".into()));
    }
    if graph.edge_count() == 0 {
        return Err(Error::Argument("graph has no edges".into()));
    }
    let m = graph.edge_count();
    let mut rng = rng_from_seed(seed);
    let mut events = Vec::with_capacity(epochs * m);
    let mut order: Vec<usize> = (0..m).collect();
    for k in 0..epochs {
        order.shuffle(&mut rng);
        for (slot, &idx) in order.iter().enumerate() {
            let (u, v) = graph.edges()[idx];
            events.push(Event {
                u,
                v,
                t: (k * m + slot) as u64,
            });
        }
    }
    let mut stream = EventStream::new(graph.node_count(), events, StreamSource::Static);
    stream.epoch_len = Some(m);
    Ok(stream)
}

/// Mapping between dense internal node ids and the labels used in an input
/// file. Identity when the file was already dense and 0-based.
#[derive(Debug, Clone)]
pub struct IdMap {
    original: Vec<u64>,
    lookup: BTreeMap<u64, NodeId>,
}

impl IdMap {
    fn from_sorted(original: Vec<u64>) -> IdMap {
        let lookup = original
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i))
            .collect();
        IdMap { original, lookup }
    }

    pub fn identity(n: usize) -> IdMap {
        IdMap::from_sorted((0..n as u64).collect())
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.original.iter().enumerate().all(|(i, &o)| i as u64 == o)
    }

    /// Original label of a dense id.
    pub fn original(&self, id: NodeId) -> u64 {
        self.original[id]
    }

    /// Dense id of an original label, if present.
    pub fn dense(&self, original: u64) -> Option<NodeId> {
        self.lookup.get(&original).copied()
    }
}

/// Result of parsing an edge-list file.
#[derive(Debug)]
pub enum ParsedInput {
    Static(Graph),
    Temporal(EventStream),
}

/// Parse outcome plus normalization metadata.
#[derive(Debug)]
pub struct ParseOutcome {
    pub input: ParsedInput,
    pub id_map: IdMap,
    pub dropped_self_loops: usize,
    pub deduped_edges: usize,
}

/// Parses an edge-list: `u v` (static) or `u v t` (timed) per line, ASCII
/// decimal, `#` comments, LF or CRLF. All lines must agree on the token
/// count. With `one_based`, node ids are shifted down by one.
pub fn parse_edge_list<R: BufRead>(reader: R, one_based: bool) -> Result<ParseOutcome> {
    let mut static_edges: Vec<(u64, u64)> = Vec::new();
    let mut timed: Vec<(u64, u64, u64)> = Vec::new();
    let mut arity: Option<usize> = None;
    let mut dropped_self_loops = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match arity {
            None => {
                if tokens.len() != 2 && tokens.len() != 3 {
                    return Err(Error::Format(format!(
                        "line {}: expected 2 or 3 tokens, got {}",
                        lineno + 1,
                        tokens.len()
                    )));
                }
                arity = Some(tokens.len());
            }
            Some(a) if a != tokens.len() => {
                return Err(Error::Format(format!(
                    "line {}: mixed {}-token and {}-token lines",
                    lineno + 1,
                    a,
                    tokens.len()
                )));
            }
            Some(_) => {}
        }
        let u = parse_node_token(tokens[0], one_based, lineno + 1)?;
        let v = parse_node_token(tokens[1], one_based, lineno + 1)?;
        if u == v {
            dropped_self_loops += 1;
            continue;
        }
        if tokens.len() == 2 {
            static_edges.push((u, v));
        } else {
            let t: i64 = tokens[2].parse().map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("bad time token {:?}: {e}", tokens[2]),
            })?;
            if t < 0 {
                return Err(Error::Range(format!("line {}: negative time {t}", lineno + 1)));
            }
            timed.push((u, v, t as u64));
        }
    }

    if arity.is_none() {
        return Err(Error::Format("empty edge list".into()));
    }

    // Normalize labels to dense 0-based ids (sorted by original label).
    let mut labels: BTreeSet<u64> = BTreeSet::new();
    for &(u, v) in &static_edges {
        labels.insert(u);
        labels.insert(v);
    }
    for &(u, v, _) in &timed {
        labels.insert(u);
        labels.insert(v);
    }
    let id_map = IdMap::from_sorted(labels.into_iter().collect());
    let n = id_map.len();

    if arity == Some(2) {
        let dense: Vec<(NodeId, NodeId)> = static_edges
            .iter()
            .map(|&(u, v)| (id_map.dense(u).unwrap(), id_map.dense(v).unwrap()))
            .collect();
        let before = dense
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect::<Vec<_>>();
        let graph = Graph::from_edges(n, &dense)?;
        let deduped = before.len() - graph.edge_count();
        Ok(ParseOutcome {
            input: ParsedInput::Static(graph),
            id_map,
            dropped_self_loops,
            deduped_edges: deduped,
        })
    } else {
        let events: Vec<Event> = timed
            .iter()
            .map(|&(u, v, t)| Event {
                u: id_map.dense(u).unwrap(),
                v: id_map.dense(v).unwrap(),
                t,
            })
            .collect();
        let stream = EventStream::new(n, events, StreamSource::Dynamic);
        Ok(ParseOutcome {
            input: ParsedInput::Temporal(stream),
            id_map,
            dropped_self_loops,
            deduped_edges: 0,
        })
    }
}

fn parse_node_token(tok: &str, one_based: bool, lineno: usize) -> Result<u64> {
    let raw: i64 = tok.parse().map_err(|e| Error::Parse {
        line: lineno,
        msg: format!("bad node token {tok:?}: {e}"),
    })?;
    let adjusted = if one_based { raw - 1 } else { raw };
    if adjusted < 0 {
        return Err(Error::Range(format!(
            "line {lineno}: node id {raw} is negative after adjustment"
        )));
    }
    Ok(adjusted as u64)
}

/// Whether a cover is a set of pairwise-disjoint communities or may assign
/// nodes to several.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Disjoint,
    Overlapping,
}

/// A set of nonempty node-sets. Identical communities are merged; storage
/// order is canonical (lexicographic), so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityCover {
    communities: Vec<BTreeSet<NodeId>>,
    mode: CoverMode,
}

impl CommunityCover {
    pub fn new(communities: Vec<BTreeSet<NodeId>>, mode: CoverMode) -> Result<CommunityCover> {
        let mut set: BTreeSet<BTreeSet<NodeId>> = BTreeSet::new();
        for c in communities {
            if c.is_empty() {
                return Err(Error::Argument("empty community".into()));
            }
            set.insert(c);
        }
        if set.is_empty() {
            return Err(Error::Argument("cover has no communities".into()));
        }
        let communities: Vec<BTreeSet<NodeId>> = set.into_iter().collect();
        if mode == CoverMode::Disjoint {
            let mut seen = BTreeSet::new();
            for c in &communities {
                for &v in c {
                    if !seen.insert(v) {
                        return Err(Error::Mode(format!(
                            "node {v} appears in two communities of a disjoint cover"
                        )));
                    }
                }
            }
        }
        Ok(CommunityCover { communities, mode })
    }

    /// Builds a disjoint cover from one label per node.
    pub fn from_labels(labels: &[usize]) -> CommunityCover {
        let mut groups: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().insert(v);
        }
        CommunityCover::new(groups.into_values().collect(), CoverMode::Disjoint)
            .expect("label grouping is always a valid disjoint cover")
    }

    pub fn communities(&self) -> &[BTreeSet<NodeId>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }

    pub fn max_node(&self) -> NodeId {
        self.communities
            .iter()
            .filter_map(|c| c.iter().next_back())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// True when the cover is disjoint and its union is exactly `0..n`.
    pub fn is_partition(&self, n: usize) -> bool {
        if self.mode != CoverMode::Disjoint {
            return false;
        }
        let total: usize = self.communities.iter().map(BTreeSet::len).sum();
        if total != n {
            return false;
        }
        self.communities
            .iter()
            .flat_map(|c| c.iter())
            .all(|&v| v < n)
    }

    /// Writes the per-line-community format.
    pub fn write<W: Write>(&self, w: &mut W, one_based: bool) -> Result<()> {
        let off = usize::from(one_based);
        for c in &self.communities {
            let line: Vec<String> = c.iter().map(|v| (v + off).to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Input layout for community files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommunityFormat {
    /// Every line lists the members of one community.
    PerLineCommunity,
    /// Every line is `node label`.
    NodeLabel,
}

/// Parses a community file. Node-label input always yields a disjoint
/// cover; per-line input is marked overlapping exactly when some node
/// appears in more than one community.
pub fn parse_communities<R: BufRead>(
    reader: R,
    format: CommunityFormat,
    one_based: bool,
) -> Result<CommunityCover> {
    let mut lines: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad token {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        if !ids.is_empty() {
            lines.push(ids);
        }
    }
    if lines.is_empty() {
        return Err(Error::Format("empty community file".into()));
    }

    let adjust = |raw: i64| -> Result<NodeId> {
        let adj = if one_based { raw - 1 } else { raw };
        if adj < 0 {
            return Err(Error::Range(format!(
                "id {raw} is negative after adjustment"
            )));
        }
        Ok(adj as NodeId)
    };

    match format {
        CommunityFormat::PerLineCommunity => {
            let mut communities = Vec::new();
            for ids in &lines {
                let c = ids
                    .iter()
                    .map(|&id| adjust(id))
                    .collect::<Result<BTreeSet<NodeId>>>()?;
                communities.push(c);
            }
            // Duplicate community lines collapse before the overlap check,
            // so a repeated line does not flag the cover as overlapping.
            let uniq: BTreeSet<BTreeSet<NodeId>> = communities.into_iter().collect();
            let mut seen = BTreeSet::new();
            let mut any_overlap = false;
            for c in &uniq {
                for &v in c {
                    if !seen.insert(v) {
                        any_overlap = true;
                    }
                }
            }
            let mode = if any_overlap {
                CoverMode::Overlapping
            } else {
                CoverMode::Disjoint
            };
            CommunityCover::new(uniq.into_iter().collect(), mode)
        }
        CommunityFormat::NodeLabel => {
            let mut assignment: BTreeMap<NodeId, i64> = BTreeMap::new();
            for ids in &lines {
                if ids.len() != 2 {
                    return Err(Error::Format(format!(
                        "node-label line must have 2 tokens, got {}",
                        ids.len()
                    )));
                }
                let node = adjust(ids[0])?;
                let label = ids[1];
                if let Some(&prev) = assignment.get(&node) {
                    if prev != label {
                        return Err(Error::Format(format!(
                            "node {} listed with labels {prev} and {label}",
                            ids[0]
                        )));
                    }
                } else {
                    assignment.insert(node, label);
                }
            }
            let mut groups: BTreeMap<i64, BTreeSet<NodeId>> = BTreeMap::new();
            for (node, label) in assignment {
                groups.entry(label).or_default().insert(node);
            }
            CommunityCover::new(groups.into_values().collect(), CoverMode::Disjoint)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str, one_based: bool) -> ParseOutcome {
        parse_edge_list(Cursor::new(text), one_based).unwrap()
    }

    #[test]
    fn static_two_edges() {
        let out = parse("0 1\n1 2\n", false);
        let ParsedInput::Static(g) = out.input else {
            panic!("expected static graph");
        };
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn one_based_offset_identity() {
        let a = parse("0 1\n1 2\n", false);
        let b = parse("1 2\n2 3\n", true);
        let (ParsedInput::Static(ga), ParsedInput::Static(gb)) = (a.input, b.input) else {
            panic!("expected static graphs");
        };
        assert_eq!(ga, gb);
    }

    #[test]
    fn timed_lines_sort_by_time() {
        let out = parse("0 1 5\n2 3 1\n", false);
        let ParsedInput::Temporal(s) = out.input else {
            panic!("expected stream");
        };
        let ts: Vec<(NodeId, NodeId, u64)> = s.events().iter().map(|e| (e.u, e.v, e.t)).collect();
        assert_eq!(ts, vec![(2, 3, 1), (0, 1, 5)]);
        assert_eq!(s.source(), StreamSource::Dynamic);
    }

    #[test]
    fn mixed_arity_is_format_error() {
        let err = parse_edge_list(Cursor::new("0 1\n1 2 3\n"), false).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn non_integer_is_parse_error() {
        let err = parse_edge_list(Cursor::new("0 x\n"), false).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn negative_after_adjustment_is_range_error() {
        let err = parse_edge_list(Cursor::new("0 1\n"), true).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn self_loops_dropped_and_duplicates_deduped() {
        let out = parse("0 0\n0 1\n1 0\n0 1\n", false);
        let ParsedInput::Static(g) = out.input else {
            panic!()
        };
        assert_eq!(g.edge_count(), 1);
        assert_eq!(out.dropped_self_loops, 1);
        assert_eq!(out.deduped_edges, 2);
    }

    #[test]
    fn sparse_labels_normalize_densely() {
        let out = parse("5 900\n5 7\n", false);
        let ParsedInput::Static(g) = out.input else {
            panic!()
        };
        assert_eq!(g.node_count(), 3);
        assert!(!out.id_map.is_identity());
        assert_eq!(out.id_map.original(0), 5);
        assert_eq!(out.id_map.original(2), 900);
        assert_eq!(out.id_map.dense(7), Some(1));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf, false).unwrap();
        let out = parse_edge_list(Cursor::new(buf), false).unwrap();
        let ParsedInput::Static(g2) = out.input else {
            panic!()
        };
        assert_eq!(g.edges(), g2.edges());
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let total: usize = (0..g.node_count()).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn event_stream_counts_and_determinism() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = build_event_stream(&g, 2, 9).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.epoch_len(), 3);
        // Each edge appears exactly twice.
        let mut counts: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        for e in s.events() {
            *counts.entry((e.u.min(e.v), e.u.max(e.v))).or_default() += 1;
        }
        assert!(counts.values().all(|&c| c == 2));
        // Per-epoch multiset equals the edge set.
        for k in 0..2 {
            let mut epoch: Vec<(NodeId, NodeId)> = s.events()[k * 3..(k + 1) * 3]
                .iter()
                .map(|e| (e.u.min(e.v), e.u.max(e.v)))
                .collect();
            epoch.sort_unstable();
            assert_eq!(epoch.as_slice(), g.edges());
        }
        assert_eq!(s, build_event_stream(&g, 2, 9).unwrap());
        assert_ne!(s, build_event_stream(&g, 2, 10).unwrap());
    }

    #[test]
    fn event_stream_epoch_one_equals_edge_set() {
        let g = Graph::from_edges(4, &[(0, 3), (1, 2), (2, 3)]).unwrap();
        let s = build_event_stream(&g, 1, 0).unwrap();
        let mut seen: Vec<(NodeId, NodeId)> = s
            .events()
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen.as_slice(), g.edges());
    }

    #[test]
    fn event_stream_zero_epochs_rejected() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            build_event_stream(&g, 0, 0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn communities_per_line() {
        let c = parse_communities(
            Cursor::new("0 1 2\n3 4\n"),
            CommunityFormat::PerLineCommunity,
            false,
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.mode(), CoverMode::Disjoint);
        assert!(c.communities()[0].contains(&0));
    }

    #[test]
    fn communities_node_label_one_based() {
        let c = parse_communities(
            Cursor::new("1 1\n2 1\n3 2\n"),
            CommunityFormat::NodeLabel,
            true,
        )
        .unwrap();
        let sets: Vec<Vec<NodeId>> = c
            .communities()
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2]]);
        assert_eq!(c.mode(), CoverMode::Disjoint);
    }

    #[test]
    fn duplicate_communities_merge() {
        let c = parse_communities(
            Cursor::new("0 1 2\n0 1 2\n"),
            CommunityFormat::PerLineCommunity,
            false,
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.mode(), CoverMode::Disjoint);
    }

    #[test]
    fn conflicting_labels_rejected() {
        let err = parse_communities(
            Cursor::new("0 1\n0 2\n"),
            CommunityFormat::NodeLabel,
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn empty_community_file_rejected() {
        let err = parse_communities(
            Cursor::new("# nothing\n"),
            CommunityFormat::PerLineCommunity,
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn overlap_detected_in_per_line_format() {
        let c = parse_communities(
            Cursor::new("0 1 2\n2 3\n"),
            CommunityFormat::PerLineCommunity,
            false,
        )
        .unwrap();
        assert_eq!(c.mode(), CoverMode::Overlapping);
    }

    #[test]
    fn cover_round_trip() {
        let c = parse_communities(
            Cursor::new("0 1 2\n3 4\n"),
            CommunityFormat::PerLineCommunity,
            false,
        )
        .unwrap();
        let mut buf = Vec::new();
        c.write(&mut buf, false).unwrap();
        let c2 = parse_communities(Cursor::new(buf), CommunityFormat::PerLineCommunity, false)
            .unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn partition_check() {
        let c = CommunityCover::from_labels(&[0, 0, 1, 1]);
        assert!(c.is_partition(4));
        assert!(!c.is_partition(5));
    }
}
