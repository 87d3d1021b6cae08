//! Community-quality metrics: overlapping NMI, FCCN and modularity.

use crate::error::{Error, Result};
use crate::graph::{CommunityCover, CoverMode, Graph};

fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Entropy of a binary membership variable with `k` members out of `n`.
fn h_binary(k: usize, n: usize) -> f64 {
    let p = k as f64 / n as f64;
    h(p) + h(1.0 - p)
}

/// 2x2 joint node counts of two communities.
struct JointCounts {
    n11: usize,
    n10: usize,
    n01: usize,
    n00: usize,
    n: usize,
}

impl JointCounts {
    fn new(
        a: &std::collections::BTreeSet<usize>,
        b: &std::collections::BTreeSet<usize>,
        n: usize,
    ) -> JointCounts {
        let n11 = a.intersection(b).count();
        let n10 = a.len() - n11;
        let n01 = b.len() - n11;
        let n00 = n - n11 - n10 - n01;
        JointCounts {
            n11,
            n10,
            n01,
            n00,
            n,
        }
    }

    fn p(&self, count: usize) -> f64 {
        count as f64 / self.n as f64
    }

    fn joint_entropy(&self) -> f64 {
        h(self.p(self.n11)) + h(self.p(self.n10)) + h(self.p(self.n01)) + h(self.p(self.n00))
    }

    /// Pairing constraint from the overlapping-NMI definition: the
    /// agreeing cells must carry at least as much entropy as the
    /// disagreeing ones, otherwise the pair conveys anti-correlation.
    fn admissible(&self) -> bool {
        h(self.p(self.n11)) + h(self.p(self.n00)) >= h(self.p(self.n01)) + h(self.p(self.n10))
    }
}

fn check_cover(cover: &CommunityCover, n: usize) -> Result<()> {
    if cover.max_node() >= n {
        return Err(Error::Range(format!(
            "cover references node {} but n = {n}",
            cover.max_node()
        )));
    }
    Ok(())
}

/// Normalized conditional entropy of cover `x` given cover `y`:
/// the mean over communities `x_k` of `min_l H(x_k | y_l) / H(x_k)`,
/// with the admissibility constraint applied per pair.
fn conditional_norm(x: &CommunityCover, y: &CommunityCover, n: usize, admissibility: bool) -> f64 {
    let mut total = 0.0;
    for xk in x.communities() {
        let hx = h_binary(xk.len(), n);
        let mut best: Option<f64> = None;
        for yl in y.communities() {
            let joint = JointCounts::new(xk, yl, n);
            if admissibility && !joint.admissible() {
                continue;
            }
            let hy = h_binary(yl.len(), n);
            let cond = joint.joint_entropy() - hy;
            if best.is_none_or(|b| cond < b) {
                best = Some(cond);
            }
        }
        // No admissible partner: fall back to the full entropy H(x_k).
        let cond = best.unwrap_or(hx);
        // A deterministic community (empty or everything) carries no
        // information to explain; it contributes nothing.
        let term = if hx == 0.0 { 0.0 } else { (cond / hx).clamp(0.0, 1.0) };
        total += term;
    }
    total / x.communities().len() as f64
}

/// Overlapping normalized mutual information between two covers of the
/// same `n` nodes, in `[0, 1]`; 1 exactly when the covers are identical.
pub fn nmi_overlapping(x: &CommunityCover, y: &CommunityCover, n: usize) -> Result<f64> {
    nmi_overlapping_with(x, y, n, true)
}

/// [`nmi_overlapping`] with the pair-admissibility constraint toggleable
/// (disable for equation-literal cross-checks).
pub fn nmi_overlapping_with(
    x: &CommunityCover,
    y: &CommunityCover,
    n: usize,
    admissibility: bool,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("empty node universe".into()));
    }
    check_cover(x, n)?;
    check_cover(y, n)?;
    let hxy = conditional_norm(x, y, n, admissibility);
    let hyx = conditional_norm(y, x, n, admissibility);
    Ok((1.0 - 0.5 * (hxy + hyx)).clamp(0.0, 1.0))
}

/// Fraction of correctly classified nodes: greedily match detected and
/// true communities one-to-one by maximum overlap (ties prefer the smaller
/// detected index, then the smaller truth index), then divide the total
/// matched overlap by `n`.
pub fn fccn(detected: &CommunityCover, truth: &CommunityCover, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("empty node universe".into()));
    }
    check_cover(detected, n)?;
    check_cover(truth, n)?;
    let d = detected.communities();
    let t = truth.communities();
    let mut overlaps = vec![vec![0usize; t.len()]; d.len()];
    for (i, dc) in d.iter().enumerate() {
        for (j, tc) in t.iter().enumerate() {
            overlaps[i][j] = dc.intersection(tc).count();
        }
    }
    let mut d_used = vec![false; d.len()];
    let mut t_used = vec![false; t.len()];
    let mut matched = 0usize;
    for _ in 0..d.len().min(t.len()) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in overlaps.iter().enumerate() {
            if d_used[i] {
                continue;
            }
            for (j, &o) in row.iter().enumerate() {
                if t_used[j] {
                    continue;
                }
                if best.is_none_or(|(bo, _, _)| o > bo) {
                    best = Some((o, i, j));
                }
            }
        }
        let (o, i, j) = best.expect("unmatched pair exists");
        d_used[i] = true;
        t_used[j] = true;
        matched += o;
    }
    Ok(matched as f64 / n as f64)
}

/// Newman–Girvan modularity of a partition:
/// `Q = Σ_s [ l_s/L − (d_s/2L)² ]` with `l_s` the intra-community edge
/// count, `d_s` the member degree sum and `L` the total edge count.
pub fn modularity(graph: &Graph, partition: &CommunityCover) -> Result<f64> {
    if partition.mode() != CoverMode::Disjoint {
        return Err(Error::Mode(
            "modularity requires a disjoint partition".into(),
        ));
    }
    let n = graph.node_count();
    if !partition.is_partition(n) {
        return Err(Error::Mode(format!(
            "cover is not a partition of all {n} nodes"
        )));
    }
    let l = graph.edge_count();
    if l == 0 {
        return Err(Error::Argument("graph has no edges".into()));
    }
    let l = l as f64;
    let mut community_of = vec![usize::MAX; n];
    for (s, c) in partition.communities().iter().enumerate() {
        for &v in c {
            community_of[v] = s;
        }
    }
    let mut intra = vec![0usize; partition.len()];
    for &(u, v) in graph.edges() {
        if community_of[u] == community_of[v] {
            intra[community_of[u]] += 1;
        }
    }
    let mut q = 0.0;
    for (s, c) in partition.communities().iter().enumerate() {
        let degree_sum: usize = c.iter().map(|&v| graph.degree(v)).sum();
        let frac = intra[s] as f64 / l;
        let expect = degree_sum as f64 / (2.0 * l);
        q += frac - expect * expect;
    }
    Ok(q)
}
