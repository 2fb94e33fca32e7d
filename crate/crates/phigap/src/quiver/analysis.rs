use serde::Serialize;

use super::Quiver;

/// Degree and reachability data for one vertex.
///
/// `longest_terminating_path` is the length of the longest directed path
/// starting at the vertex; it is only defined when no directed cycle is
/// reachable from it (loops count as cycles).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexProfile {
    pub vertex: String,
    pub out_degree: usize,
    pub in_degree: usize,
    pub is_sink: bool,
    pub is_source: bool,
    pub reaches_cycle: bool,
    pub longest_terminating_path: Option<usize>,
}

/// Which vertices can reach a directed cycle.
pub(crate) fn reaches_cycle_table(q: &Quiver) -> Vec<bool> {
    let n = q.vertex_count();
    // Vertices on a cycle: iteratively strip vertices of out-degree zero
    // within the remaining subgraph; whatever survives lies on a cycle or
    // reaches one that does.
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if alive[v] && !q.out_targets(v).any(|t| alive[t]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // `alive` now marks exactly the vertices with arbitrarily long outgoing
    // paths, i.e. those that reach a cycle.
    alive
}

/// Longest path lengths on the acyclic part; `None` where a cycle is
/// reachable.
pub(crate) fn longest_path_table(q: &Quiver) -> Vec<Option<usize>> {
    let cyc = reaches_cycle_table(q);
    let n = q.vertex_count();
    let mut memo: Vec<Option<usize>> = vec![None; n];
    fn go(q: &Quiver, v: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(m) = memo[v] {
            return m;
        }
        let best = q
            .out_targets(v)
            .map(|t| 1 + go(q, t, memo))
            .max()
            .unwrap_or(0);
        memo[v] = Some(best);
        best
    }
    (0..n)
        .map(|v| {
            if cyc[v] {
                None
            } else {
                Some(go(q, v, &mut memo))
            }
        })
        .collect()
}

pub fn analyze_vertices(q: &Quiver) -> Vec<VertexProfile> {
    let cyc = reaches_cycle_table(q);
    let longest = longest_path_table(q);
    (0..q.vertex_count())
        .map(|v| VertexProfile {
            vertex: q.vertex_name(v).to_string(),
            out_degree: q.out_degree(v),
            in_degree: q.in_degree(v),
            is_sink: q.is_sink(v),
            is_source: q.is_source(v),
            reaches_cycle: cyc[v],
            longest_terminating_path: longest[v],
        })
        .collect()
}
