//! The A-tree family of relay gadgets.
//!
//! `A(n)` is a tree on `n^2` vertices arranged in rows: row `i`
//! (1-based) is a path of `2(n-i)+1` vertices, and the heads of
//! consecutive rows are joined into a spine. The root `r` is the head
//! of row 1; the tail of row `i` is the leaf `v_i`. Broadcasting from
//! `r` takes exactly `2n-2` rounds, and the optimal routing is rigid:
//! each spine vertex, once informed, relays into its own row first and
//! extends the spine second, so vertex `(i, j)` learns the message at
//! round `2(i-1) + (j-1)` and every leaf learns it at exactly `2n-2`.
//!
//! That rigidity is what makes the family a useful timing gadget when
//! it sits inside a larger graph with outside connections only at `r`
//! and the leaves: all `n` leaves can relay outward simultaneously at
//! round `2n-1`, and any leaf relaying earlier forces some tree vertex
//! past round `2n-2`. [`check_simultaneous_relay`] and
//! [`check_no_early_relay`] machine-check those two facts at small
//! sizes — the first constructively, the second by exhausting every
//! schedule state.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::schedule::{simulate, Call, Schedule};
use crate::solver::brute::{adjacency_masks, for_each_round_successor};

/// Largest `n` accepted by [`check_simultaneous_relay`].
pub const RELAY_CHECK_MAX_N: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget size must be at least 1")]
    ZeroSize,
    #[error("n = {n} outside the supported range {min}..={max} for this check")]
    UnsupportedSize { n: usize, min: usize, max: usize },
}

/// `A(n)` with its distinguished vertices. Vertex ids enumerate the
/// rows in order, so the root is id 0; `coords[id]` recovers the
/// 1-based `(row, position)` pair and each vertex is labeled
/// `r:<row>:<pos>`.
#[derive(Debug, Clone)]
pub struct ATree {
    pub graph: Graph,
    pub root: VertexId,
    /// `leaves[i-1]` is `v_i`, the tail of row `i`.
    pub leaves: Vec<VertexId>,
    pub coords: Vec<(usize, usize)>,
}

fn row_len(n: usize, row: usize) -> usize {
    2 * (n - row) + 1
}

fn row_start(n: usize, row: usize) -> usize {
    // sum of row lengths above: (row-1) * (2n + 1 - row)
    (row - 1) * (2 * n + 1 - row)
}

fn vertex_id(n: usize, row: usize, pos: usize) -> VertexId {
    row_start(n, row) + pos - 1
}

/// Round at which the canonical routing informs `(row, pos)`.
fn canonical_round(row: usize, pos: usize) -> u32 {
    (2 * (row - 1) + (pos - 1)) as u32
}

pub fn build_a_tree(n: usize) -> Result<ATree, GadgetError> {
    if n == 0 {
        return Err(GadgetError::ZeroSize);
    }
    let total = n * n;
    let mut coords = Vec::with_capacity(total);
    let mut labels = BTreeMap::new();
    let mut edges = Vec::with_capacity(total - 1);
    let mut leaves = Vec::with_capacity(n);
    for row in 1..=n {
        let len = row_len(n, row);
        for pos in 1..=len {
            let id = vertex_id(n, row, pos);
            debug_assert_eq!(id, coords.len());
            coords.push((row, pos));
            labels.insert(id, format!("r:{row}:{pos}"));
            if pos > 1 {
                edges.push((vertex_id(n, row, pos - 1), id));
            }
        }
        if row > 1 {
            edges.push((vertex_id(n, row - 1, 1), vertex_id(n, row, 1)));
        }
        leaves.push(vertex_id(n, row, len));
    }
    let graph = Graph::with_labels(total, &edges, labels).expect("gadget edges are valid");
    Ok(ATree {
        graph,
        root: 0,
        leaves,
        coords,
    })
}

/// The unique optimal routing from the root: every vertex `(i, j)` is
/// informed at round `2(i-1) + (j-1)` by its row predecessor (or, at a
/// row head, by the spine). Completion time is `2n - 2`.
pub fn canonical_a_schedule(n: usize) -> Result<Schedule, GadgetError> {
    if n == 0 {
        return Err(GadgetError::ZeroSize);
    }
    let mut calls = Vec::with_capacity(n * n - 1);
    for row in 1..=n {
        for pos in 1..=row_len(n, row) {
            if (row, pos) == (1, 1) {
                continue;
            }
            let caller = if pos == 1 {
                vertex_id(n, row - 1, 1)
            } else {
                vertex_id(n, row, pos - 1)
            };
            calls.push(Call {
                round: canonical_round(row, pos),
                caller,
                callee: vertex_id(n, row, pos),
            });
        }
    }
    let horizon = if n == 1 { 0 } else { (2 * n - 2) as u32 };
    Ok(Schedule::new(0, horizon, calls).expect("canonical routing is well-formed"))
}

/// `A(n)` with one pendant vertex attached to each leaf — the minimal
/// realization of "only the root and the leaves have outside
/// neighbors". Pendant `i` gets id `n^2 + i`.
fn pendant_augmented(n: usize) -> (Graph, Vec<VertexId>, ATree) {
    let at = build_a_tree(n).expect("n validated by caller");
    let total = n * n + n;
    let mut edges: Vec<(VertexId, VertexId)> = at.graph.edges().collect();
    let pendants: Vec<VertexId> = (0..n).map(|i| n * n + i).collect();
    for (i, &pendant) in pendants.iter().enumerate() {
        edges.push((at.leaves[i], pendant));
    }
    let graph = Graph::new(total, &edges).expect("pendant edges are valid");
    (graph, pendants, at)
}

/// Checks constructively that all leaves of `A(n)` can relay outward in
/// the same round `2n - 1`: the canonical routing, extended by one
/// round of leaf-to-pendant calls, must verify with every tree vertex
/// informed by `2n - 2` and every pendant at exactly `2n - 1`.
pub fn check_simultaneous_relay(n: usize) -> Result<bool, GadgetError> {
    if n == 0 || n > RELAY_CHECK_MAX_N {
        return Err(GadgetError::UnsupportedSize {
            n,
            min: 1,
            max: RELAY_CHECK_MAX_N,
        });
    }
    let (graph, pendants, at) = pendant_augmented(n);
    let relay_round = (2 * n - 1) as u32;
    let mut calls = canonical_a_schedule(n)?.calls().to_vec();
    for (i, &pendant) in pendants.iter().enumerate() {
        calls.push(Call {
            round: relay_round,
            caller: at.leaves[i],
            callee: pendant,
        });
    }
    let schedule =
        Schedule::new(at.root, relay_round, calls).expect("relay extension is well-formed");
    let report = simulate(&graph, &schedule).expect("schedule fits the graph");
    if !report.is_valid() {
        return Ok(false);
    }
    let tree_on_time = (0..n * n)
        .all(|v| matches!(report.informed_time[v], Some(t) if t < relay_round));
    let pendants_exact = pendants
        .iter()
        .all(|&p| report.informed_time[p] == Some(relay_round));
    Ok(tree_on_time && pendants_exact)
}

/// Checks exhaustively that relaying out of `A(n)` early always costs
/// the tree its own deadline: across all schedule states reachable from
/// the root within `2n - 2` rounds on the pendant-augmented gadget,
/// none has a pendant informed while the whole tree is covered.
/// State enumeration deduplicates on informed sets.
pub fn check_no_early_relay(n: usize) -> Result<bool, GadgetError> {
    if !(2..=3).contains(&n) {
        return Err(GadgetError::UnsupportedSize { n, min: 2, max: 3 });
    }
    let (graph, pendants, at) = pendant_augmented(n);
    let total = graph.vertex_count();
    let adj = adjacency_masks(&graph);
    let tree_mask = (1u32 << (n * n)) - 1;
    let pendant_mask: u32 = pendants.iter().fold(0, |m, &p| m | (1 << p));

    let mut visited = vec![false; 1 << total];
    let start = 1u32 << at.root;
    visited[start as usize] = true;
    let mut level = vec![start];
    for _ in 0..(2 * n - 2) {
        let mut next_level = Vec::new();
        for &mask in &level {
            for_each_round_successor(&adj, mask, &mut |next| {
                if !visited[next as usize] {
                    visited[next as usize] = true;
                    next_level.push(next);
                }
            });
        }
        level = next_level;
    }
    let violation = visited.iter().enumerate().any(|(mask, &seen)| {
        seen && (mask as u32 & tree_mask) == tree_mask && (mask as u32 & pendant_mask) != 0
    });
    Ok(!violation)
}
