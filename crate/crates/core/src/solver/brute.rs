//! Brute-force reference oracle.
//!
//! Breadth-first search over informed sets (as bitmasks), trying every
//! per-round matching without any pruning beyond the visited check.
//! Deliberately kept separate from the branch-and-bound solver so the
//! two can cross-check each other.

use std::collections::VecDeque;

use crate::graph::{Graph, VertexId};

use super::{validate_instance, SolverError};

pub(crate) const BRUTE_FORCE_VERTEX_CAP: usize = 20;

pub(crate) fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect()
}

/// Exact broadcast time from `source` by exhaustive search over
/// informed sets. Capped at 20 vertices.
pub fn brute_force_broadcast_time(g: &Graph, source: VertexId) -> Result<u32, SolverError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_VERTEX_CAP {
        return Err(SolverError::TooLarge {
            vertices: n,
            cap: BRUTE_FORCE_VERTEX_CAP,
        });
    }
    validate_instance(g, source)?;
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    let start = 1u32 << source;
    if start == full {
        return Ok(0);
    }
    let mut dist = vec![u8::MAX; 1usize << n];
    dist[start as usize] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(mask) = queue.pop_front() {
        let d = dist[mask as usize];
        for_each_round_successor(&adj, mask, &mut |next| {
            if dist[next as usize] == u8::MAX {
                dist[next as usize] = d + 1;
                queue.push_back(next);
            }
        });
        if dist[full as usize] != u8::MAX {
            return Ok(u32::from(dist[full as usize]));
        }
    }
    unreachable!("connected graph always reaches the full informed set")
}

/// Invokes `f` with every informed set reachable from `informed` in one
/// round: `informed` plus the callees of one nonempty matching of
/// informed vertices to uninformed neighbors.
pub(crate) fn for_each_round_successor(adj: &[u32], informed: u32, f: &mut impl FnMut(u32)) {
    let frontier: Vec<usize> = (0..adj.len())
        .filter(|&v| informed & (1 << v) != 0 && adj[v] & !informed != 0)
        .collect();
    extend_matching(adj, informed, &frontier, 0, 0, f);
}

fn extend_matching(
    adj: &[u32],
    informed: u32,
    frontier: &[usize],
    idx: usize,
    added: u32,
    f: &mut impl FnMut(u32),
) {
    if idx == frontier.len() {
        if added != 0 {
            f(informed | added);
        }
        return;
    }
    let v = frontier[idx];
    let mut avail = adj[v] & !informed & !added;
    while avail != 0 {
        let callee = avail & avail.wrapping_neg();
        extend_matching(adj, informed, frontier, idx + 1, added | callee, f);
        avail ^= callee;
    }
    // v idles this round.
    extend_matching(adj, informed, frontier, idx + 1, added, f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph, star_graph, Graph};

    #[test]
    fn single_vertex_is_zero() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(brute_force_broadcast_time(&g, 0).unwrap(), 0);
    }

    #[test]
    fn path_from_endpoint_and_middle() {
        let g = path_graph(4);
        assert_eq!(brute_force_broadcast_time(&g, 0).unwrap(), 3);
        assert_eq!(brute_force_broadcast_time(&g, 1).unwrap(), 2);
    }

    #[test]
    fn odd_cycle_needs_ceil_half() {
        // C_5 cannot finish in 2 rounds: the two arcs cover at most 4
        // new vertices by then.
        assert_eq!(brute_force_broadcast_time(&cycle_graph(5), 0).unwrap(), 3);
        assert_eq!(brute_force_broadcast_time(&cycle_graph(3), 0).unwrap(), 2);
    }

    #[test]
    fn even_cycle() {
        assert_eq!(brute_force_broadcast_time(&cycle_graph(6), 0).unwrap(), 3);
        assert_eq!(brute_force_broadcast_time(&cycle_graph(4), 0).unwrap(), 2);
    }

    #[test]
    fn complete_graph_doubles() {
        let edges: Vec<_> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let k4 = Graph::new(4, &edges).unwrap();
        assert_eq!(brute_force_broadcast_time(&k4, 0).unwrap(), 2);
    }

    #[test]
    fn star_center_calls_sequentially() {
        assert_eq!(brute_force_broadcast_time(&star_graph(3), 0).unwrap(), 3);
    }

    #[test]
    fn rejects_oversized_and_disconnected() {
        let big = path_graph(21);
        assert!(matches!(
            brute_force_broadcast_time(&big, 0),
            Err(SolverError::TooLarge { vertices: 21, .. })
        ));
        let split = Graph::new(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            brute_force_broadcast_time(&split, 0),
            Err(SolverError::Disconnected)
        ));
    }
}
