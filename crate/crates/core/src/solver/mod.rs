//! Broadcast-time solvers.
//!
//! [`broadcast_time_exact`] computes `b(source)` by iterative deepening
//! on the decision question [`decide_bdmbt`] ("can the source finish
//! within `k` rounds?"), starting at [`lower_bound`]. The exact solver
//! answers are value-deterministic; witness schedules always pass the
//! verifier. [`brute_force_broadcast_time`] is an independent
//! exhaustive oracle for cross-checking, [`tree_broadcast_time`] a
//! linear-time oracle for trees, [`path_cycle_closed_form`] the
//! degree-2 closed forms, and [`greedy_schedule`] a heuristic that
//! yields valid (not necessarily optimal) schedules.

pub(crate) mod brute;
mod exact;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::schedule::Schedule;

pub use brute::brute_force_broadcast_time;

/// Default cap on search expansions before the solver gives up with
/// [`SolverError::BudgetExceeded`].
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("source vertex {0} out of range")]
    SourceOutOfRange(VertexId),
    #[error("node budget {budget} exhausted after {explored} expansions")]
    BudgetExceeded { budget: u64, explored: u64 },
    #[error("graph is not a tree")]
    NotATree,
    #[error("{vertices} vertices exceed the brute-force cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
}

/// Result of an exact solve: the broadcast time and a schedule
/// achieving it.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub broadcast_time: u32,
    pub witness: Schedule,
    pub nodes_explored: u64,
}

/// Answer to `b(source) <= k`, with a witness when feasible.
#[derive(Debug, Clone)]
pub struct Decision {
    pub witness: Option<Schedule>,
    pub nodes_explored: u64,
}

impl Decision {
    pub fn feasible(&self) -> bool {
        self.witness.is_some()
    }
}

fn validate_instance(g: &Graph, source: VertexId) -> Result<(), SolverError> {
    if source >= g.vertex_count() {
        return Err(SolverError::SourceOutOfRange(source));
    }
    if !g.is_connected() {
        return Err(SolverError::Disconnected);
    }
    Ok(())
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        (n - 1).ilog2() + 1
    }
}

/// `max(eccentricity(source), ceil(log2 |V|))`: the message can travel
/// one hop per round, and the informed population at most doubles.
pub fn lower_bound(g: &Graph, source: VertexId) -> Result<u32, SolverError> {
    validate_instance(g, source)?;
    let ecc = g.eccentricity(source).expect("source validated");
    Ok(ecc.max(ceil_log2(g.vertex_count())))
}

/// Decides `b(source) <= k`. `false` answers are exhaustive, never the
/// result of giving up; running out of budget is an error instead.
pub fn decide_bdmbt(
    g: &Graph,
    source: VertexId,
    k: u32,
    config: &SolverConfig,
) -> Result<Decision, SolverError> {
    validate_instance(g, source)?;
    let mut search = exact::Search::new(g, source, config.node_budget);
    let witness = search.decide(k)?;
    Ok(Decision {
        witness,
        nodes_explored: search.nodes,
    })
}

/// Exact `b(source)` by iterative deepening from [`lower_bound`].
pub fn broadcast_time_exact(
    g: &Graph,
    source: VertexId,
    config: &SolverConfig,
) -> Result<SolveResult, SolverError> {
    validate_instance(g, source)?;
    let start = lower_bound(g, source)?;
    let mut search = exact::Search::new(g, source, config.node_budget);
    for k in start..=(g.vertex_count() as u32) {
        if let Some(witness) = search.decide(k)? {
            return Ok(SolveResult {
                broadcast_time: k,
                witness,
                nodes_explored: search.nodes,
            });
        }
    }
    unreachable!("a connected graph broadcasts within |V| - 1 rounds")
}

/// `b(G)`: the worst `b(u)` over all sources. The node budget applies
/// to each source's solve separately.
pub fn broadcast_time_graph(g: &Graph, config: &SolverConfig) -> Result<u32, SolverError> {
    if !g.is_connected() {
        return Err(SolverError::Disconnected);
    }
    let mut worst = 0;
    for source in 0..g.vertex_count() {
        worst = worst.max(broadcast_time_exact(g, source, config)?.broadcast_time);
    }
    Ok(worst)
}

/// Exact broadcast time on trees in linear time.
///
/// Rooted at the source, a leaf costs 0 and an internal vertex with
/// child subtree values `b_1 >= ... >= b_d` costs `max_i (i + b_i)`:
/// serving the slowest subtrees first is optimal.
pub fn tree_broadcast_time(g: &Graph, source: VertexId) -> Result<u32, SolverError> {
    if source >= g.vertex_count() {
        return Err(SolverError::SourceOutOfRange(source));
    }
    if !g.is_tree() {
        return Err(SolverError::NotATree);
    }
    let n = g.vertex_count();
    // BFS order from the source; children = neighbors other than parent.
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[source] = true;
    order.push(source);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                order.push(v);
            }
        }
    }
    let mut value = vec![0u32; n];
    for &v in order.iter().rev() {
        let mut child_values: Vec<u32> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| parent[u] == Some(v))
            .map(|&u| value[u])
            .collect();
        child_values.sort_unstable_by(|a, b| b.cmp(a));
        value[v] = child_values
            .iter()
            .enumerate()
            .map(|(i, &b)| i as u32 + 1 + b)
            .max()
            .unwrap_or(0);
    }
    Ok(value[source])
}

/// `b(G)` for maximum-degree-2 graphs: `|G| - 1` for a path and
/// `ceil(|G| / 2)` for a cycle; `None` for anything else.
///
/// Note the ceiling on cycles: C_5 needs 3 rounds, not 2 — with one
/// call in round 1 the two spreading arcs cover at most 4 vertices
/// within 2 rounds. The brute-force oracle confirms this on all small
/// cycles.
pub fn path_cycle_closed_form(g: &Graph) -> Option<u32> {
    let n = g.vertex_count();
    if n == 0 || !g.is_connected() {
        return None;
    }
    if g.edge_count() == n - 1 && g.max_degree() <= 2 {
        return Some((n - 1) as u32);
    }
    if n >= 3 && g.edge_count() == n && (0..n).all(|v| g.degree(v) == 2) {
        return Some(n.div_ceil(2) as u32);
    }
    None
}

/// Greedy heuristic: each round matches informed vertices to uninformed
/// boundary vertices, most urgent first. Urgency of a boundary vertex
/// is its eccentricity within the still-uninformed region — the deeper
/// the region behind it, the sooner it must be served. Ties break by
/// vertex id, and each chosen vertex is served by its smallest free
/// informed neighbor. Always produces a valid schedule; completion may
/// exceed the optimum.
pub fn greedy_schedule(g: &Graph, source: VertexId) -> Result<Schedule, SolverError> {
    validate_instance(g, source)?;
    let n = g.vertex_count();
    let mut informed = vec![false; n];
    informed[source] = true;
    let mut informed_count = 1;
    let mut calls = Vec::new();
    let mut round = 0;
    while informed_count < n {
        round += 1;
        let mut boundary: Vec<(u32, VertexId)> = (0..n)
            .filter(|&v| !informed[v] && g.neighbors(v).iter().any(|&u| informed[u]))
            .map(|v| (uninformed_region_depth(g, &informed, v), v))
            .collect();
        boundary.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut caller_busy = vec![false; n];
        let mut served = Vec::new();
        for &(_, callee) in &boundary {
            let caller = g
                .neighbors(callee)
                .iter()
                .copied()
                .find(|&u| informed[u] && !caller_busy[u]);
            if let Some(caller) = caller {
                caller_busy[caller] = true;
                served.push(callee);
                calls.push(crate::schedule::Call {
                    round,
                    caller,
                    callee,
                });
            }
        }
        debug_assert!(!served.is_empty(), "a boundary vertex is always served");
        for v in served {
            informed[v] = true;
            informed_count += 1;
        }
    }
    Ok(Schedule::new(source, round, calls).expect("greedy emits well-formed calls"))
}

/// Longest shortest-path distance from `start` to any vertex reachable
/// through uninformed vertices only.
fn uninformed_region_depth(g: &Graph, informed: &[bool], start: VertexId) -> u32 {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    let mut depth = 0;
    while let Some(u) = queue.pop_front() {
        depth = depth.max(dist[u]);
        for &v in g.neighbors(u) {
            if !informed[v] && dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph, star_graph, Graph};
    use crate::schedule::verify_schedule;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn lower_bound_examples() {
        let single = Graph::new(1, &[]).unwrap();
        assert_eq!(lower_bound(&single, 0).unwrap(), 0);
        let edges: Vec<_> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let k4 = Graph::new(4, &edges).unwrap();
        assert_eq!(lower_bound(&k4, 0).unwrap(), 2);
    }

    #[test]
    fn decide_on_path() {
        let g = path_graph(4);
        assert!(decide_bdmbt(&g, 0, 3, &cfg()).unwrap().feasible());
        assert!(!decide_bdmbt(&g, 0, 2, &cfg()).unwrap().feasible());
    }

    #[test]
    fn decide_and_bounds_on_a3() {
        let at = crate::gadgets::build_a_tree(3).unwrap();
        assert_eq!(lower_bound(&at.graph, at.root).unwrap(), 4);
        assert!(!decide_bdmbt(&at.graph, at.root, 3, &cfg()).unwrap().feasible());
        assert!(decide_bdmbt(&at.graph, at.root, 4, &cfg()).unwrap().feasible());
        let greedy = greedy_schedule(&at.graph, at.root).unwrap();
        let report = crate::schedule::verify_schedule(&at.graph, &greedy, None).unwrap();
        assert!(report.is_valid());
        assert!(report.completion_time.unwrap() >= 4);
    }

    #[test]
    fn decide_is_monotone_in_k() {
        let g = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)]).unwrap();
        let mut seen_true = false;
        for k in 0..8 {
            let feasible = decide_bdmbt(&g, 0, k, &cfg()).unwrap().feasible();
            assert!(!seen_true || feasible, "true at k must stay true at k+1");
            seen_true |= feasible;
        }
        assert!(seen_true);
    }

    #[test]
    fn exact_single_vertex_and_star() {
        let single = Graph::new(1, &[]).unwrap();
        assert_eq!(broadcast_time_exact(&single, 0, &cfg()).unwrap().broadcast_time, 0);
        let star = star_graph(3);
        assert_eq!(broadcast_time_exact(&star, 0, &cfg()).unwrap().broadcast_time, 3);
    }

    #[test]
    fn witness_verifies_at_the_reported_time() {
        for g in [path_graph(7), cycle_graph(7), star_graph(4)] {
            let result = broadcast_time_exact(&g, 0, &cfg()).unwrap();
            let report = verify_schedule(&g, &result.witness, Some(result.broadcast_time)).unwrap();
            assert!(report.is_valid());
            assert_eq!(report.completion_time, Some(result.broadcast_time));
        }
    }

    #[test]
    fn graph_time_is_worst_source() {
        assert_eq!(broadcast_time_graph(&path_graph(4), &cfg()).unwrap(), 3);
        let edge = path_graph(2);
        assert_eq!(broadcast_time_graph(&edge, &cfg()).unwrap(), 1);
        assert_eq!(broadcast_time_graph(&cycle_graph(6), &cfg()).unwrap(), 3);
    }

    #[test]
    fn exact_matches_oracle_on_all_tiny_connected_graphs() {
        // Every labeled graph on up to 5 vertices, every source.
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            for mask in 0..(1u32 << pairs.len()) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                if !g.is_connected() {
                    continue;
                }
                for source in 0..n {
                    let exact = broadcast_time_exact(&g, source, &cfg()).unwrap();
                    let oracle = brute_force_broadcast_time(&g, source).unwrap();
                    assert_eq!(
                        exact.broadcast_time, oracle,
                        "n={n} mask={mask:b} source={source}"
                    );
                }
            }
        }
    }

    #[test]
    fn exact_refuses_disconnected_and_bad_source() {
        let split = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            broadcast_time_exact(&split, 0, &cfg()).unwrap_err(),
            SolverError::Disconnected
        );
        let g = path_graph(3);
        assert_eq!(
            broadcast_time_exact(&g, 9, &cfg()).unwrap_err(),
            SolverError::SourceOutOfRange(9)
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = cycle_graph(8);
        let tiny = SolverConfig { node_budget: 3 };
        assert!(matches!(
            broadcast_time_exact(&g, 0, &tiny),
            Err(SolverError::BudgetExceeded { budget: 3, .. })
        ));
    }

    #[test]
    fn tree_oracle_on_paths_and_stars() {
        for n in 1..=9 {
            assert_eq!(tree_broadcast_time(&path_graph(n), 0).unwrap(), (n - 1) as u32);
        }
        for d in 0..=5 {
            assert_eq!(tree_broadcast_time(&star_graph(d), 0).unwrap(), d as u32);
        }
    }

    #[test]
    fn tree_oracle_rejects_non_trees() {
        assert_eq!(
            tree_broadcast_time(&cycle_graph(4), 0).unwrap_err(),
            SolverError::NotATree
        );
    }

    #[test]
    fn tree_oracle_matches_exact_on_random_trees() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let n = rng.gen_range(1..=12);
            let edges: Vec<(usize, usize)> =
                (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            let g = Graph::new(n, &edges).unwrap();
            let source = rng.gen_range(0..n);
            assert_eq!(
                tree_broadcast_time(&g, source).unwrap(),
                broadcast_time_exact(&g, source, &cfg()).unwrap().broadcast_time
            );
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(path_cycle_closed_form(&path_graph(5)), Some(4));
        assert_eq!(path_cycle_closed_form(&path_graph(1)), Some(0));
        assert_eq!(path_cycle_closed_form(&cycle_graph(4)), Some(2));
        assert_eq!(path_cycle_closed_form(&cycle_graph(5)), Some(3));
        assert_eq!(path_cycle_closed_form(&star_graph(3)), None);
        let split = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(path_cycle_closed_form(&split), None);
    }

    #[test]
    fn greedy_is_valid_and_no_better_than_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..40 {
            let n: usize = rng.gen_range(1..=9);
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.2) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let source = rng.gen_range(0..n);
            let schedule = greedy_schedule(&g, source).unwrap();
            let report = verify_schedule(&g, &schedule, None).unwrap();
            assert!(report.is_valid());
            let exact = broadcast_time_exact(&g, source, &cfg()).unwrap();
            assert!(report.completion_time.unwrap() >= exact.broadcast_time);
            // Any valid schedule respects the distance and doubling bounds.
            assert!(report.completion_time.unwrap() >= lower_bound(&g, source).unwrap());
        }
    }

    #[test]
    fn greedy_examples() {
        let g = path_graph(4);
        let s = greedy_schedule(&g, 0).unwrap();
        let report = verify_schedule(&g, &s, None).unwrap();
        assert_eq!(report.completion_time, Some(3));

        let single = Graph::new(1, &[]).unwrap();
        let s = greedy_schedule(&single, 0).unwrap();
        assert_eq!(s.horizon(), 0);
        assert!(s.calls().is_empty());
    }

    #[test]
    fn exact_at_least_lower_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let n: usize = rng.gen_range(1..=8);
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let source = rng.gen_range(0..n);
            let exact = broadcast_time_exact(&g, source, &cfg()).unwrap();
            assert!(exact.broadcast_time >= lower_bound(&g, source).unwrap());
        }
    }
}
