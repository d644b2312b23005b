//! Minimum broadcast time in the telephone model.
//!
//! A message starts at one vertex of a connected graph and spreads by
//! calls: in each time unit an informed vertex may pass the message to
//! one uninformed neighbor, and no vertex takes part in two calls at
//! once. The broadcast time `b(v)` is the fewest time units needed to
//! inform everyone from `v`; `b(G)` is the worst case over sources.
//! Deciding `b(v) <= k` is NP-complete already on graphs of maximum
//! degree three.
//!
//! This crate provides:
//!
//! - [`graph`]: immutable simple graphs with a small text format;
//! - [`schedule`]: broadcast schedules and a linear-time verifier;
//! - [`solver`]: an exact branch-and-bound solver with iterative
//!   deepening, a brute-force reference oracle, a linear-time tree
//!   solver, degree-2 closed forms, and a greedy heuristic;
//! - [`gadgets`]: the `A`-tree family of relay trees whose root takes
//!   exactly `2n - 2` rounds to broadcast, plus exhaustive checks of
//!   the relay-timing properties that make the hardness reduction work;
//! - [`cnf`]: DIMACS 3SAT formulas and a brute-force satisfiability
//!   oracle;
//! - [`reduction`]: the compiler from 3SAT formulas to degree-3
//!   broadcast instances, with certificate construction and assignment
//!   extraction.

pub mod cnf;
pub mod gadgets;
pub mod graph;
pub mod reduction;
pub mod schedule;
pub mod solver;

pub use cnf::{sat_brute_force, Assignment, CnfError, CnfFormula};
pub use gadgets::{
    build_a_tree, canonical_a_schedule, check_no_early_relay, check_simultaneous_relay, ATree,
    GadgetError,
};
pub use graph::{cycle_graph, path_graph, star_graph, Graph, GraphError, VertexId};
pub use reduction::{
    build_reduction, certify, extract_assignment, target_time, ReductionError, ReductionMap, Role,
};
pub use schedule::{
    simulate, verify_schedule, Call, Schedule, ScheduleError, VerificationReport, Violation,
};
pub use solver::{
    broadcast_time_exact, broadcast_time_graph, brute_force_broadcast_time, decide_bdmbt,
    greedy_schedule, lower_bound, path_cycle_closed_form, tree_broadcast_time, Decision,
    SolveResult, SolverConfig, SolverError,
};
