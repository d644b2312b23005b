//! Branch-and-bound decision search for `b(v) <= k`.
//!
//! A state is the informed set after some number of rounds. Children
//! are generated by enumerating per-round matchings from informed
//! vertices to uninformed neighbors, fullest first, in (caller, callee)
//! order. Sound prunings, so a `false` answer is exhaustive:
//!
//! - doubling: the informed set at most doubles per round, so it must
//!   reach `|V|` within the remaining rounds;
//! - distance: every uninformed vertex must lie within `remaining` hops
//!   of the informed set;
//! - dominance: a matching that leaves an informed vertex idle next to
//!   its only uninformed neighbor, with that neighbor otherwise
//!   unserved, is skipped — adding that call never hurts;
//! - memo: an informed set already entered with at least as many
//!   remaining rounds is not explored again. Keyed on the set alone,
//!   which also lets refutation work carry over between iterative
//!   deepening rounds.

use std::collections::{HashMap, VecDeque};

use smallvec::{smallvec, SmallVec};

use crate::graph::{Graph, VertexId};
use crate::schedule::{Call, Schedule};

use super::SolverError;

/// Entries kept in the memo table before insertion stops (lookup keeps
/// working); bounds memory on hard refutations.
const MEMO_CAPACITY: usize = 1 << 22;

/// Growable bitset over vertex ids, inline up to 128 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    fn new(n: usize) -> Self {
        Self {
            words: smallvec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    fn insert(&mut self, v: usize) {
        self.words[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    fn remove(&mut self, v: usize) {
        self.words[v >> 6] &= !(1 << (v & 63));
    }

    #[inline]
    fn contains(&self, v: usize) -> bool {
        self.words[v >> 6] & (1 << (v & 63)) != 0
    }
}

pub(super) struct Search<'g> {
    g: &'g Graph,
    n: usize,
    source: VertexId,
    budget: u64,
    pub(super) nodes: u64,
    memo: HashMap<VertexSet, u32>,
    // Scratch for the multi-source BFS distance bound.
    dist: Vec<u32>,
    queue: VecDeque<VertexId>,
    // Call lists of the rounds on the current DFS path.
    rounds: Vec<Vec<(VertexId, VertexId)>>,
}

impl<'g> Search<'g> {
    pub(super) fn new(g: &'g Graph, source: VertexId, budget: u64) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            n,
            source,
            budget,
            nodes: 0,
            memo: HashMap::new(),
            dist: vec![u32::MAX; n],
            queue: VecDeque::with_capacity(n),
            rounds: Vec::new(),
        }
    }

    /// Is there a schedule from the source finishing within `k` rounds?
    /// Returns a witness whose completion time is the number of rounds
    /// it actually uses.
    pub(super) fn decide(&mut self, k: u32) -> Result<Option<Schedule>, SolverError> {
        self.rounds.clear();
        let mut informed = VertexSet::new(self.n);
        informed.insert(self.source);
        if !self.dfs(&informed, 1, k)? {
            return Ok(None);
        }
        let mut calls = Vec::new();
        for (i, round_calls) in self.rounds.iter().enumerate() {
            let round = (i + 1) as u32;
            calls.extend(
                round_calls
                    .iter()
                    .map(|&(caller, callee)| Call {
                        round,
                        caller,
                        callee,
                    }),
            );
        }
        let horizon = self.rounds.len() as u32;
        let witness =
            Schedule::new(self.source, horizon, calls).expect("search emits well-formed calls");
        Ok(Some(witness))
    }

    fn bump(&mut self) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolverError::BudgetExceeded {
                budget: self.budget,
                explored: self.nodes,
            });
        }
        Ok(())
    }

    fn dfs(
        &mut self,
        informed: &VertexSet,
        informed_count: usize,
        remaining: u32,
    ) -> Result<bool, SolverError> {
        if informed_count == self.n {
            return Ok(true);
        }
        if remaining == 0 {
            return Ok(false);
        }
        self.bump()?;

        // Widen before shifting; a shift of 64 already clears any n.
        let doubled = (informed_count as u128) << remaining.min(64);
        if doubled < self.n as u128 {
            return Ok(false);
        }
        if !self.all_within(informed, remaining) {
            return Ok(false);
        }
        if self.memo.get(informed).is_some_and(|&best| remaining <= best) {
            return Ok(false);
        }
        if self.memo.len() < MEMO_CAPACITY || self.memo.contains_key(informed) {
            self.memo.insert(informed.clone(), remaining);
        }

        let frontier: Vec<VertexId> = (0..self.n)
            .filter(|&v| {
                informed.contains(v) && self.g.neighbors(v).iter().any(|&u| !informed.contains(u))
            })
            .collect();
        let mut new_informed = informed.clone();
        let mut calls = Vec::with_capacity(frontier.len());
        self.matchings(
            informed,
            informed_count,
            remaining,
            &frontier,
            0,
            &mut new_informed,
            &mut calls,
        )
    }

    /// True iff every uninformed vertex is within `remaining` hops of
    /// the informed set.
    fn all_within(&mut self, informed: &VertexSet, remaining: u32) -> bool {
        self.dist.fill(u32::MAX);
        self.queue.clear();
        for v in 0..self.n {
            if informed.contains(v) {
                self.dist[v] = 0;
                self.queue.push_back(v);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            for &v in self.g.neighbors(u) {
                if self.dist[v] == u32::MAX {
                    self.dist[v] = du + 1;
                    self.queue.push_back(v);
                }
            }
        }
        self.dist.iter().all(|&d| d <= remaining)
    }

    /// Enumerates this round's matchings over `frontier[idx..]` and
    /// recurses into the next round for each. `new_informed` carries
    /// the informed set plus the callees picked so far, doubling as the
    /// taken-endpoint check.
    #[allow(clippy::too_many_arguments)]
    fn matchings(
        &mut self,
        informed: &VertexSet,
        informed_count: usize,
        remaining: u32,
        frontier: &[VertexId],
        idx: usize,
        new_informed: &mut VertexSet,
        calls: &mut Vec<(VertexId, VertexId)>,
    ) -> Result<bool, SolverError> {
        self.bump()?;
        if idx == frontier.len() {
            if calls.is_empty() || self.dominated(informed, frontier, new_informed, calls) {
                return Ok(false);
            }
            self.rounds.push(calls.clone());
            let found = self.dfs(new_informed, informed_count + calls.len(), remaining - 1)?;
            if !found {
                self.rounds.pop();
            }
            return Ok(found);
        }
        let caller = frontier[idx];
        for i in 0..self.g.neighbors(caller).len() {
            let callee = self.g.neighbors(caller)[i];
            if new_informed.contains(callee) {
                continue;
            }
            new_informed.insert(callee);
            calls.push((caller, callee));
            if self.matchings(
                informed,
                informed_count,
                remaining,
                frontier,
                idx + 1,
                new_informed,
                calls,
            )? {
                return Ok(true);
            }
            calls.pop();
            new_informed.remove(callee);
        }
        // The caller idles this round.
        self.matchings(
            informed,
            informed_count,
            remaining,
            frontier,
            idx + 1,
            new_informed,
            calls,
        )
    }

    /// A matching is dominated when some idle frontier vertex has
    /// exactly one uninformed neighbor and nobody serves that neighbor
    /// this round.
    fn dominated(
        &self,
        informed: &VertexSet,
        frontier: &[VertexId],
        new_informed: &VertexSet,
        calls: &[(VertexId, VertexId)],
    ) -> bool {
        // Callers appear in `calls` in frontier order; merge-scan.
        let mut ci = 0;
        for &v in frontier {
            if ci < calls.len() && calls[ci].0 == v {
                ci += 1;
                continue;
            }
            let mut sole = None;
            let mut count = 0;
            for &u in self.g.neighbors(v) {
                if !informed.contains(u) {
                    count += 1;
                    if count > 1 {
                        break;
                    }
                    sole = Some(u);
                }
            }
            if count == 1 && !new_informed.contains(sole.unwrap()) {
                return true;
            }
        }
        false
    }
}
