//! Broadcast schedules and their verifier.
//!
//! A schedule spells out, round by round, which informed vertex calls
//! which uninformed neighbor. One call takes one time unit, a vertex
//! takes part in at most one call per round, and the message spreads
//! from a single source. [`simulate`] replays a schedule against a
//! graph and reports either the per-vertex informed times or the first
//! rule violation; [`verify_schedule`] adds an optional deadline. Both
//! run in time linear in the graph plus the call list.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("call round {round} outside 1..={horizon}")]
    RoundOutOfRange { round: u32, horizon: u32 },
    #[error("round {round}: vertex {vertex} calls itself")]
    SelfCall { round: u32, vertex: VertexId },
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange {
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("schedule text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One call: in time unit `round`, `caller` passes the message to `callee`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Call {
    pub round: u32,
    pub caller: VertexId,
    pub callee: VertexId,
}

/// A broadcast schedule: a source vertex, a horizon `k`, and calls in
/// rounds `1..=k`. Rounds may be empty; calls are kept sorted by
/// `(round, caller, callee)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    source: VertexId,
    horizon: u32,
    calls: Vec<Call>,
}

impl Schedule {
    pub fn new(source: VertexId, horizon: u32, mut calls: Vec<Call>) -> Result<Self, ScheduleError> {
        for call in &calls {
            if call.round == 0 || call.round > horizon {
                return Err(ScheduleError::RoundOutOfRange {
                    round: call.round,
                    horizon,
                });
            }
            if call.caller == call.callee {
                return Err(ScheduleError::SelfCall {
                    round: call.round,
                    vertex: call.caller,
                });
            }
        }
        calls.sort_unstable();
        Ok(Self {
            source,
            horizon,
            calls,
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn calls(&self) -> &[Call] {
        &self.calls
    }

    /// Parses the line-oriented schedule text format:
    ///
    /// ```text
    /// # comment
    /// s <source-id> <horizon>
    /// c <round> <caller> <callee>
    /// ```
    ///
    /// Call lines may appear in any order.
    pub fn from_text(text: &str) -> Result<Self, ScheduleError> {
        let mut header: Option<(VertexId, u32)> = None;
        let mut calls = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parse_err = |msg: String| ScheduleError::Parse { line, msg };
            match fields[0] {
                "s" => {
                    if header.is_some() {
                        return Err(parse_err("duplicate header line".into()));
                    }
                    if fields.len() != 3 {
                        return Err(parse_err(format!(
                            "expected `s <source> <horizon>`, got `{trimmed}`"
                        )));
                    }
                    header = Some((
                        parse_field(fields[1], line, "source")?,
                        parse_field(fields[2], line, "horizon")?,
                    ));
                }
                "c" => {
                    if header.is_none() {
                        return Err(parse_err("`s` header must come first".into()));
                    }
                    if fields.len() != 4 {
                        return Err(parse_err(format!(
                            "expected `c <round> <caller> <callee>`, got `{trimmed}`"
                        )));
                    }
                    calls.push(Call {
                        round: parse_field(fields[1], line, "round")?,
                        caller: parse_field(fields[2], line, "caller")?,
                        callee: parse_field(fields[3], line, "callee")?,
                    });
                }
                tag => return Err(parse_err(format!("unknown line tag `{tag}`"))),
            }
        }
        let (source, horizon) = header.ok_or(ScheduleError::Parse {
            line: 0,
            msg: "missing `s` header".into(),
        })?;
        Self::new(source, horizon, calls)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "s {} {}", self.source, self.horizon).unwrap();
        for call in &self.calls {
            writeln!(out, "c {} {} {}", call.round, call.caller, call.callee).unwrap();
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, ScheduleError> {
    s.parse().map_err(|_| ScheduleError::Parse {
        line,
        msg: format!("invalid {what} `{s}`"),
    })
}

/// The first broadcast rule a schedule breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A call uses a pair that is not an edge of the graph.
    EdgeNotInGraph {
        round: u32,
        caller: VertexId,
        callee: VertexId,
    },
    /// The caller had not received the message before this round.
    CallerUninformed {
        round: u32,
        caller: VertexId,
        callee: VertexId,
    },
    /// The callee already held the message.
    CalleeAlreadyInformed {
        round: u32,
        caller: VertexId,
        callee: VertexId,
    },
    /// Two calls in one round share an endpoint.
    EndpointConflict { round: u32, vertex: VertexId },
    /// Some vertices never receive the message (or not by the deadline).
    IncompleteCoverage { uninformed: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::EdgeNotInGraph {
                round,
                caller,
                callee,
            } => write!(f, "round {round}: ({caller},{callee}) is not an edge"),
            Violation::CallerUninformed {
                round,
                caller,
                callee,
            } => write!(
                f,
                "round {round}: caller {caller} of ({caller},{callee}) is not yet informed"
            ),
            Violation::CalleeAlreadyInformed {
                round,
                caller,
                callee,
            } => write!(
                f,
                "round {round}: callee {callee} of ({caller},{callee}) is already informed"
            ),
            Violation::EndpointConflict { round, vertex } => {
                write!(f, "round {round}: vertex {vertex} takes part in two calls")
            }
            Violation::IncompleteCoverage { uninformed } => {
                write!(f, "{uninformed} vertices not informed in time")
            }
        }
    }
}

/// Outcome of replaying a schedule: either every vertex's informed
/// round, or the first violation hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// `None` means the schedule is valid.
    pub failure: Option<Violation>,
    /// Last round in which any vertex became informed. Present when the
    /// whole graph was covered, even if a deadline check then failed.
    pub completion_time: Option<u32>,
    /// Informed round per vertex (0 for the source), as far as the
    /// replay got.
    pub informed_time: Vec<Option<u32>>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays `schedule` on `g` round by round.
///
/// Each round must use only graph edges, from an already-informed
/// caller to a not-yet-informed callee, with no vertex in two calls;
/// afterwards every vertex must be informed. The first broken rule is
/// reported. Structural problems (source or call endpoints outside the
/// graph) are errors, not report outcomes.
pub fn simulate(g: &Graph, schedule: &Schedule) -> Result<VerificationReport, ScheduleError> {
    let n = g.vertex_count();
    let range_check = |vertex: VertexId| {
        if vertex >= n {
            Err(ScheduleError::VertexOutOfRange {
                vertex,
                vertex_count: n,
            })
        } else {
            Ok(())
        }
    };
    range_check(schedule.source())?;
    for call in schedule.calls() {
        range_check(call.caller)?;
        range_check(call.callee)?;
    }

    let mut informed_time: Vec<Option<u32>> = vec![None; n];
    informed_time[schedule.source()] = Some(0);
    // Round stamp per vertex for O(1) same-round conflict checks.
    let mut busy_round = vec![0u32; n];
    let fail = |failure, informed_time| {
        Ok(VerificationReport {
            failure: Some(failure),
            completion_time: None,
            informed_time,
        })
    };

    let mut idx = 0;
    let calls = schedule.calls();
    while idx < calls.len() {
        let round = calls[idx].round;
        let round_end = calls[idx..]
            .iter()
            .position(|c| c.round != round)
            .map_or(calls.len(), |off| idx + off);
        for call in &calls[idx..round_end] {
            let &Call {
                round,
                caller,
                callee,
            } = call;
            if !g.has_edge(caller, callee) {
                return fail(
                    Violation::EdgeNotInGraph {
                        round,
                        caller,
                        callee,
                    },
                    informed_time,
                );
            }
            for vertex in [caller, callee] {
                if busy_round[vertex] == round {
                    return fail(Violation::EndpointConflict { round, vertex }, informed_time);
                }
                busy_round[vertex] = round;
            }
            if !matches!(informed_time[caller], Some(t) if t < round) {
                return fail(
                    Violation::CallerUninformed {
                        round,
                        caller,
                        callee,
                    },
                    informed_time,
                );
            }
            if informed_time[callee].is_some() {
                return fail(
                    Violation::CalleeAlreadyInformed {
                        round,
                        caller,
                        callee,
                    },
                    informed_time,
                );
            }
            informed_time[callee] = Some(round);
        }
        idx = round_end;
    }

    let uninformed = informed_time.iter().filter(|t| t.is_none()).count();
    if uninformed > 0 {
        return fail(Violation::IncompleteCoverage { uninformed }, informed_time);
    }
    let completion = informed_time.iter().flatten().copied().max().unwrap_or(0);
    Ok(VerificationReport {
        failure: None,
        completion_time: Some(completion),
        informed_time,
    })
}

/// [`simulate`] plus an optional deadline: with `deadline = Some(d)` the
/// schedule is additionally required to finish by round `d`. A schedule
/// that covers the graph only after `d` comes back as incomplete
/// coverage, with its actual completion time still filled in.
pub fn verify_schedule(
    g: &Graph,
    schedule: &Schedule,
    deadline: Option<u32>,
) -> Result<VerificationReport, ScheduleError> {
    let mut report = simulate(g, schedule)?;
    if let (None, Some(completion), Some(d)) = (&report.failure, report.completion_time, deadline)
    {
        if completion > d {
            let uninformed = report
                .informed_time
                .iter()
                .filter(|t| !matches!(t, Some(r) if *r <= d))
                .count();
            report.failure = Some(Violation::IncompleteCoverage { uninformed });
        }
    }
    Ok(report)
}
