//! Compiling 3SAT into degree-3 broadcast-deadline instances.
//!
//! For a formula with `n` variables and `m` clauses, [`build_reduction`]
//! assembles one `A(n)` tree, two `A(m)` copies per variable (their
//! roots play the parts of "x_i true" and "x_i false"), and one extra
//! vertex per clause:
//!
//! - leaf `v_i` of the `A(n)` tree is attached to the roots `T_i` and
//!   `F_i` of variable `i`'s two copies;
//! - clause `j`'s vertex is attached to leaf `v_j` of the `T_i` copy
//!   for each positive literal on `x_i`, and of the `F_i` copy for
//!   each negative one.
//!
//! The graph has `n^2 + 2n*m^2 + m` vertices, maximum degree 3, and —
//! this is the point of the timing gadgets — the root broadcasts
//! within `2n + 2m - 2` rounds exactly when the formula is
//! satisfiable. [`certify`] turns a satisfying assignment into such a
//! schedule; [`extract_assignment`] reads an assignment back off a
//! schedule by comparing when each variable's two copy roots were
//! informed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula};
use crate::gadgets::{build_a_tree, canonical_a_schedule};
use crate::graph::{Graph, VertexId};
use crate::schedule::{Call, Schedule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { got: usize, expected: usize },
    #[error("assignment does not satisfy the formula")]
    Unsatisfied,
    #[error("variable {var}: copy root never informed")]
    RootUninformed { var: usize },
    #[error("variable {var}: both copy roots informed in round {round}")]
    RootTie { var: usize, round: u32 },
    #[error("map text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Structured name of a reduction vertex.
///
/// Text forms: `r:<i>:<j>` for vertex `(i, j)` of the variable tree,
/// `t:<i>:<i2>:<j2>` / `f:<i>:<i2>:<j2>` for vertex `(i2, j2)` of the
/// copy rooted at `T_i` resp. `F_i`, and `c:<j>` for clause `j`'s
/// vertex. `t:<i>:1:1` is `T_i` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    ATree { row: usize, pos: usize },
    Copy { var: usize, positive: bool, row: usize, pos: usize },
    Clause { index: usize },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::ATree { row, pos } => write!(f, "r:{row}:{pos}"),
            Role::Copy {
                var,
                positive,
                row,
                pos,
            } => write!(f, "{}:{var}:{row}:{pos}", if positive { 't' } else { 'f' }),
            Role::Clause { index } => write!(f, "c:{index}"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let field = |p: &str| -> Result<usize, String> {
            p.parse().map_err(|_| format!("invalid number `{p}` in `{s}`"))
        };
        match parts.as_slice() {
            ["r", row, pos] => Ok(Role::ATree {
                row: field(row)?,
                pos: field(pos)?,
            }),
            [tag @ ("t" | "f"), var, row, pos] => Ok(Role::Copy {
                var: field(var)?,
                positive: *tag == "t",
                row: field(row)?,
                pos: field(pos)?,
            }),
            ["c", index] => Ok(Role::Clause {
                index: field(index)?,
            }),
            _ => Err(format!("unrecognized vertex name `{s}`")),
        }
    }
}

/// Bijection between reduction vertex ids and their [`Role`]s.
#[derive(Debug, Clone)]
pub struct ReductionMap {
    num_vars: usize,
    num_clauses: usize,
    roles: Vec<Role>,
    ids: HashMap<Role, VertexId>,
}

impl ReductionMap {
    fn from_roles(
        num_vars: usize,
        num_clauses: usize,
        roles: Vec<Role>,
    ) -> Result<Self, ReductionError> {
        let expected = expected_roles(num_vars, num_clauses);
        if roles.len() != expected.len() {
            return Err(ReductionError::Parse {
                line: 0,
                msg: format!(
                    "expected {} vertices for n={num_vars}, m={num_clauses}; got {}",
                    expected.len(),
                    roles.len()
                ),
            });
        }
        let mut ids = HashMap::with_capacity(roles.len());
        for (id, &role) in roles.iter().enumerate() {
            if ids.insert(role, id).is_some() {
                return Err(ReductionError::Parse {
                    line: 0,
                    msg: format!("vertex name `{role}` appears twice"),
                });
            }
        }
        for role in expected {
            if !ids.contains_key(&role) {
                return Err(ReductionError::Parse {
                    line: 0,
                    msg: format!("vertex name `{role}` missing"),
                });
            }
        }
        Ok(Self {
            num_vars,
            num_clauses,
            roles,
            ids,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, id: VertexId) -> Option<Role> {
        self.roles.get(id).copied()
    }

    pub fn vertex(&self, role: Role) -> Option<VertexId> {
        self.ids.get(&role).copied()
    }

    /// Id of the broadcast source `r`, the root of the variable tree.
    pub fn root(&self) -> VertexId {
        self.vertex(Role::ATree { row: 1, pos: 1 })
            .expect("every reduction has a root")
    }

    /// Id of `T_var`, the root of the copy meaning "variable true".
    pub fn true_root(&self, var: usize) -> Option<VertexId> {
        self.vertex(Role::Copy {
            var,
            positive: true,
            row: 1,
            pos: 1,
        })
    }

    /// Id of `F_var`, the root of the copy meaning "variable false".
    pub fn false_root(&self, var: usize) -> Option<VertexId> {
        self.vertex(Role::Copy {
            var,
            positive: false,
            row: 1,
            pos: 1,
        })
    }

    /// Map text format: a `p map <n> <m>` header, then one
    /// `m <vertex-id> <structured-name>` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p map {} {}", self.num_vars, self.num_clauses).unwrap();
        for (id, role) in self.roles.iter().enumerate() {
            writeln!(out, "m {id} {role}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReductionError> {
        let mut header: Option<(usize, usize)> = None;
        let mut entries: Vec<(usize, Role, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parse_err = |msg: String| ReductionError::Parse { line, msg };
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return Err(parse_err("duplicate header line".into()));
                    }
                    if fields.len() != 4 || fields[1] != "map" {
                        return Err(parse_err(format!("expected `p map <n> <m>`, got `{trimmed}`")));
                    }
                    let n = fields[2]
                        .parse()
                        .map_err(|_| parse_err(format!("invalid n `{}`", fields[2])))?;
                    let m = fields[3]
                        .parse()
                        .map_err(|_| parse_err(format!("invalid m `{}`", fields[3])))?;
                    header = Some((n, m));
                }
                "m" => {
                    if header.is_none() {
                        return Err(parse_err("`p map` header must come first".into()));
                    }
                    if fields.len() != 3 {
                        return Err(parse_err(format!(
                            "expected `m <vertex-id> <name>`, got `{trimmed}`"
                        )));
                    }
                    let id: usize = fields[1]
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex id `{}`", fields[1])))?;
                    let role = Role::from_str(fields[2]).map_err(&parse_err)?;
                    entries.push((id, role, line));
                }
                tag => return Err(parse_err(format!("unknown line tag `{tag}`"))),
            }
        }
        let (num_vars, num_clauses) = header.ok_or(ReductionError::Parse {
            line: 0,
            msg: "missing `p map` header".into(),
        })?;
        let count = entries.len();
        let mut roles: Vec<Option<Role>> = vec![None; count];
        for (id, role, line) in entries {
            if id >= count {
                return Err(ReductionError::Parse {
                    line,
                    msg: format!("vertex id {id} out of range for {count} map entries"),
                });
            }
            if roles[id].replace(role).is_some() {
                return Err(ReductionError::Parse {
                    line,
                    msg: format!("vertex id {id} mapped twice"),
                });
            }
        }
        let roles = roles.into_iter().map(|r| r.expect("ids are dense")).collect();
        Self::from_roles(num_vars, num_clauses, roles)
    }
}

/// Deadline that separates satisfiable from unsatisfiable formulas:
/// `2n + 2m - 2`.
pub fn target_time(cnf: &CnfFormula) -> u32 {
    (2 * cnf.num_vars() + 2 * cnf.num_clauses() - 2) as u32
}

fn expected_roles(num_vars: usize, num_clauses: usize) -> Vec<Role> {
    let variable_tree = build_a_tree(num_vars).expect("num_vars >= 1");
    let copy_tree = build_a_tree(num_clauses).expect("num_clauses >= 1");
    let mut roles = Vec::with_capacity(
        num_vars * num_vars + 2 * num_vars * num_clauses * num_clauses + num_clauses,
    );
    for &(row, pos) in &variable_tree.coords {
        roles.push(Role::ATree { row, pos });
    }
    for var in 1..=num_vars {
        for positive in [true, false] {
            for &(row, pos) in &copy_tree.coords {
                roles.push(Role::Copy {
                    var,
                    positive,
                    row,
                    pos,
                });
            }
        }
    }
    for index in 1..=num_clauses {
        roles.push(Role::Clause { index });
    }
    roles
}

/// Builds the reduction graph and its vertex-name map. Every vertex is
/// also labeled with its structured name, so the graph file alone
/// identifies the root `r:1:1`.
pub fn build_reduction(cnf: &CnfFormula) -> (Graph, ReductionMap) {
    let n = cnf.num_vars();
    let m = cnf.num_clauses();
    let variable_tree = build_a_tree(n).expect("num_vars >= 1");
    let copy_tree = build_a_tree(m).expect("num_clauses >= 1");
    let copy_size = m * m;
    let t_base = |var: usize| n * n + (var - 1) * 2 * copy_size;
    let f_base = |var: usize| t_base(var) + copy_size;
    let clause_base = n * n + 2 * n * copy_size;
    let total = clause_base + m;

    let mut edges: Vec<(VertexId, VertexId)> = variable_tree.graph.edges().collect();
    for var in 1..=n {
        for base in [t_base(var), f_base(var)] {
            edges.extend(copy_tree.graph.edges().map(|(u, v)| (base + u, base + v)));
            // Attach the copy root to the variable's leaf.
            edges.push((variable_tree.leaves[var - 1], base + copy_tree.root));
        }
    }
    for (idx, clause) in cnf.clauses().iter().enumerate() {
        let clause_vertex = clause_base + idx;
        let copy_leaf = copy_tree.leaves[idx];
        for &literal in clause {
            let var = literal.unsigned_abs() as usize;
            let base = if literal > 0 { t_base(var) } else { f_base(var) };
            edges.push((clause_vertex, base + copy_leaf));
        }
    }

    let roles = expected_roles(n, m);
    let labels: BTreeMap<VertexId, String> = roles
        .iter()
        .enumerate()
        .map(|(id, role)| (id, role.to_string()))
        .collect();
    let graph = Graph::with_labels(total, &edges, labels).expect("reduction edges are valid");
    let map = ReductionMap::from_roles(n, m, roles).expect("canonical roles are a bijection");
    (graph, map)
}

/// Turns a satisfying assignment into a broadcast schedule from `r`
/// that finishes at exactly [`target_time`]:
///
/// 1. rounds `1..=2n-2`: canonical routing inside the variable tree;
/// 2. round `2n-1`: each leaf `v_i` calls the root chosen by the
///    assignment (`T_i` if true, else `F_i`);
/// 3. round `2n`: `v_i` calls the other root;
/// 4. each copy runs its canonical routing offset by its root's
///    informed time, so chosen copies finish at `2n+2m-3` and the
///    others at `2n+2m-2`;
/// 5. round `2n+2m-2`: each clause vertex is called by leaf `v_j` of
///    the chosen copy of its lowest-index true literal.
pub fn certify(cnf: &CnfFormula, assignment: &Assignment) -> Result<Schedule, ReductionError> {
    let n = cnf.num_vars();
    let m = cnf.num_clauses();
    if assignment.len() != n {
        return Err(ReductionError::AssignmentLength {
            got: assignment.len(),
            expected: n,
        });
    }
    if !cnf.is_satisfied_by(assignment) {
        return Err(ReductionError::Unsatisfied);
    }
    let variable_tree = build_a_tree(n).expect("num_vars >= 1");
    let copy_tree = build_a_tree(m).expect("num_clauses >= 1");
    let copy_size = m * m;
    let t_base = |var: usize| n * n + (var - 1) * 2 * copy_size;
    let f_base = |var: usize| t_base(var) + copy_size;
    let clause_base = n * n + 2 * n * copy_size;

    let relay_round = (2 * n - 1) as u32;
    let horizon = target_time(cnf);
    let mut calls = canonical_a_schedule(n)
        .expect("num_vars >= 1")
        .calls()
        .to_vec();
    let copy_calls = canonical_a_schedule(m).expect("num_clauses >= 1");
    for var in 1..=n {
        let leaf = variable_tree.leaves[var - 1];
        let (chosen, other) = if assignment.value(var) {
            (t_base(var), f_base(var))
        } else {
            (f_base(var), t_base(var))
        };
        calls.push(Call {
            round: relay_round,
            caller: leaf,
            callee: chosen + copy_tree.root,
        });
        calls.push(Call {
            round: relay_round + 1,
            caller: leaf,
            callee: other + copy_tree.root,
        });
        for (base, offset) in [(chosen, relay_round), (other, relay_round + 1)] {
            calls.extend(copy_calls.calls().iter().map(|c| Call {
                round: c.round + offset,
                caller: base + c.caller,
                callee: base + c.callee,
            }));
        }
    }
    for (idx, clause) in cnf.clauses().iter().enumerate() {
        let satisfied = clause
            .iter()
            .copied()
            .filter(|&literal| {
                assignment.value(literal.unsigned_abs() as usize) == (literal > 0)
            })
            .min_by_key(|&literal| literal.unsigned_abs())
            .expect("assignment satisfies every clause");
        let var = satisfied.unsigned_abs() as usize;
        let base = if satisfied > 0 { t_base(var) } else { f_base(var) };
        calls.push(Call {
            round: horizon,
            caller: base + copy_tree.leaves[idx],
            callee: clause_base + idx,
        });
    }
    Ok(Schedule::new(0, horizon, calls).expect("certificate calls are well-formed"))
}

/// Reads an assignment off a schedule on the reduction graph: variable
/// `i` is true iff `T_i` was informed strictly before `F_i`. Intended
/// for schedules that verify on the reduction graph (certificates in
/// particular); a tie or an uninformed root means the schedule is not
/// of certificate shape.
pub fn extract_assignment(
    schedule: &Schedule,
    map: &ReductionMap,
) -> Result<Assignment, ReductionError> {
    let mut informed: Vec<Option<u32>> = vec![None; map.vertex_count()];
    if schedule.source() < informed.len() {
        informed[schedule.source()] = Some(0);
    }
    for call in schedule.calls() {
        if call.callee < informed.len() {
            let entry = &mut informed[call.callee];
            *entry = Some(entry.map_or(call.round, |r| r.min(call.round)));
        }
    }
    let mut values = Vec::with_capacity(map.num_vars());
    for var in 1..=map.num_vars() {
        let t_time = map.true_root(var).and_then(|id| informed[id]);
        let f_time = map.false_root(var).and_then(|id| informed[id]);
        let (t_time, f_time) = match (t_time, f_time) {
            (Some(t), Some(f)) => (t, f),
            _ => return Err(ReductionError::RootUninformed { var }),
        };
        if t_time == f_time {
            return Err(ReductionError::RootTie {
                var,
                round: t_time,
            });
        }
        values.push(t_time < f_time);
    }
    Ok(Assignment::new(values))
}
