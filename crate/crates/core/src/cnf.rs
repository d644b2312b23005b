//! 3SAT formulas: DIMACS CNF parsing, truth assignments, and a
//! brute-force satisfiability oracle used by the test fixtures.

use std::fmt::Write as _;

use thiserror::Error;

/// Variables a formula may have before [`sat_brute_force`] refuses it.
pub const SAT_BRUTE_FORCE_VAR_CAP: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("formula needs at least one clause")]
    NoClauses,
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} contains the literal 0")]
    ZeroLiteral { clause: usize },
    #[error("clause {clause}: literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange {
        clause: usize,
        literal: i32,
        num_vars: usize,
    },
    #[error("clause {clause} has {count} distinct literals; at most 3 allowed")]
    TooManyLiterals { clause: usize, count: usize },
    #[error("dimacs: {0}")]
    Parse(String),
    #[error("assignment: {0}")]
    Assignment(String),
    #[error("{num_vars} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { num_vars: usize, cap: usize },
}

/// A CNF formula with at most 3 distinct literals per clause.
///
/// Literals are DIMACS-style signed variable indices (`3` for x3, `-3`
/// for its negation). Duplicate literals within a clause collapse on
/// construction; clauses are stored with literals sorted by variable,
/// positive first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        let mut normalized = Vec::with_capacity(clauses.len());
        for (idx, mut clause) in clauses.into_iter().enumerate() {
            let clause_no = idx + 1;
            if clause.is_empty() {
                return Err(CnfError::EmptyClause { clause: clause_no });
            }
            for &literal in &clause {
                if literal == 0 {
                    return Err(CnfError::ZeroLiteral { clause: clause_no });
                }
                if literal.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        clause: clause_no,
                        literal,
                        num_vars,
                    });
                }
            }
            clause.sort_unstable_by_key(|&l| (l.abs(), l < 0));
            clause.dedup();
            if clause.len() > 3 {
                return Err(CnfError::TooManyLiterals {
                    clause: clause_no,
                    count: clause.len(),
                });
            }
            normalized.push(clause);
        }
        Ok(Self {
            num_vars,
            clauses: normalized,
        })
    }

    /// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, then whitespace-separated literals with each clause
    /// terminated by `0`. Clauses may span lines; the clause count must
    /// match the header.
    pub fn parse_dimacs(text: &str) -> Result<Self, CnfError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(CnfError::Parse("duplicate `p cnf` header".into()));
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(CnfError::Parse(format!(
                        "expected `p cnf <vars> <clauses>`, got `{line}`"
                    )));
                }
                let vars = fields[2]
                    .parse()
                    .map_err(|_| CnfError::Parse(format!("invalid variable count `{}`", fields[2])))?;
                let count = fields[3]
                    .parse()
                    .map_err(|_| CnfError::Parse(format!("invalid clause count `{}`", fields[3])))?;
                header = Some((vars, count));
                continue;
            }
            if header.is_none() {
                return Err(CnfError::Parse(format!(
                    "clause data before `p cnf` header: `{line}`"
                )));
            }
            for token in line.split_whitespace() {
                let literal: i32 = token
                    .parse()
                    .map_err(|_| CnfError::Parse(format!("invalid literal `{token}`")))?;
                if literal == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(literal);
                }
            }
        }
        let (num_vars, clause_count) = header.ok_or(CnfError::Parse("missing `p cnf` header".into()))?;
        if !current.is_empty() {
            return Err(CnfError::Parse("last clause not terminated by 0".into()));
        }
        if clauses.len() != clause_count {
            return Err(CnfError::Parse(format!(
                "header declares {clause_count} clauses but {} found",
                clauses.len()
            )));
        }
        Self::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|clause| {
                clause.iter().any(|&literal| {
                    let var = literal.unsigned_abs() as usize;
                    assignment.value(var) == (literal > 0)
                })
            })
    }
}

/// Truth values for variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Value of 1-based variable `var`.
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    /// Signed-integer syntax: `1,-2,3` means x1 true, x2 false, x3 true.
    pub fn to_signed_string(&self) -> String {
        let mut out = String::new();
        for (idx, &value) in self.values.iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            let var = (idx + 1) as i32;
            write!(out, "{}", if value { var } else { -var }).unwrap();
        }
        out
    }

    /// Parses the signed-integer syntax; every variable in `1..=num_vars`
    /// must appear exactly once, in any order.
    pub fn from_signed_str(text: &str, num_vars: usize) -> Result<Self, CnfError> {
        let mut values: Vec<Option<bool>> = vec![None; num_vars];
        for token in text.split(',') {
            let token = token.trim();
            let literal: i32 = token
                .parse()
                .map_err(|_| CnfError::Assignment(format!("invalid entry `{token}`")))?;
            if literal == 0 {
                return Err(CnfError::Assignment("entry 0 names no variable".into()));
            }
            let var = literal.unsigned_abs() as usize;
            if var > num_vars {
                return Err(CnfError::Assignment(format!(
                    "variable {var} out of range for {num_vars} variables"
                )));
            }
            if values[var - 1].is_some() {
                return Err(CnfError::Assignment(format!("variable {var} listed twice")));
            }
            values[var - 1] = Some(literal > 0);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(idx, v)| v.ok_or(CnfError::Assignment(format!("variable {} missing", idx + 1))))
            .collect::<Result<Vec<bool>, CnfError>>()?;
        Ok(Self { values })
    }
}

/// Finds some satisfying assignment by trying all `2^n`, lowest bit
/// pattern first, or `None` when the formula is unsatisfiable.
/// Deliberately naive: it serves as an independent oracle for the
/// reduction tests, not as a solver.
pub fn sat_brute_force(cnf: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
    let n = cnf.num_vars();
    if n > SAT_BRUTE_FORCE_VAR_CAP {
        return Err(CnfError::TooManyVariables {
            num_vars: n,
            cap: SAT_BRUTE_FORCE_VAR_CAP,
        });
    }
    // Positive/negative variable masks per clause.
    let clause_masks: Vec<(u32, u32)> = cnf
        .clauses()
        .iter()
        .map(|clause| {
            clause.iter().fold((0, 0), |(pos, neg), &literal| {
                let bit = 1u32 << (literal.unsigned_abs() - 1);
                if literal > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    for mask in 0..(1u64 << n) {
        let mask = mask as u32;
        if clause_masks
            .iter()
            .all(|&(pos, neg)| mask & pos != 0 || !mask & neg != 0)
        {
            let values = (0..n).map(|i| mask & (1 << i) != 0).collect();
            return Ok(Some(Assignment::new(values)));
        }
    }
    Ok(None)
}
