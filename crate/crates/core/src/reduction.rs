//! The 3-SAT reduction: every formula maps to a graph whose dominating
//! 2-broadcast number is at most twice the variable count exactly when the
//! formula is satisfiable.
//!
//! Per variable the graph carries a six-vertex gadget: literal vertices
//! `u_i`, `u_i'` both adjacent to two support vertices `s_i`, `s_i'`, each
//! support carrying one leaf. Per clause it carries a connector adjacent to
//! the three literal vertices of the clause and a pendant vertex on the
//! connector. Gadget leaves hear nothing outside their gadget, which forces
//! cost 2 per gadget, and pendants force a value-2 literal vertex per
//! clause.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::broadcast::{validate, BroadcastAssignment};
use crate::graph::Graph;

/// Default and hard limits for the exhaustive satisfiability oracle.
pub const SAT_ORACLE_DEFAULT_LIMIT: usize = 20;
pub const SAT_ORACLE_HARD_CAP: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {index} has {len} literals, expected exactly 3")]
    ClauseLength { index: usize, len: usize },
    #[error("variable {var} out of range 1..={num_vars}")]
    VarOutOfRange { var: usize, num_vars: usize },
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
    #[error("formula needs at least one variable and one clause")]
    EmptyFormula,
    #[error("variable {0} occurs in no clause; its gadget would be disconnected")]
    UnusedVariable(usize),
    #[error("clauses split into independent variable groups; the reduction graph would be disconnected")]
    Disconnected,
    #[error("assignment covers {actual} variables, formula has {expected}")]
    WrongAssignmentLength { expected: usize, actual: usize },
    #[error("broadcast is not dominating on the reduction graph")]
    NotDominating,
    #[error("broadcast has cost {cost}, exceeding the 2n budget {budget}")]
    CostOverBudget { cost: usize, budget: usize },
    #[error("formula has {n} variables, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// A 3-CNF formula. Literals are signed 1-indexed variables; clauses may
/// repeat literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, ReductionError> {
        if num_vars == 0 || clauses.is_empty() {
            return Err(ReductionError::EmptyFormula);
        }
        for clause in &clauses {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > num_vars {
                    return Err(ReductionError::VarOutOfRange { var, num_vars });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

/// Parses DIMACS CNF: comments `c`, header `p cnf <n> <m>`, clauses as
/// 0-terminated integer sequences. Clauses of length other than 3 are
/// rejected.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ReductionError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ReductionError::Parse {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            let mut tokens = line.split_whitespace();
            tokens.next();
            if tokens.next() != Some("cnf") {
                return Err(ReductionError::Parse {
                    line: line_no,
                    msg: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            let n = parse_token(tokens.next(), line_no)?;
            let m = parse_token(tokens.next(), line_no)?;
            header = Some((n as usize, m as usize));
            continue;
        }
        if header.is_none() {
            return Err(ReductionError::Parse {
                line: line_no,
                msg: "clause before header".into(),
            });
        }
        for token in line.split_whitespace() {
            let lit: i32 = token.parse().map_err(|_| ReductionError::Parse {
                line: line_no,
                msg: format!("bad literal '{token}'"),
            })?;
            if lit == 0 {
                let len = current.len();
                if len != 3 {
                    return Err(ReductionError::ClauseLength {
                        index: clauses.len() + 1,
                        len,
                    });
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(ReductionError::ClauseLength {
            index: clauses.len() + 1,
            len: current.len(),
        });
    }
    let (num_vars, m) = header.ok_or(ReductionError::Parse {
        line: 0,
        msg: "missing 'p cnf' header".into(),
    })?;
    if clauses.len() != m {
        return Err(ReductionError::ClauseCountMismatch {
            expected: m,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

fn parse_token(token: Option<&str>, line: usize) -> Result<u64, ReductionError> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ReductionError::Parse {
            line,
            msg: "expected an integer".into(),
        })
}

/// Vertex roles of the reduction graph, 0-indexed per variable and clause.
/// Serialized key names follow the gadget notation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionMap {
    pub u: Vec<usize>,
    pub u_prime: Vec<usize>,
    pub s: Vec<usize>,
    pub s_prime: Vec<usize>,
    pub l: Vec<usize>,
    pub l_prime: Vec<usize>,
    #[serde(rename = "C")]
    pub clause: Vec<usize>,
    #[serde(rename = "C_hat")]
    pub clause_hat: Vec<usize>,
}

impl ReductionMap {
    pub fn num_vars(&self) -> usize {
        self.u.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clause.len()
    }

    pub fn total_vertices(&self) -> usize {
        6 * self.num_vars() + 2 * self.num_clauses()
    }

    /// Vertex of the literal: `u_k` for positive, `u_k'` for negative.
    pub fn literal_vertex(&self, lit: i32) -> usize {
        let var = lit.unsigned_abs() as usize - 1;
        if lit > 0 {
            self.u[var]
        } else {
            self.u_prime[var]
        }
    }
}

/// Builds the reduction graph. Parallel edges arising from repeated literals
/// in a clause collapse, so the edge count is `6n + 4m` exactly when every
/// clause touches three distinct literal vertices.
pub fn build_reduction(cnf: &CnfFormula) -> Result<(Graph, ReductionMap), ReductionError> {
    let n = cnf.num_vars;
    let m = cnf.clauses.len();
    if n == 0 || m == 0 {
        return Err(ReductionError::EmptyFormula);
    }
    let mut used = vec![false; n];
    for clause in &cnf.clauses {
        for &lit in clause {
            used[lit.unsigned_abs() as usize - 1] = true;
        }
    }
    if let Some(var) = used.iter().position(|&u| !u) {
        return Err(ReductionError::UnusedVariable(var + 1));
    }
    let map = ReductionMap {
        u: (0..n).map(|i| 6 * i).collect(),
        u_prime: (0..n).map(|i| 6 * i + 1).collect(),
        s: (0..n).map(|i| 6 * i + 2).collect(),
        s_prime: (0..n).map(|i| 6 * i + 3).collect(),
        l: (0..n).map(|i| 6 * i + 4).collect(),
        l_prime: (0..n).map(|i| 6 * i + 5).collect(),
        clause_hat: (0..m).map(|j| 6 * n + 2 * j).collect(),
        clause: (0..m).map(|j| 6 * n + 2 * j + 1).collect(),
    };
    let mut edges = Vec::with_capacity(6 * n + 4 * m);
    for i in 0..n {
        edges.push((map.u[i], map.s[i]));
        edges.push((map.u_prime[i], map.s[i]));
        edges.push((map.u[i], map.s_prime[i]));
        edges.push((map.u_prime[i], map.s_prime[i]));
        edges.push((map.s[i], map.l[i]));
        edges.push((map.s_prime[i], map.l_prime[i]));
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        edges.push((map.clause[j], map.clause_hat[j]));
        for &lit in clause {
            let v = map.literal_vertex(lit);
            let e = (v.min(map.clause_hat[j]), v.max(map.clause_hat[j]));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    match Graph::new(map.total_vertices(), &edges) {
        Ok(graph) => Ok((graph, map)),
        Err(crate::graph::GraphError::Disconnected) => Err(ReductionError::Disconnected),
        Err(other) => unreachable!("reduction edges are simple and in range: {other}"),
    }
}

/// Broadcast encoding a truth assignment: value 2 on `u_i` for true
/// variables, on `u_i'` for false ones. Costs exactly `2n`; it dominates
/// the reduction graph exactly when the assignment satisfies the formula.
pub fn assignment_to_broadcast(
    map: &ReductionMap,
    assignment: &[bool],
) -> Result<BroadcastAssignment, ReductionError> {
    if assignment.len() != map.num_vars() {
        return Err(ReductionError::WrongAssignmentLength {
            expected: map.num_vars(),
            actual: assignment.len(),
        });
    }
    let mut values = vec![0u8; map.total_vertices()];
    for (i, &truth) in assignment.iter().enumerate() {
        let vertex = if truth { map.u[i] } else { map.u_prime[i] };
        values[vertex] = 2;
    }
    Ok(BroadcastAssignment::new(values).expect("values in range"))
}

/// Reads a truth assignment back from a dominating 2-broadcast of cost at
/// most `2n`: variable `i` is true exactly when `f(u_i) = 2`.
pub fn broadcast_to_assignment(
    g: &Graph,
    map: &ReductionMap,
    f: &BroadcastAssignment,
) -> Result<Vec<bool>, ReductionError> {
    let report = validate(g, f).map_err(|_| ReductionError::NotDominating)?;
    if !report.is_valid {
        return Err(ReductionError::NotDominating);
    }
    let budget = 2 * map.num_vars();
    if f.cost() > budget {
        return Err(ReductionError::CostOverBudget {
            cost: f.cost(),
            budget,
        });
    }
    Ok(map.u.iter().map(|&v| f.value(v) == 2).collect())
}

/// Exhaustive satisfiability oracle; returns the lexicographically first
/// satisfying assignment (false-first) or `None`.
pub fn sat_oracle(cnf: &CnfFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    sat_oracle_limited(cnf, SAT_ORACLE_DEFAULT_LIMIT)
}

pub fn sat_oracle_limited(
    cnf: &CnfFormula,
    limit: usize,
) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = cnf.num_vars;
    let limit = limit.min(SAT_ORACLE_HARD_CAP);
    if n > limit {
        return Err(ReductionError::TooLarge { n, limit });
    }
    for mask in 0u64..(1u64 << n) {
        let assignment: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if cnf.is_satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
