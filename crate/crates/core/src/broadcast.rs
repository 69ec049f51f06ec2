//! Broadcast assignments over {0, 1, 2}, coverage validation and the
//! leaf-normalization transform.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BroadcastError {
    #[error("assignment has length {actual}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {value} at vertex {v} is outside {{0,1,2}}")]
    ValueOutOfRange { v: usize, value: u8 },
    #[error("assignment is not a dominating 2-broadcast ({uncovered} uncovered)")]
    NotDominating { uncovered: usize },
}

/// A function `V -> {0,1,2}`. The cost is the sum of all values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BroadcastAssignment {
    values: Vec<u8>,
}

impl BroadcastAssignment {
    pub fn new(values: Vec<u8>) -> Result<Self, BroadcastError> {
        if let Some(v) = values.iter().position(|&x| x > 2) {
            return Err(BroadcastError::ValueOutOfRange {
                v,
                value: values[v],
            });
        }
        Ok(BroadcastAssignment { values })
    }

    pub fn zero(n: usize) -> Self {
        BroadcastAssignment {
            values: vec![0; n],
        }
    }

    /// Builds an assignment from the sets of value-2 and value-1 vertices.
    pub fn from_support(n: usize, twos: &[usize], ones: &[usize]) -> Self {
        let mut values = vec![0u8; n];
        for &v in twos {
            values[v] = 2;
        }
        for &v in ones {
            values[v] = 1;
        }
        BroadcastAssignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: usize) -> u8 {
        self.values[v]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn cost(&self) -> usize {
        self.values.iter().map(|&x| x as usize).sum()
    }

    /// Vertices with positive value.
    pub fn positive_support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&v| self.values[v] > 0)
            .collect()
    }

    /// Vertices with value zero.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&v| self.values[v] == 0)
            .collect()
    }
}

/// Outcome of coverage checking. `dominators[u]` lists every positive vertex
/// that `u` hears, i.e. every `v` with `f(v) >= 1` and `d(u,v) <= f(v)`.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub is_valid: bool,
    pub uncovered: Vec<usize>,
    pub dominators: Vec<Vec<usize>>,
}

impl CoverageReport {
    /// True when every vertex hears exactly one positive vertex.
    pub fn is_efficient(&self) -> bool {
        self.is_valid && self.dominators.iter().all(|d| d.len() == 1)
    }
}

/// Checks whether `f` is a dominating 2-broadcast on `g`, reporting the
/// uncovered vertices and all dominators per vertex.
///
/// Runs one depth-bounded BFS per positive vertex, with an epoch stamp per
/// vertex instead of a fresh visited array, so the total work is the sum of
/// the ball sizes rather than O(n) per source.
pub fn validate(g: &Graph, f: &BroadcastAssignment) -> Result<CoverageReport, BroadcastError> {
    let n = g.n();
    if f.len() != n {
        return Err(BroadcastError::LengthMismatch {
            expected: n,
            actual: f.len(),
        });
    }
    let mut dominators: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stamp: Vec<u32> = vec![u32::MAX; n];
    let mut frontier: Vec<usize> = Vec::new();
    let mut next: Vec<usize> = Vec::new();
    let mut id = 0u32;
    for v in 0..n {
        let power = f.value(v) as u32;
        if power == 0 {
            continue;
        }
        stamp[v] = id;
        dominators[v].push(v);
        frontier.clear();
        frontier.push(v);
        for _ in 0..power {
            next.clear();
            for &u in &frontier {
                for &w in g.neighbors(u) {
                    if stamp[w] != id {
                        stamp[w] = id;
                        dominators[w].push(v);
                        next.push(w);
                    }
                }
            }
            std::mem::swap(&mut frontier, &mut next);
        }
        id += 1;
    }
    let uncovered: Vec<usize> = (0..n).filter(|&u| dominators[u].is_empty()).collect();
    Ok(CoverageReport {
        is_valid: uncovered.is_empty(),
        uncovered,
        dominators,
    })
}

/// Moves positive values off leaves onto their support vertices, using
/// `max(f(leaf), f(support))` at the support. Never increases the cost and
/// preserves validity; on graphs with at least three vertices the result is
/// zero on every leaf.
///
/// The two-vertex graph is returned unchanged: both vertices are leaves, so
/// no dominating assignment can avoid them.
pub fn normalize_leaves(
    g: &Graph,
    f: &BroadcastAssignment,
) -> Result<BroadcastAssignment, BroadcastError> {
    let report = validate(g, f)?;
    if !report.is_valid {
        return Err(BroadcastError::NotDominating {
            uncovered: report.uncovered.len(),
        });
    }
    if g.n() <= 2 {
        return Ok(f.clone());
    }
    let mut values = f.values().to_vec();
    for u in 0..g.n() {
        if g.degree(u) == 1 && values[u] > 0 {
            let support = g.neighbors(u)[0];
            values[support] = values[support].max(values[u]);
            values[u] = 0;
        }
    }
    Ok(BroadcastAssignment { values })
}

/// The machine-readable certificate for an assignment on a graph.
/// Field order is part of the format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub values: Vec<u8>,
    pub cost: usize,
    pub valid: bool,
}

impl Certificate {
    pub fn for_assignment(g: &Graph, f: &BroadcastAssignment) -> Result<Self, BroadcastError> {
        let report = validate(g, f)?;
        Ok(Certificate {
            n: g.n(),
            values: f.values().to_vec(),
            cost: f.cost(),
            valid: report.is_valid,
        })
    }
}
