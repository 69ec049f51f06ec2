//! Exact computation of the dominating 2-broadcast number on general
//! connected graphs: a branch-and-bound solver over coverage balls, an
//! exhaustive brute-force oracle, enumeration of all optima, and small-scale
//! oracles for the classical domination number and the unlimited dominating
//! broadcast number.

use serde::Serialize;
use thiserror::Error;

use crate::broadcast::BroadcastAssignment;
use crate::graph::{metrics, Graph};

/// Hard safety caps; configured guards are clamped to these.
pub const HARD_CAP_BRUTEFORCE: usize = 20;
pub const HARD_CAP_ENUMERATE: usize = 14;
pub const HARD_CAP_BRANCH_AND_BOUND: usize = 64;
pub const HARD_CAP_ORACLES: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("instance has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("input is not a tree")]
    NotATree,
}

/// Instance-size guards. The defaults keep every solver within desk-scale
/// runtime; they can be raised, but never beyond the hard caps.
#[derive(Debug, Clone, Copy)]
pub struct SizeGuards {
    pub bruteforce: usize,
    pub enumerate: usize,
    pub branch_and_bound: usize,
    pub oracles: usize,
}

impl Default for SizeGuards {
    fn default() -> Self {
        SizeGuards {
            bruteforce: 16,
            enumerate: 12,
            branch_and_bound: 40,
            oracles: 12,
        }
    }
}

impl SizeGuards {
    /// Guards with every limit set to `n`, clamped to the hard caps.
    pub fn uniform(n: usize) -> Self {
        SizeGuards {
            bruteforce: n,
            enumerate: n,
            branch_and_bound: n,
            oracles: n,
        }
        .clamped()
    }

    pub fn clamped(self) -> Self {
        SizeGuards {
            bruteforce: self.bruteforce.min(HARD_CAP_BRUTEFORCE),
            enumerate: self.enumerate.min(HARD_CAP_ENUMERATE),
            branch_and_bound: self.branch_and_bound.min(HARD_CAP_BRANCH_AND_BOUND),
            oracles: self.oracles.min(HARD_CAP_ORACLES),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Bruteforce,
    BranchAndBound,
    TreeDp,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Bruteforce => "bruteforce",
            SolveMethod::BranchAndBound => "branch_and_bound",
            SolveMethod::TreeDp => "tree_dp",
        }
    }
}

/// An optimum value together with a witness assignment. The optimum is
/// deterministic; the witness is one optimal assignment.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub optimum: usize,
    pub witness: BroadcastAssignment,
    pub method: SolveMethod,
    pub nodes_explored: u64,
}

/// Certificate emitted for solver results: the broadcast certificate
/// extended with provenance. Field order is part of the format.
#[derive(Debug, Clone, Serialize)]
pub struct SolveCertificate {
    pub n: usize,
    pub values: Vec<u8>,
    pub cost: usize,
    pub valid: bool,
    pub method: &'static str,
    pub nodes_explored: u64,
}

impl SolveResult {
    pub fn certificate(&self, g: &Graph) -> SolveCertificate {
        let valid = crate::broadcast::validate(g, &self.witness)
            .map(|r| r.is_valid)
            .unwrap_or(false);
        SolveCertificate {
            n: g.n(),
            values: self.witness.values().to_vec(),
            cost: self.witness.cost(),
            valid,
            method: self.method.as_str(),
            nodes_explored: self.nodes_explored,
        }
    }
}

fn all_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bitmask of the ball of the given radius around each vertex. Only valid
/// for graphs of at most 64 vertices.
fn ball_masks(g: &Graph, radius: u32) -> Vec<u64> {
    (0..g.n())
        .map(|v| {
            g.ball(v, radius)
                .into_iter()
                .fold(0u64, |m, u| m | (1u64 << u))
        })
        .collect()
}

fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

struct Bnb {
    full: u64,
    ball1: Vec<u64>,
    ball2: Vec<u64>,
    far4: Vec<u64>,
    values: Vec<u8>,
    best_cost: usize,
    best_values: Vec<u8>,
    nodes: u64,
}

impl Bnb {
    /// Vertices pairwise at distance greater than four need pairwise
    /// distinct positive vertices paying at least one each.
    fn lower_bound(&self, mut uncovered: u64) -> usize {
        let mut count = 0;
        while uncovered != 0 {
            let v = uncovered.trailing_zeros() as usize;
            count += 1;
            uncovered &= self.far4[v];
        }
        count
    }

    fn search(&mut self, covered: u64, cost: usize) {
        self.nodes += 1;
        if covered == self.full {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best_values = self.values.clone();
            }
            return;
        }
        if cost + self.lower_bound(!covered & self.full) >= self.best_cost {
            return;
        }
        let u = (!covered).trailing_zeros() as usize;
        // Radius-2 balls first (better cost per coverage), vertex order by
        // index within each radius.
        for v in iter_bits(self.ball2[u]) {
            if self.values[v] == 0 {
                self.values[v] = 2;
                self.search(covered | self.ball2[v], cost + 2);
                self.values[v] = 0;
            }
        }
        for v in iter_bits(self.ball1[u]) {
            if self.values[v] == 0 {
                self.values[v] = 1;
                self.search(covered | self.ball1[v], cost + 1);
                self.values[v] = 0;
            }
        }
    }
}

/// Branch-and-bound over coverage balls: every vertex offers its radius-1
/// ball at cost 1 and its radius-2 ball at cost 2; branching fixes the ball
/// that covers the lowest-indexed uncovered vertex.
pub fn solve_exact(g: &Graph) -> Result<SolveResult, SolveError> {
    solve_exact_guarded(g, &SizeGuards::default())
}

pub fn solve_exact_guarded(g: &Graph, guards: &SizeGuards) -> Result<SolveResult, SolveError> {
    let guards = guards.clamped();
    let n = g.n();
    if n > guards.branch_and_bound {
        return Err(SolveError::TooLarge {
            n,
            limit: guards.branch_and_bound,
        });
    }
    let mut bnb = Bnb {
        full: all_mask(n),
        ball1: ball_masks(g, 1),
        ball2: ball_masks(g, 2),
        far4: ball_masks(g, 4).into_iter().map(|m| !m).collect(),
        values: vec![0; n],
        // All-ones is always dominating, so it seeds the incumbent.
        best_cost: n,
        best_values: vec![1; n],
        nodes: 0,
    };
    bnb.search(0, 0);
    Ok(SolveResult {
        optimum: bnb.best_cost,
        witness: BroadcastAssignment::new(bnb.best_values).expect("values in range"),
        method: SolveMethod::BranchAndBound,
        nodes_explored: bnb.nodes,
    })
}

/// Lexicographic combinations of size `k` from `pool`, invoking `f` until it
/// returns true. Returns whether `f` accepted some combination.
fn combinations(pool: &[usize], k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        pool: &[usize],
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if current.len() == k {
            return f(current);
        }
        let need = k - current.len();
        for i in start..=pool.len().saturating_sub(need) {
            current.push(pool[i]);
            if rec(pool, k, i + 1, current, f) {
                return true;
            }
            current.pop();
        }
        false
    }
    let mut current = Vec::with_capacity(k);
    rec(pool, k, 0, &mut current, f)
}

fn bruteforce_cost_k(
    n: usize,
    k: usize,
    ball1: &[u64],
    ball2: &[u64],
    full: u64,
    nodes: &mut u64,
    mut on_valid: impl FnMut(&[usize], &[usize]) -> bool,
) -> bool {
    let all: Vec<usize> = (0..n).collect();
    for s2 in 0..=k / 2 {
        let s1 = k - 2 * s2;
        if s2 + s1 > n {
            continue;
        }
        let found = combinations(&all, s2, &mut |twos: &[usize]| {
            let mask2 = twos.iter().fold(0u64, |m, &v| m | ball2[v]);
            let pool: Vec<usize> = (0..n).filter(|v| !twos.contains(v)).collect();
            combinations(&pool, s1, &mut |ones: &[usize]| {
                *nodes += 1;
                let mask = ones.iter().fold(mask2, |m, &v| m | ball1[v]);
                mask == full && on_valid(twos, ones)
            })
        });
        if found {
            return true;
        }
    }
    false
}

/// Exhaustive oracle: for increasing total cost `k`, enumerate all disjoint
/// choices of value-2 and value-1 vertex sets with `2|S2| + |S1| = k`; the
/// first `k` admitting a dominating assignment is the optimum.
pub fn solve_bruteforce(g: &Graph) -> Result<SolveResult, SolveError> {
    solve_bruteforce_guarded(g, &SizeGuards::default())
}

pub fn solve_bruteforce_guarded(g: &Graph, guards: &SizeGuards) -> Result<SolveResult, SolveError> {
    let guards = guards.clamped();
    let n = g.n();
    if n > guards.bruteforce {
        return Err(SolveError::TooLarge {
            n,
            limit: guards.bruteforce,
        });
    }
    let ball1 = ball_masks(g, 1);
    let ball2 = ball_masks(g, 2);
    let full = all_mask(n);
    let mut nodes = 0u64;
    for k in 1..=n {
        let mut witness: Option<BroadcastAssignment> = None;
        if bruteforce_cost_k(n, k, &ball1, &ball2, full, &mut nodes, |twos, ones| {
            witness = Some(BroadcastAssignment::from_support(n, twos, ones));
            true
        }) {
            return Ok(SolveResult {
                optimum: k,
                witness: witness.expect("set on success"),
                method: SolveMethod::Bruteforce,
                nodes_explored: nodes,
            });
        }
    }
    unreachable!("the all-ones assignment dominates at cost n")
}

/// One optimal assignment with its efficiency flag. An assignment is
/// efficient when every vertex hears exactly one positive vertex.
#[derive(Debug, Clone)]
pub struct OptimumEntry {
    pub assignment: BroadcastAssignment,
    pub efficient: bool,
}

#[derive(Debug, Clone)]
pub struct OptimaReport {
    pub optimum: usize,
    pub entries: Vec<OptimumEntry>,
}

/// Enumerates every optimal dominating 2-broadcast.
pub fn enumerate_optima(g: &Graph) -> Result<OptimaReport, SolveError> {
    enumerate_optima_guarded(g, &SizeGuards::default())
}

pub fn enumerate_optima_guarded(g: &Graph, guards: &SizeGuards) -> Result<OptimaReport, SolveError> {
    let guards = guards.clamped();
    let n = g.n();
    if n > guards.enumerate {
        return Err(SolveError::TooLarge {
            n,
            limit: guards.enumerate,
        });
    }
    let ball1 = ball_masks(g, 1);
    let ball2 = ball_masks(g, 2);
    let full = all_mask(n);
    let mut nodes = 0u64;
    for k in 1..=n {
        let mut entries = Vec::new();
        bruteforce_cost_k(n, k, &ball1, &ball2, full, &mut nodes, |twos, ones| {
            let assignment = BroadcastAssignment::from_support(n, twos, ones);
            let mut hears = vec![0u32; n];
            for &v in twos {
                for u in iter_bits(ball2[v]) {
                    hears[u] += 1;
                }
            }
            for &v in ones {
                for u in iter_bits(ball1[v]) {
                    hears[u] += 1;
                }
            }
            let efficient = hears.iter().all(|&c| c == 1);
            entries.push(OptimumEntry {
                assignment,
                efficient,
            });
            false // keep enumerating
        });
        if !entries.is_empty() {
            return Ok(OptimaReport {
                optimum: k,
                entries,
            });
        }
    }
    unreachable!("the all-ones assignment dominates at cost n")
}

/// Groups assignments into orbit classes under a set of vertex permutations.
/// Returns index groups, ordered by each group's canonical representative.
pub fn orbit_classes(
    assignments: &[BroadcastAssignment],
    perms: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    let canonical = |f: &BroadcastAssignment| -> Vec<u8> {
        perms
            .iter()
            .map(|perm| {
                let mut out = vec![0u8; f.len()];
                for v in 0..f.len() {
                    out[perm[v]] = f.value(v);
                }
                out
            })
            .min()
            .unwrap_or_else(|| f.values().to_vec())
    };
    let mut groups: std::collections::BTreeMap<Vec<u8>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, f) in assignments.iter().enumerate() {
        groups.entry(canonical(f)).or_default().push(i);
    }
    groups.into_values().collect()
}

/// The 2n symmetries of the n-cycle with vertices in cyclic order: n
/// rotations and n reflections.
pub fn dihedral_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms = Vec::with_capacity(2 * n);
    for k in 0..n {
        perms.push((0..n).map(|v| (v + k) % n).collect());
        perms.push((0..n).map(|v| (n + k - v) % n).collect());
    }
    perms
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominationOracles {
    pub gamma: usize,
    pub gamma_b: usize,
}

/// Exhaustive values of the classical domination number and the unlimited
/// dominating broadcast number (powers up to the diameter).
pub fn domination_oracles(g: &Graph) -> Result<DominationOracles, SolveError> {
    domination_oracles_guarded(g, &SizeGuards::default())
}

pub fn domination_oracles_guarded(
    g: &Graph,
    guards: &SizeGuards,
) -> Result<DominationOracles, SolveError> {
    let guards = guards.clamped();
    let n = g.n();
    if n > guards.oracles {
        return Err(SolveError::TooLarge {
            n,
            limit: guards.oracles,
        });
    }
    let ball1 = ball_masks(g, 1);
    let full = all_mask(n);
    let all: Vec<usize> = (0..n).collect();
    let mut gamma = n;
    for k in 1..=n {
        if combinations(&all, k, &mut |set: &[usize]| {
            set.iter().fold(0u64, |m, &v| m | ball1[v]) == full
        }) {
            gamma = k;
            break;
        }
    }

    let diam = metrics(g).diameter.max(1);
    let search = BroadcastSearch {
        n,
        diam,
        balls: (0..=diam).map(|r| ball_masks(g, r)).collect(),
        dist: (0..n).map(|v| g.bfs_distances(v)).collect(),
        full,
    };
    let mut gamma_b = gamma; // gamma_b <= gamma always
    for k in 1..=gamma {
        let mut assigned = vec![false; n];
        if search.exists(k, 0, &mut assigned) {
            gamma_b = k;
            break;
        }
    }
    Ok(DominationOracles { gamma, gamma_b })
}

/// Exhaustive search for a dominating broadcast with powers up to the
/// diameter, covering the lowest uncovered vertex first.
struct BroadcastSearch {
    n: usize,
    diam: u32,
    balls: Vec<Vec<u64>>,
    dist: Vec<Vec<u32>>,
    full: u64,
}

impl BroadcastSearch {
    fn exists(&self, budget: usize, covered: u64, assigned: &mut [bool]) -> bool {
        if covered == self.full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let u = (!covered).trailing_zeros() as usize;
        for v in 0..self.n {
            if assigned[v] {
                continue;
            }
            let lo = self.dist[v][u].max(1);
            let hi = (budget as u32).min(self.diam);
            if lo > hi {
                continue;
            }
            assigned[v] = true;
            for r in lo..=hi {
                let grown = covered | self.balls[r as usize][v];
                if self.exists(budget - r as usize, grown, assigned) {
                    assigned[v] = false;
                    return true;
                }
            }
            assigned[v] = false;
        }
        false
    }
}
