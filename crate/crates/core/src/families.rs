//! Generators for named graph families, exhaustive enumeration of small
//! trees up to isomorphism, the extremal-family recognizer and the bound
//! auditor.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{self, Graph};
use crate::treedp;

/// Center vertex of the tree produced by [`FamilySpec::T9`].
pub const T9_CENTER: usize = 2;

/// Largest order supported by [`enumerate_free_trees`].
pub const FREE_TREE_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),
    #[error("free-tree enumeration supports 1 <= n <= {max}, got {n}")]
    UnsupportedOrder { n: usize, max: usize },
    #[error("input is not a tree")]
    NotATree,
    #[error("ceiling lemma precondition a/b <= c/d violated: {a}/{b} > {c}/{d}")]
    Precondition { a: i64, b: i64, c: i64, d: i64 },
}

/// Specification of a generated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Path { n: usize },
    Cycle { n: usize },
    Star { leaves: usize },
    Spider { legs: usize, leg_len: usize },
    T9,
    /// `m` copies of T_9 joined by `m - 1` edges between centers. With no
    /// seed the centers form a path; with a seed the center tree is drawn
    /// uniformly at random.
    FamilyF { m: usize, seed: Option<u64> },
    RandomTree { n: usize, seed: u64 },
    RandomCaterpillar { n: usize, seed: u64 },
}

pub fn generate(spec: &FamilySpec) -> Result<Graph, FamilyError> {
    match *spec {
        FamilySpec::Path { n } => {
            require(n >= 1, "path needs n >= 1")?;
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Ok(build(n, &edges))
        }
        FamilySpec::Cycle { n } => {
            require(n >= 3, "cycle needs n >= 3")?;
            let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            Ok(build(n, &edges))
        }
        FamilySpec::Star { leaves } => {
            require(leaves >= 1, "star needs at least one leaf")?;
            let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
            Ok(build(leaves + 1, &edges))
        }
        FamilySpec::Spider { legs, leg_len } => {
            require(legs >= 1 && leg_len >= 1, "spider needs legs, leg_len >= 1")?;
            let mut edges = Vec::new();
            for leg in 0..legs {
                let base = 1 + leg * leg_len;
                edges.push((0, base));
                for k in 1..leg_len {
                    edges.push((base + k - 1, base + k));
                }
            }
            Ok(build(1 + legs * leg_len, &edges))
        }
        FamilySpec::T9 => Ok(build(9, &t9_edges(0))),
        FamilySpec::FamilyF { m, seed } => {
            require(m >= 1, "family F needs m >= 1")?;
            let mut edges = Vec::new();
            for copy in 0..m {
                edges.extend_from_slice(&t9_edges(9 * copy));
            }
            let center = |copy: usize| 9 * copy + T9_CENTER;
            match seed {
                None => {
                    for copy in 1..m {
                        edges.push((center(copy - 1), center(copy)));
                    }
                }
                Some(seed) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    for (a, b) in random_tree_edges(m, &mut rng) {
                        edges.push((center(a), center(b)));
                    }
                }
            }
            Ok(build(9 * m, &edges))
        }
        FamilySpec::RandomTree { n, seed } => {
            require(n >= 1, "random tree needs n >= 1")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges = random_tree_edges(n, &mut rng);
            Ok(build(n, &edges))
        }
        FamilySpec::RandomCaterpillar { n, seed } => {
            require(n >= 1, "random caterpillar needs n >= 1")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spine = rng.gen_range(1..=n);
            let mut edges: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
            for v in spine..n {
                edges.push((rng.gen_range(0..spine), v));
            }
            Ok(build(n, &edges))
        }
    }
}

/// Spine s1-s2-x-s3-s4 at offsets 0..5 plus one pendant leaf per support at
/// offsets 5..9.
fn t9_edges(base: usize) -> [(usize, usize); 8] {
    [
        (base, base + 1),
        (base + 1, base + 2),
        (base + 2, base + 3),
        (base + 3, base + 4),
        (base, base + 5),
        (base + 1, base + 6),
        (base + 3, base + 7),
        (base + 4, base + 8),
    ]
}

fn require(cond: bool, msg: &str) -> Result<(), FamilyError> {
    if cond {
        Ok(())
    } else {
        Err(FamilyError::InvalidParameter(msg.into()))
    }
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).expect("generator emits valid connected graphs")
}

/// Uniform labeled tree on `n` vertices via a random Pruefer sequence.
fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

/// Decodes a Pruefer sequence into the edge list of the labeled tree.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1u32; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let Reverse(u) = leaves.pop().expect("tree invariant");
        edges.push((u, a));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().unwrap();
    let Reverse(v) = leaves.pop().unwrap();
    edges.push((u, v));
    edges
}

/// A connected graph drawn as a random tree plus a seeded number of extra
/// edges. Used to build test corpora; always connected and deterministic
/// under the seed.
pub fn random_connected_graph(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_tree_edges(n, &mut rng);
    if n >= 3 {
        let max_extra = (n * (n - 1) / 2).saturating_sub(n - 1).min(n);
        let extra = rng.gen_range(0..=max_extra);
        let mut has: std::collections::HashSet<(usize, usize)> =
            edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut added = 0;
        let mut attempts = 0;
        while added < extra && attempts < 20 * extra.max(1) {
            attempts += 1;
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if has.insert(e) {
                edges.push(e);
                added += 1;
            }
        }
    }
    build(n, &edges)
}

/// Canonical encoding of a free tree: AHU form rooted at the tree center,
/// taking the lexicographically smaller encoding when there are two centers.
/// Equal encodings characterize isomorphic trees.
pub fn canonical_form(t: &Graph) -> Result<String, FamilyError> {
    if !t.is_tree() {
        return Err(FamilyError::NotATree);
    }
    let centers = tree_centers(t);
    let code = centers
        .iter()
        .map(|&c| ahu_encode(t, c))
        .min()
        .expect("a tree has at least one center");
    Ok(code)
}

/// The one or two centers of a tree, found by iterative leaf peeling.
fn tree_centers(t: &Graph) -> Vec<usize> {
    let n = t.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &u in &layer {
            degree[u] = 0;
            for &w in t.neighbors(u) {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn ahu_encode(t: &Graph, root: usize) -> String {
    fn encode(t: &Graph, v: usize, parent: usize) -> String {
        let mut parts: Vec<String> = t
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| encode(t, w, v))
            .collect();
        parts.sort();
        let mut out = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
        out.push('(');
        for p in parts {
            out.push_str(&p);
        }
        out.push(')');
        out
    }
    encode(t, root, usize::MAX)
}

/// All free trees on `n` vertices, one representative per isomorphism class,
/// in canonical-encoding order. Trees of order `k` are grown from the trees
/// of order `k - 1` by leaf attachment and deduplicated canonically; every
/// tree arises this way because removing any leaf of a tree leaves a tree.
pub fn enumerate_free_trees(n: usize) -> Result<Vec<Graph>, FamilyError> {
    if !(1..=FREE_TREE_LIMIT).contains(&n) {
        return Err(FamilyError::UnsupportedOrder {
            n,
            max: FREE_TREE_LIMIT,
        });
    }
    let mut current = vec![build(1, &[])];
    for k in 2..=n {
        let mut seen: HashMap<String, Graph> = HashMap::new();
        for t in &current {
            let mut edges = t.edges().to_vec();
            for v in 0..k - 1 {
                edges.push((v, k - 1));
                let grown = build(k, &edges);
                let key = canonical_form(&grown)?;
                seen.entry(key).or_insert(grown);
                edges.pop();
            }
        }
        let mut keyed: Vec<(String, Graph)> = seen.into_iter().collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        current = keyed.into_iter().map(|(_, g)| g).collect();
    }
    Ok(current)
}

/// A decomposition of a tree into T_9 copies joined by center edges.
#[derive(Debug, Clone)]
pub struct FDecomposition {
    /// Vertex sets of the copies, one per center, each of size 9.
    pub copies: Vec<Vec<usize>>,
    pub centers: Vec<usize>,
    pub center_edges: Vec<(usize, usize)>,
}

/// Tests membership in the family of trees built from `m` copies of T_9
/// joined by `m - 1` center-to-center edges, returning the decomposition on
/// success. The decomposition is forced: stripping the leaves must leave a
/// forest of 5-vertex spines whose middles are the centers.
pub fn recognize_family_f(t: &Graph) -> Result<Option<FDecomposition>, FamilyError> {
    if !t.is_tree() {
        return Err(FamilyError::NotATree);
    }
    let n = t.n();
    if !n.is_multiple_of(9) {
        return Ok(None);
    }
    let m = n / 9;
    let leaf: Vec<bool> = (0..n).map(|v| t.degree(v) == 1).collect();
    let mut leaf_count = vec![0usize; n];
    for v in 0..n {
        if leaf[v] {
            leaf_count[t.neighbors(v)[0]] += 1;
        }
    }
    if leaf.iter().filter(|&&b| b).count() != 4 * m {
        return Ok(None);
    }
    // Degrees inside the leaf-stripped tree.
    let inner_deg = |v: usize| {
        t.neighbors(v)
            .iter()
            .filter(|&&w| !leaf[w])
            .count()
    };

    // Roles: 0 unknown, 1 arm tip (s1/s4), 2 arm mid (s2/s3), 3 center.
    let mut role = vec![0u8; n];
    let mut arms_of: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for tip in 0..n {
        if leaf[tip] || inner_deg(tip) != 1 {
            continue;
        }
        if leaf_count[tip] != 1 {
            return Ok(None);
        }
        let mid = *t
            .neighbors(tip)
            .iter()
            .find(|&&w| !leaf[w])
            .expect("inner degree 1");
        if inner_deg(mid) != 2 || leaf_count[mid] != 1 {
            return Ok(None);
        }
        let center = *t
            .neighbors(mid)
            .iter()
            .find(|&&w| !leaf[w] && w != tip)
            .expect("inner degree 2");
        if leaf_count[center] != 0 {
            return Ok(None);
        }
        if role[tip] != 0 || (role[mid] != 0 && role[mid] != 2) {
            return Ok(None);
        }
        role[tip] = 1;
        role[mid] = 2;
        if role[center] == 2 || role[center] == 1 {
            return Ok(None);
        }
        role[center] = 3;
        arms_of.entry(center).or_default().push((tip, mid));
    }
    let mut centers: Vec<usize> = arms_of.keys().copied().collect();
    centers.sort_unstable();
    if centers.len() != m {
        return Ok(None);
    }
    // Every non-leaf vertex must have been classified, each center carries
    // exactly two arms, and center neighbors are its arm mids or centers.
    for v in 0..n {
        if !leaf[v] && role[v] == 0 {
            return Ok(None);
        }
    }
    let mut center_edges = Vec::new();
    for &c in &centers {
        let arms = &arms_of[&c];
        if arms.len() != 2 {
            return Ok(None);
        }
        for &w in t.neighbors(c) {
            if role[w] == 3 {
                if c < w {
                    center_edges.push((c, w));
                }
            } else if !arms.iter().any(|&(_, mid)| mid == w) {
                return Ok(None);
            }
        }
    }
    if center_edges.len() != m - 1 {
        return Ok(None);
    }
    let copies = centers
        .iter()
        .map(|&c| {
            let mut copy = vec![c];
            for &(tip, mid) in &arms_of[&c] {
                copy.extend([tip, mid]);
                copy.extend(t.neighbors(tip).iter().copied().filter(|&w| leaf[w]));
                copy.extend(t.neighbors(mid).iter().copied().filter(|&w| leaf[w]));
            }
            copy.sort_unstable();
            copy
        })
        .collect();
    Ok(Some(FDecomposition {
        copies,
        centers,
        center_edges,
    }))
}

/// Bound audit of a single tree. `tree_bound` is ceil(4n/9);
/// `caterpillar_bound` is ceil(2n/5), filled only for caterpillars.
/// `in_extremal_family` reports membership in the T_9 family.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub gamma_b2: usize,
    pub tree_bound: usize,
    pub caterpillar_bound: Option<usize>,
    pub tight_tree_bound: bool,
    pub in_extremal_family: bool,
}

pub fn audit_bounds(t: &Graph) -> Result<AuditReport, FamilyError> {
    if !t.is_tree() {
        return Err(FamilyError::NotATree);
    }
    let n = t.n();
    let gamma_b2 = treedp::solve_tree(t)
        .expect("input verified to be a tree")
        .optimum;
    let tree_bound = (4 * n).div_ceil(9);
    let is_caterpillar = graph::structure(t).is_caterpillar;
    let in_f = recognize_family_f(t)?.is_some();
    Ok(AuditReport {
        n,
        gamma_b2,
        tree_bound,
        caterpillar_bound: is_caterpillar.then(|| (2 * n).div_ceil(5)),
        tight_tree_bound: gamma_b2 == tree_bound,
        in_extremal_family: in_f,
    })
}

/// True when the tree is one of the paths P_1, P_2, P_4.
pub fn is_exceptional_path(t: &Graph) -> bool {
    let n = t.n();
    (n == 1 || n == 2 || n == 4) && t.is_tree() && (0..n).all(|v| t.degree(v) <= 2)
}

/// Checks the ceiling inequality `a + ceil(c(n-b)/d) <= ceil(cn/d)` that
/// holds whenever `a/b <= c/d` with `b, d > 0`. The precondition is enforced;
/// under it the function always returns true, and exists so the arithmetic
/// can be property-tested.
pub fn ceiling_lemma_check(a: i64, b: i64, c: i64, d: i64, n: i64) -> Result<bool, FamilyError> {
    if b <= 0 || d <= 0 || (a as i128) * (d as i128) > (c as i128) * (b as i128) {
        return Err(FamilyError::Precondition { a, b, c, d });
    }
    let lhs = a as i128 + ceil_div(c as i128 * (n as i128 - b as i128), d as i128);
    let rhs = ceil_div(c as i128 * n as i128, d as i128);
    Ok(lhs <= rhs)
}

fn ceil_div(x: i128, y: i128) -> i128 {
    debug_assert!(y > 0);
    x.div_euclid(y) + if x.rem_euclid(y) != 0 { 1 } else { 0 }
}
