//! Immutable simple connected graphs with 0-indexed vertices, a line-oriented
//! file format, all-pairs metrics and structural queries.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Dense all-pairs distances are only stored up to this order; larger graphs
/// answer distance queries through per-vertex BFS.
pub const DENSE_DISTANCE_LIMIT: usize = 1 << 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {v} out of range for order {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("edge {0}-{1} is not in the graph")]
    NoSuchEdge(usize, usize),
    #[error("edge {0}-{1} is not a cut-edge")]
    NotCutEdge(usize, usize),
}

/// An immutable simple undirected connected graph on vertices `0..n`.
///
/// Connectivity is enforced at construction; every algorithm in this crate
/// relies on it. Adjacency is held in compressed form with each neighbor
/// slice sorted, so iteration order is deterministic and traversals stay
/// cache-friendly on million-vertex trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges, out-of-range endpoints and disconnected inputs. `n = 1` with an
    /// empty edge list is the single-vertex graph; `n = 0` is rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &normalized {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; 2 * normalized.len()];
        for &(u, v) in &normalized {
            targets[cursor[u]] = v;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let g = Graph {
            n,
            edges: normalized,
            offsets,
            targets,
        };
        if g.bfs_distances(0).contains(&u32::MAX) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as normalized pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() == self.n - 1
    }

    /// Hop distances from `src` to every vertex. The graph is connected, so
    /// all entries are finite for valid input; `u32::MAX` marks vertices not
    /// reached (only possible during construction checks).
    pub fn bfs_distances(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::with_capacity(self.n);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in self.neighbors(u) {
                if dist[w] == u32::MAX {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within hop distance `radius` of `src`, in ascending order.
    pub fn ball(&self, src: usize, radius: u32) -> Vec<usize> {
        let mut dist = vec![u32::MAX; self.n];
        dist[src] = 0;
        let mut out = vec![src];
        let mut queue = VecDeque::new();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Serializes to the canonical file form: one `p edge n m` header, then
    /// one `e u v` line per edge with `u < v`, 1-indexed, sorted.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

/// Parses the graph file format: comment lines start with `c`, exactly one
/// header `p edge <n> <m>`, then `m` lines `e <u> <v>` with 1-indexed
/// endpoints. Trailing blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "duplicate header".into(),
                    });
                }
                if tokens.next() != Some("edge") {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "expected 'p edge <n> <m>'".into(),
                    });
                }
                let n = parse_usize(tokens.next(), line_no)?;
                let m = parse_usize(tokens.next(), line_no)?;
                if tokens.next().is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "trailing tokens after header".into(),
                    });
                }
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or(GraphError::Parse {
                    line: line_no,
                    msg: "edge before header".into(),
                })?;
                let u = parse_usize(tokens.next(), line_no)?;
                let v = parse_usize(tokens.next(), line_no)?;
                if tokens.next().is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "trailing tokens after edge".into(),
                    });
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(GraphError::VertexOutOfRange {
                        v: u.max(v),
                        n,
                    });
                }
                edges.push((u - 1, v - 1));
            }
            _ => {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("unrecognized line '{line}'"),
                });
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing 'p edge' header".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::new(n, &edges)
}

fn parse_usize(token: Option<&str>, line: usize) -> Result<usize, GraphError> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::Parse {
            line,
            msg: "expected an integer".into(),
        })
}

/// Per-vertex eccentricities with radius, diameter and the center set.
/// Distances are held densely only up to [`DENSE_DISTANCE_LIMIT`] vertices.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    n: usize,
    dist: Option<Vec<u32>>,
    pub ecc: Vec<u32>,
    pub radius: u32,
    pub diameter: u32,
    pub centers: Vec<usize>,
}

impl MetricsReport {
    /// Stored distance between `u` and `v`; `None` when the graph was too
    /// large for the dense matrix (query the graph directly in that case).
    pub fn distance(&self, u: usize, v: usize) -> Option<u32> {
        self.dist.as_ref().map(|d| d[u * self.n + v])
    }

    pub fn has_dense_distances(&self) -> bool {
        self.dist.is_some()
    }
}

/// All-pairs BFS metrics.
pub fn metrics(g: &Graph) -> MetricsReport {
    let n = g.n();
    let dense = n <= DENSE_DISTANCE_LIMIT;
    let mut dist = if dense {
        Some(vec![0u32; n * n])
    } else {
        None
    };
    let mut ecc = vec![0u32; n];
    for v in 0..n {
        let row = g.bfs_distances(v);
        ecc[v] = row.iter().copied().max().unwrap_or(0);
        if let Some(d) = dist.as_mut() {
            d[v * n..(v + 1) * n].copy_from_slice(&row);
        }
    }
    let radius = *ecc.iter().min().expect("n >= 1");
    let diameter = *ecc.iter().max().expect("n >= 1");
    let centers = (0..n).filter(|&v| ecc[v] == radius).collect();
    MetricsReport {
        n,
        dist,
        ecc,
        radius,
        diameter,
        centers,
    }
}

/// The two sides of a cut-edge split. `first` contains the smaller endpoint
/// of the removed edge; `first_map[i]` is the original id of vertex `i`.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub first: Graph,
    pub second: Graph,
    pub first_map: Vec<usize>,
    pub second_map: Vec<usize>,
}

/// Removes a cut-edge and returns the two connected components with
/// relabeling maps back to the original vertex ids.
pub fn split_at_edge(g: &Graph, e: (usize, usize)) -> Result<EdgeSplit, GraphError> {
    let (a, b) = (e.0.min(e.1), e.0.max(e.1));
    if b >= g.n() || !g.has_edge(a, b) {
        return Err(GraphError::NoSuchEdge(a, b));
    }
    // Component of `a` with the edge removed.
    let mut side_a = vec![false; g.n()];
    side_a[a] = true;
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if (u, w) == (a, b) || (u, w) == (b, a) {
                continue;
            }
            if !side_a[w] {
                side_a[w] = true;
                stack.push(w);
            }
        }
    }
    if side_a[b] {
        return Err(GraphError::NotCutEdge(a, b));
    }
    let build = |keep: &dyn Fn(usize) -> bool| -> (Graph, Vec<usize>) {
        let map: Vec<usize> = (0..g.n()).filter(|&v| keep(v)).collect();
        let mut inv = vec![usize::MAX; g.n()];
        for (new, &old) in map.iter().enumerate() {
            inv[old] = new;
        }
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|&&(u, v)| keep(u) && keep(v))
            .map(|&(u, v)| (inv[u], inv[v]))
            .collect();
        let graph = Graph::new(map.len(), &edges).expect("component of a cut-edge is connected");
        (graph, map)
    };
    let (first, first_map) = build(&|v| side_a[v]);
    let (second, second_map) = build(&|v| !side_a[v]);
    Ok(EdgeSplit {
        first,
        second,
        first_map,
        second_map,
    })
}

/// Structural summary: tree/caterpillar flags, leaves, support vertices and
/// cut-edges (bridges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub is_tree: bool,
    pub is_caterpillar: bool,
    pub leaves: Vec<usize>,
    pub support_vertices: Vec<usize>,
    pub cut_edges: Vec<(usize, usize)>,
}

pub fn structure(g: &Graph) -> StructureReport {
    let n = g.n();
    let is_tree = g.is_tree();
    let leaves: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
    let mut supports: Vec<usize> = leaves.iter().map(|&u| g.neighbors(u)[0]).collect();
    supports.sort_unstable();
    supports.dedup();
    StructureReport {
        is_tree,
        is_caterpillar: is_tree && caterpillar_check(g, &leaves),
        leaves,
        support_vertices: supports,
        cut_edges: bridges(g),
    }
}

/// A tree is a caterpillar when its vertices of degree at least two induce a
/// path. The degenerate trees on one or two vertices count as caterpillars.
fn caterpillar_check(g: &Graph, leaves: &[usize]) -> bool {
    let n = g.n();
    if n <= 2 {
        return true;
    }
    let leaf = {
        let mut mark = vec![false; n];
        for &u in leaves {
            mark[u] = true;
        }
        mark
    };
    let spine: Vec<usize> = (0..n).filter(|&v| !leaf[v]).collect();
    let mut spine_edges = 0usize;
    for &v in &spine {
        let inner = g.neighbors(v).iter().filter(|&&w| !leaf[w]).count();
        if inner > 2 {
            return false;
        }
        spine_edges += inner;
    }
    // In a tree the induced spine has spine.len() - 1 edges iff it is
    // connected, and max inner degree 2 then makes it a path.
    spine_edges / 2 == spine.len().saturating_sub(1)
}

/// Standard iterative bridge detection via DFS low-links.
fn bridges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![u32::MAX; n];
    let mut out = Vec::new();
    let mut timer = 0u32;
    // (vertex, parent, neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    stack.push((0, usize::MAX, 0));
    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        if *idx < g.degree(v) {
            let w = g.neighbors(v)[*idx];
            *idx += 1;
            if disc[w] == u32::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, v, 0));
            } else if w != parent {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&mut (p, _, _)) = stack.last_mut() {
                low[p] = low[p].min(low[v]);
                if low[v] > disc[p] {
                    out.push((p.min(v), p.max(v)));
                }
            }
        }
    }
    out.sort_unstable();
    out
}
