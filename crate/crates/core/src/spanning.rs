//! Spanning-tree enumeration and the constructive extraction of a spanning
//! tree that preserves the dominating 2-broadcast number: the minimum of the
//! tree values over all spanning trees equals the value of the graph, and an
//! optimal assignment yields such a tree directly.

use thiserror::Error;

use crate::broadcast::{validate, BroadcastAssignment};
use crate::exact::{solve_exact_guarded, SizeGuards};
use crate::graph::Graph;
use crate::treedp::solve_tree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanningError {
    #[error("spanning tree count exceeds cap {0}")]
    CapExceeded(usize),
    #[error("assignment is not a dominating 2-broadcast on the graph")]
    NotDominating,
    #[error("assignment has cost {cost} but the optimum is {optimum}")]
    NotOptimal { cost: usize, optimum: usize },
}

/// Invokes `emit` once per spanning tree (as an edge list), each exactly
/// once. Edges are decided in order: including an edge merges components,
/// excluding it is allowed only while the remaining edges can still span.
fn for_each_spanning_tree(
    g: &Graph,
    cap: usize,
    emit: &mut impl FnMut(&[(usize, usize)]) -> Result<(), SpanningError>,
) -> Result<(), SpanningError> {
    let n = g.n();
    let edges = g.edges();
    fn connects(n: usize, chosen: &[(usize, usize)], rest: &[(usize, usize)]) -> bool {
        let mut dsu = Dsu::new(n);
        let mut components = n;
        for &(u, v) in chosen.iter().chain(rest) {
            if dsu.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }
    fn rec(
        n: usize,
        edges: &[(usize, usize)],
        idx: usize,
        chosen: &mut Vec<(usize, usize)>,
        dsu: &Dsu,
        emit: &mut impl FnMut(&[(usize, usize)]) -> Result<(), SpanningError>,
    ) -> Result<(), SpanningError> {
        if chosen.len() == n - 1 {
            return emit(chosen);
        }
        if idx == edges.len() {
            return Ok(());
        }
        let (u, v) = edges[idx];
        // Include, when it joins two components.
        let mut with = dsu.clone();
        if with.union(u, v) {
            chosen.push((u, v));
            rec(n, edges, idx + 1, chosen, &with, emit)?;
            chosen.pop();
        }
        // Exclude, when the remaining edges can still connect everything.
        if connects(n, chosen, &edges[idx + 1..]) {
            rec(n, edges, idx + 1, chosen, dsu, emit)?;
        }
        Ok(())
    }
    let mut count = 0usize;
    let mut counted = |chosen: &[(usize, usize)]| -> Result<(), SpanningError> {
        count += 1;
        if count > cap {
            return Err(SpanningError::CapExceeded(cap));
        }
        emit(chosen)
    };
    rec(n, edges, 0, &mut Vec::new(), &Dsu::new(n), &mut counted)
}

/// All spanning trees of the graph, each exactly once, erroring out when
/// their number exceeds `cap`.
pub fn enumerate_spanning_trees(g: &Graph, cap: usize) -> Result<Vec<Graph>, SpanningError> {
    let mut out = Vec::new();
    for_each_spanning_tree(g, cap, &mut |edges| {
        out.push(Graph::new(g.n(), edges).expect("spanning edge set is a tree"));
        Ok(())
    })?;
    Ok(out)
}

/// Minimum dominating 2-broadcast number over all spanning trees.
pub fn min_over_spanning_trees(g: &Graph, cap: usize) -> Result<usize, SpanningError> {
    let mut best = usize::MAX;
    for_each_spanning_tree(g, cap, &mut |edges| {
        let t = Graph::new(g.n(), edges).expect("spanning edge set is a tree");
        let value = solve_tree(&t).expect("spanning trees are trees").optimum;
        best = best.min(value);
        Ok(())
    })?;
    Ok(best)
}

/// The ordered positive vertices and the vertex blocks grown around them,
/// with the per-block shortest-path tree edges.
#[derive(Debug, Clone)]
pub struct PartitionCover {
    /// Positive vertices in non-increasing value order (ties by index).
    pub order: Vec<usize>,
    /// `blocks[i]` is the block of `order[i]`, sorted.
    pub blocks: Vec<Vec<usize>>,
    /// Block index of every vertex.
    pub block_of: Vec<usize>,
    /// BFS-tree edges within each block, preserving distances to the block
    /// owner.
    pub block_trees: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone)]
pub struct SpanningExtraction {
    pub tree: Graph,
    pub partition: PartitionCover,
    /// Whether optimality of the input assignment was verified against the
    /// exact solver (skipped above the solver's size guard).
    pub optimality_verified: bool,
}

/// Builds a spanning tree on which the given optimal assignment stays
/// dominating, so its tree value equals the graph value.
///
/// Blocks are grown in value order: each positive vertex claims itself and
/// its unclaimed zero neighbors; every remaining zero vertex sits at
/// distance two from a value-2 vertex through an already-claimed zero
/// neighbor and joins that neighbor's block. Per-block BFS trees preserve
/// distances to the block owner; any inter-block edges then complete a
/// spanning tree, chosen greedily by endpoint indices.
pub fn extract_optimal_spanning_tree(
    g: &Graph,
    f: &BroadcastAssignment,
) -> Result<SpanningExtraction, SpanningError> {
    let n = g.n();
    let report = validate(g, f).map_err(|_| SpanningError::NotDominating)?;
    if !report.is_valid {
        return Err(SpanningError::NotDominating);
    }
    let guards = SizeGuards::default();
    let optimality_verified = if n <= guards.branch_and_bound {
        let optimum = solve_exact_guarded(g, &guards)
            .expect("size checked against guard")
            .optimum;
        if f.cost() != optimum {
            return Err(SpanningError::NotOptimal {
                cost: f.cost(),
                optimum,
            });
        }
        true
    } else {
        false
    };

    let mut order: Vec<usize> = f.positive_support();
    order.sort_by_key(|&v| (std::cmp::Reverse(f.value(v)), v));

    const UNCLAIMED: usize = usize::MAX;
    let mut block_of = vec![UNCLAIMED; n];
    for (i, &v) in order.iter().enumerate() {
        block_of[v] = i;
        for &w in g.neighbors(v) {
            if f.value(w) == 0 && block_of[w] == UNCLAIMED {
                block_of[w] = i;
            }
        }
    }
    // Leftover zero vertices have no positive neighbor; since they are
    // dominated, they sit at distance two from a value-2 vertex, and any
    // zero neighbor claimed by a value-2 block at distance one works as the
    // attachment point. Smallest such neighbor keeps the choice canonical.
    for v in 0..n {
        if block_of[v] != UNCLAIMED {
            continue;
        }
        let host = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| {
                block_of[u] != UNCLAIMED
                    && f.value(u) == 0
                    && f.value(order[block_of[u]]) == 2
                    && g.has_edge(u, order[block_of[u]])
            })
            .expect("dominated zero vertex reaches a value-2 block through a neighbor");
        block_of[v] = block_of[host];
    }

    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for v in 0..n {
        blocks[block_of[v]].push(v);
    }

    // BFS tree inside each block from its owner, adjacency order.
    let mut tree_edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut block_trees: Vec<Vec<(usize, usize)>> = Vec::with_capacity(order.len());
    for (i, &owner) in order.iter().enumerate() {
        let mut edges = Vec::with_capacity(blocks[i].len().saturating_sub(1));
        let mut seen = vec![false; n];
        seen[owner] = true;
        let mut queue = std::collections::VecDeque::from([owner]);
        let mut reached = 1usize;
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if block_of[w] == i && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    edges.push((u.min(w), u.max(w)));
                    queue.push_back(w);
                }
            }
        }
        assert_eq!(reached, blocks[i].len(), "block induces a connected subgraph");
        tree_edges.extend_from_slice(&edges);
        block_trees.push(edges);
    }

    // Connect blocks greedily over the edge list (sorted by endpoints).
    let mut dsu = Dsu::new(order.len());
    for &(u, v) in g.edges() {
        if block_of[u] != block_of[v] && dsu.union(block_of[u], block_of[v]) {
            tree_edges.push((u, v));
        }
    }
    let tree = Graph::new(n, &tree_edges).expect("forest plus connectors spans");
    debug_assert!(tree.is_tree());
    Ok(SpanningExtraction {
        tree,
        partition: PartitionCover {
            order,
            blocks,
            block_of,
            block_trees,
        },
        optimality_verified,
    })
}

#[derive(Debug, Clone)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra.max(rb)] = ra.min(rb);
            true
        }
    }
}
