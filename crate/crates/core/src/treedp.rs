//! Linear-time computation of the dominating 2-broadcast number on trees.
//!
//! Rooted partial assignments fall into eight classes describing whether the
//! processed subtree is fully dominated and what the root contributes:
//!
//! - `C1`: dominating, `f(r) = 2`
//! - `C2`: dominating, `f(r) = 1`
//! - `C3`: dominating, `f(r) = 0`, every neighbor of `r` has value 0
//! - `C4`: dominating, `f(r) = 0`, some neighbor has value 1, none has 2
//! - `C5`: dominating, `f(r) = 0`, some neighbor has value 2
//! - `C6`: undominated exactly at the root
//! - `C7`: undominated on a set inside `N[r]` other than `{r}`
//! - `C8`: undominated somewhere outside `N[r]`
//!
//! Attaching a processed child subtree to a root rewrites the class by a
//! fixed 8x8 table, so a post-order fold computes the minimum cost of every
//! class at the root in constant work per edge. Single vertices realize
//! `C1`, `C2`, `C6`; the accepting classes are `C1`..`C5`.

use crate::broadcast::{validate, BroadcastAssignment};
use crate::exact::{SolveError, SolveMethod, SolveResult};
use crate::graph::Graph;

/// The eight composition classes of rooted partial assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DpClass {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

use DpClass::*;

impl DpClass {
    pub const ALL: [DpClass; 8] = [C1, C2, C3, C4, C5, C6, C7, C8];

    pub fn index(self) -> usize {
        match self {
            C1 => 0,
            C2 => 1,
            C3 => 2,
            C4 => 3,
            C5 => 4,
            C6 => 5,
            C7 => 6,
            C8 => 7,
        }
    }

    pub fn from_index(i: usize) -> DpClass {
        Self::ALL[i]
    }

    /// Classes whose assignments already dominate the whole subtree.
    pub fn is_accepting(self) -> bool {
        self.index() < 5
    }

    /// Classes realizable by a single-vertex tree.
    pub fn is_primitive(self) -> bool {
        matches!(self, C1 | C2 | C6)
    }
}

/// Class of the composed triple, by parent-side class (row) and attached
/// child class (column).
pub const CLASS_TABLE: [[DpClass; 8]; 8] = [
    [C1, C1, C1, C1, C1, C1, C1, C8],
    [C2, C2, C2, C2, C2, C2, C8, C8],
    [C5, C4, C3, C3, C3, C7, C8, C8],
    [C5, C4, C4, C4, C4, C7, C8, C8],
    [C5, C5, C5, C5, C5, C5, C8, C8],
    [C5, C4, C6, C6, C3, C7, C8, C8],
    [C5, C7, C7, C7, C7, C7, C8, C8],
    [C8, C8, C8, C8, C8, C8, C8, C8],
];

pub fn compose_classes(parent: DpClass, child: DpClass) -> DpClass {
    CLASS_TABLE[parent.index()][child.index()]
}

/// Classifies a rooted assignment from first principles (coverage plus
/// neighbor inspection), independently of the composition table.
pub fn classify(t: &Graph, root: usize, f: &BroadcastAssignment) -> Result<DpClass, SolveError> {
    if !t.is_tree() {
        return Err(SolveError::NotATree);
    }
    let report = validate(t, f).expect("assignment length matches the tree");
    if report.is_valid {
        return Ok(match f.value(root) {
            2 => C1,
            1 => C2,
            _ => {
                let values = t.neighbors(root).iter().map(|&w| f.value(w));
                let max = values.max().unwrap_or(0);
                match max {
                    2 => C5,
                    1 => C4,
                    _ => C3,
                }
            }
        });
    }
    let uncovered = &report.uncovered;
    if uncovered == &[root] {
        return Ok(C6);
    }
    let in_closed_nbhd =
        |v: usize| v == root || t.neighbors(root).binary_search(&v).is_ok();
    if uncovered.iter().all(|&v| in_closed_nbhd(v)) {
        Ok(C7)
    } else {
        Ok(C8)
    }
}

/// Joins two rooted trees by an edge between their roots, keeping the first
/// root. Vertices of the second tree are shifted by the first tree's order.
pub fn compose_rooted(
    t1: &Graph,
    r1: usize,
    t2: &Graph,
    r2: usize,
) -> (Graph, usize) {
    let shift = t1.n();
    let mut edges = t1.edges().to_vec();
    edges.extend(t2.edges().iter().map(|&(a, b)| (a + shift, b + shift)));
    edges.push((r1, r2 + shift));
    let g = Graph::new(t1.n() + t2.n(), &edges).expect("joining trees by an edge yields a tree");
    (g, r1)
}

const UNREACHABLE_PICK: (u8, u8) = (u8::MAX, u8::MAX);

/// State vector: minimum cost realizing each class on the processed subtree,
/// `None` where the class is unreachable. Costs are stored shifted by one so
/// the sentinel stays an explicit `None` while the entry fits in four bytes.
type Costs = [Option<std::num::NonZeroU32>; 8];

fn store(cost: u32) -> Option<std::num::NonZeroU32> {
    std::num::NonZeroU32::new(cost + 1)
}

fn load(entry: std::num::NonZeroU32) -> u32 {
    entry.get() - 1
}

/// Per-vertex primitive state: value 0 gives C6 at cost 0, value 1 gives C2
/// at cost 1, value 2 gives C1 at cost 2.
fn primitive() -> Costs {
    let mut state: Costs = [None; 8];
    state[C1.index()] = store(2);
    state[C2.index()] = store(1);
    state[C6.index()] = store(0);
    state
}

/// Computes the dominating 2-broadcast number of a tree with a witness, in
/// O(n) table operations. The tree is rooted at vertex 0; children are
/// absorbed in adjacency order with deterministic tie-breaking, so the
/// witness is reproducible.
pub fn solve_tree(t: &Graph) -> Result<SolveResult, SolveError> {
    solve_tree_rooted(t, 0)
}

fn solve_tree_rooted(t: &Graph, root: usize) -> Result<SolveResult, SolveError> {
    if !t.is_tree() {
        return Err(SolveError::NotATree);
    }
    let n = t.n();
    // Iterative BFS orientation, relabeling vertices by visit position: the
    // children of position i then occupy one contiguous position range, in
    // adjacency order, and everything streams. Explicit loops keep
    // million-vertex paths off the call stack.
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut child_range: Vec<(u32, u32)> = vec![(0, 0); n];
    pos[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        let start = order.len();
        for &w in t.neighbors(v) {
            if pos[w] == usize::MAX {
                pos[w] = order.len();
                order.push(w);
            }
        }
        child_range[head] = (start as u32, order.len() as u32);
        head += 1;
    }

    let mut costs: Vec<Costs> = vec![primitive(); n];
    // pick[c][x]: the (parent-class, child-class) pair chosen when absorbing
    // the child at position c produced class x at its parent.
    let mut pick: Vec<[(u8, u8); 8]> = vec![[UNREACHABLE_PICK; 8]; n];

    for i in (0..n).rev() {
        let (start, end) = child_range[i];
        for c in start as usize..end as usize {
            // Reachable class lists stay tiny, so gather them once.
            let mut child_states: [(u8, u32); 8] = [(0, 0); 8];
            let mut child_len = 0;
            for (q, &entry) in costs[c].iter().enumerate() {
                if let Some(cq) = entry {
                    child_states[child_len] = (q as u8, load(cq));
                    child_len += 1;
                }
            }
            let current = costs[i];
            let mut next: Costs = [None; 8];
            let mut next_pick = [UNREACHABLE_PICK; 8];
            for p in 0..8 {
                let Some(cp) = current[p] else { continue };
                let cp = load(cp);
                for &(q, cq) in &child_states[..child_len] {
                    let r = CLASS_TABLE[p][q as usize].index();
                    let total = cp + cq;
                    // Strict improvement keeps the smallest (p, q) on ties.
                    if next[r].is_none_or(|best| total < load(best)) {
                        next[r] = store(total);
                        next_pick[r] = (p as u8, q);
                    }
                }
            }
            costs[i] = next;
            pick[c] = next_pick;
        }
    }

    let mut best: Option<(u32, usize)> = None;
    for (cls, entry) in costs[0].iter().enumerate().take(5) {
        if let Some(entry) = entry {
            let cost = load(*entry);
            if best.is_none_or(|(b, _)| cost < b) {
                best = Some((cost, cls));
            }
        }
    }
    let (optimum, root_class) = best.expect("all-ones realizes an accepting class");

    // Backtrack: walk children in reverse absorption order, peeling one
    // (parent-class, child-class) pick per child; the class left at the end
    // is the vertex's primitive class, which fixes its value.
    let mut values = vec![0u8; n];
    let mut stack = vec![(0usize, root_class)];
    while let Some((i, mut cls)) = stack.pop() {
        let (start, end) = child_range[i];
        for c in (start as usize..end as usize).rev() {
            let (p, q) = pick[c][cls];
            debug_assert_ne!((p, q), UNREACHABLE_PICK);
            stack.push((c, q as usize));
            cls = p as usize;
        }
        values[order[i]] = match DpClass::from_index(cls) {
            C1 => 2,
            C2 => 1,
            C6 => 0,
            other => unreachable!("non-primitive initial class {other:?}"),
        };
    }

    Ok(SolveResult {
        optimum: optimum as usize,
        witness: BroadcastAssignment::new(values).expect("values in range"),
        method: SolveMethod::TreeDp,
        nodes_explored: n as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_bruteforce;
    use crate::families::{self, FamilySpec};

    fn path(n: usize) -> Graph {
        families::generate(&FamilySpec::Path { n }).unwrap()
    }

    #[test]
    fn table_spot_checks() {
        assert_eq!(compose_classes(C3, C1), C5);
        assert_eq!(compose_classes(C8, C2), C8);
        assert_eq!(compose_classes(C6, C5), C3);
        assert_eq!(compose_classes(C6, C2), C4);
        assert_eq!(compose_classes(C1, C7), C1);
        assert_eq!(compose_classes(C2, C7), C8);
    }

    #[test]
    fn classify_primitives() {
        let k1 = path(1);
        let f0 = BroadcastAssignment::new(vec![0]).unwrap();
        let f1 = BroadcastAssignment::new(vec![1]).unwrap();
        let f2 = BroadcastAssignment::new(vec![2]).unwrap();
        assert_eq!(classify(&k1, 0, &f0).unwrap(), C6);
        assert_eq!(classify(&k1, 0, &f1).unwrap(), C2);
        assert_eq!(classify(&k1, 0, &f2).unwrap(), C1);
    }

    #[test]
    fn classify_p3_cases() {
        let p3 = path(3);
        // 1 on the middle vertex, rooted at an endpoint.
        let f = BroadcastAssignment::new(vec![0, 1, 0]).unwrap();
        assert_eq!(classify(&p3, 0, &f).unwrap(), C4);
        // 2 on the far endpoint dominates everything with all neighbors zero.
        let f = BroadcastAssignment::new(vec![0, 0, 2]).unwrap();
        assert_eq!(classify(&p3, 0, &f).unwrap(), C3);
        // Nothing positive: endpoints and middle all unheard.
        let f = BroadcastAssignment::new(vec![0, 0, 0]).unwrap();
        assert_eq!(classify(&p3, 0, &f).unwrap(), C8);
    }

    #[test]
    fn classify_c7_variants() {
        let p4 = path(4);
        // Root 0; vertex 3 dominated, vertices 1 and 2... 1 covers 0,1,2.
        let f = BroadcastAssignment::new(vec![0, 0, 0, 1]).unwrap();
        // uncovered = {0, 1}: inside N[0] but not {0}.
        assert_eq!(classify(&p4, 0, &f).unwrap(), C7);
    }

    #[test]
    fn solve_known_values() {
        assert_eq!(solve_tree(&path(1)).unwrap().optimum, 1);
        assert_eq!(solve_tree(&path(2)).unwrap().optimum, 1);
        assert_eq!(solve_tree(&path(4)).unwrap().optimum, 2);
        let t9 = families::generate(&FamilySpec::T9).unwrap();
        assert_eq!(solve_tree(&t9).unwrap().optimum, 4);
        let f3 = families::generate(&FamilySpec::FamilyF { m: 3, seed: None }).unwrap();
        assert_eq!(solve_tree(&f3).unwrap().optimum, 12);
    }

    #[test]
    fn rejects_non_trees() {
        let c7 = families::generate(&FamilySpec::Cycle { n: 7 }).unwrap();
        assert_eq!(solve_tree(&c7).unwrap_err(), SolveError::NotATree);
    }

    #[test]
    fn matches_bruteforce_on_random_trees() {
        for seed in 0..60 {
            let n = 1 + (seed as usize % 12);
            let t = families::generate(&FamilySpec::RandomTree { n, seed }).unwrap();
            let dp = solve_tree(&t).unwrap();
            let bf = solve_bruteforce(&t).unwrap();
            assert_eq!(dp.optimum, bf.optimum, "n {n} seed {seed}");
            let report = validate(&t, &dp.witness).unwrap();
            assert!(report.is_valid);
            assert_eq!(dp.witness.cost(), dp.optimum);
        }
    }

    #[test]
    fn root_choice_does_not_change_optimum() {
        for seed in 0..10 {
            let t = families::generate(&FamilySpec::RandomTree { n: 11, seed }).unwrap();
            let reference = solve_tree(&t).unwrap().optimum;
            for root in 1..t.n() {
                assert_eq!(
                    solve_tree_rooted(&t, root).unwrap().optimum,
                    reference,
                    "seed {seed} root {root}"
                );
            }
        }
    }

    #[test]
    fn relabeling_does_not_change_optimum() {
        // Permuting vertex labels permutes both the root and every child
        // absorption order.
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for seed in 0..15 {
            let t = families::generate(&FamilySpec::RandomTree { n: 12, seed }).unwrap();
            let reference = solve_tree(&t).unwrap().optimum;
            let mut relabel: Vec<usize> = (0..t.n()).collect();
            relabel.shuffle(&mut rng);
            let edges: Vec<(usize, usize)> = t
                .edges()
                .iter()
                .map(|&(u, v)| (relabel[u], relabel[v]))
                .collect();
            let shuffled = Graph::new(t.n(), &edges).unwrap();
            assert_eq!(solve_tree(&shuffled).unwrap().optimum, reference, "seed {seed}");
        }
    }

    #[test]
    fn homomorphism_on_small_pairs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n1 = rng.gen_range(1..=6);
            let n2 = rng.gen_range(1..=6);
            let t1 =
                families::generate(&FamilySpec::RandomTree { n: n1, seed: rng.gen() }).unwrap();
            let t2 =
                families::generate(&FamilySpec::RandomTree { n: n2, seed: rng.gen() }).unwrap();
            let r1 = rng.gen_range(0..n1);
            let r2 = rng.gen_range(0..n2);
            let f1 = BroadcastAssignment::new(
                (0..n1).map(|_| rng.gen_range(0..=2)).collect(),
            )
            .unwrap();
            let f2 = BroadcastAssignment::new(
                (0..n2).map(|_| rng.gen_range(0..=2)).collect(),
            )
            .unwrap();
            let (joined, root) = compose_rooted(&t1, r1, &t2, r2);
            let mut values = f1.values().to_vec();
            values.extend_from_slice(f2.values());
            let f = BroadcastAssignment::new(values).unwrap();
            let lhs = classify(&joined, root, &f).unwrap();
            let rhs = compose_classes(
                classify(&t1, r1, &f1).unwrap(),
                classify(&t2, r2, &f2).unwrap(),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn witness_survives_leaf_normalization() {
        for seed in 0..20 {
            let t = families::generate(&FamilySpec::RandomTree { n: 13, seed }).unwrap();
            let result = solve_tree(&t).unwrap();
            let normalized = crate::broadcast::normalize_leaves(&t, &result.witness).unwrap();
            assert_eq!(normalized.cost(), result.optimum);
            assert!(validate(&t, &normalized).unwrap().is_valid);
        }
    }
}
