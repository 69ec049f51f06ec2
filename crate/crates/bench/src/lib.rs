//! Instance builders shared by the benchmark targets.

use broadcast2::families::{generate, random_connected_graph, FamilySpec};
use broadcast2::graph::Graph;

pub fn random_tree(n: usize, seed: u64) -> Graph {
    generate(&FamilySpec::RandomTree { n, seed }).expect("valid parameters")
}

pub fn random_caterpillar(n: usize, seed: u64) -> Graph {
    generate(&FamilySpec::RandomCaterpillar { n, seed }).expect("valid parameters")
}

pub fn random_graph(n: usize, seed: u64) -> Graph {
    random_connected_graph(n, seed)
}
