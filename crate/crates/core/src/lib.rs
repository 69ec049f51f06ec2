//! Exact computation of the dominating 2-broadcast number of connected graphs.
//!
//! A dominating 2-broadcast on a graph assigns every vertex a power in
//! {0, 1, 2} so that each vertex is within distance `f(v)` of some vertex `v`
//! with `f(v) >= 1`; its cost is the sum of all powers, and the minimum cost
//! over all such assignments is the dominating 2-broadcast number.
//!
//! The crate provides:
//! - [`graph`]: the immutable connected-graph type, a DIMACS-style file
//!   format, distance metrics and structural queries;
//! - [`broadcast`]: broadcast assignments, coverage checking and the
//!   leaf-normalization transform;
//! - [`exact`]: branch-and-bound and brute-force solvers for general graphs,
//!   plus small-scale oracles for the classical and unlimited-broadcast
//!   domination numbers;
//! - [`treedp`]: a linear-time dynamic program for trees built on an
//!   eight-class composition table;
//! - [`spanning`]: spanning-tree enumeration and the constructive extraction
//!   of a cost-preserving spanning tree from an optimal assignment;
//! - [`reduction`]: the 3-SAT gadget construction with certificate
//!   translation in both directions;
//! - [`families`]: generators for named graph families, exhaustive
//!   enumeration of small trees, and auditors for the ceil(4n/9) tree bound
//!   and the ceil(2n/5) caterpillar bound.

pub mod broadcast;
pub mod exact;
pub mod families;
pub mod graph;
pub mod reduction;
pub mod spanning;
pub mod treedp;

pub use broadcast::{BroadcastAssignment, Certificate, CoverageReport};
pub use exact::{SizeGuards, SolveMethod, SolveResult};
pub use families::{AuditReport, FamilySpec};
pub use graph::{Graph, MetricsReport, StructureReport};
pub use reduction::{CnfFormula, ReductionMap};
pub use treedp::DpClass;
