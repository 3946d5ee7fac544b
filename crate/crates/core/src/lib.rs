//! Fault-tolerant reachability preservers and closest fair clustering.

pub mod cluster;
pub mod error;
pub mod fair;
pub mod ftrs;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod reductions;
pub mod streaming;

pub use cluster::{
    cc_cost, consensus_objective, consensus_power_sum, dist, is_fair, is_p_divisible, Clustering,
    ColorProfile, Rational, WeightedCcInstance,
};
pub use error::{Error, Result};
pub use fair::{closest_fair, FairMethod};
pub use ftrs::{
    build_pairwise_2ftrs, build_pairwise_2ftrs_slack, build_single_pair_2ftrs, fractional_hitting_set,
    single_source_2ftrs, Direction, Preserver, SlackResult, SubsetFamily,
};
pub use graph::{
    earliest_coupling_points, reachable, two_maximally_disjoint_paths, DirectedGraph, Edge, Path,
    StrandDecomposition, Vertex,
};
pub use reductions::{fair_consensus_offline, fairfy_cc, pivot_cc, SolverHandle};
pub use streaming::{algo_fair_con_stream, StreamParams, StreamTriple};
