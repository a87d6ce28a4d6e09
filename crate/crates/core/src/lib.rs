//! Budget-constrained backbone discovery for weighted networks.
//!
//! Given an undirected graph with edge costs and a log of traffic demands,
//! [`greedy_backbone`] picks a subset of edges whose total cost fits a budget
//! while keeping the traffic-weighted harmonic stretch low.

pub mod baselines;
pub mod centrality;
pub mod components;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod landmarks;
pub mod metrics;
pub mod workload;

pub use baselines::{baseline_backbone, greedy_spanner, SpannerResult};
pub use centrality::{edge_betweenness_log, effective_distances, BenefitMode, BenefitScores};
pub use components::{components, Components, UnionFind};
pub use error::{Error, Result};
pub use graph::{shortest_path, Edge, EdgeId, EdgeSubset, Graph, LengthMap, PathResult, Restrict, VertexId};
pub use greedy::{greedy_backbone, Backbone, Budget, GreedyOptions, GreedyStats, StopReason};
pub use landmarks::{build_index, select_landmarks, LandmarkIndex};
pub use metrics::{harmonic_connectivity, pair_distances, stretch_factor, Demand, StretchReport, TrafficLog};
