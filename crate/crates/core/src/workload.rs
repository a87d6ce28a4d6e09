//! Instance generators and exhaustive oracles.
//!
//! All randomness comes from `ChaCha8Rng` seeded through `seed_from_u64`, so
//! every generated fixture is a pure function of its parameters.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::greedy::Budget;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSubset, Graph, Restrict, VertexId};
use crate::metrics::{full_baseline, pair_distances, stretch_from_distances, Demand, TrafficLog};

/// Default exponent for power-law draws.
pub const DEFAULT_ALPHA: f64 = 2.5;

/// Largest edge count [`oracle_optimal_backbone`] accepts.
pub const ORACLE_EDGE_LIMIT: usize = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VolumeDist {
    /// `floor(x)` for `x` Pareto-distributed with minimum 1 and tail exponent `alpha`.
    PowerLaw { alpha: f64 },
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EndpointDist {
    /// Endpoint drawn with probability proportional to `rank^-alpha` over a
    /// random ranking of the vertices.
    PowerLaw { alpha: f64 },
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficSpec {
    pub pairs: usize,
    pub volume: VolumeDist,
    pub endpoints: EndpointDist,
    pub seed: u64,
}

impl TrafficSpec {
    pub fn uniform(pairs: usize, seed: u64) -> Self {
        TrafficSpec { pairs, volume: VolumeDist::Uniform { lo: 1.0, hi: 1.0 }, endpoints: EndpointDist::Uniform, seed }
    }
}

fn draw_volume(rng: &mut ChaCha8Rng, dist: VolumeDist) -> f64 {
    match dist {
        VolumeDist::PowerLaw { alpha } => {
            let u: f64 = rng.random();
            (1.0 - u).powf(-1.0 / (alpha - 1.0)).floor().max(1.0)
        }
        VolumeDist::Uniform { lo, hi } => {
            if lo == hi {
                lo
            } else {
                rng.random_range(lo..=hi)
            }
        }
    }
}

/// Synthetic traffic over the vertices of `g`. Repeated unordered pairs are
/// redrawn, so the log always has exactly `spec.pairs` entries.
pub fn generate_traffic(g: &Graph, spec: &TrafficSpec) -> Result<TrafficLog> {
    let n = g.vertex_count();
    let max_pairs = n * n.saturating_sub(1) / 2;
    if spec.pairs > max_pairs {
        return Err(Error::UnsatisfiablePairs { requested: spec.pairs, n });
    }
    match spec.volume {
        VolumeDist::PowerLaw { alpha } if !(alpha > 1.0 && alpha.is_finite()) => {
            return Err(Error::InvalidDistribution(format!("volume exponent {alpha} must exceed 1")));
        }
        VolumeDist::Uniform { lo, hi } if !(lo > 0.0 && lo <= hi && hi.is_finite()) => {
            return Err(Error::InvalidDistribution(format!("uniform volume range [{lo}, {hi}]")));
        }
        _ => {}
    }

    let mut rng = rng(spec.seed);
    let endpoint_index = match spec.endpoints {
        EndpointDist::Uniform => None,
        EndpointDist::PowerLaw { alpha } => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::InvalidDistribution(format!("endpoint exponent {alpha} must be positive")));
            }
            let mut ranking: Vec<VertexId> = (0..n).collect();
            ranking.shuffle(&mut rng);
            let weights: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-alpha)).collect();
            let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
            Some((ranking, index))
        }
    };
    let draw_vertex = |rng: &mut ChaCha8Rng| match &endpoint_index {
        None => rng.random_range(0..n),
        Some((ranking, index)) => ranking[index.sample(rng)],
    };

    let mut seen = HashSet::with_capacity(spec.pairs);
    let mut entries = Vec::with_capacity(spec.pairs);
    let max_attempts = 1000 * spec.pairs + 10_000;
    let mut attempts = 0;
    while entries.len() < spec.pairs {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::UnsatisfiablePairs { requested: spec.pairs, n });
        }
        let s = draw_vertex(&mut rng);
        let t = draw_vertex(&mut rng);
        if s == t || !seen.insert((s.min(t), s.max(t))) {
            continue;
        }
        let volume = draw_volume(&mut rng, spec.volume);
        entries.push(Demand { source: s, target: t, volume });
    }
    TrafficLog::new(entries)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub subsets: Vec<Vec<usize>>,
    pub k: usize,
}

impl SetCoverInstance {
    pub fn validate(&self) -> Result<()> {
        if self.universe == 0 {
            return Err(Error::DegenerateSetCover("empty ground set".into()));
        }
        let mut covered = vec![false; self.universe];
        for (j, set) in self.subsets.iter().enumerate() {
            for &u in set {
                if u >= self.universe {
                    return Err(Error::DegenerateSetCover(format!("subset {j} names element {u} outside the ground set")));
                }
                covered[u] = true;
            }
        }
        if let Some(u) = covered.iter().position(|c| !c) {
            return Err(Error::DegenerateSetCover(format!("element {u} is in no subset")));
        }
        Ok(())
    }
}

/// Whether at most `k` of the subsets cover the ground set, by enumeration.
pub fn set_cover_feasible(sc: &SetCoverInstance) -> bool {
    let full: u64 = if sc.universe == 64 { u64::MAX } else { (1u64 << sc.universe) - 1 };
    let masks: Vec<u64> = sc.subsets.iter().map(|s| s.iter().fold(0u64, |m, &u| m | (1 << u))).collect();
    let s = masks.len();
    (0u64..(1u64 << s)).any(|choice| {
        choice.count_ones() as usize <= sc.k
            && (0..s).filter(|j| choice >> j & 1 == 1).fold(0u64, |m, j| m | masks[j]) == full
    })
}

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub graph: Graph,
    pub log: TrafficLog,
    pub budget: Budget,
}

/// Set-cover reduction graph: element vertices first, then one vertex per
/// subset, then the hub `z`. Element-subset edges cost 0, subset-hub edges
/// cost 1, every element sends one unit to the hub, and the budget is `k`.
///
/// Zero-cost edges let an element reach the hub through another element of a
/// shared subset, so stretch 1 at budget `k` only requires every connected
/// group of overlapping subsets to have one selected hub edge. That is weaker
/// than a cover when subsets overlap; [`setcover_gadget_separated`] restores
/// the equivalence.
pub fn setcover_gadget(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    gadget_with_element_cost(sc, 0.0, 0.0)
}

/// Reduction variant with element-subset edges of cost `2^-j`, where
/// `2^j > 2 |U|`, and budget `k + |U| 2^-j`. Detours through other elements
/// now cost more than the direct route, so stretch 1 is reachable iff a cover
/// of size at most `k` exists.
pub fn setcover_gadget_separated(sc: &SetCoverInstance) -> Result<GadgetInstance> {
    let mut eps = 1.0;
    while eps * 2.0 * sc.universe as f64 >= 1.0 {
        eps /= 2.0;
    }
    gadget_with_element_cost(sc, eps, eps * sc.universe as f64)
}

fn gadget_with_element_cost(sc: &SetCoverInstance, element_cost: f64, extra_budget: f64) -> Result<GadgetInstance> {
    sc.validate()?;
    let nu = sc.universe;
    let ns = sc.subsets.len();
    let z = nu + ns;
    let mut edges = Vec::new();
    for (j, set) in sc.subsets.iter().enumerate() {
        let mut members = set.clone();
        members.sort_unstable();
        members.dedup();
        for u in members {
            edges.push((u, nu + j, element_cost));
        }
    }
    for j in 0..ns {
        edges.push((nu + j, z, 1.0));
    }
    let graph = Graph::with_vertices(z + 1, &edges)?;
    let log = TrafficLog::new((0..nu).map(|u| Demand { source: u, target: z, volume: 1.0 }).collect())?;
    Ok(GadgetInstance { graph, log, budget: Budget::Absolute(sc.k as f64 + extra_budget) })
}

/// The two-hub instance: groups A and B of `n` vertices hang off hubs `c1`
/// and `c2`, joined by a bridge of cost 2. A peripheral path
/// `c1 - d_1 - ... - d_m - c2` offers a longer way around. Every `a_i` sends
/// one unit to every `b_j`, and each `d_i` one unit to `d_{i+1}`.
#[derive(Debug, Clone)]
pub struct Figure2Instance {
    pub graph: Graph,
    pub log: TrafficLog,
    pub bridge: EdgeId,
    /// Cost of serving every pair without the bridge: all spokes plus the peripheral path.
    pub detour_forest_cost: f64,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub c1: VertexId,
    pub c2: VertexId,
    pub d: Vec<VertexId>,
}

pub fn figure2_instance(n: usize, m: usize) -> Result<Figure2Instance> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidDistribution(format!("two-hub instance needs n >= 1 and m >= 2, got n={n}, m={m}")));
    }
    let a: Vec<VertexId> = (0..n).collect();
    let b: Vec<VertexId> = (n..2 * n).collect();
    let (c1, c2) = (2 * n, 2 * n + 1);
    let d: Vec<VertexId> = (2 * n + 2..2 * n + 2 + m).collect();

    let mut edges = Vec::new();
    edges.extend(a.iter().map(|&x| (x, c1, 1.0)));
    edges.extend(b.iter().map(|&x| (x, c2, 1.0)));
    let bridge = edges.len();
    edges.push((c1, c2, 2.0));
    edges.push((c1, d[0], 1.0));
    edges.extend(d.windows(2).map(|w| (w[0], w[1], 1.0)));
    edges.push((d[m - 1], c2, 1.0));
    let graph = Graph::build(&edges)?;

    let mut entries = Vec::with_capacity(n * n + m - 1);
    for &x in &a {
        for &y in &b {
            entries.push(Demand { source: x, target: y, volume: 1.0 });
        }
    }
    entries.extend(d.windows(2).map(|w| Demand { source: w[0], target: w[1], volume: 1.0 }));
    let log = TrafficLog::new(entries)?;

    let detour_forest_cost = (2 * n + m + 1) as f64;
    Ok(Figure2Instance { graph, log, bridge, detour_forest_cost, a, b, c1, c2, d })
}

/// Random connected graph: a random spanning tree plus `extra` random chords,
/// with integer costs drawn from `1..=max_cost`.
pub fn random_connected_graph(n: usize, extra: usize, max_cost: u32, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    for i in 1..n {
        let u = order[i];
        let v = order[rng.random_range(0..i)];
        seen.insert((u.min(v), u.max(v)));
        edges.push((u, v, rng.random_range(1..=max_cost) as f64));
    }
    let max_edges = n * n.saturating_sub(1) / 2;
    let target = (edges.len() + extra).min(max_edges);
    while edges.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        edges.push((u, v, rng.random_range(1..=max_cost) as f64));
    }
    Graph::with_vertices(n, &edges).expect("generated edges are valid")
}

/// Road-like grid: `rows x cols` lattice with integer costs in `1..=9`, plus
/// diagonal shortcuts in roughly one cell out of `shortcut_every`.
pub fn grid_graph(rows: usize, cols: usize, shortcut_every: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), rng.random_range(1..=9u32) as f64));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), rng.random_range(1..=9u32) as f64));
            }
            if shortcut_every > 0 && r + 1 < rows && c + 1 < cols && rng.random_range(0..shortcut_every) == 0 {
                edges.push((id(r, c), id(r + 1, c + 1), rng.random_range(1..=12u32) as f64));
            }
        }
    }
    Graph::with_vertices(rows * cols, &edges).expect("generated edges are valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub edges: EdgeSubset,
    pub lambda: f64,
}

/// Minimum stretch over every edge subset within budget.
///
/// Zero-cost edges are always included: adding edges never lengthens a
/// shortest path, so this loses no optimum. Positive-cost subsets are
/// scanned from the largest bitmask (highest edge id most significant)
/// downwards and the first subset reaching the minimum is kept, so the full
/// edge set wins whenever it is affordable.
pub fn oracle_optimal_backbone(g: &Graph, log: &TrafficLog, budget: Budget) -> Result<OracleResult> {
    if g.edge_count() > ORACLE_EDGE_LIMIT {
        return Err(Error::InstanceTooLarge { edges: g.edge_count(), limit: ORACLE_EDGE_LIMIT });
    }
    let budget = budget.resolve(g)?;
    let (_, h_full) = full_baseline(g, log)?;
    let costs = g.costs();
    let free: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| g.cost(e) == 0.0).collect();
    let paid: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| g.cost(e) > 0.0).collect();

    let mut best: Option<(f64, u64)> = None;
    for mask in (0u64..(1u64 << paid.len())).rev() {
        let cost: f64 = paid.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| g.cost(e)).sum();
        if cost > budget {
            continue;
        }
        let subset = subset_for(g, &free, &paid, mask);
        let dist = pair_distances(g, &costs, Restrict::Subset(&subset), log);
        let lambda = stretch_from_distances(log, &dist, h_full);
        if best.is_none_or(|(bl, _)| lambda < bl) {
            best = Some((lambda, mask));
        }
    }
    let (lambda, mask) = best.expect("the empty paid subset is always within budget");
    Ok(OracleResult { edges: subset_for(g, &free, &paid, mask), lambda })
}

fn subset_for(g: &Graph, free: &[EdgeId], paid: &[EdgeId], mask: u64) -> EdgeSubset {
    let chosen = paid.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
    EdgeSubset::from_ids(g, free.iter().copied().chain(chosen))
}
