//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's search or centrality code.
#![allow(dead_code)]

use backbone::workload::SetCoverInstance;
use backbone::{Demand, EdgeSubset, Graph, TrafficLog};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every simple s-t path as (cost, edge ids), using only edges in `allowed`.
pub fn simple_paths(g: &Graph, allowed: &[bool], s: usize, t: usize) -> Vec<(f64, Vec<usize>)> {
    fn walk(g: &Graph, allowed: &[bool], at: usize, t: usize, visited: &mut Vec<bool>, stack: &mut Vec<usize>, out: &mut Vec<(f64, Vec<usize>)>) {
        if at == t {
            let cost = stack.iter().map(|&e| g.edge(e).cost).sum();
            out.push((cost, stack.clone()));
            return;
        }
        for (e, edge) in g.edges().iter().enumerate() {
            if !allowed[e] || (edge.u != at && edge.v != at) {
                continue;
            }
            let next = if edge.u == at { edge.v } else { edge.u };
            if visited[next] {
                continue;
            }
            visited[next] = true;
            stack.push(e);
            walk(g, allowed, next, t, visited, stack, out);
            stack.pop();
            visited[next] = false;
        }
    }
    let mut visited = vec![false; g.vertex_count()];
    visited[s] = true;
    let mut out = Vec::new();
    walk(g, allowed, s, t, &mut visited, &mut Vec::new(), &mut out);
    out
}

pub fn all_allowed(g: &Graph) -> Vec<bool> {
    vec![true; g.edge_count()]
}

pub fn allowed_from(g: &Graph, subset: &EdgeSubset) -> Vec<bool> {
    (0..g.edge_count()).map(|e| subset.contains(e)).collect()
}

pub fn oracle_distance(g: &Graph, allowed: &[bool], s: usize, t: usize) -> f64 {
    simple_paths(g, allowed, s, t).iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
}

/// H(E) / H(R) straight from the definition.
pub fn oracle_stretch(g: &Graph, subset: &EdgeSubset, log: &TrafficLog) -> f64 {
    let full = all_allowed(g);
    let part = allowed_from(g, subset);
    let (mut w, mut inv_full, mut inv_part) = (0.0, 0.0, 0.0);
    for d in log.entries() {
        w += d.volume;
        inv_full += d.volume / oracle_distance(g, &full, d.source, d.target);
        inv_part += d.volume / oracle_distance(g, &part, d.source, d.target);
    }
    let h_full = w / inv_full;
    let h_part = if inv_part == 0.0 { f64::INFINITY } else { w / inv_part };
    h_part / h_full
}

/// Volume-weighted share of shortest paths through each edge, counting log pairs only.
pub fn oracle_betweenness(g: &Graph, log: &TrafficLog) -> Vec<f64> {
    let full = all_allowed(g);
    let mut scores = vec![0.0; g.edge_count()];
    for d in log.entries() {
        let paths = simple_paths(g, &full, d.source, d.target);
        let best = paths.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            continue;
        }
        let shortest: Vec<_> = paths.iter().filter(|p| p.0 <= best * (1.0 + 1e-12)).collect();
        let share = d.volume / shortest.len() as f64;
        for p in shortest {
            for &e in &p.1 {
                scores[e] += share;
            }
        }
    }
    scores
}

/// Random graph on up to `max_n` vertices with small positive integer costs
/// (so ties among shortest paths are common). Need not be connected.
pub fn random_small_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(0.25..0.8);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random_range(1..=4u32) as f64));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    Graph::with_vertices(n, &edges).unwrap()
}

/// Random log with at least one connected pair.
pub fn random_log(rng: &mut ChaCha8Rng, g: &Graph, max_pairs: usize) -> TrafficLog {
    let n = g.vertex_count();
    let full = all_allowed(g);
    loop {
        let mut pairs = std::collections::BTreeSet::new();
        let want = rng.random_range(1..=max_pairs.min(n * (n - 1) / 2));
        while pairs.len() < want {
            let s = rng.random_range(0..n);
            let t = rng.random_range(0..n);
            if s != t {
                pairs.insert((s.min(t), s.max(t)));
            }
        }
        let entries: Vec<Demand> = pairs.into_iter().map(|(s, t)| Demand { source: s, target: t, volume: rng.random_range(1..=5u32) as f64 }).collect();
        if entries.iter().any(|d| oracle_distance(g, &full, d.source, d.target).is_finite()) {
            return TrafficLog::new(entries).unwrap();
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Every set cover instance with `|U| <= max_u` and `|S| <= max_s` whose
/// subsets are distinct, non-empty and jointly cover U, for every k in `1..=|S|`.
pub fn set_cover_family(max_u: usize, max_s: usize) -> Vec<SetCoverInstance> {
    fn rec(masks: &[u32], start: usize, s: usize, u: usize, acc: &mut Vec<u32>, out: &mut Vec<SetCoverInstance>) {
        if acc.len() == s {
            if acc.iter().fold(0, |a, m| a | m) == (1u32 << u) - 1 {
                let subsets: Vec<Vec<usize>> = acc.iter().map(|m| (0..u).filter(|i| m >> i & 1 == 1).collect()).collect();
                for k in 1..=s {
                    out.push(SetCoverInstance { universe: u, subsets: subsets.clone(), k });
                }
            }
            return;
        }
        for i in start..masks.len() {
            acc.push(masks[i]);
            rec(masks, i + 1, s, u, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for u in 1..=max_u {
        let masks: Vec<u32> = (1..(1u32 << u)).collect();
        for s in 1..=max_s {
            rec(&masks, 0, s, u, &mut Vec::new(), &mut out);
        }
    }
    out
}

/// Brute-force set cover: does some choice of at most k subsets cover U?
pub fn cover_exists(sc: &SetCoverInstance) -> bool {
    let full = (1u32 << sc.universe) - 1;
    let masks: Vec<u32> = sc.subsets.iter().map(|s| s.iter().fold(0, |a, &i| a | 1 << i)).collect();
    (0u32..1 << masks.len()).filter(|pick| pick.count_ones() as usize <= sc.k).any(|pick| {
        masks.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0, |a, (_, m)| a | m) == full
    })
}
