//! Undirected weighted graph, edge subsets and the Dijkstra engine shared by
//! every algorithm in the crate.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: f64,
}

impl Edge {
    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable undirected graph with dense vertex and edge ids.
///
/// Edge ids follow input order. Each adjacency list is sorted by edge id so
/// that every traversal is deterministic.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph whose vertex count is one past the largest id used.
    pub fn build(triples: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        let n = triples.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
        Self::with_vertices(n, triples)
    }

    /// Builds a graph on exactly `n` vertices, allowing isolated ones.
    pub fn with_vertices(n: usize, triples: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(triples.len());
        let mut edges = Vec::with_capacity(triples.len());
        for (id, &(u, v, cost)) in triples.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if !cost.is_finite() || cost < 0.0 {
                return Err(Error::InvalidCost { u, v, cost });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { u, v });
            }
            edges.push(Edge { u, v, cost });
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Ok(Graph { n, edges, adj })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn cost(&self, e: EdgeId) -> f64 {
        self.edges[e].cost
    }

    /// `(neighbor, edge-id)` pairs, ascending by edge id.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    pub fn total_cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    /// Actual edge costs as a length map.
    pub fn costs(&self) -> LengthMap {
        LengthMap(self.edges.iter().map(|e| e.cost).collect())
    }

    /// Checks that the adjacency index and the edge list describe the same graph.
    pub fn check_consistency(&self) -> bool {
        let mut incidences = 0;
        for (v, list) in self.adj.iter().enumerate() {
            for &(w, e) in list {
                let edge = &self.edges[e];
                if !((edge.u == v && edge.v == w) || (edge.v == v && edge.u == w)) {
                    return false;
                }
                incidences += 1;
            }
            if list.windows(2).any(|p| p[0].1 >= p[1].1) {
                return false;
            }
        }
        incidences == 2 * self.edges.len()
    }
}

/// A subset of the edges of a graph, kept as member flags plus a running total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSubset {
    member: Vec<bool>,
    len: usize,
    total_cost: f64,
}

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        EdgeSubset { member: vec![false; m], len: 0, total_cost: 0.0 }
    }

    pub fn full(g: &Graph) -> Self {
        EdgeSubset { member: vec![true; g.edge_count()], len: g.edge_count(), total_cost: g.total_cost() }
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(g: &Graph, ids: I) -> Self {
        let mut s = Self::empty(g.edge_count());
        for e in ids {
            s.insert(g, e);
        }
        s
    }

    /// Adds `e`; returns false if it was already present.
    pub fn insert(&mut self, g: &Graph, e: EdgeId) -> bool {
        if self.member[e] {
            return false;
        }
        self.member[e] = true;
        self.len += 1;
        self.total_cost += g.cost(e);
        true
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.member[e]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// Member edge ids in ascending order.
    pub fn ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member.iter().enumerate().filter(|(_, &m)| m).map(|(e, _)| e)
    }

    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.member.iter().zip(&other.member).all(|(&a, &b)| !a || b)
    }
}

/// Per-edge non-negative finite lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthMap(Vec<f64>);

impl LengthMap {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if let Some((edge, &value)) = lengths.iter().enumerate().find(|(_, l)| !l.is_finite() || **l < 0.0) {
            return Err(Error::InvalidLength { edge, value });
        }
        Ok(LengthMap(lengths))
    }

    #[inline]
    pub fn get(&self, e: EdgeId) -> f64 {
        self.0[e]
    }

    pub fn set_zero(&mut self, e: EdgeId) {
        self.0[e] = 0.0;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Which edges a search may traverse.
#[derive(Debug, Clone, Copy)]
pub enum Restrict<'a> {
    All,
    Subset(&'a EdgeSubset),
}

impl Restrict<'_> {
    #[inline]
    pub fn allows(&self, e: EdgeId) -> bool {
        match self {
            Restrict::All => true,
            Restrict::Subset(s) => s.contains(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub distance: f64,
    pub path: Vec<EdgeId>,
}

impl PathResult {
    pub fn unreachable() -> Self {
        PathResult { distance: f64::INFINITY, path: Vec::new() }
    }

    pub fn is_reachable(&self) -> bool {
        self.distance.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: VertexId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other.dist.total_cmp(&self.dist).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable single-source Dijkstra state.
///
/// Only the vertices touched by the previous run are reset, so repeated
/// searches confined to a small component stay cheap on a large graph.
/// Among equal-length predecessors the smallest edge id wins; the heap
/// breaks distance ties by vertex id.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    dist: Vec<f64>,
    pred: Vec<Option<EdgeId>>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    is_target: Vec<bool>,
    heap: BinaryHeap<HeapItem>,
    source: Option<VertexId>,
}

impl SearchSpace {
    pub fn new(n: usize) -> Self {
        SearchSpace {
            dist: vec![f64::INFINITY; n],
            pred: vec![None; n],
            settled: vec![false; n],
            touched: Vec::new(),
            is_target: vec![false; n],
            heap: BinaryHeap::new(),
            source: None,
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = f64::INFINITY;
            self.pred[v] = None;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs from `source`, stopping once every vertex in `targets` is settled
    /// (an empty target list explores the whole reachable set).
    /// `allow` filters traversable edges.
    pub fn run<F>(&mut self, g: &Graph, lengths: &[f64], allow: F, source: VertexId, targets: &[VertexId])
    where
        F: Fn(EdgeId) -> bool,
    {
        self.reset();
        self.source = Some(source);
        let mut remaining = 0usize;
        for &t in targets {
            if !self.is_target[t] {
                self.is_target[t] = true;
                remaining += 1;
            }
        }
        self.dist[source] = 0.0;
        self.touched.push(source);
        self.heap.push(HeapItem { dist: 0.0, vertex: source });
        while let Some(HeapItem { dist, vertex }) = self.heap.pop() {
            if self.settled[vertex] || dist > self.dist[vertex] {
                continue;
            }
            self.settled[vertex] = true;
            if self.is_target[vertex] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for &(w, e) in g.neighbors(vertex) {
                if self.settled[w] || !allow(e) {
                    continue;
                }
                let nd = dist + lengths[e];
                let cur = self.dist[w];
                if nd < cur {
                    if cur == f64::INFINITY {
                        self.touched.push(w);
                    }
                    self.dist[w] = nd;
                    self.pred[w] = Some(e);
                    self.heap.push(HeapItem { dist: nd, vertex: w });
                } else if nd == cur && self.pred[w].is_some_and(|p| e < p) {
                    self.pred[w] = Some(e);
                }
            }
        }
        for &t in targets {
            self.is_target[t] = false;
        }
    }

    /// Settled distance to `v`, or +inf if `v` was not settled.
    #[inline]
    pub fn distance(&self, v: VertexId) -> f64 {
        if self.settled[v] {
            self.dist[v]
        } else {
            f64::INFINITY
        }
    }

    /// Edge ids of the tree path from the source to `v`, source first.
    pub fn path_to(&self, g: &Graph, v: VertexId) -> Vec<EdgeId> {
        if !self.settled[v] {
            return Vec::new();
        }
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = self.pred[cur] {
            path.push(e);
            cur = g.edge(e).other(cur);
        }
        path.reverse();
        path
    }

    pub fn result(&self, g: &Graph, t: VertexId) -> PathResult {
        let distance = self.distance(t);
        if distance.is_infinite() {
            return PathResult::unreachable();
        }
        PathResult { distance, path: self.path_to(g, t) }
    }
}

/// Minimum-length `s`-`t` path over the edges allowed by `restrict`.
pub fn shortest_path(g: &Graph, lengths: &LengthMap, restrict: Restrict<'_>, s: VertexId, t: VertexId) -> PathResult {
    let mut space = SearchSpace::new(g.vertex_count());
    space.run(g, lengths.as_slice(), |e| restrict.allows(e), s, &[t]);
    space.result(g, t)
}

/// Vertex sequence of an edge path starting at `s`.
pub fn path_vertices(g: &Graph, s: VertexId, path: &[EdgeId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(s);
    let mut cur = s;
    for &e in path {
        cur = g.edge(e).other(cur);
        out.push(cur);
    }
    out
}
