//! Traffic-weighted edge betweenness and effective edge lengths.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, LengthMap, VertexId};
use crate::metrics::TrafficLog;

/// Relative tolerance for treating two path costs as equal when counting
/// shortest paths.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Default smoothing relative to total log volume.
pub const SMOOTHING_FRACTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenefitMode {
    Uniform,
    EdgeBetweenness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenefitScores {
    pub scores: Vec<f64>,
    pub mode: BenefitMode,
}

impl BenefitScores {
    pub fn uniform(m: usize) -> Self {
        BenefitScores { scores: vec![1.0; m], mode: BenefitMode::Uniform }
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.scores[e]
    }

    /// Edge with the largest score (smallest id on ties).
    pub fn argmax(&self) -> Option<EdgeId> {
        let mut best: Option<EdgeId> = None;
        for (e, &s) in self.scores.iter().enumerate() {
            if best.is_none_or(|b| s > self.scores[b]) {
                best = Some(e);
            }
        }
        best
    }
}

#[inline]
fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, VertexId);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// For each edge, the volume-weighted fraction of cost-shortest `s`-`t`
/// paths that cross it, summed over the log entries.
///
/// Brandes accumulation with one weighted search per distinct source. Only
/// sinks that appear in the log inject dependency, so the cost is
/// O(|sources| (m + n log n)). Shortest paths are counted on the DAG of
/// settled predecessors; with zero-cost edges that DAG follows settle order.
pub fn edge_betweenness_log(g: &Graph, log: &TrafficLog) -> BenefitScores {
    let n = g.vertex_count();
    let mut scores = vec![0.0; g.edge_count()];
    let groups = log.by_source();

    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut sink = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut order: Vec<VertexId> = Vec::new();
    let mut touched: Vec<VertexId> = Vec::new();
    let mut heap = BinaryHeap::new();

    for (&s, idx) in &groups {
        for &v in &touched {
            dist[v] = f64::INFINITY;
            sigma[v] = 0.0;
            preds[v].clear();
            settled[v] = false;
            delta[v] = 0.0;
        }
        touched.clear();
        order.clear();
        heap.clear();

        let mut remaining = 0usize;
        for &i in idx {
            let d = log.entries()[i];
            if sink[d.target] == 0.0 {
                remaining += 1;
            }
            sink[d.target] += d.volume;
        }

        dist[s] = 0.0;
        sigma[s] = 1.0;
        touched.push(s);
        heap.push(Item(0.0, s));
        while let Some(Item(d, v)) = heap.pop() {
            if settled[v] || d > dist[v] {
                continue;
            }
            settled[v] = true;
            order.push(v);
            if sink[v] > 0.0 {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for &(w, e) in g.neighbors(v) {
                if settled[w] {
                    continue;
                }
                let nd = d + g.cost(e);
                if dist[w].is_infinite() {
                    touched.push(w);
                    dist[w] = nd;
                    sigma[w] = sigma[v];
                    preds[w].push((v, e));
                    heap.push(Item(nd, w));
                } else if ties(nd, dist[w]) {
                    sigma[w] += sigma[v];
                    preds[w].push((v, e));
                } else if nd < dist[w] {
                    dist[w] = nd;
                    sigma[w] = sigma[v];
                    preds[w].clear();
                    preds[w].push((v, e));
                    heap.push(Item(nd, w));
                }
            }
        }

        for &w in order.iter().rev() {
            let coeff = (sink[w] + delta[w]) / sigma[w];
            if coeff == 0.0 {
                continue;
            }
            for &(v, e) in &preds[w] {
                let c = sigma[v] * coeff;
                scores[e] += c;
                delta[v] += c;
            }
        }

        for &i in idx {
            sink[log.entries()[i].target] = 0.0;
        }
    }

    BenefitScores { scores, mode: BenefitMode::EdgeBetweenness }
}

/// `smoothing` applied by default for a log: a billionth of its total volume.
pub fn default_smoothing(log: &TrafficLog) -> f64 {
    SMOOTHING_FRACTION * log.total_volume()
}

/// Effective lengths `c(e) / (b(e) + eps)`.
///
/// Zero-cost edges map to 0 whatever their benefit. `eps = 0` is accepted as
/// long as no positive-cost edge has zero benefit, which is the uniform case.
pub fn effective_distances(g: &Graph, benefits: &BenefitScores, eps: f64) -> Result<LengthMap> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::InvalidSmoothing(eps));
    }
    let mut out = Vec::with_capacity(g.edge_count());
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.cost == 0.0 {
            out.push(0.0);
            continue;
        }
        let denom = benefits.scores[e] + eps;
        if denom <= 0.0 {
            return Err(Error::ZeroBenefit { edge: e });
        }
        out.push(edge.cost / denom);
    }
    LengthMap::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Demand;

    fn log(entries: &[(usize, usize, f64)]) -> TrafficLog {
        TrafficLog::new(entries.iter().map(|&(s, t, w)| Demand { source: s, target: t, volume: w }).collect()).unwrap()
    }

    #[test]
    fn unique_path_carries_full_volume() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let b = edge_betweenness_log(&g, &log(&[(0, 2, 5.0)]));
        assert_eq!(b.scores, vec![5.0, 5.0]);
    }

    #[test]
    fn diamond_splits_volume() {
        // a=0 b=1 c=2 d=3: a-b, a-c, b-d, c-d
        let g = Graph::build(&[(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).unwrap();
        let b = edge_betweenness_log(&g, &log(&[(0, 3, 4.0)]));
        assert_eq!(b.scores, vec![2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn unused_edge_scores_zero() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let b = edge_betweenness_log(&g, &log(&[(0, 2, 1.0)]));
        assert_eq!(b.scores, vec![1.0, 1.0, 0.0]);
        assert_eq!(b.argmax(), Some(0));
    }

    #[test]
    fn pairs_sharing_a_source() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let b = edge_betweenness_log(&g, &log(&[(0, 2, 1.0), (0, 3, 2.0), (3, 1, 1.0)]));
        assert_eq!(b.scores, vec![3.0, 4.0, 3.0]);
    }

    #[test]
    fn effective_lengths() {
        let g = Graph::build(&[(0, 1, 6.0), (1, 2, 5.0), (2, 3, 0.0)]).unwrap();
        let uniform = effective_distances(&g, &BenefitScores::uniform(3), 0.0).unwrap();
        assert_eq!(uniform.as_slice(), &[6.0, 5.0, 0.0]);

        let b = BenefitScores { scores: vec![3.0, 0.0, 0.0], mode: BenefitMode::EdgeBetweenness };
        let l = effective_distances(&g, &b, 1e-9).unwrap();
        assert!((l.get(0) - 2.0).abs() < 1e-8);
        assert!((l.get(1) - 5e9).abs() < 1e-3);
        assert_eq!(l.get(2), 0.0);
    }

    #[test]
    fn zero_benefit_without_smoothing_is_an_error() {
        let g = Graph::build(&[(0, 1, 6.0)]).unwrap();
        let b = BenefitScores { scores: vec![0.0], mode: BenefitMode::EdgeBetweenness };
        assert_eq!(effective_distances(&g, &b, 0.0), Err(Error::ZeroBenefit { edge: 0 }));
        assert_eq!(effective_distances(&g, &b, -1.0), Err(Error::InvalidSmoothing(-1.0)));
    }
}
