//! Comparison algorithms: effective-length edge ordering and the greedy k-spanner.

use serde::Serialize;

use crate::greedy::{Backbone, Budget, GreedyStats, StopReason};
use crate::centrality::{default_smoothing, edge_betweenness_log, effective_distances};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSubset, Graph, SearchSpace};
use crate::metrics::{full_baseline, pair_distances, report_from, TrafficLog};
use crate::graph::Restrict;

/// Adds edges in increasing effective length (edge-betweenness benefits,
/// ties by edge id), skipping any edge that no longer fits the budget.
pub fn baseline_backbone(g: &Graph, log: &TrafficLog, budget: Budget) -> Result<Backbone> {
    let budget = budget.resolve(g)?;
    let (full, h_full) = full_baseline(g, log)?;
    let benefits = edge_betweenness_log(g, log);
    let lhat = effective_distances(g, &benefits, default_smoothing(log))?;

    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| lhat.get(a).total_cmp(&lhat.get(b)).then(a.cmp(&b)));

    let mut edges = EdgeSubset::empty(g.edge_count());
    let mut spent = 0.0;
    for e in order {
        let c = g.cost(e);
        if spent + c <= budget {
            spent += c;
            edges.insert(g, e);
        }
    }
    let dist = pair_distances(g, &g.costs(), Restrict::Subset(&edges), log);
    let report = report_from(log, dist, full, h_full);
    let stop = if report.lambda <= 1.0 + crate::greedy::UNIT_STRETCH_TOLERANCE { StopReason::UnitStretch } else { StopReason::BudgetExhausted };
    Ok(Backbone {
        iterations: edges.len(),
        spent: edges.total_cost(),
        edges,
        budget,
        report,
        serve_order: Vec::new(),
        stop,
        stats: GreedyStats::default(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpannerResult {
    #[serde(skip)]
    pub edges: EdgeSubset,
    pub k: f64,
    pub cost: f64,
}

/// Classic greedy spanner: scan edges by non-decreasing cost (ties by id) and
/// keep `(u, v)` only when the spanner built so far has no `u`-`v` path of
/// length at most `k * c(u, v)`.
pub fn greedy_spanner(g: &Graph, k: f64) -> Result<SpannerResult> {
    if !k.is_finite() || k < 1.0 {
        return Err(Error::InvalidStretch(k));
    }
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| g.cost(a).total_cmp(&g.cost(b)).then(a.cmp(&b)));

    let costs = g.costs();
    let mut space = SearchSpace::new(g.vertex_count());
    let mut edges = EdgeSubset::empty(g.edge_count());
    for e in order {
        let edge = *g.edge(e);
        let kept = &edges;
        space.run(g, costs.as_slice(), |x| kept.contains(x), edge.u, &[edge.v]);
        if space.distance(edge.v) > k * edge.cost {
            edges.insert(g, e);
        }
    }
    Ok(SpannerResult { cost: edges.total_cost(), edges, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Demand;

    fn triangle() -> Graph {
        Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap()
    }

    fn log(entries: &[(usize, usize, f64)]) -> TrafficLog {
        TrafficLog::new(entries.iter().map(|&(s, t, w)| Demand { source: s, target: t, volume: w }).collect()).unwrap()
    }

    #[test]
    fn baseline_full_budget() {
        let g = triangle();
        let bb = baseline_backbone(&g, &log(&[(0, 2, 1.0)]), Budget::Percent(100.0)).unwrap();
        assert_eq!(bb.edges.len(), 3);
        assert_eq!(bb.lambda(), 1.0);
    }

    #[test]
    fn baseline_zero_budget() {
        let g = triangle();
        let bb = baseline_backbone(&g, &log(&[(0, 2, 1.0)]), Budget::Absolute(0.0)).unwrap();
        assert!(bb.edges.is_empty());
        assert!(bb.lambda().is_infinite());
    }

    #[test]
    fn baseline_triangle_prefers_betweenness_edges() {
        let g = triangle();
        let bb = baseline_backbone(&g, &log(&[(0, 2, 1.0)]), Budget::Absolute(2.0)).unwrap();
        assert_eq!(bb.edges.ids().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(bb.lambda(), 1.0);
    }

    #[test]
    fn spanner_k1_keeps_distances() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0), (2, 3, 1.0), (0, 3, 5.0)]).unwrap();
        let sp = greedy_spanner(&g, 1.0).unwrap();
        for e in g.edges() {
            let d = crate::graph::shortest_path(&g, &g.costs(), Restrict::Subset(&sp.edges), e.u, e.v).distance;
            let full = crate::graph::shortest_path(&g, &g.costs(), Restrict::All, e.u, e.v).distance;
            assert_eq!(d, full);
        }
        // 0-2 (detour 2) and 0-3 (detour 3) are redundant
        assert_eq!(sp.edges.len(), 3);
    }

    #[test]
    fn spanner_keeps_trees() {
        let g = Graph::build(&[(0, 1, 3.0), (1, 2, 1.0), (1, 3, 2.0)]).unwrap();
        assert_eq!(greedy_spanner(&g, 4.0).unwrap().edges.len(), 3);
    }

    #[test]
    fn spanner_unit_triangle() {
        let g = Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let sp = greedy_spanner(&g, 2.0).unwrap();
        assert_eq!(sp.edges.len(), 2);
        assert_eq!(sp.cost, 2.0);
        assert!(greedy_spanner(&g, 0.5).is_err());
    }
}
