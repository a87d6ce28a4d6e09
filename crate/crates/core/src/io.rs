//! Text file formats, run reports, budget sweeps and GeoJSON export.
//!
//! Edge lists are `u v cost` per line and traffic logs are `s t w` per line.
//! Tokens are whitespace-separated, and lines starting with `#` are comments.
//! Vertex labels are arbitrary strings, numbered in order of first
//! appearance in the edge list.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::greedy::{greedy_backbone, Backbone, Budget, GreedyOptions, StopReason};
use crate::baselines::{baseline_backbone, greedy_spanner};
use crate::centrality::BenefitMode;
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph, Restrict, VertexId};
use crate::metrics::{full_baseline, pair_distances, report_from, TrafficLog};
use crate::workload::SetCoverInstance;

/// A graph together with the labels its vertices had in the input file.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl LabeledGraph {
    /// Labels vertices with their decimal ids.
    pub fn numbered(graph: Graph) -> Self {
        let labels: Vec<String> = (0..graph.vertex_count()).map(|v| v.to_string()).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        LabeledGraph { graph, labels, index }
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse { line, message: format!("invalid {what} `{token}`") })
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut triples = Vec::new();
    for (line, tokens) in content_lines(text) {
        let [u, v, cost] = tokens[..] else {
            return Err(Error::Parse { line, message: format!("expected `u v cost`, found {} fields", tokens.len()) });
        };
        let cost = parse_number(cost, line, "cost")?;
        if !cost.is_finite() || cost < 0.0 {
            return Err(Error::Parse { line, message: format!("cost {cost} must be finite and non-negative") });
        }
        if u == v {
            return Err(Error::Parse { line, message: format!("self-loop on `{u}`") });
        }
        let mut intern = |label: &str| -> VertexId {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (a, b) = (intern(u), intern(v));
        if let Some(first) = seen.insert((a.min(b), a.max(b)), line) {
            return Err(Error::Parse { line, message: format!("duplicate edge `{u} {v}` (first on line {first})") });
        }
        triples.push((a, b, cost));
    }
    let graph = Graph::with_vertices(labels.len(), &triples)?;
    Ok(LabeledGraph { graph, labels, index })
}

/// Edge list for `subset` (or every edge when `None`), one `u v cost` line each.
pub fn write_edge_list(lg: &LabeledGraph, subset: Option<&EdgeSubset>) -> String {
    let mut out = String::new();
    for (e, edge) in lg.graph.edges().iter().enumerate() {
        if subset.is_some_and(|s| !s.contains(e)) {
            continue;
        }
        let _ = writeln!(out, "{} {} {}", lg.label(edge.u), lg.label(edge.v), edge.cost);
    }
    out
}

/// Parses a traffic log against the labels of `lg`, merging repeated
/// unordered pairs by summing their volumes.
pub fn parse_traffic_log(text: &str, lg: &LabeledGraph) -> Result<TrafficLog> {
    let mut raw = Vec::new();
    for (line, tokens) in content_lines(text) {
        let [s, t, w] = tokens[..] else {
            return Err(Error::Parse { line, message: format!("expected `s t w`, found {} fields", tokens.len()) });
        };
        let lookup = |label: &str| lg.id(label).ok_or_else(|| Error::Parse { line, message: format!("unknown vertex label `{label}`") });
        let (s, t) = (lookup(s)?, lookup(t)?);
        let w = parse_number(w, line, "volume")?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Parse { line, message: format!("volume {w} must be positive") });
        }
        if s == t {
            return Err(Error::Parse { line, message: "source and target coincide".into() });
        }
        raw.push((s, t, w));
    }
    TrafficLog::merged(raw)
}

pub fn write_traffic_log(log: &TrafficLog, lg: &LabeledGraph) -> String {
    let mut out = String::new();
    for d in log.entries() {
        let _ = writeln!(out, "{} {} {}", lg.label(d.source), lg.label(d.target), d.volume);
    }
    out
}

/// Reads a backbone edge list (`u v [cost]` per line) as a subset of `lg`.
pub fn parse_edge_subset(text: &str, lg: &LabeledGraph) -> Result<EdgeSubset> {
    let mut subset = EdgeSubset::empty(lg.graph.edge_count());
    for (line, tokens) in content_lines(text) {
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse { line, message: format!("expected `u v [cost]`, found {} fields", tokens.len()) });
        }
        let lookup = |label: &str| lg.id(label).ok_or_else(|| Error::Parse { line, message: format!("unknown vertex label `{label}`") });
        let (u, v) = (lookup(tokens[0])?, lookup(tokens[1])?);
        let e = lg.graph.find_edge(u, v).ok_or_else(|| Error::UnknownEdge(tokens[0].to_string(), tokens[1].to_string()))?;
        subset.insert(&lg.graph, e);
    }
    Ok(subset)
}

/// `label lat lon` per line; every vertex needs an entry.
pub fn parse_coordinates(text: &str, lg: &LabeledGraph) -> Result<Vec<(f64, f64)>> {
    let mut coords: Vec<Option<(f64, f64)>> = vec![None; lg.graph.vertex_count()];
    for (line, tokens) in content_lines(text) {
        let [label, lat, lon] = tokens[..] else {
            return Err(Error::Parse { line, message: format!("expected `label lat lon`, found {} fields", tokens.len()) });
        };
        let lat = parse_number(lat, line, "latitude")?;
        let lon = parse_number(lon, line, "longitude")?;
        // labels absent from the graph are ignored so one sidecar can serve several graphs
        if let Some(v) = lg.id(label) {
            coords[v] = Some((lat, lon));
        }
    }
    coords.into_iter().enumerate().map(|(v, c)| c.ok_or_else(|| Error::MissingCoordinates(lg.label(v).to_string()))).collect()
}

/// GeoJSON `FeatureCollection` with one `LineString` per backbone edge, or per
/// graph edge when `all_edges` is set. Positions are `[lon, lat]`.
pub fn export_geojson(lg: &LabeledGraph, coords: &[(f64, f64)], backbone: &EdgeSubset, all_edges: bool) -> Result<Value> {
    if coords.len() < lg.graph.vertex_count() {
        return Err(Error::MissingCoordinates(lg.label(coords.len()).to_string()));
    }
    let features: Vec<Value> = lg
        .graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, _)| all_edges || backbone.contains(*e))
        .map(|(e, edge)| {
            let (lat_u, lon_u) = coords[edge.u];
            let (lat_v, lon_v) = coords[edge.v];
            json!({
                "type": "Feature",
                "geometry": { "type": "LineString", "coordinates": [[lon_u, lat_u], [lon_v, lat_v]] },
                "properties": {
                    "edge-id": e,
                    "u": lg.label(edge.u),
                    "v": lg.label(edge.v),
                    "cost": edge.cost,
                    "in-backbone": backbone.contains(e),
                },
            })
        })
        .collect();
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

/// Set cover instance: first line `universe k`, then one subset per line as
/// element ids (a lone `-` is the empty subset).
pub fn parse_set_cover(text: &str) -> Result<SetCoverInstance> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing `universe k` header".into() })?;
    let [universe, k] = header[..] else {
        return Err(Error::Parse { line, message: "header must be `universe k`".into() });
    };
    let parse_usize = |tok: &str, line: usize| tok.parse::<usize>().map_err(|_| Error::Parse { line, message: format!("invalid integer `{tok}`") });
    let universe = parse_usize(universe, line)?;
    let k = parse_usize(k, line)?;
    let mut subsets = Vec::new();
    for (line, tokens) in lines {
        if tokens == ["-"] {
            subsets.push(Vec::new());
            continue;
        }
        subsets.push(tokens.iter().map(|t| parse_usize(t, line)).collect::<Result<Vec<_>>>()?);
    }
    Ok(SetCoverInstance { universe, subsets, k })
}

/// `edge-id u v score` per line.
pub fn write_scores(lg: &LabeledGraph, scores: &[f64]) -> String {
    let mut out = String::from("# edge-id u v score\n");
    for (e, edge) in lg.graph.edges().iter().enumerate() {
        let _ = writeln!(out, "{e} {} {} {}", lg.label(edge.u), lg.label(edge.v), scores[e]);
    }
    out
}

/// `id label` per line.
pub fn write_vertex_map(lg: &LabeledGraph) -> String {
    lg.labels.iter().enumerate().fold(String::from("# id label\n"), |mut out, (i, l)| {
        let _ = writeln!(out, "{i} {l}");
        out
    })
}

/// Decimal rendering with `inf` for infinity.
pub fn format_float(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn serialize_float<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&format_float(*x))
    }
}

/// Reads a report float written by [`serialize_float`].
pub fn json_float(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) if s == "inf" => Some(f64::INFINITY),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Greedy(BenefitMode),
    Baseline,
    Spanner(f64),
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Greedy(BenefitMode::Uniform) => "greedy".into(),
            Algorithm::Greedy(BenefitMode::EdgeBetweenness) => "greedy-eb".into(),
            Algorithm::Baseline => "baseline".into(),
            Algorithm::Spanner(k) => format!("spanner-{k}"),
        }
    }
}

/// Runs one algorithm. The spanner ignores the budget and reports its own cost as the budget.
pub fn run_algorithm(g: &Graph, log: &TrafficLog, budget: Budget, algorithm: Algorithm, opts: &GreedyOptions) -> Result<Backbone> {
    match algorithm {
        Algorithm::Greedy(benefit) => greedy_backbone(g, log, budget, &GreedyOptions { benefit, ..opts.clone() }),
        Algorithm::Baseline => baseline_backbone(g, log, budget),
        Algorithm::Spanner(k) => {
            let sp = greedy_spanner(g, k)?;
            evaluate_subset(g, log, sp.edges)
        }
    }
}

/// Scores an externally produced edge subset as a backbone.
pub fn evaluate_subset(g: &Graph, log: &TrafficLog, edges: EdgeSubset) -> Result<Backbone> {
    let (full, h_full) = full_baseline(g, log)?;
    let dist = pair_distances(g, &g.costs(), Restrict::Subset(&edges), log);
    let report = report_from(log, dist, full, h_full);
    let stop = if report.lambda <= 1.0 + crate::greedy::UNIT_STRETCH_TOLERANCE { StopReason::UnitStretch } else { StopReason::BudgetExhausted };
    Ok(Backbone {
        budget: edges.total_cost(),
        spent: edges.total_cost(),
        iterations: 0,
        serve_order: Vec::new(),
        stop,
        stats: Default::default(),
        report,
        edges,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub source: String,
    pub target: String,
    pub volume: f64,
    #[serde(serialize_with = "serialize_float")]
    pub full_distance: f64,
    #[serde(serialize_with = "serialize_float")]
    pub backbone_distance: f64,
    pub served: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub resolved_budget: f64,
    pub spent: f64,
    #[serde(serialize_with = "serialize_float")]
    pub lambda: f64,
    pub edge_count: usize,
    pub percent_edges_covered: f64,
    pub percent_cost_covered: f64,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub stop: StopReason,
    pub serve_order: Vec<usize>,
    pub pairs: Vec<PairRow>,
}

impl RunReport {
    pub fn new(algorithm: &str, lg: &LabeledGraph, log: &TrafficLog, bb: &Backbone, wall_time_ms: f64) -> Self {
        let g = &lg.graph;
        let m = g.edge_count().max(1) as f64;
        let total = g.total_cost();
        let pairs = log
            .entries()
            .iter()
            .enumerate()
            .map(|(i, d)| PairRow {
                source: lg.label(d.source).to_string(),
                target: lg.label(d.target).to_string(),
                volume: d.volume,
                full_distance: bb.report.full_distances[i],
                backbone_distance: bb.report.subset_distances[i],
                served: bb.report.subset_distances[i] == bb.report.full_distances[i],
            })
            .collect();
        RunReport {
            algorithm: algorithm.to_string(),
            resolved_budget: bb.budget,
            spent: bb.spent,
            lambda: bb.lambda(),
            edge_count: bb.edges.len(),
            percent_edges_covered: 100.0 * bb.edges.len() as f64 / m,
            percent_cost_covered: if total > 0.0 { 100.0 * bb.spent / total } else { 0.0 },
            iterations: bb.iterations,
            wall_time_ms,
            stop: bb.stop,
            serve_order: bb.serve_order.clone(),
            pairs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepVariant {
    Greedy,
    GreedyEb,
    GreedyEbLandmarks(usize),
    Baseline,
}

impl SweepVariant {
    pub fn name(&self) -> String {
        match self {
            SweepVariant::Greedy => "greedy".into(),
            SweepVariant::GreedyEb => "greedy-eb".into(),
            SweepVariant::GreedyEbLandmarks(l) => format!("greedy-eb-landmarks{l}"),
            SweepVariant::Baseline => "baseline".into(),
        }
    }

    pub fn is_greedy(&self) -> bool {
        !matches!(self, SweepVariant::Baseline)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variant: String,
    pub budget_pct: f64,
    pub lambda: f64,
    pub edges_pct: f64,
    pub time_ms: f64,
}

/// One run per (budget, variant); rows ordered by budget, then by variant order.
pub fn sweep(g: &Graph, log: &TrafficLog, budgets_pct: &[f64], variants: &[SweepVariant], base: &GreedyOptions) -> Result<Vec<SweepRow>> {
    if budgets_pct.is_empty() {
        return Err(Error::InvalidBudget("empty budget list".into()));
    }
    let mut budgets = budgets_pct.to_vec();
    budgets.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    for &pct in &budgets {
        for v in variants {
            let budget = Budget::Percent(pct);
            let start = Instant::now();
            let bb = match *v {
                SweepVariant::Greedy => greedy_backbone(g, log, budget, &GreedyOptions { benefit: BenefitMode::Uniform, landmarks: 0, ..base.clone() })?,
                SweepVariant::GreedyEb => greedy_backbone(g, log, budget, &GreedyOptions { benefit: BenefitMode::EdgeBetweenness, landmarks: 0, ..base.clone() })?,
                SweepVariant::GreedyEbLandmarks(l) => {
                    greedy_backbone(g, log, budget, &GreedyOptions { benefit: BenefitMode::EdgeBetweenness, landmarks: l, ..base.clone() })?
                }
                SweepVariant::Baseline => baseline_backbone(g, log, budget)?,
            };
            let time_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(SweepRow {
                variant: v.name(),
                budget_pct: pct,
                lambda: bb.lambda(),
                edges_pct: 100.0 * bb.edges.len() as f64 / g.edge_count().max(1) as f64,
                time_ms,
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("variant,budget_pct,lambda,edges_pct,time_ms\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.4},{:.3}", r.variant, r.budget_pct, format_float(r.lambda), r.edges_pct, r.time_ms);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "# triangle\na b 1\nb c 1\na c 3\n";

    #[test]
    fn parses_labels_in_order() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        assert_eq!(lg.labels(), &["a", "b", "c"]);
        assert_eq!(lg.graph.edge_count(), 3);
        assert_eq!(lg.id("c"), Some(2));
    }

    #[test]
    fn malformed_cost_names_the_line() {
        let err = parse_edge_list("a b 1\n\nb c x1\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "invalid cost `x1`".into() });
        assert!(err.to_string().starts_with("line 3:"));
    }

    #[test]
    fn rejects_bad_edge_lines() {
        assert!(matches!(parse_edge_list("a b\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a a 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("a b 1\nb a 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("a b -1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn log_merges_and_checks_labels() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        let log = parse_traffic_log("a c 1\nc a 2\n# note\nb c 1\n", &lg).unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(log.entries()[0].volume, 3.0);
        let err = parse_traffic_log("a zz 1\n", &lg).unwrap_err();
        assert_eq!(err, Error::Parse { line: 1, message: "unknown vertex label `zz`".into() });
        assert!(parse_traffic_log("a c 0\n", &lg).is_err());
    }

    #[test]
    fn edge_subset_lookup() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        let s = parse_edge_subset("b a 1\nc b\n", &lg).unwrap();
        assert_eq!(s.ids().collect::<Vec<_>>(), vec![0, 1]);
        assert!(matches!(parse_edge_subset("a d\n", &lg), Err(Error::Parse { .. })));
        let lg2 = parse_edge_list("a b 1\nb c 1\nc d 1\n").unwrap();
        assert!(matches!(parse_edge_subset("a c\n", &lg2), Err(Error::UnknownEdge(..))));
    }

    #[test]
    fn geojson_export() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        let coords = parse_coordinates("a 51.5 -0.1\nb 51.6 -0.2\nc 51.7 -0.3\nextra 0 0\n", &lg).unwrap();
        let one = export_geojson(&lg, &coords, &EdgeSubset::from_ids(&lg.graph, [1]), false).unwrap();
        let feats = one["features"].as_array().unwrap();
        assert_eq!(feats.len(), 1);
        assert_eq!(feats[0]["geometry"]["type"], "LineString");
        assert_eq!(feats[0]["geometry"]["coordinates"][0][0], -0.2);
        assert_eq!(feats[0]["properties"]["edge-id"], 1);

        let none = export_geojson(&lg, &coords, &EdgeSubset::empty(3), false).unwrap();
        assert_eq!(none["features"].as_array().unwrap().len(), 0);
        assert_eq!(none["type"], "FeatureCollection");

        let err = parse_coordinates("a 1 2\nc 3 4\n", &lg).unwrap_err();
        assert_eq!(err, Error::MissingCoordinates("b".into()));
    }

    #[test]
    fn set_cover_format() {
        let sc = parse_set_cover("# two sets\n3 1\n0 1\n1 2\n-\n").unwrap();
        assert_eq!(sc.universe, 3);
        assert_eq!(sc.k, 1);
        assert_eq!(sc.subsets, vec![vec![0, 1], vec![1, 2], vec![]]);
        assert!(parse_set_cover("").is_err());
    }

    #[test]
    fn report_and_inf_literal() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        let log = parse_traffic_log("a c 1\n", &lg).unwrap();
        let bb = run_algorithm(&lg.graph, &log, Budget::Absolute(0.0), Algorithm::Greedy(BenefitMode::Uniform), &GreedyOptions::default()).unwrap();
        let report = RunReport::new("greedy", &lg, &log, &bb, 0.0);
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["lambda"], "inf");
        assert_eq!(json_float(&v["lambda"]), Some(f64::INFINITY));
        assert_eq!(v["pairs"][0]["backbone_distance"], "inf");
        for key in ["resolved_budget", "spent", "edge_count", "percent_edges_covered", "percent_cost_covered", "iterations", "wall_time_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn sweep_rows_and_csv() {
        let lg = parse_edge_list(TRIANGLE).unwrap();
        let log = parse_traffic_log("a c 1\n", &lg).unwrap();
        let rows = sweep(&lg.graph, &log, &[100.0, 0.0], &[SweepVariant::Greedy, SweepVariant::Baseline], &GreedyOptions::default()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].budget_pct, 0.0);
        assert!(rows[0].lambda.is_infinite());
        assert_eq!(rows[2].lambda, 1.0);
        let csv = sweep_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().starts_with("greedy,0,inf,"));
        assert!(sweep(&lg.graph, &log, &[], &[SweepVariant::Greedy], &GreedyOptions::default()).is_err());
    }
}
