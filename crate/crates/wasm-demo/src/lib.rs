//! Browser bindings for the backbone demo page. Every function returns a JSON
//! string that `www/index.html` parses and draws on a canvas.

use backbone::workload::{figure2_instance, generate_traffic, grid_graph, EndpointDist, TrafficSpec, VolumeDist};
use backbone::{baseline_backbone, edge_betweenness_log, greedy_backbone, Backbone, Budget, Graph, GreedyOptions, TrafficLog};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn grid_instance(rows: usize, cols: usize, pairs: usize, seed: u64) -> Result<(Graph, TrafficLog), JsError> {
    if rows < 2 || cols < 2 || rows * cols > 10_000 {
        return Err(JsError::new("grid must be at least 2x2 and at most 10000 vertices"));
    }
    let g = grid_graph(rows, cols, 4, seed);
    let spec = TrafficSpec { pairs, volume: VolumeDist::PowerLaw { alpha: 2.5 }, endpoints: EndpointDist::PowerLaw { alpha: 0.8 }, seed };
    let log = generate_traffic(&g, &spec)?;
    Ok((g, log))
}

fn options(benefit: &str, landmarks: usize) -> Result<GreedyOptions, JsError> {
    let base = match benefit {
        "uniform" => GreedyOptions::greedy(),
        "eb" => GreedyOptions::greedy_eb(),
        other => return Err(JsError::new(&format!("unknown benefit `{other}`"))),
    };
    Ok(GreedyOptions { landmarks, ..base })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn edges_json(g: &Graph, bb: &Backbone, scores: Option<&[f64]>) -> Value {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let mut v = json!({ "u": edge.u, "v": edge.v, "cost": edge.cost, "in": bb.edges.contains(e) });
            if let Some(s) = scores {
                v["score"] = json!(s[e]);
            }
            v
        })
        .collect()
}

fn summary(g: &Graph, bb: &Backbone) -> Value {
    json!({
        "lambda": finite_or_null(bb.lambda()),
        "spent": bb.spent,
        "budget": bb.budget,
        "total": g.total_cost(),
        "edges": bb.edges.len(),
        "iterations": bb.iterations,
        "serveOrder": bb.serve_order,
    })
}

/// Greedy backbone of a generated road-like grid at `budget_pct` percent of
/// the total cost.
#[wasm_bindgen]
pub fn grid_backbone(rows: usize, cols: usize, pairs: usize, seed: u64, budget_pct: f64, benefit: &str, landmarks: usize) -> Result<String, JsError> {
    let (g, log) = grid_instance(rows, cols, pairs, seed)?;
    let bb = greedy_backbone(&g, &log, Budget::Percent(budget_pct), &options(benefit, landmarks)?)?;
    let points: Vec<[f64; 2]> = (0..g.vertex_count()).map(|v| [(v % cols) as f64, (v / cols) as f64]).collect();
    let demands: Vec<Value> = log.entries().iter().map(|d| json!([d.source, d.target, d.volume])).collect();
    let out = json!({
        "points": points,
        "edges": edges_json(&g, &bb, None),
        "demands": demands,
        "summary": summary(&g, &bb),
    });
    Ok(out.to_string())
}

/// Stretch at each budget percentage for both greedy variants and the baseline.
#[wasm_bindgen]
pub fn stretch_curve(rows: usize, cols: usize, pairs: usize, seed: u64, steps: usize) -> Result<String, JsError> {
    let (g, log) = grid_instance(rows, cols, pairs, seed)?;
    let steps = steps.clamp(2, 50);
    let mut points = Vec::with_capacity(steps);
    for i in 1..=steps {
        let pct = 100.0 * i as f64 / steps as f64;
        let budget = Budget::Percent(pct);
        let uniform = greedy_backbone(&g, &log, budget, &GreedyOptions::greedy())?;
        let eb = greedy_backbone(&g, &log, budget, &GreedyOptions::greedy_eb())?;
        let base = baseline_backbone(&g, &log, budget)?;
        points.push(json!({
            "pct": pct,
            "greedy": finite_or_null(uniform.lambda()),
            "greedyEb": finite_or_null(eb.lambda()),
            "baseline": finite_or_null(base.lambda()),
        }));
    }
    Ok(Value::Array(points).to_string())
}

/// The two-hub network with its traffic betweenness scores and the
/// edge-betweenness greedy backbone at `budget`.
#[wasm_bindgen]
pub fn two_hub(n: usize, m: usize, budget: f64) -> Result<String, JsError> {
    if n > 40 || m > 40 {
        return Err(JsError::new("keep n and m at most 40"));
    }
    let inst = figure2_instance(n, m)?;
    let g = &inst.graph;
    let scores = edge_betweenness_log(g, &inst.log);
    let bb = greedy_backbone(g, &inst.log, Budget::Absolute(budget), &GreedyOptions::greedy_eb())?;

    let mut points = vec![[0.0, 0.0]; g.vertex_count()];
    let (c1, c2) = ([-1.0, 0.0], [1.0, 0.0]);
    let fan = |i: usize, k: usize| std::f64::consts::PI * ((i as f64 + 1.0) / (k as f64 + 1.0) - 0.5);
    for (i, &a) in inst.a.iter().enumerate() {
        let t = fan(i, n);
        points[a] = [c1[0] - t.cos(), t.sin()];
    }
    for (i, &b) in inst.b.iter().enumerate() {
        let t = fan(i, n);
        points[b] = [c2[0] + t.cos(), t.sin()];
    }
    points[inst.c1] = c1;
    points[inst.c2] = c2;
    for (i, &d) in inst.d.iter().enumerate() {
        let x = -1.2 + 2.4 * (i as f64 + 0.5) / m as f64;
        points[d] = [x, -1.6];
    }
    let out = json!({
        "points": points,
        "edges": edges_json(g, &bb, Some(&scores.scores)),
        "bridge": inst.bridge,
        "peripheralForestCost": inst.detour_forest_cost,
        "summary": summary(g, &bb),
    });
    Ok(out.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_backbone_json() {
        let v: Value = serde_json::from_str(&grid_backbone(6, 6, 20, 1, 30.0, "eb", 0).ok().unwrap()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 36);
        assert!(v["summary"]["spent"].as_f64().unwrap() <= v["summary"]["budget"].as_f64().unwrap());
    }

    #[test]
    fn curve_is_monotone() {
        let v: Value = serde_json::from_str(&stretch_curve(6, 6, 15, 2, 5).ok().unwrap()).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[4]["greedyEb"], 1.0);
        let eb: Vec<f64> = pts.iter().map(|p| p["greedyEb"].as_f64().unwrap_or(f64::INFINITY)).collect();
        assert!(eb.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn two_hub_selects_bridge() {
        let v: Value = serde_json::from_str(&two_hub(6, 4, 17.0).ok().unwrap()).unwrap();
        let bridge = v["bridge"].as_u64().unwrap() as usize;
        assert_eq!(v["edges"][bridge]["in"], true);
        assert_eq!(v["summary"]["lambda"], 1.0);
    }
}
