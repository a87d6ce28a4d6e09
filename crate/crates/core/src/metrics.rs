//! Harmonic connectivity of a traffic log and the stretch factor of a backbone.
//!
//! The connectivity of an edge set `A` for a log of `(s, t, w)` triples is
//! `(sum w) / (sum w / d_A(s, t))`. Pairs that `A` leaves disconnected have
//! `d_A = +inf` and add a zero reciprocal term. The stretch of a backbone `R` is
//! its connectivity divided by that of the full edge set, so it is at least 1.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph, LengthMap, Restrict, SearchSpace, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Demand {
    pub source: VertexId,
    pub target: VertexId,
    pub volume: f64,
}

/// Canonical traffic log: positive volumes, distinct endpoints, and at most one
/// entry per unordered vertex pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficLog {
    entries: Vec<Demand>,
}

impl TrafficLog {
    pub fn new(entries: Vec<Demand>) -> Result<Self> {
        let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::with_capacity(entries.len());
        for (index, d) in entries.iter().enumerate() {
            if !d.volume.is_finite() || d.volume <= 0.0 {
                return Err(Error::InvalidVolume { index, volume: d.volume });
            }
            if d.source == d.target {
                return Err(Error::SameEndpoints { index, vertex: d.source });
            }
            let key = (d.source.min(d.target), d.source.max(d.target));
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicatePair { first, second: index, s: d.source, t: d.target });
            }
            seen.insert(key, index);
        }
        Ok(TrafficLog { entries })
    }

    /// Builds a log from raw triples, summing the volumes of repeated unordered
    /// pairs into the first occurrence (which keeps its orientation).
    pub fn merged(raw: impl IntoIterator<Item = (VertexId, VertexId, f64)>) -> Result<Self> {
        let mut slot: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut entries: Vec<Demand> = Vec::new();
        for (s, t, w) in raw {
            let key = (s.min(t), s.max(t));
            match slot.get(&key) {
                Some(&i) => entries[i].volume += w,
                None => {
                    slot.insert(key, entries.len());
                    entries.push(Demand { source: s, target: t, volume: w });
                }
            }
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[Demand] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_volume(&self) -> f64 {
        self.entries.iter().map(|d| d.volume).sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|d| Demand { volume: d.volume * factor, ..*d }).collect())
    }

    /// Checks that every endpoint exists in a graph with `n` vertices.
    pub fn check_vertices(&self, n: usize) -> Result<()> {
        for d in &self.entries {
            let v = d.source.max(d.target);
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(())
    }

    /// Entry indices grouped by source vertex, sources ascending.
    pub(crate) fn by_source(&self) -> BTreeMap<VertexId, Vec<usize>> {
        let mut groups: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.entries.iter().enumerate() {
            groups.entry(d.source).or_default().push(i);
        }
        groups
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchReport {
    pub h_subset: f64,
    pub h_full: f64,
    pub lambda: f64,
    pub subset_distances: Vec<f64>,
    pub full_distances: Vec<f64>,
}

/// `(sum w) / (sum w/d)`, the volume-weighted harmonic mean of the pair
/// distances. Disconnected pairs (`d = +inf`) contribute zero to the reciprocal
/// sum; the result is +inf when every pair is disconnected.
pub fn harmonic_connectivity(log: &TrafficLog, dist: &[f64]) -> Result<f64> {
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    if dist.len() != log.len() {
        return Err(Error::LengthMismatch { expected: log.len(), got: dist.len() });
    }
    if let Some(index) = dist.iter().position(|&d| d == 0.0) {
        return Err(Error::ZeroDistance { index });
    }
    Ok(harmonic_unchecked(log, dist))
}

/// Summation runs in log order so that results are bit-stable, and so that
/// term-wise larger distances can never produce a smaller value.
pub(crate) fn harmonic_unchecked(log: &TrafficLog, dist: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut reciprocal = 0.0;
    for (d, &dist) in log.entries.iter().zip(dist) {
        total += d.volume;
        reciprocal += d.volume / dist;
    }
    if reciprocal == 0.0 {
        f64::INFINITY
    } else {
        total / reciprocal
    }
}

/// Stretch of pair distances `dist` relative to the full-graph connectivity.
pub(crate) fn stretch_from_distances(log: &TrafficLog, dist: &[f64], h_full: f64) -> f64 {
    harmonic_unchecked(log, dist) / h_full
}

/// Shortest distance of every log pair over the edges allowed by `restrict`.
/// One search per distinct source, stopped once all of its targets settle.
pub fn pair_distances(g: &Graph, lengths: &LengthMap, restrict: Restrict<'_>, log: &TrafficLog) -> Vec<f64> {
    let groups: Vec<(VertexId, Vec<usize>)> = log.by_source().into_iter().collect();
    let run = |space: &mut SearchSpace, (s, idx): &(VertexId, Vec<usize>)| -> Vec<(usize, f64)> {
        let targets: Vec<VertexId> = idx.iter().map(|&i| log.entries[i].target).collect();
        space.run(g, lengths.as_slice(), |e| restrict.allows(e), *s, &targets);
        idx.iter().map(|&i| (i, space.distance(log.entries[i].target))).collect()
    };

    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<(usize, f64)>> = {
        use rayon::prelude::*;
        groups.par_iter().map_init(|| SearchSpace::new(g.vertex_count()), run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<(usize, f64)>> = {
        let mut space = SearchSpace::new(g.vertex_count());
        groups.iter().map(|grp| run(&mut space, grp)).collect()
    };

    let mut out = vec![f64::INFINITY; log.len()];
    for (i, d) in parts.into_iter().flatten() {
        out[i] = d;
    }
    out
}

/// Full-graph pair distances and connectivity, validated for use as the
/// denominator of a stretch factor.
pub(crate) fn full_baseline(g: &Graph, log: &TrafficLog) -> Result<(Vec<f64>, f64)> {
    if log.is_empty() {
        return Err(Error::EmptyLog);
    }
    log.check_vertices(g.vertex_count())?;
    let full = pair_distances(g, &g.costs(), Restrict::All, log);
    let h_full = harmonic_connectivity(log, &full)?;
    if h_full.is_infinite() {
        return Err(Error::NoConnectedPair);
    }
    Ok((full, h_full))
}

/// Stretch factor of `subset` for `log`, with distances measured in actual edge costs.
pub fn stretch_factor(g: &Graph, subset: &EdgeSubset, log: &TrafficLog) -> Result<StretchReport> {
    let (full_distances, h_full) = full_baseline(g, log)?;
    let subset_distances = pair_distances(g, &g.costs(), Restrict::Subset(subset), log);
    Ok(report_from(log, subset_distances, full_distances, h_full))
}

pub(crate) fn report_from(log: &TrafficLog, subset_distances: Vec<f64>, full_distances: Vec<f64>, h_full: f64) -> StretchReport {
    let h_subset = harmonic_unchecked(log, &subset_distances);
    StretchReport { h_subset, h_full, lambda: h_subset / h_full, subset_distances, full_distances }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log(entries: &[(usize, usize, f64)]) -> TrafficLog {
        TrafficLog::new(entries.iter().map(|&(s, t, w)| Demand { source: s, target: t, volume: w }).collect()).unwrap()
    }

    fn triangle() -> Graph {
        Graph::build(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap()
    }

    #[test]
    fn single_pair_harmonic_is_distance() {
        assert_eq!(harmonic_connectivity(&log(&[(0, 1, 1.0)]), &[2.0]).unwrap(), 2.0);
    }

    #[test]
    fn disconnected_pair_adds_zero_term() {
        let l = log(&[(0, 1, 1.0), (2, 3, 1.0)]);
        assert_eq!(harmonic_connectivity(&l, &[1.0, f64::INFINITY]).unwrap(), 2.0);
        assert!(harmonic_connectivity(&l, &[f64::INFINITY, f64::INFINITY]).unwrap().is_infinite());
    }

    #[test]
    fn weighted_two_pair_value() {
        // 22 / (10/14 + 12/6), evaluated by hand: 8.105263157894736...
        let l = log(&[(0, 4, 10.0), (2, 3, 12.0)]);
        let h = harmonic_connectivity(&l, &[14.0, 6.0]).unwrap();
        assert!((h - 8.105_263_157_894_737).abs() < 1e-12);
    }

    #[test]
    fn harmonic_errors() {
        let l = log(&[(0, 1, 1.0)]);
        assert!(matches!(harmonic_connectivity(&l, &[0.0]), Err(Error::ZeroDistance { index: 0 })));
        assert!(matches!(harmonic_connectivity(&TrafficLog::new(vec![]).unwrap(), &[]), Err(Error::EmptyLog)));
        assert!(matches!(harmonic_connectivity(&l, &[]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn log_invariants() {
        let d = |s, t, w| Demand { source: s, target: t, volume: w };
        assert!(matches!(TrafficLog::new(vec![d(0, 1, 0.0)]), Err(Error::InvalidVolume { .. })));
        assert!(matches!(TrafficLog::new(vec![d(1, 1, 1.0)]), Err(Error::SameEndpoints { .. })));
        assert!(matches!(TrafficLog::new(vec![d(0, 1, 1.0), d(1, 0, 1.0)]), Err(Error::DuplicatePair { .. })));
    }

    #[test]
    fn merge_sums_bidirectional_pairs() {
        let l = TrafficLog::merged([(0, 1, 2.0), (2, 3, 1.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.entries()[0], Demand { source: 0, target: 1, volume: 5.0 });
    }

    #[test]
    fn full_subset_has_unit_stretch() {
        let g = triangle();
        let r = stretch_factor(&g, &EdgeSubset::full(&g), &log(&[(0, 2, 1.0), (0, 1, 4.0)])).unwrap();
        assert_eq!(r.lambda, 1.0);
    }

    #[test]
    fn triangle_direct_edge_only() {
        let g = triangle();
        let r = stretch_factor(&g, &EdgeSubset::from_ids(&g, [2]), &log(&[(0, 2, 1.0)])).unwrap();
        assert_eq!(r.full_distances, vec![2.0]);
        assert_eq!(r.subset_distances, vec![3.0]);
        assert_eq!(r.lambda, 1.5);
    }

    #[test]
    fn empty_subset_is_infinite() {
        let g = triangle();
        let r = stretch_factor(&g, &EdgeSubset::empty(3), &log(&[(0, 2, 1.0)])).unwrap();
        assert!(r.lambda.is_infinite());
    }

    #[test]
    fn zero_distance_pair_rejected() {
        let g = Graph::build(&[(0, 1, 0.0), (1, 2, 1.0)]).unwrap();
        let err = stretch_factor(&g, &EdgeSubset::full(&g), &log(&[(0, 1, 1.0)])).unwrap_err();
        assert_eq!(err, Error::ZeroDistance { index: 0 });
    }

    #[test]
    fn no_connected_pair_rejected() {
        let g = Graph::build(&[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let err = stretch_factor(&g, &EdgeSubset::full(&g), &log(&[(0, 3, 1.0)])).unwrap_err();
        assert_eq!(err, Error::NoConnectedPair);
    }
}
