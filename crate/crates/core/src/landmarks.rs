//! Landmark distance vectors giving triangle-inequality upper bounds on
//! shortest-path distances.

use crate::error::{Error, Result};
use crate::graph::{Graph, LengthMap, Restrict, SearchSpace, VertexId};

/// Picks landmarks by decreasing degree (ties by id), skipping vertices
/// adjacent to an accepted landmark. If that leaves fewer than `count`, the
/// skipped vertices fill the remainder in the same order.
pub fn select_landmarks(g: &Graph, count: usize) -> Result<Vec<VertexId>> {
    let n = g.vertex_count();
    if count > n {
        return Err(Error::TooManyLandmarks { requested: count, n });
    }
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));

    let mut chosen = Vec::with_capacity(count);
    let mut is_chosen = vec![false; n];
    let mut blocked = vec![false; n];
    for &v in &order {
        if chosen.len() == count {
            break;
        }
        if blocked[v] {
            continue;
        }
        chosen.push(v);
        is_chosen[v] = true;
        for &(w, _) in g.neighbors(v) {
            blocked[w] = true;
        }
    }
    for &v in &order {
        if chosen.len() == count {
            break;
        }
        if !is_chosen[v] {
            chosen.push(v);
            is_chosen[v] = true;
        }
    }
    Ok(chosen)
}

/// ⌈√n⌉, the landmark count used when none is given.
pub fn default_landmark_count(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Distances from every vertex to each landmark over one (subset, lengths)
/// snapshot. `generation` identifies the snapshot for callers that rebuild.
#[derive(Debug, Clone)]
pub struct LandmarkIndex {
    landmarks: Vec<VertexId>,
    /// row-major `n x landmarks.len()`
    dist: Vec<f64>,
    pub generation: u64,
}

impl LandmarkIndex {
    pub fn landmarks(&self) -> &[VertexId] {
        &self.landmarks
    }

    #[inline]
    pub fn vector(&self, v: VertexId) -> &[f64] {
        let l = self.landmarks.len();
        &self.dist[v * l..(v + 1) * l]
    }

    /// `min_i d(u, z_i) + d(v, z_i)`; +inf when no landmark reaches both.
    pub fn approx_distance(&self, u: VertexId, v: VertexId) -> f64 {
        self.vector(u).iter().zip(self.vector(v)).map(|(a, b)| a + b).fold(f64::INFINITY, f64::min)
    }
}

/// One single-source pass per landmark over `restrict` with `lengths`.
pub fn build_index(g: &Graph, lengths: &LengthMap, restrict: Restrict<'_>, landmarks: &[VertexId], generation: u64) -> LandmarkIndex {
    let n = g.vertex_count();
    let l = landmarks.len();
    let column = |space: &mut SearchSpace, &z: &VertexId| -> Vec<f64> {
        space.run(g, lengths.as_slice(), |e| restrict.allows(e), z, &[]);
        (0..n).map(|v| space.distance(v)).collect()
    };

    #[cfg(feature = "parallel")]
    let columns: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        landmarks.par_iter().map_init(|| SearchSpace::new(n), column).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let columns: Vec<Vec<f64>> = {
        let mut space = SearchSpace::new(n);
        landmarks.iter().map(|z| column(&mut space, z)).collect()
    };

    let mut dist = vec![f64::INFINITY; n * l];
    for (i, col) in columns.iter().enumerate() {
        for (v, &d) in col.iter().enumerate() {
            dist[v * l + i] = d;
        }
    }
    LandmarkIndex { landmarks: landmarks.to_vec(), dist, generation }
}

/// Convenience wrapper over [`LandmarkIndex::approx_distance`].
pub fn approx_distance(idx: &LandmarkIndex, u: VertexId, v: VertexId) -> f64 {
    idx.approx_distance(u, v)
}
