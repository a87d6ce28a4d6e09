//! Incremental connected components over an edge subset.

use crate::graph::{EdgeSubset, Graph, VertexId};

/// Union-find with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], count: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Root lookup without compression, usable through a shared reference.
    pub fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns true if they were separate.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.count -= 1;
        true
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.root(a) == self.root(b)
    }

    pub fn component_count(&self) -> usize {
        self.count
    }

    pub fn component_size(&self, x: usize) -> usize {
        self.size[self.root(x)]
    }
}

/// Components of `(V, subset)`. Edges added later go through [`Components::add_edge`].
#[derive(Debug, Clone)]
pub struct Components {
    uf: UnionFind,
}

impl Components {
    pub fn new(g: &Graph, subset: &EdgeSubset) -> Self {
        let mut uf = UnionFind::new(g.vertex_count());
        for e in subset.ids() {
            let edge = g.edge(e);
            uf.union(edge.u, edge.v);
        }
        Components { uf }
    }

    pub fn add_edge(&mut self, g: &Graph, e: usize) -> bool {
        let edge = g.edge(e);
        self.uf.union(edge.u, edge.v)
    }

    pub fn root(&self, v: VertexId) -> usize {
        self.uf.root(v)
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        self.uf.connected(a, b)
    }

    pub fn count(&self) -> usize {
        self.uf.component_count()
    }

    /// Vertex groups, each sorted, ordered by smallest member.
    pub fn partition(&self) -> Vec<Vec<VertexId>> {
        let n = self.uf.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        for v in 0..n {
            let r = self.uf.root(v);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(v);
        }
        groups
    }
}

/// Connected components of `(V, subset)`.
pub fn components(g: &Graph, subset: &EdgeSubset) -> Components {
    Components::new(g, subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::build(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn empty_subset_gives_singletons() {
        let g = path3();
        let c = components(&g, &EdgeSubset::empty(g.edge_count()));
        assert_eq!(c.count(), 3);
        assert_eq!(c.partition(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn full_connected_graph_is_one_component() {
        let g = path3();
        let c = components(&g, &EdgeSubset::full(&g));
        assert_eq!(c.count(), 1);
    }

    #[test]
    fn partial_subset() {
        let g = path3();
        let c = components(&g, &EdgeSubset::from_ids(&g, [0]));
        assert_eq!(c.partition(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn incremental_add() {
        let g = path3();
        let mut c = components(&g, &EdgeSubset::empty(2));
        assert!(c.add_edge(&g, 1));
        assert!(!c.connected(0, 2));
        assert!(c.add_edge(&g, 0));
        assert!(!c.add_edge(&g, 0));
        assert!(c.connected(0, 2));
        assert_eq!(c.count(), 1);
    }

    #[test]
    fn union_find_sizes() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        uf.union(1, 4);
        assert_eq!(uf.component_size(3), 4);
        assert_eq!(uf.component_count(), 2);
        assert_eq!(uf.find(0), uf.find(3));
    }
}
