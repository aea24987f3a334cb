//! Abstract simple graphs on at most 64 vertices, stored as adjacency bitmasks.

use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of vertices an abstract [`Graph`] can hold.
pub const MAX_VERTICES: usize = 64;

/// A simple undirected graph with vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "graph", size: n, limit: MAX_VERTICES });
        }
        Ok(Graph { adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidGraph(format!("repeated edge {u}-{v}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n).expect("complete graph too large");
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n).expect("cycle too large");
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Neighborhood of `v` as a bitmask.
    #[inline]
    pub fn nbr_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            for v in bits(self.adj[u] >> u >> 1) {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Mask with one bit per vertex.
    pub fn all_mask(&self) -> u64 {
        low_mask(self.n())
    }

    /// Induced subgraph on the vertices of `mask`, relabeled in increasing order.
    /// Returns the subgraph and the original id of each new vertex.
    pub fn induced(&self, mask: u64) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = bits(mask).collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph { adj: vec![0; verts.len()] };
        for (i, &v) in verts.iter().enumerate() {
            for w in bits(self.adj[v] & mask) {
                g.adj[i] |= 1 << pos[w];
            }
        }
        (g, verts)
    }

    /// Connected components restricted to `mask`, each as a vertex mask.
    pub fn components(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                next &= mask & !comp;
                comp |= next;
                frontier = next;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components(self.all_mask()).len() == 1
    }

    /// Graph join: every vertex of `self` adjacent to every vertex of `other`.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        let n1 = self.n();
        let mut g = Graph::empty(n1 + other.n())?;
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(n1 + u, n1 + v);
        }
        for u in 0..n1 {
            for v in 0..other.n() {
                g.add_edge(u, n1 + v);
            }
        }
        Ok(g)
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph { adj: vec![0; self.n()] };
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the set bits of `mask`, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Shortest-path distance between two vertex sets, or `None` when unreachable.
pub fn set_distance(g: &Graph, a: u64, b: u64) -> Option<usize> {
    if a & b != 0 {
        return Some(0);
    }
    let mut seen = a;
    let mut frontier = a;
    let mut dist = 0;
    while frontier != 0 {
        dist += 1;
        let mut next = 0;
        for v in bits(frontier) {
            next |= g.nbr_mask(v);
        }
        next &= !seen;
        if next & b != 0 {
            return Some(dist);
        }
        seen |= next;
        frontier = next;
    }
    None
}

/// Exact (non-induced) subgraph containment by backtracking with degree pruning.
pub fn subgraph_isomorphic(pattern: &Graph, host: &Graph) -> bool {
    find_subgraph(pattern, host).is_some()
}

/// Returns an injective map `pattern vertex -> host vertex` preserving edges, if any.
pub fn find_subgraph(pattern: &Graph, host: &Graph) -> Option<Vec<usize>> {
    let pn = pattern.n();
    if pn > host.n() || pattern.m() > host.m() {
        return None;
    }
    if pn == 0 {
        return Some(Vec::new());
    }
    // Visit pattern vertices so that each one after the first has an already-placed neighbor when possible.
    let mut order = Vec::with_capacity(pn);
    let mut placed = 0u64;
    while order.len() < pn {
        let best = (0..pn)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((pattern.nbr_mask(v) & placed).count_ones(), pattern.degree(v), usize::MAX - v))
            .unwrap();
        order.push(best);
        placed |= 1 << best;
    }
    let mut host_deg = vec![0usize; host.n()];
    for (v, d) in host_deg.iter_mut().enumerate() {
        *d = host.degree(v);
    }
    let mut map = vec![usize::MAX; pn];
    if extend_subgraph(pattern, host, &order, 0, &host_deg, &mut map, 0) {
        Some(map)
    } else {
        None
    }
}

fn extend_subgraph(
    pattern: &Graph,
    host: &Graph,
    order: &[usize],
    depth: usize,
    host_deg: &[usize],
    map: &mut [usize],
    used: u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    let need = pattern.degree(p);
    let mut candidates = host.all_mask() & !used;
    for q in bits(pattern.nbr_mask(p)) {
        if map[q] != usize::MAX {
            candidates &= host.nbr_mask(map[q]);
        }
    }
    for h in bits(candidates) {
        if host_deg[h] < need {
            continue;
        }
        map[p] = h;
        if extend_subgraph(pattern, host, order, depth + 1, host_deg, map, used | 1 << h) {
            return true;
        }
    }
    map[p] = usize::MAX;
    false
}

/// Isomorphism test for abstract graphs.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && subgraph_isomorphic(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wheel5() -> Graph {
        let mut g = Graph::cycle(5);
        let mut h = Graph::empty(6).unwrap();
        for (u, v) in g.edges() {
            h.add_edge(u, v);
        }
        for i in 0..5 {
            h.add_edge(5, i);
        }
        g = h;
        g
    }

    #[test]
    fn k6_in_k7() {
        assert!(subgraph_isomorphic(&Graph::complete(6), &Graph::complete(7)));
    }

    #[test]
    fn k6_not_in_wheel() {
        assert!(!subgraph_isomorphic(&Graph::complete(6), &wheel5()));
    }

    #[test]
    fn c3_join_c5_not_in_k7() {
        let j = Graph::cycle(3).join(&Graph::cycle(5)).unwrap();
        assert_eq!((j.n(), j.m()), (8, 23));
        assert!(!subgraph_isomorphic(&j, &Graph::complete(7)));
    }

    #[test]
    fn distances() {
        // two triangles joined by a 3-edge path 2-6-7-3
        let g =
            Graph::from_edges(8, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 6), (6, 7), (7, 3)]).unwrap();
        assert_eq!(set_distance(&g, 0b111, 0b111), Some(0));
        assert_eq!(set_distance(&g, 0b111, 0b111000), Some(3));
        let prism =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap();
        assert_eq!(set_distance(&prism, 0b111, 0b111000), Some(1));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 5)]).is_err());
        assert!(Graph::empty(65).is_err());
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(g.all_mask()), vec![0b00011, 0b00100, 0b11000]);
        let (h, ids) = g.induced(0b11010);
        assert_eq!(ids, vec![1, 3, 4]);
        assert_eq!(h.edges(), vec![(1, 2)]);
    }
}
