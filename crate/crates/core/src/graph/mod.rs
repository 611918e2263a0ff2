//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is stored as one `u64` neighbor mask per vertex, so vertex sets
//! are single machine words and induced subgraphs are cheap to describe.

mod enumerate;
mod parse;

pub use enumerate::{are_isomorphic, canonical_code, connected_graphs, from_canonical_code};
pub use parse::{parse_edge_list, parse_spec};

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has {0} vertices, at most 64 are supported")]
    TooManyVertices(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A set of vertices packed into a 64-bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// A simple undirected graph with vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
    label: Option<String>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { adj: vec![0; n], label: None })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in VertexSet(self.adj[u]).iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// `N[v]`: the neighbors of `v` together with `v`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(VertexSet(self.adj[v]).with(v))
    }

    /// Induced subgraph on `V \ s`, re-indexed by ascending original index.
    pub fn delete(&self, s: VertexSet) -> Graph {
        let keep: Vec<usize> = self.vertices().difference(s).iter().collect();
        let mut index = [usize::MAX; 64];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let adj = keep
            .iter()
            .map(|&old| {
                VertexSet(self.adj[old])
                    .difference(s)
                    .iter()
                    .fold(0u64, |acc, w| acc | 1u64 << index[w])
            })
            .collect();
        Graph { adj, label: None }
    }

    /// Connected component of `v` inside the vertex subset `within`.
    pub fn component_of(&self, v: usize, within: VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(v);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = 0u64;
            for w in frontier.iter() {
                next |= self.adj[w];
            }
            let fresh = VertexSet(next).intersection(within).difference(comp);
            comp = comp.union(fresh);
            frontier = fresh;
        }
        comp
    }

    /// Connected components of the subgraph induced by `within`, ordered by
    /// smallest member.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within;
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let c = self.component_of(v, within);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices())
    }

    /// BFS from vertex 0; graphs with at most one vertex count as connected.
    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.component_of(0, self.vertices()) == self.vertices()
    }

    /// BFS distances from `v`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for y in self.neighbors(x).iter() {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> Result<usize, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        let d = self.distances_from(v);
        match d.iter().copied().max() {
            Some(usize::MAX) => Err(GraphError::Disconnected),
            Some(e) => Ok(e),
            None => Err(GraphError::Empty),
        }
    }

    /// Longest shortest path. Requires a connected graph with `n >= 1`.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        if self.n() == 0 {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        (0..self.n()).map(|v| self.eccentricity(v)).try_fold(0, |m, e| e.map(|e| m.max(e)))
    }

    /// Minimum-eccentricity vertex, ties broken by smallest index.
    pub fn center(&self) -> Result<usize, GraphError> {
        if self.n() == 0 {
            return Err(GraphError::Empty);
        }
        let mut best = (usize::MAX, 0);
        for v in 0..self.n() {
            let e = self.eccentricity(v)?;
            if e < best.0 {
                best = (e, v);
            }
        }
        Ok(best.1)
    }

    /// Spec string for generated graphs, otherwise the label or a summary.
    pub fn describe(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("edges:n={},m={}", self.n(), self.edge_count()),
        }
    }
}

fn bounded(n: usize) -> Result<(), GraphError> {
    if n > MAX_VERTICES {
        Err(GraphError::TooManyVertices(n))
    } else {
        Ok(())
    }
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph, GraphError> {
    bounded(n)?;
    if n == 0 {
        return Err(GraphError::InvalidParameter("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("path:{n}")))
}

pub fn make_cycle(n: usize) -> Result<Graph, GraphError> {
    bounded(n)?;
    if n < 3 {
        return Err(GraphError::CycleTooSmall(n));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("cycle:{n}")))
}

/// Star with center `0` and `n` leaves.
pub fn make_star(n: usize) -> Result<Graph, GraphError> {
    bounded(n + 1)?;
    if n == 0 {
        return Err(GraphError::InvalidParameter("star needs n >= 1 leaves".into()));
    }
    let edges: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    Ok(Graph::from_edges(n + 1, &edges)?.with_label(format!("star:{n}")))
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn make_complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    bounded(a + b)?;
    if a == 0 || b == 0 {
        return Err(GraphError::InvalidParameter("bipartite sides must be nonempty".into()));
    }
    let mut edges = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in a..a + b {
            edges.push((i, j));
        }
    }
    Ok(Graph::from_edges(a + b, &edges)?.with_label(format!("kbip:{a}x{b}")))
}

pub fn make_complete(n: usize) -> Result<Graph, GraphError> {
    bounded(n)?;
    if n == 0 {
        return Err(GraphError::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("complete:{n}")))
}

/// Erdős–Rényi `G(n, p)`: each pair `i < j`, in lexicographic order, is an
/// edge with probability `p`. ChaCha8 seeded with `seed`.
pub fn make_random(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    bounded(n)?;
    if n == 0 {
        return Err(GraphError::InvalidParameter("random graph needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g.with_label(format!("gnp:{n}:{p}:seed{seed}")))
}

/// First connected `G(n, p)` sample starting at `seed`, trying consecutive
/// seeds. Returns the graph and the seed that produced it.
pub fn make_random_connected(n: usize, p: f64, seed: u64) -> Result<(Graph, u64), GraphError> {
    for s in seed..seed.saturating_add(100_000) {
        let g = make_random(n, p, s)?;
        if g.is_connected() {
            return Ok((g, s));
        }
    }
    Err(GraphError::InvalidParameter(format!("no connected G({n}, {p}) sample found")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_neighborhoods() {
        let s3 = make_star(3).unwrap();
        assert_eq!(s3.closed_neighborhood(0).unwrap(), VertexSet::full(4));
        let p4 = make_path(4).unwrap();
        assert_eq!(p4.closed_neighborhood(1).unwrap(), [0, 1, 2].into_iter().collect());
        let e = Graph::empty(3).unwrap();
        assert_eq!(e.closed_neighborhood(2).unwrap(), VertexSet::singleton(2));
        assert!(matches!(
            p4.closed_neighborhood(4),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn deletion_reindexes() {
        let p4 = make_path(4).unwrap();
        assert_eq!(p4.delete(p4.vertices()).n(), 0);

        let h = p4.delete(VertexSet::singleton(1));
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), vec![(1, 2)]);

        let c4 = make_cycle(4).unwrap();
        let h = c4.delete(c4.closed_neighborhood(0).unwrap());
        assert_eq!(h.n(), 1);
        assert_eq!(h.edge_count(), 0);

        let same = c4.delete(VertexSet::EMPTY);
        assert_eq!(same.edges(), c4.edges());
    }

    #[test]
    fn diameters() {
        assert_eq!(make_path(4).unwrap().diameter(), Ok(3));
        assert_eq!(make_cycle(6).unwrap().diameter(), Ok(3));
        assert_eq!(make_complete_bipartite(3, 3).unwrap().diameter(), Ok(2));
        assert_eq!(Graph::empty(1).unwrap().diameter(), Ok(0));
        let split = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(split.diameter(), Err(GraphError::Disconnected));
        assert!(!split.is_connected());
    }

    #[test]
    fn degrees_and_generators() {
        assert_eq!(make_star(5).unwrap().max_degree(), 5);
        assert_eq!(make_cycle(9).unwrap().max_degree(), 2);
        let s3 = make_star(3).unwrap();
        assert_eq!((s3.n(), s3.edge_count(), s3.degree(0)), (4, 3, 3));
        assert_eq!(make_cycle(4).unwrap().edge_count(), 4);
        assert_eq!(make_cycle(2), Err(GraphError::CycleTooSmall(2)));
        assert!(are_isomorphic(&make_complete_bipartite(2, 2).unwrap(), &make_cycle(4).unwrap()));
    }

    #[test]
    fn bipartite_diameter_two() {
        for a in 2..8 {
            assert_eq!(make_complete_bipartite(a, a).unwrap().diameter(), Ok(2));
        }
    }

    #[test]
    fn random_is_reproducible() {
        let a = make_random(20, 0.3, 7).unwrap();
        let b = make_random(20, 0.3, 7).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = make_random(20, 0.3, 8).unwrap();
        assert_ne!(a.edges(), c.edges());
        assert_eq!(make_random(6, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(make_random(6, 1.0, 1).unwrap().edge_count(), 15);
    }

    #[test]
    fn path_is_the_only_diameter_extremal_graph() {
        for n in 1..=7 {
            for g in connected_graphs(n) {
                let dia = g.diameter().unwrap();
                assert!(dia < n);
                let is_path = n == 1 || (g.edge_count() == n - 1 && g.max_degree() <= 2);
                assert_eq!(dia == n - 1, is_path, "n={n} edges={:?}", g.edges());
            }
        }
    }

    #[test]
    fn center_vertex() {
        assert_eq!(make_path(5).unwrap().center(), Ok(2));
        assert_eq!(make_star(4).unwrap().center(), Ok(0));
        assert_eq!(make_cycle(5).unwrap().center(), Ok(0));
    }
}
