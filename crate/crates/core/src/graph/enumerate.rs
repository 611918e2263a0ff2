//! Canonical labelling and exhaustive generation of small connected graphs.
//!
//! Canonical forms use individualization-refinement: colour refinement to an
//! equitable ordered partition, then branching on the first non-singleton
//! cell. Branches on twin vertices (same neighborhood outside each other) are
//! skipped because the swap is an automorphism fixing everything chosen so
//! far. The canonical code is the lexicographically largest upper-triangle
//! adjacency code over all leaves.

use std::collections::HashSet;

use super::{Graph, VertexSet};

/// Canonical labelling is supported up to this order (the code is a `u128`).
pub const MAX_CANONICAL_ORDER: usize = 16;

type Partition = Vec<Vec<usize>>;

fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<u64> =
            cells.iter().map(|c| c.iter().fold(0u64, |m, &v| m | 1u64 << v)).collect();
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|m| (g.adj[v] & m).count_ones()).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        let changed = next.len() > cells.len();
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn leaf_code(g: &Graph, order: &[usize]) -> u128 {
    let mut code = 0u128;
    let n = order.len();
    for i in 0..n {
        for j in i + 1..n {
            code <<= 1;
            if g.has_edge(order[i], order[j]) {
                code |= 1;
            }
        }
    }
    code
}

fn are_twins(g: &Graph, v: usize, w: usize) -> bool {
    (g.adj[v] & !(1u64 << w)) == (g.adj[w] & !(1u64 << v))
}

fn search(g: &Graph, cells: Partition, best: &mut Option<u128>) {
    let Some(pos) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = leaf_code(g, &order);
        if best.is_none_or(|b| code > b) {
            *best = Some(code);
        }
        return;
    };
    let cell = cells[pos].clone();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&t| are_twins(g, t, v)) {
            continue;
        }
        tried.push(v);
        let mut branch = cells.clone();
        let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
        branch.splice(pos..=pos, [vec![v], rest]);
        search(g, refine(g, branch), best);
    }
}

/// Isomorphism-invariant code of `g`; equal codes (for equal `n`) mean
/// isomorphic graphs. Panics above [`MAX_CANONICAL_ORDER`] vertices.
pub fn canonical_code(g: &Graph) -> u128 {
    assert!(g.n() <= MAX_CANONICAL_ORDER, "canonical labelling supports n <= 16");
    if g.n() == 0 {
        return 0;
    }
    let init = refine(g, vec![(0..g.n()).collect()]);
    let mut best = None;
    search(g, init, &mut best);
    best.unwrap_or(0)
}

/// Rebuilds the canonical representative from its code.
pub fn from_canonical_code(n: usize, code: u128) -> Graph {
    let mut g = Graph::empty(n).expect("n within bounds");
    let total = n * n.saturating_sub(1) / 2;
    let mut bit = total;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if code >> bit & 1 == 1 {
                g.add_edge(i, j).expect("valid pair");
            }
        }
    }
    g
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_code(a) == canonical_code(b)
}

/// All isomorphism classes of connected graphs on `n` vertices, as canonical
/// representatives sorted by canonical code.
///
/// Every connected graph has a vertex whose removal keeps it connected, so
/// extending each class on `n - 1` vertices by one vertex with every
/// nonempty neighbourhood reaches every class on `n`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 10, "exhaustive enumeration is limited to n <= 10");
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<u128> = vec![0];
    for m in 2..=n {
        let mut seen: HashSet<u128> = HashSet::new();
        for &code in &level {
            let base = from_canonical_code(m - 1, code);
            for s in 1u64..(1u64 << (m - 1)) {
                let mut g = base.clone();
                g.adj.push(0);
                for w in VertexSet(s).iter() {
                    g.add_edge(w, m - 1).expect("valid edge");
                }
                seen.insert(canonical_code(&g));
            }
        }
        level = seen.into_iter().collect();
        level.sort_unstable();
    }
    level
        .into_iter()
        .enumerate()
        .map(|(i, code)| from_canonical_code(n, code).with_label(format!("conn{n}#{i}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete_bipartite, make_cycle, make_path, make_star};

    fn permuted(g: &Graph, perm: &[usize]) -> Graph {
        let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(g.n(), &edges).unwrap()
    }

    #[test]
    fn connected_class_counts() {
        // OEIS A001349.
        let expected = [1, 1, 2, 6, 21, 112, 853, 11117];
        for (i, &count) in expected.iter().enumerate() {
            let gs = connected_graphs(i + 1);
            assert_eq!(gs.len(), count, "n = {}", i + 1);
            assert!(gs.iter().all(Graph::is_connected));
        }
    }

    #[test]
    fn code_is_label_invariant() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4)])
            .unwrap();
        let perms: [[usize; 7]; 3] =
            [[6, 5, 4, 3, 2, 1, 0], [1, 0, 3, 2, 5, 4, 6], [3, 6, 0, 5, 1, 4, 2]];
        let c = canonical_code(&g);
        for p in perms {
            assert_eq!(canonical_code(&permuted(&g, &p)), c);
        }
    }

    #[test]
    fn distinguishes_nonisomorphic() {
        let p4 = make_path(4).unwrap();
        let s3 = make_star(3).unwrap();
        assert!(!are_isomorphic(&p4, &s3));
        assert!(are_isomorphic(&make_cycle(4).unwrap(), &make_complete_bipartite(2, 2).unwrap()));
        // Same degree sequence, different graphs: C_6 versus two triangles.
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!are_isomorphic(&make_cycle(6).unwrap(), &two_triangles));
    }

    #[test]
    fn round_trip_code() {
        let g = make_star(4).unwrap();
        let c = canonical_code(&g);
        let h = from_canonical_code(5, c);
        assert!(are_isomorphic(&g, &h));
        assert_eq!(canonical_code(&h), c);
    }
}
