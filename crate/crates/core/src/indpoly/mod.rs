//! Independence polynomials `I(G, z) = Σ (-1)^k a_k(G) z^k` by the deletion
//! recursion `I(G) = I(G - u) - z I(G - N[u])`.

mod poly;

pub use poly::{IntPoly, PolyJson};

use std::collections::HashMap;

use crate::graph::{Graph, VertexSet};

/// Memoizing evaluator of `I(G[S], z)` for vertex subsets `S` of one graph.
///
/// Subsets are split into connected components and each component is
/// memoized by its vertex mask, so repeated sub-instances across different
/// queries on the same graph are shared.
pub struct IndependenceEngine<'g> {
    g: &'g Graph,
    memo: HashMap<u64, IntPoly>,
}

impl<'g> IndependenceEngine<'g> {
    pub fn new(g: &'g Graph) -> Self {
        IndependenceEngine { g, memo: HashMap::new() }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    /// `I(G[s], z)`.
    pub fn poly(&mut self, s: VertexSet) -> IntPoly {
        let mut out = IntPoly::one();
        for c in self.g.components_within(s) {
            let p = self.component(c);
            out = out.mul(&p);
        }
        out
    }

    /// `I(G - s, z)`.
    pub fn poly_without(&mut self, s: VertexSet) -> IntPoly {
        let all = self.g.vertices();
        self.poly(all.difference(s))
    }

    fn component(&mut self, c: VertexSet) -> IntPoly {
        match c.len() {
            0 => return IntPoly::one(),
            1 => return IntPoly::one_minus_z(),
            _ => {}
        }
        if let Some(p) = self.memo.get(&c.bits()) {
            return p.clone();
        }
        let u = c
            .iter()
            .max_by_key(|&v| (self.g.neighbors(v).intersection(c).len(), std::cmp::Reverse(v)))
            .expect("nonempty component");
        let without_u = self.poly(c.without(u));
        let closed = self.g.neighbors(u).with(u);
        let without_nu = self.poly(c.difference(closed));
        let p = without_u.sub(&without_nu.shift(1));
        self.memo.insert(c.bits(), p.clone());
        p
    }
}

/// `I(G, z)` of the whole graph. The empty graph gives the constant 1.
pub fn independence_poly(g: &Graph) -> IntPoly {
    IndependenceEngine::new(g).poly(g.vertices())
}

/// Formal `k`-th derivative.
pub fn derivative(p: &IntPoly, k: usize) -> IntPoly {
    p.derivative(k)
}

/// `-Σ_u I(G - N[u], z)`, which equals `I'(G, z)`.
pub fn neighborhood_derivative(g: &Graph) -> IntPoly {
    let mut eng = IndependenceEngine::new(g);
    let mut sum = IntPoly::zero();
    for u in 0..g.n() {
        let closed = g.neighbors(u).with(u);
        sum = sum.add(&eng.poly_without(closed));
    }
    sum.neg()
}
