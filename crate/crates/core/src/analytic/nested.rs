//! Nested-ratio form of `f_u` and its majorant on circles.
//!
//! For a vertex `v` of a connected context `H` with neighbors
//! `u_1 < .. < u_k`, let `H_i = H - {v, u_1, .., u_{i-1}}`. Telescoping
//! `I(H - v)/I(H - N[v])` over the `H_i` gives
//!
//! ```text
//! f^H_v(z) = z / Π_i (1 - f^{H_i}_{u_i}(z)),
//! ```
//!
//! where each `f^{H_i}_{u_i}` only depends on the component of `u_i` in
//! `H_i`. A neighbor isolated in its `H_i` contributes `1 - z`; those are
//! collected into the power `ℓ`.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::num::Cplx;
use crate::series::FloatSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedRatio {
    /// Pivot vertex, as an index of the original graph.
    pub vertex: usize,
    /// Vertex set of the connected sub-instance this node was built from.
    pub context: VertexSet,
    /// Number of neighbors isolated in their sub-context.
    pub power: usize,
    pub children: Vec<NestedRatio>,
}

/// Decomposes `f_u` of the component of `u` in `g`, neighbors taken in
/// ascending index order.
pub fn decompose_f_u(g: &Graph, u: usize) -> Result<NestedRatio> {
    if u >= g.n() {
        return Err(GraphError::VertexOutOfRange { vertex: u, n: g.n() }.into());
    }
    let context = g.component_of(u, g.vertices());
    Ok(build(g, u, context))
}

fn build(g: &Graph, v: usize, context: VertexSet) -> NestedRatio {
    let mut removed = VertexSet::singleton(v);
    let mut power = 0;
    let mut children = Vec::new();
    for w in g.neighbors(v).intersection(context).iter() {
        let rest = context.difference(removed);
        let comp = g.component_of(w, rest);
        if comp.len() == 1 {
            power += 1;
        } else {
            children.push(build(g, w, comp));
        }
        removed.insert(w);
    }
    NestedRatio { vertex: v, context, power, children }
}

impl NestedRatio {
    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(NestedRatio::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(NestedRatio::node_count).sum::<usize>()
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut den = (one - z).powu(self.power as u32);
        for c in &self.children {
            den *= one - c.eval_c64(z);
        }
        z / den
    }

    pub fn eval(&self, z: &Cplx) -> Result<Cplx> {
        let prec = z.prec();
        let one = Cplx::one(prec);
        let mut den = one.sub(z).pow_u32(self.power as u32);
        for c in &self.children {
            den = den.mul(&one.sub(&c.eval(z)?));
        }
        z.div(&den).ok_or_else(|| Error::Pole(format!("nested ratio at vertex {}", self.vertex)))
    }

    pub fn majorant(&self) -> MajorantNode {
        MajorantNode {
            power: self.power,
            children: self.children.iter().map(NestedRatio::majorant).collect(),
        }
    }
}

/// `F_r(θ) = r / ((1 - r cos θ)^ℓ Π_j (1 - G_{j,r}(θ)))`, mirroring a
/// [`NestedRatio`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorantNode {
    pub power: usize,
    pub children: Vec<MajorantNode>,
}

impl MajorantNode {
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(MajorantNode::depth).max().unwrap_or(0)
    }

    pub fn eval_f64(&self, r: f64, theta: f64) -> Result<f64> {
        let mut path = Vec::new();
        self.eval_f64_cos(r, theta.cos(), &mut path)
    }

    fn eval_f64_cos(&self, r: f64, cos_t: f64, path: &mut Vec<usize>) -> Result<f64> {
        let mut den = (1.0 - r * cos_t).powi(self.power as i32);
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            let gj = c.eval_f64_cos(r, cos_t, path)?;
            if 1.0 - gj <= 0.0 {
                return Err(Error::MajorantDomain { path: path.clone() });
            }
            path.pop();
            den *= 1.0 - gj;
        }
        Ok(r / den)
    }

    pub fn eval(&self, r: &Float, theta: &Float) -> Result<Float> {
        let prec = r.prec().max(theta.prec());
        let cos_t = Float::with_val(prec, theta.cos_ref());
        let r = Float::with_val(prec, r);
        let base = Float::with_val(prec, 1) - Float::with_val(prec, &r * &cos_t);
        self.eval_base(&r, &base, &mut Vec::new())
    }

    fn eval_base(&self, r: &Float, base: &Float, path: &mut Vec<usize>) -> Result<Float> {
        let prec = r.prec();
        let mut den = Float::with_val(prec, base.pow(self.power as u32));
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            let one_minus = Float::with_val(prec, 1) - c.eval_base(r, base, path)?;
            if one_minus <= 0 {
                return Err(Error::MajorantDomain { path: path.clone() });
            }
            path.pop();
            den *= one_minus;
        }
        Ok(Float::with_val(prec, r / &den))
    }

    /// Taylor coefficients `F^(k)(0)/k!` in `θ` through order `k`.
    pub fn theta_series(&self, r: &Float, k: usize, prec: u32) -> Result<FloatSeries> {
        let r = Float::with_val(prec, r);
        let one = Float::with_val(prec, 1);
        let base = FloatSeries::cos(k, prec).scale(&r).rsub_scalar(&one);
        self.series_with_base(&r, &base, &mut Vec::new())
    }

    fn series_with_base(&self, r: &Float, base: &FloatSeries, path: &mut Vec<usize>) -> Result<FloatSeries> {
        let prec = base.precision();
        let one = Float::with_val(prec, 1);
        let mut den = FloatSeries::constant(&one, base.order(), prec);
        for _ in 0..self.power {
            den = den.mul(base);
        }
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            let factor = c.series_with_base(r, base, path)?.rsub_scalar(&one);
            if *factor.coeff(0) <= 0 {
                return Err(Error::MajorantDomain { path: path.clone() });
            }
            path.pop();
            den = den.mul(&factor);
        }
        Ok(den.reciprocal()?.scale(r))
    }

    /// Child majorant series, for the inductive γ bound.
    pub fn child_series(&self, r: &Float, k: usize, prec: u32) -> Result<Vec<FloatSeries>> {
        let r = Float::with_val(prec, r);
        let one = Float::with_val(prec, 1);
        let base = FloatSeries::cos(k, prec).scale(&r).rsub_scalar(&one);
        self.children
            .iter()
            .enumerate()
            .map(|(i, c)| c.series_with_base(&r, &base, &mut vec![i]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FuPolys;
    use crate::graph::{connected_graphs, make_path, make_star};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn star_shapes() {
        for n in 2..6 {
            let g = make_star(n).unwrap();
            let center = decompose_f_u(&g, 0).unwrap();
            assert_eq!((center.power, center.children.len(), center.depth()), (n, 0, 1));
            let leaf = decompose_f_u(&g, 1).unwrap();
            assert_eq!(leaf.depth(), 2);
            let z = c(0.1, 0.05);
            let want = z / (1.0 - z / (1.0 - z).powu(n as u32 - 1));
            assert!((leaf.eval_c64(z) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn base_cases() {
        let k1 = Graph::empty(1).unwrap();
        let t = decompose_f_u(&k1, 0).unwrap();
        assert_eq!((t.power, t.depth()), (0, 1));
        let k2 = make_path(2).unwrap();
        let t = decompose_f_u(&k2, 0).unwrap();
        assert_eq!((t.power, t.depth()), (1, 1));
        let z = c(0.3, -0.2);
        assert!((t.eval_c64(z) - z / (1.0 - z)).norm() < 1e-15);
    }

    #[test]
    fn no_identity_children() {
        fn check(t: &NestedRatio) {
            for ch in &t.children {
                assert!(ch.context.len() >= 2);
                check(ch);
            }
        }
        for g in connected_graphs(6) {
            for u in 0..g.n() {
                check(&decompose_f_u(&g, u).unwrap());
            }
        }
    }

    #[test]
    fn matches_ratio_on_small_graphs() {
        for g in connected_graphs(5) {
            for u in 0..g.n() {
                let t = decompose_f_u(&g, u).unwrap();
                let p = FuPolys::new(&g, u).unwrap();
                for z in [c(0.05, 0.02), c(-0.1, 0.1), c(0.0, -0.15)] {
                    assert!((t.eval_c64(z) - p.eval_c64(z)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn majorant_at_zero_angle_is_f_at_r() {
        let g = make_star(3).unwrap();
        let t = decompose_f_u(&g, 1).unwrap();
        let m = t.majorant();
        let r = 0.25;
        let f = t.eval_c64(c(r, 0.0)).re;
        assert!((m.eval_f64(r, 0.0).unwrap() - f).abs() < 1e-14);
        // Base case closed form.
        let base = MajorantNode { power: 3, children: vec![] };
        let th: f64 = 0.7;
        let want = r / (1.0 - r * th.cos()).powi(3);
        assert!((base.eval_f64(r, th).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn domain_error_reports_child() {
        let m = MajorantNode { power: 0, children: vec![MajorantNode { power: 1, children: vec![] }] };
        // Child value r/(1-r) >= 1 once r >= 1/2.
        assert_eq!(m.eval_f64(0.6, 0.0), Err(Error::MajorantDomain { path: vec![0] }));
        let r = Float::with_val(128, 0.6);
        assert!(m.eval(&r, &Float::new(128)).is_err());
    }

    #[test]
    fn theta_series_of_base_case() {
        let prec = 256;
        let d = 3;
        let m = MajorantNode { power: d, children: vec![] };
        let r = Float::with_val(prec, 0.3);
        let s = m.theta_series(&r, 8, prec).unwrap();
        let rf = 0.3f64;
        // F''(0) = -d r^2 / (1 - r)^(d+1), so the θ^2 coefficient is half that.
        let want = -(d as f64) * rf * rf / (1.0 - rf).powi(d as i32 + 1) / 2.0;
        assert!((s.coeff(2).to_f64() - want).abs() < 1e-14);
        assert!((s.coeff(0).to_f64() - rf / (1.0 - rf).powi(3)).abs() < 1e-15);
        for k in (1..=8).step_by(2) {
            assert!(s.coeff(k).clone().abs() < 1e-30);
        }
    }
}
