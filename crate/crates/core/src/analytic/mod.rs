//! The ratio `f_u(z) = z I(G - N[u], z) / I(G - u, z)`: evaluation, origin
//! series, nested decomposition, majorants, and the γ-function estimates.

mod nested;

pub use nested::{decompose_f_u, MajorantNode, NestedRatio};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::indpoly::{IndependenceEngine, IntPoly};
use crate::num::Cplx;
use crate::report::Check;
use crate::series::{series_div, taylor_shift, FloatSeries, IntSeries};

/// Denominators smaller than this are treated as poles.
pub const POLE_TOLERANCE: f64 = 1e-30;

/// Numerator `z I(G - N[u])` and denominator `I(G - u)` of `f_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuPolys {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl FuPolys {
    pub fn new(g: &Graph, u: usize) -> Result<Self> {
        let mut eng = IndependenceEngine::new(g);
        Self::with_engine(&mut eng, u)
    }

    pub fn with_engine(eng: &mut IndependenceEngine<'_>, u: usize) -> Result<Self> {
        let g = eng.graph();
        let closed = g.closed_neighborhood(u)?;
        let num = eng.poly_without(closed).shift(1);
        let den = eng.poly_without(VertexSet::singleton(u));
        Ok(FuPolys { num, den })
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.num.eval_c64(z) / self.den.eval_c64(z)
    }

    pub fn eval(&self, z: &Cplx) -> Result<Cplx> {
        let prec = z.prec();
        let d = self.den.eval_complex(z, prec);
        if d.abs() < POLE_TOLERANCE {
            return Err(Error::Pole(format!("I(G - u) vanishes near {z}")));
        }
        Ok(self.num.eval_complex(z, prec).div(&d).expect("nonzero denominator"))
    }

    pub fn eval_exact(&self, q: &Rational) -> Result<Rational> {
        let d = self.den.eval_exact(q);
        if d == 0 {
            return Err(Error::Pole(format!("I(G - u) vanishes at {q}")));
        }
        Ok(self.num.eval_exact(q) / d)
    }
}

/// `f_u(z)` at `prec` bits.
pub fn f_u_eval(g: &Graph, u: usize, z: &Cplx, prec: u32) -> Result<Cplx> {
    let z = Cplx::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im));
    FuPolys::new(g, u)?.eval(&z)
}

/// Exact origin expansion of `f_u` through order `k`.
pub fn f_u_series(g: &Graph, u: usize, k: usize) -> Result<IntSeries> {
    let p = FuPolys::new(g, u)?;
    series_div(&p.num, &p.den, k)
}

/// Evenly spaced angles `0, π/(m-1), .., π`.
pub fn theta_grid(m: usize) -> Vec<f64> {
    assert!(m >= 2, "grid needs at least two points");
    (0..m).map(|i| PI * i as f64 / (m - 1) as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridRow {
    pub theta: f64,
    pub abs_f_u: f64,
    pub majorant: f64,
}

/// `|f_u(r e^{iθ})|` and `F_{u,r}(θ)` over [`theta_grid`].
pub fn grid_rows(p: &FuPolys, m: &MajorantNode, r: f64, points: usize) -> Result<Vec<GridRow>> {
    theta_grid(points)
        .into_iter()
        .map(|theta| {
            let abs_f_u = p.eval_c64(Complex64::from_polar(r, theta)).norm();
            let majorant = m.eval_f64(r, theta)?;
            Ok(GridRow { theta, abs_f_u, majorant })
        })
        .collect()
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("theta,abs_f_u,majorant\n");
    for r in rows {
        out.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", r.theta, r.abs_f_u, r.majorant));
    }
    out
}

/// A truncated Smale-type γ value with the bound it is compared against.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaEstimate {
    pub value: Float,
    /// Largest order `k` included in the maximum.
    pub truncation: usize,
    pub certified_upper: Option<Float>,
    /// Ratio of the last two root-normalized terms; below 1 suggests the
    /// truncated maximum has stopped growing.
    pub decay: Option<f64>,
}

impl GammaEstimate {
    pub fn within_bound(&self) -> Option<bool> {
        self.certified_upper.as_ref().map(|u| self.value <= *u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value.to_f64(),
            "truncation": self.truncation,
            "certified_upper": self.certified_upper.as_ref().map(Float::to_f64),
            "decay": self.decay,
        })
    }
}

/// `max_{j<k<=kmax} |t_k/t_j|^{1/(k-j)}` and the decay diagnostic.
fn gamma_of_coeffs(t: &[Float], j: usize, kmax: usize) -> Result<(Float, Option<f64>)> {
    let prec = t[j].prec();
    if t[j].is_zero() {
        return Err(Error::VanishingDerivative(j));
    }
    let mut best = Float::new(prec);
    let mut terms = Vec::new();
    for k in j + 1..=kmax.min(t.len() - 1) {
        let ratio = Float::with_val(prec, &t[k] / &t[j]).abs();
        let v = ratio.root((k - j) as u32);
        if v > best {
            best = v.clone();
        }
        terms.push(v);
    }
    let decay = match terms.as_slice() {
        [.., a, b] if !a.is_zero() => Some(Float::with_val(prec, b / a).to_f64()),
        _ => None,
    };
    Ok((best, decay))
}

/// `γ_{p,j}(c) = max_{k>j} |p^(k)(c) j! / (k! p^(j)(c))|^{1/(k-j)}`, exact
/// Taylor coefficients rounded once to `prec` bits. Zero when `deg p <= j`.
pub fn gamma_poly(p: &IntPoly, j: usize, c: &Rational, prec: u32) -> Result<GammaEstimate> {
    let t = taylor_shift(p, c);
    let tj = t.get(j).cloned().unwrap_or_default();
    if tj == 0 {
        return Err(Error::VanishingDerivative(j));
    }
    let tf: Vec<Float> = t.iter().map(|q| Float::with_val(prec, q)).collect();
    let (value, decay) = gamma_of_coeffs(&tf, j, t.len() - 1)?;
    Ok(GammaEstimate { value, truncation: t.len() - 1, certified_upper: None, decay })
}

/// `2n / β^dia`, the reciprocal of the radius `r_G`, at `beta`.
pub fn inv_r_g(n: usize, dia: usize, beta: &Rational, prec: u32) -> Float {
    let b = Float::with_val(prec, beta);
    Float::with_val(prec, 2 * n as u32) / b.pow(dia as u32)
}

/// Truncated `γ_{f_u}(β̂) = max_{k<=K} |f_u^(k)(β̂) / (k! f_u(β̂))|^{1/k}`.
///
/// Numerator and denominator are Taylor-shifted exactly to `β̂`, then
/// divided as series at `prec` bits. The bound recorded is `1/r_G` at `β̂`.
pub fn gamma_f_u_truncated(g: &Graph, u: usize, beta_hat: &Rational, k: usize, prec: u32) -> Result<GammaEstimate> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("truncation order must be >= 2, got {k}")));
    }
    let dia = g.diameter()?;
    let p = FuPolys::new(g, u)?;
    let to_series = |q: &IntPoly| {
        let t = taylor_shift(q, beta_hat);
        let coeffs = (0..=k).map(|i| t.get(i).map_or_else(|| Float::new(prec), |x| Float::with_val(prec, x))).collect();
        FloatSeries::new(coeffs, prec)
    };
    let quotient = to_series(&p.num).div(&to_series(&p.den))?;
    let (value, decay) = gamma_of_coeffs(quotient.coeffs(), 0, k)?;
    Ok(GammaEstimate { value, truncation: k, certified_upper: Some(inv_r_g(g.n(), dia, beta_hat, prec)), decay })
}

/// `f'_v(β̂) = -I'(G, β̂) / I(G - v, β̂)`, exactly.
pub fn f_prime_at_beta(g: &Graph, v: usize, beta_hat: &Rational) -> Result<Rational> {
    let mut eng = IndependenceEngine::new(g);
    let ip = eng.poly(g.vertices()).derivative(1).eval_exact(beta_hat);
    if v >= g.n() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() }.into());
    }
    let den = eng.poly_without(VertexSet::singleton(v)).eval_exact(beta_hat);
    if den == 0 {
        return Err(Error::Pole(format!("I(G - {v}) vanishes at {beta_hat}")));
    }
    Ok((-ip) / den)
}

fn margin(lhs: &Rational, rhs: &Rational) -> f64 {
    Rational::from(lhs - rhs).to_f64()
}

/// `1/β < f'_v(β̂) <= n/β^dia` for every vertex, exactly at `β̂`.
pub fn f_prime_bounds(g: &Graph, beta_hat: &Rational) -> Result<Vec<Check>> {
    let n = g.n();
    let dia = g.diameter()?;
    let lower = Rational::from(beta_hat.recip_ref());
    let upper = Rational::from(n as u32) / pow_q(beta_hat, dia);
    let mut out = Vec::with_capacity(2 * n);
    for v in 0..n {
        let fp = f_prime_at_beta(g, v, beta_hat)?;
        out.push(Check::new(format!("f_prime_lower[{v}]"), fp > lower, margin(&fp, &lower)));
        out.push(Check::new(format!("f_prime_upper[{v}]"), fp <= upper, margin(&upper, &fp)));
    }
    Ok(out)
}

pub fn pow_q(q: &Rational, e: usize) -> Rational {
    let mut out = Rational::from(1);
    for _ in 0..e {
        out *= q;
    }
    out
}

/// The derivative inequalities at `β̂`, in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    /// `|I^(k)(G, β)| <= C(n, k)` for `k = 0..=n`.
    pub binomial: Vec<Check>,
    /// `|I^(k)(G, β)| <= k! C(n, k)`, the bound the second-level estimates
    /// actually need (it is what `|I^(k)| <= n^k` rests on).
    pub falling_factorial: Vec<Check>,
    /// `I(G - v, β) >= β^dia` for every vertex.
    pub deleted_vertex: Vec<Check>,
    /// `|I'(G, β)| >= n β^dia`.
    pub first_derivative: Check,
}

impl DerivativeReport {
    pub fn all_checks(&self) -> impl Iterator<Item = &Check> {
        self.binomial
            .iter()
            .chain(&self.falling_factorial)
            .chain(&self.deleted_vertex)
            .chain(std::iter::once(&self.first_derivative))
    }
}

pub fn derivative_bounds_check(g: &Graph, beta_hat: &Rational) -> Result<DerivativeReport> {
    let n = g.n();
    let dia = g.diameter()?;
    let mut eng = IndependenceEngine::new(g);
    let p = eng.poly(g.vertices());
    let bd = pow_q(beta_hat, dia);
    let mut binomial_checks = Vec::new();
    let mut falling = Vec::new();
    let mut fact = rug::Integer::from(1);
    for k in 0..=n {
        if k > 0 {
            fact *= k as u32;
        }
        let v = Rational::from(p.derivative(k).eval_exact(beta_hat).abs_ref());
        let c = Rational::from(binomial(n, k));
        binomial_checks.push(Check::new(format!("derivative_binomial[{k}]"), v <= c, margin(&c, &v)));
        let cf = &c * Rational::from(&fact);
        falling.push(Check::new(format!("derivative_falling[{k}]"), v <= cf, margin(&cf, &v)));
    }
    let mut deleted = Vec::with_capacity(n);
    for v in 0..n {
        let x = eng.poly_without(VertexSet::singleton(v)).eval_exact(beta_hat);
        deleted.push(Check::new(format!("deleted_vertex_lower[{v}]"), x >= bd, margin(&x, &bd)));
    }
    let ip = Rational::from(p.derivative(1).eval_exact(beta_hat).abs_ref());
    let lb = Rational::from(n as u32) * &bd;
    let first = Check::new("first_derivative_lower", ip >= lb, margin(&ip, &lb));
    Ok(DerivativeReport { binomial: binomial_checks, falling_factorial: falling, deleted_vertex: deleted, first_derivative: first })
}

/// Largest `|f_u(z)|` over `samples` points drawn uniformly from the disc
/// `D(0, radius)`.
pub fn sampled_sup_abs(p: &FuPolys, radius: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let rho = radius * rng.gen::<f64>().sqrt();
        let phi = rng.gen_range(-PI..PI);
        best = best.max(p.eval_c64(Complex64::from_polar(rho, phi)).norm());
    }
    best
}

/// `max_{1<=k<=kmax} |s_k|^{1/k}` for a series `s`.
pub fn root_sup(s: &FloatSeries, kmax: usize) -> Float {
    let prec = s.precision();
    let mut best = Float::new(prec);
    for k in 1..=kmax.min(s.order()) {
        let v = Float::with_val(prec, s.coeff(k).abs_ref()).root(k as u32);
        if v > best {
            best = v;
        }
    }
    best
}

/// Truncated form of the inductive bound
/// `sup_k |F^(k)(0)/k!|^{1/k} <= 2dΓ/β`, where `Γ` is the same truncated
/// sup over the factors `G_j` of the root node (the children, and `r cos θ`
/// when the node has a `(1 - r cos θ)` power).
#[derive(Clone, Debug, PartialEq)]
pub struct InductiveBound {
    pub sup_f: Float,
    pub gamma_hat: Float,
    pub bound: Float,
}

impl InductiveBound {
    pub fn holds(&self) -> bool {
        self.sup_f <= self.bound
    }
}

pub fn inductive_bound(m: &MajorantNode, beta: &Float, d: usize, kmax: usize, prec: u32) -> Result<InductiveBound> {
    let f = m.theta_series(beta, kmax, prec)?;
    let sup_f = root_sup(&f, kmax);
    let mut gamma_hat = Float::new(prec);
    for s in m.child_series(beta, kmax, prec)? {
        let v = root_sup(&s, kmax);
        if v > gamma_hat {
            gamma_hat = v;
        }
    }
    if m.power > 0 {
        let cos_factor = FloatSeries::cos(kmax, prec).scale(&Float::with_val(prec, beta));
        let v = root_sup(&cos_factor, kmax);
        if v > gamma_hat {
            gamma_hat = v;
        }
    }
    let bound = Float::with_val(prec, 2 * d as u32) * &gamma_hat / Float::with_val(prec, beta);
    Ok(InductiveBound { sup_f, gamma_hat, bound })
}

/// `1 - (βθ)²/4 - F_β(θ)`: nonnegative exactly when the parabola bound holds.
pub fn parabola_margin(m: &MajorantNode, beta: &Float, theta: &Float) -> Result<Float> {
    let prec = beta.prec().max(theta.prec());
    let f = m.eval(beta, theta)?;
    let bt = Float::with_val(prec, beta * theta);
    let q = Float::with_val(prec, bt.square_ref()) / 4u32;
    Ok(Float::with_val(prec, 1) - q - f)
}
