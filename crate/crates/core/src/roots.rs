//! Exact bracketing of the smallest root β(G) and full numeric root sets.
//!
//! The bracket uses a Sturm sequence over the integers and exact rational
//! sign tests only. Root sets come from Aberth iteration, first in `f64` and
//! then polished in MPFR arithmetic.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::float::Special;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphError};
use crate::indpoly::{independence_poly, IntPoly};
use crate::num::Cplx;

/// `λ_S(d) = (d-1)^(d-1) / d^d`, for `d >= 1`.
pub fn shearer_bound(d: usize) -> Rational {
    assert!(d >= 1, "Shearer bound needs d >= 1");
    let num = Integer::from(d - 1).pow((d - 1) as u32);
    let den = Integer::from(d).pow(d as u32);
    Rational::from((num, den))
}

/// Sturm sequence `p, p', -rem(p, p'), ..` kept content-reduced; dividing
/// by a positive content never changes a sign.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Sturm {
        let mut seq = vec![p.content_reduced()];
        let d = p.derivative(1);
        if !d.is_zero() {
            seq.push(d.content_reduced());
        }
        while seq.len() >= 2 {
            let k = seq.len();
            if seq[k - 1].degree() == Some(0) {
                break;
            }
            let r = seq[k - 2].signed_pseudo_rem(&seq[k - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r.content_reduced());
        }
        Sturm { seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for s in self.seq.iter().map(|p| p.sign_at(x)) {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct real roots in `(a, b]`, for `a < b` with `p(a) != 0`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Rational bracket `lo < β <= hi` with `I(lo) > 0` and `I(hi) < 0`, or
/// `hi = β` exactly when `exact` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaEnclosure {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: bool,
}

impl BetaEnclosure {
    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    /// Largest rational known to be `<= β`: the root itself when exact.
    pub fn lower(&self) -> &Rational {
        if self.exact {
            &self.hi
        } else {
            &self.lo
        }
    }

    /// Best rational estimate: the root itself when known, else the midpoint.
    pub fn point(&self) -> Rational {
        if self.exact {
            self.hi.clone()
        } else {
            self.midpoint()
        }
    }

    /// `β` to `prec` bits by safeguarded Newton inside the bracket.
    pub fn refine(&self, p: &IntPoly, prec: u32) -> Float {
        if self.exact {
            return Float::with_val(prec, &self.hi);
        }
        let dp = p.derivative(1);
        let mut a = Float::with_val(prec, &self.lo);
        let mut b = Float::with_val(prec, &self.hi);
        let mut x = Float::with_val(prec, self.midpoint());
        let eps = Float::with_val(prec, Float::i_exp(1, 4 - prec as i32));
        for _ in 0..4 * prec {
            let fx = p.eval_float(&x);
            if fx.is_zero() {
                return x;
            }
            if fx > 0 {
                a.clone_from(&x);
            } else {
                b.clone_from(&x);
            }
            let step = Float::with_val(prec, &fx / &dp.eval_float(&x));
            let mut next = Float::with_val(prec, &x - &step);
            if !(next > a && next < b) {
                next = Float::with_val(prec, &a + &b) / 2u32;
            }
            let moved = Float::with_val(prec, &next - &x).abs();
            x = next;
            if moved <= Float::with_val(prec, &eps * &x) {
                break;
            }
        }
        x
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lo": self.lo.to_string(),
            "hi": self.hi.to_string(),
            "exact": self.exact,
            "lo_approx": self.lo.to_f64(),
            "hi_approx": self.hi.to_f64(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(|x| x.as_str())
                .and_then(crate::num::parse_rational)
                .ok_or_else(|| Error::Json(format!("beta enclosure: bad or missing {k:?}")))
        };
        let exact = v.get("exact").and_then(|x| x.as_bool()).unwrap_or(false);
        Ok(BetaEnclosure { lo: field("lo")?, hi: field("hi")?, exact })
    }
}

/// Encloses `β(G)` in a rational interval of width `<= tol`.
pub fn beta_bracket(g: &Graph, tol: &Rational) -> Result<BetaEnclosure> {
    if g.n() == 0 {
        return Err(Error::InvalidArgument("beta_bracket needs n >= 1".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    if *tol <= 0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    beta_bracket_poly(&independence_poly(g), g.n(), g.max_degree(), tol)
}

/// Bracket for a polynomial with `p(0) = 1`, known to be an independence
/// polynomial of a connected graph on `n` vertices with maximum degree `d`.
pub fn beta_bracket_poly(p: &IntPoly, n: usize, d: usize, tol: &Rational) -> Result<BetaEnclosure> {
    if p.coeff(0) != 1 || p.degree().unwrap_or(0) == 0 {
        return Err(Error::BetaNotFound);
    }
    let sturm = Sturm::new(p);
    let zero = Rational::new();
    let one = Rational::from(1);
    if sturm.count(&zero, &one) == 0 {
        return Err(Error::BetaNotFound);
    }
    let mut lo = Rational::from((1, n as u32));
    if d >= 2 {
        lo = lo.max(shearer_bound(d));
    }
    if lo >= one || sturm.count(&zero, &lo) != 0 {
        lo = zero.clone();
    }

    // Rational roots of p have the form 1/q with q | lc(p), and here
    // β >= 1/n, so q <= n.
    let lc = Integer::from(p.leading().unwrap().abs_ref());
    for q in (1..=n as u32).rev() {
        if !lc.is_divisible_u(q) {
            continue;
        }
        let r = Rational::from((1, q));
        if r <= lo || p.sign_at(&r) != Ordering::Equal {
            continue;
        }
        if sturm.count(&zero, &r) == 1 {
            let cand = Rational::from(&r - tol);
            let half = Rational::from(&r / 2u32);
            let lo = cand.max(half).max(lo);
            return verified(p, BetaEnclosure { lo, hi: r, exact: true });
        }
    }

    let mut hi = one;
    loop {
        let wide = Rational::from(&hi - &lo) > *tol;
        if !wide && lo > 0 && sturm.count(&lo, &hi) == 1 && p.sign_at(&hi) != Ordering::Equal {
            break;
        }
        let mid = Rational::from(&lo + &hi) / 2u32;
        if sturm.count(&zero, &mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    verified(p, BetaEnclosure { lo, hi, exact: false })
}

fn verified(p: &IntPoly, e: BetaEnclosure) -> Result<BetaEnclosure> {
    let at_lo = p.eval_exact(&e.lo);
    let at_hi = p.eval_exact(&e.hi);
    let ok = e.lo > 0 && e.lo < e.hi && e.hi <= 1 && at_lo > 0 && if e.exact { at_hi == 0 } else { at_hi < 0 };
    if ok {
        Ok(e)
    } else {
        Err(Error::BetaNotFound)
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub z: Cplx,
    /// `|p(z)|` on the input polynomial.
    pub residual: Float,
    /// Multiplicity of the square-free factor the root came from.
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub precision: u32,
    /// Root-radius bound the iteration started from.
    pub bound: f64,
    /// Index pairs closer than `1e-10 * bound`.
    pub clusters: Vec<(usize, usize)>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> Float {
        let mut m = Float::new(self.precision);
        for r in &self.roots {
            if r.residual > m {
                m.clone_from(&r.residual);
            }
        }
        m
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.z.to_c64()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let roots: Vec<_> = self
            .roots
            .iter()
            .map(|r| {
                json!({
                    "re": r.z.re.to_f64(),
                    "im": r.z.im.to_f64(),
                    "residual": r.residual.to_f64(),
                    "multiplicity": r.multiplicity,
                })
            })
            .collect();
        json!({ "roots": roots, "precision": self.precision, "clusters": self.clusters })
    }
}

/// Fujiwara's bound `2 max(|a_{m-1}/a_m|, .., |a_{m-k}/a_m|^(1/k), .., |a_0/2a_m|^(1/m))`
/// on the root moduli.
pub fn root_bound(p: &IntPoly) -> f64 {
    let m = p.degree().unwrap_or(0);
    let c = p.to_f64_coeffs();
    let lead = c[m].abs();
    let term = |k: usize| {
        let ratio = c[m - k].abs() / lead;
        let ratio = if k == m { ratio / 2.0 } else { ratio };
        ratio.powf(1.0 / k as f64)
    };
    2.0 * (1..=m).map(term).fold(0.0, f64::max)
}

const F64_ITERATIONS: usize = 2000;
const HP_ITERATIONS: usize = 400;

/// Every complex root of `p` (with multiplicity), polished to `prec` bits.
pub fn all_roots(p: &IntPoly, prec: u32) -> Result<RootSet> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidArgument("all_roots needs degree >= 1".into())),
    };
    let bound = root_bound(p);
    let mut roots = Vec::with_capacity(degree);
    for (i, f) in p.squarefree_factors().iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        for z in squarefree_roots(f, prec)? {
            for _ in 0..=i {
                let residual = p.eval_complex(&z, prec).abs();
                roots.push(Root { z: z.clone(), residual, multiplicity: i + 1 });
            }
        }
    }
    roots.sort_by(|a, b| {
        let (x, y) = (a.z.to_c64(), b.z.to_c64());
        x.norm().total_cmp(&y.norm()).then(x.re.total_cmp(&y.re)).then(x.im.total_cmp(&y.im))
    });
    let radius = 1e-10 * bound;
    let mut clusters = Vec::new();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].z.sub(&roots[j].z).abs() < radius {
                clusters.push((i, j));
            }
        }
    }
    debug_assert_eq!(roots.len(), degree);
    Ok(RootSet { roots, precision: prec, bound, clusters })
}

fn squarefree_roots(f: &IntPoly, prec: u32) -> Result<Vec<Cplx>> {
    let m = f.degree().unwrap();
    if m == 1 {
        let x = Float::with_val(prec, -Rational::from((f.coeff(0), f.coeff(1))));
        return Ok(vec![Cplx::real(x)]);
    }
    let start = aberth_f64(f);
    aberth_hp(f, &start, prec)
}

fn initial_circle(m: usize, radius: f64) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64 + 0.4))
        .collect()
}

fn aberth_f64(f: &IntPoly) -> Vec<Complex64> {
    let m = f.degree().unwrap();
    let c = f.to_f64_coeffs();
    let dc: Vec<f64> = (1..=m).map(|k| c[k] * k as f64).collect();
    let horner = |cs: &[f64], z: Complex64| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let bound = root_bound(f);
    let mut z = initial_circle(m, bound);
    for _ in 0..F64_ITERATIONS {
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let ratio = horner(&c, z[k]) / horner(&dc, z[k]);
            let s: Complex64 = (0..m).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if !w.is_finite() {
                return initial_circle(m, bound);
            }
            z[k] -= w;
            worst = worst.max(w.norm() / z[k].norm().max(1.0));
        }
        if worst < 1e-13 {
            break;
        }
    }
    if z.iter().all(|w| w.is_finite()) {
        z
    } else {
        initial_circle(m, bound)
    }
}

fn aberth_hp(f: &IntPoly, start: &[Complex64], prec: u32) -> Result<Vec<Cplx>> {
    let m = start.len();
    let mut z: Vec<Cplx> = start.iter().map(|&w| Cplx::from_c64(prec, w)).collect();
    let tol = Float::with_val(prec, 10).pow(-((prec / 4) as i32));
    let one = Cplx::one(prec);
    let mut correction = f64::INFINITY;
    for _ in 0..HP_ITERATIONS {
        let mut done = true;
        let mut worst = Float::with_val(prec, 0);
        for k in 0..m {
            let (pv, dv) = f.eval_complex_with_derivative(&z[k]);
            if pv.is_zero() {
                continue;
            }
            let Some(ratio) = pv.div(&dv) else {
                // Sitting on a critical point: nudge and retry next sweep.
                z[k] = z[k].add(&Cplx::from_f64(prec, 1e-8, 1e-8));
                done = false;
                continue;
            };
            let mut s = Cplx::zero(prec);
            for j in 0..m {
                if j != k {
                    if let Some(r) = z[k].sub(&z[j]).recip() {
                        s = s.add(&r);
                    }
                }
            }
            let w = one.sub(&ratio.mul(&s)).recip().map_or(ratio.clone(), |d| ratio.mul(&d));
            z[k] = z[k].sub(&w);
            let scale = Float::with_val(prec, z[k].abs()).max(&Float::with_val(prec, 1));
            let rel = Float::with_val(prec, w.abs() / &scale);
            if rel >= tol {
                done = false;
            }
            if rel > worst {
                worst = rel;
            }
        }
        correction = worst.to_f64();
        if done {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence { iterations: HP_ITERATIONS, correction })
}

/// Matches `β` inside the enclosure, with slack `2^-(prec/2)`, and returns
/// the smallest modulus among the others (`+∞` when there are none).
pub fn second_smallest_modulus(rs: &RootSet, beta: &BetaEnclosure) -> Result<Float> {
    let prec = rs.precision;
    let slack = Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)));
    let lo = Float::with_val(prec, &beta.lo) - &slack;
    let hi = Float::with_val(prec, &beta.hi) + &slack;
    let mut matched = Vec::new();
    for (i, r) in rs.roots.iter().enumerate() {
        if r.z.re >= lo && r.z.re <= hi && Float::with_val(prec, r.z.im.abs_ref()) <= slack {
            matched.push(i);
        }
    }
    match matched.len() {
        0 => return Err(Error::BetaNotFound),
        1 => {}
        k => return Err(Error::BetaMultiple(k)),
    }
    let mut best = Float::with_val(prec, Special::Infinity);
    for (i, r) in rs.roots.iter().enumerate() {
        if i != matched[0] {
            let a = r.z.abs();
            if a < best {
                best = a;
            }
        }
    }
    Ok(best)
}

/// `second_smallest_modulus - midpoint(β)`; `+∞` for `K_1`.
pub fn empirical_gap(g: &Graph, prec: u32) -> Result<Float> {
    let tol = Rational::from((1, 1u64 << 40));
    let e = beta_bracket(g, &tol)?;
    let rs = all_roots(&independence_poly(g), prec)?;
    let alpha = second_smallest_modulus(&rs, &e)?;
    Ok(alpha - Float::with_val(prec, e.midpoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_graphs, make_complete_bipartite, make_cycle, make_path, make_star};

    fn tol12() -> Rational {
        Rational::from((1, 1_000_000_000_000u64))
    }

    fn root_f64s(p: &IntPoly) -> Vec<Complex64> {
        all_roots(p, 256).unwrap().to_c64()
    }

    #[test]
    fn shearer_values() {
        assert_eq!(shearer_bound(1), 1);
        assert_eq!(shearer_bound(2), Rational::from((1, 4)));
        assert_eq!(shearer_bound(3), Rational::from((4, 27)));
    }

    #[test]
    fn sturm_counts_roots() {
        // (1 - z)(1 - 2z)(1 - 3z) = 1 - 6z + 11z^2 - 6z^3
        let p = IntPoly::from_i64(&[1, -6, 11, -6]);
        let s = Sturm::new(&p);
        let q = |a: i64, b: i64| Rational::from((a, b));
        assert_eq!(s.count(&q(0, 1), &q(2, 1)), 3);
        assert_eq!(s.count(&q(0, 1), &q(1, 3)), 1);
        assert_eq!(s.count(&q(0, 1), &q(1, 4)), 0);
        assert_eq!(s.count(&q(0, 1), &q(1, 2)), 2);
    }

    #[test]
    fn exact_rational_betas() {
        let k1 = Graph::empty(1).unwrap();
        let e = beta_bracket(&k1, &tol12()).unwrap();
        assert!(e.exact);
        assert_eq!(e.hi, 1);
        let e = beta_bracket(&make_path(2).unwrap(), &tol12()).unwrap();
        assert!(e.exact);
        assert_eq!(e.hi, Rational::from((1, 2)));
        let e = beta_bracket(&make_path(4).unwrap(), &tol12()).unwrap();
        assert!(e.exact);
        assert_eq!(e.hi, Rational::from((1, 3)));
        assert!(e.width() <= tol12());
    }

    #[test]
    fn star_beta() {
        let e = beta_bracket(&make_star(3).unwrap(), &tol12()).unwrap();
        assert!(!e.exact);
        assert!(e.width() <= tol12());
        let mid = e.midpoint().to_f64();
        assert!((mid - 0.3177).abs() < 1e-4, "{mid}");
    }

    #[test]
    fn brackets_on_all_small_graphs() {
        for n in 1..=6 {
            for g in connected_graphs(n) {
                let p = independence_poly(&g);
                let e = beta_bracket(&g, &tol12()).unwrap();
                assert!(e.lo > 0 && e.hi <= 1 && e.width() <= tol12());
                let s = Sturm::new(&p);
                assert_eq!(s.count(&Rational::new(), &e.lo), 0);
                assert_eq!(s.count(&e.lo, &e.hi), 1);
            }
        }
    }

    #[test]
    fn refine_matches_quadratic_root() {
        // P_3: 1 - 3z + z^2, β = (3 - √5)/2.
        let g = make_path(3).unwrap();
        let p = independence_poly(&g);
        let e = beta_bracket(&g, &tol12()).unwrap();
        let b = e.refine(&p, 256);
        let five = Float::with_val(256, 5);
        let want = (Float::with_val(256, 3) - five.sqrt()) / 2u32;
        assert!(Float::with_val(256, &b - &want).abs() < 1e-70);
    }

    #[test]
    fn quadratic_root_sets() {
        let r = root_f64s(&IntPoly::from_i64(&[1, -4, 3]));
        assert!((r[0] - 1.0 / 3.0).norm() < 1e-15 && (r[1] - 1.0).norm() < 1e-15);
        let r = root_f64s(&IntPoly::from_i64(&[1, -4, 2]));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - (1.0 - s)).norm() < 1e-15 && (r[1] - (1.0 + s)).norm() < 1e-15);
    }

    #[test]
    fn bipartite_roots_on_circle() {
        for n in 2..=6 {
            let g = make_complete_bipartite(n, n).unwrap();
            let rs = all_roots(&independence_poly(&g), 256).unwrap();
            assert_eq!(rs.len(), n);
            let rad = 2f64.powf(-1.0 / n as f64);
            for z in rs.to_c64() {
                assert!(((1.0 - z).norm() - rad).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn repeated_roots_are_flagged() {
        // (1 - z)^3 (1 - 2z)
        let p = IntPoly::one_minus_z().mul(&IntPoly::one_minus_z()).mul(&IntPoly::one_minus_z()).mul(&IntPoly::from_i64(&[1, -2]));
        let rs = all_roots(&p, 256).unwrap();
        assert_eq!(rs.len(), 4);
        assert_eq!(rs.clusters.len(), 3);
        assert!(rs.max_residual() < 1e-60);
        assert_eq!(rs.roots.iter().filter(|r| r.multiplicity == 3).count(), 3);
    }

    #[test]
    fn residuals_are_small() {
        for g in [make_path(20).unwrap(), make_cycle(20).unwrap(), make_star(12).unwrap()] {
            let rs = all_roots(&independence_poly(&g), 256).unwrap();
            assert!(rs.max_residual() < 1e-25, "{:?}", g.label());
        }
    }

    #[test]
    fn second_modulus_and_gap() {
        let p4 = make_path(4).unwrap();
        let e = beta_bracket(&p4, &tol12()).unwrap();
        let rs = all_roots(&independence_poly(&p4), 256).unwrap();
        let a = second_smallest_modulus(&rs, &e).unwrap();
        assert!(Float::with_val(256, &a - 1u32).abs() < 1e-60);

        let c4 = make_cycle(4).unwrap();
        let e = beta_bracket(&c4, &tol12()).unwrap();
        let rs = all_roots(&independence_poly(&c4), 256).unwrap();
        let a = second_smallest_modulus(&rs, &e).unwrap().to_f64();
        assert!((a - (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);

        let gap = empirical_gap(&make_path(3).unwrap(), 256).unwrap().to_f64();
        assert!((gap - 5f64.sqrt()).abs() < 1e-11);
        assert!(empirical_gap(&Graph::empty(1).unwrap(), 256).unwrap().is_infinite());
        assert!(empirical_gap(&make_star(3).unwrap(), 256).unwrap() > 0);
    }

    #[test]
    fn missing_beta_is_an_error() {
        let p4 = make_path(4).unwrap();
        let rs = all_roots(&independence_poly(&p4), 256).unwrap();
        let wrong = BetaEnclosure { lo: Rational::from((1, 2)), hi: Rational::from((3, 5)), exact: false };
        assert!(matches!(second_smallest_modulus(&rs, &wrong), Err(Error::BetaNotFound)));
    }
}
