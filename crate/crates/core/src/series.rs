//! Truncated power series: exact integer series at the origin and
//! multiprecision real series for Taylor expansions.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indpoly::IntPoly;

/// Power series with exact integer coefficients, truncated at `z^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<Integer>,
}

impl IntSeries {
    /// Series of `p` truncated (or zero-padded) to order `k`.
    pub fn from_poly(p: &IntPoly, k: usize) -> Self {
        IntSeries { coeffs: (0..=k).map(|i| p.coeff(i)).collect() }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        IntSeries { coeffs: coeffs.iter().map(|&c| Integer::from(c)).collect() }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesJson {
            coeffs: self.coeffs.iter().map(Integer::to_string).collect(),
            order: self.order(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: SeriesJson = serde_json::from_value(v.clone())?;
        if j.coeffs.len() != j.order + 1 {
            return Err(Error::Json(format!("order {} but {} coefficients", j.order, j.coeffs.len())));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|e| Error::Json(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntSeries { coeffs })
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    coeffs: Vec<String>,
    order: usize,
}

fn require_unit_constant(p: &IntPoly) -> Result<()> {
    if p.coeff(0) != 1 {
        return Err(Error::ConstantTerm(p.coeff(0).to_string()));
    }
    Ok(())
}

/// `1/p mod z^(K+1)`; requires `p(0) = 1`.
pub fn series_inverse(p: &IntPoly, k: usize) -> Result<IntSeries> {
    series_div(&IntPoly::one(), p, k)
}

/// `a/b mod z^(K+1)`; requires `b(0) = 1`.
pub fn series_div(a: &IntPoly, b: &IntPoly, k: usize) -> Result<IntSeries> {
    require_unit_constant(b)?;
    let bc = b.coeffs();
    let mut q: Vec<Integer> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let mut c = a.coeff(m);
        for i in 1..=m.min(bc.len().saturating_sub(1)) {
            c -= Integer::from(&bc[i] * &q[m - i]);
        }
        q.push(c);
    }
    Ok(IntSeries { coeffs: q })
}

/// Product truncated at order `K`.
pub fn series_mul(s: &IntSeries, t: &IntSeries, k: usize) -> IntSeries {
    let mut out = vec![Integer::new(); k + 1];
    for (i, a) in s.coeffs.iter().enumerate().take(k + 1) {
        for (j, b) in t.coeffs.iter().enumerate().take(k + 1 - i) {
            out[i + j] += Integer::from(a * b);
        }
    }
    IntSeries { coeffs: out }
}

/// Coefficients of `p(z + c)`, i.e. `p^(k)(c)/k!`, exactly.
pub fn taylor_shift(p: &IntPoly, c: &Rational) -> Vec<Rational> {
    let mut t: Vec<Rational> = p.coeffs().iter().map(Rational::from).collect();
    let d = t.len();
    // Repeated synthetic division by (z - c).
    for i in 0..d {
        for j in (i..d - 1).rev() {
            let add = Rational::from(c * &t[j + 1]);
            t[j] += add;
        }
    }
    t
}

/// Coefficients of `p(z + c)` in floating point at the precision of `c`.
pub fn taylor_shift_float(p: &IntPoly, c: &Float) -> Vec<Float> {
    let prec = c.prec();
    let mut t: Vec<Float> = p.coeffs().iter().map(|a| Float::with_val(prec, a)).collect();
    let d = t.len();
    for i in 0..d {
        for j in (i..d - 1).rev() {
            let add = Float::with_val(prec, c * &t[j + 1]);
            t[j] += add;
        }
    }
    t
}

/// Power series with multiprecision real coefficients, truncated at order `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSeries {
    coeffs: Vec<Float>,
    precision: u32,
}

impl FloatSeries {
    pub fn new(coeffs: Vec<Float>, precision: u32) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        let coeffs = coeffs.into_iter().map(|c| Float::with_val(precision, c)).collect();
        FloatSeries { coeffs, precision }
    }

    pub fn from_f64(coeffs: &[f64], precision: u32) -> Self {
        Self::new(coeffs.iter().map(|&c| Float::with_val(precision, c)).collect(), precision)
    }

    pub fn zeros(k: usize, precision: u32) -> Self {
        FloatSeries { coeffs: vec![Float::new(precision); k + 1], precision }
    }

    pub fn constant(c: &Float, k: usize, precision: u32) -> Self {
        let mut s = Self::zeros(k, precision);
        s.coeffs[0] = Float::with_val(precision, c);
        s
    }

    /// The series `x`.
    pub fn identity(k: usize, precision: u32) -> Self {
        let mut s = Self::zeros(k, precision);
        if k >= 1 {
            s.coeffs[1] = Float::with_val(precision, 1);
        }
        s
    }

    /// `1/(1 - x)`.
    pub fn geometric(k: usize, precision: u32) -> Self {
        FloatSeries { coeffs: vec![Float::with_val(precision, 1); k + 1], precision }
    }

    /// `cos θ` in powers of `θ`.
    pub fn cos(k: usize, precision: u32) -> Self {
        let mut s = Self::zeros(k, precision);
        let mut term = Float::with_val(precision, 1);
        for m in (0..=k).step_by(2) {
            s.coeffs[m] = term.clone();
            let next = ((m + 1) * (m + 2)) as u32;
            term = -term / next;
        }
        s
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Float {
        &self.coeffs[i]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn add(&self, o: &FloatSeries) -> FloatSeries {
        self.zip(o, |a, b| Float::with_val(self.precision, a + b))
    }

    pub fn sub(&self, o: &FloatSeries) -> FloatSeries {
        self.zip(o, |a, b| Float::with_val(self.precision, a - b))
    }

    fn zip(&self, o: &FloatSeries, f: impl Fn(&Float, &Float) -> Float) -> FloatSeries {
        let k = self.order().min(o.order());
        let coeffs = (0..=k).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect();
        FloatSeries { coeffs, precision: self.precision }
    }

    pub fn scale(&self, c: &Float) -> FloatSeries {
        let coeffs = self.coeffs.iter().map(|a| Float::with_val(self.precision, a * c)).collect();
        FloatSeries { coeffs, precision: self.precision }
    }

    /// `c - self`.
    pub fn rsub_scalar(&self, c: &Float) -> FloatSeries {
        let mut out = self.scale(&Float::with_val(self.precision, -1));
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, o: &FloatSeries) -> FloatSeries {
        let k = self.order().min(o.order());
        let mut out = vec![Float::new(self.precision); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=k - i {
                out[i + j] += Float::with_val(self.precision, &self.coeffs[i] * &o.coeffs[j]);
            }
        }
        FloatSeries { coeffs: out, precision: self.precision }
    }

    pub fn reciprocal(&self) -> Result<FloatSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstant);
        }
        let k = self.order();
        let mut q: Vec<Float> = Vec::with_capacity(k + 1);
        q.push(Float::with_val(self.precision, 1) / a0);
        for m in 1..=k {
            let mut s = Float::new(self.precision);
            for i in 1..=m {
                s += Float::with_val(self.precision, &self.coeffs[i] * &q[m - i]);
            }
            q.push(-s / a0);
        }
        Ok(FloatSeries { coeffs: q, precision: self.precision })
    }

    pub fn div(&self, o: &FloatSeries) -> Result<FloatSeries> {
        Ok(self.mul(&o.reciprocal()?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.coeffs.iter().map(|c| c.to_string_radix(10, None)).collect::<Vec<_>>(),
            "order": self.order(),
            "precision": self.precision,
        })
    }
}

/// `outer(inner(x))` truncated at `K`; requires `inner(0) = 0`.
pub fn float_compose(outer: &FloatSeries, inner: &FloatSeries, k: usize) -> Result<FloatSeries> {
    if !inner.coeffs[0].is_zero() {
        return Err(Error::NonzeroInnerConstant);
    }
    let prec = outer.precision.max(inner.precision);
    let inner = truncate(inner, k, prec);
    let top = outer.order().min(k);
    let mut acc = FloatSeries::constant(&outer.coeffs[top], k, prec);
    for i in (0..top).rev() {
        acc = acc.mul(&inner);
        acc.coeffs[0] += &outer.coeffs[i];
    }
    Ok(acc)
}

pub fn float_mul(a: &FloatSeries, b: &FloatSeries) -> FloatSeries {
    a.mul(b)
}

pub fn float_reciprocal(a: &FloatSeries) -> Result<FloatSeries> {
    a.reciprocal()
}

fn truncate(s: &FloatSeries, k: usize, prec: u32) -> FloatSeries {
    let coeffs = (0..=k)
        .map(|i| s.coeffs.get(i).map_or_else(|| Float::new(prec), |c| Float::with_val(prec, c)))
        .collect();
    FloatSeries { coeffs, precision: prec }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_graphs, make_path};
    use crate::indpoly::independence_poly;

    fn ints(s: &IntSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn inverses() {
        assert_eq!(ints(&series_inverse(&IntPoly::from_i64(&[1, -1]), 4).unwrap()), [1, 1, 1, 1, 1]);
        assert_eq!(ints(&series_inverse(&IntPoly::from_i64(&[1, -2]), 4).unwrap()), [1, 2, 4, 8, 16]);
        let p3 = independence_poly(&make_path(3).unwrap());
        assert_eq!(ints(&series_inverse(&p3, 4).unwrap()), [1, 3, 8, 21, 55]);
        assert!(matches!(series_inverse(&IntPoly::from_i64(&[2, 1]), 3), Err(Error::ConstantTerm(_))));
    }

    #[test]
    fn quotients_and_products() {
        let z = IntPoly::from_i64(&[0, 1]);
        assert_eq!(ints(&series_div(&z, &IntPoly::from_i64(&[1, -1]), 3).unwrap()), [0, 1, 1, 1]);
        let p2 = independence_poly(&make_path(2).unwrap());
        let p3 = independence_poly(&make_path(3).unwrap());
        assert_eq!(ints(&series_div(&p2, &p3, 3).unwrap()), [1, 1, 2, 5]);
        let s = IntSeries::from_i64(&[3, -1, 4, 1]);
        assert_eq!(series_mul(&s, &IntSeries::from_i64(&[1, 0, 0, 0]), 3), s);
    }

    #[test]
    fn inverse_times_poly_is_one() {
        for g in connected_graphs(6) {
            let p = independence_poly(&g);
            let inv = series_inverse(&p, 12).unwrap();
            let prod = series_mul(&IntSeries::from_poly(&p, 12), &inv, 12);
            assert_eq!(ints(&prod)[0], 1);
            assert!(ints(&prod)[1..].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn shifts() {
        let q = |a: i64, b: i64| Rational::from((a, b));
        let t = taylor_shift(&IntPoly::from_i64(&[1, -1]), &q(1, 1));
        assert_eq!(t, vec![q(0, 1), q(-1, 1)]);
        let p3 = IntPoly::from_i64(&[1, -3, 1]);
        assert_eq!(taylor_shift(&p3, &q(1, 3)), vec![q(1, 9), q(-7, 3), q(1, 1)]);
        assert_eq!(taylor_shift(&p3, &Rational::new()), vec![q(1, 1), q(-3, 1), q(1, 1)]);
        let c = q(2, 7);
        assert_eq!(taylor_shift(&p3, &c)[0], p3.eval_exact(&c));
        let f = taylor_shift_float(&p3, &Float::with_val(128, &c));
        assert!((f[1].to_f64() - (-3.0 + 4.0 / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn float_series_basics() {
        let prec = 128;
        let c = FloatSeries::cos(4, prec);
        let expect = [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0];
        for (a, b) in c.coeffs().iter().zip(expect) {
            assert!((a.to_f64() - b).abs() < 1e-30);
        }
        let g = float_compose(&FloatSeries::geometric(6, prec), &FloatSeries::identity(6, prec), 6).unwrap();
        assert!(g.coeffs().iter().all(|x| *x == 1));
        let r = FloatSeries::from_f64(&[2.0, 0.0, 0.0], prec).reciprocal().unwrap();
        assert_eq!(r.coeff(0).to_f64(), 0.5);
        assert!(r.coeff(1).is_zero() && r.coeff(2).is_zero());
        assert!(float_compose(&c, &c, 4).is_err());
        assert!(FloatSeries::zeros(3, prec).reciprocal().is_err());
    }

    #[test]
    fn compose_matches_direct_product() {
        // 1/(1-x) composed with 2x is Σ 2^k x^k.
        let prec = 128;
        let two_x = FloatSeries::identity(8, prec).scale(&Float::with_val(prec, 2));
        let s = float_compose(&FloatSeries::geometric(8, prec), &two_x, 8).unwrap();
        for (k, c) in s.coeffs().iter().enumerate() {
            assert_eq!(c.to_f64(), 2f64.powi(k as i32));
        }
    }

    #[test]
    fn series_json() {
        let s = IntSeries::from_i64(&[1, 3, 8]);
        let v = s.to_json();
        assert_eq!(v["order"], 2);
        assert_eq!(IntSeries::from_json(&v).unwrap(), s);
    }
}
