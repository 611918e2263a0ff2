use std::fmt;

use num_complex::Complex64;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Cplx;

/// Univariate polynomial with exact integer coefficients; `coeffs[k]` is the
/// coefficient of `z^k`. Trailing zeros are always trimmed, so the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `1 - z`.
    pub fn one_minus_z() -> Self {
        Self::from_i64(&[1, -1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &Integer) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    /// `z^k · self`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![Integer::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect() }
    }

    /// `k`-th formal derivative.
    pub fn derivative(&self, k: usize) -> IntPoly {
        if k == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= k {
            return IntPoly::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                let falling: Integer = ((i - k + 1)..=i).fold(Integer::from(1), |acc, t| acc * t as u64);
                falling * &self.coeffs[i]
            })
            .collect();
        IntPoly::new(coeffs)
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c))
    }

    /// Divides out the (positive) content, keeping signs.
    pub fn content_reduced(&self) -> IntPoly {
        let c = self.content();
        if c == 0 {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| Integer::from(a.div_exact_ref(&c))).collect() }
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        let c = self.content();
        if c == 0 {
            return IntPoly::zero();
        }
        let sign_neg = self.leading().is_some_and(|l| *l < 0);
        let mut coeffs: Vec<Integer> = self.coeffs.iter().map(|a| Integer::from(a.div_exact_ref(&c))).collect();
        if sign_neg {
            for a in &mut coeffs {
                *a = Integer::from(-&*a);
            }
        }
        IntPoly { coeffs }
    }

    /// Remainder of `self` by `d` after multiplying `self` by
    /// `|lc(d)|^(deg self - deg d + 1)`, so the sign of the remainder is the
    /// sign of the true rational remainder.
    pub fn signed_pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.leading().unwrap().clone();
        let lc_abs = Integer::from(lc.abs_ref());
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            // r <- |lc| r - sign(lc) lr z^(rd-dd) d
            let lr = r.leading().unwrap().clone();
            let factor = if lc < 0 { Integer::from(-&lr) } else { lr };
            r = r.scale(&lc_abs).sub(&d.shift(rd - dd).scale(&factor));
        }
        r
    }

    /// Exact quotient over the rationals. Returns `None` if `d` does not
    /// divide `self` or the quotient has non-integer coefficients.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let lc = d.leading().unwrap();
        let mut r: Vec<Integer> = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return self.is_zero().then(IntPoly::zero);
        }
        let mut q = vec![Integer::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if !top.is_divisible(lc) {
                return None;
            }
            let c = Integer::from(top.div_exact_ref(lc));
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] -= Integer::from(&c * di);
            }
            q[k] = c;
        }
        r.iter().all(|c| *c == 0).then(|| IntPoly::new(q))
    }

    /// Gcd over the rationals, returned primitive with positive leading
    /// coefficient.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Square-free decomposition: primitive factors `a_1, a_2, ...` with
    /// `self = c · a_1 · a_2^2 · a_3^3 ...`, each square-free and pairwise
    /// coprime. Entry `i` has multiplicity `i + 1`; it may be constant when no
    /// factor has that multiplicity.
    pub fn squarefree_factors(&self) -> Vec<IntPoly> {
        // g_i = gcd(g_{i-1}, g_{i-1}') holds every factor of multiplicity
        // > i with its multiplicity reduced by i; h_i = g_{i-1}/g_i is the
        // product of the factors of multiplicity >= i.
        let mut g = vec![self.primitive()];
        while g.last().unwrap().degree().is_some_and(|d| d > 0) {
            let last = g.last().unwrap();
            g.push(last.gcd(&last.derivative(1)));
        }
        let h: Vec<IntPoly> = g.windows(2).map(|w| w[0].quotient(&w[1])).collect();
        (0..h.len())
            .map(|i| match h.get(i + 1) {
                Some(next) => h[i].quotient(next),
                None => h[i].clone(),
            })
            .collect()
    }

    /// The primitive quotient `self / d` over the rationals. Panics if `d`
    /// does not divide `self`.
    pub fn quotient(&self, d: &IntPoly) -> IntPoly {
        self.primitive().div_exact(&d.primitive()).expect("divisor must divide").primitive()
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_exact(&self, q: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= q;
            acc += c;
        }
        acc
    }

    /// Sign of `self(p/q)` for `q > 0`, computed with integers only.
    pub fn sign_at(&self, q: &Rational) -> std::cmp::Ordering {
        let (num, den) = (q.numer(), q.denom());
        let mut acc = Integer::new();
        let mut dpow = Integer::from(1);
        // acc = Σ c_k num^k den^(deg-k), a positive multiple of self(q).
        for c in self.coeffs.iter().rev() {
            acc *= num;
            acc += Integer::from(c * &dpow);
            dpow *= den;
        }
        acc.cmp0()
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at a complex point with `prec` bits.
    pub fn eval_complex(&self, z: &Cplx, prec: u32) -> Cplx {
        let z = Cplx::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im));
        let mut acc = Cplx::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&z);
            acc.re += c;
        }
        acc
    }

    /// Value and first derivative at `z`.
    pub fn eval_complex_with_derivative(&self, z: &Cplx) -> (Cplx, Cplx) {
        let prec = z.prec();
        let mut p = Cplx::zero(prec);
        let mut dp = Cplx::zero(prec);
        for c in self.coeffs.iter().rev() {
            dp = dp.mul(z).add(&p);
            p = p.mul(z);
            p.re += c;
        }
        (p, dp)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Integer::to_f64).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: PolyJson = serde_json::from_value(v.clone())?;
        IntPoly::try_from(j)
    }
}

/// Wire form of [`IntPoly`]: decimal strings keep full precision.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolyJson {
    pub coeffs: Vec<String>,
}

impl From<&IntPoly> for PolyJson {
    fn from(p: &IntPoly) -> Self {
        let coeffs = if p.is_zero() {
            vec!["0".to_string()]
        } else {
            p.coeffs.iter().map(Integer::to_string).collect()
        };
        PolyJson { coeffs }
    }
}

impl TryFrom<PolyJson> for IntPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<Integer>().map_err(|e| Error::Json(format!("coefficient {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{abs}z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{abs}z^{k}")?,
            }
        }
        Ok(())
    }
}
