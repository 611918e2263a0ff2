//! Multiprecision real and complex helpers on top of MPFR floats.
//!
//! `rug` is built here without its MPC backend, so complex arithmetic is a
//! small hand-rolled pair of `Float`s. Only the handful of operations the
//! evaluators and root polisher need are provided.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Working precision for multiprecision evaluation, in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Smallest precision accepted anywhere a precision is configurable.
pub const MIN_PRECISION: u32 = 53;

pub fn float(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn float_from_rational(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

/// π at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// ln 2 at `prec` bits.
pub fn ln2(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Log2)
}

/// Largest 64-bit-mantissa dyadic rational that is `<= q`.
pub fn round_down(q: &Rational) -> Rational {
    dyadic(q, Round::Down)
}

/// Smallest 64-bit-mantissa dyadic rational that is `>= q`.
pub fn round_up(q: &Rational) -> Rational {
    dyadic(q, Round::Up)
}

fn dyadic(q: &Rational, round: Round) -> Rational {
    if *q.numer() == 0 {
        return Rational::new();
    }
    let (f, _) = Float::with_val_round(64, q, round);
    f.to_rational().expect("finite")
}

/// `q` as a `"p/q"` string (or `"p"` for integers).
pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

/// Parses `"p/q"`, `"p"`, or a decimal/scientific literal such as `1e-12`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational>() {
        return Some(q);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: Integer = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = Integer::from(10);
    let mut q = if scale >= 0 {
        Rational::from(digits * ten.pow(scale as u32))
    } else {
        Rational::from((digits, ten.pow((-scale) as u32)))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Complex number with MPFR components at a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx {
    pub re: Float,
    pub im: Float,
}

impl Cplx {
    pub fn new(re: Float, im: Float) -> Self {
        Cplx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cplx { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Cplx { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn real(x: Float) -> Self {
        let prec = x.prec();
        Cplx { re: x, im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cplx { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    /// `r e^{iθ}`.
    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let prec = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(prec, theta).sin_cos(Float::new(prec));
        Cplx { re: Float::with_val(prec, r * &c), im: Float::with_val(prec, r * &s) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &Cplx) -> Cplx {
        let p = self.prec();
        Cplx { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Cplx) -> Cplx {
        let p = self.prec();
        Cplx { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn mul(&self, o: &Cplx) -> Cplx {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Cplx { re: ac - bd, im: ad + bc }
    }

    pub fn mul_real(&self, x: &Float) -> Cplx {
        let p = self.prec();
        Cplx { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn add_real(&self, x: &Float) -> Cplx {
        let p = self.prec();
        Cplx { re: Float::with_val(p, &self.re + x), im: self.im.clone() }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Cplx {
        Cplx { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn recip(&self) -> Option<Cplx> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Cplx { re: c.re / &n, im: c.im / &n })
    }

    pub fn div(&self, o: &Cplx) -> Option<Cplx> {
        o.recip().map(|r| self.mul(&r))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn pow_u32(&self, k: u32) -> Cplx {
        let mut out = Cplx::one(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        if im < 0.0 {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

/// Three-way comparison of a float against a rational.
pub fn cmp_float_rational(x: &Float, q: &Rational) -> Ordering {
    x.partial_cmp(q).expect("finite comparison")
}
