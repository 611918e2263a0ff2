//! Closed forms for paths, cycles and balanced complete bipartite graphs:
//! their roots, gap ratios, and the Fibonacci/Chebyshev identities behind
//! them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::graph::{make_complete_bipartite, make_cycle, make_path, Graph};
use crate::indpoly::{independence_poly, IntPoly};
use crate::num::{ln2, pi, Cplx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Path,
    Cycle,
    /// `K_{n×n}` on `2n` vertices.
    Bipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Result<Self> {
        let ok = match kind {
            FamilyKind::Path | FamilyKind::Bipartite => n >= 1,
            FamilyKind::Cycle => n >= 3,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("invalid family size {n} for {kind:?}")));
        }
        Ok(FamilySpec { kind, n })
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(FamilyKind::Path, n)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(FamilyKind::Cycle, n)
    }

    pub fn bipartite(n: usize) -> Result<Self> {
        Self::new(FamilyKind::Bipartite, n)
    }

    pub fn graph(&self) -> Result<Graph> {
        Ok(match self.kind {
            FamilyKind::Path => make_path(self.n)?,
            FamilyKind::Cycle => make_cycle(self.n)?,
            FamilyKind::Bipartite => make_complete_bipartite(self.n, self.n)?,
        })
    }

    /// The independence polynomial, built from its closed form so that
    /// large `n` does not need the graph engine.
    pub fn poly(&self) -> IntPoly {
        match self.kind {
            FamilyKind::Path => path_poly(self.n),
            FamilyKind::Cycle => {
                // I(C_n) = I(P_{n-1}) - z I(P_{n-3})
                let tail = if self.n >= 3 { path_poly(self.n - 3) } else { IntPoly::one() };
                path_poly(self.n - 1).sub(&tail.shift(1))
            }
            FamilyKind::Bipartite => {
                let mut p = IntPoly::one();
                for _ in 0..self.n {
                    p = p.mul(&IntPoly::one_minus_z());
                }
                p.scale(&Integer::from(2)).sub(&IntPoly::one())
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Bipartite => "bipartite",
        };
        write!(f, "{k}:{}", self.n)
    }
}

/// `I(P_n)` from `I(P_n) = I(P_{n-1}) - z I(P_{n-2})`, with `I(P_0) = 1`.
pub fn path_poly(n: usize) -> IntPoly {
    let (mut a, mut b) = (IntPoly::one(), IntPoly::one_minus_z());
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let next = b.sub(&a.shift(1));
        a = b;
        b = next;
    }
    b
}

/// Every root from the closed form, sorted by modulus.
pub fn closed_form_roots(spec: &FamilySpec, prec: u32) -> Vec<Cplx> {
    let n = spec.n;
    let pi = pi(prec);
    let quarter_sec2 = |angle: Float| {
        let c = angle.cos();
        let four_c2 = Float::with_val(prec, c.square_ref()) * 4u32;
        Cplx::real(four_c2.recip())
    };
    let mut roots: Vec<Cplx> = match spec.kind {
        FamilyKind::Path => (1..=n.div_ceil(2))
            .map(|k| quarter_sec2(Float::with_val(prec, &pi * k as u32) / (n + 2) as u32))
            .collect(),
        FamilyKind::Cycle => (0..=(n - 1) / 2)
            // For odd n the last angle is π/2, a root at infinity of the
            // degree-⌊n/2⌋ polynomial.
            .filter(|&k| 2 * k + 1 != n)
            .map(|k| quarter_sec2(Float::with_val(prec, &pi * (2 * k + 1) as u32) / (2 * n) as u32))
            .collect(),
        FamilyKind::Bipartite => {
            let r = Float::with_val(prec, 2).pow(Float::with_val(prec, -1) / n as u32);
            (0..n)
                .map(|k| {
                    let angle = Float::with_val(prec, &pi * (2 * k) as u32) / n as u32;
                    Cplx::one(prec).sub(&Cplx::from_polar(&r, &angle))
                })
                .collect()
        }
    };
    roots.sort_by(|a, b| {
        let (x, y) = (a.abs(), b.abs());
        x.partial_cmp(&y).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    roots
}

/// `F_1 = 1`, `F_2 = z`, `F_{k+1} = z F_k + F_{k-1}`.
pub fn fibonacci_poly(n: usize) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("Fibonacci polynomials start at n = 1".into()));
    }
    let (mut a, mut b) = (IntPoly::one(), IntPoly::from_i64(&[0, 1]));
    if n == 1 {
        return Ok(a);
    }
    for _ in 2..n {
        let next = b.shift(1).add(&a);
        a = b;
        b = next;
    }
    Ok(b)
}

/// `z^(n+1) P_n(-1/z^2)` as a polynomial in `z`.
pub fn path_substitution(p: &IntPoly, n: usize) -> IntPoly {
    // a_k (-1)^k z^(n+1-2k); degree of P_n is <= (n+1)/2 so exponents stay >= 0.
    let mut coeffs = vec![Integer::new(); n + 2];
    for (k, c) in p.coeffs().iter().enumerate() {
        let e = n + 1 - 2 * k;
        coeffs[e] = if k % 2 == 0 { c.clone() } else { Integer::from(-c) };
    }
    IntPoly::new(coeffs)
}

/// `z^(n+1) I(P_n, -1/z^2) = F_{n+2}(z)`, exactly.
pub fn fibonacci_identity_holds(n: usize) -> bool {
    let lhs = path_substitution(&independence_poly(&make_path(n).expect("n >= 1")), n);
    fibonacci_poly(n + 2).map(|f| f == lhs).unwrap_or(false)
}

/// Tolerance for the Chebyshev identity at 256 bits.
pub const CHEBYSHEV_TOL: f64 = 1e-20;
const CHEBYSHEV_PRECISION: u32 = 256;
const CHEBYSHEV_SAMPLES: usize = 20;

fn chebyshev_t(n: usize, x: &Float) -> Float {
    let prec = x.prec();
    let (mut a, mut b) = (Float::with_val(prec, 1), x.clone());
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let next = Float::with_val(prec, x * &b) * 2u32 - &a;
        a = b;
        b = next;
    }
    b
}

/// Compares `p(z)` with `2 z^(n/2) T_n(1/(2√z))` at 20 seeded points of
/// `(0, 1/4)`.
pub fn chebyshev_identity_check_poly(p: &IntPoly, n: usize, seed: u64) -> bool {
    let prec = CHEBYSHEV_PRECISION;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..CHEBYSHEV_SAMPLES).all(|_| {
        let z = Float::with_val(prec, rng.gen_range(1e-3..0.25));
        let sqrt_z = Float::with_val(prec, z.sqrt_ref());
        let x = Float::with_val(prec, sqrt_z.recip_ref()) / 2u32;
        let rhs = chebyshev_t(n, &x) * Float::with_val(prec, sqrt_z.pow(n as u32)) * 2u32;
        let lhs = p.eval_float(&z);
        Float::with_val(prec, lhs - rhs).abs() < CHEBYSHEV_TOL
    })
}

/// `I(C_n, z) = 2 z^(n/2) T_n(1/(2√z))` for the computed cycle polynomial.
pub fn chebyshev_identity_check(n: usize) -> bool {
    match make_cycle(n) {
        Ok(g) => chebyshev_identity_check_poly(&independence_poly(&g), n, n as u64),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRatio {
    pub spec: FamilySpec,
    pub beta: Float,
    /// `+∞` when the polynomial has a single root.
    pub alpha_modulus: Float,
    pub ratio: Float,
    pub leading_term: Float,
}

/// `|α|/β` from the closed-form roots, with the leading-order prediction:
/// `1 + 3π²/m²` (paths, `m = n + 2`), `1 + 2π²/n²` (cycles) and
/// `√(1 + 4π²/ln²2)` (bipartite).
pub fn asymptotic_ratio(spec: &FamilySpec, prec: u32) -> AsymptoticRatio {
    let roots = closed_form_roots(spec, prec);
    let beta = roots[0].abs();
    let alpha_modulus = roots.get(1).map_or_else(|| Float::with_val(prec, rug::float::Special::Infinity), Cplx::abs);
    let ratio = Float::with_val(prec, &alpha_modulus / &beta);
    let pi2 = Float::with_val(prec, pi(prec).square_ref());
    let leading_term = match spec.kind {
        FamilyKind::Path => {
            let m2 = Float::with_val(prec, (spec.n + 2) * (spec.n + 2));
            Float::with_val(prec, &pi2 * 3u32) / m2 + 1u32
        }
        FamilyKind::Cycle => {
            let n2 = Float::with_val(prec, spec.n * spec.n);
            Float::with_val(prec, &pi2 * 2u32) / n2 + 1u32
        }
        FamilyKind::Bipartite => {
            let b2 = Float::with_val(prec, ln2(prec).square_ref());
            (Float::with_val(prec, &pi2 * 4u32) / b2 + 1u32).sqrt()
        }
    };
    AsymptoticRatio { spec: *spec, beta, alpha_modulus, ratio, leading_term }
}

pub fn family_csv(rows: &[AsymptoticRatio]) -> String {
    let mut out = String::from("n,beta,alpha_modulus,ratio,leading_term\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            r.spec.n,
            r.beta.to_f64(),
            r.alpha_modulus.to_f64(),
            r.ratio.to_f64(),
            r.leading_term.to_f64()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{all_roots, beta_bracket};
    use num_complex::Complex64;
    use rug::Rational;

    fn c64s(v: &[Cplx]) -> Vec<Complex64> {
        v.iter().map(Cplx::to_c64).collect()
    }

    #[test]
    fn small_closed_forms() {
        let r = c64s(&closed_form_roots(&FamilySpec::path(4).unwrap(), 128));
        assert!((r[0] - 1.0 / 3.0).norm() < 1e-15 && (r[1] - 1.0).norm() < 1e-15);
        let r = c64s(&closed_form_roots(&FamilySpec::cycle(4).unwrap(), 128));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - (1.0 - s)).norm() < 1e-15 && (r[1] - (1.0 + s)).norm() < 1e-15);
        let r = c64s(&closed_form_roots(&FamilySpec::bipartite(1).unwrap(), 128));
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).norm() < 1e-15);
    }

    #[test]
    fn closed_form_polys_match_graphs() {
        for n in 1..=12 {
            let s = FamilySpec::path(n).unwrap();
            assert_eq!(s.poly(), independence_poly(&s.graph().unwrap()));
            let s = FamilySpec::bipartite(n.min(8)).unwrap();
            assert_eq!(s.poly(), independence_poly(&s.graph().unwrap()));
            if n >= 3 {
                let s = FamilySpec::cycle(n).unwrap();
                assert_eq!(s.poly(), independence_poly(&s.graph().unwrap()));
            }
        }
    }

    #[test]
    fn root_counts_match_degree() {
        for n in 3..=15 {
            for s in [FamilySpec::path(n).unwrap(), FamilySpec::cycle(n).unwrap(), FamilySpec::bipartite(n).unwrap()] {
                assert_eq!(closed_form_roots(&s, 64).len(), s.poly().degree().unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn matches_numeric_roots() {
        for s in [FamilySpec::path(11).unwrap(), FamilySpec::cycle(9).unwrap(), FamilySpec::bipartite(6).unwrap()] {
            let want = c64s(&closed_form_roots(&s, 256));
            let got = all_roots(&s.poly(), 256).unwrap().to_c64();
            for w in &want {
                let best = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-12, "{s}");
            }
        }
    }

    #[test]
    fn beta_is_smallest_closed_form_root() {
        let tol = Rational::from((1, 1u64 << 40));
        let s = FamilySpec::cycle(7).unwrap();
        let e = beta_bracket(&s.graph().unwrap(), &tol).unwrap();
        let b = closed_form_roots(&s, 256)[0].re.clone();
        assert!(b >= e.lo && b <= e.hi);
    }

    #[test]
    fn fibonacci() {
        assert_eq!(fibonacci_poly(3).unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(fibonacci_poly(4).unwrap(), IntPoly::from_i64(&[0, 2, 0, 1]));
        assert!(fibonacci_poly(0).is_err());
        for n in 1..=12 {
            assert!(fibonacci_identity_holds(n), "n={n}");
        }
    }

    #[test]
    fn chebyshev() {
        for n in 3..=12 {
            assert!(chebyshev_identity_check(n), "n={n}");
        }
        let mut coeffs = independence_poly(&make_cycle(6).unwrap()).coeffs().to_vec();
        coeffs[2] += 1;
        assert!(!chebyshev_identity_check_poly(&IntPoly::new(coeffs), 6, 1));
    }

    #[test]
    fn ratios() {
        let p = asymptotic_ratio(&FamilySpec::path(200).unwrap(), 256);
        let m2 = 202.0f64 * 202.0;
        let pi2 = std::f64::consts::PI.powi(2);
        let scaled = (p.ratio.to_f64() - 1.0) * m2 / (3.0 * pi2);
        assert!((0.95..=1.05).contains(&scaled));
        let b = asymptotic_ratio(&FamilySpec::bipartite(100).unwrap(), 256).ratio.to_f64();
        assert!((b / 9.119 - 1.0).abs() < 0.005);
        let one = asymptotic_ratio(&FamilySpec::path(2).unwrap(), 64);
        assert!(one.alpha_modulus.is_infinite());
        let csv = family_csv(&[p]);
        assert!(csv.starts_with("n,beta,alpha_modulus,ratio,leading_term\n200,"));
    }
}
