//! Partial Bell polynomials, Stirling numbers, ordered Bell numbers and the
//! Faà di Bruno expansion, by explicit tuple enumeration.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// Every tuple `(i_1, .., i_len)` of nonnegative integers with
/// `Σ i_m = k` and `Σ m·i_m = n`.
pub fn index_tuples(n: usize, k: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, len: usize, n_left: usize, k_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m > len {
            if n_left == 0 && k_left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..=k_left.min(n_left / m) {
            let (n2, k2) = (n_left - i * m, k_left - i);
            cur.push(i);
            rec(m + 1, len, n2, k2, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if n == 0 && k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(1, len, n, k, &mut Vec::with_capacity(len), &mut out);
    out
}

fn check_bounds(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::InvalidArgument(format!("need K <= N, got N = {n}, K = {k}")));
    }
    Ok(())
}

/// `B_{N,K}(x_1, .., x_{N-K+1}) = Σ N!/(Π i_m!) Π (x_m/m!)^{i_m}`.
pub fn partial_bell(n: usize, k: usize, x: &[Rational]) -> Result<Rational> {
    check_bounds(n, k)?;
    let len = if n == 0 { 0 } else { n - k + 1 };
    if x.len() < len {
        return Err(Error::InvalidArgument(format!("B_{{{n},{k}}} needs {len} arguments, got {}", x.len())));
    }
    if k == 0 {
        return Ok(Rational::from(u32::from(n == 0)));
    }
    let nf = factorial(n);
    let mut total = Rational::new();
    for t in index_tuples(n, k, len) {
        let mut term = Rational::from(&nf);
        for (m0, &i) in t.iter().enumerate() {
            let m = m0 + 1;
            term /= factorial(i);
            let base = &x[m0] / Rational::from(factorial(m));
            for _ in 0..i {
                term *= &base;
            }
        }
        total += term;
    }
    Ok(total)
}

/// Stirling numbers of the second kind via `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> Integer {
    let mut row = vec![Integer::from(1)];
    for i in 1..=n {
        let mut next = vec![Integer::new(); i + 1];
        for j in 1..=i {
            let carry = row.get(j).map_or_else(Integer::new, |s| Integer::from(s * j as u64));
            next[j] = carry + row.get(j - 1).cloned().unwrap_or_default();
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

/// Ordered Bell (Fubini) number `Σ_K K!·S(N,K)`.
pub fn ordered_bell(n: usize) -> Integer {
    (0..=n).map(|k| factorial(k) * stirling2(n, k)).sum()
}

/// Ordered Bell numbers `0..=n` from `B̃_N = Σ_{i=0}^{N-1} C(N,i) B̃_i`.
pub fn ordered_bell_by_recurrence(n: usize) -> Vec<Integer> {
    let mut b: Vec<Integer> = vec![Integer::from(1)];
    for m in 1..=n {
        let v: Integer = (0..m).map(|i| binomial(m, i) * &b[i]).sum();
        b.push(v);
    }
    b
}

/// Rational upper bound on `1/ln 2 = 1.44269504088896340735...`.
pub fn inv_ln2_upper() -> Rational {
    Rational::from((14_426_950_408_889_635u64, 10_000_000_000_000_000u64))
}

/// `B̃_N / N! <= (1/ln 2)^N`, using a rational upper bound for `1/ln 2`.
/// Returns the ratio of the two sides (left over right) with the verdict.
pub fn bell_bound_holds(n: usize) -> (bool, Rational) {
    let lhs = Rational::from((ordered_bell(n), factorial(n)));
    let mut rhs = Rational::from(1);
    let c = inv_ln2_upper();
    for _ in 0..n {
        rhs *= &c;
    }
    let ratio = Rational::from(&lhs / &rhs);
    (lhs <= rhs, ratio)
}

/// Checks `Σ K!/(i_1!..i_{N-K+1}!) = C(N-1, K-1)` over the tuples of
/// `(N, K)`, by enumeration.
pub fn composition_count_check(n: usize, k: usize) -> Result<bool> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= K <= N, got N = {n}, K = {k}")));
    }
    let kf = factorial(k);
    let lhs: Integer = index_tuples(n, k, n - k + 1)
        .iter()
        .map(|t| t.iter().fold(kf.clone(), |acc, &i| acc / factorial(i)))
        .sum();
    Ok(lhs == binomial(n - 1, k - 1))
}

/// One Faà di Bruno term: `multiplier · f^(k)(g) · Π (g^(m)/m!)^{tuple[m-1]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdbTerm {
    pub k: usize,
    pub tuple: Vec<usize>,
    pub multiplier: Integer,
}

/// All terms of `(f∘g)^(N)`, grouped by `K = Σ i_m` in increasing order,
/// with multipliers `N!/(i_1!..i_N!)`.
pub fn faa_di_bruno_coeffs(n: usize) -> Result<Vec<FdbTerm>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Faà di Bruno expansion needs N >= 1".into()));
    }
    let nf = factorial(n);
    let mut out = Vec::new();
    for k in 1..=n {
        for t in index_tuples(n, k, n) {
            let multiplier = t.iter().fold(nf.clone(), |acc, &i| acc / factorial(i));
            out.push(FdbTerm { k, tuple: t, multiplier });
        }
    }
    Ok(out)
}

/// `(f∘g)^(N)` assembled from the given derivative values:
/// `f_derivs[K] = f^(K)(g(z))`, `g_derivs[m] = g^(m)(z)`.
pub fn faa_di_bruno_eval(n: usize, f_derivs: &[Rational], g_derivs: &[Rational]) -> Result<Rational> {
    let mut total = Rational::new();
    for term in faa_di_bruno_coeffs(n)? {
        let mut v = Rational::from(&term.multiplier) * &f_derivs[term.k];
        for (m0, &i) in term.tuple.iter().enumerate() {
            let base = &g_derivs[m0 + 1] / Rational::from(factorial(m0 + 1));
            for _ in 0..i {
                v *= &base;
            }
        }
        total += v;
    }
    Ok(total)
}
