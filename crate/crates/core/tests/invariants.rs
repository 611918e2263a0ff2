use num_complex::Complex64;
use proptest::prelude::*;

use indgap_core::analytic::{decompose_f_u, FuPolys};
use indgap_core::certify::{certified_gap, CertifyConfig};
use indgap_core::graph::{are_isomorphic, canonical_code, Graph, VertexSet};
use indgap_core::indpoly::{independence_poly, IntPoly};
use indgap_core::roots::{all_roots, beta_bracket, empirical_gap, Sturm};
use indgap_core::rug::{Integer, Rational};
use indgap_core::series::{series_div, series_inverse};

fn graph_from_mask(n: usize, mask: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut it = mask.iter();
    for u in 0..n {
        for v in u + 1..n {
            if *it.next().unwrap() {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |m| graph_from_mask(n, &m)))
}

/// A random spanning tree plus random extra edges.
fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        (proptest::collection::vec(any::<prop::sample::Index>(), n.saturating_sub(1)), proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2))
            .prop_map(move |(parents, extra)| {
                let mut g = graph_from_mask(n, &extra);
                for (i, p) in parents.iter().enumerate() {
                    let v = i + 1;
                    let u = p.index(v);
                    if !g.has_edge(u, v) {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
    })
}

fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let off = a.n();
    let mut edges = a.edges();
    edges.extend(b.edges().into_iter().map(|(u, v)| (u + off, v + off)));
    Graph::from_edges(a.n() + b.n(), &edges).unwrap()
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn disjoint_union_multiplies(a in any_graph(6), b in any_graph(6)) {
        let u = disjoint_union(&a, &b);
        prop_assert_eq!(independence_poly(&u), independence_poly(&a).mul(&independence_poly(&b)));
    }

    #[test]
    fn deletion_recurrence_at_every_vertex(g in any_graph(9)) {
        let p = independence_poly(&g);
        for v in 0..g.n() {
            let without = independence_poly(&g.delete(VertexSet::singleton(v)));
            let closed = independence_poly(&g.delete(g.closed_neighborhood(v).unwrap()));
            prop_assert_eq!(&p, &without.sub(&closed.shift(1)));
        }
    }

    #[test]
    fn low_coefficients_count_vertices_and_non_edges(g in any_graph(10)) {
        let p = independence_poly(&g);
        let n = g.n() as i64;
        prop_assert_eq!(p.coeff(0), 1);
        prop_assert_eq!(p.coeff(1), -n);
        prop_assert_eq!(p.coeff(2), n * (n - 1) / 2 - g.edge_count() as i64);
    }

    #[test]
    fn polynomial_is_a_graph_invariant(g in any_graph(8), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = relabel(&g, &perm);
        prop_assert!(are_isomorphic(&g, &h));
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
        prop_assert_eq!(independence_poly(&g), independence_poly(&h));
    }

    #[test]
    fn inverse_series_is_positive_and_inverts(g in any_graph(9).prop_filter("nonempty", |g| g.n() > 0)) {
        let p = independence_poly(&g);
        let s = series_inverse(&p, 20).unwrap();
        prop_assert!(s.coeffs().iter().all(|c| *c > 0));
        let back = IntPoly::new(s.coeffs().to_vec()).mul(&p);
        for k in 0..=20 {
            prop_assert_eq!(back.coeff(k), Integer::from(u32::from(k == 0)));
        }
    }

    #[test]
    fn f_u_series_positive_and_nested_form_agrees(g in connected_graph(2, 8), pick in any::<prop::sample::Index>(), z in (0.0f64..1.0, -3.2f64..3.2)) {
        let u = pick.index(g.n());
        let fu = FuPolys::new(&g, u).unwrap();
        let s = series_div(&fu.num, &fu.den, 20).unwrap();
        prop_assert_eq!(&s.coeffs()[0], &Integer::new());
        prop_assert!(s.coeffs()[1..].iter().all(|c| *c > 0));
        let e = beta_bracket(&g, &Rational::from((1, 1u64 << 30))).unwrap();
        let r = e.lo.to_f64() * 0.9 * z.0;
        let w = Complex64::from_polar(r, z.1);
        let direct = fu.eval_c64(w);
        let nested = decompose_f_u(&g, u).unwrap().eval_c64(w);
        prop_assert!((direct - nested).norm() <= 1e-12 * direct.norm().max(1.0), "{} vs {}", direct, nested);
    }

    #[test]
    fn beta_is_the_unique_root_below_hi(g in connected_graph(1, 10)) {
        let tol = Rational::from((1, 1u64 << 40));
        let e = beta_bracket(&g, &tol).unwrap();
        let p = independence_poly(&g);
        prop_assert!(e.width() <= tol);
        prop_assert!(e.lo < e.hi || e.exact);
        prop_assert!(e.hi <= 1);
        prop_assert_eq!(Sturm::new(&p).count(&Rational::new(), &e.hi), 1);
        let rs = all_roots(&p, 128).unwrap();
        let smallest = rs.roots[0].z.abs();
        prop_assert!(smallest >= Rational::from(&e.lo - &tol) && smallest <= Rational::from(&e.hi + &tol));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_gap_is_sound_and_conservative(g in connected_graph(2, 8)) {
        let cfg = CertifyConfig::default();
        let cert = certified_gap(&g, &cfg).unwrap();
        prop_assert!(cert.valid, "{}", cert.to_text());
        prop_assert!(cert.certified_gap > 0);
        prop_assert!(cert.certified_gap <= cert.injectivity_radius);
        prop_assert!(Rational::from(&cert.injectivity_radius * 2u32) <= cert.r_g);
        prop_assert!(cert.theta_eff <= cert.theta_g);
        let gap = empirical_gap(&g, 256).unwrap();
        if gap.is_finite() {
            prop_assert!(gap > cert.certified_gap, "empirical {} certified {}", gap.to_f64(), cert.certified_gap.to_f64());
        }
    }

    #[test]
    fn tighter_enclosure_keeps_certificate_valid(g in connected_graph(2, 7)) {
        let loose = CertifyConfig { tol: Rational::from((1, 1u64 << 30)), ..CertifyConfig::default() };
        let tight = CertifyConfig { tol: Rational::from((1, 1u64 << 50)), ..CertifyConfig::default() };
        let a = certified_gap(&g, &loose).unwrap();
        let b = certified_gap(&g, &tight).unwrap();
        prop_assert!(a.valid && b.valid);
        prop_assert!(b.beta.lo >= a.beta.lo && b.beta.hi <= a.beta.hi);
        let rel = (a.certified_gap.to_f64() / b.certified_gap.to_f64() - 1.0).abs();
        prop_assert!(rel < 1e-3, "gap moved by {rel}");
    }

    #[test]
    fn certificate_json_round_trips(g in connected_graph(2, 6)) {
        let cert = certified_gap(&g, &CertifyConfig::default()).unwrap();
        let back = indgap_core::certify::GapCertificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), cert.to_json());
    }
}
