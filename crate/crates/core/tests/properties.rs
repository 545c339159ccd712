mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;
use tropcurve::divisors::{
    is_principal, jacobian_group, laplacian, principal_divisor, Divisor, GraphFunction,
};
use tropcurve::homology::{canonical_cycle_basis, component_group, period_matrix};
use tropcurve::iso::{canonical_code, find_isomorphism};
use tropcurve::metric::find_metric_isomorphism;
use tropcurve::moduli::expand_to_maximal;
use tropcurve::strata::support_poset;
use tropcurve::torelli::{
    c1_sets, cyclic_equivalence, lattice_isometry_witness, three_edge_connectization,
    verify_cyclic_equivalence,
};
use tropcurve::{Length, MetricGraph, TropicalCurve, WeightedGraph};

fn arb_lengths(m: usize) -> impl Strategy<Value = Vec<Length>> {
    prop::collection::vec((1i64..12, 1i64..4), m)
        .prop_map(|v| v.into_iter().map(|(p, q)| Length::ratio(p, q)).collect())
}

fn arb_curve(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = TropicalCurve> {
    arb_connected(max_vertices, max_extra, 1).prop_flat_map(|g| {
        let m = g.edge_count();
        arb_lengths(m).prop_map(move |l| TropicalCurve::new(g.clone(), l).unwrap())
    })
}

/// Lengths re-indexed to follow a permutation of the edges.
fn permuted_curve(c: &TropicalCurve, seed: u64) -> TropicalCurve {
    let mut rng = StdRng::seed_from_u64(seed);
    let (h, eperm) = shuffled(&mut rng, c.graph());
    let l = eperm.iter().map(|&e| c.lengths()[e].clone()).collect();
    TropicalCurve::new(h, l).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn contraction_preserves_genus(g in arb_connected(6, 6, 2)) {
        let genus = g.genus().unwrap();
        for e in g.edges() {
            prop_assert_eq!(g.contract_edge(&e.id).unwrap().0.genus().unwrap(), genus);
        }
    }

    #[test]
    fn genus_is_betti_plus_weight(g in arb_connected(6, 6, 2)) {
        let b1 = g.edge_count() as u64 + 1 - g.vertex_count() as u64;
        prop_assert_eq!(g.first_betti(), b1);
        prop_assert_eq!(g.genus().unwrap(), b1 + g.total_weight());
    }

    #[test]
    fn relabeling_keeps_canonical_code(g in arb_connected(6, 6, 2), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (h, _) = shuffled(&mut rng, &g);
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
        let iso = find_isomorphism(&g, &h).expect("relabeling is an isomorphism");
        prop_assert!(iso.verify::<u8>(&g, &h, None));
    }

    #[test]
    fn stabilization_is_idempotent(g in arb_connected(6, 6, 2)) {
        if let Ok(s) = g.stabilize() {
            prop_assert!(s.is_stable().unwrap());
            prop_assert_eq!(s.genus().unwrap(), g.genus().unwrap());
            prop_assert_eq!(s.stabilize().unwrap(), s);
        }
    }

    #[test]
    fn laplacian_is_symmetric_with_zero_rows(g in arb_connected(6, 6, 0)) {
        let l = laplacian(&g);
        for (i, row) in l.iter().enumerate() {
            prop_assert_eq!(row.iter().sum::<i64>(), 0);
            for (j, &x) in row.iter().enumerate() {
                prop_assert_eq!(x, l[j][i]);
            }
        }
    }

    #[test]
    fn principal_divisors_are_recognized(g in arb_connected(5, 5, 0), f in prop::collection::vec(-5i64..5, 5)) {
        let f = GraphFunction(f[..g.vertex_count()].to_vec());
        let d = principal_divisor(&g, &f);
        prop_assert_eq!(d.degree(), 0);
        let w = is_principal(&g, &d).unwrap().expect("div(f) is principal");
        let shift = f.0[0] - w.0[0];
        prop_assert!(f.0.iter().zip(&w.0).all(|(a, b)| a - b == shift));
    }

    #[test]
    fn non_principal_count_matches_group(g in arb_connected(4, 4, 0)) {
        // v − v₀ is principal for every v exactly when the group is trivial
        let n = g.vertex_count();
        let trivial = jacobian_group(&g).unwrap().is_trivial();
        let all = (1..n).all(|v| {
            let mut d = vec![0; n];
            d[v] = 1;
            d[0] = -1;
            is_principal(&g, &Divisor(d)).unwrap().is_some()
        });
        prop_assert_eq!(trivial, all);
    }

    #[test]
    fn component_group_equals_jacobian_group(g in arb_connected(6, 6, 0)) {
        prop_assert_eq!(component_group(&g).unwrap(), jacobian_group(&g).unwrap());
    }

    #[test]
    fn period_matrix_is_symmetric_positive(c in arb_curve(5, 5)) {
        let basis = canonical_cycle_basis(c.graph()).unwrap();
        let q = period_matrix(c.lengths(), &basis);
        prop_assert!(q.is_symmetric());
        prop_assert_eq!(q.size() as u64, c.graph().first_betti());
        let det = q.determinant().unwrap();
        prop_assert!(det > num_rational::BigRational::from_integer(0.into()));
    }

    #[test]
    fn relabeled_curves_are_cyclically_equivalent(c in arb_curve(5, 5), seed in any::<u64>()) {
        let d = permuted_curve(&c, seed);
        let w = cyclic_equivalence(c.graph(), d.graph(), Some((c.lengths(), d.lengths())))
            .expect("relabeling preserves circuits and lengths");
        prop_assert!(verify_cyclic_equivalence(c.graph(), d.graph(), &w, Some((c.lengths(), d.lengths()))));
        let back = cyclic_equivalence(d.graph(), c.graph(), None).unwrap();
        let round = w.then(&back);
        prop_assert!(verify_cyclic_equivalence(c.graph(), c.graph(), &round, None));
        prop_assert!(find_metric_isomorphism(&c, &d).is_some());
    }

    #[test]
    fn isometry_certificates_exist(c in arb_curve(4, 5), seed in any::<u64>()) {
        prop_assume!(c.genus() >= 2);
        let d = permuted_curve(&c, seed);
        let (c3, d3) = (three_edge_connectization(&c).unwrap(), three_edge_connectization(&d).unwrap());
        let w = cyclic_equivalence(c3.graph(), d3.graph(), Some((c3.lengths(), d3.lengths()))).unwrap();
        let m = lattice_isometry_witness(&c, &d, &w).unwrap();
        prop_assert_eq!(m.len(), c3.graph().first_betti() as usize);
    }

    #[test]
    fn three_edge_connectization_properties(c in arb_curve(5, 6)) {
        prop_assume!(c.genus() >= 2);
        let t = three_edge_connectization(&c).unwrap();
        prop_assert_eq!(t.genus(), c.genus());
        prop_assert_eq!(t.graph().first_betti(), c.graph().first_betti());
        prop_assert!(c1_sets(t.graph()).unwrap().all_singletons());
        let again = three_edge_connectization(&t).unwrap();
        prop_assert!(find_metric_isomorphism(&again, &t).is_some());
        // total length of bridgeless part is kept
        let bridges = c.graph().bridge_indices();
        let kept: Length = c.lengths().iter().enumerate()
            .filter(|(i, _)| !bridges.contains(i))
            .fold(Length::zero(), |a, (_, l)| &a + l);
        let total = t.lengths().iter().fold(Length::zero(), |a, l| &a + l);
        prop_assert_eq!(total, kept);
    }

    #[test]
    fn support_poset_contains_extremes_and_c1_sets(g in arb_connected(4, 5, 0)) {
        prop_assume!(g.bridge_indices().is_empty());
        let p = support_poset(&g).unwrap();
        prop_assert!(p.contains(0));
        prop_assert!(p.contains((1u64 << g.edge_count()) - 1));
        for b in c1_sets(&g).unwrap().blocks {
            prop_assert!(p.contains(b.iter().fold(0u64, |a, &e| a | 1 << e)));
        }
    }

    #[test]
    fn support_poset_grows_with_parallel_edges(g in arb_connected(4, 4, 0), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.bridge_indices().is_empty() && g.edge_count() > 0);
        let e = &g.edges()[pick.index(g.edge_count())];
        let mut edges: Vec<(usize, usize)> = ends(&g);
        edges.push(e.ends);
        let h = WeightedGraph::from_indexed(&g.weights(), &edges);
        prop_assert!(support_poset(&h).unwrap().len() >= support_poset(&g).unwrap().len());
    }

    #[test]
    fn expansion_round_trips(g in arb_connected(4, 4, 2)) {
        prop_assume!(g.genus().unwrap() >= 2 && g.is_stable().unwrap());
        let (big, set) = expand_to_maximal(&g).unwrap();
        prop_assert_eq!(big.edge_count() as u64, 3 * g.genus().unwrap() - 3);
        prop_assert!(big.valencies().iter().all(|&d| d == 3) && big.is_pure());
        prop_assert!(find_isomorphism(&big.contract_edge_set(&set).unwrap(), &g).is_some());
    }

    #[test]
    fn length_text_round_trips(p in -1000i64..1000, q in 1i64..50) {
        let l = Length::ratio(p, q);
        prop_assert_eq!(l.to_string().parse::<Length>().unwrap(), l);
    }
}
