//! Cross-module properties on randomly generated complexes, filtrations and
//! perversities.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stratum_core::coarsen::{build_se, random_k_perversity, random_perversity, simple_chain, Coarsening};
use stratum_core::extint::{Finite, NegInf, PosInf};
use stratum_core::ihom::{intersection_homology, pi0_p, pi1_regular, simplicial_homology, AllowabilityTable, Ring};
use stratum_core::oracle::{allowable_simplices, betti_q, intersection_betti_q, link_mismatches, regular_components_brute};
use stratum_core::symcalc::{with_spheres, Calculator, Claim, SidedPerversity, SymGroup, SymSpace};
use stratum_core::{ExtInt, Perversity, Simplex, SimplicialComplex, Stratification, Vertex};

/// Nonempty complexes on at most seven vertices, built from random triangles
/// and edges.
fn complexes() -> impl Strategy<Value = SimplicialComplex> {
    let tri = proptest::sample::subsequence((0..7 as Vertex).collect::<Vec<_>>(), 3);
    let edge = proptest::sample::subsequence((0..7 as Vertex).collect::<Vec<_>>(), 2);
    (proptest::collection::vec(tri, 1..7), proptest::collection::vec(edge, 0..4))
        .prop_map(|(t, e)| SimplicialComplex::from_facets(t.into_iter().chain(e)).unwrap())
}

/// A sphere of dimension 1 to 3 with some vertices made point strata.
fn refined_spheres() -> impl Strategy<Value = Stratification> {
    (1usize..4).prop_flat_map(|d| {
        proptest::sample::subsequence((0..(d as Vertex + 2)).collect::<Vec<_>>(), 0..=d).prop_map(move |pts| {
            let mut st = Stratification::trivial(SimplicialComplex::sphere(d, 0)).unwrap();
            for p in pts {
                st = st.point_refinement(p).unwrap();
            }
            st
        })
    })
}

/// Points `kept ⊂ marked` on a sphere, optionally suspended. Forgetting the
/// unkept points gives a coarsening whose dropped points are exceptional.
fn coarsenings() -> impl Strategy<Value = Coarsening> {
    (1usize..4, any::<bool>()).prop_flat_map(|(d, suspend)| {
        let verts: Vec<Vertex> = (0..(d as Vertex + 2)).collect();
        proptest::sample::subsequence(verts, 1..=d + 1)
            .prop_flat_map(|marked| {
                let n = marked.len();
                (Just(marked), proptest::collection::vec(any::<bool>(), n))
            })
            .prop_map(move |(marked, keep)| {
                let base = Stratification::trivial(SimplicialComplex::sphere(d, 0)).unwrap();
                let mut fine = base.clone();
                let mut coarse = base;
                for (p, k) in marked.iter().zip(&keep) {
                    fine = fine.point_refinement(*p).unwrap();
                    if *k {
                        coarse = coarse.point_refinement(*p).unwrap();
                    }
                }
                if suspend {
                    fine = fine.join_sphere(0, 100).unwrap();
                    coarse = coarse.join_sphere(0, 100).unwrap();
                }
                Coarsening::new(fine, coarse).unwrap()
            })
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pad(mut b: Vec<usize>, len: usize) -> Vec<usize> {
    b.resize(len, 0);
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complexes_are_closed_under_faces(c in complexes()) {
        for s in c.iter() {
            for f in s.faces() {
                prop_assert!(c.contains(&f), "{f} missing below {s}");
            }
        }
        let f = c.f_vector();
        let alternating: i64 = f.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), alternating);
        prop_assert!(link_mismatches(&c).is_empty());
    }

    #[test]
    fn integer_and_rational_betti_agree(c in complexes()) {
        let z = simplicial_homology(&c, Ring::Z).betti();
        prop_assert_eq!(pad(z.clone(), 3), pad(betti_q(&c), 3));
        let euler: i64 = z.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(euler, c.euler_characteristic());
    }

    #[test]
    fn cones_are_acyclic(c in complexes()) {
        let cone = c.cone(50).unwrap();
        prop_assert_eq!(cone.euler_characteristic(), 1);
        prop_assert_eq!(pad(betti_q(&cone), 4), vec![1, 0, 0, 0]);
        prop_assert_eq!(cone.link(&Simplex::vertex(50)).unwrap(), c);
    }

    #[test]
    fn join_is_associative_on_f_vectors(a in complexes(), b in complexes(), c in complexes()) {
        let b = b.relabel(|v| v + 10);
        let c = c.relabel(|v| v + 20);
        let left = a.join(&b).unwrap().join(&c).unwrap();
        let right = a.join(&b.join(&c).unwrap()).unwrap();
        prop_assert_eq!(left.f_vector(), right.f_vector());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn subdivision_preserves_betti(c in complexes()) {
        let sd = c.barycentric_subdivision();
        prop_assert_eq!(betti_q(&sd.complex), betti_q(&c));
        for s in sd.complex.iter() {
            prop_assert!(c.contains(sd.carrier(s)));
        }
    }

    #[test]
    fn cone_filtration_adds_a_stratum_below(st in refined_spheres()) {
        let cone = st.cone(100).unwrap();
        prop_assert_eq!(cone.depth(), st.depth() + 1);
        prop_assert_eq!(cone.strata().len(), st.strata().len() + 1);
        let link = cone.link(&Simplex::vertex(100)).unwrap();
        prop_assert_eq!(link.complex(), st.complex());
        prop_assert_eq!(link.levels(), st.levels());
    }

    #[test]
    fn spine_components_match_brute_force(st in refined_spheres()) {
        let (_, count) = st.regular_components();
        prop_assert_eq!(count, regular_components_brute(&st));
        prop_assert_eq!(st.regular_spine().components().len(), count);
        let top = Perversity::top(st.poset());
        prop_assert_eq!(pi0_p(&st, &top).unwrap().count, count);
    }

    #[test]
    fn abelianized_pi1_is_spine_h1(st in refined_spheres()) {
        let g = pi1_regular(&st, None).unwrap();
        prop_assert_eq!(g.abelianization(), g.spine_h1.clone());
        prop_assert_eq!(g.simplify().abelianization(), g.spine_h1);
    }

    #[test]
    fn dual_is_an_involution(st in refined_spheres(), seed in any::<u64>()) {
        let p = random_perversity(st.poset(), &mut rng(seed));
        prop_assert_eq!(p.dual(st.poset()).dual(st.poset()), p);
    }

    #[test]
    fn allowability_agrees_with_the_classical_form(st in refined_spheres(), seed in any::<u64>()) {
        let p = random_perversity(st.poset(), &mut rng(seed));
        let table = AllowabilityTable::new(&st, &p).unwrap();
        let brute = allowable_simplices(&st, &p);
        for (g, ok) in brute.iter().enumerate() {
            prop_assert_eq!(table.is_allowable(g), *ok, "simplex {}", st.complex().simplex(g));
        }
    }

    #[test]
    fn allowability_grows_with_the_perversity(st in refined_spheres(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_perversity(st.poset(), &mut r);
        let b = random_perversity(st.poset(), &mut r);
        let (lo, hi) = if a.le(&b) { (a, b) } else if b.le(&a) { (b, a) } else {
            let meet: Vec<ExtInt> = a.values().iter().zip(b.values()).map(|(x, y)| (*x).min(*y)).collect();
            (Perversity::new(st.poset(), meet).unwrap(), a)
        };
        let small = AllowabilityTable::new(&st, &lo).unwrap();
        let big = AllowabilityTable::new(&st, &hi).unwrap();
        for g in 0..small.len() {
            prop_assert!(!small.is_allowable(g) || big.is_allowable(g));
        }
    }

    #[test]
    fn intersection_homology_matches_dense_oracle(st in refined_spheres(), seed in any::<u64>()) {
        let p = random_perversity(st.poset(), &mut rng(seed));
        let main = intersection_homology(&st, &p, Ring::Z).unwrap().betti();
        let len = st.formal_dim() + 1;
        prop_assert_eq!(pad(main, len), pad(intersection_betti_q(&st, &p), len));
    }

    #[test]
    fn classification_is_total(c in coarsenings()) {
        let (fp, cp) = (c.fine().poset(), c.coarse().poset());
        prop_assert_eq!(c.classes().len(), fp.len());
        for t in 0..cp.len() {
            let sources = c.sources_of(t);
            prop_assert!(!sources.is_empty());
            for s in sources {
                prop_assert_eq!(fp.dims[s], cp.dims[t]);
            }
        }
        for s in 0..fp.len() {
            let exceptional = !fp.is_regular(s) && cp.is_regular(c.map()[s]);
            prop_assert_eq!(c.class(s).is_exceptional(), exceptional);
        }
    }

    #[test]
    fn strata_above_exceptional_ones_become_regular(c in coarsenings()) {
        let fp = c.fine().poset();
        for e in c.exceptional() {
            for s in 0..fp.len() {
                if fp.le(e, s) {
                    prop_assert!(c.coarse().poset().is_regular(c.map()[s]));
                }
            }
        }
    }

    #[test]
    fn splitting_off_exceptional_strata_is_idempotent(c in coarsenings()) {
        let split = build_se(&c).unwrap();
        prop_assert!(split.remaining.exceptional().is_empty());
        let again = build_se(&split.remaining).unwrap();
        prop_assert_eq!(again.se.levels(), split.se.levels());
        prop_assert!(again.absorb.is_identity());
    }

    #[test]
    fn simple_chains_compose_to_the_coarsening(c in coarsenings()) {
        let chain = simple_chain(&c).unwrap();
        prop_assert_eq!(chain.is_empty(), c.is_identity());
        let mut total = Coarsening::identity(c.fine().clone());
        for step in &chain {
            prop_assert!(step.is_simple());
            total = total.compose(step).unwrap();
        }
        prop_assert_eq!(total.coarse().levels(), c.coarse().levels());
        prop_assert_eq!(total.map(), c.map());
    }

    #[test]
    fn allowable_simplices_stay_allowable_after_coarsening(c in coarsenings(), seed in any::<u64>()) {
        let Some(p) = random_k_perversity(&c, &mut rng(seed), false) else { return Ok(()) };
        let q = c.pushforward(&p).perversity;
        let fine = AllowabilityTable::new(c.fine(), &p).unwrap();
        let coarse = AllowabilityTable::new(c.coarse(), &q).unwrap();
        for g in 0..fine.len() {
            prop_assert!(!fine.is_allowable(g) || coarse.is_allowable(g), "simplex {}", c.fine().complex().simplex(g));
        }
    }

    #[test]
    fn identity_coarsening_transfers_both_ways(k in 1usize..5, p in prop_oneof![Just(NegInf), Just(PosInf), (-2i64..4).prop_map(Finite)], degree in 0usize..4) {
        let mut calc = Calculator::new();
        with_spheres(&mut calc, 5).unwrap();
        let cone = SymSpace::atom(&format!("S{k}")).cone();
        let perversity = vec![p, Finite(0)];
        let direct = calc.derive(&cone, &perversity, degree).unwrap();
        let id = cone.coarsen(vec![0, 1]);
        let pushed = calc.rule_coarsen(&id, SidedPerversity::Fine(perversity.clone()), degree).unwrap();
        let pulled = calc.rule_coarsen(&id, SidedPerversity::Coarse(pushed.perversity.clone()), degree).unwrap();
        prop_assert!(!pushed.claim.contradicts(&direct.claim));
        prop_assert!(!pulled.claim.contradicts(&pushed.claim));
        // the transfer applies below the top perversity, where it is exact
        if p <= Finite(k as i64 - 1) {
            prop_assert_eq!(&pushed.claim, &direct.claim);
            prop_assert_eq!(&pulled.claim, &direct.claim);
        }
        prop_assert!(calc.consistency_check().consistent());
    }

    #[test]
    fn cones_on_simply_connected_spheres_stay_trivial(k in 2usize..5, p in prop_oneof![Just(NegInf), (-2i64..4).prop_map(Finite), Just(PosInf)]) {
        let mut calc = Calculator::new();
        with_spheres(&mut calc, 5).unwrap();
        let cone = SymSpace::atom(&format!("S{k}")).cone();
        let f = calc.derive(&cone, &[p, Finite(0)], 1).unwrap();
        prop_assert_eq!(f.claim, Claim::Is(SymGroup::Trivial));
    }
}
