//! `.strat` round trips on generated stratifications and perversities.

use proptest::prelude::*;
use stratum_cli::format::{emit, parse_strat_file, NamedStrat, StratFile};
use stratum_core::extint::{Finite, NegInf, PosInf};
use stratum_core::{ExtInt, Perversity, SimplicialComplex, Stratification, Vertex};

fn values() -> impl Strategy<Value = ExtInt> {
    prop_oneof![Just(NegInf), Just(PosInf), (-4i64..5).prop_map(Finite)]
}

/// Point refinements of a sphere, optionally coned or suspended, with one
/// random perversity attached.
fn files() -> impl Strategy<Value = StratFile> {
    (1usize..4, 0u8..3)
        .prop_flat_map(|(d, shape)| {
            let pts = proptest::sample::subsequence((0..(d as Vertex + 2)).collect::<Vec<_>>(), 0..=d);
            (Just(d), Just(shape), pts, proptest::collection::vec(values(), 8))
        })
        .prop_map(|(d, shape, pts, vals)| {
            let mut st = Stratification::trivial(SimplicialComplex::sphere(d, 0)).unwrap();
            for p in pts {
                st = st.point_refinement(p).unwrap();
            }
            st = match shape {
                0 => st,
                1 => st.cone(40).unwrap(),
                _ => st.join_sphere(0, 40).unwrap(),
            };
            let poset = st.poset().clone();
            let p = Perversity::from_fn(&poset, |s| if poset.is_regular(s) { Finite(0) } else { vals[s % vals.len()] });
            let mut named = NamedStrat::new("main", st);
            named.perversities.push(("p".into(), p));
            StratFile { complex: named.strat.complex().clone(), stratifications: vec![named], coarsenings: Vec::new() }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_text_parses_back(file in files()) {
        let text = emit(&file);
        let back = parse_strat_file(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(emit(&back), text);
    }
}
