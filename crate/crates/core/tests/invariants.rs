use proptest::prelude::*;

use gwnull_core::algebra::{export_system, parse_system, ParsedSystem};
use gwnull_core::oracle::{gw_classical, struct_const};
use gwnull_core::splits::enumerate_splits;
use gwnull_core::sysbuild::{assemble_system, BuildMode, BuildOptions};
use gwnull_core::woodward::{correction_element, lift_degrees, lifts_within, reduce_to_complete};
use gwnull_core::{decide, DeciderConfig, Decision, FlagShape, GwInstance, Permutation};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn triple(lo: usize, hi: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (lo..=hi).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
}

fn shape_and_degree() -> impl Strategy<Value = (FlagShape, Vec<u32>)> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::btree_set(1..n, 1..n)))
        .prop_flat_map(|(n, a)| {
            let k = a.len();
            (Just(FlagShape::new(n, a.into_iter().collect()).unwrap()), prop::collection::vec(0u32..=3, k))
        })
}

fn conj(w: &Permutation) -> Permutation {
    let w0 = Permutation::longest(w.n());
    w0.compose(w).compose(&w0)
}

fn quick() -> DeciderConfig {
    DeciderConfig { trials: 3, parallel: false, ..DeciderConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_and_length(w in (2usize..=6).prop_flat_map(perm)) {
        prop_assert!(w.compose(&w.inverse()).is_identity());
        prop_assert_eq!(w.inverse().length(), w.length());
        let top = w.n() * (w.n() - 1) / 2;
        prop_assert_eq!(w.poincare_dual().length(), top - w.length());
        prop_assert_eq!(Permutation::from_code(&w.code()), w);
    }

    #[test]
    fn structure_constants_are_symmetric((u, v, w) in triple(2, 4)) {
        let c = struct_const(&u, &v, &w);
        prop_assert!(c >= 0);
        prop_assert_eq!(c, struct_const(&v, &u, &w));
        prop_assert_eq!(c, struct_const(&conj(&u), &conj(&v), &conj(&w)));
        if u.length() + v.length() != w.length() {
            prop_assert_eq!(c, 0);
        }
    }

    #[test]
    fn classical_invariant_is_cyclic((u, v, w) in triple(2, 4)) {
        let g = gw_classical(&u, &v, &w);
        prop_assert_eq!(g, gw_classical(&v, &w, &u));
        prop_assert_eq!(g, gw_classical(&w, &u, &v));
    }

    #[test]
    fn lifts_are_unique_and_reduce((shape, d) in shape_and_degree()) {
        let dhat = lift_degrees(&shape, &d).unwrap();
        let bound = d.iter().sum::<u32>() + 1;
        prop_assert_eq!(lifts_within(&shape, &d, bound), vec![dhat.clone()]);
        let n = shape.n();
        let id = Permutation::identity(n);
        let inst = GwInstance::new(shape.clone(), d.clone(), id.clone(), id.clone(), id).unwrap();
        let complete = reduce_to_complete(&inst).unwrap();
        prop_assert_eq!(&complete.dhat, &dhat);
        prop_assert_eq!(complete.w, correction_element(&shape, &dhat));
    }

    #[test]
    fn built_systems_round_trip_as_text((u, v, w) in triple(2, 3), mode in prop::sample::select(BuildMode::ALL.to_vec())) {
        let n = u.n();
        let inst = GwInstance::complete(vec![0; n - 1], u, v, w).unwrap();
        let complete = reduce_to_complete(&inst).unwrap();
        let split = enumerate_splits(&complete.dhat).unwrap().remove(0);
        let b = assemble_system(&complete, &split, &BuildOptions { mode, per_h_st: false });
        let text = export_system(&b.system);
        let ParsedSystem::Rational(back) = parse_system(&text).unwrap() else { panic!("rational system expected") };
        prop_assert_eq!(export_system(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_zero_decisions_match_structure_constants((u, v, w) in triple(2, 4)) {
        let n = u.n();
        let expect = if gw_classical(&u, &v, &w) != 0 { Decision::Nonvanishing } else { Decision::Vanishing };
        let inst = GwInstance::complete(vec![0; n - 1], u, v, w).unwrap();
        let cfg = quick();
        let first = decide(&inst, &cfg).unwrap();
        prop_assert_eq!(first.decision, expect);
        prop_assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&decide(&inst, &cfg).unwrap()).unwrap());
    }
}
