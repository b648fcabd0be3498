use covertree::bitree::{build_descendant, build_symmetric, CoverageMode};
use covertree::covering_dp::{node_penalties, solve_indirect};
use covertree::instance::{
    distances_from, normalize_degree, parse_instance, parse_structured, serialize, serialize_structured, Instance,
};
use covertree::medianoid::{solve_medianoid, MedianoidInstance};
use covertree::oracles::{gen_random_tree, GenConfig, Shape};
use covertree::penalty_engine::compute_all_penalties;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        Just(Shape::UniformRandom),
        Just(Shape::Path),
        Just(Shape::Caterpillar),
        Just(Shape::Star),
        Just(Shape::BalancedBinary),
    ]
}

fn instance(nmax: usize) -> impl Strategy<Value = Instance> {
    (any::<u64>(), shape(), 0u64..30).prop_map(move |(seed, shape, rmax)| {
        gen_random_tree(&GenConfig { seed, n: 1..=nmax, radius: 0..=rmax, shape, ..GenConfig::default() }).unwrap()
    })
}

const MODES: [CoverageMode; 2] = [CoverageMode::Weak, CoverageMode::Strict];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalization_keeps_distances(t in instance(40)) {
        let nt = normalize_degree(&t, 0);
        for v in 0..nt.n() {
            prop_assert!(nt.instance().degree(v) <= 3);
        }
        for u in 0..t.n() {
            let before = distances_from(&t, u).unwrap();
            let after = distances_from(nt.instance(), nt.canonical(u)).unwrap();
            for v in 0..t.n() {
                prop_assert_eq!(before[v], after[nt.canonical(v)]);
            }
        }
    }

    #[test]
    fn text_round_trip(t in instance(30)) {
        prop_assert_eq!(parse_instance(&serialize(&t)).unwrap(), t.clone());
        prop_assert_eq!(parse_structured(&serialize_structured(&t)).unwrap(), t);
    }

    #[test]
    fn penalties_bounded_by_total(t in instance(60)) {
        let nt = normalize_degree(&t, 0);
        for b in [build_symmetric(&nt), build_descendant(&nt)] {
            for mode in MODES {
                let p = compute_all_penalties(&b, mode);
                prop_assert!(p.iter().all(|&x| x <= b.total_penalty()));
            }
        }
    }

    #[test]
    fn strict_never_cheaper(t in instance(40)) {
        let weak = node_penalties(&t, CoverageMode::Weak);
        let strict = node_penalties(&t, CoverageMode::Strict);
        prop_assert!(weak.iter().zip(&strict).all(|(w, s)| w <= s));
        prop_assert!(solve_indirect(&t, CoverageMode::Weak).total <= solve_indirect(&t, CoverageMode::Strict).total);
    }

    #[test]
    fn larger_radii_never_cost_more(t in instance(40), extra in 1u64..10) {
        let wider = t.with_node_data(t.penalties().to_vec(), t.radii().iter().map(|r| r + extra).collect()).unwrap();
        for mode in MODES {
            let before = node_penalties(&t, mode);
            let after = node_penalties(&wider, mode);
            prop_assert!(after.iter().zip(&before).all(|(a, b)| a <= b));
            prop_assert!(solve_indirect(&wider, mode).total <= solve_indirect(&t, mode).total);
        }
    }

    #[test]
    fn optimum_at_most_best_single_node(t in instance(40)) {
        for mode in MODES {
            let best_single = node_penalties(&t, mode).into_iter().min().unwrap();
            prop_assert!(solve_indirect(&t, mode).total <= best_single);
        }
    }

    #[test]
    fn more_competitors_capture_less(t in instance(40), picks in proptest::collection::vec(any::<prop::sample::Index>(), 2..5)) {
        let ids: Vec<usize> = picks.iter().map(|i| i.index(t.n())).collect();
        let small = solve_medianoid(&MedianoidInstance::new(t.clone(), ids[..1].to_vec()).unwrap()).unwrap();
        let large = solve_medianoid(&MedianoidInstance::new(t, ids).unwrap()).unwrap();
        prop_assert!(large.capture.iter().zip(&small.capture).all(|(l, s)| l <= s));
        prop_assert!(large.captured <= small.captured);
    }
}
