use num_bigint::BigUint;
use proptest::prelude::*;
use walkbounds::bounds::shrink_bound;
use walkbounds::graphwalk::{distance_to_uniform, walk_distribution, walk_product, Counts, DecoratedGraph, Mode};
use walkbounds::groups::{Element, FiniteGroup};

fn z3_graph() -> (DecoratedGraph, FiniteGroup) {
    let group = FiniteGroup::cyclic(3).unwrap();
    let decorations = vec![Element::Cyclic { m: 3, r: 0 }, Element::Cyclic { m: 3, r: 1 }];
    (DecoratedGraph::new(vec![vec![1, 1], vec![1, 1]], decorations).unwrap(), group)
}

fn all_walks(n: usize, start: usize, end: usize, length: usize) -> Vec<Vec<usize>> {
    let mut walks = vec![vec![start]];
    for _ in 0..length {
        walks = walks
            .into_iter()
            .flat_map(|w| (0..n).map(move |v| w.iter().copied().chain([v]).collect()))
            .collect();
    }
    walks.retain(|w: &Vec<usize>| *w.last().unwrap() == end);
    walks
}

#[test]
fn exact_counts_match_enumeration() {
    let (graph, group) = z3_graph();
    for length in 0..8 {
        let dist = walk_distribution(&graph, &group, 0, 1, length, Mode::Exact).unwrap();
        let Counts::Exact(counts) = dist.counts else { unreachable!() };
        let mut expected = vec![0u64; 3];
        for walk in all_walks(2, 0, 1, length) {
            let idx = group.require_index(&walk_product(&graph, &walk).unwrap()).unwrap();
            expected[idx] += 1;
        }
        assert_eq!(counts, expected.into_iter().map(BigUint::from).collect::<Vec<_>>());
    }
}

#[test]
fn exact_and_float_agree_and_converge() {
    let (graph, group) = z3_graph();
    let mut previous = f64::INFINITY;
    for length in 1..16 {
        let exact = distance_to_uniform(&walk_distribution(&graph, &group, 0, 0, length, Mode::Exact).unwrap()).unwrap();
        let float = distance_to_uniform(&walk_distribution(&graph, &group, 0, 0, length, Mode::Float).unwrap()).unwrap();
        assert!((exact.max_deviation - float.max_deviation).abs() < 1e-12);
        assert!(exact.max_deviation <= previous + 1e-15);
        previous = exact.max_deviation;
    }
    assert!(previous < 1e-3);
}

proptest! {
    #[test]
    fn shrink_bound_is_a_contraction(lambda in 0.0f64..0.999, d in 0.0f64..0.999) {
        let b = shrink_bound(lambda, d).unwrap();
        prop_assert!(b.g < 1.0);
        prop_assert!(b.g >= d - 1e-12);
        prop_assert!(b.g >= lambda.min(d) - 1e-12);
    }
}
