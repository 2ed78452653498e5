
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shift_bribery::hardness::{
    aon_to_unit, dummy_election, find_vertex_cover, lift_aon_action, project_unit_action, reduce_clique_aon,
    reduce_dks_aon, reduce_dks_unit, reduce_setcover, reduce_vc3, Graph, Planted, Reduction, SetCoverInstance,
};
use shift_bribery::io::{parse_instance, serialize_instance};
use shift_bribery::oracle::brute_force_opt;
use shift_bribery::scalar::{int, ratio};
use shift_bribery::{classify_prices, cost, width, Extended, Price, PriceFamily, Rule};

fn random_graph(seed: u64, n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn prism() -> Graph {
    Graph::new(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
}

fn check_witness(r: &Reduction) {
    let w = r.witness.as_ref().expect("witness");
    assert!(r.instance.is_successful(&w.action, &r.rule).unwrap());
    let c = cost(&r.instance, &w.action).unwrap();
    assert!(c <= Extended::Finite(w.cost_bound.clone()), "cost {c} above {}", w.cost_bound);
}

fn round_trips(r: &Reduction) {
    let back = parse_instance(&serialize_instance(&r.instance, &r.rule)).unwrap();
    assert_eq!(back.instance, r.instance);
    assert_eq!(back.rule, r.rule);
}

/// Fewest vertices inducing at least `t` edges.
fn fewest_vertices_with_edges(graph: &Graph, t: usize) -> Option<usize> {
    let n = graph.num_vertices();
    (0u32..1 << n)
        .filter(|mask| {
            let chosen: Vec<usize> = (0..n).filter(|u| mask & (1 << u) != 0).collect();
            graph.induced_edges(&chosen).len() >= t
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}

#[test]
fn filler_election_rejects_even_sizes() {
    assert!(dummy_election(&[2, 3], &[4, 5], 0, 1, 0, 0).is_err());
}

#[test]
fn graph_validation() {
    assert!(Graph::new(3, vec![(0, 0)]).is_err());
    assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
    assert!(Graph::new(3, vec![(0, 3)]).is_err());
    assert!(SetCoverInstance::new(2, vec![vec![0, 2]]).is_err());
}

#[test]
fn vc3_rejects_irregular_graphs_and_bad_k() {
    assert!(reduce_vc3(&Graph::complete(5), 3, None).is_err());
    assert!(reduce_vc3(&Graph::complete(4), 4, None).is_err());
}

#[test]
fn generated_instances_round_trip_and_carry_witnesses() {
    let half = ratio(1, 2);
    let k4 = Graph::complete(4);
    let sc = SetCoverInstance::new(3, vec![vec![0, 1], vec![1, 2], vec![2]]).unwrap();
    let all = [
        reduce_dks_aon(&k4, 3, 3, None, &half).unwrap(),
        reduce_dks_unit(&k4, 3, 3, None, &half).unwrap(),
        reduce_clique_aon(&k4, 3, None, &int(1)).unwrap(),
        reduce_setcover(&sc, false, None, &int(0)).unwrap(),
        reduce_setcover(&sc, true, None, &half).unwrap(),
        reduce_vc3(&k4, 3, None).unwrap(),
    ];
    for r in &all {
        check_witness(r);
        round_trips(r);
    }
    assert_eq!(classify_prices(&all[0].instance), PriceFamily::OneInfAllOrNothing);
    assert_eq!(classify_prices(&all[1].instance), PriceFamily::Unit);
    assert_eq!(classify_prices(&all[5].instance), PriceFamily::UniformAllOrNothing);
    assert_eq!(all[5].rule, Rule::Positional);
    assert_eq!(all[3].witness.as_ref().unwrap().planted, Planted::Sets(vec![0, 1]));
}

#[test]
fn vc3_soundness_on_the_prism() {
    let g = prism();
    assert_eq!(find_vertex_cover(&g, 3, 1_000).unwrap(), None);
    let r = reduce_vc3(&g, 3, None).unwrap();
    assert!(r.witness.is_none());
    // With uniform all-or-nothing prices, moving p to the top dominates any
    // partial shift in the same vote, so bribing at most 3 voters fails
    // whenever every top-shift of at most 3 voters fails.
    let voters = r.instance.num_voters();
    for a in 0..voters {
        for b in a..voters {
            for c in b..voters {
                let mut action = r.instance.zero_action();
                for v in [a, b, c] {
                    action.set(v, r.instance.max_shift(v));
                }
                assert!(!r.instance.is_successful(&action, &r.rule).unwrap(), "voters {a} {b} {c}");
            }
        }
    }
    let r = reduce_vc3(&g, 4, None).unwrap();
    check_witness(&r);
    assert_eq!(cost(&r.instance, &r.witness.unwrap().action).unwrap(), Price::from(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dks_optimum_is_the_fewest_vertices_reaching_t_edges(seed in any::<u64>(), n in 2usize..6, t in 1usize..5, tie in 0i64..=2) {
        let g = random_graph(seed, n);
        prop_assume!(t <= g.edges().len());
        let r = reduce_dks_aon(&g, n, t, None, &ratio(tie, 2)).unwrap();
        let opt = brute_force_opt(&r.instance, &r.rule).unwrap().opt_cost;
        let expected = fewest_vertices_with_edges(&g, t).unwrap();
        prop_assert_eq!(opt, Price::from(expected as i64));
        prop_assert!(width(&r.instance).unwrap() <= n);
    }

    #[test]
    fn aon_to_unit_lifts_and_projects(seed in any::<u64>(), n in 3usize..6, t in 1usize..4, b in 1usize..4) {
        let g = random_graph(seed, n);
        prop_assume!(t <= g.edges().len());
        let r = reduce_dks_aon(&g, n, t, None, &ratio(1, 2)).unwrap();
        let b_prime = 5 * b;
        let unit = aon_to_unit(&r.instance, b, b_prime).unwrap();
        prop_assert_eq!(classify_prices(&unit), PriceFamily::Unit);
        let w = r.witness.as_ref().unwrap();
        let lifted = lift_aon_action(&r.instance, &w.action, b).unwrap();
        prop_assert!(unit.is_successful(&lifted, &r.rule).unwrap());
        prop_assert_eq!(project_unit_action(&r.instance, &lifted, b, b_prime), w.action.clone());
        let c = cost(&unit, &lifted).unwrap().into_finite().unwrap();
        let width_bound = int((b + width(&r.instance).unwrap()) as i64) * cost(&r.instance, &w.action).unwrap().into_finite().unwrap();
        prop_assert!(c <= width_bound);
    }
}
