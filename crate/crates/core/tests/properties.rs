mod common;

use chore_sched::checkers::{check_efk, is_pareto_optimal};
use chore_sched::instance::path_order;
use chore_sched::io::{instance_to_json, parse_instance, parse_schedule, schedule_to_json};
use chore_sched::n_agent::envy_graph;
use chore_sched::oracle::{enumerate_maximal, exists, max_utilitarian_maximal, Criterion, ExistenceQuery};
use chore_sched::two_agent::solve_two_agents;
use chore_sched::{check_ef1, is_maximal, order_by_finish, path_instance, Chore, Instance, Schedule, Valuations};
use proptest::prelude::*;

fn arb_instance(
    agents: std::ops::RangeInclusive<usize>,
    chores: std::ops::RangeInclusive<usize>,
    identical: bool,
) -> impl Strategy<Value = Instance> {
    (agents, chores).prop_flat_map(move |(n, m)| {
        let intervals = prop::collection::vec((0u64..20, 1u64..7), m);
        let rows = if identical {
            prop::collection::vec(-10i64..=0, m)
                .prop_map(move |row| vec![row; n])
                .boxed()
        } else {
            prop::collection::vec(prop::collection::vec(-10i64..=0, m), n).boxed()
        };
        (intervals, rows).prop_map(move |(iv, rows)| {
            let chores = iv
                .iter()
                .enumerate()
                .map(|(i, &(s, len))| Chore::new(i, s, s + len))
                .collect();
            Instance::new(n, chores, Valuations::Additive(rows)).unwrap()
        })
    })
}

/// An arbitrary feasible schedule: a random assignment with every chore
/// that clashes with an earlier chore of the same agent dropped.
fn arb_with_schedule(inst: impl Strategy<Value = Instance>) -> impl Strategy<Value = (Instance, Schedule)> {
    inst.prop_flat_map(|inst| {
        let n = inst.agents();
        let m = inst.chore_count();
        let assignment = prop::collection::vec(prop::option::of(0..n), m);
        (Just(inst), assignment).prop_map(move |(inst, a)| {
            let mut s = Schedule::empty(n, m);
            for (c, agent) in a.into_iter().enumerate() {
                if let Some(agent) = agent {
                    if s.fits(c, agent, inst.graph()) {
                        s.set(c, Some(agent));
                    }
                }
            }
            (inst, s)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn conflict_graph_matches_interval_overlap(inst in arb_instance(1..=2, 0..=12, false)) {
        let chores = inst.chores();
        for a in 0..chores.len() {
            for b in 0..chores.len() {
                let expected = a != b && common::overlaps(&chores[a], &chores[b]);
                prop_assert_eq!(inst.graph().conflicts(a, b), expected);
            }
        }
    }

    #[test]
    fn finish_order_is_a_sorted_permutation(inst in arb_instance(1..=1, 0..=12, false)) {
        let order = order_by_finish(inst.chores());
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..inst.chore_count()).collect::<Vec<_>>());
        prop_assert!(order.windows(2).all(|w| inst.chore(w[0]).finish <= inst.chore(w[1]).finish));
    }

    #[test]
    fn path_instances_are_paths(m in 2usize..15, n in 1usize..4) {
        let inst = path_instance(vec![vec![-1; m]; n]).unwrap();
        prop_assert!(inst.graph().is_path());
        prop_assert_eq!(path_order(&inst).map(|o| o.len()), Some(m));
    }

    #[test]
    fn enumeration_matches_naive_recount(inst in arb_instance(1..=3, 0..=6, false)) {
        let fast = enumerate_maximal(&inst, 16).unwrap();
        let naive = common::all_maximal(&inst);
        prop_assert_eq!(fast.len(), naive.len());
        for s in &fast {
            prop_assert!(common::feasible(&inst, s) && common::maximal(&inst, s));
        }
        let keys: Vec<Vec<usize>> = fast
            .iter()
            .map(|s| s.assignment().iter().map(|a| a.map_or(0, |a| a + 1)).collect())
            .collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]), "not strictly lexicographic");
    }

    #[test]
    fn utilitarian_optimum_is_pareto_optimal(inst in arb_instance(2..=3, 0..=6, false)) {
        let best = max_utilitarian_maximal(&inst, 16).unwrap();
        prop_assert!(is_pareto_optimal(&best, &inst).unwrap());
    }

    #[test]
    fn identical_envy_graphs_are_acyclic((inst, s) in arb_with_schedule(arb_instance(2..=5, 0..=10, true))) {
        prop_assert!(envy_graph(&s, &inst).is_acyclic());
    }

    #[test]
    fn maximal_means_complete_on_paths_with_three_agents(m in 0usize..8, n in 3usize..5) {
        let inst = path_instance(vec![vec![-1; m]; n]).unwrap();
        for s in enumerate_maximal(&inst, 16).unwrap() {
            prop_assert!(s.is_complete());
        }
    }

    #[test]
    fn checkers_agree_with_reference((inst, s) in arb_with_schedule(arb_instance(2..=3, 0..=7, false))) {
        prop_assert_eq!(check_ef1(&s, &inst).unwrap().holds, common::ef1(&inst, &s));
        for k in 0..=2 {
            prop_assert_eq!(check_efk(&s, &inst, k).unwrap().holds, common::envy_free_up_to(&inst, &s, k));
        }
    }

    #[test]
    fn two_agent_solution_is_an_oracle_witness(inst in arb_instance(2..=2, 0..=8, false)) {
        let s = solve_two_agents(&inst).unwrap();
        prop_assert!(common::feasible(&inst, &s) && common::maximal(&inst, &s) && common::ef1(&inst, &s));
        prop_assert!(is_maximal(&s, inst.graph()).unwrap());
        prop_assert!(exists(&inst, &ExistenceQuery::new(Criterion::Ef1)).unwrap().is_some());
    }

    #[test]
    fn files_round_trip((inst, s) in arb_with_schedule(arb_instance(1..=3, 0..=8, false))) {
        let back = parse_instance(&instance_to_json(&inst).unwrap()).unwrap();
        prop_assert_eq!(back.chores(), inst.chores());
        prop_assert_eq!(back.valuations().additive(), inst.valuations().additive());
        prop_assert_eq!(back.agents(), inst.agents());
        prop_assert_eq!(parse_schedule(&schedule_to_json(&s), &inst).unwrap(), s);
    }
}
