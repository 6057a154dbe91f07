mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use scan_exchange::candidates::synthetic::figure_eight_pair;
use scan_exchange::candidates::{build_appearance, build_geometric, AppearanceParams, GeometryParams};
use scan_exchange::graph::ExchangeGraph;
use scan_exchange::policy::{self, Objective, Policy, Variant};
use scan_exchange::protocol::{self, RendezvousConfig};
use scan_exchange::rational::{int, ratio, Rational};
use scan_exchange::solver;
use scan_exchange::sweep::{run_sweep, SweepInput, SweepParam, SweepSpec};

fn all_labels(g: &ExchangeGraph, bits: u64) -> Policy {
    bits_to_policy(g, bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn raising_a_label_never_lowers_cost(seed in any::<u64>(), pick in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 12);
        let n = g.vertex_count();
        let bits = pick & ((1 << n) - 1);
        for variant in [Variant::P1, Variant::P2, Variant::P3] {
            let obj = random_objective(&mut r, variant);
            let base = policy::objective_cost(&g, &all_labels(&g, bits), &obj).unwrap();
            for i in 0..n {
                let up = policy::objective_cost(&g, &all_labels(&g, bits | 1 << i), &obj).unwrap();
                prop_assert!(up >= base);
            }
        }
    }

    #[test]
    fn comm_cost_is_a_sum_over_vertices(seed in any::<u64>(), pick in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 12);
        let bits = pick & ((1 << g.vertex_count()) - 1);
        let pi = all_labels(&g, bits);
        let per_vertex: Rational = pi
            .labels()
            .filter(|&(_, b)| b)
            .map(|(v, _)| g.vertex(v).unwrap().scan_size.clone())
            .sum();
        prop_assert_eq!(policy::comm_cost(&g, &pi).unwrap(), per_vertex.clone());
        if policy::is_admissible(&g, &pi).unwrap() {
            let sent: Rational = policy::execute_order(&g, &pi).unwrap().into_iter().map(|t| t.bytes).sum();
            prop_assert_eq!(sent, per_vertex);
        }
    }

    #[test]
    fn admissible_workloads_cover_every_edge(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 14);
        let pi = solver::solve(&g, &random_objective(&mut r, Variant::P3)).unwrap().policy;
        let w = policy::workloads(&g, &pi, &int(1), &int(1)).unwrap();
        let l1: BTreeSet<_> = w.l1_edges.iter().copied().collect();
        let l2: BTreeSet<_> = w.l2_edges.iter().copied().collect();
        prop_assert_eq!(l1.union(&l2).count(), g.edge_count());
        let both: Vec<_> = l1.intersection(&l2).copied().collect();
        prop_assert_eq!(both, w.l12_edges);
    }

    #[test]
    fn both_robots_find_exactly_the_shared_closures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 14);
        let obj = random_objective(&mut r, Variant::P2);
        let truth: BTreeSet<usize> = (0..g.edge_count()).filter(|_| r.gen_bool(0.5)).collect();
        let cfg = RendezvousConfig {
            objective: obj.clone(),
            ground_truth: truth.iter().map(|&k| g.endpoints(k)).collect(),
            channel_alive_after_exchange: r.gen_bool(0.5),
            ..Default::default()
        };
        let t = protocol::run_rendezvous(&g, &cfg).unwrap();
        let w = policy::workloads(&g, &t.policy, &int(1), &int(1)).unwrap();
        let l12: BTreeSet<usize> = w.l12_edges.into_iter().collect();
        let want: BTreeSet<usize> = l12.intersection(&truth).copied().collect();
        prop_assert_eq!(t.found_by_both(), want);
        if cfg.channel_alive_after_exchange {
            prop_assert_eq!(&t.known[0], &truth);
            prop_assert_eq!(&t.known[1], &truth);
        } else {
            prop_assert!(t.closure_bytes == int(0));
        }
        prop_assert_eq!(t.scan_bytes, solver::solve(&g, &obj).unwrap().optimal_cost);
    }

    #[test]
    fn alpha_sweep_shrinks_candidates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n1, n2) = (r.gen_range(2..20), r.gen_range(2..20));
        let scores: Vec<_> = (0..n1)
            .flat_map(|u| (0..n2).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, r.gen_range(0..100) as f64 / 100.0))
            .collect();
        let w1: Vec<_> = (0..n1).map(|_| positive_rational(&mut r, 50)).collect();
        let w2: Vec<_> = (0..n2).map(|_| positive_rational(&mut r, 50)).collect();
        let params = AppearanceParams { symmetric: r.gen_bool(0.5), ..Default::default() };
        let input = SweepInput::Scores { scores: &scores, w1: &w1, w2: &w2, params: &params };
        let spec = SweepSpec::new(SweepParam::Alpha, int(0), ratio(9, 10), ratio(1, 10)).unwrap();
        let report = run_sweep(&input, &spec, &Objective::p2()).unwrap();
        prop_assert!(report.nested());
        for w in report.rows.windows(2) {
            prop_assert!(w[0].edges >= w[1].edges);
        }
        // A sweep row agrees with solving the graph built at that value.
        let row = &report.rows[3];
        let p = AppearanceParams { alpha: 0.3, ..params };
        let g = build_appearance(&scores, &w1, &w2, &p).unwrap().graph;
        let cost = if g.vertex_count() == 0 { int(0) } else { solver::solve(&g, &Objective::p2()).unwrap().optimal_cost };
        prop_assert_eq!(&row.optimal, &cost);
    }

    #[test]
    fn policy_files_round_trip(seed in any::<u64>(), pick in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 14);
        let pi = all_labels(&g, pick & ((1 << g.vertex_count()) - 1));
        prop_assert_eq!(Policy::from_json(&pi.to_json()).unwrap(), pi);
    }
}

#[test]
fn sweep_output_is_reproducible_and_matches_direct_solves() {
    let (t1, t2) = figure_eight_pair(60);
    let params = GeometryParams::default();
    let input = SweepInput::Poses {
        t1: &t1,
        t2: &t2,
        params: &params,
    };
    let spec = SweepSpec::new(SweepParam::DMax, int(10), int(50), int(10)).unwrap();
    let a = run_sweep(&input, &spec, &Objective::p2()).unwrap();
    let b = run_sweep(&input, &spec, &Objective::p2()).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_gnuplot(), b.to_gnuplot());
    for row in &a.rows {
        assert!(row.optimal <= row.monolog1.clone().min(row.monolog2.clone()));
        let p = GeometryParams {
            d_max: scan_exchange::rational::to_f64(&row.value),
            ..params.clone()
        };
        let g = build_geometric(&t1, &t2, &p).unwrap().graph;
        assert_eq!(row.optimal, solver::solve(&g, &Objective::p2()).unwrap().optimal_cost);
        assert_eq!((row.vertices, row.edges), (g.vertex_count(), g.edge_count()));
    }
}

#[test]
fn omega_trades_bytes_for_balance() {
    let mut r = rng(21);
    for _ in 0..40 {
        let g = random_graph(&mut r, 14);
        let (a1, a2) = (positive_rational(&mut r, 5), positive_rational(&mut r, 5));
        let spec = SweepSpec::new(SweepParam::Omega, int(0), int(6), ratio(1, 2)).unwrap();
        let base = Objective::p3(a1.clone(), a2.clone(), int(0)).unwrap();
        let report = run_sweep(&SweepInput::Graph(&g), &spec, &base).unwrap();
        let balance = |omega: &Rational| {
            let pi = solver::solve(&g, &Objective::p3(a1.clone(), a2.clone(), omega.clone()).unwrap())
                .unwrap()
                .policy;
            policy::workloads(&g, &pi, &a1, &a2).unwrap().balance
        };
        for w in report.rows.windows(2) {
            // Pricing workload higher never raises it and never lowers the bytes sent.
            assert!(w[0].optimal <= w[1].optimal);
            assert!(balance(&w[0].value) >= balance(&w[1].value));
        }
        assert_eq!(
            report.rows[0].optimal,
            solver::solve(&g, &Objective::p2()).unwrap().optimal_cost
        );
    }
}
