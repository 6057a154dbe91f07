//! When is it enough for one robot to send everything?
//!
//! A monolog is optimal exactly when no group of its poses outweighs the
//! poses they connect to. The certifier either confirms this or returns such
//! a group together with a cheaper policy.

use scan_exchange::graph::{build_graph, ExchangeGraph, Side};
use scan_exchange::policy::Objective;
use scan_exchange::rational::{format, int, Rational};
use scan_exchange::solver;

fn report(name: &str, g: &ExchangeGraph, side: Side) -> scan_exchange::error::Result<()> {
    let c = solver::check_ghc(g, &Objective::p2(), side)?;
    print!("{name}: monolog{side} ");
    if c.holds {
        println!("is optimal (cost {})", format(&c.monolog_cost));
    } else {
        let s: Vec<String> = c.witness.iter().map(ToString::to_string).collect();
        println!(
            "is not optimal: {{{}}} weighs {} but its neighbours only {}; switching costs {} instead of {}",
            s.join(", "),
            format(&c.witness_weight),
            format(&c.neighbourhood_weight),
            format(c.improving_cost.as_ref().unwrap()),
            format(&c.monolog_cost)
        );
    }
    Ok(())
}

fn main() -> scan_exchange::error::Result<()> {
    // Complete bipartite K_{3,5} with unit scans: the smaller side should talk.
    let edges: Vec<_> = (0..3).flat_map(|u| (0..5).map(move |v| (u, v, int(1)))).collect();
    let k35 = build_graph(&vec![int(1); 3], &vec![int(1); 5], &edges)?.graph;
    report("K_3,5", &k35, Side::One)?;
    report("K_3,5", &k35, Side::Two)?;
    println!(
        "  unit-weight shortcut agrees: {}",
        solver::check_hall_uniform(&k35, &Objective::p2(), Side::One)?
    );

    // A 3-regular ring: both monologs tie with the optimum.
    let n = 6;
    let ring: Vec<_> = (0..n)
        .flat_map(|u| (0..3).map(move |d| (u, (u + d) % n, int(1))))
        .collect();
    let g = build_graph(&vec![int(1); n], &vec![int(1); n], &ring)?.graph;
    report("3-regular", &g, Side::One)?;
    println!("  maximum matching {}", solver::maximum_matching_size(&g));

    // Heavy scans on side 1 behind a single cheap side-2 pose.
    let w1: Vec<Rational> = vec![int(40), int(35), int(50)];
    let w2: Vec<Rational> = vec![int(20), int(60)];
    let g = build_graph(
        &w1,
        &w2,
        &[(0, 0, int(1)), (1, 0, int(1)), (2, 0, int(1)), (2, 1, int(1))],
    )?
    .graph;
    report("weighted", &g, Side::One)?;
    report("weighted", &g, Side::Two)?;
    Ok(())
}
