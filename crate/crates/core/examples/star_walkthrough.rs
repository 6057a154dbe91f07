//! The four-by-four star graph: one hub pose on each robot that matches every
//! pose of the other robot. Sending both hubs is enough to check all seven
//! candidates, half the cost of either monolog.

use scan_exchange::graph::{build_graph, Side};
use scan_exchange::policy::{self, Objective};
use scan_exchange::rational::{format, int};
use scan_exchange::solver;

fn main() -> scan_exchange::error::Result<()> {
    let ones = vec![int(1); 4];
    let edges: Vec<_> = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]
        .into_iter()
        .map(|(u, v)| (u, v, int(1)))
        .collect();
    let g = build_graph(&ones, &ones, &edges)?.graph;

    let r = solver::solve(&g, &Objective::p2())?;
    let cover: Vec<String> = r.policy.cover().iter().map(ToString::to_string).collect();
    println!(
        "optimal cost {} via {}, sending {}",
        format(&r.optimal_cost),
        r.method,
        cover.join(", ")
    );
    println!("dual certificate {:?}", r.certificate);
    for side in Side::BOTH {
        println!(
            "monolog{side} cost {}",
            format(&solver::monolog_cost(&g, &Objective::p2(), side))
        );
    }

    let w = policy::workloads(&g, &r.policy, &int(1), &int(1))?;
    let show = |ks: &[usize]| -> String {
        ks.iter()
            .map(|&k| {
                let (u, v) = g.endpoints(k);
                format!("{u}-{v}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("robot 1 verifies {}", show(&w.l1_edges));
    println!("robot 2 verifies {}", show(&w.l2_edges));
    println!("both verify      {}", show(&w.l12_edges));
    println!("workloads ell1 = {}, ell2 = {}", format(&w.ell1), format(&w.ell2));

    for t in policy::execute_order(&g, &r.policy)? {
        println!("send scan {} to robot {} ({} bytes)", t.vertex, t.to, format(&t.bytes));
    }

    let brute = solver::solve_exhaustive(&g, &Objective::p2())?;
    println!(
        "exhaustive check: {} over {:?}",
        format(&brute.optimal_cost),
        brute.certificate
    );
    Ok(())
}
