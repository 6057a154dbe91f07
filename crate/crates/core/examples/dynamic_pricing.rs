//! Trading bandwidth against verification work, and pricing poses by
//! something other than their size.

use scan_exchange::graph::{build_graph, Side, VertexId};
use scan_exchange::policy::{self, Objective};
use scan_exchange::rational::{format, int, ratio};
use scan_exchange::solver;
use scan_exchange::sweep::{run_sweep, SweepInput, SweepParam, SweepSpec};

fn main() -> scan_exchange::error::Result<()> {
    // Robot 2 has a fast computer (alpha2 small), robot 1 a slow one.
    let w1 = vec![int(30), int(30), int(30)];
    let w2 = vec![int(10), int(40)];
    let edges = [(0, 0, int(2)), (1, 0, int(1)), (2, 0, int(1)), (2, 1, int(3))];
    let g = build_graph(&w1, &w2, &edges)?.graph;
    let (a1, a2) = (int(4), int(1));

    let bal = solver::solve(&g, &Objective::p1(a1.clone(), a2.clone())?)?;
    let closed = solver::p1_closed_form(&g, &a1, &a2)?;
    println!(
        "balanced workload: cost {} (closed form {})",
        format(&bal.optimal_cost),
        format(&closed.optimal_cost)
    );

    let spec = SweepSpec::new(SweepParam::Omega, int(0), int(20), int(2))?;
    let base = Objective::p3(a1.clone(), a2.clone(), int(0))?;
    let report = run_sweep(&SweepInput::Graph(&g), &spec, &base)?;
    println!("\nscan bytes of the best policy as workload matters more (omega):");
    print!("{}", report.to_csv());

    // Robot 1 does not want pose 2 leaving the robot; price it prohibitively.
    let private = VertexId::new(Side::One, 2);
    let priced = g.with_inertia([(private, Some(int(1000)))])?;
    let r = solver::solve(&priced, &Objective::p2())?;
    println!(
        "\nwith pose {private} priced at 1000: send {:?}",
        r.policy.cover().iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    println!(
        "bytes on the wire {}",
        format(&policy::transmitted_bytes(&priced, &r.policy)?)
    );

    // A discount makes a pose cheap to share.
    let cheap = g.with_inertia([(VertexId::new(Side::Two, 1), Some(ratio(1, 2)))])?;
    let r = solver::solve(&cheap, &Objective::p2())?;
    println!(
        "with pose 2:1 discounted to 1/2: price paid {}",
        format(&r.optimal_cost)
    );
    Ok(())
}
