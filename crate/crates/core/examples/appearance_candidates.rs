//! Candidates from place-recognition scores: each query keeps its two best
//! database matches above a similarity threshold.

use std::path::Path;

use scan_exchange::candidates::{build_appearance, parse_scores, parse_weights, AppearanceParams};
use scan_exchange::error::read_file;
use scan_exchange::policy::Objective;
use scan_exchange::rational::format;
use scan_exchange::solver;

fn main() -> scan_exchange::error::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let scores = parse_scores(&read_file(dir.join("scores.txt"))?)?;
    let w1 = parse_weights(&read_file(dir.join("weights1.txt"))?)?;
    let w2 = parse_weights(&read_file(dir.join("weights2.txt"))?)?;

    println!("alpha  symmetric  edges  optimal  monolog1  monolog2");
    for symmetric in [false, true] {
        for alpha in [0.2, 0.3, 0.4, 0.5, 0.6, 0.7] {
            let p = AppearanceParams {
                alpha,
                top_k: 2,
                symmetric,
            };
            let g = build_appearance(&scores, &w1, &w2, &p)?.graph;
            if g.is_empty() {
                println!("{alpha:.1}    {symmetric:<9}  0");
                continue;
            }
            let obj = Objective::p2();
            let r = solver::solve(&g, &obj)?;
            println!(
                "{alpha:.1}    {symmetric:<9}  {:<5}  {:<7}  {:<8}  {}",
                g.edge_count(),
                format(&r.optimal_cost),
                format(&solver::monolog_cost(&g, &obj, scan_exchange::graph::Side::One)),
                format(&solver::monolog_cost(&g, &obj, scan_exchange::graph::Side::Two)),
            );
        }
    }
    Ok(())
}
