//! Cost curves on the synthetic trajectories: the optimal policy against
//! both monologs and full bidirectional exchange, as the candidate radius
//! and the required view overlap change.

use scan_exchange::candidates::synthetic::{elongated_loop, figure_eight_pair};
use scan_exchange::candidates::GeometryParams;
use scan_exchange::policy::Objective;
use scan_exchange::rational::{int, ratio};
use scan_exchange::sweep::{run_sweep, savings, SweepInput, SweepParam, SweepSpec};

fn main() -> scan_exchange::error::Result<()> {
    let (t1, t2) = figure_eight_pair(100);
    let params = GeometryParams::default();
    let input = SweepInput::Poses {
        t1: &t1,
        t2: &t2,
        params: &params,
    };

    let dmax = run_sweep(
        &input,
        &SweepSpec::new(SweepParam::DMax, int(5), int(50), int(5))?,
        &Objective::p2(),
    )?;
    println!("figure-eight, d_max sweep (nested: {})", dmax.nested());
    print!("{}", dmax.to_csv());

    let eta = run_sweep(
        &input,
        &SweepSpec::new(SweepParam::Eta, int(0), ratio(9, 10), ratio(1, 10))?,
        &Objective::p2(),
    )?;
    println!("\nfigure-eight, eta sweep (nested: {})", eta.nested());
    print!("{}", eta.to_csv());

    let (a, b) = elongated_loop(400);
    let input = SweepInput::Poses {
        t1: &a,
        t2: &b,
        params: &params,
    };
    let eta = run_sweep(
        &input,
        &SweepSpec::new(SweepParam::Eta, int(0), ratio(9, 10), ratio(1, 10))?,
        &Objective::p2(),
    )?;
    println!("\nelongated loop, eta sweep (nested: {})", eta.nested());
    print!("{}", eta.to_csv());
    let s: Vec<String> = savings(&eta).iter().map(ToString::to_string).collect();
    println!("savings over the best monolog: {}", s.join(" "));
    Ok(())
}
