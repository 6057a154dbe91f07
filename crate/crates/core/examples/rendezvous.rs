//! A full rendezvous on the figure-eight fixture, printing the message log,
//! then the same session with the link dropping right after the scan round.

use std::path::Path;

use scan_exchange::candidates::{build_geometric, GeometryParams, Trajectory};
use scan_exchange::error::read_file;
use scan_exchange::graph::Side;
use scan_exchange::protocol::{self, parse_ground_truth, BrokerPlacement, RendezvousConfig};
use scan_exchange::rational::format;

fn main() -> scan_exchange::error::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let t1 = Trajectory::read_kitti(
        dir.join("figure_eight_poses1.txt"),
        Some(dir.join("figure_eight_features1.txt")),
    )?;
    let t2 = Trajectory::read_kitti(
        dir.join("figure_eight_poses2.txt"),
        Some(dir.join("figure_eight_features2.txt")),
    )?;
    let p = GeometryParams {
        d_max: 12.0,
        ..Default::default()
    };
    let g = build_geometric(&t1, &t2, &p)?.graph;
    let cfg = RendezvousConfig {
        ground_truth: parse_ground_truth(&read_file(dir.join("figure_eight_ground_truth.txt"))?)?,
        ..Default::default()
    };

    let trace = protocol::run_rendezvous(&g, &cfg)?;
    let log = trace.to_log();
    let lines: Vec<&str> = log.lines().collect();
    for l in lines.iter().take(8) {
        println!("{l}");
    }
    println!("... {} messages in total", lines.len());
    println!(
        "bytes: metadata {} scans {} closures {}",
        format(&trace.metadata_bytes),
        format(&trace.scan_bytes),
        format(&trace.closure_bytes)
    );
    println!(
        "closures found: robot 1 {}, robot 2 {}, both {}",
        trace.discovered[0].len(),
        trace.discovered[1].len(),
        trace.found_by_both().len()
    );

    let offline = RendezvousConfig {
        channel_alive_after_exchange: false,
        ..cfg.clone()
    };
    let t = protocol::run_rendezvous(&g, &offline)?;
    println!(
        "link lost after scans: robot 1 keeps {} closures to itself, robot 2 keeps {}",
        t.undelivered[0].len(),
        t.undelivered[1].len()
    );

    let onboard = RendezvousConfig {
        broker: BrokerPlacement::OnRobot(Side::One),
        ..cfg.clone()
    };
    let t = protocol::run_rendezvous(&g, &onboard)?;
    println!("broker on robot 1: metadata bytes {}", format(&t.metadata_bytes));

    print!(
        "\n{}",
        protocol::strategies_csv(&protocol::compare_strategies(&g, &cfg)?)
    );
    Ok(())
}
