//! Building an exchange graph from two pose files in KITTI odometry format.
//!
//! Pass your own files as `poses1 poses2 [features1 features2]`; with no
//! arguments the bundled figure-eight fixture is used.

use std::path::PathBuf;

use scan_exchange::candidates::{build_geometric, fov_overlap, GeometryParams, Trajectory};
use scan_exchange::graph::Side;
use scan_exchange::rational::format;

fn main() -> scan_exchange::error::Result<()> {
    let args: Vec<PathBuf> = std::env::args_os().skip(1).map(PathBuf::from).collect();
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let (t1, t2) = match args.as_slice() {
        [p1, p2] => (
            Trajectory::read_kitti(p1, None::<&PathBuf>)?,
            Trajectory::read_kitti(p2, None::<&PathBuf>)?,
        ),
        [p1, p2, f1, f2] => (
            Trajectory::read_kitti(p1, Some(f1))?,
            Trajectory::read_kitti(p2, Some(f2))?,
        ),
        _ => (
            Trajectory::read_kitti(
                fixtures.join("figure_eight_poses1.txt"),
                Some(fixtures.join("figure_eight_features1.txt")),
            )?,
            Trajectory::read_kitti(
                fixtures.join("figure_eight_poses2.txt"),
                Some(fixtures.join("figure_eight_features2.txt")),
            )?,
        ),
    };
    println!("robot 1: {} poses, robot 2: {} poses", t1.len(), t2.len());

    for (d_max, eta, rate) in [(10.0, 0.0, 1), (30.0, 0.0, 1), (30.0, 0.5, 1), (30.0, 0.0, 2)] {
        let p = GeometryParams {
            d_max,
            eta,
            rate_divisor: rate,
            ..Default::default()
        };
        let out = build_geometric(&t1, &t2, &p)?;
        let g = &out.graph;
        let bytes: Vec<String> = Side::BOTH
            .iter()
            .map(|&s| format(&g.vertices(s).iter().map(|v| v.scan_size.clone()).sum()))
            .collect();
        println!(
            "d_max {d_max:>4} eta {eta:.1} every {rate} pose(s): {} candidates, {} + {} poses kept \
             ({} dropped), scan bytes {} / {}",
            g.edge_count(),
            g.vertices(Side::One).len(),
            g.vertices(Side::Two).len(),
            out.pruned.len(),
            bytes[0],
            bytes[1]
        );
    }

    let (a, b) = (&t1.poses()[0], &t2.poses()[0]);
    println!(
        "first poses are {:.1} m apart with view overlap {:.3}",
        a.distance(b),
        fov_overlap(a, b, 0.7, 30.0)
    );
    Ok(())
}
