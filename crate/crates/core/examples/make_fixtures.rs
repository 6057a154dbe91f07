//! Regenerates everything under `fixtures/`.
//!
//! Run with `cargo run --example make_fixtures`. Output is deterministic, so
//! a clean checkout followed by this command leaves the tree unchanged.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scan_exchange::candidates::synthetic::{elongated_loop, figure_eight_pair};
use scan_exchange::candidates::{build_geometric, fov_overlap, GeometryParams, Trajectory};
use scan_exchange::graph::build_graph;
use scan_exchange::rational::int;

fn write(dir: &Path, name: &str, text: &str) {
    let path = dir.join(name);
    fs::write(&path, text).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn trajectories(dir: &Path, prefix: &str, t1: &Trajectory, t2: &Trajectory) {
    write(dir, &format!("{prefix}_poses1.txt"), &t1.to_kitti());
    write(dir, &format!("{prefix}_poses2.txt"), &t2.to_kitti());
    write(dir, &format!("{prefix}_features1.txt"), &t1.feature_counts_text());
    write(dir, &format!("{prefix}_features2.txt"), &t2.feature_counts_text());

    // Ids in the files are line numbers, so label closures on the re-read
    // trajectories. A candidate is a true closure when the poses are close and
    // look the same way.
    let reread = |t: &Trajectory| {
        let counts: Vec<u64> = t.poses().iter().map(|p| p.feature_count).collect();
        Trajectory::from_kitti(&t.to_kitti(), Some(&counts)).expect("fixture round trip")
    };
    let (t1, t2) = (&reread(t1), &reread(t2));
    let p = GeometryParams::default();
    let g = build_geometric(t1, t2, &p).expect("fixture graph").graph;
    let mut truth = String::from("# side-1 pose id, side-2 pose id\n");
    for k in 0..g.edge_count() {
        let (u, v) = g.endpoints(k);
        let a = t1.poses().iter().find(|x| x.id == u.index).unwrap();
        let b = t2.poses().iter().find(|x| x.id == v.index).unwrap();
        if a.distance(b) <= 10.0 && fov_overlap(a, b, p.fov_half_angle, p.fov_range) >= 0.2 {
            writeln!(truth, "{} {}", u.index, v.index).unwrap();
        }
    }
    write(dir, &format!("{prefix}_ground_truth.txt"), &truth);
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(&dir).expect("fixture directory");

    let ones = vec![int(1); 4];
    let fig2: Vec<_> = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]
        .into_iter()
        .map(|(u, v)| (u, v, int(1)))
        .collect();
    write(
        &dir,
        "fig2.json",
        &build_graph(&ones, &ones, &fig2).unwrap().graph.to_json(),
    );
    write(
        &dir,
        "single_edge.json",
        &build_graph(&[int(5)], &[int(3)], &[(0, 0, int(1))])
            .unwrap()
            .graph
            .to_json(),
    );

    let (t1, t2) = figure_eight_pair(100);
    trajectories(&dir, "figure_eight", &t1, &t2);
    let (t1, t2) = elongated_loop(400);
    trajectories(&dir, "elongated_loop", &t1, &t2);

    // Appearance scores for 60 queries against 60 database images.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut scores = String::from("# query database score\n");
    for u in 0..60 {
        for v in 0..60 {
            let near = (u as i64 - v as i64).abs() <= 2;
            let s: f64 = if near {
                rng.gen_range(0.15..0.9)
            } else {
                rng.gen_range(0.0..0.35)
            };
            writeln!(scores, "{u} {v} {s:.4}").unwrap();
        }
    }
    write(&dir, "scores.txt", &scores);
    let weights =
        |rng: &mut ChaCha8Rng| -> String { (0..60).map(|_| format!("{}\n", 32 * rng.gen_range(150..400))).collect() };
    write(&dir, "weights1.txt", &weights(&mut rng));
    write(&dir, "weights2.txt", &weights(&mut rng));
}
