//! Deterministic synthetic trajectories for experiments and fixtures.
//!
//! Feature counts come from a smooth "scene detail" field plus a per-pose
//! jitter, so weights vary along the route the way ORB counts do on real
//! imagery. Robot 2's camera yields fewer features than robot 1's.

use std::f64::consts::PI;

use super::trajectory::{yaw_rotation, Pose, Trajectory};

/// Cheap integer hash for reproducible jitter.
fn jitter(seed: u64, i: u64) -> f64 {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 31;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 29;
    (x % 10_000) as f64 / 10_000.0
}

fn scene_detail(x: f64, z: f64) -> f64 {
    220.0 + 130.0 * (x / 13.0).sin() * (z / 9.0).cos() + 60.0 * (x / 31.0 + z / 17.0).cos()
}

fn build(points: Vec<[f64; 2]>, camera_gain: f64, seed: u64) -> Trajectory {
    let n = points.len();
    let poses = (0..n)
        .map(|i| {
            let next = points[(i + 1).min(n - 1)];
            let prev = points[i.saturating_sub(1)];
            let yaw = (next[1] - prev[1]).atan2(next[0] - prev[0]);
            let [x, z] = points[i];
            let features = camera_gain * scene_detail(x, z) * (0.75 + 0.5 * jitter(seed, i as u64));
            Pose {
                id: i as u64,
                position: [x, 0.0, z],
                rotation: yaw_rotation(yaw),
                feature_count: features.round().max(1.0) as u64,
                stamp: i as u64,
            }
        })
        .collect();
    Trajectory::new(poses).expect("synthetic poses are valid")
}

/// Two robots each driving a figure-eight (two loops crossing at the
/// origin). Robot 2's route is offset, slightly larger, and driven in the
/// opposite direction with a phase shift.
pub fn figure_eight_pair(n: usize) -> (Trajectory, Trajectory) {
    let route = |scale: f64, offset: [f64; 2], phase: f64, dir: f64| -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| {
                let t = phase + dir * 2.0 * PI * i as f64 / n as f64;
                [
                    offset[0] + scale * 60.0 * t.sin(),
                    offset[1] + scale * 45.0 * t.sin() * t.cos(),
                ]
            })
            .collect()
    };
    (
        build(route(1.0, [0.0, 0.0], 0.0, 1.0), 1.0, 1),
        build(route(1.08, [7.0, 4.0], 0.9, -1.0), 0.85, 2),
    )
}

/// A long, thin out-and-back loop (a stadium 360 m by 18 m), the first half
/// driven by robot 1 and the second half by robot 2.
pub fn elongated_loop(n: usize) -> (Trajectory, Trajectory) {
    let (length, half_width) = (360.0, 9.0);
    let turn = PI * half_width;
    let perimeter = 2.0 * length + 2.0 * turn;
    let points: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let s = perimeter * i as f64 / n as f64;
            if s < length {
                [s, -half_width]
            } else if s < length + turn {
                let a = -PI / 2.0 + (s - length) / half_width;
                [length + half_width * a.cos(), half_width * a.sin()]
            } else if s < 2.0 * length + turn {
                [length - (s - length - turn), half_width]
            } else {
                let a = PI / 2.0 + (s - 2.0 * length - turn) / half_width;
                [half_width * a.cos(), half_width * a.sin()]
            }
        })
        .collect();
    let full = build(points, 1.0, 6);
    let (a, b) = full.split_at(n / 2);
    let mut b_poses = b.poses().to_vec();
    for p in &mut b_poses {
        p.feature_count = ((p.feature_count as f64) * 0.7).round().max(1.0) as u64;
    }
    (a, Trajectory::new(b_poses).expect("split keeps ids increasing"))
}
