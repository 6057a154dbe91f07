//! Robot trajectories and the KITTI odometry ground-truth text format.
//!
//! Poses follow the KITTI camera convention: the camera looks along its
//! local `+z` axis and the ground plane is the world `x`-`z` plane.

use std::path::Path;

use crate::error::{Error, Result};

pub type Rotation = [[f64; 3]; 3];

/// Tolerance on `R^T R = I` for a stored rotation.
pub const ORTHONORMAL_TOL: f64 = 1e-9;
/// Text-format rotations off by at most this much are re-orthonormalized on
/// load; KITTI files carry only about six significant digits.
pub const REPAIR_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Pose {
    pub id: u64,
    pub position: [f64; 3],
    pub rotation: Rotation,
    pub feature_count: u64,
    /// Frame index in the original stream.
    pub stamp: u64,
}

impl Pose {
    /// Position projected onto the ground plane.
    pub fn planar_position(&self) -> [f64; 2] {
        [self.position[0], self.position[2]]
    }

    /// Unit viewing direction projected onto the ground plane; `None` when the
    /// camera looks straight up or down.
    pub fn planar_heading(&self) -> Option<[f64; 2]> {
        let (x, z) = (self.rotation[0][2], self.rotation[2][2]);
        let n = x.hypot(z);
        (n > 1e-12).then(|| [x / n, z / n])
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        let d: f64 = (0..3).map(|i| (self.position[i] - other.position[i]).powi(2)).sum();
        d.sqrt()
    }
}

fn orthonormality_error(r: &Rotation) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// Gram-Schmidt on the columns, keeping the third as the cross product so the
/// result is a proper rotation.
fn orthonormalize(r: &Rotation) -> Rotation {
    let col = |j: usize| [r[0][j], r[1][j], r[2][j]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let unit = |a: [f64; 3]| {
        let n = dot(a, a).sqrt();
        [a[0] / n, a[1] / n, a[2] / n]
    };
    let c0 = unit(col(0));
    let c1 = col(1);
    let p = dot(c0, c1);
    let c1 = unit([c1[0] - p * c0[0], c1[1] - p * c0[1], c1[2] - p * c0[2]]);
    let c2 = [
        c0[1] * c1[2] - c0[2] * c1[1],
        c0[2] * c1[0] - c0[0] * c1[2],
        c0[0] * c1[1] - c0[1] * c1[0],
    ];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[i] = [c0[i], c1[i], c2[i]];
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    poses: Vec<Pose>,
}

impl Trajectory {
    pub fn new(poses: Vec<Pose>) -> Result<Trajectory> {
        for pair in poses.windows(2) {
            if pair[1].id <= pair[0].id {
                return Err(Error::InvalidTrajectory(format!(
                    "pose ids must increase: {} after {}",
                    pair[1].id, pair[0].id
                )));
            }
        }
        for p in &poses {
            if p.position
                .iter()
                .chain(p.rotation.iter().flatten())
                .any(|x| !x.is_finite())
            {
                return Err(Error::InvalidTrajectory(format!("pose {} is not finite", p.id)));
            }
            let err = orthonormality_error(&p.rotation);
            if err > ORTHONORMAL_TOL {
                return Err(Error::InvalidTrajectory(format!(
                    "rotation of pose {} is not orthonormal (error {err:e})",
                    p.id
                )));
            }
        }
        Ok(Trajectory { poses })
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    /// Keeps every `rate`-th pose starting with the first, i.e. `ceil(n / rate)`
    /// poses.
    pub fn subsample(&self, rate: usize) -> Result<Trajectory> {
        if rate == 0 {
            return Err(Error::InvalidParameter("rate_divisor must be positive".into()));
        }
        Ok(Trajectory {
            poses: self.poses.iter().step_by(rate).cloned().collect(),
        })
    }

    /// Splits one sequence into two robots' trajectories at pose position `at`.
    pub fn split_at(&self, at: usize) -> (Trajectory, Trajectory) {
        let at = at.min(self.poses.len());
        (
            Trajectory {
                poses: self.poses[..at].to_vec(),
            },
            Trajectory {
                poses: self.poses[at..].to_vec(),
            },
        )
    }

    /// Parses KITTI ground truth: one pose per line, twelve numbers forming a
    /// row-major 3x4 `[R | t]`. Pose ids and stamps are line numbers.
    /// `feature_counts`, when given, must have one entry per pose; otherwise
    /// every pose gets a single feature.
    pub fn from_kitti(poses: &str, feature_counts: Option<&[u64]>) -> Result<Trajectory> {
        let mut out = Vec::new();
        for (line_no, line) in poses.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("pose line {}: {e}", line_no + 1)))?;
            if values.len() != 12 {
                return Err(Error::Parse(format!(
                    "pose line {}: expected 12 values, found {}",
                    line_no + 1,
                    values.len()
                )));
            }
            let mut rotation = [[0.0; 3]; 3];
            let mut position = [0.0; 3];
            for i in 0..3 {
                rotation[i] = [values[4 * i], values[4 * i + 1], values[4 * i + 2]];
                position[i] = values[4 * i + 3];
            }
            let err = orthonormality_error(&rotation);
            if err > REPAIR_TOL || !err.is_finite() {
                return Err(Error::InvalidTrajectory(format!(
                    "pose line {}: rotation is not orthonormal (error {err:e})",
                    line_no + 1
                )));
            }
            if err > ORTHONORMAL_TOL {
                rotation = orthonormalize(&rotation);
            }
            let idx = out.len();
            out.push(Pose {
                id: line_no as u64,
                position,
                rotation,
                feature_count: 1,
                stamp: idx as u64,
            });
        }
        if let Some(counts) = feature_counts {
            if counts.len() != out.len() {
                return Err(Error::Parse(format!(
                    "{} feature counts for {} poses",
                    counts.len(),
                    out.len()
                )));
            }
            for (p, &c) in out.iter_mut().zip(counts) {
                p.feature_count = c;
            }
        }
        Trajectory::new(out)
    }

    pub fn read_kitti(poses: impl AsRef<Path>, features: Option<impl AsRef<Path>>) -> Result<Trajectory> {
        let text = std::fs::read_to_string(&poses).map_err(|e| Error::io(&poses, e))?;
        let counts = match features {
            Some(path) => {
                let t = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                Some(parse_feature_counts(&t)?)
            }
            None => None,
        };
        Trajectory::from_kitti(&text, counts.as_deref())
    }

    /// KITTI text rendering (`%e`-style, full precision).
    pub fn to_kitti(&self) -> String {
        let mut s = String::new();
        for p in &self.poses {
            let row = |i: usize| {
                format!(
                    "{:e} {:e} {:e} {:e}",
                    p.rotation[i][0], p.rotation[i][1], p.rotation[i][2], p.position[i]
                )
            };
            s.push_str(&format!("{} {} {}\n", row(0), row(1), row(2)));
        }
        s
    }

    pub fn feature_counts_text(&self) -> String {
        self.poses.iter().map(|p| format!("{}\n", p.feature_count)).collect()
    }
}

/// One non-negative integer per line.
pub fn parse_feature_counts(text: &str) -> Result<Vec<u64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("feature count line {}: {e}", i + 1)))
        })
        .collect()
}

/// Rotation about the world `y` axis (yaw in the ground plane) such that the
/// camera's planar heading is `(cos yaw, sin yaw)` in `(x, z)`.
pub fn yaw_rotation(yaw: f64) -> Rotation {
    // Forward column must be (cos yaw, 0, sin yaw); y stays vertical.
    let (s, c) = yaw.sin_cos();
    [[s, 0.0, c], [0.0, 1.0, 0.0], [-c, 0.0, s]]
}
