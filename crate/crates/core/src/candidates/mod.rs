//! Loop-closure candidate generation.
//!
//! Two generators produce exchange graphs: a geometric one that links poses
//! that are close and whose cameras see overlapping ground area, and an
//! appearance one that keeps the best place-recognition matches per query.

pub mod synthetic;
mod trajectory;

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{BuildOutcome, EdgeSpec, ExchangeGraph, Vertex};
use crate::rational::{self, Rational};

pub use trajectory::{parse_feature_counts, yaw_rotation, Pose, Rotation, Trajectory, ORTHONORMAL_TOL};

/// Bytes per BRIEF descriptor.
pub const DESCRIPTOR_BYTES: u64 = 32;
/// Bytes per bag-of-words word id.
pub const WORD_BYTES: u64 = 3;
/// Quadrature resolution (per polar axis) of [`fov_overlap`].
pub const FOV_GRID: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryParams {
    /// Maximum distance between candidate poses, metres.
    pub d_max: f64,
    /// Minimum field-of-view overlap fraction.
    pub eta: f64,
    /// Keep one pose in `rate_divisor` (KITTI streams at 10 Hz).
    pub rate_divisor: usize,
    pub fov_half_angle: f64,
    pub fov_range: f64,
    pub descriptor_bytes: u64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            d_max: 30.0,
            eta: 0.0,
            rate_divisor: 1,
            fov_half_angle: 0.7,
            fov_range: 30.0,
            descriptor_bytes: DESCRIPTOR_BYTES,
        }
    }
}

impl GeometryParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if !(self.d_max > 0.0 && self.d_max.is_finite()) {
            return bad("d_max must be positive");
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return bad("eta must lie in [0, 1]");
        }
        if self.rate_divisor == 0 {
            return bad("rate_divisor must be positive");
        }
        if !(self.fov_half_angle >= 0.0 && self.fov_range >= 0.0) {
            return bad("field of view must be non-negative");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppearanceParams {
    /// Scores must exceed this to become candidates.
    pub alpha: f64,
    pub top_k: usize,
    /// Also query side 2 against side 1 and take the union.
    pub symmetric: bool,
}

impl Default for AppearanceParams {
    fn default() -> Self {
        AppearanceParams {
            alpha: 0.3,
            top_k: 2,
            symmetric: false,
        }
    }
}

impl AppearanceParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter("alpha must lie in [0, 1]".into()));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidParameter("top_k must be positive".into()));
        }
        Ok(())
    }
}

fn in_sector(p: [f64; 2], apex: [f64; 2], heading: [f64; 2], range: f64, cos_half: Option<f64>) -> bool {
    let d = [p[0] - apex[0], p[1] - apex[1]];
    let r2 = d[0] * d[0] + d[1] * d[1];
    if r2 > range * range {
        return false;
    }
    match cos_half {
        None => true,
        Some(c) => d[0] * heading[0] + d[1] * heading[1] >= r2.sqrt() * c,
    }
}

/// Share of sector `a`'s area that sector `b` covers, by polar midpoint
/// quadrature over `a`.
fn covered_share(a: &Pose, b: &Pose, half_angle: f64, range: f64) -> f64 {
    let (Some(ha), Some(hb)) = (a.planar_heading(), b.planar_heading()) else {
        return 0.0;
    };
    let half = half_angle.min(std::f64::consts::PI);
    let cos_half = (half < std::f64::consts::PI).then(|| half.cos());
    let (pa, pb) = (a.planar_position(), b.planar_position());
    let base = ha[1].atan2(ha[0]);
    let n = FOV_GRID;
    let (mut inside, mut total) = (0.0, 0.0);
    for i in 0..n {
        let r = (i as f64 + 0.5) / n as f64 * range;
        for j in 0..n {
            let phi = base - half + (j as f64 + 0.5) / n as f64 * 2.0 * half;
            let p = [pa[0] + r * phi.cos(), pa[1] + r * phi.sin()];
            total += r;
            if in_sector(p, pb, hb, range, cos_half) {
                inside += r;
            }
        }
    }
    inside / total
}

/// Fraction of one camera's ground-plane field of view (a circular sector of
/// radius `range` and half-angle `half_angle` around the heading) that the
/// other camera's sector overlaps. Symmetric in its pose arguments.
pub fn fov_overlap(a: &Pose, b: &Pose, half_angle: f64, range: f64) -> f64 {
    if range <= 0.0 || half_angle <= 0.0 {
        return 0.0;
    }
    let (pa, pb) = (a.planar_position(), b.planar_position());
    if (pa[0] - pb[0]).hypot(pa[1] - pb[1]) > 2.0 * range {
        return 0.0;
    }
    let x = covered_share(a, b, half_angle, range);
    let y = covered_share(b, a, half_angle, range);
    ((x + y) / 2.0).clamp(0.0, 1.0)
}

fn vertices_of(t: &Trajectory, descriptor_bytes: u64) -> Vec<Vertex> {
    t.poses()
        .iter()
        .map(|p| {
            let bytes = p
                .feature_count
                .checked_mul(descriptor_bytes)
                .expect("scan size overflow");
            Vertex::new(p.id, Rational::from_integer(bytes.into()))
        })
        .collect()
}

/// Candidate pairs `(i, j)` (positions) within `d_max` of each other, found by
/// sweeping `t2` sorted along `x`.
fn close_pairs(t1: &[Pose], t2: &[Pose], d_max: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..t2.len()).collect();
    order.sort_by(|&i, &j| t2[i].position[0].total_cmp(&t2[j].position[0]).then(i.cmp(&j)));
    let xs: Vec<f64> = order.iter().map(|&i| t2[i].position[0]).collect();
    let mut pairs = Vec::new();
    for (i, p) in t1.iter().enumerate() {
        let lo = xs.partition_point(|&x| x < p.position[0] - d_max);
        let mut hits: Vec<usize> = order[lo..]
            .iter()
            .zip(&xs[lo..])
            .take_while(|(_, &x)| x <= p.position[0] + d_max)
            .map(|(&j, _)| j)
            .filter(|&j| p.distance(&t2[j]) <= d_max)
            .collect();
        hits.sort_unstable();
        pairs.extend(hits.into_iter().map(|j| (i, j)));
    }
    pairs
}

/// Geometric candidates: after subsampling, `u ~ v` iff the poses are within
/// `d_max` and their fields of view overlap by at least `eta`. Scan sizes are
/// `feature_count * descriptor_bytes`; edge costs are 1.
pub fn build_geometric(t1: &Trajectory, t2: &Trajectory, p: &GeometryParams) -> Result<BuildOutcome> {
    p.validate()?;
    if t1.is_empty() || t2.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let s1 = t1.subsample(p.rate_divisor)?;
    let s2 = t2.subsample(p.rate_divisor)?;
    let (a, b) = (s1.poses(), s2.poses());
    let edges = close_pairs(a, b, p.d_max)
        .into_iter()
        .filter(|&(i, j)| p.eta <= 0.0 || fov_overlap(&a[i], &b[j], p.fov_half_angle, p.fov_range) >= p.eta)
        .map(|(i, j)| EdgeSpec {
            u: a[i].id,
            v: b[j].id,
            cost: rational::int(1),
        })
        .collect();
    ExchangeGraph::from_parts(
        vertices_of(&s1, p.descriptor_bytes),
        vertices_of(&s2, p.descriptor_bytes),
        edges,
    )
}

/// Appearance candidates: for every query on side 1, its `top_k` best matches
/// on side 2 scoring strictly above `alpha` (ties to the lower index). Vertex
/// ids are positions in the weight lists.
pub fn build_appearance(
    scores: &[(usize, usize, f64)],
    w1: &[Rational],
    w2: &[Rational],
    p: &AppearanceParams,
) -> Result<BuildOutcome> {
    p.validate()?;
    let mut per_query: Vec<Vec<(usize, f64)>> = vec![Vec::new(); w1.len()];
    let mut per_target: Vec<Vec<(usize, f64)>> = vec![Vec::new(); w2.len()];
    let mut seen = HashSet::new();
    for &(u, v, s) in scores {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ScoreOutOfRange { u, v, score: s });
        }
        if u >= w1.len() {
            return Err(Error::IndexOutOfRange {
                side: 1,
                index: u,
                len: w1.len(),
            });
        }
        if v >= w2.len() {
            return Err(Error::IndexOutOfRange {
                side: 2,
                index: v,
                len: w2.len(),
            });
        }
        if !seen.insert((u, v)) {
            return Err(Error::DuplicateEdge {
                u: crate::graph::VertexId::new(crate::graph::Side::One, u as u64),
                v: crate::graph::VertexId::new(crate::graph::Side::Two, v as u64),
            });
        }
        if s > p.alpha {
            per_query[u].push((v, s));
            per_target[v].push((u, s));
        }
    }
    let best = |mut c: Vec<(usize, f64)>| -> Vec<usize> {
        c.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap_or(Ordering::Equal).then(x.0.cmp(&y.0)));
        c.into_iter().take(p.top_k).map(|(i, _)| i).collect()
    };
    let mut chosen = std::collections::BTreeSet::new();
    for (u, c) in per_query.into_iter().enumerate() {
        chosen.extend(best(c).into_iter().map(|v| (u, v)));
    }
    if p.symmetric {
        for (v, c) in per_target.into_iter().enumerate() {
            chosen.extend(best(c).into_iter().map(|u| (u, v)));
        }
    }
    let edges: Vec<_> = chosen.into_iter().map(|(u, v)| (u, v, rational::int(1))).collect();
    crate::graph::build_graph(w1, w2, &edges)
}

/// Score file: lines of `u_index v_index score`.
pub fn parse_scores(text: &str) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: &str| Error::Parse(format!("score line {}: {m}", i + 1));
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad("expected `u v score`"));
        }
        let u = f[0].parse().map_err(|_| bad("bad u index"))?;
        let v = f[1].parse().map_err(|_| bad("bad v index"))?;
        let s: f64 = f[2].parse().map_err(|_| bad("bad score"))?;
        out.push((u, v, s));
    }
    Ok(out)
}

/// One exact non-negative number per line.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(rational::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Side, VertexId};
    use crate::rational::int;

    fn pose(id: u64, x: f64, z: f64, yaw: f64) -> Pose {
        Pose {
            id,
            position: [x, 0.0, z],
            rotation: yaw_rotation(yaw),
            feature_count: 10,
            stamp: id,
        }
    }

    fn single(p: Pose) -> Trajectory {
        Trajectory::new(vec![p]).unwrap()
    }

    #[test]
    fn distance_gate() {
        let p = GeometryParams {
            d_max: 30.0,
            eta: 0.0,
            ..Default::default()
        };
        let near = build_geometric(
            &single(pose(0, 0.0, 0.0, 0.0)),
            &single(pose(0, 10.0, 0.0, std::f64::consts::PI)),
            &p,
        )
        .unwrap();
        assert_eq!(near.graph.edge_count(), 1);
        assert_eq!(near.graph.vertices(Side::One)[0].scan_size, int(320));
        let far = build_geometric(&single(pose(0, 0.0, 0.0, 0.0)), &single(pose(0, 40.0, 0.0, 0.0)), &p).unwrap();
        assert_eq!(far.graph.edge_count(), 0);
        assert_eq!(far.pruned.len(), 2);
    }

    #[test]
    fn empty_trajectory_rejected() {
        let empty = Trajectory::default();
        let one = single(pose(0, 0.0, 0.0, 0.0));
        assert!(matches!(
            build_geometric(&empty, &one, &GeometryParams::default()),
            Err(Error::EmptyTrajectory)
        ));
    }

    #[test]
    fn overlap_extremes() {
        let a = pose(0, 3.0, 4.0, 0.3);
        assert_eq!(fov_overlap(&a, &a, 0.7, 30.0), 1.0);
        let left = pose(0, -35.0, 0.0, std::f64::consts::PI);
        let right = pose(1, 35.0, 0.0, 0.0);
        assert_eq!(fov_overlap(&left, &right, 0.7, 30.0), 0.0);
        // Back to back at the same spot: sectors only touch at the apex.
        let fwd = pose(0, 0.0, 0.0, 0.0);
        let back = pose(1, 0.0, 0.0, std::f64::consts::PI);
        assert_eq!(fov_overlap(&fwd, &back, 0.7, 30.0), 0.0);
        assert_eq!(fov_overlap(&a, &a, 0.7, 0.0), 0.0);
    }

    #[test]
    fn overlap_is_symmetric() {
        let a = pose(0, 1.0, 2.0, 0.4);
        let b = pose(1, 9.0, -3.0, 1.9);
        assert_eq!(fov_overlap(&a, &b, 0.7, 30.0), fov_overlap(&b, &a, 0.7, 30.0));
    }

    #[test]
    fn appearance_top_two() {
        let w = vec![int(1); 3];
        let out = build_appearance(
            &[(0, 0, 0.9), (0, 1, 0.8), (0, 2, 0.7)],
            &w,
            &w,
            &AppearanceParams {
                alpha: 0.5,
                top_k: 2,
                symmetric: false,
            },
        )
        .unwrap();
        let g = out.graph;
        let edges: Vec<_> = (0..g.edge_count()).map(|k| g.endpoints(k)).collect();
        let a = |i| VertexId::new(Side::One, i);
        let b = |i| VertexId::new(Side::Two, i);
        assert_eq!(edges, vec![(a(0), b(0)), (a(0), b(1))]);
    }

    #[test]
    fn appearance_ties_and_threshold() {
        let w = vec![int(1); 3];
        let p = AppearanceParams {
            alpha: 0.5,
            top_k: 1,
            symmetric: false,
        };
        let out = build_appearance(&[(0, 2, 0.8), (0, 1, 0.8)], &w, &w, &p).unwrap();
        assert_eq!(out.graph.endpoints(0).1.index, 1);
        let none = build_appearance(&[(0, 0, 0.1), (1, 1, 0.5)], &w, &w, &p).unwrap();
        assert!(none.graph.is_empty());
        assert_eq!(none.graph.vertex_count(), 0);
    }

    #[test]
    fn appearance_errors() {
        let w = vec![int(1); 2];
        let p = AppearanceParams::default();
        assert!(matches!(
            build_appearance(&[(0, 0, 1.5)], &w, &w, &p),
            Err(Error::ScoreOutOfRange { .. })
        ));
        assert!(matches!(
            build_appearance(&[(0, 0, f64::NAN)], &w, &w, &p),
            Err(Error::ScoreOutOfRange { .. })
        ));
        assert!(matches!(
            build_appearance(&[(5, 0, 0.5)], &w, &w, &p),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn symmetric_queries_add_reverse_matches() {
        let w = vec![int(1); 2];
        let scores = [(0, 0, 0.9), (0, 1, 0.8), (1, 1, 0.7)];
        let one = AppearanceParams {
            alpha: 0.5,
            top_k: 1,
            symmetric: false,
        };
        let both = AppearanceParams {
            symmetric: true,
            ..one.clone()
        };
        assert_eq!(build_appearance(&scores, &w, &w, &one).unwrap().graph.edge_count(), 2);
        assert_eq!(build_appearance(&scores, &w, &w, &both).unwrap().graph.edge_count(), 3);
    }

    #[test]
    fn score_file_parsing() {
        let s = parse_scores("# header\n0 1 0.5\n\n2 3 1\n").unwrap();
        assert_eq!(s, vec![(0, 1, 0.5), (2, 3, 1.0)]);
        assert!(parse_scores("0 1").is_err());
        assert_eq!(
            parse_weights("1\n2.5\n").unwrap(),
            vec![int(1), crate::rational::ratio(5, 2)]
        );
    }
}
