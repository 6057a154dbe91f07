//! Independent reference implementations used by the integration tests.
//!
//! Nothing here goes through the library's effective-weight or cover code:
//! costs are recomputed from the raw edge and vertex data.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use scan_exchange::candidates::Pose;
use scan_exchange::graph::{build_graph, ExchangeGraph, Side, VertexId};
use scan_exchange::policy::{Objective, Variant};
use scan_exchange::rational::{int, ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64) -> Rational {
    ratio(rng.gen_range(0..=max_num), rng.gen_range(1..=6))
}

pub fn positive_rational(rng: &mut ChaCha8Rng, max_num: i64) -> Rational {
    ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=6))
}

/// A random graph with `n1 + n2 <= max_vertices`, random density and random
/// rational scan sizes and edge costs. Isolated vertices get pruned by the
/// builder, so the result can be smaller.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> ExchangeGraph {
    loop {
        let n1 = rng.gen_range(1..max_vertices);
        let n2 = rng.gen_range(1..=max_vertices - n1);
        let density: f64 = rng.gen_range(0.1..0.9);
        let w1: Vec<_> = (0..n1).map(|_| random_rational(rng, 30)).collect();
        let w2: Vec<_> = (0..n2).map(|_| random_rational(rng, 30)).collect();
        let mut edges = Vec::new();
        for u in 0..n1 {
            for v in 0..n2 {
                if rng.gen_bool(density) {
                    edges.push((u, v, positive_rational(rng, 12)));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        return build_graph(&w1, &w2, &edges).expect("random graph is valid").graph;
    }
}

pub fn uniform_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> ExchangeGraph {
    loop {
        let n1 = rng.gen_range(1..max_vertices);
        let n2 = rng.gen_range(1..=max_vertices - n1);
        let density: f64 = rng.gen_range(0.1..0.7);
        let edges: Vec<_> = (0..n1)
            .flat_map(|u| (0..n2).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(density))
            .map(|(u, v)| (u, v, int(1)))
            .collect();
        if edges.is_empty() {
            continue;
        }
        return build_graph(&vec![int(1); n1], &vec![int(1); n2], &edges).unwrap().graph;
    }
}

pub fn random_objective(rng: &mut ChaCha8Rng, variant: Variant) -> Objective {
    let a1 = random_rational(rng, 10);
    let a2 = random_rational(rng, 10);
    match variant {
        Variant::P1 => Objective::p1(a1, a2).unwrap(),
        Variant::P2 => Objective::p2(),
        Variant::P3 => Objective::p3(a1, a2, random_rational(rng, 8)).unwrap(),
    }
}

/// A k-regular bipartite graph on `n + n` vertices: a union of `k` random
/// perfect matchings shifted so that no edge repeats.
pub fn k_regular(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ExchangeGraph {
    assert!(k <= n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..k).map(move |s| (u, (u + s) % n)))
        .map(|(u, j)| (u, perm[j], int(1)))
        .collect();
    build_graph(&vec![int(1); n], &vec![int(1); n], &edges).unwrap().graph
}

pub fn complete(m: usize, n: usize) -> ExchangeGraph {
    let edges: Vec<_> = (0..m).flat_map(|u| (0..n).map(move |v| (u, v, int(1)))).collect();
    build_graph(&vec![int(1); m], &vec![int(1); n], &edges).unwrap().graph
}

/// Labeling `bits` over all vertices, side 1 first.
fn label(bits: u64, g: &ExchangeGraph, side: Side, pos: usize) -> bool {
    let offset = if side == Side::One {
        0
    } else {
        g.vertices(Side::One).len()
    };
    bits >> (offset + pos) & 1 == 1
}

/// Objective value straight from the definitions: scan prices of the
/// transmitted vertices, and the verification load of each robot.
pub fn reference_cost(g: &ExchangeGraph, obj: &Objective, bits: u64) -> Rational {
    let mut price = Rational::zero();
    for side in Side::BOTH {
        for (p, v) in g.vertices(side).iter().enumerate() {
            if label(bits, g, side, p) {
                price += v.inertia.as_ref().unwrap_or(&v.scan_size);
            }
        }
    }
    let (mut ell1, mut ell2) = (Rational::zero(), Rational::zero());
    for e in g.edges() {
        if label(bits, g, Side::Two, e.v) {
            ell1 += &e.cost;
        }
        if label(bits, g, Side::One, e.u) {
            ell2 += &e.cost;
        }
    }
    let balance = obj.alpha1() * ell1 + obj.alpha2() * ell2;
    match obj.variant() {
        Variant::P1 => balance,
        Variant::P2 => price,
        Variant::P3 => price + obj.omega() * balance,
    }
}

pub fn reference_admissible(g: &ExchangeGraph, bits: u64) -> bool {
    g.edges()
        .iter()
        .all(|e| label(bits, g, Side::One, e.u) || label(bits, g, Side::Two, e.v))
}

/// Minimum over all admissible labelings.
///
/// Every labeling is priced on exact integers: the per-vertex costs from
/// [`reference_weights`] are scaled by their common denominator. The winner
/// is re-priced with [`reference_cost`] as a cross-check.
pub fn brute_force_min(g: &ExchangeGraph, obj: &Objective) -> Rational {
    brute_force_argmin(g, obj).1
}

pub fn brute_force_argmin(g: &ExchangeGraph, obj: &Objective) -> (u64, Rational) {
    let n = g.vertex_count();
    assert!(n <= 24);
    let w: Vec<Rational> = Side::BOTH.iter().flat_map(|&s| reference_weights(g, obj, s)).collect();
    let scale = w.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let wi: Vec<i128> = w
        .iter()
        .map(|q| (q.numer() * (&scale / q.denom())).to_i128().unwrap())
        .collect();
    let n1 = g.vertices(Side::One).len();
    let masks: Vec<u64> = g.edges().iter().map(|e| 1u64 << e.u | 1u64 << (n1 + e.v)).collect();
    let mut best: Option<(i128, u64)> = None;
    for b in 0..1u64 << n {
        if !masks.iter().all(|m| b & m != 0) {
            continue;
        }
        let c: i128 = (0..n).filter(|i| b >> i & 1 == 1).map(|i| wi[i]).sum();
        if best.is_none_or(|(bc, _)| c < bc) {
            best = Some((c, b));
        }
    }
    let (c, b) = best.expect("labelling everything is admissible");
    let cost = reference_cost(g, obj, b);
    assert_eq!(
        cost,
        Rational::new(BigInt::from(c), scale),
        "oracle pricing disagrees with itself"
    );
    (b, cost)
}

/// Weight of each vertex of `side` under `obj`, from the definitions.
pub fn reference_weights(g: &ExchangeGraph, obj: &Objective, side: Side) -> Vec<Rational> {
    (0..g.vertices(side).len())
        .map(|p| {
            let single = match side {
                Side::One => 1u64 << p,
                Side::Two => 1u64 << (g.vertices(Side::One).len() + p),
            };
            reference_cost(g, obj, single)
        })
        .collect()
}

/// The generalized Hall condition, by enumerating every subset of `side`.
pub fn ghc_by_subsets(g: &ExchangeGraph, obj: &Objective, side: Side) -> bool {
    let w = reference_weights(g, obj, side);
    let w_other = reference_weights(g, obj, side.other());
    let n = w.len();
    assert!(n <= 20);
    let mut nbrs = vec![BTreeSet::new(); n];
    for e in g.edges() {
        match side {
            Side::One => nbrs[e.u].insert(e.v),
            Side::Two => nbrs[e.v].insert(e.u),
        };
    }
    (1..1u64 << n).all(|s| {
        let members = (0..n).filter(|&i| s >> i & 1 == 1);
        let mut ws = Rational::zero();
        let mut nb = BTreeSet::new();
        for i in members {
            ws += &w[i];
            nb.extend(nbrs[i].iter().copied());
        }
        let wn: Rational = nb.iter().map(|&j| &w_other[j]).sum();
        ws <= wn
    })
}

/// Cost of a cover given as a set of vertex ids.
pub fn cover_bits(g: &ExchangeGraph, cover: &BTreeSet<VertexId>) -> u64 {
    let mut bits = 0u64;
    for v in cover {
        let p = g.position(*v).unwrap();
        let offset = if v.side == Side::One {
            0
        } else {
            g.vertices(Side::One).len()
        };
        bits |= 1 << (offset + p);
    }
    bits
}

/// Candidate pairs by checking every pose pair.
pub fn geometric_pairs(
    t1: &[Pose],
    t2: &[Pose],
    d_max: f64,
    overlap: impl Fn(&Pose, &Pose) -> f64,
    eta: f64,
) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for a in t1 {
        for b in t2 {
            let d = ((a.position[0] - b.position[0]).powi(2)
                + (a.position[1] - b.position[1]).powi(2)
                + (a.position[2] - b.position[2]).powi(2))
            .sqrt();
            if d <= d_max && (eta <= 0.0 || overlap(a, b) >= eta) {
                out.insert((a.id, b.id));
            }
        }
    }
    out
}

fn heading_angle(p: &Pose) -> f64 {
    p.rotation[2][2].atan2(p.rotation[0][2])
}

fn wrap(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    (a + std::f64::consts::PI).rem_euclid(t) - std::f64::consts::PI
}

/// Monte-Carlo estimate of the share of `a`'s view sector inside `b`'s.
pub fn fov_monte_carlo(rng: &mut ChaCha8Rng, a: &Pose, b: &Pose, half: f64, range: f64, samples: usize) -> f64 {
    let (ax, az) = (a.position[0], a.position[2]);
    let (bx, bz) = (b.position[0], b.position[2]);
    let (ha, hb) = (heading_angle(a), heading_angle(b));
    let mut hits = 0usize;
    for _ in 0..samples {
        let r = range * rng.gen::<f64>().sqrt();
        let phi = ha + half * (2.0 * rng.gen::<f64>() - 1.0);
        let (x, z) = (ax + r * phi.cos(), az + r * phi.sin());
        let (dx, dz) = (x - bx, z - bz);
        if dx.hypot(dz) <= range && wrap(dz.atan2(dx) - hb).abs() <= half {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Appearance candidates by sorting every query's score row.
pub fn appearance_pairs(
    scores: &[(usize, usize, f64)],
    alpha: f64,
    top_k: usize,
    symmetric: bool,
) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    let rows: BTreeSet<usize> = scores.iter().map(|s| s.0).collect();
    for u in rows {
        let mut row: Vec<_> = scores.iter().filter(|s| s.0 == u && s.2 > alpha).collect();
        row.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.1.cmp(&y.1)));
        out.extend(row.iter().take(top_k).map(|s| (u, s.1)));
    }
    if symmetric {
        let cols: BTreeSet<usize> = scores.iter().map(|s| s.1).collect();
        for v in cols {
            let mut col: Vec<_> = scores.iter().filter(|s| s.1 == v && s.2 > alpha).collect();
            col.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)));
            out.extend(col.iter().take(top_k).map(|s| (s.0, v)));
        }
    }
    out
}

/// All labelings of a graph as policies, for small graphs.
pub fn bits_to_policy(g: &ExchangeGraph, bits: u64) -> scan_exchange::policy::Policy {
    let b = [
        (0..g.vertices(Side::One).len())
            .map(|p| label(bits, g, Side::One, p))
            .collect(),
        (0..g.vertices(Side::Two).len())
            .map(|p| label(bits, g, Side::Two, p))
            .collect(),
    ];
    scan_exchange::policy::Policy::from_bits(g, &b)
}
