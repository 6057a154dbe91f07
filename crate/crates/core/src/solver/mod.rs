//! Exact solvers for the optimal data exchange problems.
//!
//! Every variant is a minimum-weight vertex cover on the exchange graph under
//! the objective's effective vertex weights. The cover constraint matrix of a
//! bipartite graph is totally unimodular, so the LP relaxation is integral and
//! the problem is solved exactly as a minimum cut: source to side-1 vertices
//! and side-2 vertices to sink with capacity equal to the vertex weight, and
//! uncuttable arcs along the candidate edges.
//!
//! Among several optimal covers the solvers return the canonical one: the
//! cover that takes as much of side 1 and as little of side 2 as any optimal
//! cover does. For strictly positive weights this is the lexicographically
//! smallest transmitted set under `(side, index)` order.

mod certify;
mod exhaustive;
mod flow;
mod matching;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{ExchangeGraph, Side, VertexId};
use crate::policy::{self, Objective, Policy};
use crate::rational::{self, Rational};

pub use certify::{check_ghc, GhcCertificate};
pub use exhaustive::{solve_exhaustive, EXHAUSTIVE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    FlowCut,
    Matching,
    BruteForce,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FlowCut => "flow_cut",
            Method::Matching => "matching",
            Method::BruteForce => "brute_force",
            Method::ClosedForm => "closed_form",
        })
    }
}

/// Evidence that the returned cost is optimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Value of a maximum flow in the cover network (a feasible dual).
    MaxFlow(Rational),
    /// A maximum matching; each matched edge forces one unit weight into any
    /// cover.
    Matching {
        pairs: Vec<(VertexId, VertexId)>,
        unit_weight: Rational,
    },
    /// Every labelling was enumerated.
    Exhaustive { labelings: u64 },
    /// Edge packing `y_e = min(alpha1, alpha2) * c_e`, feasible for the dual.
    EdgePacking(Rational),
}

impl Certificate {
    /// Lower bound the certificate proves on the cost of every admissible
    /// policy, when it carries one.
    pub fn bound(&self) -> Option<Rational> {
        match self {
            Certificate::MaxFlow(v) | Certificate::EdgePacking(v) => Some(v.clone()),
            Certificate::Matching { pairs, unit_weight } => {
                Some(unit_weight * Rational::from_integer(BigInt::from(pairs.len())))
            }
            Certificate::Exhaustive { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub policy: Policy,
    pub optimal_cost: Rational,
    pub method: Method,
    pub certificate: Certificate,
}

/// Effective weights scaled to a common integer grid.
pub(crate) struct ScaledWeights {
    pub w: [Vec<i128>; 2],
    pub scale: BigInt,
}

impl ScaledWeights {
    pub fn new(weights: &[Vec<Rational>; 2]) -> Result<ScaledWeights> {
        let scale = rational::common_denominator(weights.iter().flatten());
        let scale_r = Rational::from_integer(scale.clone());
        let mut total = 0i128;
        let mut conv = |ws: &Vec<Rational>| -> Result<Vec<i128>> {
            ws.iter()
                .map(|w| {
                    let x = (w * &scale_r).to_integer().to_i128().ok_or(Error::WeightOverflow)?;
                    total = total.checked_add(x).ok_or(Error::WeightOverflow)?;
                    Ok(x)
                })
                .collect()
        };
        let w = [conv(&weights[0])?, conv(&weights[1])?];
        total.checked_add(1).ok_or(Error::WeightOverflow)?;
        Ok(ScaledWeights { w, scale })
    }

    pub fn total(&self) -> i128 {
        self.w.iter().flatten().sum()
    }

    pub fn unscale(&self, x: i128) -> Rational {
        Rational::new(BigInt::from(x), self.scale.clone())
    }
}

/// Canonical minimum-weight cover under arbitrary non-negative weights,
/// returned as positional membership plus the max-flow value (scaled).
pub(crate) fn min_cover(g: &ExchangeGraph, scaled: &ScaledWeights) -> ([Vec<bool>; 2], i128) {
    let n1 = g.vertices(Side::One).len();
    let n2 = g.vertices(Side::Two).len();
    let (s, t) = (n1 + n2, n1 + n2 + 1);
    let mut net = flow::FlowNetwork::new(n1 + n2 + 2);
    // Any finite cut costs at most the total weight.
    let infinite = scaled.total() + 1;
    for (u, &w) in scaled.w[0].iter().enumerate() {
        net.add_arc(s, u, w);
    }
    for (v, &w) in scaled.w[1].iter().enumerate() {
        net.add_arc(n1 + v, t, w);
    }
    for e in g.edges() {
        net.add_arc(e.u, n1 + e.v, infinite);
    }
    let value = net.max_flow(s, t);
    let source_side = net.residual_reachable(s);
    let cover1 = (0..n1).map(|u| !source_side[u]).collect();
    let cover2 = (0..n2).map(|v| source_side[n1 + v]).collect();
    ([cover1, cover2], value)
}

fn cover_cost(weights: &[Vec<Rational>; 2], bits: &[Vec<bool>; 2]) -> Rational {
    (0..2)
        .flat_map(|s| weights[s].iter().zip(&bits[s]).filter(|(_, &b)| b).map(|(w, _)| w))
        .sum()
}

fn check_result(g: &ExchangeGraph, objective: &Objective, r: &SolveResult) -> Result<()> {
    if !policy::is_admissible(g, &r.policy)? {
        return Err(Error::Invariant(format!(
            "{} returned an inadmissible policy",
            r.method
        )));
    }
    if policy::objective_cost(g, &r.policy, objective)? != r.optimal_cost {
        return Err(Error::Invariant(format!("{} cost does not match its policy", r.method)));
    }
    if let Some(bound) = r.certificate.bound() {
        if bound != r.optimal_cost {
            return Err(Error::Invariant(format!(
                "{}: dual value {} differs from cover cost {}",
                r.method,
                rational::format(&bound),
                rational::format(&r.optimal_cost)
            )));
        }
    }
    Ok(())
}

/// Solves the exchange problem exactly by minimum cut.
pub fn solve(g: &ExchangeGraph, objective: &Objective) -> Result<SolveResult> {
    let weights = g.effective_weights(objective);
    let scaled = ScaledWeights::new(&weights)?;
    let (bits, flow_value) = min_cover(g, &scaled);
    let result = SolveResult {
        optimal_cost: cover_cost(&weights, &bits),
        policy: Policy::from_bits(g, &bits),
        method: Method::FlowCut,
        certificate: Certificate::MaxFlow(scaled.unscale(flow_value)),
    };
    check_result(g, objective, &result)?;
    Ok(result)
}

/// The common effective weight, if all vertices share one.
fn uniform_weight(g: &ExchangeGraph, objective: &Objective) -> Result<Rational> {
    let weights = g.effective_weights(objective);
    let mut all = weights.iter().flatten();
    let Some(first) = all.next() else {
        return Ok(Rational::zero());
    };
    if all.any(|w| w != first) {
        return Err(Error::NonUniformWeights);
    }
    Ok(first.clone())
}

/// Uniform-weight fast path: König cover from a maximum matching.
pub fn solve_uniform_matching(g: &ExchangeGraph, objective: &Objective) -> Result<SolveResult> {
    let unit = uniform_weight(g, objective)?;
    let m = matching::maximum_matching(g);
    let bits = matching::konig_cover(g, &m);
    let size = bits.iter().flatten().filter(|&&b| b).count();
    let result = SolveResult {
        policy: Policy::from_bits(g, &bits),
        optimal_cost: &unit * Rational::from_integer(BigInt::from(size)),
        method: Method::Matching,
        certificate: Certificate::Matching {
            pairs: m
                .pairs()
                .map(|(u, v)| (g.id_at(Side::One, u), g.id_at(Side::Two, v)))
                .collect(),
            unit_weight: unit,
        },
    };
    check_result(g, objective, &result)?;
    Ok(result)
}

/// Size of a maximum matching of `g`.
pub fn maximum_matching_size(g: &ExchangeGraph) -> usize {
    matching::maximum_matching(g).size()
}

/// Hall's condition for `side` under uniform weights: some matching saturates
/// every vertex of `side`.
pub fn check_hall_uniform(g: &ExchangeGraph, objective: &Objective, side: Side) -> Result<bool> {
    uniform_weight(g, objective)?;
    Ok(maximum_matching_size(g) == g.vertices(side).len())
}

/// Closed-form optimum of the balance-only problem: the monolog from the side
/// with the larger alpha (side 1 on ties) costs `min(alpha1, alpha2)` times
/// the total candidate cost, which no admissible policy can beat.
pub fn p1_closed_form(g: &ExchangeGraph, alpha1: &Rational, alpha2: &Rational) -> Result<SolveResult> {
    let objective = Objective::p1(alpha1.clone(), alpha2.clone())?;
    let side = if alpha1 >= alpha2 { Side::One } else { Side::Two };
    let cheaper = alpha1.min(alpha2);
    let packing = cheaper * g.total_edge_cost();
    let policy = if g.vertex_count() == 0 {
        Policy::default()
    } else {
        policy::monolog(g, side)?
    };
    let result = SolveResult {
        optimal_cost: packing.clone(),
        policy,
        method: Method::ClosedForm,
        certificate: Certificate::EdgePacking(packing),
    };
    check_result(g, &objective, &result)?;
    Ok(result)
}

/// Total effective weight of one side, i.e. the cost of its monolog.
pub fn monolog_cost(g: &ExchangeGraph, objective: &Objective, side: Side) -> Rational {
    g.effective_weights(objective)[side.index() as usize - 1].iter().sum()
}
