//! Exchange policies and the costs they induce.
//!
//! A policy labels every vertex with a bit; `1` means the pose's scan is sent
//! to the other robot. A policy is admissible when every candidate edge has at
//! least one transmitted endpoint, i.e. when the transmitted vertices form a
//! vertex cover, which is what makes the loop-closure search complete.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ExchangeGraph, Side, VertexId};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Induced workload balance only.
    P1,
    /// Communication volume only.
    P2,
    /// Communication plus `omega` times workload balance.
    P3,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::P1 => "p1",
            Variant::P2 => "p2",
            Variant::P3 => "p3",
        })
    }
}

/// Which optimal-exchange problem to solve, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    variant: Variant,
    alpha1: Rational,
    alpha2: Rational,
    omega: Rational,
}

fn non_negative(name: &str, x: &Rational) -> Result<()> {
    if x.is_negative() {
        return Err(Error::InvalidParameter(format!("{name} must be non-negative")));
    }
    Ok(())
}

impl Objective {
    pub fn p1(alpha1: Rational, alpha2: Rational) -> Result<Objective> {
        non_negative("alpha1", &alpha1)?;
        non_negative("alpha2", &alpha2)?;
        Ok(Objective {
            variant: Variant::P1,
            alpha1,
            alpha2,
            omega: Rational::zero(),
        })
    }

    pub fn p2() -> Objective {
        Objective {
            variant: Variant::P2,
            alpha1: Rational::zero(),
            alpha2: Rational::zero(),
            omega: Rational::zero(),
        }
    }

    pub fn p3(alpha1: Rational, alpha2: Rational, omega: Rational) -> Result<Objective> {
        non_negative("alpha1", &alpha1)?;
        non_negative("alpha2", &alpha2)?;
        non_negative("omega", &omega)?;
        Ok(Objective {
            variant: Variant::P3,
            alpha1,
            alpha2,
            omega,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha1(&self) -> &Rational {
        &self.alpha1
    }

    pub fn alpha2(&self) -> &Rational {
        &self.alpha2
    }

    pub fn omega(&self) -> &Rational {
        &self.omega
    }

    /// Combines a vertex's transmission price and its workload weight.
    pub(crate) fn compose(&self, price: &Rational, load: &Rational) -> Rational {
        match self.variant {
            Variant::P1 => load.clone(),
            Variant::P2 => price.clone(),
            Variant::P3 => price + &self.omega * load,
        }
    }
}

/// A total labelling of the graph's vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Policy {
    labels: BTreeMap<VertexId, bool>,
}

impl Policy {
    pub fn from_labels(labels: impl IntoIterator<Item = (VertexId, bool)>) -> Policy {
        Policy {
            labels: labels.into_iter().collect(),
        }
    }

    /// Labels `1` exactly on `cover`, `0` on every other vertex of `g`.
    pub fn from_cover(g: &ExchangeGraph, cover: &BTreeSet<VertexId>) -> Policy {
        Policy::from_labels(g.vertex_ids().map(|v| (v, cover.contains(&v))))
    }

    /// Builds a policy from positional bits, `bits[side - 1][pos]`.
    pub fn from_bits(g: &ExchangeGraph, bits: &[Vec<bool>; 2]) -> Policy {
        Policy::from_labels(Side::BOTH.into_iter().flat_map(|side| {
            let b = &bits[side.index() as usize - 1];
            (0..g.vertices(side).len()).map(move |p| (g.id_at(side, p), b[p]))
        }))
    }

    pub fn get(&self, v: VertexId) -> Option<bool> {
        self.labels.get(&v).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = (VertexId, bool)> + '_ {
        self.labels.iter().map(|(&v, &b)| (v, b))
    }

    /// The transmitted vertex set.
    pub fn cover(&self) -> BTreeSet<VertexId> {
        self.labels.iter().filter(|(_, &b)| b).map(|(&v, _)| v).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Positional view `[side - 1][pos]`, checking that the policy labels
    /// exactly the vertices of `g`.
    pub fn bits(&self, g: &ExchangeGraph) -> Result<[Vec<bool>; 2]> {
        if self.labels.len() != g.vertex_count() {
            return Err(Error::LabelDomainMismatch(format!(
                "{} labels for {} vertices",
                self.labels.len(),
                g.vertex_count()
            )));
        }
        let mut out = [Vec::with_capacity(g.vertices(Side::One).len()), Vec::new()];
        for (id, (&lid, &bit)) in g.vertex_ids().zip(&self.labels) {
            if id != lid {
                return Err(Error::LabelDomainMismatch(format!("expected {id}, found {lid}")));
            }
            out[id.side.index() as usize - 1].push(bit);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let file = PolicyFile {
            labels: self
                .labels
                .iter()
                .map(|(v, &b)| LabelRecord {
                    side: v.side,
                    index: v.index,
                    bit: b as u8,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("policy serialization")
    }

    pub fn from_json(text: &str) -> Result<Policy> {
        let file: PolicyFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("policy file: {e}")))?;
        let mut labels = BTreeMap::new();
        for r in file.labels {
            let id = VertexId::new(r.side, r.index);
            let bit = match r.bit {
                0 => false,
                1 => true,
                b => return Err(Error::Parse(format!("label of {id} must be 0 or 1, found {b}"))),
            };
            if labels.insert(id, bit).is_some() {
                return Err(Error::Parse(format!("vertex {id} labelled twice")));
            }
        }
        Ok(Policy { labels })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Policy> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(&path, self.to_json() + "\n").map_err(|e| Error::io(&path, e))
    }
}

#[derive(Serialize, Deserialize)]
struct LabelRecord {
    side: Side,
    index: u64,
    bit: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    labels: Vec<LabelRecord>,
}

/// First edge left uncovered by `bits`, if any.
fn uncovered_edge(g: &ExchangeGraph, bits: &[Vec<bool>; 2]) -> Option<usize> {
    g.edges().iter().position(|e| !bits[0][e.u] && !bits[1][e.v])
}

pub fn is_admissible(g: &ExchangeGraph, pi: &Policy) -> Result<bool> {
    Ok(uncovered_edge(g, &pi.bits(g)?).is_none())
}

fn admissible_bits(g: &ExchangeGraph, pi: &Policy) -> Result<[Vec<bool>; 2]> {
    let bits = pi.bits(g)?;
    if let Some(k) = uncovered_edge(g, &bits) {
        let (u, v) = g.endpoints(k);
        return Err(Error::InadmissiblePolicy { u, v });
    }
    Ok(bits)
}

/// Transmits every scan of `source` and nothing else.
pub fn monolog(g: &ExchangeGraph, source: Side) -> Result<Policy> {
    if g.vertices(source).is_empty() {
        return Err(Error::EmptySide(source.index()));
    }
    Ok(Policy::from_labels(g.vertex_ids().map(|v| (v, v.side == source))))
}

/// Transmits every scan in both directions.
pub fn full_bidirectional(g: &ExchangeGraph) -> Policy {
    Policy::from_labels(g.vertex_ids().map(|v| (v, true)))
}

/// Communication cost: total transmission price of the labelled vertices.
/// Uses the inertia price where one is set, the scan size otherwise.
pub fn comm_cost(g: &ExchangeGraph, pi: &Policy) -> Result<Rational> {
    let bits = pi.bits(g)?;
    Ok(Side::BOTH
        .into_iter()
        .flat_map(|side| {
            let b = &bits[side.index() as usize - 1];
            g.vertices(side)
                .iter()
                .zip(b)
                .filter(|(_, &x)| x)
                .map(|(v, _)| v.price().clone())
        })
        .sum())
}

/// Raw bytes put on the wire when `pi` is executed.
pub fn transmitted_bytes(g: &ExchangeGraph, pi: &Policy) -> Result<Rational> {
    Ok(execute_order(g, pi)?.into_iter().map(|t| t.bytes).sum())
}

/// How an admissible policy splits the candidate set between the robots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkloadReport {
    /// Edges robot 1 verifies: those incident to a transmitted side-2 vertex.
    pub l1_edges: Vec<usize>,
    /// Edges robot 2 verifies: those incident to a transmitted side-1 vertex.
    pub l2_edges: Vec<usize>,
    /// Edges verified by both robots.
    pub l12_edges: Vec<usize>,
    pub ell1: Rational,
    pub ell2: Rational,
    /// `alpha1 * ell1 + alpha2 * ell2`.
    pub balance: Rational,
}

impl WorkloadReport {
    pub fn verify_set(&self, robot: Side) -> &[usize] {
        match robot {
            Side::One => &self.l1_edges,
            Side::Two => &self.l2_edges,
        }
    }

    pub fn ell(&self, robot: Side) -> &Rational {
        match robot {
            Side::One => &self.ell1,
            Side::Two => &self.ell2,
        }
    }
}

pub fn workloads(g: &ExchangeGraph, pi: &Policy, alpha1: &Rational, alpha2: &Rational) -> Result<WorkloadReport> {
    let bits = admissible_bits(g, pi)?;
    let mut report = WorkloadReport {
        l1_edges: Vec::new(),
        l2_edges: Vec::new(),
        l12_edges: Vec::new(),
        ell1: Rational::zero(),
        ell2: Rational::zero(),
        balance: Rational::zero(),
    };
    for (k, e) in g.edges().iter().enumerate() {
        let (sent_u, sent_v) = (bits[0][e.u], bits[1][e.v]);
        if sent_v {
            report.l1_edges.push(k);
            report.ell1 += &e.cost;
        }
        if sent_u {
            report.l2_edges.push(k);
            report.ell2 += &e.cost;
        }
        if sent_u && sent_v {
            report.l12_edges.push(k);
        }
    }
    report.balance = alpha1 * &report.ell1 + alpha2 * &report.ell2;
    Ok(report)
}

/// Objective value of any labelling (admissible or not).
pub fn objective_cost(g: &ExchangeGraph, pi: &Policy, objective: &Objective) -> Result<Rational> {
    let bits = pi.bits(g)?;
    let weights = g.effective_weights(objective);
    Ok((0..2)
        .flat_map(|s| weights[s].iter().zip(&bits[s]).filter(|(_, &b)| b).map(|(w, _)| w))
        .sum())
}

/// One scan transfer scheduled by [`execute_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub vertex: VertexId,
    pub to: Side,
    pub bytes: Rational,
}

/// The scans to send, in ascending `(side, index)` order.
pub fn execute_order(g: &ExchangeGraph, pi: &Policy) -> Result<Vec<Transmission>> {
    admissible_bits(g, pi)?;
    Ok(pi
        .labels
        .iter()
        .filter(|(_, &b)| b)
        .map(|(&v, _)| Transmission {
            vertex: v,
            to: v.side.other(),
            bytes: g.vertex(v).expect("labels match graph").scan_size.clone(),
        })
        .collect())
}
