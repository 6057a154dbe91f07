//! Simulation of a complete broker-mediated rendezvous.
//!
//! The session runs in fixed rounds: both robots send metadata to the broker,
//! the broker solves for a policy and returns each robot its labels, the
//! robots exchange scans, each verifies the candidates it is responsible for
//! against a ground-truth oracle, and finally the robots swap the loop
//! closures the other side could not have found itself. Every message is
//! logged with its size.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{ExchangeGraph, Side, VertexId};
use crate::policy::{self, Objective, Policy};
use crate::rational::{self, Rational};
use crate::solver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Metadata,
    Scan,
    Closure,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Metadata => "metadata",
            Phase::Scan => "scan",
            Phase::Closure => "closure",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Actor {
    Robot(Side),
    Broker,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Robot(s) => write!(f, "robot{s}"),
            Actor::Broker => f.write_str("broker"),
        }
    }
}

/// Where the broker runs. A broker hosted on a robot talks to that robot for
/// free.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BrokerPlacement {
    #[default]
    ThirdParty,
    OnRobot(Side),
}

/// Size of a pose's metadata (e.g. its bag-of-words vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetadataSize {
    PerVertex(Rational),
    /// A fixed share of the scan size; word ids versus full descriptors.
    ScanFraction(Rational),
}

impl Default for MetadataSize {
    fn default() -> Self {
        MetadataSize::ScanFraction(rational::ratio(
            crate::candidates::WORD_BYTES as i64,
            crate::candidates::DESCRIPTOR_BYTES as i64,
        ))
    }
}

pub const CLOSURE_BYTES: i64 = 64;

#[derive(Clone, Debug)]
pub struct RendezvousConfig {
    pub objective: Objective,
    pub metadata: MetadataSize,
    /// Candidate edges that are true loop closures.
    pub ground_truth: BTreeSet<(VertexId, VertexId)>,
    pub channel_alive_after_exchange: bool,
    pub broker: BrokerPlacement,
    pub closure_bytes: Rational,
}

impl Default for RendezvousConfig {
    fn default() -> Self {
        RendezvousConfig {
            objective: Objective::p2(),
            metadata: MetadataSize::default(),
            ground_truth: BTreeSet::new(),
            channel_alive_after_exchange: true,
            broker: BrokerPlacement::ThirdParty,
            closure_bytes: rational::int(CLOSURE_BYTES),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub phase: Phase,
    pub from: Actor,
    pub to: Actor,
    pub bytes: Rational,
    pub summary: String,
}

#[derive(Clone, Debug)]
pub struct RendezvousTrace {
    pub policy: Policy,
    pub messages: Vec<Message>,
    /// Candidate edges (indices into the graph) each robot verified.
    pub verified: [Vec<usize>; 2],
    /// Loop closures each robot found itself.
    pub discovered: [BTreeSet<usize>; 2],
    /// Closures each robot sent to the other in the closure round.
    pub shared: [Vec<usize>; 2],
    /// Closures that should have been shared but the channel was down.
    pub undelivered: [Vec<usize>; 2],
    /// Closures each robot knows about at the end of the session.
    pub known: [BTreeSet<usize>; 2],
    pub metadata_bytes: Rational,
    pub scan_bytes: Rational,
    pub closure_bytes: Rational,
    pub ell1: Rational,
    pub ell2: Rational,
}

impl RendezvousTrace {
    pub fn total_bytes(&self) -> Rational {
        self.messages.iter().map(|m| &m.bytes).sum()
    }

    pub fn found_by_both(&self) -> BTreeSet<usize> {
        self.discovered[0].intersection(&self.discovered[1]).copied().collect()
    }

    /// One line per message: `phase from to bytes summary`.
    pub fn to_log(&self) -> String {
        self.messages
            .iter()
            .map(|m| {
                format!(
                    "{} {} {} {} {}\n",
                    m.phase,
                    m.from,
                    m.to,
                    rational::format(&m.bytes),
                    m.summary
                )
            })
            .collect()
    }
}

/// Ground-truth file: lines of `u v`, a side-1 vertex id and a side-2 vertex
/// id. Blank lines and `#` comments are skipped.
pub fn parse_ground_truth(text: &str) -> Result<BTreeSet<(VertexId, VertexId)>> {
    let mut out = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse(format!("ground truth line {}: expected `u v`", i + 1));
        let f: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = f.as_slice() else { return Err(bad()) };
        let u = u.parse().map_err(|_| bad())?;
        let v = v.parse().map_err(|_| bad())?;
        out.insert((VertexId::new(Side::One, u), VertexId::new(Side::Two, v)));
    }
    Ok(out)
}

fn ground_truth_edges(g: &ExchangeGraph, cfg: &RendezvousConfig) -> Result<BTreeSet<usize>> {
    cfg.ground_truth
        .iter()
        .map(|&(u, v)| g.find_edge(u, v).ok_or(Error::GroundTruthOutsideCandidates { u, v }))
        .collect()
}

fn side_slot(s: Side) -> usize {
    s.index() as usize - 1
}

/// Runs the full session with the policy the broker computes for
/// `cfg.objective`.
pub fn run_rendezvous(g: &ExchangeGraph, cfg: &RendezvousConfig) -> Result<RendezvousTrace> {
    ground_truth_edges(g, cfg)?;
    let solved = solver::solve(g, &cfg.objective)?;
    run_with_policy(g, cfg, &solved.policy)
}

/// Runs the session with a given admissible policy in place of the broker's
/// solution.
pub fn run_with_policy(g: &ExchangeGraph, cfg: &RendezvousConfig, pi: &Policy) -> Result<RendezvousTrace> {
    let truth = ground_truth_edges(g, cfg)?;
    let report = policy::workloads(g, pi, cfg.objective.alpha1(), cfg.objective.alpha2())?;
    let mut messages = Vec::new();

    // Round 1: metadata up, policy down.
    let colocated = |s: Side| cfg.broker == BrokerPlacement::OnRobot(s);
    for side in Side::BOTH {
        let bytes: Rational = if colocated(side) {
            Rational::zero()
        } else {
            g.vertices(side)
                .iter()
                .map(|v| match &cfg.metadata {
                    MetadataSize::PerVertex(b) => b.clone(),
                    MetadataSize::ScanFraction(f) => f * &v.scan_size,
                })
                .sum()
        };
        messages.push(Message {
            phase: Phase::Metadata,
            from: Actor::Robot(side),
            to: Actor::Broker,
            bytes,
            summary: format!("metadata for {} poses", g.vertices(side).len()),
        });
    }
    for side in Side::BOTH {
        // One bit per pose of the receiving robot.
        let n = g.vertices(side).len();
        let bytes = if colocated(side) { 0 } else { n.div_ceil(8) };
        messages.push(Message {
            phase: Phase::Metadata,
            from: Actor::Broker,
            to: Actor::Robot(side),
            bytes: Rational::from_integer(BigInt::from(bytes)),
            summary: format!("policy labels for {n} poses"),
        });
    }

    // Round 2: scans.
    let mut scan_bytes = Rational::zero();
    for t in policy::execute_order(g, pi)? {
        scan_bytes += &t.bytes;
        messages.push(Message {
            phase: Phase::Scan,
            from: Actor::Robot(t.vertex.side),
            to: Actor::Robot(t.to),
            bytes: t.bytes,
            summary: format!("scan {}", t.vertex),
        });
    }

    // Round 3: local verification against the oracle.
    let verified = [report.l1_edges.clone(), report.l2_edges.clone()];
    let discovered: [BTreeSet<usize>; 2] =
        [0, 1].map(|i| verified[i].iter().copied().filter(|k| truth.contains(k)).collect());
    let both: BTreeSet<usize> = discovered[0].intersection(&discovered[1]).copied().collect();

    // Round 4: share what only one side found.
    let mut shared = [Vec::new(), Vec::new()];
    let mut undelivered = [Vec::new(), Vec::new()];
    let mut known = discovered.clone();
    let mut closure_bytes = Rational::zero();
    for side in Side::BOTH {
        let i = side_slot(side);
        let exclusive: Vec<usize> = discovered[i].difference(&both).copied().collect();
        if !cfg.channel_alive_after_exchange {
            undelivered[i] = exclusive;
            continue;
        }
        for &k in &exclusive {
            let (u, v) = g.endpoints(k);
            closure_bytes += &cfg.closure_bytes;
            messages.push(Message {
                phase: Phase::Closure,
                from: Actor::Robot(side),
                to: Actor::Robot(side.other()),
                bytes: cfg.closure_bytes.clone(),
                summary: format!("closure {u}-{v}"),
            });
            known[1 - i].insert(k);
        }
        shared[i] = exclusive;
    }

    let metadata_bytes = messages
        .iter()
        .filter(|m| m.phase == Phase::Metadata)
        .map(|m| &m.bytes)
        .sum();
    Ok(RendezvousTrace {
        policy: pi.clone(),
        messages,
        verified,
        discovered,
        shared,
        undelivered,
        known,
        metadata_bytes,
        scan_bytes,
        closure_bytes,
        ell1: report.ell1,
        ell2: report.ell2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Optimal,
    Monolog1,
    Monolog2,
    FullBidirectional,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Optimal,
        Strategy::Monolog1,
        Strategy::Monolog2,
        Strategy::FullBidirectional,
    ];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Optimal => "optimal",
            Strategy::Monolog1 => "monolog1",
            Strategy::Monolog2 => "monolog2",
            Strategy::FullBidirectional => "full_bidirectional",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyRow {
    pub strategy: Strategy,
    pub scan_bytes: Rational,
    pub metadata_bytes: Rational,
    pub ell1: Rational,
    pub ell2: Rational,
}

pub fn strategy_policy(g: &ExchangeGraph, objective: &Objective, s: Strategy) -> Result<Policy> {
    let monolog = |side| {
        if g.vertex_count() == 0 {
            Ok(Policy::default())
        } else {
            policy::monolog(g, side)
        }
    };
    match s {
        Strategy::Optimal => Ok(solver::solve(g, objective)?.policy),
        Strategy::Monolog1 => monolog(Side::One),
        Strategy::Monolog2 => monolog(Side::Two),
        Strategy::FullBidirectional => Ok(policy::full_bidirectional(g)),
    }
}

/// Runs the session once per strategy.
pub fn compare_strategies(g: &ExchangeGraph, cfg: &RendezvousConfig) -> Result<Vec<StrategyRow>> {
    Strategy::ALL
        .into_iter()
        .map(|s| {
            let pi = strategy_policy(g, &cfg.objective, s)?;
            let t = run_with_policy(g, cfg, &pi)?;
            Ok(StrategyRow {
                strategy: s,
                scan_bytes: t.scan_bytes,
                metadata_bytes: t.metadata_bytes,
                ell1: t.ell1,
                ell2: t.ell2,
            })
        })
        .collect()
}

pub fn strategies_csv(rows: &[StrategyRow]) -> String {
    let mut out = String::from("strategy,scan_bytes,metadata_bytes,ell1,ell2\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.strategy,
            rational::format(&r.scan_bytes),
            rational::format(&r.metadata_bytes),
            rational::format(&r.ell1),
            rational::format(&r.ell2)
        ));
    }
    out
}
