//! The exchange graph: a vertex- and edge-weighted bipartite graph whose two
//! sides are the poses of two robots and whose edges are candidate
//! inter-robot loop closures.
//!
//! Graphs are validated on construction and immutable afterwards. Vertices on
//! each side are kept sorted by id and edges sorted by `(u, v)`, so two graphs
//! built from the same data compare equal regardless of input order.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy::Objective;
use crate::rational::{self, Rational};

/// One of the two robots taking part in an exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::One, Side::Two];

    pub fn from_index(i: u8) -> Result<Side> {
        match i {
            1 => Ok(Side::One),
            2 => Ok(Side::Two),
            other => Err(Error::InvalidSide(other)),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl Serialize for Side {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

impl<'de> Deserialize<'de> for Side {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Side::from_index(u8::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A pose of one robot, identified by its side and its id on that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub side: Side,
    pub index: u64,
}

impl VertexId {
    pub fn new(side: Side, index: u64) -> Self {
        VertexId { side, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: u64,
    /// Size of the scan attached to this pose, in bytes.
    pub scan_size: Rational,
    /// Exchange-inertia price. When set it stands in for `scan_size` in every
    /// objective that prices transmission.
    pub inertia: Option<Rational>,
}

impl Vertex {
    pub fn new(id: u64, scan_size: Rational) -> Self {
        Vertex {
            id,
            scan_size,
            inertia: None,
        }
    }

    /// Transmission price: the inertia override if present, else the scan size.
    pub fn price(&self) -> &Rational {
        self.inertia.as_ref().unwrap_or(&self.scan_size)
    }
}

/// An edge stored by vertex position (`u` into side 1, `v` into side 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: Rational,
}

/// Edge given by vertex ids, as accepted by [`ExchangeGraph::from_parts`].
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub u: u64,
    pub v: u64,
    pub cost: Rational,
}

/// Per-vertex incident edge lists; the sparse form of the unoriented incidence
/// matrix. Every edge appears in exactly two lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Incidence {
    pub side1: Vec<Vec<usize>>,
    pub side2: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn of(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::One => &self.side1,
            Side::Two => &self.side2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeGraph {
    v1: Vec<Vertex>,
    v2: Vec<Vertex>,
    edges: Vec<Edge>,
    incidence: Incidence,
}

/// A validated graph together with the isolated vertices dropped on the way.
#[derive(Clone, Debug)]
pub struct BuildOutcome {
    pub graph: ExchangeGraph,
    pub pruned: Vec<VertexId>,
}

fn check_weight(what: impl FnOnce() -> String, w: &Rational) -> Result<()> {
    if w.is_negative() {
        return Err(Error::NegativeWeight {
            what: what(),
            value: rational::format(w),
        });
    }
    Ok(())
}

/// Builds a graph whose vertex ids are list positions.
pub fn build_graph(
    v1_weights: &[Rational],
    v2_weights: &[Rational],
    edges: &[(usize, usize, Rational)],
) -> Result<BuildOutcome> {
    let mut specs = Vec::with_capacity(edges.len());
    for (u, v, cost) in edges {
        if *u >= v1_weights.len() {
            return Err(Error::IndexOutOfRange {
                side: 1,
                index: *u,
                len: v1_weights.len(),
            });
        }
        if *v >= v2_weights.len() {
            return Err(Error::IndexOutOfRange {
                side: 2,
                index: *v,
                len: v2_weights.len(),
            });
        }
        specs.push(EdgeSpec {
            u: *u as u64,
            v: *v as u64,
            cost: cost.clone(),
        });
    }
    let side = |ws: &[Rational]| -> Vec<Vertex> {
        ws.iter()
            .enumerate()
            .map(|(i, w)| Vertex::new(i as u64, w.clone()))
            .collect()
    };
    ExchangeGraph::from_parts(side(v1_weights), side(v2_weights), specs)
}

impl ExchangeGraph {
    /// Validates and assembles a graph. Degree-0 vertices are pruned and
    /// returned in [`BuildOutcome::pruned`].
    pub fn from_parts(mut v1: Vec<Vertex>, mut v2: Vec<Vertex>, edges: Vec<EdgeSpec>) -> Result<BuildOutcome> {
        for (side, vs) in [(Side::One, &mut v1), (Side::Two, &mut v2)] {
            vs.sort_by_key(|v| v.id);
            for pair in vs.windows(2) {
                if pair[0].id == pair[1].id {
                    return Err(Error::DuplicateVertex(VertexId::new(side, pair[0].id)));
                }
            }
            for v in vs.iter() {
                let id = VertexId::new(side, v.id);
                check_weight(|| format!("scan_size of {id}"), &v.scan_size)?;
                if let Some(p) = &v.inertia {
                    check_weight(|| format!("inertia of {id}"), p)?;
                }
            }
        }

        let locate = |vs: &[Vertex], side: Side, id: u64| {
            vs.binary_search_by_key(&id, |v| v.id)
                .map_err(|_| Error::UnknownVertex(VertexId::new(side, id)))
        };
        let mut seen = HashSet::with_capacity(edges.len());
        let mut resolved = Vec::with_capacity(edges.len());
        for e in edges {
            let u = locate(&v1, Side::One, e.u)?;
            let v = locate(&v2, Side::Two, e.v)?;
            check_weight(|| format!("cost of edge {}:{} - {}:{}", 1, e.u, 2, e.v), &e.cost)?;
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge {
                    u: VertexId::new(Side::One, e.u),
                    v: VertexId::new(Side::Two, e.v),
                });
            }
            resolved.push(Edge { u, v, cost: e.cost });
        }

        let mut deg1 = vec![0usize; v1.len()];
        let mut deg2 = vec![0usize; v2.len()];
        for e in &resolved {
            deg1[e.u] += 1;
            deg2[e.v] += 1;
        }
        let mut pruned = Vec::new();
        let mut keep = |vs: Vec<Vertex>, deg: &[usize], side: Side| -> (Vec<Vertex>, Vec<usize>) {
            let mut remap = vec![usize::MAX; vs.len()];
            let mut kept = Vec::with_capacity(vs.len());
            for (i, v) in vs.into_iter().enumerate() {
                if deg[i] == 0 {
                    log::warn!("pruning isolated vertex {}", VertexId::new(side, v.id));
                    pruned.push(VertexId::new(side, v.id));
                } else {
                    remap[i] = kept.len();
                    kept.push(v);
                }
            }
            (kept, remap)
        };
        let (v1, remap1) = keep(v1, &deg1, Side::One);
        let (v2, remap2) = keep(v2, &deg2, Side::Two);
        let mut edges: Vec<Edge> = resolved
            .into_iter()
            .map(|e| Edge {
                u: remap1[e.u],
                v: remap2[e.v],
                cost: e.cost,
            })
            .collect();
        edges.sort_by_key(|e| (e.u, e.v));

        let mut incidence = Incidence {
            side1: vec![Vec::new(); v1.len()],
            side2: vec![Vec::new(); v2.len()],
        };
        for (k, e) in edges.iter().enumerate() {
            incidence.side1[e.u].push(k);
            incidence.side2[e.v].push(k);
        }
        Ok(BuildOutcome {
            graph: ExchangeGraph {
                v1,
                v2,
                edges,
                incidence,
            },
            pruned,
        })
    }

    pub fn vertices(&self, side: Side) -> &[Vertex] {
        match side {
            Side::One => &self.v1,
            Side::Two => &self.v2,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    pub fn vertex_count(&self) -> usize {
        self.v1.len() + self.v2.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// All vertex ids, side 1 first, each side in ascending id order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        Side::BOTH
            .into_iter()
            .flat_map(move |side| self.vertices(side).iter().map(move |v| VertexId::new(side, v.id)))
    }

    pub fn id_at(&self, side: Side, pos: usize) -> VertexId {
        VertexId::new(side, self.vertices(side)[pos].id)
    }

    pub fn position(&self, v: VertexId) -> Result<usize> {
        self.vertices(v.side)
            .binary_search_by_key(&v.index, |x| x.id)
            .map_err(|_| Error::UnknownVertex(v))
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex> {
        Ok(&self.vertices(v.side)[self.position(v)?])
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.incidence.of(v.side)[self.position(v)?].len())
    }

    /// Endpoint ids of edge `k`.
    pub fn endpoints(&self, k: usize) -> (VertexId, VertexId) {
        let e = &self.edges[k];
        (self.id_at(Side::One, e.u), self.id_at(Side::Two, e.v))
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let (u, v) = if u.side == Side::One { (u, v) } else { (v, u) };
        if u.side != Side::One || v.side != Side::Two {
            return None;
        }
        let (pu, pv) = (self.position(u).ok()?, self.position(v).ok()?);
        self.edges.binary_search_by_key(&(pu, pv), |e| (e.u, e.v)).ok()
    }

    /// Positions of the neighbours of vertex `pos` on `side` (they live on the
    /// other side).
    pub fn neighbours(&self, side: Side, pos: usize) -> impl Iterator<Item = usize> + '_ {
        self.incidence.of(side)[pos].iter().map(move |&k| match side {
            Side::One => self.edges[k].v,
            Side::Two => self.edges[k].u,
        })
    }

    /// Sum of candidate costs incident to each vertex, per side.
    pub fn incident_costs(&self) -> [Vec<Rational>; 2] {
        let mut c1 = vec![Rational::zero(); self.v1.len()];
        let mut c2 = vec![Rational::zero(); self.v2.len()];
        for e in &self.edges {
            c1[e.u] += &e.cost;
            c2[e.v] += &e.cost;
        }
        [c1, c2]
    }

    pub fn total_edge_cost(&self) -> Rational {
        self.edges.iter().map(|e| &e.cost).sum()
    }

    /// Effective vertex weights under `objective`, indexed `[side - 1][pos]`.
    pub fn effective_weights(&self, objective: &Objective) -> [Vec<Rational>; 2] {
        let [c1, c2] = self.incident_costs();
        let compose = |vs: &[Vertex], costs: Vec<Rational>, load_factor: &Rational| {
            vs.iter()
                .zip(costs)
                .map(|(v, c)| objective.compose(v.price(), &(load_factor * c)))
                .collect()
        };
        // Shipping a side-1 scan puts work on robot 2, hence alpha2 here.
        [
            compose(&self.v1, c1, objective.alpha2()),
            compose(&self.v2, c2, objective.alpha1()),
        ]
    }

    /// Returns a copy of the graph with exchange-inertia prices replaced.
    pub fn with_inertia(
        &self,
        overrides: impl IntoIterator<Item = (VertexId, Option<Rational>)>,
    ) -> Result<ExchangeGraph> {
        let mut g = self.clone();
        for (id, price) in overrides {
            if let Some(p) = &price {
                check_weight(|| format!("inertia of {id}"), p)?;
            }
            let pos = g.position(id)?;
            match id.side {
                Side::One => g.v1[pos].inertia = price,
                Side::Two => g.v2[pos].inertia = price,
            }
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<BuildOutcome> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph serialization")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<BuildOutcome> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(&path, self.to_json() + "\n").map_err(|e| Error::io(&path, e))
    }
}

/// Effective weight of a single vertex under `objective`.
pub fn effective_weight(g: &ExchangeGraph, v: VertexId, objective: &Objective) -> Result<Rational> {
    let pos = g.position(v)?;
    let incident: Rational = g.incidence.of(v.side)[pos].iter().map(|&k| &g.edges[k].cost).sum();
    let factor = match v.side {
        Side::One => objective.alpha2(),
        Side::Two => objective.alpha1(),
    };
    Ok(objective.compose(g.vertices(v.side)[pos].price(), &(factor * incident)))
}

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    id: u64,
    #[serde(with = "rational::exact")]
    scan_size: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rational::exact::option")]
    inertia: Option<Rational>,
}

fn unit_cost() -> Rational {
    rational::int(1)
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    u: u64,
    v: u64,
    #[serde(default = "unit_cost", with = "rational::exact")]
    cost: Rational,
}

/// On-disk JSON layout of an exchange graph.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    v1: Vec<VertexRecord>,
    v2: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

impl GraphFile {
    fn into_graph(self) -> Result<BuildOutcome> {
        let side = |rs: Vec<VertexRecord>| -> Vec<Vertex> {
            rs.into_iter()
                .map(|r| Vertex {
                    id: r.id,
                    scan_size: r.scan_size,
                    inertia: r.inertia,
                })
                .collect()
        };
        let edges = self
            .edges
            .into_iter()
            .map(|e| EdgeSpec {
                u: e.u,
                v: e.v,
                cost: e.cost,
            })
            .collect();
        ExchangeGraph::from_parts(side(self.v1), side(self.v2), edges)
    }
}

impl From<&ExchangeGraph> for GraphFile {
    fn from(g: &ExchangeGraph) -> Self {
        let side = |vs: &[Vertex]| -> Vec<VertexRecord> {
            vs.iter()
                .map(|v| VertexRecord {
                    id: v.id,
                    scan_size: v.scan_size.clone(),
                    inertia: v.inertia.clone(),
                })
                .collect()
        };
        GraphFile {
            v1: side(&g.v1),
            v2: side(&g.v2),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: g.v1[e.u].id,
                    v: g.v2[e.v].id,
                    cost: e.cost.clone(),
                })
                .collect(),
        }
    }
}
