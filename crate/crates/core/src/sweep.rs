//! Parameter sweeps producing cost curves.
//!
//! Each sweep point rebuilds (or re-prices) the exchange graph, solves it,
//! and records the communication cost of the optimal policy next to the two
//! monologs and full bidirectional exchange.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::candidates::{self, AppearanceParams, GeometryParams, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{ExchangeGraph, VertexId};
use crate::policy::{self, Objective};
use crate::protocol::{strategy_policy, Strategy};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    DMax,
    Eta,
    Alpha,
    Omega,
}

impl SweepParam {
    /// Whether the candidate set grows (`Some(true)`), shrinks
    /// (`Some(false)`) or stays fixed (`None`) as the value increases.
    pub fn grows(self) -> Option<bool> {
        match self {
            SweepParam::DMax => Some(true),
            SweepParam::Eta | SweepParam::Alpha => Some(false),
            SweepParam::Omega => None,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::DMax => "dmax",
            SweepParam::Eta => "eta",
            SweepParam::Alpha => "alpha",
            SweepParam::Omega => "omega",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dmax" | "d_max" => Ok(SweepParam::DMax),
            "eta" => Ok(SweepParam::Eta),
            "alpha" => Ok(SweepParam::Alpha),
            "omega" => Ok(SweepParam::Omega),
            other => Err(Error::InvalidParameter(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: Rational,
    pub to: Rational,
    pub step: Rational,
}

impl SweepSpec {
    pub fn new(param: SweepParam, from: Rational, to: Rational, step: Rational) -> Result<SweepSpec> {
        if from > to {
            return Err(Error::InvalidParameter("sweep needs from <= to".into()));
        }
        if !step.is_positive() {
            return Err(Error::InvalidParameter("sweep step must be positive".into()));
        }
        Ok(SweepSpec { param, from, to, step })
    }

    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut x = self.from.clone();
        while x <= self.to {
            out.push(x.clone());
            x += &self.step;
        }
        out
    }
}

/// What a sweep rebuilds its graph from.
#[derive(Clone, Copy, Debug)]
pub enum SweepInput<'a> {
    /// Geometric candidates; `params` holds the values not being swept.
    Poses {
        t1: &'a Trajectory,
        t2: &'a Trajectory,
        params: &'a GeometryParams,
    },
    Scores {
        scores: &'a [(usize, usize, f64)],
        w1: &'a [Rational],
        w2: &'a [Rational],
        params: &'a AppearanceParams,
    },
    /// A fixed graph, for omega sweeps.
    Graph(&'a ExchangeGraph),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub value: Rational,
    pub optimal: Rational,
    pub monolog1: Rational,
    pub monolog2: Rational,
    pub bidirectional: Rational,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
    /// Row indices whose candidate set is not nested with the previous row's.
    pub nesting_violations: Vec<usize>,
}

impl SweepReport {
    pub fn nested(&self) -> bool {
        self.nesting_violations.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param_value,optimal,monolog1,monolog2,bidirectional,vertices,edges\n");
        for r in &self.rows {
            out.push_str(&row_fields(r).join(","));
            out.push('\n');
        }
        out
    }

    /// The same table as a gnuplot data block named `$sweep`.
    pub fn to_gnuplot(&self) -> String {
        let mut out = format!(
            "# {} optimal monolog1 monolog2 bidirectional vertices edges\n$sweep << EOD\n",
            self.param
        );
        for r in &self.rows {
            let fields: Vec<String> = row_fields(r)
                .into_iter()
                .enumerate()
                .map(|(i, f)| if i < 5 { decimal(&f) } else { f })
                .collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out.push_str("EOD\n");
        out
    }
}

fn row_fields(r: &SweepRow) -> Vec<String> {
    vec![
        rational::format(&r.value),
        rational::format(&r.optimal),
        rational::format(&r.monolog1),
        rational::format(&r.monolog2),
        rational::format(&r.bidirectional),
        r.vertices.to_string(),
        r.edges.to_string(),
    ]
}

// gnuplot cannot read "p/q".
fn decimal(field: &str) -> String {
    match rational::parse(field) {
        Ok(q) if field.contains('/') => format!("{}", rational::to_f64(&q)),
        _ => field.to_string(),
    }
}

fn graph_at(input: &SweepInput<'_>, param: SweepParam, value: &Rational) -> Result<ExchangeGraph> {
    let x = rational::to_f64(value);
    let mismatch = || Error::InvalidParameter(format!("cannot sweep {param} over this input"));
    match (*input, param) {
        (SweepInput::Poses { t1, t2, params }, SweepParam::DMax | SweepParam::Eta) => {
            let mut p = params.clone();
            if param == SweepParam::DMax {
                p.d_max = x;
            } else {
                p.eta = x;
            }
            Ok(candidates::build_geometric(t1, t2, &p)?.graph)
        }
        (SweepInput::Scores { scores, w1, w2, params }, SweepParam::Alpha) => {
            let p = AppearanceParams {
                alpha: x,
                ..params.clone()
            };
            Ok(candidates::build_appearance(scores, w1, w2, &p)?.graph)
        }
        (SweepInput::Graph(g), SweepParam::Omega) => Ok(g.clone()),
        _ => Err(mismatch()),
    }
}

fn objective_at(base: &Objective, param: SweepParam, value: &Rational) -> Result<Objective> {
    if param == SweepParam::Omega {
        Objective::p3(base.alpha1().clone(), base.alpha2().clone(), value.clone())
    } else {
        Ok(base.clone())
    }
}

type EdgeSet = BTreeSet<(VertexId, VertexId)>;

fn edge_set(g: &ExchangeGraph) -> EdgeSet {
    (0..g.edge_count()).map(|k| g.endpoints(k)).collect()
}

/// Evaluates one sweep point: the optimal policy under the objective and the
/// communication cost of it and of each baseline.
pub fn sweep_point(g: &ExchangeGraph, objective: &Objective, value: Rational) -> Result<SweepRow> {
    let cost = |s| -> Result<Rational> {
        if g.vertex_count() == 0 {
            return Ok(Rational::zero());
        }
        policy::comm_cost(g, &strategy_policy(g, objective, s)?)
    };
    Ok(SweepRow {
        value,
        optimal: cost(Strategy::Optimal)?,
        monolog1: cost(Strategy::Monolog1)?,
        monolog2: cost(Strategy::Monolog2)?,
        bidirectional: cost(Strategy::FullBidirectional)?,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    })
}

/// Runs the sweep. Points are solved on worker threads; rows come back in
/// parameter order.
pub fn run_sweep(input: &SweepInput<'_>, spec: &SweepSpec, objective: &Objective) -> Result<SweepReport> {
    let values = spec.values();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(values.len().max(1));
    let chunk = values.len().div_ceil(workers).max(1);

    let results: Vec<Result<(SweepRow, EdgeSet)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = values
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|v| {
                            let g = graph_at(input, spec.param, v)?;
                            let obj = objective_at(objective, spec.param, v)?;
                            let row = sweep_point(&g, &obj, v.clone())?;
                            Ok((row, edge_set(&g)))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut nesting_violations = Vec::new();
    let mut previous: Option<EdgeSet> = None;
    for (i, r) in results.into_iter().enumerate() {
        let (row, edges) = r?;
        if let Some(prev) = &previous {
            let ok = match spec.param.grows() {
                Some(true) => prev.is_subset(&edges),
                Some(false) => edges.is_subset(prev),
                None => *prev == edges,
            };
            if !ok {
                log::warn!("candidate sets at rows {} and {i} are not nested", i - 1);
                nesting_violations.push(i);
            }
        }
        previous = Some(edges);
        rows.push(row);
    }
    Ok(SweepReport {
        param: spec.param,
        rows,
        nesting_violations,
    })
}

/// Savings of the optimal policy over the cheaper monolog, per row.
pub fn savings(report: &SweepReport) -> Vec<Rational> {
    report
        .rows
        .iter()
        .map(|r| r.monolog1.clone().min(r.monolog2.clone()) - &r.optimal)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::synthetic::figure_eight_pair;
    use crate::rational::int;

    #[test]
    fn spec_values_are_exact() {
        let s = SweepSpec::new(
            SweepParam::Alpha,
            rational::ratio(1, 10),
            rational::ratio(3, 10),
            rational::ratio(1, 10),
        )
        .unwrap();
        assert_eq!(
            s.values(),
            vec![rational::ratio(1, 10), rational::ratio(1, 5), rational::ratio(3, 10)]
        );
        assert!(SweepSpec::new(SweepParam::Eta, int(2), int(1), int(1)).is_err());
        assert!(SweepSpec::new(SweepParam::Eta, int(0), int(1), int(0)).is_err());
    }

    #[test]
    fn dmax_sweep_on_figure_eight() {
        let (t1, t2) = figure_eight_pair(100);
        let params = GeometryParams::default();
        let input = SweepInput::Poses {
            t1: &t1,
            t2: &t2,
            params: &params,
        };
        let spec = SweepSpec::new(SweepParam::DMax, int(10), int(50), int(10)).unwrap();
        let report = run_sweep(&input, &spec, &Objective::p2()).unwrap();
        assert_eq!(report.rows.len(), 5);
        assert!(report.nested());
        for r in &report.rows {
            assert!(r.optimal <= r.monolog1.clone().min(r.monolog2.clone()));
            assert_eq!(r.bidirectional, &r.monolog1 + &r.monolog2);
        }
        assert_eq!(
            report.to_csv(),
            run_sweep(&input, &spec, &Objective::p2()).unwrap().to_csv()
        );
        assert!(report.to_gnuplot().contains("$sweep << EOD"));
    }

    #[test]
    fn mismatched_input_is_rejected() {
        let (t1, t2) = figure_eight_pair(10);
        let params = GeometryParams::default();
        let input = SweepInput::Poses {
            t1: &t1,
            t2: &t2,
            params: &params,
        };
        let spec = SweepSpec::new(SweepParam::Alpha, int(0), int(1), int(1)).unwrap();
        assert!(run_sweep(&input, &spec, &Objective::p2()).is_err());
    }
}
