//! Monolog optimality certificates.
//!
//! The monolog from side `V∘` is optimal iff every subset `S ⊆ V∘` weighs no
//! more than its neighbourhood (the generalized Hall condition). Instead of
//! enumerating subsets, the condition is decided by comparing the monolog
//! against the exact optimum; when it fails, the vertices of `V∘` that the
//! optimal cover leaves out form a violating subset.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::Result;
use crate::graph::{ExchangeGraph, Side, VertexId};
use crate::policy::{Objective, Policy};
use crate::rational::Rational;

use super::{min_cover, ScaledWeights};

#[derive(Clone, Debug)]
pub struct GhcCertificate {
    pub side: Side,
    pub holds: bool,
    /// Empty when the condition holds; otherwise `S` with `w(S) > w(N(S))`.
    pub witness: BTreeSet<VertexId>,
    pub witness_weight: Rational,
    pub neighbourhood_weight: Rational,
    /// `(V∘ \ S) ∪ N(S)`, strictly cheaper than the monolog.
    pub improving_policy: Option<Policy>,
    pub improving_cost: Option<Rational>,
    pub monolog_cost: Rational,
    pub optimal_cost: Rational,
}

pub fn check_ghc(g: &ExchangeGraph, objective: &Objective, side: Side) -> Result<GhcCertificate> {
    let weights = g.effective_weights(objective);
    let scaled = ScaledWeights::new(&weights)?;
    let (cover, _) = min_cover(g, &scaled);
    let s = side.index() as usize - 1;
    let o = 1 - s;

    let sum = |side_idx: usize, pick: &dyn Fn(usize) -> bool| -> Rational {
        weights[side_idx]
            .iter()
            .enumerate()
            .filter(|&(p, _)| pick(p))
            .map(|(_, w)| w)
            .sum()
    };
    let monolog_cost = sum(s, &|_| true);
    let optimal_cost = sum(0, &|p| cover[0][p]) + sum(1, &|p| cover[1][p]);

    let mut cert = GhcCertificate {
        side,
        holds: optimal_cost == monolog_cost,
        witness: BTreeSet::new(),
        witness_weight: Rational::zero(),
        neighbourhood_weight: Rational::zero(),
        improving_policy: None,
        improving_cost: None,
        monolog_cost,
        optimal_cost,
    };
    if cert.holds {
        return Ok(cert);
    }

    let in_witness: Vec<bool> = cover[s].iter().map(|&c| !c).collect();
    let mut in_nbhd = vec![false; weights[o].len()];
    for (p, _) in in_witness.iter().enumerate().filter(|(_, &w)| w) {
        for q in g.neighbours(side, p) {
            in_nbhd[q] = true;
        }
    }
    cert.witness = (0..in_witness.len())
        .filter(|&p| in_witness[p])
        .map(|p| g.id_at(side, p))
        .collect();
    cert.witness_weight = sum(s, &|p| in_witness[p]);
    cert.neighbourhood_weight = sum(o, &|q| in_nbhd[q]);

    let mut bits = [Vec::new(), Vec::new()];
    bits[s] = in_witness.iter().map(|&w| !w).collect();
    bits[o] = in_nbhd;
    cert.improving_cost = Some(sum(s, &|p| bits[s][p]) + &cert.neighbourhood_weight);
    cert.improving_policy = Some(Policy::from_bits(g, &bits));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::policy::{is_admissible, objective_cost};
    use crate::rational::int;

    fn fig2() -> ExchangeGraph {
        let ones = vec![int(1); 4];
        let edges: Vec<_> = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]
            .into_iter()
            .map(|(u, v)| (u, v, int(1)))
            .collect();
        build_graph(&ones, &ones, &edges).unwrap().graph
    }

    #[test]
    fn fig2_violates_on_side_one() {
        let g = fig2();
        let c = check_ghc(&g, &Objective::p2(), Side::One).unwrap();
        assert!(!c.holds);
        let s: BTreeSet<_> = (1..4).map(|i| VertexId::new(Side::One, i)).collect();
        assert_eq!(c.witness, s);
        assert_eq!(c.witness_weight, int(3));
        assert_eq!(c.neighbourhood_weight, int(1));
        let improving = c.improving_policy.unwrap();
        let expected: BTreeSet<_> = [VertexId::new(Side::One, 0), VertexId::new(Side::Two, 0)]
            .into_iter()
            .collect();
        assert_eq!(improving.cover(), expected);
        assert!(is_admissible(&g, &improving).unwrap());
        assert_eq!(objective_cost(&g, &improving, &Objective::p2()).unwrap(), int(2));
        assert_eq!(c.improving_cost, Some(int(2)));
        assert_eq!(c.monolog_cost, int(4));
    }

    #[test]
    fn holds_on_single_edge_and_k33() {
        let g = build_graph(&[int(1)], &[int(1)], &[(0, 0, int(1))]).unwrap().graph;
        assert!(check_ghc(&g, &Objective::p2(), Side::One).unwrap().holds);
        assert!(check_ghc(&g, &Objective::p2(), Side::Two).unwrap().holds);

        let edges: Vec<_> = (0..3).flat_map(|u| (0..3).map(move |v| (u, v, int(1)))).collect();
        let k33 = build_graph(&vec![int(1); 3], &vec![int(1); 3], &edges).unwrap().graph;
        let c = check_ghc(&k33, &Objective::p2(), Side::One).unwrap();
        assert!(c.holds);
        assert!(c.witness.is_empty());
        assert!(c.improving_policy.is_none());
    }
}
