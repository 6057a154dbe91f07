//! Exhaustive search over all labellings. Exponential; meant for checking the
//! polynomial solvers on small graphs.

use crate::error::{Error, Result};
use crate::graph::{ExchangeGraph, Side};
use crate::policy::{Objective, Policy};

use super::{Certificate, Method, ScaledWeights, SolveResult};

/// Largest vertex count accepted by [`solve_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// Enumerates all `2^|V|` labellings. Ties are broken towards the canonical
/// cover: most side-1 vertices, then fewest side-2 vertices.
pub fn solve_exhaustive(g: &ExchangeGraph, objective: &Objective) -> Result<SolveResult> {
    let n1 = g.vertices(Side::One).len();
    let n = g.vertex_count();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLargeForExhaustive(n));
    }
    let scaled = ScaledWeights::new(&g.effective_weights(objective))?;
    let weight: Vec<i128> = scaled.w.iter().flatten().copied().collect();
    let edge_masks: Vec<u32> = g.edges().iter().map(|e| (1u32 << e.u) | (1u32 << (n1 + e.v))).collect();
    let side1_mask = (1u32 << n1) - 1;

    let mut best: Option<(i128, i64, u32, u32)> = None;
    for mask in 0..(1u32 << n) {
        if edge_masks.iter().any(|&m| mask & m == 0) {
            continue;
        }
        let cost: i128 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| weight[i]).sum();
        let key = (
            cost,
            -((mask & side1_mask).count_ones() as i64),
            (mask & !side1_mask).count_ones(),
        );
        if best.is_none_or(|(c, a, b, _)| key < (c, a, b)) {
            best = Some((key.0, key.1, key.2, mask));
        }
    }
    let (cost, _, _, mask) = best.expect("the all-ones labelling is admissible");
    let bits = [
        (0..n1).map(|i| mask >> i & 1 == 1).collect(),
        (n1..n).map(|i| mask >> i & 1 == 1).collect(),
    ];
    Ok(SolveResult {
        policy: Policy::from_bits(g, &bits),
        optimal_cost: scaled.unscale(cost),
        method: Method::BruteForce,
        certificate: Certificate::Exhaustive { labelings: 1u64 << n },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::rational::int;

    #[test]
    fn fig2_by_enumeration() {
        let ones = vec![int(1); 4];
        let edges: Vec<_> = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]
            .into_iter()
            .map(|(u, v)| (u, v, int(1)))
            .collect();
        let g = build_graph(&ones, &ones, &edges).unwrap().graph;
        let r = solve_exhaustive(&g, &Objective::p2()).unwrap();
        assert_eq!(r.optimal_cost, int(2));
        assert_eq!(r.certificate, Certificate::Exhaustive { labelings: 256 });
    }

    #[test]
    fn refuses_large_graphs() {
        let n = 13;
        let edges: Vec<_> = (0..n).map(|i| (i, i, int(1))).collect();
        let g = build_graph(&vec![int(1); n], &vec![int(1); n], &edges).unwrap().graph;
        assert!(matches!(
            solve_exhaustive(&g, &Objective::p2()),
            Err(Error::TooLargeForExhaustive(26))
        ));
    }
}
