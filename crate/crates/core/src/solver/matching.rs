//! Maximum bipartite matching (Hopcroft-Karp) and the König vertex cover it
//! induces. Under uniform vertex weights the minimum cover has exactly as many
//! vertices as the maximum matching has edges.

use std::collections::VecDeque;

use crate::graph::{ExchangeGraph, Side};

const FREE: usize = usize::MAX;

/// A maximum matching stored as partner positions on each side.
#[derive(Clone, Debug)]
pub(crate) struct Matching {
    pub mate1: Vec<usize>,
    pub mate2: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.mate1.iter().filter(|&&m| m != FREE).count()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate1
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != FREE)
            .map(|(u, &v)| (u, v))
    }
}

pub(crate) fn maximum_matching(g: &ExchangeGraph) -> Matching {
    let n1 = g.vertices(Side::One).len();
    let n2 = g.vertices(Side::Two).len();
    let adj: Vec<Vec<usize>> = (0..n1).map(|u| g.neighbours(Side::One, u).collect()).collect();
    let mut m = Matching {
        mate1: vec![FREE; n1],
        mate2: vec![FREE; n2],
    };
    let mut dist = vec![0u32; n1];

    loop {
        // Layer side-1 vertices by alternating distance from the free ones.
        let mut queue = VecDeque::new();
        for (u, d) in dist.iter_mut().enumerate() {
            if m.mate1[u] == FREE {
                *d = 0;
                queue.push_back(u);
            } else {
                *d = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = m.mate2[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n1];
        for u in 0..n1 {
            if m.mate1[u] == FREE {
                augment(u, &adj, &mut m, &mut dist, &mut next);
            }
        }
    }
    m
}

fn augment(u: usize, adj: &[Vec<usize>], m: &mut Matching, dist: &mut [u32], next: &mut [usize]) -> bool {
    while next[u] < adj[u].len() {
        let v = adj[u][next[u]];
        next[u] += 1;
        let w = m.mate2[v];
        let ok = w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, m, dist, next));
        if ok {
            m.mate1[u] = v;
            m.mate2[v] = u;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

/// König's construction: with `Z` the vertices reachable from free side-1
/// vertices along alternating paths, the cover is `(V1 \ Z) ∪ (V2 ∩ Z)`.
/// Returns positional membership `[side1, side2]`.
pub(crate) fn konig_cover(g: &ExchangeGraph, m: &Matching) -> [Vec<bool>; 2] {
    let n1 = m.mate1.len();
    let n2 = m.mate2.len();
    let mut z1 = vec![false; n1];
    let mut z2 = vec![false; n2];
    let mut stack: Vec<usize> = (0..n1).filter(|&u| m.mate1[u] == FREE).collect();
    for &u in &stack {
        z1[u] = true;
    }
    while let Some(u) = stack.pop() {
        for v in g.neighbours(Side::One, u) {
            if z2[v] || m.mate1[u] == v {
                continue;
            }
            z2[v] = true;
            let w = m.mate2[v];
            if w != FREE && !z1[w] {
                z1[w] = true;
                stack.push(w);
            }
        }
    }
    [z1.iter().map(|&z| !z).collect(), z2]
}
