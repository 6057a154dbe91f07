//! Dinic max-flow over exact integer capacities.

use std::collections::VecDeque;

pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i128>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds arc `from -> to`; its residual twin is the arc index xor 1.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i128) {
        debug_assert!(cap >= 0);
        self.adj[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let y = self.to[a];
                if self.cap[a] > 0 && level[y] == u32::MAX {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    fn augment(&mut self, x: usize, t: usize, limit: i128, level: &[u32], next: &mut [usize]) -> i128 {
        if x == t {
            return limit;
        }
        while next[x] < self.adj[x].len() {
            let a = self.adj[x][next[x]];
            let y = self.to[a];
            if self.cap[a] > 0 && level[y] == level[x] + 1 {
                let pushed = self.augment(y, t, limit.min(self.cap[a]), level, next);
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[x] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0i128;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, i128::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network. After
    /// [`max_flow`](Self::max_flow) this is the smallest source side over all
    /// minimum cuts.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.adj[x] {
                let y = self.to[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}
