//! Independent max-flow oracle for series/parallel networks.

use std::collections::VecDeque;

use prodavail_core::flow::CapacitySnapshot;
use prodavail_core::model::{Network, Stage};

/// Dense Edmonds-Karp.
struct MaxFlow {
    cap: Vec<Vec<f64>>,
}

impl MaxFlow {
    fn new() -> Self {
        Self { cap: Vec::new() }
    }

    fn node(&mut self) -> usize {
        for row in &mut self.cap {
            row.push(0.0);
        }
        self.cap.push(vec![0.0; self.cap.len() + 1]);
        self.cap.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, c: f64) {
        self.cap[a][b] += c;
    }

    fn solve(mut self, s: usize, t: usize) -> f64 {
        let n = self.cap.len();
        let mut total = 0.0;
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                #[allow(clippy::needless_range_loop)]
                for v in 0..n {
                    if prev[v] == usize::MAX && self.cap[u][v] > 1e-15 {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return total;
            }
            let mut push = f64::INFINITY;
            let mut v = t;
            while v != s {
                push = push.min(self.cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t;
            while v != s {
                self.cap[prev[v]][v] -= push;
                self.cap[v][prev[v]] += push;
                v = prev[v];
            }
            total += push;
        }
    }
}

/// Lays `stages` in series between `from` and `to`. Every edge is scaled by
/// the product of enclosing branch capacities; a parallel block feeds a
/// collector node whose outgoing edge carries the block's scale, which caps
/// it at 100% of its own reference.
fn lay_series(g: &mut MaxFlow, stages: &[Stage], from: usize, to: usize, scale: f64, caps: &CapacitySnapshot) {
    let mut a = from;
    for (i, stage) in stages.iter().enumerate() {
        let b = if i + 1 == stages.len() { to } else { g.node() };
        match stage {
            Stage::Single(id) => g.edge(a, b, scale * caps.get(id).unwrap()),
            Stage::Parallel(p) => {
                let collect = g.node();
                for branch in &p.branches {
                    lay_series(g, &branch.stages, a, collect, scale * branch.capacity, caps);
                }
                g.edge(collect, b, scale);
            }
        }
        a = b;
    }
}

pub fn oracle(network: &Network, caps: &CapacitySnapshot) -> f64 {
    let mut g = MaxFlow::new();
    let s = g.node();
    let t = g.node();
    lay_series(&mut g, &network.stages, s, t, 1.0, caps);
    g.solve(s, t)
}

