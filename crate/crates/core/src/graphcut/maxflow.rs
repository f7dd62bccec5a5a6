//! Dinic's max-flow on exact integer capacities, with the two extreme
//! minimum cuts read off the final residual network.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, from_scaled, scaled_i128, Rational};

use super::network::FlowNetwork;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub cut_value: Rational,
    /// `{s}` plus everything reachable from `s` in the residual network.
    pub min_source_side: Vec<bool>,
    /// Everything that cannot reach `t` in the residual network.
    pub max_source_side: Vec<bool>,
}

/// Residual graph with paired edges: edge `e ^ 1` is the reverse of `e`.
struct Residual {
    head: Vec<usize>,
    cap: Vec<i128>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i128) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Blocking flow on the level graph, iterative to keep long augmenting
    /// paths off the call stack.
    fn blocking_flow(&mut self, s: usize, t: usize, level: &[usize]) -> i128 {
        let mut next = vec![0usize; self.adj.len()];
        let mut path: Vec<usize> = Vec::new();
        let mut total = 0i128;
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&e| self.cap[e]).min().expect("nonempty path");
                for &e in &path {
                    self.cap[e] -= f;
                    self.cap[e ^ 1] += f;
                }
                total += f;
                let cut = path.iter().position(|&e| self.cap[e] == 0).expect("saturated edge");
                path.truncate(cut);
                u = path.last().map_or(s, |&e| self.head[e]);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let e = self.adj[u][next[u]];
                let v = self.head[e];
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                match path.pop() {
                    None => return total,
                    Some(e) => {
                        u = self.head[e ^ 1];
                        next[u] += 1;
                    }
                }
            }
        }
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                // e: v -> w, so e ^ 1 is the residual arc w -> v.
                let w = self.head[e];
                if self.cap[e ^ 1] > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// Maximum flow value and the minimal/maximal minimum cuts. Rational
/// capacities are scaled by their common denominator to integers first.
pub fn max_flow_min_cut(net: &FlowNetwork) -> Result<CutResult> {
    net.validate()?;
    let scale: BigInt = common_denominator(net.arcs.iter().map(|a| &a.capacity));
    let total: Rational = net.arcs.iter().map(|a| &a.capacity).sum();
    if (total * Rational::from_integer(scale.clone())).to_integer().abs().to_i128().is_none() {
        return Err(Error::Overflow);
    }
    let (s, t) = (net.source(), net.sink());
    let mut g = Residual::new(net.n_nodes);
    for a in &net.arcs {
        let cap = scaled_i128(&a.capacity, &scale).ok_or(Error::Overflow)?;
        if cap > 0 {
            g.add_edge(a.from, a.to, cap);
        }
    }
    let mut flow = 0i128;
    loop {
        let level = g.levels(s);
        if level[t] == usize::MAX {
            break;
        }
        flow += g.blocking_flow(s, t, &level);
    }
    let min_source_side = g.reachable_from(s);
    let max_source_side: Vec<bool> = g.reaching(t).into_iter().map(|r| !r).collect();
    let cut_value = from_scaled(flow, &scale);
    for (name, side) in [("minimal", &min_source_side), ("maximal", &max_source_side)] {
        let cost = net.cut_cost(side);
        if cost != cut_value {
            return Err(Error::Verification(format!(
                "{name} source side has cut {cost}, flow is {cut_value}"
            )));
        }
    }
    debug_assert!(cut_value >= Rational::zero());
    Ok(CutResult { cut_value, min_source_side, max_source_side })
}
