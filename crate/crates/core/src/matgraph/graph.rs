use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Matrix, MatrixError};

/// Row sums (or column sums) below `1 - DEFICIENCY_TOL` count as deficient.
pub const DEFICIENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// No edge leaves the block.
    InSubgraph,
    /// At least one edge leaves the block.
    OutSubgraph,
}

/// Strongly connected components of `graph W`, listed in topological order
/// (a block appears before every block it reaches).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condensation {
    /// Vertex sets, each sorted ascending.
    pub blocks: Vec<Vec<usize>>,
    pub kinds: Vec<BlockKind>,
    /// Block indices in topological order; equal to `0..blocks.len()`.
    pub topo_order: Vec<usize>,
    /// `block_of[v]` is the block containing vertex `v`.
    pub block_of: Vec<usize>,
}

impl Condensation {
    /// Vertices reachable from `start` (including `start`) in `graph W`.
    pub fn reachable_from(w: &Matrix, start: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; w.n()];
        let mut queue: VecDeque<usize> = start.iter().copied().collect();
        for &s in start {
            seen[s] = true;
        }
        while let Some(v) = queue.pop_front() {
            for u in w.successors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// Tarjan SCC partition of `graph W` (edge `i → j` iff `w_ij != 0`).
pub fn scc_condensation(w: &Matrix) -> Condensation {
    let n = w.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| w.successors(i).collect()).collect();
    let mut state = Tarjan {
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.index[v].is_none() {
            state.connect(v, &adj);
        }
    }
    // Tarjan emits sinks first
    let mut blocks = state.comps;
    blocks.reverse();
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    let mut block_of = vec![0; n];
    for (k, b) in blocks.iter().enumerate() {
        for &v in b {
            block_of[v] = k;
        }
    }
    let kinds = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let leaves = b
                .iter()
                .any(|&v| adj[v].iter().any(|&u| block_of[u] != k));
            if leaves {
                BlockKind::OutSubgraph
            } else {
                BlockKind::InSubgraph
            }
        })
        .collect();
    Condensation {
        topo_order: (0..blocks.len()).collect(),
        blocks,
        kinds,
        block_of,
    }
}

struct Tarjan {
    counter: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan {
    fn connect(&mut self, v: usize, adj: &[Vec<usize>]) {
        self.index[v] = Some(self.counter);
        self.low[v] = self.counter;
        self.counter += 1;
        self.stack.push(v);
        self.on_stack[v] = true;

        for &u in &adj[v] {
            match self.index[u] {
                None => {
                    self.connect(u, adj);
                    self.low[v] = self.low[v].min(self.low[u]);
                }
                Some(iu) if self.on_stack[u] => {
                    self.low[v] = self.low[v].min(iu);
                }
                Some(_) => {}
            }
        }

        if Some(self.low[v]) == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let u = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[u] = false;
                comp.push(u);
                if u == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// True iff every SCC is a singleton and no vertex has a self-loop.
pub fn is_acyclic(w: &Matrix) -> bool {
    (0..w.n()).all(|i| w[(i, i)] == 0.0) && scc_condensation(w).blocks.len() == w.n()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Row,
    Column,
}

/// Evidence that `W` (or `Wᵀ`) is weakly chained substochastic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainWitness {
    pub orientation: Orientation,
    /// Vertices whose sum is strictly below one.
    pub deficient: Vec<usize>,
    /// For each vertex, a path ending at a deficient vertex; `None` for the
    /// deficient vertices themselves.
    pub chains: Vec<Option<Vec<usize>>>,
}

impl ChainWitness {
    /// Re-checks every path by edge lookup in the stated orientation.
    pub fn verify(&self, w: &Matrix) -> bool {
        let edge = |a: usize, b: usize| match self.orientation {
            Orientation::Row => w[(a, b)] > 0.0,
            Orientation::Column => w[(b, a)] > 0.0,
        };
        self.chains.iter().enumerate().all(|(v, chain)| match chain {
            None => self.deficient.contains(&v),
            Some(path) => {
                path.first() == Some(&v)
                    && path.last().is_some_and(|t| self.deficient.contains(t))
                    && path.windows(2).all(|p| edge(p[0], p[1]))
            }
        })
    }
}

/// Checks weak-chain substochasticity of `W` (Row) or `Wᵀ` (Column).
pub fn weakly_chained_check(
    w: &Matrix,
    orientation: Orientation,
) -> Result<ChainWitness, MatrixError> {
    w.check_nonnegative()?;
    let m = match orientation {
        Orientation::Row => w.clone(),
        Orientation::Column => w.transpose(),
    };
    let n = m.n();
    let sums = m.row_sums();
    if let Some(v) = sums.iter().position(|&s| s > 1.0 + DEFICIENCY_TOL) {
        return Err(MatrixError::NotSubstochastic(v));
    }
    let deficient: Vec<usize> = (0..n).filter(|&i| sums[i] < 1.0 - DEFICIENCY_TOL).collect();

    // BFS backwards from the deficient set; next[v] is v's successor on a
    // shortest path toward it
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut queue = VecDeque::new();
    for &d in &deficient {
        reached[d] = true;
        queue.push_back(d);
    }
    while let Some(t) = queue.pop_front() {
        for i in 0..n {
            if !reached[i] && m[(i, t)] > 0.0 {
                reached[i] = true;
                next[i] = Some(t);
                queue.push_back(i);
            }
        }
    }
    let stranded: Vec<usize> = (0..n).filter(|&i| !reached[i]).collect();
    if !stranded.is_empty() {
        return Err(MatrixError::NoChain(stranded));
    }
    let chains = (0..n)
        .map(|v| {
            next[v].map(|_| {
                let mut path = vec![v];
                let mut cur = v;
                while let Some(t) = next[cur] {
                    path.push(t);
                    cur = t;
                }
                path
            })
        })
        .collect();
    Ok(ChainWitness {
        orientation,
        deficient,
        chains,
    })
}
