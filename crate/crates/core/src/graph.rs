//! Directed coupling graphs.
//!
//! Entry `chi[i][j] = 1` means oscillator `j` transmits information to
//! oscillator `i`, so row `i` lists the neighbors that oscillator `i` listens
//! to. Vertices are 0-based throughout the API.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

/// A directed graph without self-loops together with its receiver-indexed
/// neighbor sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphTopology {
    n: usize,
    adjacency: Vec<u8>,
    neighbors: Vec<Vec<usize>>,
}

impl DigraphTopology {
    /// Builds a topology from a 0/1 adjacency matrix.
    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        let mut adjacency = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquareMatrix {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if value > 1 {
                    return Err(Error::InvalidAdjacencyEntry { row: i, col: j, value });
                }
                if i == j && value == 1 {
                    return Err(Error::SelfLoopPresent(i));
                }
                adjacency.push(value);
            }
        }
        Ok(Self::from_flat(n, adjacency))
    }

    fn from_flat(n: usize, adjacency: Vec<u8>) -> Self {
        let neighbors = (0..n).map(|i| (0..n).filter(|&j| adjacency[i * n + j] == 1).collect()).collect();
        Self { n, adjacency, neighbors }
    }

    /// Every oscillator listens to every other one.
    pub fn all_to_all(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        let adjacency = (0..n * n).map(|k| u8::from(k / n != k % n)).collect();
        Ok(Self::from_flat(n, adjacency))
    }

    /// Unidirectional ring: oscillator `i` listens to `i + 1 (mod n)`.
    pub fn ring(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        let mut adjacency = vec![0u8; n * n];
        if n > 1 {
            for i in 0..n {
                adjacency[i * n + (i + 1) % n] = 1;
            }
        }
        Ok(Self::from_flat(n, adjacency))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `chi_ij`: whether `j` transmits to `i`.
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j] == 1
    }

    /// The set of oscillators that `i` listens to, in increasing order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn arc_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }

    pub fn adjacency_rows(&self) -> Vec<Vec<u8>> {
        self.adjacency.chunks(self.n).map(<[u8]>::to_vec).collect()
    }

    pub fn is_all_to_all(&self) -> bool {
        self.neighbors.iter().all(|nb| nb.len() + 1 == self.n)
    }

    /// The graph with every arc reversed (the transposed adjacency).
    pub fn reversed(&self) -> Self {
        let n = self.n;
        let adjacency = (0..n * n).map(|k| self.adjacency[(k % n) * n + k / n]).collect();
        Self::from_flat(n, adjacency)
    }

    /// Adds the arc "`j` transmits to `i`". Self-loops are rejected.
    pub fn with_arc(&self, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::SelfLoopPresent(i));
        }
        let mut adjacency = self.adjacency.clone();
        adjacency[i * self.n + j] = 1;
        Ok(Self::from_flat(self.n, adjacency))
    }
}

/// Reachability summary of a topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub strongly_connected: bool,
    /// `distances[i][j]`: length of the shortest path carrying information
    /// from `i` to `j`, `None` when `j` cannot be reached.
    pub distances: Vec<Vec<Option<usize>>>,
    /// Maximal distance; present only for strongly connected graphs.
    pub depth: Option<usize>,
}

/// All-pairs breadth-first search over the information-flow digraph, whose
/// arcs are `j -> i` for every `chi_ij = 1`.
pub fn analyze_connectivity(topology: &DigraphTopology) -> ConnectivityReport {
    let n = topology.len();
    // listeners[j] = vertices that receive from j
    let mut listeners = vec![Vec::new(); n];
    for i in 0..n {
        for &j in topology.neighbors(i) {
            listeners[j].push(i);
        }
    }

    let distances: Vec<Vec<Option<usize>>> = (0..n)
        .map(|source| {
            let mut dist = vec![None; n];
            dist[source] = Some(0);
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                let next = dist[v].map(|d| d + 1);
                for &w in &listeners[v] {
                    if dist[w].is_none() {
                        dist[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect();

    let strongly_connected = distances.iter().flatten().all(Option::is_some);
    let depth = strongly_connected.then(|| distances.iter().flatten().filter_map(|d| *d).max().unwrap_or(0));
    ConnectivityReport {
        strongly_connected,
        distances,
        depth,
    }
}
