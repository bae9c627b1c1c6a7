//! The digraphs `G_n` and the two structural properties Perron–Frobenius
//! needs: strong connectivity and period.

use std::collections::VecDeque;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

use super::sparse::SparseIntMatrix;
use super::check_order;
use crate::error::{Error, Result};

/// Directed edges on vertices `1..=vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphEdgeList {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DigraphEdgeList {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Domain("digraph needs at least one vertex".into()));
        }
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u == 0 || v == 0 || u > vertex_count || v > vertex_count)
        {
            return Err(Error::Domain(format!("edge ({u}, {v}) outside 1..={vertex_count}")));
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    /// Edge `i -> j` for every nonzero `(i, j)`.
    pub fn from_pattern(m: &SparseIntMatrix) -> Self {
        Self {
            vertex_count: m.dim(),
            edges: m.entries().iter().map(|e| (e.row, e.col)).collect(),
        }
    }

    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    fn to_petgraph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.vertex_count, self.edges.len());
        for _ in 0..self.vertex_count {
            g.add_node(());
        }
        g.extend_with_edges(self.edges.iter().map(|&(u, v)| ((u - 1) as u32, (v - 1) as u32)));
        g
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
        }
        adj
    }
}

/// `G_n` by the two-copies-plus-middle-vertex recursion, numbered so the
/// second copy is shifted by `2^{n-1}`.
pub fn digraph(n: usize) -> Result<DigraphEdgeList> {
    check_order(n)?;
    let mut edges = vec![(1usize, 1usize)];
    let mut vertices = 1usize;
    for _ in 1..n {
        let mid = vertices + 1;
        let shifted: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u + mid, v + mid)).collect();
        edges.extend(shifted);
        vertices = 2 * vertices + 1;
        edges.push((1, vertices));
        edges.push((mid + 1, mid));
        edges.push((mid, mid - 1));
    }
    DigraphEdgeList::new(vertices, edges)
}

/// Components as 1-based vertex lists.
pub fn strongly_connected_components(g: &DigraphEdgeList) -> Vec<Vec<usize>> {
    kosaraju_scc(&g.to_petgraph())
        .into_iter()
        .map(|comp| {
            let mut c: Vec<usize> = comp.into_iter().map(|ix| ix.index() + 1).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

pub fn is_strongly_connected(g: &DigraphEdgeList) -> bool {
    strongly_connected_components(g).len() == 1
}

/// gcd of all cycle lengths.
///
/// With BFS levels `ℓ` from any root, the period of a strongly connected
/// digraph is `gcd(ℓ(u) + 1 − ℓ(v))` over all edges `u -> v`.
pub fn period(g: &DigraphEdgeList) -> Result<usize> {
    if !is_strongly_connected(g) {
        return Err(Error::Domain("period is only defined for strongly connected digraphs".into()));
    }
    let adj = g.successors();
    let mut level = vec![usize::MAX; g.vertex_count];
    let mut queue = VecDeque::from([0usize]);
    level[0] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let h = g.edges.iter().fold(0usize, |acc, &(u, v)| {
        let diff = (level[u - 1] + 1).abs_diff(level[v - 1]);
        gcd(acc, diff)
    });
    Ok(h)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
