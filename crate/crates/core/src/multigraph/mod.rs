//! Finite directed multigraphs with a fixed edge labeling.
//!
//! Every edge is written `(i,j)r`: source `i`, target `j` and a label `r`
//! counting the parallel edges of the arc `(i,j)` in input order, starting at 1.

mod automorphism;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use automorphism::{automorphisms, MultigraphAutomorphism, DEFAULT_AUTOMORPHISM_BUDGET};
pub use parse::{parse_json, parse_text, read_graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is isolated (no incident edge)")]
    IsolatedVertex(String),
    #[error("edge {0} references an unknown endpoint")]
    UnknownEndpoint(usize),
    #[error("the edge list is empty")]
    EmptyEdgeList,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("invalid vertex id {0:?}")]
    InvalidVertexId(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("search budget exceeded: {0} candidates, budget {1}")]
    SearchBudgetExceeded(u128, u128),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A vertex together with a label: an element of `V x {1..N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Slot {
    pub vertex: u32,
    pub label: u32,
}

impl Slot {
    pub fn new(vertex: usize, label: u32) -> Self {
        Slot {
            vertex: vertex as u32,
            label,
        }
    }

    pub fn v(&self) -> usize {
        self.vertex as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: u32,
}

impl Edge {
    pub fn source_slot(&self) -> Slot {
        Slot::new(self.src, self.label)
    }

    pub fn target_slot(&self) -> Slot {
        Slot::new(self.dst, self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    mult: Vec<Vec<u32>>,
    n_max: u32,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '|' | '[' | ']' | '*' | '+' | '#' | '"'))
}

impl Multigraph {
    /// Builds a multigraph, labeling parallel edges by input order.
    pub fn build<S: AsRef<str>>(vertices: &[S], edge_pairs: &[(S, S)]) -> Result<Self, GraphError> {
        let mut names: Vec<String> = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if !valid_id(v) {
                return Err(GraphError::InvalidVertexId(v.to_string()));
            }
            if names.iter().any(|n| n == v) {
                return Err(GraphError::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        if edge_pairs.is_empty() {
            return Err(GraphError::EmptyEdgeList);
        }
        let n = names.len();
        let index = |id: &str| names.iter().position(|n| n == id);
        let mut mult = vec![vec![0u32; n]; n];
        let mut edges = Vec::with_capacity(edge_pairs.len());
        for (e, (s, t)) in edge_pairs.iter().enumerate() {
            let (src, dst) = match (index(s.as_ref()), index(t.as_ref())) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(GraphError::UnknownEndpoint(e)),
            };
            mult[src][dst] += 1;
            edges.push(Edge {
                src,
                dst,
                label: mult[src][dst],
            });
        }
        for (v, name) in names.iter().enumerate() {
            if !edges.iter().any(|e| e.src == v || e.dst == v) {
                return Err(GraphError::IsolatedVertex(name.clone()));
            }
        }
        let n_max = mult.iter().flatten().copied().max().unwrap_or(0);
        Ok(Multigraph {
            names,
            edges,
            mult,
            n_max,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize, GraphError> {
        self.names
            .iter()
            .position(|n| n == id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    /// Edges in input order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges sorted by `(source, target, label)`; the canonical edge order.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e = self.edges.clone();
        e.sort();
        e
    }

    /// `N`, the largest arc multiplicity.
    pub fn max_multiplicity(&self) -> u32 {
        self.n_max
    }

    pub fn mult(&self, i: usize, j: usize) -> u32 {
        self.mult[i][j]
    }

    pub fn multiplicity(&self, i: &str, j: &str) -> Result<u32, GraphError> {
        Ok(self.mult(self.vertex_index(i)?, self.vertex_index(j)?))
    }

    pub fn multiplicity_matrix(&self) -> &[Vec<u32>] {
        &self.mult
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        e.label >= 1 && e.label <= self.mult[e.src][e.dst]
    }

    /// All nonzero multiplicities are equal.
    pub fn is_uniform(&self) -> bool {
        let mut nonzero = self.mult.iter().flatten().filter(|&&m| m > 0);
        match nonzero.next() {
            Some(&first) => nonzero.all(|&m| m == first),
            None => true,
        }
    }

    pub fn underlying(&self) -> UnderlyingGraph {
        let n = self.vertex_count();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.mult[i][j] > 0 {
                    arcs.push(((i, j), self.mult[i][j]));
                }
            }
        }
        UnderlyingGraph {
            vertex_count: n,
            arcs,
        }
    }

    /// Every `(vertex, label)` realized as the source or target slot of an edge.
    pub fn permissible_pairs(&self) -> BTreeSet<Slot> {
        self.edges
            .iter()
            .flat_map(|e| [e.source_slot(), e.target_slot()])
            .collect()
    }

    /// The full index set `V x {1..N}` in canonical order.
    pub fn all_slots(&self) -> Vec<Slot> {
        (0..self.vertex_count())
            .flat_map(|v| (1..=self.n_max).map(move |r| Slot::new(v, r)))
            .collect()
    }

    pub fn slot_name(&self, s: Slot) -> String {
        format!("({},{})", self.names[s.v()], s.label)
    }

    pub fn edge_name(&self, e: &Edge) -> String {
        format!("({},{}){}", self.names[e.src], self.names[e.dst], e.label)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "multigraph |V|={} |E|={} N={}",
            self.vertex_count(),
            self.edges.len(),
            self.n_max
        )
    }
}

/// Single-edged graph with `(i,j)` present iff `E^i_j` is nonempty, weighted by multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnderlyingGraph {
    pub vertex_count: usize,
    pub arcs: Vec<((usize, usize), u32)>,
}

impl UnderlyingGraph {
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.arcs
            .iter()
            .find(|(a, _)| *a == (i, j))
            .map(|(_, w)| *w)
            .unwrap_or(0)
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0; self.vertex_count]; self.vertex_count];
        for ((i, j), _) in &self.arcs {
            a[*i][*j] = 1;
        }
        a
    }

    pub fn weighted_adjacency(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0; self.vertex_count]; self.vertex_count];
        for ((i, j), w) in &self.arcs {
            a[*i][*j] = *w;
        }
        a
    }

    /// Every ordered pair of distinct vertices is an arc and there are no loops.
    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count;
        (0..n).all(|i| (0..n).all(|j| (self.weight(i, j) > 0) == (i != j)))
    }
}
