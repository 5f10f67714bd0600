//! Confusability graphs, independence numbers and one-shot zero-error capacity.

mod bitset;
mod independence;

pub use bitset::VertexSet;
pub use independence::{
    independence_number, independence_number_brute, independence_number_with_limit,
    maximum_independent_set, BRUTE_FORCE_LIMIT, DEFAULT_VERTEX_LIMIT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::Channel;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph has {vertices} vertices, limit is {limit}")]
    LimitExceeded { vertices: usize, limit: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// Simple undirected graph with bitset adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusabilityGraph {
    adjacency: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl ConfusabilityGraph {
    pub fn new(vertex_count: usize) -> Self {
        ConfusabilityGraph {
            adjacency: vec![VertexSet::new(vertex_count); vertex_count],
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            let v = (u + 1) % n;
            if u != v {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.vertex_count() {
            self.labels = Some(labels);
        }
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            out.extend(self.adjacency[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.adjacency.iter().all(|a| a.len() + 1 == n)
    }

    pub fn complement(&self) -> Self {
        let n = self.vertex_count();
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        g.labels = self.labels.clone();
        g
    }

    /// Strong product: `(u1,u2) ~ (v1,v2)` iff each coordinate is equal or
    /// adjacent, and the pairs differ. Vertex `(u1,u2)` is `u1 * n2 + u2`.
    pub fn strong_product(&self, other: &ConfusabilityGraph) -> ConfusabilityGraph {
        let (n1, n2) = (self.vertex_count(), other.vertex_count());
        let mut g = Self::new(n1 * n2);
        let close1 = |u: usize, v: usize| u == v || self.has_edge(u, v);
        let close2 = |u: usize, v: usize| u == v || other.has_edge(u, v);
        for u1 in 0..n1 {
            for u2 in 0..n2 {
                for v1 in 0..n1 {
                    for v2 in 0..n2 {
                        let (a, b) = (u1 * n2 + u2, v1 * n2 + v2);
                        if a < b && close1(u1, v1) && close2(u2, v2) {
                            g.add_edge(a, b).expect("in range");
                        }
                    }
                }
            }
        }
        if let (Some(l1), Some(l2)) = (&self.labels, &other.labels) {
            let labels = l1
                .iter()
                .flat_map(|a| l2.iter().map(move |b| format!("{a}{b}")))
                .collect();
            g.labels = Some(labels);
        }
        g
    }

    /// DIMACS edge format with 1-based vertices.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.vertex_count(), self.edge_count());
        if let Some(labels) = &self.labels {
            for (i, l) in labels.iter().enumerate() {
                out.push_str(&format!("c vertex {} {}\n", i + 1, l));
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertex_count(),
            labels: self.labels.clone(),
            adjacency: self.adjacency.iter().map(|a| a.iter().collect()).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let mut g = Self::new(json.vertices);
        for (u, list) in json.adjacency.iter().enumerate() {
            for &v in list {
                g.add_edge(u, v)?;
            }
        }
        if let Some(l) = &json.labels {
            g = g.with_labels(l.clone());
        }
        Ok(g)
    }
}

/// JSON adjacency-list form of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub adjacency: Vec<Vec<usize>>,
}

/// Inputs `i ~ i'` iff some output is possible under both.
pub fn confusability_graph<T: Scalar>(channel: &Channel<T>) -> ConfusabilityGraph {
    let n = channel.input_count();
    let supports: Vec<VertexSet> = (0..n)
        .map(|i| VertexSet::from_iter(channel.output_count(), channel.support(i)))
        .collect();
    let mut g = ConfusabilityGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if supports[u].intersects(&supports[v]) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    let labels = (0..n).map(|i| channel.input_space().label_string(i)).collect();
    g.with_labels(labels)
}

/// One-shot zero-error capacity `log2(alpha)` of a channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub alpha: usize,
    pub bits: f64,
    /// Set when `alpha` is a power of two.
    pub exact_bits: Option<u32>,
    pub complete: bool,
    pub vertices: usize,
}

pub fn zero_error_capacity_oneshot<T: Scalar>(
    channel: &Channel<T>,
) -> Result<CapacityReport, GraphError> {
    capacity_of_graph(&confusability_graph(channel))
}

pub fn capacity_of_graph(g: &ConfusabilityGraph) -> Result<CapacityReport, GraphError> {
    let alpha = independence_number(g)?;
    Ok(CapacityReport {
        alpha,
        bits: (alpha as f64).log2(),
        exact_bits: alpha.is_power_of_two().then(|| alpha.trailing_zeros()),
        complete: g.is_complete(),
        vertices: g.vertex_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{m_channel, n_channel};
    use crate::scalar::Rational;

    #[test]
    fn n3_graph_is_k6() {
        let g = confusability_graph(&n_channel::<Rational>(3).unwrap());
        assert_eq!(g.vertex_count(), 6);
        assert!(g.is_complete());
        assert_eq!(g.labels().unwrap()[5], "(1,2)");
    }

    #[test]
    fn m_graphs_are_complete() {
        for m in 2..=5 {
            let g = confusability_graph(&m_channel::<Rational>(m).unwrap());
            assert_eq!(g.vertex_count(), 2 * m);
            assert!(g.is_complete(), "m={m}");
        }
    }

    #[test]
    fn identity_graph_is_edgeless() {
        let g = confusability_graph(&Channel::<Rational>::identity(7));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn k2_strong_k2_is_k4() {
        let k2 = ConfusabilityGraph::complete(2);
        assert_eq!(k2.strong_product(&k2), ConfusabilityGraph::complete(4));
    }

    #[test]
    fn product_graph_matches_tensor_channel() {
        let n2 = n_channel::<Rational>(2).unwrap();
        let g = confusability_graph(&n2);
        let direct = confusability_graph(&n2.tensor(&n2));
        let product = g.strong_product(&g);
        assert_eq!(direct.edges(), product.edges());
        assert_eq!(direct.vertex_count(), 16);
        assert_eq!(direct.labels().unwrap()[5], "(0,1,0,1)");
        assert_eq!(product.labels().unwrap()[5], "(0,1)(0,1)");
    }

    #[test]
    fn capacity_values() {
        for m in 2..=3 {
            let r = zero_error_capacity_oneshot(&n_channel::<Rational>(m).unwrap()).unwrap();
            assert_eq!((r.alpha, r.exact_bits, r.complete), (1, Some(0), true));
        }
        for m in 4..=6 {
            let r = zero_error_capacity_oneshot(&n_channel::<Rational>(m).unwrap()).unwrap();
            assert_eq!((r.alpha, r.complete), (2, false), "m={m}");
        }
        let r = zero_error_capacity_oneshot(&m_channel::<Rational>(3).unwrap()).unwrap();
        assert_eq!(r.alpha, 1);
        let r = zero_error_capacity_oneshot(&Channel::<Rational>::identity(8)).unwrap();
        assert_eq!((r.alpha, r.exact_bits, r.bits), (8, Some(3), 3.0));
        let r = zero_error_capacity_oneshot(&Channel::<Rational>::identity(3)).unwrap();
        assert_eq!(r.exact_bits, None);
    }

    #[test]
    fn edge_errors() {
        let mut g = ConfusabilityGraph::new(3);
        assert_eq!(g.add_edge(0, 0), Err(GraphError::SelfLoop(0)));
        assert_eq!(g.add_edge(0, 3), Err(GraphError::VertexOutOfRange(3)));
    }

    #[test]
    fn exports() {
        let g = ConfusabilityGraph::cycle(5);
        let dimacs = g.to_dimacs();
        assert!(dimacs.starts_with("p edge 5 5\n"));
        assert!(dimacs.contains("e 1 2\n"));
        let back = ConfusabilityGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
