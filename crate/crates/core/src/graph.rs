//! Labeled finite simple graphs and the operations used to assemble the
//! product and appendage families.
//!
//! Vertices carry structured labels recording how they were constructed
//! (`(u1,3)` for a product vertex, `v1` for an appendage vertex, …).
//! All operations address vertices by index; labels exist so traces and
//! serialized graphs stay auditable after several layers of products,
//! unions, and deletions.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// One step of a label path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Plain 1-based index, displayed as `3`.
    Index(u32),
    /// Path/cycle vertex `u_i`, displayed as `u3`.
    U(u32),
    /// First appendage vertex `v1`.
    V1,
    /// Second appendage vertex `v2`.
    V2,
    /// Extra vertex `w1`.
    W1,
    /// Extra vertex `w2`.
    W2,
    /// Middle extra vertex `w`.
    WMid,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Index(i) => write!(f, "{i}"),
            Atom::U(i) => write!(f, "u{i}"),
            Atom::V1 => write!(f, "v1"),
            Atom::V2 => write!(f, "v2"),
            Atom::W1 => write!(f, "w1"),
            Atom::W2 => write!(f, "w2"),
            Atom::WMid => write!(f, "w"),
        }
    }
}

/// Construction provenance of a vertex.
///
/// Product vertices are pairs of factor labels; disjoint unions tag each
/// side so labels stay unique. Graphs loaded from JSON carry their labels
/// as opaque strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Atom(Atom),
    Pair(Box<VertexLabel>, Box<VertexLabel>),
    /// `side` 0 = left operand of a disjoint union, 1 = right.
    Side(u8, Box<VertexLabel>),
    Raw(String),
}

impl VertexLabel {
    pub fn atom(a: Atom) -> Self {
        VertexLabel::Atom(a)
    }

    pub fn pair(a: VertexLabel, b: VertexLabel) -> Self {
        VertexLabel::Pair(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Atom(a) => write!(f, "{a}"),
            VertexLabel::Pair(a, b) => write!(f, "({a},{b})"),
            VertexLabel::Side(0, l) => write!(f, "L:{l}"),
            VertexLabel::Side(_, l) => write!(f, "R:{l}"),
            VertexLabel::Raw(s) => write!(f, "{s}"),
        }
    }
}

/// A finite simple graph with unique vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Build a graph from labels and an edge list. Rejects self-loops,
    /// out-of-range endpoints, and duplicate labels; duplicate edges are
    /// collapsed.
    pub fn new(labels: Vec<VertexLabel>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.to_string()) {
                return Err(Error::Parameter(format!("duplicate vertex label `{l}`")));
            }
        }
        let mut adj = vec![VertexSet::with_capacity(n); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Lookup(format!(
                    "edge ({a},{b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Parameter(format!("self-loop at vertex {a}")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(Graph { labels, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.count()).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    pub(crate) fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// `N[v] = N(v) ∪ {v}`.
    pub(crate) fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn label(&self, v: usize) -> &VertexLabel {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Index of the vertex whose label displays as `text`.
    pub fn index_of_label(&self, text: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.to_string() == text)
    }

    /// Smallest isolated vertex, if any.
    pub fn isolated_vertex(&self) -> Option<usize> {
        (0..self.vertex_count()).find(|&v| self.adj[v].is_empty())
    }

    /// True when some pair of neighbors of `v` is adjacent.
    pub fn in_triangle(&self, v: usize) -> bool {
        let nb: Vec<usize> = self.adj[v].iter().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.adjacent(a, b) {
                    return true;
                }
            }
        }
        false
    }

    /// Categorical (tensor) product: `(a,b) ~ (c,d)` iff `a ~ c` and
    /// `b ~ d`. Vertices are ordered with the left factor major, and
    /// labels are the pairs of factor labels.
    pub fn tensor_product(&self, other: &Graph) -> Graph {
        let (ng, nh) = (self.vertex_count(), other.vertex_count());
        let n = ng * nh;
        let mut labels = Vec::with_capacity(n);
        for a in 0..ng {
            for b in 0..nh {
                labels.push(VertexLabel::pair(
                    self.labels[a].clone(),
                    other.labels[b].clone(),
                ));
            }
        }
        let mut adj = vec![VertexSet::with_capacity(n); n];
        for a in 0..ng {
            for c in self.adj[a].iter() {
                for b in 0..nh {
                    for d in other.adj[b].iter() {
                        adj[a * nh + b].insert(c * nh + d);
                    }
                }
            }
        }
        Graph { labels, adj }
    }

    /// Disjoint union; labels of the two sides are tagged `L:` / `R:` so
    /// they remain unique.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let ng = self.vertex_count();
        let n = ng + other.vertex_count();
        let mut labels: Vec<VertexLabel> = self
            .labels
            .iter()
            .map(|l| VertexLabel::Side(0, Box::new(l.clone())))
            .collect();
        labels.extend(
            other
                .labels
                .iter()
                .map(|l| VertexLabel::Side(1, Box::new(l.clone()))),
        );
        let mut adj = vec![VertexSet::with_capacity(n); n];
        for (u, v) in self.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        for (u, v) in other.edges() {
            adj[u + ng].insert(v + ng);
            adj[v + ng].insert(u + ng);
        }
        Graph { labels, adj }
    }

    /// Subgraph induced on `keep` (indices into `self`, any order,
    /// duplicates rejected). Vertices are renumbered in ascending order
    /// of their original index; labels are preserved.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Graph> {
        let n = self.vertex_count();
        let mut sorted: Vec<usize> = Vec::with_capacity(keep.len());
        let mut seen = VertexSet::with_capacity(n);
        for &v in keep {
            if v >= n {
                return Err(Error::Lookup(format!("vertex {v} outside 0..{n}")));
            }
            if seen.contains(v) {
                return Err(Error::Parameter(format!("vertex {v} listed twice")));
            }
            seen.insert(v);
            sorted.push(v);
        }
        sorted.sort_unstable();
        let labels = sorted.iter().map(|&v| self.labels[v].clone()).collect();
        let mut adj = vec![VertexSet::with_capacity(sorted.len()); sorted.len()];
        for (i, &v) in sorted.iter().enumerate() {
            for (j, &w) in sorted.iter().enumerate().skip(i + 1) {
                if self.adjacent(v, w) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Ok(Graph { labels, adj })
    }

    /// Graph with vertex `v` deleted.
    pub fn without_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep).expect("indices valid")
    }

    /// Graph with every vertex in `drop` deleted.
    pub(crate) fn without_set(&self, drop: &VertexSet) -> Graph {
        let keep: Vec<usize> = (0..self.vertex_count())
            .filter(|&u| !drop.contains(u))
            .collect();
        self.induced_subgraph(&keep).expect("indices valid")
    }

    /// Complement graph on the same labels.
    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut adj = vec![VertexSet::with_capacity(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if !self.adjacent(u, v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Graph {
            labels: self.labels.clone(),
            adj,
        }
    }

    /// Non-neighbors of `v` (excluding `v` itself), as a set.
    pub(crate) fn non_neighbors(&self, v: usize) -> VertexSet {
        let mut s = VertexSet::full(self.vertex_count());
        s.subtract(&self.adj[v]);
        s.remove(v);
        s
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            labels: self.labels.iter().map(|l| l.to_string()).collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| (a as u32, b as u32))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    /// Parse a graph from its JSON form. Labels are kept as opaque
    /// strings.
    pub fn from_json_str(s: &str) -> Result<Graph> {
        let file: GraphFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("graph json: {e}")))?;
        let labels = file
            .labels
            .into_iter()
            .map(VertexLabel::Raw)
            .collect::<Vec<_>>();
        let edges: Vec<(usize, usize)> = file
            .edges
            .into_iter()
            .map(|(a, b)| (a as usize, b as usize))
            .collect();
        Graph::new(labels, &edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    labels: Vec<String>,
    edges: Vec<(u32, u32)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_atomic, Family};

    fn k(n: u32) -> Graph {
        build_atomic(Family::Complete, &[n]).unwrap()
    }

    #[test]
    fn tensor_product_edge_count_is_twice_the_product() {
        let g = k(2).tensor_product(&k(3));
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 2 * 3);
    }

    #[test]
    fn tensor_product_labels_are_factor_pairs() {
        let g = k(2).tensor_product(&k(3));
        assert_eq!(g.label(0).to_string(), "(1,1)");
        assert_eq!(g.label(5).to_string(), "(2,3)");
    }

    #[test]
    fn complement_of_two_disjoint_edges_is_a_four_cycle() {
        let m2 = build_atomic(Family::Matching, &[2]).unwrap();
        let c = m2.complement();
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.edge_count(), 4);
        // Every vertex has degree 2 and the graph is connected: a 4-cycle.
        assert!((0..4).all(|v| c.degree(v) == 2));
        let c4 = build_atomic(Family::Cycle, &[4]).unwrap();
        assert!(crate::iso::isomorphic(&c, &c4));
    }

    #[test]
    fn induced_subgraph_keeps_labels_and_edges() {
        let c5 = build_atomic(Family::Cycle, &[5]).unwrap();
        // Delete the closed neighborhood of u1: {u5, u1, u2} leaves u3-u4.
        let g = c5.induced_subgraph(&[2, 3]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.label(0).to_string(), "u3");
        assert_eq!(g.label(1).to_string(), "u4");
    }

    #[test]
    fn json_round_trip_preserves_structure() {
        let g = k(2).tensor_product(&k(3));
        let s = g.to_json_string();
        let h = Graph::from_json_str(&s).unwrap();
        assert_eq!(g.vertex_count(), h.vertex_count());
        assert_eq!(
            g.edges(),
            h.edges(),
            "edge lists must survive the round trip"
        );
        assert_eq!(h.label(0).to_string(), "(1,1)");
    }

    #[test]
    fn rejects_self_loops_and_duplicate_labels() {
        let l = |s: &str| VertexLabel::Raw(s.to_string());
        assert!(Graph::new(vec![l("a"), l("a")], &[]).is_err());
        assert!(Graph::new(vec![l("a"), l("b")], &[(0, 0)]).is_err());
        assert!(Graph::new(vec![l("a"), l("b")], &[(0, 2)]).is_err());
    }
}
