//! Immutable simple undirected graphs with dense vertex ids.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Simple undirected graph. Neighbor lists are sorted and symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertex_count: usize,
    adjacency: Vec<Vec<Vertex>>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        if r.adjacency.len() != r.vertex_count {
            return Err(Error::InvalidGraph(format!(
                "adjacency has {} rows for {} vertices",
                r.adjacency.len(),
                r.vertex_count
            )));
        }
        Graph::from_adjacency(r.adjacency)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertex_count: g.vertex_count(),
            adjacency: g.adj,
        }
    }
}

/// Connected components of the graph with some vertices removed.
#[derive(Clone, Debug)]
pub struct Components {
    /// Component index per vertex; `None` for removed vertices.
    pub label: Vec<Option<usize>>,
    /// Members of each component, sorted. Components are ordered by their smallest vertex.
    pub members: Vec<Vec<Vertex>>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl Graph {
    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_adjacency(adj)
    }

    fn from_adjacency(mut adj: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = adj.len();
        for (v, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("parallel edge at {v}")));
            }
            if let Some(&w) = row.iter().find(|&&w| w >= n) {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    count: n,
                });
            }
            if row.contains(&v) {
                return Err(Error::InvalidGraph(format!("self-loop at {v}")));
            }
        }
        let mut degree_sum = 0;
        for (v, row) in adj.iter().enumerate() {
            for &w in row {
                if adj[w].binary_search(&v).is_err() {
                    return Err(Error::InvalidGraph(format!("edge {v}-{w} is not symmetric")));
                }
            }
            degree_sum += row.len();
        }
        Ok(Graph {
            adj,
            edge_count: degree_sum / 2,
        })
    }

    /// Path v0 - v1 - ... - v(n-1).
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("complete graph edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Heap-ordered binary tree: children of `i` are `2i+1` and `2i+2`.
    pub fn binary_tree(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
        Self::from_edges(n, &edges).expect("tree edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.adj.len()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Components of `G - removed`.
    pub fn components(&self, removed: &[bool]) -> Components {
        let n = self.vertex_count();
        let mut label = vec![None; n];
        let mut members = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if removed[start] || label[start].is_some() {
                continue;
            }
            let id = members.len();
            let mut comp = vec![start];
            label[start] = Some(id);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !removed[w] && label[w].is_none() {
                        label[w] = Some(id);
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            members.push(comp);
        }
        Components { label, members }
    }

    /// Components of the subgraph induced by `within` (a membership mask).
    pub fn components_within(&self, within: &[bool]) -> Components {
        let removed: Vec<bool> = within.iter().map(|&b| !b).collect();
        self.components(&removed)
    }

    /// Vertices reachable from `start` avoiding `removed`, sorted.
    pub fn reachable(&self, start: Vertex, removed: &[bool]) -> Vec<Vertex> {
        if removed[start] {
            return Vec::new();
        }
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut out = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !removed[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Shortest path from `from` to `to` through vertices allowed by `allowed`.
    pub fn shortest_path(&self, from: Vertex, to: Vertex, allowed: &[bool]) -> Option<Vec<Vertex>> {
        if !allowed[from] || !allowed[to] {
            return None;
        }
        let mut parent = vec![usize::MAX; self.vertex_count()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in &self.adj[u] {
                if allowed[w] && parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[to] == usize::MAX {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n == 0 || self.reachable(0, &vec![false; n]).len() == n
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.edge_count + 1 == n && self.is_connected()
    }

    /// Subgraph induced by `vertices` (sorted), relabelled densely in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut row: Vec<_> = self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Graph::from_adjacency(adj).expect("induced subgraph of a simple graph is simple")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_parallel_edges() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn components_skip_removed_vertices() {
        let g = Graph::path(7);
        let mut removed = vec![false; 7];
        removed[3] = true;
        let c = g.components(&removed);
        assert_eq!(c.members, vec![vec![0, 1, 2], vec![4, 5, 6]]);
        assert_eq!(c.label[3], None);
        assert_eq!(c.largest(), 3);
    }

    #[test]
    fn tree_detection() {
        assert!(Graph::path(5).is_tree());
        assert!(Graph::star(4).is_tree());
        assert!(Graph::binary_tree(15).is_tree());
        assert!(!Graph::cycle(4).is_tree());
        assert!(!Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap().is_tree());
    }

    #[test]
    fn json_round_trip_validates() {
        let g = Graph::star(3);
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        let bad = r#"{"vertex_count":2,"adjacency":[[1],[]]}"#;
        assert!(serde_json::from_str::<Graph>(bad).is_err());
    }

    #[test]
    fn induced_relabels() {
        let g = Graph::cycle(5);
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2) && !h.has_edge(0, 2));
    }
}
