//! The hidden directed subgraph `D`: a path from the source, plus (in Setting 1)
//! vertex-disjoint directed cycles covering every other vertex.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setting {
    /// Every vertex but the source has indegree one: a path plus directed cycles.
    S1,
    /// `D` is a single simple path; every other vertex is isolated.
    S2,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::S1 => f.write_str("S1"),
            Setting::S2 => f.write_str("S2"),
        }
    }
}

impl std::str::FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S1" | "s1" | "1" => Ok(Setting::S1),
            "S2" | "s2" | "2" => Ok(Setting::S2),
            _ => Err(Error::Parse(format!("unknown setting {s:?}"))),
        }
    }
}

/// A hidden-path instance. The successor map is a partial function, so every
/// vertex has outdegree at most one by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    setting: Setting,
    source: Vertex,
    succ: Vec<Option<Vertex>>,
    pred: Vec<Option<Vertex>>,
    endpoint: Vertex,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    setting: Setting,
    vertex_count: usize,
    source: Vertex,
    arcs: Vec<(Vertex, Vertex)>,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        Instance::from_arcs(r.setting, r.vertex_count, r.source, &r.arcs)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(i: Instance) -> Self {
        InstanceRepr {
            setting: i.setting,
            vertex_count: i.vertex_count(),
            source: i.source,
            arcs: i.arcs(),
        }
    }
}

impl Instance {
    /// Builds an instance from a successor map. Only structural errors are
    /// reported here; semantic checks live in [`validate_instance`].
    pub fn from_successors(setting: Setting, source: Vertex, succ: Vec<Option<Vertex>>) -> Result<Self> {
        let n = succ.len();
        if source >= n {
            return Err(Error::VertexOutOfRange {
                vertex: source,
                count: n,
            });
        }
        let mut pred = vec![None; n];
        for (u, s) in succ.iter().enumerate() {
            if let Some(v) = *s {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, count: n });
                }
                if pred[v].is_none() {
                    pred[v] = Some(u);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut endpoint = source;
        seen[source] = true;
        while let Some(next) = succ[endpoint] {
            if seen[next] {
                break;
            }
            seen[next] = true;
            endpoint = next;
        }
        Ok(Instance {
            setting,
            source,
            succ,
            pred,
            endpoint,
        })
    }

    pub fn from_arcs(setting: Setting, vertex_count: usize, source: Vertex, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut succ = vec![None; vertex_count];
        for &(u, v) in arcs {
            if u >= vertex_count {
                return Err(Error::VertexOutOfRange {
                    vertex: u,
                    count: vertex_count,
                });
            }
            if succ[u].replace(v).is_some() {
                return Err(Error::InvalidGraph(format!("vertex {u} has two outgoing arcs")));
            }
        }
        Self::from_successors(setting, source, succ)
    }

    /// Setting-2 instance following `path` (which must start at the source).
    pub fn from_path(vertex_count: usize, path: &[Vertex]) -> Result<Self> {
        let source = *path
            .first()
            .ok_or_else(|| Error::NoInstance("empty vertex sequence".into()))?;
        let arcs: Vec<_> = path.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_arcs(Setting::S2, vertex_count, source, &arcs)
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn endpoint(&self) -> Vertex {
        self.endpoint
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn successor(&self, v: Vertex) -> Option<Vertex> {
        self.succ[v]
    }

    pub fn predecessor(&self, v: Vertex) -> Option<Vertex> {
        self.pred[v]
    }

    pub fn successors(&self) -> &[Option<Vertex>] {
        &self.succ
    }

    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        self.succ
            .iter()
            .enumerate()
            .filter_map(|(u, s)| s.map(|v| (u, v)))
            .collect()
    }

    /// Vertices of the source path, from the source to the endpoint.
    pub fn path(&self) -> Vec<Vertex> {
        let mut out = vec![self.source];
        let mut seen = vec![false; self.vertex_count()];
        seen[self.source] = true;
        let mut cur = self.source;
        while let Some(next) = self.succ[cur] {
            if seen[next] {
                break;
            }
            seen[next] = true;
            out.push(next);
            cur = next;
        }
        out
    }

    pub fn path_len(&self) -> usize {
        self.path().len() - 1
    }

    /// Directed cycles among the vertices off the source path, each listed from its smallest vertex.
    pub fn cycles(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut done = vec![false; n];
        for v in self.path() {
            done[v] = true;
        }
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] || self.succ[start].is_none() {
                continue;
            }
            let mut cyc = vec![start];
            done[start] = true;
            let mut cur = start;
            let mut closed = false;
            while let Some(next) = self.succ[cur] {
                if next == start {
                    closed = true;
                    break;
                }
                if done[next] {
                    break;
                }
                done[next] = true;
                cyc.push(next);
                cur = next;
            }
            if closed {
                out.push(cyc);
            }
        }
        out
    }

    pub fn to_dot(&self, graph: &Graph) -> String {
        let mut out = String::from("digraph D {\n");
        let _ = writeln!(out, "  {} [shape=box];", self.source);
        let _ = writeln!(out, "  {} [shape=doublecircle];", self.endpoint);
        for (u, v) in graph.edges() {
            if self.succ[u] == Some(v) {
                let _ = writeln!(out, "  {u} -> {v};");
            } else if self.succ[v] == Some(u) {
                let _ = writeln!(out, "  {v} -> {u};");
            } else {
                let _ = writeln!(out, "  {u} -> {v} [dir=none, style=dotted];");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexCountMismatch { graph: usize, instance: usize },
    ArcNotInGraph(Vertex, Vertex),
    SelfLoop(Vertex),
    /// An arc and its reverse both present; `D` uses each edge of `G` at most once.
    TwoCycle(Vertex, Vertex),
    SourceHasPredecessor(Vertex),
    IndegreeAboveOne(Vertex, usize),
    MissingPredecessor(Vertex),
    PathDoesNotTerminate,
    OffPathArc(Vertex, Vertex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCountMismatch { graph, instance } => {
                write!(f, "graph has {graph} vertices, instance has {instance}")
            }
            Violation::ArcNotInGraph(u, v) => write!(f, "arc {u}->{v} is not an edge of G"),
            Violation::SelfLoop(v) => write!(f, "self-loop at {v}"),
            Violation::TwoCycle(u, v) => write!(f, "arcs {u}->{v} and {v}->{u} reuse one edge"),
            Violation::SourceHasPredecessor(u) => write!(f, "source has incoming arc from {u}"),
            Violation::IndegreeAboveOne(v, k) => write!(f, "vertex {v} has indegree {k}"),
            Violation::MissingPredecessor(v) => write!(f, "vertex {v} has indegree 0"),
            Violation::PathDoesNotTerminate => f.write_str("path from the source runs into a cycle"),
            Violation::OffPathArc(u, v) => write!(f, "arc {u}->{v} is not on the source path"),
        }
    }
}

/// Checks every invariant of the declared setting against `graph`.
pub fn validate_instance(graph: &Graph, inst: &Instance) -> std::result::Result<(), Vec<Violation>> {
    let n = graph.vertex_count();
    if inst.vertex_count() != n {
        return Err(vec![Violation::VertexCountMismatch {
            graph: n,
            instance: inst.vertex_count(),
        }]);
    }
    let mut out = Vec::new();
    let mut indeg = vec![0usize; n];
    for (u, v) in inst.arcs() {
        if u == v {
            out.push(Violation::SelfLoop(u));
        } else if !graph.has_edge(u, v) {
            out.push(Violation::ArcNotInGraph(u, v));
        }
        if u < v && inst.succ[v] == Some(u) {
            out.push(Violation::TwoCycle(u, v));
        }
        indeg[v] += 1;
    }
    let s = inst.source;
    if let Some(p) = inst.pred[s] {
        out.push(Violation::SourceHasPredecessor(p));
    }
    for (v, &k) in indeg.iter().enumerate() {
        if k > 1 {
            out.push(Violation::IndegreeAboveOne(v, k));
        }
    }
    let path = inst.path();
    let last = *path.last().expect("path contains the source");
    if inst.succ[last].is_some() {
        out.push(Violation::PathDoesNotTerminate);
    }
    match inst.setting {
        Setting::S1 => {
            for (v, &k) in indeg.iter().enumerate() {
                if v != s && k == 0 {
                    out.push(Violation::MissingPredecessor(v));
                }
            }
        }
        Setting::S2 => {
            let mut on_path = vec![false; n];
            for &v in &path {
                on_path[v] = true;
            }
            for (u, v) in inst.arcs() {
                if !on_path[u] || !on_path[v] {
                    out.push(Violation::OffPathArc(u, v));
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn grid2() -> (GridSpec, Graph) {
        let spec = GridSpec::new(vec![2, 2]).unwrap();
        let g = spec.build();
        (spec, g)
    }

    #[test]
    fn hamiltonian_path_valid_in_both_settings() {
        let (spec, g) = grid2();
        let order = [[0, 0], [0, 1], [1, 1], [1, 0]].map(|c| spec.index(&c));
        let arcs: Vec<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
        for setting in [Setting::S1, Setting::S2] {
            let inst = Instance::from_arcs(setting, 4, order[0], &arcs).unwrap();
            assert_eq!(validate_instance(&g, &inst), Ok(()));
            assert_eq!(inst.endpoint(), spec.index(&[1, 0]));
        }
    }

    #[test]
    fn setting1_needs_every_predecessor() {
        let (spec, g) = grid2();
        let a = spec.index(&[0, 0]);
        let b = spec.index(&[0, 1]);
        let inst = Instance::from_arcs(Setting::S1, 4, a, &[(a, b)]).unwrap();
        let errs = validate_instance(&g, &inst).unwrap_err();
        assert!(errs.contains(&Violation::MissingPredecessor(spec.index(&[1, 0]))));
        assert!(errs.contains(&Violation::MissingPredecessor(spec.index(&[1, 1]))));
    }

    #[test]
    fn setting2_rejects_cycles_and_foreign_arcs() {
        let g = Graph::cycle(4);
        let inst = Instance::from_arcs(Setting::S2, 4, 0, &[(0, 1), (2, 3), (3, 2)]).unwrap();
        let errs = validate_instance(&g, &inst).unwrap_err();
        assert!(errs.contains(&Violation::OffPathArc(2, 3)));
        assert!(errs.contains(&Violation::TwoCycle(2, 3)));
        let bad = Instance::from_arcs(Setting::S2, 4, 0, &[(0, 2)]).unwrap();
        assert!(validate_instance(&g, &bad)
            .unwrap_err()
            .contains(&Violation::ArcNotInGraph(0, 2)));
    }

    #[test]
    fn zero_length_path_is_legal() {
        let g = Graph::path(3);
        let inst = Instance::from_arcs(Setting::S2, 3, 0, &[]).unwrap();
        assert_eq!(validate_instance(&g, &inst), Ok(()));
        assert_eq!(inst.endpoint(), 0);
    }

    #[test]
    fn path_into_cycle_is_rejected() {
        let g = Graph::complete(4);
        let inst = Instance::from_arcs(Setting::S1, 4, 0, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        let errs = validate_instance(&g, &inst).unwrap_err();
        assert!(errs.contains(&Violation::PathDoesNotTerminate));
    }

    #[test]
    fn json_shape() {
        let inst = Instance::from_arcs(Setting::S2, 3, 0, &[(0, 1)]).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        assert_eq!(s, r#"{"setting":"S2","vertex_count":3,"source":0,"arcs":[[0,1]]}"#);
        assert_eq!(serde_json::from_str::<Instance>(&s).unwrap(), inst);
    }
}
