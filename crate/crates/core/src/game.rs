//! Exact worst-case query values on tiny graphs by memoized minimax.
//!
//! A knowledge state is the set of instances still consistent with the answers
//! seen so far, stored as a bitset over the enumerated instance list. The state
//! is terminal once every consistent instance has the same endpoint.

use std::collections::HashMap;
use std::io::Write;

use fixedbitset::FixedBitSet;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::enumerate_instances_capped;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Setting};
use crate::oracle::{answer, Answer, Oracle, Query, QueryKind};
use crate::separators::min_alpha_separator_exact;

pub const GAME_CAP_S2: usize = 8;
pub const GAME_CAP_S1: usize = 7;

pub fn default_cap(setting: Setting) -> usize {
    match setting {
        Setting::S1 => GAME_CAP_S1,
        Setting::S2 => GAME_CAP_S2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameValue {
    pub value: u32,
    pub first_query: Option<Vertex>,
}

pub struct GameSolver {
    setting: Setting,
    kind: QueryKind,
    source: Vertex,
    vertex_count: usize,
    instances: Vec<Instance>,
    /// `answers[q][i]`: the answer instance `i` gives at vertex `q`.
    answers: Vec<Vec<Answer>>,
    memo: HashMap<FixedBitSet, GameValue>,
}

impl GameSolver {
    pub fn new(graph: &Graph, source: Vertex, setting: Setting, kind: QueryKind) -> Result<Self> {
        Self::with_cap(graph, source, setting, kind, default_cap(setting))
    }

    pub fn with_cap(graph: &Graph, source: Vertex, setting: Setting, kind: QueryKind, cap: usize) -> Result<Self> {
        let n = graph.vertex_count();
        if n > cap {
            return Err(Error::SizeCap { size: n, cap });
        }
        let instances = enumerate_instances_capped(graph, source, setting, cap)?;
        if instances.is_empty() {
            return Err(Error::NoInstance(format!("no {setting} instance from source {source}")));
        }
        let answers = (0..n)
            .map(|q| instances.iter().map(|inst| answer(inst, Query { vertex: q, kind })).collect())
            .collect();
        Ok(GameSolver { setting, kind, source, vertex_count: n, instances, answers, memo: HashMap::new() })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn full_state(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.instances.len());
        all.insert_range(..);
        all
    }

    /// Common endpoint of every instance in `state`, if there is one.
    pub fn settled(&self, state: &FixedBitSet) -> Option<Vertex> {
        let mut ones = state.ones();
        let t = self.instances[ones.next()?].endpoint();
        ones.all(|i| self.instances[i].endpoint() == t).then_some(t)
    }

    pub fn solve(&mut self) -> GameValue {
        let all = self.full_state();
        self.value(&all)
    }

    fn split(&self, state: &FixedBitSet, q: Vertex) -> Vec<FixedBitSet> {
        let mut classes: Vec<(Answer, FixedBitSet)> = Vec::new();
        for i in state.ones() {
            let a = self.answers[q][i];
            match classes.iter_mut().find(|(b, _)| *b == a) {
                Some((_, set)) => set.insert(i),
                None => {
                    let mut set = FixedBitSet::with_capacity(self.instances.len());
                    set.insert(i);
                    classes.push((a, set));
                }
            }
        }
        let mut sets: Vec<FixedBitSet> = classes.into_iter().map(|(_, s)| s).collect();
        sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones(..)));
        sets
    }

    pub fn value(&mut self, state: &FixedBitSet) -> GameValue {
        if self.settled(state).is_some() {
            return GameValue { value: 0, first_query: None };
        }
        if let Some(&v) = self.memo.get(state) {
            return v;
        }
        let mut best = GameValue { value: u32::MAX, first_query: None };
        for q in 0..self.vertex_count {
            let classes = self.split(state, q);
            if classes.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for class in &classes {
                worst = worst.max(1 + self.value(class).value);
                if worst >= best.value {
                    break;
                }
            }
            if worst < best.value {
                best = GameValue { value: worst, first_query: Some(q) };
                if worst == 1 {
                    break;
                }
            }
        }
        debug_assert!(best.first_query.is_some(), "distinct endpoints are always separable");
        self.memo.insert(state.clone(), best);
        best
    }

    /// Plays the optimal strategy against `oracle`; returns the endpoint and the query count.
    pub fn play(&mut self, oracle: &mut dyn Oracle) -> Result<(Vertex, u32)> {
        if oracle.kind() != self.kind || oracle.setting() != self.setting || oracle.source() != self.source {
            return Err(Error::Unsupported("oracle does not match the solved game".into()));
        }
        let mut state = self.full_state();
        let mut used = 0;
        loop {
            if let Some(t) = self.settled(&state) {
                return Ok((t, used));
            }
            let q = self.value(&state).first_query.ok_or(Error::InconsistentState)?;
            let a = oracle.ask(q)?;
            used += 1;
            let row = &self.answers[q];
            let keep: Vec<usize> = state.ones().filter(|&i| row[i] == a).collect();
            if keep.is_empty() {
                return Err(Error::InconsistentState);
            }
            state.clear();
            keep.into_iter().for_each(|i| state.insert(i));
        }
    }
}

pub fn solve(graph: &Graph, source: Vertex, setting: Setting, kind: QueryKind) -> Result<GameValue> {
    Ok(GameSolver::new(graph, source, setting, kind)?.solve())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsReport {
    /// `None` when the graph has no Setting-1 instance from this source.
    pub h1a: Option<u32>,
    pub h1b: Option<u32>,
    pub h2a: u32,
    pub h2b: u32,
    pub half_separator: usize,
    pub setting1_holds: bool,
    pub setting2_holds: bool,
    pub separator_bound_holds: bool,
}

impl RelationsReport {
    pub fn all_hold(&self) -> bool {
        self.setting1_holds && self.setting2_holds && self.separator_bound_holds
    }
}

pub fn verify_relations(graph: &Graph, source: Vertex) -> Result<RelationsReport> {
    let s1 = |kind| match solve(graph, source, Setting::S1, kind) {
        Ok(v) => Ok(Some(v.value)),
        Err(Error::NoInstance(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let h1a = s1(QueryKind::A)?;
    let h1b = s1(QueryKind::B)?;
    let h2a = solve(graph, source, Setting::S2, QueryKind::A)?.value;
    let h2b = solve(graph, source, Setting::S2, QueryKind::B)?.value;
    let half_separator = min_alpha_separator_exact(graph, Rational64::new(1, 2))?.cut.len();
    Ok(RelationsReport {
        h1a,
        h1b,
        h2a,
        h2b,
        half_separator,
        setting1_holds: h1a >= h1b,
        setting2_holds: h2a >= h2b,
        separator_bound_holds: h2b as usize >= half_separator,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub graph_id: String,
    pub setting: Setting,
    pub kind: QueryKind,
    pub value: u32,
}

pub fn write_game_csv<W: Write>(records: &[GameRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Connected graphs on `n` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        if edges.len() + 1 < n {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = 0u64;
                for &(a, b) in &edges {
                    let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                    m |= 1 << pairs.iter().position(|&e| e == (x, y)).expect("pair");
                }
                m
            })
            .min()
            .unwrap_or(0);
        if !seen.insert(canon) {
            continue;
        }
        let g = Graph::from_edges(n, &edges).expect("valid edges");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::TruthfulOracle;

    fn pendant_k4() -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
        edges.push((0, 4));
        Graph::from_edges(5, &edges).unwrap()
    }

    #[test]
    fn path_values_are_logarithmic() {
        for n in 1..=8usize {
            let expected = n.ilog2();
            if n.is_power_of_two() {
                assert_eq!(expected, (n as f64).log2().ceil() as u32);
            }
            let v = solve(&Graph::path(n), 0, Setting::S2, QueryKind::B).unwrap();
            assert_eq!(v.value, expected, "path {n}");
            assert_eq!(v.first_query.is_none(), n == 1);
        }
        assert_eq!(solve(&Graph::path(4), 0, Setting::S2, QueryKind::B).unwrap().value, 2);
    }

    #[test]
    fn pendant_sink_needs_no_queries_in_setting_one() {
        let g = pendant_k4();
        for kind in [QueryKind::A, QueryKind::B] {
            assert_eq!(solve(&g, 0, Setting::S1, kind).unwrap(), GameValue { value: 0, first_query: None });
        }
        assert!(solve(&g, 0, Setting::S2, QueryKind::B).unwrap().value >= 2);
    }

    #[test]
    fn single_vertex_is_terminal() {
        let g = Graph::path(1);
        for setting in [Setting::S1, Setting::S2] {
            for kind in [QueryKind::A, QueryKind::B] {
                assert_eq!(solve(&g, 0, setting, kind).unwrap().value, 0);
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(solve(&Graph::path(9), 0, Setting::S2, QueryKind::B), Err(Error::SizeCap { .. })));
        assert!(matches!(solve(&Graph::path(8), 0, Setting::S1, QueryKind::B), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn relations_on_small_examples() {
        let r = verify_relations(&Graph::path(4), 0).unwrap();
        assert_eq!(r.h2b, 2);
        assert!(r.all_hold());
        let star = verify_relations(&Graph::star(3), 0).unwrap();
        assert_eq!(star.h1a, None);
        assert!(star.all_hold());
    }

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn automorphism_invariance() {
        let g = Graph::cycle(6);
        let mirror: Vec<(usize, usize)> = g.edges().map(|(a, b)| ((6 - a) % 6, (6 - b) % 6)).collect();
        let h = Graph::from_edges(6, &mirror).unwrap();
        for kind in [QueryKind::A, QueryKind::B] {
            for setting in [Setting::S1, Setting::S2] {
                assert_eq!(solve(&g, 0, setting, kind).unwrap().value, solve(&h, 0, setting, kind).unwrap().value);
            }
        }
    }

    #[test]
    fn optimal_play_meets_the_value() {
        let graphs = [Graph::path(5), Graph::cycle(5), Graph::star(4), pendant_k4(), crate::grid::GridSpec::new(vec![2, 3]).unwrap().build()];
        for g in &graphs {
            for setting in [Setting::S1, Setting::S2] {
                for kind in [QueryKind::A, QueryKind::B] {
                    let mut solver = match GameSolver::new(g, 0, setting, kind) {
                        Ok(s) => s,
                        Err(Error::NoInstance(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    let value = solver.solve().value;
                    for inst in solver.instances().to_vec() {
                        let mut oracle = TruthfulOracle::new(inst.clone(), kind);
                        let (t, used) = solver.play(&mut oracle).unwrap();
                        assert_eq!(t, inst.endpoint());
                        assert!(used <= value);
                    }
                }
            }
        }
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        let rec = GameRecord { graph_id: "path4".into(), setting: Setting::S2, kind: QueryKind::B, value: 2 };
        write_game_csv(&[rec], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "graph_id,setting,kind,value\npath4,S2,B,2\n");
    }
}
