//! Adaptive Setting-2 / Query-B adversaries that keep the candidate endpoint set large.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Answer, AnswerB, Oracle, QueryKind, Transcript};
use crate::error::{Error, Result};
use crate::generate::enumerate_instances_capped;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Setting};

/// Vertex cap for [`ExactAdversary`].
pub const EXACT_ADVERSARY_CAP: usize = 20;

/// Part sizes cut away by one answer, ascending, and the size of the part kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRow {
    pub query: Vertex,
    pub pieces: Vec<usize>,
    pub kept: usize,
}

impl CutRow {
    /// The row `x_1 <= .. <= x_m` with the kept part last.
    pub fn row(&self) -> Vec<u64> {
        self.pieces.iter().chain(std::iter::once(&self.kept)).map(|&x| x as u64).collect()
    }
}

/// Cut row for the step `before -> after` caused by asking `q`, or `None` when nothing was cut.
///
/// The pieces are `{q}` (when `q` was a candidate) and the components of the
/// graph induced by the discarded candidates.
pub fn cut_row(graph: &Graph, before: &[bool], after: &[bool], q: Vertex) -> Option<CutRow> {
    if before == after {
        return None;
    }
    let lost: Vec<bool> = (0..before.len()).map(|v| before[v] && !after[v] && v != q).collect();
    let mut pieces: Vec<usize> = graph.components_within(&lost).members.iter().map(Vec::len).collect();
    if before[q] {
        pieces.push(1);
    }
    pieces.sort_unstable();
    Some(CutRow {
        query: q,
        pieces,
        kept: after.iter().filter(|&&b| b).count(),
    })
}

/// Snapshot of an adversary's knowledge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryState {
    /// Candidate endpoints `P`.
    pub candidates: Vec<Vertex>,
    pub denied: Vec<Vertex>,
    pub committed: Vec<(Vertex, Vertex)>,
    pub cut_rows: Vec<CutRow>,
}

fn mask_of(n: usize, vs: impl IntoIterator<Item = Vertex>) -> Vec<bool> {
    let mut m = vec![false; n];
    for v in vs {
        m[v] = true;
    }
    m
}

fn check_query(graph: &Graph, v: Vertex) -> Result<()> {
    graph.check_vertex(v)
}

/// Adversary over the explicit set of consistent instances.
///
/// Each answer maximizes the number of distinct endpoints left. Ties go to the
/// empty answer, then to the smallest answer. The endpoint answer is given only
/// when no other answer is possible.
#[derive(Clone, Debug)]
pub struct ExactAdversary {
    graph: Graph,
    consistent: Vec<Instance>,
    transcript: Transcript,
    denied: Vec<Vertex>,
    committed: Vec<(Vertex, Vertex)>,
    rows: Vec<CutRow>,
}

impl ExactAdversary {
    pub fn new(graph: &Graph, source: Vertex) -> Result<Self> {
        let consistent = enumerate_instances_capped(graph, source, Setting::S2, EXACT_ADVERSARY_CAP)?;
        Ok(ExactAdversary {
            graph: graph.clone(),
            consistent,
            transcript: Transcript::new(Setting::S2, QueryKind::B, source, graph.vertex_count()),
            denied: Vec::new(),
            committed: Vec::new(),
            rows: Vec::new(),
        })
    }

    fn endpoint_mask(&self) -> Vec<bool> {
        mask_of(self.graph.vertex_count(), self.consistent.iter().map(Instance::endpoint))
    }

    pub fn consistent(&self) -> &[Instance] {
        &self.consistent
    }

    pub fn state(&self) -> AdversaryState {
        let m = self.endpoint_mask();
        AdversaryState {
            candidates: (0..m.len()).filter(|&v| m[v]).collect(),
            denied: self.denied.clone(),
            committed: self.committed.clone(),
            cut_rows: self.rows.clone(),
        }
    }

    /// A consistent instance ending at `t`.
    pub fn witness(&self, t: Vertex) -> Result<Instance> {
        self.consistent.iter().find(|i| i.endpoint() == t).cloned().ok_or(Error::NoWitness)
    }

    pub fn answer(&mut self, q: Vertex) -> Result<AnswerB> {
        check_query(&self.graph, q)?;
        if let Some(Answer::B(b)) = self.transcript.get(q) {
            return Ok(b);
        }
        let source = self.transcript.header.source;
        let mut classes: BTreeMap<AnswerB, Vec<usize>> = BTreeMap::new();
        for (i, inst) in self.consistent.iter().enumerate() {
            let b = AnswerB {
                incoming: inst.predecessor(q),
                outgoing: inst.successor(q),
            };
            classes.entry(b).or_default().push(i);
        }
        if classes.is_empty() {
            return Err(Error::InconsistentState);
        }
        let n = self.graph.vertex_count();
        let any_open = classes.keys().any(|b| !b.is_endpoint(q, source));
        let (chosen, members) = classes
            .into_iter()
            .filter(|(b, _)| !any_open || !b.is_endpoint(q, source))
            .map(|(b, idx)| {
                let ends = mask_of(n, idx.iter().map(|&i| self.consistent[i].endpoint()));
                (ends.iter().filter(|&&e| e).count(), b, idx)
            })
            // max by endpoint count; BTreeMap order makes the first maximum the smallest answer
            .fold(None, |best: Option<(usize, AnswerB, Vec<usize>)>, cur| match best {
                Some(b) if b.0 >= cur.0 => Some(b),
                _ => Some(cur),
            })
            .map(|(_, b, idx)| (b, idx))
            .expect("at least one class");
        let before = self.endpoint_mask();
        let kept: Vec<Instance> = members.into_iter().map(|i| self.consistent[i].clone()).collect();
        self.consistent = kept;
        let after = self.endpoint_mask();
        if let Some(row) = cut_row(&self.graph, &before, &after, q) {
            self.rows.push(row);
        }
        if chosen.is_empty() && q != source {
            self.denied.push(q);
        }
        if let Some(p) = chosen.incoming {
            self.committed.push((p, q));
        }
        if let Some(s) = chosen.outgoing {
            self.committed.push((q, s));
        }
        self.transcript.push(q, Answer::B(chosen));
        Ok(chosen)
    }
}

impl Oracle for ExactAdversary {
    fn kind(&self) -> QueryKind {
        QueryKind::B
    }

    fn setting(&self) -> Setting {
        Setting::S2
    }

    fn source(&self) -> Vertex {
        self.transcript.header.source
    }

    fn ask(&mut self, v: Vertex) -> Result<Answer> {
        self.answer(v).map(Answer::B)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

/// Adversary that scales to large graphs.
///
/// It keeps a committed path prefix from the source and takes the candidate set
/// to be the component of the prefix's last vertex after removing denied and
/// prefix vertices. Every candidate is the endpoint of the prefix extended by a
/// path inside that component.
#[derive(Clone, Debug)]
pub struct ComponentAdversary {
    graph: Graph,
    prefix: Vec<Vertex>,
    position: Vec<Option<usize>>,
    denied: Vec<bool>,
    candidates: Vec<bool>,
    finished: bool,
    transcript: Transcript,
    rows: Vec<CutRow>,
}

impl ComponentAdversary {
    pub fn new(graph: &Graph, source: Vertex) -> Result<Self> {
        graph.check_vertex(source)?;
        let n = graph.vertex_count();
        let mut position = vec![None; n];
        position[source] = Some(0);
        let mut adv = ComponentAdversary {
            graph: graph.clone(),
            prefix: vec![source],
            position,
            denied: vec![false; n],
            candidates: vec![false; n],
            finished: false,
            transcript: Transcript::new(Setting::S2, QueryKind::B, source, n),
            rows: Vec::new(),
        };
        adv.recompute();
        Ok(adv)
    }

    fn end(&self) -> Vertex {
        *self.prefix.last().expect("prefix starts at the source")
    }

    fn recompute(&mut self) {
        let n = self.graph.vertex_count();
        let end = self.end();
        let removed: Vec<bool> = (0..n)
            .map(|v| self.denied[v] || (self.position[v].is_some() && v != end))
            .collect();
        self.candidates = vec![false; n];
        if self.finished {
            self.candidates[end] = true;
            return;
        }
        for v in self.graph.reachable(end, &removed) {
            self.candidates[v] = true;
        }
    }

    fn extend(&mut self, v: Vertex) {
        self.position[v] = Some(self.prefix.len());
        self.prefix.push(v);
    }

    pub fn prefix(&self) -> &[Vertex] {
        &self.prefix
    }

    pub fn state(&self) -> AdversaryState {
        AdversaryState {
            candidates: (0..self.candidates.len()).filter(|&v| self.candidates[v]).collect(),
            denied: (0..self.denied.len()).filter(|&v| self.denied[v]).collect(),
            committed: self.prefix.windows(2).map(|w| (w[0], w[1])).collect(),
            cut_rows: self.rows.clone(),
        }
    }

    /// The prefix continued by a shortest path inside the candidate set to `t`.
    pub fn witness(&self, t: Vertex) -> Result<Instance> {
        if !self.graph.contains(t) || !self.candidates[t] {
            return Err(Error::NoWitness);
        }
        let tail = self
            .graph
            .shortest_path(self.end(), t, &self.candidates)
            .ok_or(Error::NoWitness)?;
        let mut path = self.prefix.clone();
        path.extend_from_slice(&tail[1..]);
        Instance::from_path(self.graph.vertex_count(), &path)
    }

    fn prefix_answer(&self, i: usize) -> AnswerB {
        AnswerB {
            incoming: i.checked_sub(1).map(|j| self.prefix[j]),
            outgoing: self.prefix.get(i + 1).copied(),
        }
    }

    /// Components of the candidate set minus `v`, ordered by smallest vertex.
    fn split(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        let mut within = self.candidates.clone();
        within[v] = false;
        self.graph.components_within(&within).members
    }

    fn largest(parts: &[Vec<Vertex>], skip: Option<usize>) -> Option<usize> {
        (0..parts.len())
            .filter(|&i| Some(i) != skip)
            .fold(None, |best, i| match best {
                Some(b) if parts[b].len() >= parts[i].len() => Some(b),
                _ => Some(i),
            })
    }

    pub fn answer(&mut self, q: Vertex) -> Result<AnswerB> {
        check_query(&self.graph, q)?;
        if let Some(Answer::B(b)) = self.transcript.get(q) {
            return Ok(b);
        }
        let before = self.candidates.clone();
        let end = self.end();
        let b = if let Some(i) = self.position[q].filter(|_| q != end) {
            self.prefix_answer(i)
        } else if !self.candidates[q] {
            self.denied[q] = true;
            AnswerB::default()
        } else if q == end {
            let parts = self.split(end);
            let incoming = self.prefix.len().checked_sub(2).map(|j| self.prefix[j]);
            match Self::largest(&parts, None) {
                None => {
                    self.finished = true;
                    AnswerB { incoming, outgoing: None }
                }
                Some(j) => {
                    let y = *self
                        .graph
                        .neighbors(end)
                        .iter()
                        .find(|w| parts[j].binary_search(w).is_ok())
                        .expect("component of the candidate set touches its cut vertex");
                    self.extend(y);
                    AnswerB {
                        incoming,
                        outgoing: Some(y),
                    }
                }
            }
        } else {
            let parts = self.split(q);
            let e = parts
                .iter()
                .position(|p| p.binary_search(&end).is_ok())
                .expect("end stays a candidate");
            match Self::largest(&parts, Some(e)).filter(|&j| parts[j].len() > parts[e].len()) {
                None => {
                    self.denied[q] = true;
                    AnswerB::default()
                }
                Some(j) => {
                    let mut inside = vec![false; self.graph.vertex_count()];
                    for &v in &parts[e] {
                        inside[v] = true;
                    }
                    let walk = bfs_to_neighbor(&self.graph, end, &inside, q).expect("component touches q");
                    let x = *walk.last().expect("nonempty");
                    let y = *self
                        .graph
                        .neighbors(q)
                        .iter()
                        .find(|w| parts[j].binary_search(w).is_ok())
                        .expect("component touches q");
                    for &v in &walk[1..] {
                        self.extend(v);
                    }
                    self.extend(q);
                    self.extend(y);
                    AnswerB {
                        incoming: Some(x),
                        outgoing: Some(y),
                    }
                }
            }
        };
        self.recompute();
        if let Some(row) = cut_row(&self.graph, &before, &self.candidates, q) {
            self.rows.push(row);
        }
        self.transcript.push(q, Answer::B(b));
        Ok(b)
    }
}

/// Shortest path from `from` inside `inside` to a vertex adjacent to `target`.
fn bfs_to_neighbor(graph: &Graph, from: Vertex, inside: &[bool], target: Vertex) -> Option<Vec<Vertex>> {
    let mut parent = vec![usize::MAX; graph.vertex_count()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if graph.has_edge(u, target) {
            let mut path = vec![u];
            let mut cur = u;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in graph.neighbors(u) {
            if inside[w] && parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

impl Oracle for ComponentAdversary {
    fn kind(&self) -> QueryKind {
        QueryKind::B
    }

    fn setting(&self) -> Setting {
        Setting::S2
    }

    fn source(&self) -> Vertex {
        self.transcript.header.source
    }

    fn ask(&mut self, v: Vertex) -> Result<Answer> {
        self.answer(v).map(Answer::B)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}
