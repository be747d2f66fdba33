//! Which component of `G - asked` holds the endpoint.
//!
//! Every component `Y` satisfies `arrivals - departures + [s in Y] = [t in Y]`,
//! counting all arcs of `D` between `Y` and the asked set; cycles cancel. Query-B
//! answers reveal every such arc. Query-A answers reveal arrivals but not the
//! unknown predecessors of asked path vertices, so those are assigned to
//! neighboring components by a flow relaxation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::Setting;
use crate::oracle::{Answer, AnswerA, QueryKind, Transcript};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Located {
    Identified(Vertex),
    /// Members of the component that holds the endpoint.
    Component(Vec<Vertex>),
    /// Several components remain possible.
    Ambiguous(Vec<Vec<Vertex>>),
}

/// What the searcher has learned so far.
#[derive(Clone, Debug)]
pub struct Knowledge {
    setting: Setting,
    kind: QueryKind,
    source: Vertex,
    asked: Vec<bool>,
    order: Vec<Vertex>,
    /// Known successor (`Some(None)` for none) of each vertex.
    succ: Vec<Option<Option<Vertex>>>,
    /// Known predecessor (`Some(None)` for none).
    pred: Vec<Option<Option<Vertex>>>,
    identified: Option<Vertex>,
}

impl Knowledge {
    pub fn new(vertex_count: usize, setting: Setting, kind: QueryKind, source: Vertex) -> Self {
        let mut pred = vec![None; vertex_count];
        pred[source] = Some(None);
        Knowledge {
            setting,
            kind,
            source,
            asked: vec![false; vertex_count],
            order: Vec::new(),
            succ: vec![None; vertex_count],
            pred,
            identified: None,
        }
    }

    pub fn from_transcript(t: &Transcript) -> Self {
        let h = &t.header;
        let mut k = Knowledge::new(h.vertex_count, h.setting, h.kind, h.source);
        for e in &t.entries {
            k.record(e.vertex, e.answer);
        }
        k
    }

    pub fn is_asked(&self, v: Vertex) -> bool {
        self.asked[v]
    }

    pub fn asked(&self) -> &[Vertex] {
        &self.order
    }

    pub fn identified(&self) -> Option<Vertex> {
        self.identified
    }

    pub fn known_pred(&self, v: Vertex) -> Option<Option<Vertex>> {
        self.pred[v]
    }

    pub fn record(&mut self, v: Vertex, answer: Answer) {
        if !self.asked[v] {
            self.asked[v] = true;
            self.order.push(v);
        }
        if answer.is_endpoint(v, self.source) {
            self.identified = Some(v);
        }
        match answer {
            Answer::A(AnswerA::FoundEndpoint) => self.succ[v] = Some(None),
            Answer::A(AnswerA::OutArc(_, w)) => {
                self.succ[v] = Some(Some(w));
                self.pred[w] = Some(Some(v));
            }
            Answer::A(AnswerA::NotOnPath) => {
                self.succ[v] = Some(None);
                self.pred[v] = Some(None);
            }
            Answer::B(b) => {
                self.succ[v] = Some(b.outgoing);
                self.pred[v] = Some(b.incoming);
                if let Some(w) = b.outgoing {
                    self.pred[w] = Some(Some(v));
                }
                if let Some(p) = b.incoming {
                    self.succ[p] = Some(Some(v));
                }
            }
        }
    }

    /// Asked vertices known to have a predecessor that is still unknown.
    pub fn open_predecessors(&self) -> Vec<Vertex> {
        self.order
            .iter()
            .copied()
            .filter(|&u| {
                self.pred[u].is_none()
                    && u != self.source
                    && (self.setting == Setting::S1 || self.succ[u].is_some_and(|s| s.is_some()))
            })
            .collect()
    }

    /// Unasked neighbors of `u` that could be its predecessor.
    pub fn predecessor_candidates(&self, graph: &Graph, u: Vertex) -> Vec<Vertex> {
        let succ = self.succ[u].flatten();
        graph
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&w| !self.asked[w] && Some(w) != succ)
            .collect()
    }

    /// Localizes the endpoint among the components of `G - asked`.
    pub fn locate(&self, graph: &Graph) -> Result<Located> {
        if let Some(t) = self.identified {
            return Ok(Located::Identified(t));
        }
        let comps = graph.components(&self.asked);
        let k = comps.len();
        let mut need = vec![0i64; k];
        if let Some(c) = comps.label[self.source] {
            need[c] += 1;
        }
        for &u in &self.order {
            if let Some(Some(w)) = self.succ[u] {
                if let Some(c) = comps.label[w] {
                    need[c] += 1;
                }
            }
            if let Some(Some(p)) = self.pred[u] {
                if let Some(c) = comps.label[p] {
                    need[c] -= 1;
                }
            }
        }
        let open = self.open_predecessors();
        let candidates: Vec<usize> = if open.is_empty() {
            (0..k).filter(|&c| need[c] == 1).collect()
        } else {
            let options: Vec<Vec<Vertex>> = open.iter().map(|&u| self.predecessor_candidates(graph, u)).collect();
            (0..k)
                .filter(|&star| {
                    let quota: Vec<i64> = (0..k).map(|c| need[c] - i64::from(c == star)).collect();
                    quotas_feasible(&quota, &options, &comps.label, open.len())
                })
                .collect()
        };
        let mut parts: Vec<Vec<Vertex>> = candidates.iter().map(|&c| comps.members[c].clone()).collect();
        match parts.len() {
            0 => Err(Error::Inconsistent("no component can hold the endpoint".into())),
            1 => {
                let part = parts.pop().expect("one part");
                Ok(if part.len() == 1 {
                    Located::Identified(part[0])
                } else {
                    Located::Component(part)
                })
            }
            _ => Ok(Located::Ambiguous(parts)),
        }
    }

    /// Next vertex to ask to resolve an ambiguous localization: an unasked
    /// predecessor candidate of the lowest open vertex whose candidates span two
    /// components, falling back to any open vertex.
    pub fn resolving_query(&self, graph: &Graph) -> Option<Vertex> {
        let comps = graph.components(&self.asked);
        let open = self.open_predecessors();
        let mut sorted = open.clone();
        sorted.sort_unstable();
        let spans = |u: Vertex| {
            let mut labels: Vec<usize> = self
                .predecessor_candidates(graph, u)
                .iter()
                .filter_map(|&w| comps.label[w])
                .collect();
            labels.sort_unstable();
            labels.dedup();
            labels.len() >= 2
        };
        sorted
            .iter()
            .copied()
            .find(|&u| spans(u))
            .or_else(|| sorted.first().copied())
            .and_then(|u| self.predecessor_candidates(graph, u).into_iter().min())
    }

    pub fn kind(&self) -> QueryKind {
        self.kind
    }
}

/// Whether the open vertices can take distinct predecessors, one per vertex,
/// filling every component's quota exactly.
fn quotas_feasible(quota: &[i64], options: &[Vec<Vertex>], label: &[Option<usize>], open: usize) -> bool {
    if quota.iter().any(|&q| q < 0) || quota.iter().sum::<i64>() != open as i64 {
        return false;
    }
    // nodes: 0 = source, 1..=open, then candidate vertices, then components, then sink
    let mut vertex_node = std::collections::HashMap::new();
    let mut vertex_list = Vec::new();
    for opts in options {
        for &w in opts {
            vertex_node.entry(w).or_insert_with(|| {
                vertex_list.push(w);
                vertex_list.len() - 1
            });
        }
    }
    let k = quota.len();
    let base_v = 1 + open;
    let base_c = base_v + vertex_list.len();
    let sink = base_c + k;
    let mut flow = MaxFlow::new(sink + 1);
    for (i, opts) in options.iter().enumerate() {
        flow.add(0, 1 + i, 1);
        for w in opts {
            flow.add(1 + i, base_v + vertex_node[w], 1);
        }
    }
    for (j, &w) in vertex_list.iter().enumerate() {
        let c = label[w].expect("candidates are unasked");
        flow.add(base_v + j, base_c + c, 1);
    }
    for (c, &q) in quota.iter().enumerate() {
        if q > 0 {
            flow.add(base_c + c, sink, q);
        }
    }
    flow.run(0, sink) == open as i64
}

struct MaxFlow {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl MaxFlow {
    fn new(nodes: usize) -> Self {
        MaxFlow {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut seen = vec![false; self.head.len()];
            let pushed = self.augment(s, t, i64::MAX, &mut seen);
            if pushed == 0 {
                return total;
            }
            total += pushed;
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: i64, seen: &mut [bool]) -> i64 {
        if u == t {
            return limit;
        }
        seen[u] = true;
        for i in 0..self.head[u].len() {
            let e = self.head[u][i];
            let v = self.to[e];
            if self.cap[e] > 0 && !seen[v] {
                let got = self.augment(v, t, limit.min(self.cap[e]), seen);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
        }
        0
    }
}

/// Localization from a transcript. Every vertex of `cut` must have been asked.
pub fn locate_component(graph: &Graph, transcript: &Transcript, cut: &[Vertex]) -> Result<Located> {
    let k = Knowledge::from_transcript(transcript);
    if let Some(&c) = cut.iter().find(|&&c| !k.is_asked(c)) {
        return Err(Error::MissingAnswer(c));
    }
    k.locate(graph)
}

/// Components of `G - asked` containing the endpoint of some consistent instance, by enumeration.
pub fn locate_component_exact(graph: &Graph, transcript: &Transcript) -> Result<Vec<Vec<Vertex>>> {
    let h = &transcript.header;
    let k = Knowledge::from_transcript(transcript);
    let comps = graph.components(&k.asked);
    let mut hit = vec![false; comps.len()];
    for inst in crate::generate::enumerate_instances(graph, h.source, h.setting)? {
        if transcript.consistent_with(&inst) {
            if let Some(c) = comps.label[inst.endpoint()] {
                hit[c] = true;
            }
        }
    }
    Ok((0..comps.len()).filter(|&c| hit[c]).map(|c| comps.members[c].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::enumerate_instances;
    use crate::grid::GridSpec;
    use crate::instance::Instance;
    use crate::oracle::{answer, AnswerB, Query};
    use rand::seq::SliceRandom;

    fn b(incoming: Option<Vertex>, outgoing: Option<Vertex>) -> Answer {
        Answer::B(AnswerB { incoming, outgoing })
    }

    #[test]
    fn surplus_picks_the_right_part() {
        let spec = GridSpec::cube(2, 5).unwrap();
        let g = spec.build();
        let at = |x: usize, y: usize| spec.index(&[x, y]);
        let mut t = Transcript::new(Setting::S2, QueryKind::B, at(0, 0), 25);
        // path crosses column x = 2 three times: right, left, right
        t.push(at(2, 0), b(Some(at(1, 0)), Some(at(3, 0))));
        t.push(at(2, 2), b(Some(at(3, 2)), Some(at(1, 2))));
        t.push(at(2, 4), b(Some(at(1, 4)), Some(at(3, 4))));
        for y in [1, 3] {
            t.push(at(2, y), b(None, None));
        }
        let cut: Vec<Vertex> = (0..5).map(|y| at(2, y)).collect();
        match locate_component(&g, &t, &cut).unwrap() {
            Located::Component(part) => assert!(part.contains(&at(4, 4)) && !part.contains(&at(0, 0))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn silent_cut_keeps_the_source_side() {
        let g = Graph::path(7);
        let mut t = Transcript::new(Setting::S2, QueryKind::B, 0, 7);
        t.push(3, b(None, None));
        assert_eq!(locate_component(&g, &t, &[3]).unwrap(), Located::Component(vec![0, 1, 2]));
        assert_eq!(locate_component(&g, &t, &[4]), Err(Error::MissingAnswer(4)));
    }

    #[test]
    fn single_incoming_identifies() {
        let g = Graph::path(7);
        let mut t = Transcript::new(Setting::S2, QueryKind::B, 0, 7);
        t.push(3, b(Some(2), None));
        assert_eq!(locate_component(&g, &t, &[3]).unwrap(), Located::Identified(3));
    }

    fn sample_graphs() -> Vec<Graph> {
        vec![
            GridSpec::cube(2, 3).unwrap().build(),
            GridSpec::new(vec![2, 4]).unwrap().build(),
            Graph::binary_tree(9),
            Graph::cycle(8),
            Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 6), (6, 7), (7, 4), (2, 6)]).unwrap(),
        ]
    }

    /// Query B is exact; Query A's relaxation never loses the true part.
    #[test]
    fn relaxation_is_sound_and_b_is_exact() {
        let mut rng = crate::generate::rng_for(7);
        for g in sample_graphs() {
            let n = g.vertex_count();
            for setting in [Setting::S1, Setting::S2] {
                let all: Vec<Instance> = enumerate_instances(&g, 0, setting).unwrap();
                for inst in all.iter().step_by(3) {
                    for kind in [QueryKind::A, QueryKind::B] {
                        let mut order: Vec<Vertex> = (0..n).collect();
                        order.shuffle(&mut rng);
                        let mut t = Transcript::new(setting, kind, 0, n);
                        for &v in order.iter().take(n / 2) {
                            t.push(v, answer(inst, Query { vertex: v, kind }));
                            let k = Knowledge::from_transcript(&t);
                            let exact = locate_component_exact(&g, &t).unwrap();
                            let got = k.locate(&g).unwrap();
                            let t_true = inst.endpoint();
                            match &got {
                                Located::Identified(x) => {
                                    assert_eq!(*x, t_true);
                                }
                                Located::Component(p) => {
                                    assert!(p.contains(&t_true));
                                    assert_eq!(exact, vec![p.clone()]);
                                }
                                Located::Ambiguous(ps) => {
                                    assert_eq!(kind, QueryKind::A, "query B must be decisive");
                                    assert!(ps.iter().any(|p| p.contains(&t_true)));
                                    assert!(exact.iter().all(|e| ps.contains(e)));
                                    assert!(k.resolving_query(&g).is_some());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
