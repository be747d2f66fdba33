//! Query answering: truthful oracles, adversaries, and transcripts.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Setting};

mod adversary;
mod certificate;
mod lemma;

pub use adversary::{cut_row, AdversaryState, ComponentAdversary, ExactAdversary, EXACT_ADVERSARY_CAP};
pub use certificate::{separator_certificate, Certificate};
pub use lemma::{greedy_exact_subset, hypothesis_inputs, lemma_hypotheses, with_largest_tails};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QueryKind {
    /// Out-arc only.
    A,
    /// Both incident arcs with directions.
    B,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::A => "A",
            QueryKind::B => "B",
        })
    }
}

impl std::str::FromStr for QueryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(QueryKind::A),
            "B" | "b" => Ok(QueryKind::B),
            _ => Err(Error::Parse(format!("unknown query kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    pub vertex: Vertex,
    pub kind: QueryKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnswerA {
    FoundEndpoint,
    OutArc(Vertex, Vertex),
    /// Setting 2 only.
    NotOnPath,
}

/// The arcs of `D` at the asked vertex, as the predecessor and successor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnswerB {
    pub incoming: Option<Vertex>,
    pub outgoing: Option<Vertex>,
}

impl AnswerB {
    pub fn is_empty(&self) -> bool {
        self.incoming.is_none() && self.outgoing.is_none()
    }

    /// Whether this answer at `v` pins `v` as the endpoint.
    pub fn is_endpoint(&self, v: Vertex, source: Vertex) -> bool {
        self.outgoing.is_none() && (self.incoming.is_some() || v == source)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Answer {
    A(AnswerA),
    B(AnswerB),
}

impl Answer {
    pub fn kind(&self) -> QueryKind {
        match self {
            Answer::A(_) => QueryKind::A,
            Answer::B(_) => QueryKind::B,
        }
    }

    pub fn is_endpoint(&self, v: Vertex, source: Vertex) -> bool {
        match self {
            Answer::A(a) => *a == AnswerA::FoundEndpoint,
            Answer::B(b) => b.is_endpoint(v, source),
        }
    }

    /// Successor of the asked vertex, when the answer reveals one.
    pub fn successor(&self) -> Option<Vertex> {
        match *self {
            Answer::A(AnswerA::OutArc(_, w)) => Some(w),
            Answer::B(b) => b.outgoing,
            _ => None,
        }
    }
}

/// Truthful answer to `q` on `inst`.
pub fn answer(inst: &Instance, q: Query) -> Answer {
    let v = q.vertex;
    match q.kind {
        QueryKind::A => Answer::A(if v == inst.endpoint() {
            AnswerA::FoundEndpoint
        } else if let Some(w) = inst.successor(v) {
            AnswerA::OutArc(v, w)
        } else {
            AnswerA::NotOnPath
        }),
        QueryKind::B => Answer::B(AnswerB {
            incoming: inst.predecessor(v),
            outgoing: inst.successor(v),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub setting: Setting,
    pub kind: QueryKind,
    pub source: Vertex,
    pub vertex_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub vertex: Vertex,
    pub answer: Answer,
}

/// Ordered query history of one game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub entries: Vec<Entry>,
}

impl Transcript {
    pub fn new(setting: Setting, kind: QueryKind, source: Vertex, vertex_count: usize) -> Self {
        Transcript {
            header: TranscriptHeader {
                setting,
                kind,
                source,
                vertex_count,
            },
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, vertex: Vertex, answer: Answer) {
        self.entries.push(Entry { vertex, answer });
    }

    pub fn get(&self, v: Vertex) -> Option<Answer> {
        self.entries.iter().find(|e| e.vertex == v).map(|e| e.answer)
    }

    /// Whether `inst` answers every recorded query the same way.
    pub fn consistent_with(&self, inst: &Instance) -> bool {
        inst.setting() == self.header.setting
            && inst.source() == self.header.source
            && inst.vertex_count() == self.header.vertex_count
            && self.entries.iter().all(|e| {
                answer(
                    inst,
                    Query {
                        vertex: e.vertex,
                        kind: self.header.kind,
                    },
                ) == e.answer
            })
    }

    /// Header line followed by one line per entry.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", serde_json::to_string(&self.header)?)?;
        for e in &self.entries {
            writeln!(w, "{}", serde_json::to_string(e)?)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a vector");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()));
        let header: TranscriptHeader = match lines.next() {
            Some(line) => serde_json::from_str(&line?)?,
            None => return Err(Error::Parse("empty transcript".into())),
        };
        let mut entries = Vec::new();
        for line in lines {
            entries.push(serde_json::from_str(&line?)?);
        }
        Ok(Transcript { header, entries })
    }
}

/// Replays `transcript` against `inst`; fails on the first differing answer.
pub fn replay(inst: &Instance, transcript: &Transcript) -> Result<()> {
    for (i, e) in transcript.entries.iter().enumerate() {
        let truth = answer(
            inst,
            Query {
                vertex: e.vertex,
                kind: transcript.header.kind,
            },
        );
        if truth != e.answer {
            return Err(Error::Inconsistent(format!(
                "entry {i} at vertex {}: recorded {:?}, instance gives {truth:?}",
                e.vertex, e.answer
            )));
        }
    }
    Ok(())
}

/// A consistent instance for `transcript`, by exhaustive enumeration.
pub fn consistency_witness(graph: &Graph, transcript: &Transcript) -> Result<Instance> {
    let h = &transcript.header;
    crate::generate::enumerate_instances(graph, h.source, h.setting)?
        .into_iter()
        .find(|i| transcript.consistent_with(i))
        .ok_or(Error::NoWitness)
}

/// The answering side of a game.
pub trait Oracle {
    fn kind(&self) -> QueryKind;
    fn setting(&self) -> Setting;
    fn source(&self) -> Vertex;
    fn ask(&mut self, v: Vertex) -> Result<Answer>;
    fn transcript(&self) -> &Transcript;
}

/// Answers from a fixed hidden instance.
#[derive(Clone, Debug)]
pub struct TruthfulOracle {
    inst: Instance,
    transcript: Transcript,
}

impl TruthfulOracle {
    pub fn new(inst: Instance, kind: QueryKind) -> Self {
        let transcript = Transcript::new(inst.setting(), kind, inst.source(), inst.vertex_count());
        TruthfulOracle { inst, transcript }
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }
}

impl Oracle for TruthfulOracle {
    fn kind(&self) -> QueryKind {
        self.transcript.header.kind
    }

    fn setting(&self) -> Setting {
        self.inst.setting()
    }

    fn source(&self) -> Vertex {
        self.inst.source()
    }

    fn ask(&mut self, v: Vertex) -> Result<Answer> {
        if v >= self.inst.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.inst.vertex_count(),
            });
        }
        let a = answer(
            &self.inst,
            Query {
                vertex: v,
                kind: self.kind(),
            },
        );
        self.transcript.push(v, a);
        Ok(a)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::enumerate_instances;

    fn q(vertex: Vertex, kind: QueryKind) -> Query {
        Query { vertex, kind }
    }

    #[test]
    fn answer_examples() {
        let inst = Instance::from_path(4, &[0, 1, 2]).unwrap();
        let b = answer(&inst, q(2, QueryKind::B));
        assert_eq!(
            b,
            Answer::B(AnswerB {
                incoming: Some(1),
                outgoing: None
            })
        );
        assert!(b.is_endpoint(2, 0));
        assert_eq!(answer(&inst, q(3, QueryKind::A)), Answer::A(AnswerA::NotOnPath));
        assert_eq!(answer(&inst, q(2, QueryKind::A)), Answer::A(AnswerA::FoundEndpoint));
        assert_eq!(answer(&inst, q(0, QueryKind::A)), Answer::A(AnswerA::OutArc(0, 1)));

        // path 0 -> 1, cycle 2 -> 3 -> 4 -> 2
        let s1 = Instance::from_successors(Setting::S1, 0, vec![Some(1), None, Some(3), Some(4), Some(2)]).unwrap();
        assert_eq!(
            answer(&s1, q(3, QueryKind::B)),
            Answer::B(AnswerB {
                incoming: Some(2),
                outgoing: Some(4)
            })
        );
    }

    #[test]
    fn zero_length_path_at_source() {
        let inst = Instance::from_path(3, &[0]).unwrap();
        assert!(answer(&inst, q(0, QueryKind::B)).is_endpoint(0, 0));
        assert!(answer(&inst, q(0, QueryKind::A)).is_endpoint(0, 0));
        assert!(!answer(&inst, q(1, QueryKind::B)).is_endpoint(1, 0));
    }

    #[test]
    fn single_incoming_only_at_endpoint() {
        let g = crate::grid::GridSpec::cube(2, 3).unwrap().build();
        for setting in [Setting::S1, Setting::S2] {
            for inst in enumerate_instances(&g, 0, setting).unwrap() {
                for v in 0..9 {
                    let a = answer(&inst, q(v, QueryKind::B));
                    assert_eq!(a.is_endpoint(v, 0), v == inst.endpoint());
                }
            }
        }
    }

    #[test]
    fn truthful_replay_and_jsonl_round_trip() {
        let g = Graph::path(6);
        let inst = Instance::from_path(6, &[0, 1, 2, 3]).unwrap();
        let mut o = TruthfulOracle::new(inst.clone(), QueryKind::B);
        for v in [5, 2, 3] {
            o.ask(v).unwrap();
        }
        let t = o.transcript().clone();
        replay(&inst, &t).unwrap();
        let back = Transcript::read_jsonl(t.to_jsonl().as_bytes()).unwrap();
        assert_eq!(back, t);
        let w = consistency_witness(&g, &t).unwrap();
        assert!(t.consistent_with(&w));
        let other = Instance::from_path(6, &[0, 1]).unwrap();
        assert!(replay(&other, &t).is_err());
    }

    #[test]
    fn witness_examples() {
        let g = Graph::path(8);
        let empty = Transcript::new(Setting::S2, QueryKind::B, 0, 8);
        assert!(consistency_witness(&g, &empty).is_ok());
        let mut t = Transcript::new(Setting::S2, QueryKind::B, 0, 8);
        t.push(4, Answer::B(AnswerB::default()));
        let w = consistency_witness(&g, &t).unwrap();
        assert!(!w.path().contains(&4));
        t.push(0, Answer::B(AnswerB { incoming: None, outgoing: Some(1) }));
        t.push(1, Answer::B(AnswerB::default()));
        assert_eq!(consistency_witness(&g, &t), Err(Error::NoWitness));
    }
}
