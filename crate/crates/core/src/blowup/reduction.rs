//! Runs a Setting-1 searcher on the blown grid against a Setting-2 base oracle.
//!
//! Each blown query asks the owning base vertex once; the answer inside the block
//! is synthesized from the canonical patterns. Corner choices are committed
//! lazily: prior commitments win, then the direction of the base move, then the
//! lowest corner allowed by parity.

use std::collections::HashMap;

use super::{build_good_system_pinned, corner_roles, move_of, BlockMap, BlockPattern, Corner, GoodSystem, Pins};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::grid::GridSpec;
use crate::instance::{Instance, Setting};
use crate::oracle::{
    replay, Answer, AnswerB, ComponentAdversary, ExactAdversary, Oracle, QueryKind, Transcript, TruthfulOracle,
};
use crate::search::SearchResult;

/// A Setting-2 / Query-B oracle that can exhibit an instance matching its answers.
pub trait BaseOracle: Oracle {
    fn base_witness(&self, endpoint: Vertex) -> Result<Instance>;
}

impl BaseOracle for TruthfulOracle {
    fn base_witness(&self, _endpoint: Vertex) -> Result<Instance> {
        Ok(self.instance().clone())
    }
}

impl BaseOracle for ExactAdversary {
    fn base_witness(&self, endpoint: Vertex) -> Result<Instance> {
        self.witness(endpoint)
    }
}

impl BaseOracle for ComponentAdversary {
    fn base_witness(&self, endpoint: Vertex) -> Result<Instance> {
        self.witness(endpoint)
    }
}

/// Blown-grid oracle backed by a base oracle.
pub struct ReductionOracle<'o, O: BaseOracle> {
    map: BlockMap,
    base: &'o mut O,
    patterns: HashMap<Vertex, (BlockPattern, AnswerB)>,
    pins: Pins,
    transcript: Transcript,
}

impl<'o, O: BaseOracle> ReductionOracle<'o, O> {
    pub fn new(base_spec: &GridSpec, base: &'o mut O) -> Result<Self> {
        if base.setting() != Setting::S2 || base.kind() != QueryKind::B {
            return Err(Error::Unsupported("the base oracle must be Setting 2 / Query B".into()));
        }
        let map = BlockMap::new(base_spec)?;
        let s = base.source();
        let mut pins = Pins::default();
        pins.p1.insert(s, map.source_corner(s));
        let source = map.corner(s, map.source_corner(s));
        let transcript = Transcript::new(Setting::S1, QueryKind::B, source, map.blown.vertex_count());
        Ok(ReductionOracle {
            map,
            base,
            patterns: HashMap::new(),
            pins,
            transcript,
        })
    }

    pub fn block_map(&self) -> &BlockMap {
        &self.map
    }

    pub fn pins(&self) -> &Pins {
        &self.pins
    }

    fn pin(slot: &mut HashMap<Vertex, Corner>, v: Vertex, c: Corner) -> Result<()> {
        match slot.insert(v, c) {
            Some(old) if old != c => Err(Error::Synthesis(format!("block {v}: corner {old:?} re-pinned to {c:?}"))),
            _ => Ok(()),
        }
    }

    /// Pattern of the block of base vertex `v`, asking the base oracle if needed.
    fn pattern(&mut self, v: Vertex) -> Result<(BlockPattern, AnswerB)> {
        if let Some(&p) = self.patterns.get(&v) {
            return Ok(p);
        }
        let b = match self.base.ask(v)? {
            Answer::B(b) => b,
            Answer::A(_) => return Err(Error::Unsupported("base oracle answered Query A".into())),
        };
        let source = self.base.source();
        let pattern = if b.is_empty() && v != source {
            BlockPattern::Cycle
        } else {
            let spec = self.map.base.clone();
            let entry = b.incoming.map(|u| move_of(&spec, u, v)).transpose()?;
            let exit = b.outgoing.map(|w| move_of(&spec, v, w)).transpose()?;
            let (c1, c2) = corner_roles(&self.map, v, entry, exit)?;
            let p1 = choose(self.pins.p1.get(&v).copied(), &c1, v)?;
            Self::pin(&mut self.pins.p1, v, p1)?;
            if let (Some(u), Some(m)) = (b.incoming, entry) {
                Self::pin(&mut self.pins.p2, u, across(p1, m))?;
            }
            match (b.outgoing, exit) {
                (Some(w), Some(m)) => {
                    let p2 = choose(self.pins.p2.get(&v).copied(), &c2, v)?;
                    Self::pin(&mut self.pins.p2, v, p2)?;
                    Self::pin(&mut self.pins.p1, w, across(p2, m))?;
                    BlockPattern::Through { p1, p2 }
                }
                _ => BlockPattern::Last { p1 },
            }
        };
        self.patterns.insert(v, (pattern, b));
        Ok((pattern, b))
    }

    fn synthesize(&mut self, w: Vertex) -> Result<AnswerB> {
        let v = self.map.owner(w);
        let (pattern, base) = self.pattern(v)?;
        let (a, b) = self.map.local(w);
        let (succ, pred) = pattern.tables();
        let mut ans = AnswerB {
            incoming: pred[a][b].map(|(c, d)| self.map.at(v, c, d)),
            outgoing: succ[a][b].map(|(c, d)| self.map.at(v, c, d)),
        };
        if let BlockPattern::Through { p2, .. } = pattern {
            if (a, b) == p2.local() {
                let x = base.outgoing.expect("through blocks have a successor");
                ans.outgoing = Some(self.connector(x, &self.pins.p1)?);
            }
        }
        if let BlockPattern::Through { p1, .. } | BlockPattern::Last { p1 } = pattern {
            if (a, b) == p1.local() {
                if let Some(u) = base.incoming {
                    ans.incoming = Some(self.connector(u, &self.pins.p2)?);
                }
            }
        }
        Ok(ans)
    }

    fn connector(&self, block: Vertex, slot: &HashMap<Vertex, Corner>) -> Result<Vertex> {
        let c = slot
            .get(&block)
            .ok_or_else(|| Error::Synthesis(format!("connector corner of block {block} not pinned")))?;
        Ok(self.map.corner(block, *c))
    }

    /// Good system for `base_path` that reproduces every synthesized answer.
    pub fn complete(&self, base_path: &Instance) -> Result<GoodSystem> {
        let sys = build_good_system_pinned(&self.map.base, base_path, &self.pins)?;
        replay(&sys.instance, &self.transcript).map_err(|e| Error::Synthesis(e.to_string()))?;
        Ok(sys)
    }
}

fn choose(pinned: Option<Corner>, allowed: &[Corner], v: Vertex) -> Result<Corner> {
    match pinned {
        Some(c) if allowed.contains(&c) => Ok(c),
        Some(c) => Err(Error::Synthesis(format!("block {v}: pinned corner {c:?} not in {allowed:?}"))),
        None => Ok(*allowed.iter().min().expect("nonempty")),
    }
}

/// Corner of the neighboring block joined to corner `c` by the connector for move `m`.
fn across(c: Corner, m: (usize, bool)) -> Corner {
    if m.0 < 2 {
        c.mirror(m.0)
    } else {
        c
    }
}

impl<O: BaseOracle> Oracle for ReductionOracle<'_, O> {
    fn kind(&self) -> QueryKind {
        QueryKind::B
    }

    fn setting(&self) -> Setting {
        Setting::S1
    }

    fn source(&self) -> Vertex {
        self.transcript.header.source
    }

    fn ask(&mut self, w: Vertex) -> Result<Answer> {
        let n = self.map.blown.vertex_count();
        if w >= n {
            return Err(Error::VertexOutOfRange { vertex: w, count: n });
        }
        let ans = match self.transcript.get(w) {
            Some(a) => a,
            None => Answer::B(self.synthesize(w)?),
        };
        self.transcript.push(w, ans);
        Ok(ans)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub base_endpoint: Vertex,
    pub base_queries: usize,
    pub blown_queries: usize,
    pub blown: SearchResult,
    pub base_transcript: Transcript,
    pub system: GoodSystem,
}

/// Runs `algorithm` on the blown grid through a [`ReductionOracle`], then
/// completes and checks a good system reproducing the blown transcript.
pub fn simulate_reduction<O, F>(base_spec: &GridSpec, base: &mut O, algorithm: F) -> Result<ReductionResult>
where
    O: BaseOracle,
    F: FnOnce(&GridSpec, &Graph, &mut dyn Oracle) -> Result<SearchResult>,
{
    let mut adapter = ReductionOracle::new(base_spec, base)?;
    let blown_spec = adapter.map.blown.clone();
    let blown_graph = blown_spec.build();
    let blown = algorithm(&blown_spec, &blown_graph, &mut adapter)?;
    let base_endpoint = adapter.map.owner(blown.endpoint);
    let witness = adapter.base.base_witness(base_endpoint)?;
    let system = adapter.complete(&witness)?;
    if system.instance.endpoint() != blown.endpoint {
        return Err(Error::Synthesis(format!(
            "completed system ends at {}, the searcher reported {}",
            system.instance.endpoint(),
            blown.endpoint
        )));
    }
    let base_transcript = adapter.base.transcript().clone();
    Ok(ReductionResult {
        base_endpoint,
        base_queries: base_transcript.len(),
        blown_queries: blown.queries_used,
        blown,
        base_transcript,
        system,
    })
}
