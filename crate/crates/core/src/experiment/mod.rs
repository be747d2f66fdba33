//! Batch experiments: scenarios, per-run records with bound flags, summaries.

use std::io::Write;
use std::str::FromStr;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bisection_upper_bound, bisection_upper_bound_corrected, grid_separator_lower_bound, log2_bound};
use crate::error::{Error, Result};
use crate::generate::{enumerate_instances, gen_setting2, random_setting1, PathControl};
use crate::graph::{Graph, Vertex};
use crate::grid::GridSpec;
use crate::instance::{Instance, Setting};
use crate::oracle::{ComponentAdversary, ExactAdversary, Oracle, QueryKind, TruthfulOracle, EXACT_ADVERSARY_CAP};
use crate::search::{follow_path, grid_bisection_search, separator_search, tree_search, SearchResult};
use crate::separators::{
    min_alpha_separator_exact, min_alpha_separator_exact_capped, CentroidProvider, ExactProvider, HyperplaneProvider,
    SeparatorProvider, EXACT_CAP, EXACT_GRID_CAP,
};

#[cfg(test)]
mod tests;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    Grid { dims: Vec<usize> },
    Path { n: usize },
    /// Heap-ordered binary tree.
    Tree { n: usize },
    Star { leaves: usize },
    Complete { n: usize },
    Cycle { n: usize },
    Explicit { vertex_count: usize, edges: Vec<(Vertex, Vertex)> },
}

impl GraphFamily {
    pub fn build(&self) -> Result<Graph> {
        Ok(match self {
            GraphFamily::Grid { dims } => GridSpec::new(dims.clone())?.build(),
            GraphFamily::Path { n } => Graph::path(*n),
            GraphFamily::Tree { n } => Graph::binary_tree(*n),
            GraphFamily::Star { leaves } => Graph::star(*leaves),
            GraphFamily::Complete { n } => Graph::complete(*n),
            GraphFamily::Cycle { n } => Graph::cycle(*n),
            GraphFamily::Explicit { vertex_count, edges } => Graph::from_edges(*vertex_count, edges)?,
        })
    }

    pub fn grid(&self) -> Result<Option<GridSpec>> {
        match self {
            GraphFamily::Grid { dims } => Ok(Some(GridSpec::new(dims.clone())?)),
            _ => Ok(None),
        }
    }

    /// `(d, n)` for an n x ... x n grid.
    pub fn cube(&self) -> Option<(u32, u64)> {
        match self {
            GraphFamily::Grid { dims } if !dims.is_empty() && dims.iter().all(|&x| x == dims[0]) => {
                Some((dims.len() as u32, dims[0] as u64))
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphFamily::Grid { dims } => {
                let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
                write!(f, "grid:{}", d.join("x"))
            }
            GraphFamily::Path { n } => write!(f, "path:{n}"),
            GraphFamily::Tree { n } => write!(f, "tree:{n}"),
            GraphFamily::Star { leaves } => write!(f, "star:{leaves}"),
            GraphFamily::Complete { n } => write!(f, "complete:{n}"),
            GraphFamily::Cycle { n } => write!(f, "cycle:{n}"),
            GraphFamily::Explicit { vertex_count, edges } => write!(f, "explicit:{vertex_count}v{}e", edges.len()),
        }
    }
}

/// `grid:4x4`, `path:8`, `tree:15`, `star:3`, `complete:4`, `cycle:5`.
impl FromStr for GraphFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad graph {s:?}; expected e.g. grid:4x4 or path:8"));
        let (family, arg) = s.split_once(':').ok_or_else(bad)?;
        if family == "grid" {
            let dims = arg.split('x').map(|d| d.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            return Ok(GraphFamily::Grid { dims });
        }
        let n: usize = arg.parse().map_err(|_| bad())?;
        Ok(match family {
            "path" => GraphFamily::Path { n },
            "tree" => GraphFamily::Tree { n },
            "star" => GraphFamily::Star { leaves: n },
            "complete" => GraphFamily::Complete { n },
            "cycle" => GraphFamily::Cycle { n },
            _ => return Err(bad()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearcherName {
    Bisection,
    Separator,
    Tree,
    FollowPath,
}

impl FromStr for SearcherName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| Error::Parse(format!("unknown searcher {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    SeededRandom,
    Adversary,
    Exhaustive,
}

impl FromStr for OracleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| Error::Parse(format!("unknown oracle {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub graph: GraphFamily,
    pub setting: Setting,
    pub kind: QueryKind,
    pub searcher: SearcherName,
    pub oracle: OracleMode,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub source: Vertex,
}

fn one() -> usize {
    1
}

impl Scenario {
    pub fn validate(&self) -> Result<Graph> {
        let graph = self.graph.build()?;
        graph.check_vertex(self.source)?;
        let unsupported = |why: &str| Err(Error::Unsupported(format!("scenario {}: {why}", self.id)));
        match self.searcher {
            SearcherName::Bisection if self.graph.grid()?.is_none() => return unsupported("bisection needs a grid"),
            SearcherName::Tree if !graph.is_tree() => return unsupported("tree search needs a tree"),
            SearcherName::Separator if self.graph.grid()?.is_none() && !graph.is_tree() && graph.vertex_count() > EXACT_CAP => {
                return unsupported("no separator provider for this graph size")
            }
            _ => {}
        }
        match self.oracle {
            OracleMode::Adversary if self.setting != Setting::S2 || self.kind != QueryKind::B => {
                unsupported("the adversary answers Setting 2 / Query B only")
            }
            OracleMode::SeededRandom if self.seed.is_none() => unsupported("seeded-random needs a seed"),
            OracleMode::SeededRandom if self.repetitions == 0 => unsupported("zero repetitions"),
            _ => Ok(graph),
        }
    }

    pub fn from_json(text: &str) -> Result<Vec<Scenario>> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let list = if v.is_array() { v } else { serde_json::Value::Array(vec![v]) };
        serde_json::from_value(list).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    /// `seed:<n>`, `enum:<i>` or `adversary`.
    pub instance: String,
    pub vertex_count: usize,
    pub truth: Option<Vertex>,
    pub endpoint: Vertex,
    pub queries_used: usize,
    pub extra_queries: usize,
    pub upper_bound: Option<String>,
    pub corrected_upper_bound: Option<String>,
    pub lower_bound: Option<String>,
    pub correct: bool,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

impl RunRecord {
    pub fn passed(&self) -> bool {
        self.correct && self.upper_ok && self.lower_ok
    }

    /// Flags recomputed from the stored numbers.
    pub fn recomputed_flags(&self) -> Result<(bool, bool)> {
        let q = Rational64::from_integer(self.queries_used as i64);
        let parse = |s: &Option<String>| -> Result<Option<Rational64>> {
            s.as_deref().map(|t| Rational64::from_str(t).map_err(|_| Error::Parse(format!("bad bound {t}")))).transpose()
        };
        let upper = parse(&self.upper_bound)?.is_none_or(|u| q <= u);
        let lower = parse(&self.lower_bound)?.is_none_or(|l| q >= l);
        Ok((upper, lower))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bounds {
    pub upper: Option<Rational64>,
    pub corrected_upper: Option<Rational64>,
    pub lower: Option<Rational64>,
}

/// Bounds that apply to `scenario`.
pub fn scenario_bounds(scenario: &Scenario, graph: &Graph) -> Result<Bounds> {
    let mut b = Bounds::default();
    let n = graph.vertex_count();
    match (scenario.searcher, scenario.graph.cube(), graph.is_tree()) {
        (SearcherName::Bisection | SearcherName::Separator, Some((d, side)), _) if d >= 2 => {
            b.upper = Some(bisection_upper_bound(d, side));
            b.corrected_upper = bisection_upper_bound_corrected(d, side);
        }
        (SearcherName::Separator | SearcherName::Tree, _, true) => {
            b.upper = Some(Rational64::from_integer(log2_bound(n) as i64));
        }
        _ => {}
    }
    if scenario.oracle == OracleMode::Adversary {
        let cap = if scenario.graph.grid()?.is_some() { EXACT_GRID_CAP } else { EXACT_CAP };
        b.lower = Some(if graph.is_tree() {
            Rational64::from_integer(tree_half_separator(n) as i64)
        } else if n <= cap {
            Rational64::from_integer(min_alpha_separator_exact_capped(graph, Rational64::new(1, 2), cap)?.cut.len() as i64)
        } else if let Some((d, side)) = scenario.graph.cube() {
            grid_separator_lower_bound(d, side, Rational64::new(1, 2))?
        } else {
            return Err(Error::SizeCap { size: n, cap });
        });
    }
    Ok(b)
}

/// s_{1/2} of any tree on `n` vertices: a centroid, or the sentinel below three vertices.
pub fn tree_half_separator(n: usize) -> usize {
    usize::from(n >= 2)
}

/// Half-separator size used as the adversary lower bound on small graphs.
pub fn half_separator_size(graph: &Graph) -> Result<usize> {
    Ok(min_alpha_separator_exact(graph, Rational64::new(1, 2))?.cut.len())
}

pub fn run_searcher(scenario: &Scenario, graph: &Graph, oracle: &mut dyn Oracle) -> Result<SearchResult> {
    match scenario.searcher {
        SearcherName::Bisection => {
            let spec = scenario.graph.grid()?.ok_or_else(|| Error::Unsupported("bisection needs a grid".into()))?;
            grid_bisection_search(&spec, graph, oracle)
        }
        SearcherName::Tree => tree_search(graph, oracle),
        SearcherName::FollowPath => follow_path(graph, oracle),
        SearcherName::Separator => {
            let mut provider: Box<dyn SeparatorProvider> = match scenario.graph.grid()? {
                Some(spec) => Box::new(HyperplaneProvider::new(spec)),
                None if graph.is_tree() => Box::new(CentroidProvider),
                None => Box::new(ExactProvider::new(Rational64::new(1, 2))),
            };
            separator_search(graph, oracle, provider.as_mut())
        }
    }
}

/// One record together with the search it came from.
#[derive(Clone, Debug)]
pub struct Run {
    pub record: RunRecord,
    pub result: SearchResult,
}

fn make_record(scenario: &Scenario, tag: String, truth: Option<Vertex>, correct: bool, bounds: &Bounds, result: &SearchResult, n: usize) -> RunRecord {
    let q = Rational64::from_integer(result.queries_used as i64);
    RunRecord {
        scenario: scenario.id.clone(),
        instance: tag,
        vertex_count: n,
        truth,
        endpoint: result.endpoint,
        queries_used: result.queries_used,
        extra_queries: result.extra_queries,
        upper_bound: bounds.upper.map(|r| r.to_string()),
        corrected_upper_bound: bounds.corrected_upper.map(|r| r.to_string()),
        lower_bound: bounds.lower.map(|r| r.to_string()),
        correct,
        upper_ok: bounds.upper.is_none_or(|u| q <= u),
        lower_ok: bounds.lower.is_none_or(|l| q >= l),
    }
}

fn instance_for(scenario: &Scenario, graph: &Graph, seed: u64) -> Result<Instance> {
    match scenario.setting {
        Setting::S2 => gen_setting2(graph, scenario.source, PathControl::Seed(seed)),
        Setting::S1 => random_setting1(graph, scenario.source, seed),
    }
}

fn truthful_run(scenario: &Scenario, graph: &Graph, bounds: &Bounds, tag: String, inst: &Instance) -> Result<Run> {
    let mut oracle = TruthfulOracle::new(inst.clone(), scenario.kind);
    let result = run_searcher(scenario, graph, &mut oracle)?;
    let t = inst.endpoint();
    let record = make_record(scenario, tag, Some(t), result.endpoint == t, bounds, &result, graph.vertex_count());
    Ok(Run { record, result })
}

/// Runs every repetition of `scenario`; output order is deterministic.
pub fn run_detailed(scenario: &Scenario) -> Result<Vec<Run>> {
    let graph = scenario.validate()?;
    let bounds = scenario_bounds(scenario, &graph)?;
    match scenario.oracle {
        OracleMode::SeededRandom => {
            let base = scenario.seed.expect("validated");
            (0..scenario.repetitions as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = base.wrapping_add(i);
                    let inst = instance_for(scenario, &graph, seed)?;
                    truthful_run(scenario, &graph, &bounds, format!("seed:{seed}"), &inst)
                })
                .collect()
        }
        OracleMode::Exhaustive => {
            let all = enumerate_instances(&graph, scenario.source, scenario.setting)?;
            all.par_iter().enumerate().map(|(i, inst)| truthful_run(scenario, &graph, &bounds, format!("enum:{i}"), inst)).collect()
        }
        OracleMode::Adversary => {
            let (result, correct) = if graph.vertex_count() <= EXACT_ADVERSARY_CAP {
                let mut adv = ExactAdversary::new(&graph, scenario.source)?;
                let result = run_searcher(scenario, &graph, &mut adv)?;
                (result.clone(), adv.state().candidates == [result.endpoint])
            } else {
                let mut adv = ComponentAdversary::new(&graph, scenario.source)?;
                let result = run_searcher(scenario, &graph, &mut adv)?;
                (result.clone(), adv.state().candidates == [result.endpoint])
            };
            let record = make_record(scenario, "adversary".into(), None, correct, &bounds, &result, graph.vertex_count());
            Ok(vec![Run { record, result }])
        }
    }
}

pub fn run(scenario: &Scenario) -> Result<Vec<RunRecord>> {
    Ok(run_detailed(scenario)?.into_iter().map(|r| r.record).collect())
}

pub fn run_all(scenarios: &[Scenario]) -> Result<Vec<RunRecord>> {
    let mut out = Vec::new();
    for s in scenarios {
        out.extend(run(s)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub runs: usize,
    pub min: usize,
    pub max: usize,
    pub mean: String,
    pub upper_bound: Option<String>,
    pub corrected_upper_bound: Option<String>,
    pub lower_bound: Option<String>,
    pub violations: usize,
}

/// Per-scenario summary, in order of first appearance.
pub fn report(records: &[RunRecord]) -> Vec<ReportRow> {
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        if !order.contains(&r.scenario.as_str()) {
            order.push(&r.scenario);
        }
    }
    order
        .into_iter()
        .map(|id| {
            let rs: Vec<&RunRecord> = records.iter().filter(|r| r.scenario == id).collect();
            let qs: Vec<usize> = rs.iter().map(|r| r.queries_used).collect();
            ReportRow {
                scenario: id.to_string(),
                runs: rs.len(),
                min: *qs.iter().min().expect("nonempty"),
                max: *qs.iter().max().expect("nonempty"),
                mean: format!("{:.3}", qs.iter().sum::<usize>() as f64 / qs.len() as f64),
                upper_bound: rs[0].upper_bound.clone(),
                corrected_upper_bound: rs[0].corrected_upper_bound.clone(),
                lower_bound: rs[0].lower_bound.clone(),
                violations: rs.iter().filter(|r| !r.passed()).count(),
            }
        })
        .collect()
}

/// Records whose stored flags disagree with the stored numbers, or that fail.
pub fn violations(records: &[RunRecord]) -> Result<Vec<&RunRecord>> {
    let mut out = Vec::new();
    for r in records {
        let (u, l) = r.recomputed_flags()?;
        if (u, l) != (r.upper_ok, r.lower_ok) || !r.passed() {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(true).from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_records<R: std::io::Read>(r: R) -> Result<Vec<RunRecord>> {
    csv::Reader::from_reader(r).deserialize().map(|x| x.map_err(|e| Error::Parse(e.to_string()))).collect()
}

fn scenario(id: String, graph: GraphFamily, setting: Setting, kind: QueryKind, searcher: SearcherName, oracle: OracleMode, reps: usize) -> Scenario {
    Scenario { id, graph, setting, kind, searcher, oracle, repetitions: reps, seed: Some(1), source: 0 }
}

/// The suite run by `hpath verify`.
pub fn default_suite() -> Vec<Scenario> {
    let mut out = Vec::new();
    for dims in [vec![4, 4], vec![8, 8], vec![16, 16], vec![4, 4, 4]] {
        let tag = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x");
        for setting in [Setting::S1, Setting::S2] {
            for kind in [QueryKind::A, QueryKind::B] {
                out.push(scenario(
                    format!("bisection-{tag}-{setting}-{kind}"),
                    GraphFamily::Grid { dims: dims.clone() },
                    setting,
                    kind,
                    SearcherName::Bisection,
                    OracleMode::SeededRandom,
                    20,
                ));
            }
        }
        out.push(scenario(
            format!("bisection-{tag}-adversary"),
            GraphFamily::Grid { dims },
            Setting::S2,
            QueryKind::B,
            SearcherName::Bisection,
            OracleMode::Adversary,
            1,
        ));
    }
    for n in [8, 16, 33] {
        out.push(scenario(format!("separator-path{n}"), GraphFamily::Path { n }, Setting::S2, QueryKind::B, SearcherName::Separator, OracleMode::SeededRandom, 20));
        out.push(scenario(format!("tree-path{n}-adversary"), GraphFamily::Path { n }, Setting::S2, QueryKind::B, SearcherName::Tree, OracleMode::Adversary, 1));
    }
    out.push(scenario("tree-binary31".into(), GraphFamily::Tree { n: 31 }, Setting::S2, QueryKind::B, SearcherName::Tree, OracleMode::SeededRandom, 20));
    out.push(scenario("separator-3x3-exhaustive".into(), GraphFamily::Grid { dims: vec![3, 3] }, Setting::S2, QueryKind::B, SearcherName::Separator, OracleMode::Exhaustive, 1));
    out
}
