//! Searchers: separator-driven search, grid bisection, tree search and path following.

use std::io::Write;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::grid::GridSpec;
use crate::oracle::{Oracle, Transcript};
use crate::separators::{CentroidProvider, HyperplaneProvider, SeparatorProvider};

mod locate;

pub use locate::{locate_component, locate_component_exact, Knowledge, Located};

/// One round of a separator search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub region_size: usize,
    pub cut: Vec<Vertex>,
    /// Extra vertices asked to settle an ambiguous localization.
    pub resolving: Vec<Vertex>,
    pub located_size: usize,
    pub identified: Option<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub endpoint: Vertex,
    pub queries_used: usize,
    /// Queries spent resolving Query-A ambiguity; included in `queries_used`.
    pub extra_queries: usize,
    pub rounds: usize,
    pub transcript: Transcript,
    pub trace: Vec<RoundTrace>,
}

impl SearchResult {
    pub fn write_trace_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.trace {
            writeln!(w, "{}", serde_json::to_string(r)?)?;
        }
        Ok(())
    }
}

/// Cumulative asked set and the current candidate region.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionState {
    pub asked: Vec<Vertex>,
    pub region: Vec<Vertex>,
    pub region_history: Vec<usize>,
}

fn ask(oracle: &mut dyn Oracle, know: &mut Knowledge, v: Vertex) -> Result<()> {
    let a = oracle.ask(v)?;
    know.record(v, a);
    Ok(())
}

/// Localizes, asking resolving queries while Query-A answers leave several parts open.
fn settle(graph: &Graph, oracle: &mut dyn Oracle, know: &mut Knowledge, resolving: &mut Vec<Vertex>) -> Result<Located> {
    loop {
        match know.locate(graph)? {
            Located::Ambiguous(parts) => {
                let v = know.resolving_query(graph).ok_or(Error::Ambiguous(parts.len()))?;
                ask(oracle, know, v)?;
                resolving.push(v);
            }
            done => return Ok(done),
        }
    }
}

/// Repeatedly separates the region holding the endpoint and asks the whole cut.
///
/// Localization always runs on the whole graph with the cumulative asked set.
pub fn separator_search(graph: &Graph, oracle: &mut dyn Oracle, provider: &mut dyn SeparatorProvider) -> Result<SearchResult> {
    let start = oracle.transcript().len();
    let alpha = provider.alpha();
    let mut know = Knowledge::new(graph.vertex_count(), oracle.setting(), oracle.kind(), oracle.source());
    for e in &oracle.transcript().entries {
        know.record(e.vertex, e.answer);
    }
    let mut trace = Vec::new();
    let mut extra = 0;
    let mut state = PartitionState::default();
    let mut cut: Vec<Vertex> = Vec::new();
    let mut region_size = graph.vertex_count();
    let endpoint = loop {
        let mut resolving = Vec::new();
        let located = settle(graph, oracle, &mut know, &mut resolving)?;
        extra += resolving.len();
        let (region, identified) = match located {
            Located::Identified(t) => (vec![t], Some(t)),
            Located::Component(p) => (p, None),
            Located::Ambiguous(_) => unreachable!("settled"),
        };
        trace.push(RoundTrace {
            round: trace.len(),
            region_size,
            cut: std::mem::take(&mut cut),
            resolving,
            located_size: region.len(),
            identified,
        });
        state.region_history.push(region.len());
        if let Some(t) = identified {
            break t;
        }
        region_size = region.len();
        cut = provider.separate(graph, &region)?;
        check_contract(graph, &region, &cut, alpha, provider.name())?;
        for &v in &cut {
            if !know.is_asked(v) {
                ask(oracle, &mut know, v)?;
            }
            if know.identified().is_some() {
                break;
            }
        }
        state.region = region;
    };
    state.asked = know.asked().to_vec();
    let transcript = oracle.transcript().clone();
    Ok(SearchResult {
        endpoint,
        queries_used: transcript.len() - start,
        extra_queries: extra,
        rounds: trace.len() - 1,
        transcript,
        trace,
    })
}

fn check_contract(graph: &Graph, region: &[Vertex], cut: &[Vertex], alpha: Rational64, name: &str) -> Result<()> {
    let mut inside = vec![false; graph.vertex_count()];
    for &v in region {
        inside[v] = true;
    }
    if cut.is_empty() || cut.iter().any(|&v| !inside[v]) {
        return Err(Error::ProviderContract(format!("{name}: cut is empty or leaves the region")));
    }
    for &v in cut {
        inside[v] = false;
    }
    let limit = alpha * region.len() as i64;
    let comps = graph.components_within(&inside);
    if let Some(big) = comps
        .members
        .iter()
        .find(|m| Rational64::from_integer(m.len() as i64) > limit)
    {
        return Err(Error::ProviderContract(format!(
            "{name}: part of size {} exceeds {limit} in a region of {}",
            big.len(),
            region.len()
        )));
    }
    Ok(())
}

/// Median-hyperplane bisection with axes cycling from the first.
pub fn grid_bisection_search(spec: &GridSpec, graph: &Graph, oracle: &mut dyn Oracle) -> Result<SearchResult> {
    separator_search(graph, oracle, &mut HyperplaneProvider::new(spec.clone()))
}

/// Centroid search on a tree.
pub fn tree_search(tree: &Graph, oracle: &mut dyn Oracle) -> Result<SearchResult> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    separator_search(tree, oracle, &mut CentroidProvider)
}

/// Asks the source, then each revealed successor, until the endpoint answers.
pub fn follow_path(graph: &Graph, oracle: &mut dyn Oracle) -> Result<SearchResult> {
    let start = oracle.transcript().len();
    let mut v = oracle.source();
    let mut know = Knowledge::new(graph.vertex_count(), oracle.setting(), oracle.kind(), v);
    let endpoint = loop {
        let a = oracle.ask(v)?;
        know.record(v, a);
        if a.is_endpoint(v, oracle.source()) {
            break v;
        }
        v = a
            .successor()
            .ok_or_else(|| Error::Inconsistent(format!("path vertex {v} has neither successor nor endpoint answer")))?;
    };
    let transcript = oracle.transcript().clone();
    Ok(SearchResult {
        endpoint,
        queries_used: transcript.len() - start,
        extra_queries: 0,
        rounds: transcript.len() - start,
        transcript,
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests;
