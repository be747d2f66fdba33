//! Per-region separator sources for the separator-driven searcher.

use num_rational::Rational64;

use super::{centroid, median_slice, min_alpha_separator_exact_capped, EXACT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::grid::{GridBox, GridSpec};

/// Supplies a cut inside a region such that every component of the region
/// minus the cut has at most `alpha` times the region's size.
pub trait SeparatorProvider {
    fn name(&self) -> &'static str;
    fn alpha(&self) -> Rational64;
    /// `region` is sorted and has at least two vertices; the returned cut is a nonempty subset of it.
    fn separate(&mut self, graph: &Graph, region: &[Vertex]) -> Result<Vec<Vertex>>;
}

/// Median hyperplanes on a cyclic axis schedule.
#[derive(Clone, Debug)]
pub struct HyperplaneProvider {
    spec: GridSpec,
    next_axis: usize,
}

impl HyperplaneProvider {
    pub fn new(spec: GridSpec) -> Self {
        HyperplaneProvider { spec, next_axis: 0 }
    }
}

impl SeparatorProvider for HyperplaneProvider {
    fn name(&self) -> &'static str {
        "hyperplane"
    }

    fn alpha(&self) -> Rational64 {
        Rational64::new(1, 2)
    }

    fn separate(&mut self, _graph: &Graph, region: &[Vertex]) -> Result<Vec<Vertex>> {
        let bbox = GridBox::bounding(&self.spec, region);
        let d = self.spec.dimension();
        let axis = (0..d)
            .map(|k| (self.next_axis + k) % d)
            .find(|&a| bbox.len[a] >= 2)
            .ok_or_else(|| Error::DegenerateRegion("region spans a single point".into()))?;
        self.next_axis = (axis + 1) % d;
        Ok(median_slice(&self.spec, region, axis))
    }
}

/// Centroid vertex of a tree region.
#[derive(Clone, Copy, Debug, Default)]
pub struct CentroidProvider;

impl SeparatorProvider for CentroidProvider {
    fn name(&self) -> &'static str {
        "centroid"
    }

    fn alpha(&self) -> Rational64 {
        Rational64::new(1, 2)
    }

    fn separate(&mut self, graph: &Graph, region: &[Vertex]) -> Result<Vec<Vertex>> {
        if !graph.induced(region).is_tree() {
            return Err(Error::NotATree);
        }
        Ok(vec![centroid(graph, region)])
    }
}

/// Minimum α-separator of the induced region.
#[derive(Clone, Copy, Debug)]
pub struct ExactProvider {
    pub alpha: Rational64,
    pub cap: usize,
}

impl ExactProvider {
    pub fn new(alpha: Rational64) -> Self {
        ExactProvider { alpha, cap: EXACT_CAP }
    }
}

impl SeparatorProvider for ExactProvider {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn alpha(&self) -> Rational64 {
        self.alpha
    }

    fn separate(&mut self, graph: &Graph, region: &[Vertex]) -> Result<Vec<Vertex>> {
        let sub = graph.induced(region);
        let r = min_alpha_separator_exact_capped(&sub, self.alpha, self.cap)?;
        Ok(r.cut.iter().map(|&i| region[i]).collect())
    }
}
