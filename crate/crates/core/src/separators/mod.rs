//! Vertex separators: hyperplanes in grids, tree centroids, and exact minimum separators.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::grid::{GridBox, GridSpec};

mod exact;
mod provider;

pub use exact::{is_alpha_separator, min_alpha_separator_exact, min_alpha_separator_exact_capped, EXACT_CAP, EXACT_GRID_CAP};
pub use provider::{CentroidProvider, ExactProvider, HyperplaneProvider, SeparatorProvider};

/// A cut `C` and the components of the region with `C` removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorResult {
    pub cut: Vec<Vertex>,
    pub parts: Vec<Vec<Vertex>>,
    /// Largest part over region size.
    pub alpha_achieved: Rational64,
    /// No separator exists; the cut is all vertices but one.
    #[serde(default)]
    pub sentinel: bool,
}

impl SeparatorResult {
    /// Parts of `graph[region] - cut`. `region` and `cut` are ids of `graph`.
    pub fn within(graph: &Graph, region: &[Vertex], cut: &[Vertex]) -> Self {
        let mut inside = vec![false; graph.vertex_count()];
        for &v in region {
            inside[v] = true;
        }
        for &v in cut {
            inside[v] = false;
        }
        let parts = graph.components_within(&inside).members;
        let largest = parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut cut = cut.to_vec();
        cut.sort_unstable();
        SeparatorResult {
            cut,
            parts,
            alpha_achieved: Rational64::new(largest as i64, region.len().max(1) as i64),
            sentinel: false,
        }
    }

    pub fn of_graph(graph: &Graph, cut: &[Vertex]) -> Self {
        let all: Vec<Vertex> = (0..graph.vertex_count()).collect();
        Self::within(graph, &all, cut)
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }
}

/// Lower-median slice of `region` orthogonal to `axis`.
pub fn hyperplane_separator(spec: &GridSpec, region: &GridBox, axis: usize) -> Result<SeparatorResult> {
    if axis >= spec.dimension() || region.lo.len() != spec.dimension() {
        return Err(Error::DegenerateRegion(format!("axis {axis} outside a {}-dimensional grid", spec.dimension())));
    }
    let len = region.len[axis];
    if len < 2 {
        return Err(Error::DegenerateRegion(format!("extent {len} along axis {axis}")));
    }
    let graph = spec.build();
    let vertices = region.vertices(spec);
    let p = region.lo[axis] + (len - 1) / 2;
    let cut: Vec<Vertex> = vertices.iter().copied().filter(|&v| spec.coord(v, axis) == p).collect();
    Ok(SeparatorResult::within(&graph, &vertices, &cut))
}

/// Slice of an arbitrary vertex set at the smallest coordinate `p` along `axis`
/// with at least half of the set at coordinates `<= p`.
pub fn median_slice(spec: &GridSpec, region: &[Vertex], axis: usize) -> Vec<Vertex> {
    let bbox = GridBox::bounding(spec, region);
    let mut counts = vec![0usize; bbox.len[axis]];
    for &v in region {
        counts[spec.coord(v, axis) - bbox.lo[axis]] += 1;
    }
    let mut acc = 0;
    let mut p = bbox.lo[axis];
    for (i, c) in counts.iter().enumerate() {
        acc += c;
        if 2 * acc >= region.len() {
            p = bbox.lo[axis] + i;
            break;
        }
    }
    region.iter().copied().filter(|&v| spec.coord(v, axis) == p).collect()
}

/// Single-vertex 1/2-separator of a tree: its lowest-id centroid.
pub fn centroid_separator(tree: &Graph) -> Result<SeparatorResult> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let all: Vec<Vertex> = (0..tree.vertex_count()).collect();
    let c = centroid(tree, &all);
    Ok(SeparatorResult::within(tree, &all, &[c]))
}

/// Lowest-id vertex minimizing the largest component of `graph[region] - v`.
/// `region` must induce a tree.
pub(crate) fn centroid(graph: &Graph, region: &[Vertex]) -> Vertex {
    let n = graph.vertex_count();
    let mut inside = vec![false; n];
    for &v in region {
        inside[v] = true;
    }
    let root = region[0];
    // iterative DFS order, then subtree sizes bottom-up
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(region.len());
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in graph.neighbors(u) {
            if inside[w] && parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let total = order.len();
    let mut size = vec![1usize; n];
    for &u in order.iter().rev() {
        if u != root {
            size[parent[u]] += size[u];
        }
    }
    let worst = |v: Vertex| {
        let mut m = total - size[v];
        for &w in graph.neighbors(v) {
            if inside[w] && parent[w] == v {
                m = m.max(size[w]);
            }
        }
        m
    };
    let mut sorted = region.to_vec();
    sorted.sort_unstable();
    sorted.into_iter().min_by_key(|&v| worst(v)).expect("nonempty region")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplane_examples() {
        let spec = GridSpec::cube(2, 8).unwrap();
        let r = hyperplane_separator(&spec, &spec.full_box(), 0).unwrap();
        assert_eq!(r.cut.len(), 8);
        assert!(r.cut.iter().all(|&v| spec.coord(v, 0) == 3));
        assert_eq!(r.part_sizes(), vec![24, 32]);

        let line = GridSpec::new(vec![1, 5]).unwrap();
        let r = hyperplane_separator(&line, &line.full_box(), 1).unwrap();
        assert_eq!(r.cut, vec![2]);
        assert_eq!(r.part_sizes(), vec![2, 2]);

        let cube = GridSpec::cube(3, 4).unwrap();
        let r = hyperplane_separator(&cube, &cube.full_box(), 2).unwrap();
        assert_eq!(r.cut.len(), 16);
        assert_eq!(r.part_sizes(), vec![16, 32]);
        assert!(r.alpha_achieved <= Rational64::new(1, 2));

        assert!(matches!(
            hyperplane_separator(&line, &line.full_box(), 0),
            Err(Error::DegenerateRegion(_))
        ));
    }

    #[test]
    fn median_slice_matches_box_slice() {
        let spec = GridSpec::new(vec![5, 6]).unwrap();
        let b = spec.full_box();
        for axis in 0..2 {
            let r = hyperplane_separator(&spec, &b, axis).unwrap();
            assert_eq!(median_slice(&spec, &b.vertices(&spec), axis), r.cut);
        }
    }

    #[test]
    fn centroid_examples() {
        let r = centroid_separator(&Graph::path(7)).unwrap();
        assert_eq!(r.cut, vec![3]);
        assert_eq!(r.part_sizes(), vec![3, 3]);
        let r = centroid_separator(&Graph::star(5)).unwrap();
        assert_eq!(r.cut, vec![0]);
        assert_eq!(r.parts.len(), 5);
        let r = centroid_separator(&Graph::path(8)).unwrap();
        assert_eq!(r.cut, vec![3]);
        assert_eq!(r.alpha_achieved, Rational64::new(1, 2));
        assert_eq!(centroid_separator(&Graph::cycle(4)), Err(Error::NotATree));
    }
}
