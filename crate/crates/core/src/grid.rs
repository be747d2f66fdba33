//! Axis-aligned integer grids with row-major vertex ids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Grid with per-axis lengths `r_1 .. r_d`. Coordinates are 0-indexed; the first
/// axis is the most significant in the vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GridSpec {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl TryFrom<Vec<usize>> for GridSpec {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        GridSpec::new(dims)
    }
}

impl From<GridSpec> for Vec<usize> {
    fn from(g: GridSpec) -> Self {
        g.dims
    }
}

impl GridSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpec("empty dims list".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidSpec(format!("zero-length axis in {dims:?}")));
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(dims[i + 1])
                .ok_or_else(|| Error::InvalidSpec("grid too large".into()))?;
        }
        strides[0]
            .checked_mul(dims[0])
            .ok_or_else(|| Error::InvalidSpec("grid too large".into()))?;
        Ok(GridSpec { dims, strides })
    }

    /// The `d`-dimensional cube grid `G_d(n)`.
    pub fn cube(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.strides[0] * self.dims[0]
    }

    /// Number of edges, `sum_i (r_i - 1) * prod_{j != i} r_j`.
    pub fn edge_count(&self) -> usize {
        let n = self.vertex_count();
        self.dims.iter().map(|&r| (r - 1) * (n / r)).sum()
    }

    pub fn is_cube(&self) -> bool {
        self.dims.iter().all(|&r| r == self.dims[0])
    }

    pub fn index(&self, coords: &[usize]) -> Vertex {
        debug_assert_eq!(coords.len(), self.dims.len());
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn try_index(&self, coords: &[usize]) -> Result<Vertex> {
        if coords.len() != self.dims.len() || coords.iter().zip(&self.dims).any(|(c, r)| c >= r) {
            return Err(Error::InvalidSpec(format!(
                "coordinates {coords:?} outside grid {:?}",
                self.dims
            )));
        }
        Ok(self.index(coords))
    }

    pub fn coords(&self, v: Vertex) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.dims)
            .map(|(s, r)| (v / s) % r)
            .collect()
    }

    pub fn coord(&self, v: Vertex, axis: usize) -> usize {
        (v / self.strides[axis]) % self.dims[axis]
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Neighbor of `v` one step along `axis`, if inside the grid.
    pub fn step(&self, v: Vertex, axis: usize, forward: bool) -> Option<Vertex> {
        let c = self.coord(v, axis);
        if forward {
            (c + 1 < self.dims[axis]).then(|| v + self.strides[axis])
        } else {
            (c > 0).then(|| v - self.strides[axis])
        }
    }

    /// Axis along which `u` and `v` differ, if they are grid neighbors.
    pub fn edge_axis(&self, u: Vertex, v: Vertex) -> Option<(usize, bool)> {
        (0..self.dimension()).find_map(|axis| {
            if self.step(u, axis, true) == Some(v) {
                Some((axis, true))
            } else if self.step(u, axis, false) == Some(v) {
                Some((axis, false))
            } else {
                None
            }
        })
    }

    pub fn full_box(&self) -> GridBox {
        GridBox {
            lo: vec![0; self.dimension()],
            len: self.dims.clone(),
        }
    }

    pub fn build(&self) -> Graph {
        build_grid(self)
    }
}

/// Builds the grid graph: vertices adjacent iff their coordinates differ by one in one axis.
pub fn build_grid(spec: &GridSpec) -> Graph {
    let n = spec.vertex_count();
    let mut edges = Vec::with_capacity(spec.edge_count());
    for v in 0..n {
        for axis in 0..spec.dimension() {
            if let Some(w) = spec.step(v, axis, true) {
                edges.push((v, w));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("grid edges are valid")
}

/// Axis-aligned sub-box `lo[i] .. lo[i] + len[i]` of a grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridBox {
    pub lo: Vec<usize>,
    pub len: Vec<usize>,
}

impl GridBox {
    pub fn size(&self) -> usize {
        self.len.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len.contains(&0)
    }

    pub fn contains(&self, coords: &[usize]) -> bool {
        coords
            .iter()
            .zip(self.lo.iter().zip(&self.len))
            .all(|(&c, (&lo, &len))| c >= lo && c < lo + len)
    }

    /// Vertex ids inside the box, ascending.
    pub fn vertices(&self, spec: &GridSpec) -> Vec<Vertex> {
        if self.is_empty() {
            return Vec::new();
        }
        let d = self.lo.len();
        let mut out = Vec::with_capacity(self.size());
        let mut cur = self.lo.clone();
        loop {
            out.push(spec.index(&cur));
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                cur[axis] += 1;
                if cur[axis] < self.lo[axis] + self.len[axis] {
                    break;
                }
                cur[axis] = self.lo[axis];
            }
        }
    }

    /// Bounding box of a nonempty vertex set.
    pub fn bounding(spec: &GridSpec, vertices: &[Vertex]) -> GridBox {
        let d = spec.dimension();
        let mut lo = vec![usize::MAX; d];
        let mut hi = vec![0; d];
        for &v in vertices {
            for axis in 0..d {
                let c = spec.coord(v, axis);
                lo[axis] = lo[axis].min(c);
                hi[axis] = hi[axis].max(c);
            }
        }
        let len = lo.iter().zip(&hi).map(|(l, h)| h + 1 - l).collect();
        GridBox { lo, len }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts_match_examples() {
        for (dims, v, e) in [
            (vec![3, 3], 9, 12),
            (vec![2], 2, 1),
            (vec![4, 4, 4], 64, 144),
        ] {
            let spec = GridSpec::new(dims).unwrap();
            let g = build_grid(&spec);
            assert_eq!(g.vertex_count(), v);
            assert_eq!(g.edge_count(), e);
            assert_eq!(spec.edge_count(), e);
        }
    }

    #[test]
    fn empty_dims_rejected() {
        assert!(matches!(GridSpec::new(vec![]), Err(Error::InvalidSpec(_))));
        assert!(GridSpec::new(vec![3, 0]).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let spec = GridSpec::new(vec![2, 3, 4]).unwrap();
        for v in 0..spec.vertex_count() {
            assert_eq!(spec.index(&spec.coords(v)), v);
        }
        assert_eq!(spec.index(&[1, 0, 0]), 12);
        assert_eq!(spec.coords(5), vec![0, 1, 1]);
    }

    #[test]
    fn box_vertices() {
        let spec = GridSpec::new(vec![4, 4]).unwrap();
        let b = GridBox {
            lo: vec![1, 2],
            len: vec![2, 2],
        };
        assert_eq!(b.vertices(&spec), vec![6, 7, 10, 11]);
        assert_eq!(GridBox::bounding(&spec, &[6, 11]), b);
    }
}
