//! The 4x4 blowup `G^{4,4}`: each base vertex becomes a 4x4 block in the first
//! two axes, and a base Setting-2 path becomes a Setting-1 system ("good system")
//! whose path visits the same blocks in the same order.
//!
//! Local block coordinates `(a, b)` run over `0..4` in the first two axes.
//!
//! Canonical patterns:
//! - off-path block: the 16-cycle
//!   `(0,0) (1,0) (2,0) (3,0) (3,1) (3,2) (3,3) (2,3) (2,2) (2,1) (1,1) (1,2) (1,3) (0,3) (0,2) (0,1)`;
//! - on-path block: the straight side from `p1` to `p2`, and the remaining 4x3
//!   rectangle split into two 3x2 rectangles, each traversed by its boundary 6-cycle;
//! - last block: a boustrophedon from `p1`, first along the side `p1` shares with
//!   the lower `b` or `a` edge, then back.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::grid::GridSpec;
use crate::instance::{Instance, Setting};

mod reduction;

pub use reduction::{simulate_reduction, BaseOracle, ReductionOracle, ReductionResult};

/// A corner of a 4x4 block, by local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    /// (0, 0)
    LL,
    /// (0, 3)
    LH,
    /// (3, 0)
    HL,
    /// (3, 3)
    HH,
}

impl Corner {
    pub fn local(self) -> (usize, usize) {
        match self {
            Corner::LL => (0, 0),
            Corner::LH => (0, 3),
            Corner::HL => (3, 0),
            Corner::HH => (3, 3),
        }
    }

    pub fn from_local(a: usize, b: usize) -> Option<Corner> {
        match (a, b) {
            (0, 0) => Some(Corner::LL),
            (0, 3) => Some(Corner::LH),
            (3, 0) => Some(Corner::HL),
            (3, 3) => Some(Corner::HH),
            _ => None,
        }
    }

    /// Mirror image across the block side orthogonal to `axis` (0 or 1).
    pub fn mirror(self, axis: usize) -> Corner {
        let (a, b) = self.local();
        if axis == 0 {
            Corner::from_local(3 - a, b).expect("corner")
        } else {
            Corner::from_local(a, 3 - b).expect("corner")
        }
    }

    /// `LL` and `HH` form the even group.
    pub fn is_even_group(self) -> bool {
        matches!(self, Corner::LL | Corner::HH)
    }

    pub fn adjacent(self, other: Corner) -> bool {
        let (a, b) = self.local();
        let (c, d) = other.local();
        (a == c) != (b == d)
    }
}

const EVEN: [Corner; 2] = [Corner::LL, Corner::HH];
const ODD: [Corner; 2] = [Corner::LH, Corner::HL];

/// Dims of `G^{4,4}`.
pub fn blowup_spec(base: &GridSpec) -> Result<GridSpec> {
    if base.dimension() < 2 {
        return Err(Error::InvalidSpec("the blowup needs at least two axes".into()));
    }
    let mut dims = base.dims().to_vec();
    dims[0] *= 4;
    dims[1] *= 4;
    GridSpec::new(dims)
}

/// Correspondence between base vertices and blocks of the blown grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub base: GridSpec,
    pub blown: GridSpec,
}

impl BlockMap {
    pub fn new(base: &GridSpec) -> Result<Self> {
        Ok(BlockMap {
            base: base.clone(),
            blown: blowup_spec(base)?,
        })
    }

    /// Blown vertex at local `(a, b)` of the block of `v`.
    pub fn at(&self, v: Vertex, a: usize, b: usize) -> Vertex {
        let mut c = self.base.coords(v);
        c[0] = 4 * c[0] + a;
        c[1] = 4 * c[1] + b;
        self.blown.index(&c)
    }

    pub fn corner(&self, v: Vertex, c: Corner) -> Vertex {
        let (a, b) = c.local();
        self.at(v, a, b)
    }

    /// The 16 blown vertices of the block of `v`, ascending.
    pub fn block(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| self.at(v, a, b)).collect();
        out.sort_unstable();
        out
    }

    pub fn owner(&self, w: Vertex) -> Vertex {
        let mut c = self.blown.coords(w);
        c[0] /= 4;
        c[1] /= 4;
        self.base.index(&c)
    }

    pub fn local(&self, w: Vertex) -> (usize, usize) {
        (self.blown.coord(w, 0) % 4, self.blown.coord(w, 1) % 4)
    }

    /// Parity of the coordinates beyond the first two.
    pub fn parity_odd(&self, v: Vertex) -> bool {
        self.base.coords(v)[2..].iter().sum::<usize>() % 2 == 1
    }

    /// Corners that may be `p1` / `p2` in the block of `v`.
    pub fn groups(&self, v: Vertex) -> ([Corner; 2], [Corner; 2]) {
        if self.parity_odd(v) {
            (ODD, EVEN)
        } else {
            (EVEN, ODD)
        }
    }

    /// Entry corner of the source block.
    pub fn source_corner(&self, v: Vertex) -> Corner {
        if self.parity_odd(v) {
            Corner::LH
        } else {
            Corner::LL
        }
    }
}

/// A base move `u -> v` as (axis, forward).
pub type Move = (usize, bool);

/// Candidate entry and exit corners of the block of `v`, restricted by the
/// entering move (`u -> v`) and the leaving move (`v -> w`) when they run along
/// one of the first two axes.
pub fn corner_roles(map: &BlockMap, v: Vertex, entry: Option<Move>, exit: Option<Move>) -> Result<(Vec<Corner>, Vec<Corner>)> {
    let (g1, g2) = map.groups(v);
    let mut p1: Vec<Corner> = g1.to_vec();
    let mut p2: Vec<Corner> = g2.to_vec();
    if let Some((axis, forward)) = entry.filter(|m| m.0 < 2) {
        // arrive on the side facing the previous block
        let want = if forward { 0 } else { 3 };
        p1.retain(|c| side(*c, axis) == want);
    }
    if let Some((axis, forward)) = exit.filter(|m| m.0 < 2) {
        let want = if forward { 3 } else { 0 };
        p2.retain(|c| side(*c, axis) == want);
    }
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::Construction(format!("no corner left for block {v}")));
    }
    Ok((p1, p2))
}

fn side(c: Corner, axis: usize) -> usize {
    let (a, b) = c.local();
    if axis == 0 {
        a
    } else {
        b
    }
}

/// Arcs inside one block, as local successor pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockPattern {
    Cycle,
    Through { p1: Corner, p2: Corner },
    Last { p1: Corner },
}

type Local = (usize, usize);

const CYCLE16: [Local; 16] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
    (2, 3),
    (2, 2),
    (2, 1),
    (1, 1),
    (1, 2),
    (1, 3),
    (0, 3),
    (0, 2),
    (0, 1),
];

fn cycle_arcs(cycle: &[Local]) -> Vec<(Local, Local)> {
    (0..cycle.len()).map(|i| (cycle[i], cycle[(i + 1) % cycle.len()])).collect()
}

fn chain_arcs(chain: &[Local]) -> Vec<(Local, Local)> {
    chain.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Boundary 6-cycle of the 3x2 rectangle with `xs` (3 values) along `x_axis` and `ys` (2 values) along the other axis.
fn six_cycle(xs: [usize; 3], ys: [usize; 2], x_axis: usize) -> Vec<Local> {
    let pts = [
        (xs[0], ys[0]),
        (xs[1], ys[0]),
        (xs[2], ys[0]),
        (xs[2], ys[1]),
        (xs[1], ys[1]),
        (xs[0], ys[1]),
    ];
    pts.iter().map(|&(x, y)| if x_axis == 0 { (x, y) } else { (y, x) }).collect()
}

/// Straight run from `p1` to `p2`, in order.
fn straight(p1: Corner, p2: Corner) -> Vec<Local> {
    let (a1, b1) = p1.local();
    let (a2, b2) = p2.local();
    let step = |from: usize, to: usize| -> Vec<usize> {
        if from <= to {
            (from..=to).collect()
        } else {
            (to..=from).rev().collect()
        }
    };
    if a1 == a2 {
        step(b1, b2).into_iter().map(|b| (a1, b)).collect()
    } else {
        step(a1, a2).into_iter().map(|a| (a, b1)).collect()
    }
}

/// Snake over all 16 cells from `p1`, sweeping along `b` first.
fn snake(p1: Corner) -> Vec<Local> {
    let (a0, b0) = p1.local();
    let a_order: Vec<usize> = if a0 == 0 { (0..4).collect() } else { (0..4).rev().collect() };
    let b_fwd: Vec<usize> = if b0 == 0 { (0..4).collect() } else { (0..4).rev().collect() };
    let mut out = Vec::with_capacity(16);
    for (i, &a) in a_order.iter().enumerate() {
        let bs: Vec<usize> = if i % 2 == 0 { b_fwd.clone() } else { b_fwd.iter().rev().copied().collect() };
        out.extend(bs.into_iter().map(|b| (a, b)));
    }
    out
}

impl BlockPattern {
    pub fn arcs(self) -> Vec<(Local, Local)> {
        match self {
            BlockPattern::Cycle => cycle_arcs(&CYCLE16),
            BlockPattern::Last { p1 } => chain_arcs(&snake(p1)),
            BlockPattern::Through { p1, p2 } => {
                let line = straight(p1, p2);
                let mut arcs = chain_arcs(&line);
                // the line lies on a side; `fixed` is the axis constant along it
                let (a1, b1) = p1.local();
                let (a2, _) = p2.local();
                let (fixed_axis, fixed) = if a1 == a2 { (0, a1) } else { (1, b1) };
                let rest: Vec<usize> = (0..4).filter(|&x| x != fixed).collect();
                let xs = [rest[0], rest[1], rest[2]];
                for ys in [[0, 1], [2, 3]] {
                    arcs.extend(cycle_arcs(&six_cycle(xs, ys, fixed_axis)));
                }
                arcs
            }
        }
    }

    /// Local successor and predecessor tables.
    pub fn tables(self) -> ([[Option<Local>; 4]; 4], [[Option<Local>; 4]; 4]) {
        let mut succ = [[None; 4]; 4];
        let mut pred = [[None; 4]; 4];
        for ((a, b), (c, d)) in self.arcs() {
            succ[a][b] = Some((c, d));
            pred[c][d] = Some((a, b));
        }
        (succ, pred)
    }

    /// Last cell of the path inside the block.
    pub fn exit(self) -> Option<Local> {
        match self {
            BlockPattern::Cycle => None,
            BlockPattern::Through { p2, .. } => Some(p2.local()),
            BlockPattern::Last { p1 } => snake(p1).last().copied(),
        }
    }
}

/// Corner roles of one on-path block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerRoles {
    pub block: Vertex,
    pub p1: Corner,
    pub p2: Option<Corner>,
}

/// A Setting-1 system on the blown grid following a base path block by block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodSystem {
    pub base_dims: Vec<usize>,
    pub instance: Instance,
    pub block_order: Vec<Vertex>,
    pub corners: Vec<CornerRoles>,
}

/// Corner choices fixed in advance, by base vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pins {
    pub p1: std::collections::HashMap<Vertex, Corner>,
    pub p2: std::collections::HashMap<Vertex, Corner>,
}

pub fn build_good_system(base: &GridSpec, path: &Instance) -> Result<GoodSystem> {
    build_good_system_pinned(base, path, &Pins::default())
}

/// Good system for the base path of `path`, honoring pinned corners.
pub fn build_good_system_pinned(base: &GridSpec, path: &Instance, pins: &Pins) -> Result<GoodSystem> {
    let map = BlockMap::new(base)?;
    if path.vertex_count() != base.vertex_count() {
        return Err(Error::Construction("instance and base grid differ in size".into()));
    }
    let p = path.path();
    let mut corners = Vec::with_capacity(p.len());
    for (i, &v) in p.iter().enumerate() {
        let entry = i.checked_sub(1).map(|j| move_of(base, p[j], v)).transpose()?;
        let exit = p.get(i + 1).map(|&w| move_of(base, v, w)).transpose()?;
        let (c1, c2) = corner_roles(&map, v, entry, exit)?;
        let p1 = if i == 0 {
            let c = map.source_corner(v);
            if !c1.contains(&c) {
                return Err(Error::Construction(format!("source corner {c:?} not allowed in block {v}")));
            }
            c
        } else {
            // the previous block's exit fixes the entry across the connector
            let prev: &CornerRoles = &corners[i - 1];
            let prev_exit = prev.p2.expect("inner blocks have an exit");
            let c = match entry {
                Some((axis, _)) if axis < 2 => prev_exit.mirror(axis),
                _ => prev_exit,
            };
            if !c1.contains(&c) {
                return Err(Error::Construction(format!("entry {c:?} not allowed in block {v}")));
            }
            c
        };
        if let Some(&pinned) = pins.p1.get(&v) {
            if pinned != p1 {
                return Err(Error::Synthesis(format!("block {v}: pinned entry {pinned:?}, forced {p1:?}")));
            }
        }
        let p2 = if exit.is_some() {
            let next = p[i + 1];
            let pinned = pins.p2.get(&v).copied().or_else(|| {
                // a pinned entry of the next block fixes this exit
                pins.p1.get(&next).map(|&c| match exit {
                    Some((axis, _)) if axis < 2 => c.mirror(axis),
                    _ => c,
                })
            });
            let c = match pinned {
                Some(c) if c2.contains(&c) => c,
                Some(c) => return Err(Error::Synthesis(format!("block {v}: pinned exit {c:?} not in {c2:?}"))),
                None => *c2.iter().min().expect("nonempty"),
            };
            if !c.adjacent(p1) {
                return Err(Error::Construction(format!("block {v}: corners {p1:?} and {c:?} are not adjacent")));
            }
            Some(c)
        } else {
            None
        };
        corners.push(CornerRoles { block: v, p1, p2 });
    }
    let n = map.blown.vertex_count();
    let mut succ = vec![None; n];
    let mut on_path = vec![false; base.vertex_count()];
    for (i, cr) in corners.iter().enumerate() {
        on_path[cr.block] = true;
        let pattern = match cr.p2 {
            Some(p2) => BlockPattern::Through { p1: cr.p1, p2 },
            None => BlockPattern::Last { p1: cr.p1 },
        };
        fill(&map, cr.block, pattern, &mut succ);
        if let (Some(p2), Some(next)) = (cr.p2, corners.get(i + 1)) {
            succ[map.corner(cr.block, p2)] = Some(map.corner(next.block, next.p1));
        }
    }
    for v in (0..base.vertex_count()).filter(|&v| !on_path[v]) {
        fill(&map, v, BlockPattern::Cycle, &mut succ);
    }
    let source = map.corner(p[0], corners[0].p1);
    let instance = Instance::from_successors(Setting::S1, source, succ)?;
    let block_order = block_order(&map, &instance);
    Ok(GoodSystem {
        base_dims: base.dims().to_vec(),
        instance,
        block_order,
        corners,
    })
}

fn fill(map: &BlockMap, v: Vertex, pattern: BlockPattern, succ: &mut [Option<Vertex>]) {
    for ((a, b), (c, d)) in pattern.arcs() {
        succ[map.at(v, a, b)] = Some(map.at(v, c, d));
    }
}

/// Base move from `u` to its grid neighbor `v`.
pub fn move_of(base: &GridSpec, u: Vertex, v: Vertex) -> Result<Move> {
    base.edge_axis(u, v)
        .ok_or_else(|| Error::Construction(format!("{u} and {v} are not grid neighbors")))
}

/// Blocks visited by the path of a blown instance, consecutive repeats merged.
pub fn block_order(map: &BlockMap, inst: &Instance) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::new();
    for w in inst.path() {
        let o = map.owner(w);
        if out.last() != Some(&o) {
            out.push(o);
        }
    }
    out
}

/// Checks the good-system properties against the base path.
pub fn verify_good_system(base: &GridSpec, path: &Instance, sys: &GoodSystem) -> Result<()> {
    let map = BlockMap::new(base)?;
    let blown: Graph = map.blown.build();
    if let Err(v) = crate::instance::validate_instance(&blown, &sys.instance) {
        return Err(Error::Construction(format!("not a Setting-1 system: {:?}", v.first())));
    }
    if sys.block_order != path.path() || block_order(&map, &sys.instance) != path.path() {
        return Err(Error::Construction("block order differs from the base path".into()));
    }
    for cr in &sys.corners {
        let (g1, g2) = map.groups(cr.block);
        if !g1.contains(&cr.p1) || cr.p2.is_some_and(|c| !g2.contains(&c) || !c.adjacent(cr.p1)) {
            return Err(Error::Construction(format!("block {}: corner parity rule broken", cr.block)));
        }
    }
    Ok(())
}
