//! Instance generation for both settings and exhaustive enumeration for tiny graphs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::{validate_instance, Instance, Setting};

/// Default vertex cap for [`enumerate_instances`].
pub const ENUMERATION_CAP: usize = 12;

/// How a Setting-2 path is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathControl {
    /// Uniform random reachable endpoint, reached by a randomized depth-first walk.
    Seed(u64),
    /// Shortest path to the given endpoint.
    Target(Vertex),
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Setting-2 instance from `source`.
pub fn gen_setting2(graph: &Graph, source: Vertex, control: PathControl) -> Result<Instance> {
    graph.check_vertex(source)?;
    let n = graph.vertex_count();
    let path = match control {
        PathControl::Target(t) => {
            graph.check_vertex(t)?;
            graph
                .shortest_path(source, t, &vec![true; n])
                .ok_or_else(|| Error::NoInstance(format!("{t} is unreachable from {source}")))?
        }
        PathControl::Seed(seed) => {
            let mut rng = rng_for(seed);
            let reachable = graph.reachable(source, &vec![false; n]);
            let t = reachable[rng.gen_range(0..reachable.len())];
            random_dfs_path(graph, source, t, &mut rng).expect("target is reachable")
        }
    };
    Instance::from_path(n, &path)
}

/// Path from `from` to `to` on the stack of a depth-first search with shuffled neighbor order.
pub fn random_dfs_path<R: Rng>(graph: &Graph, from: Vertex, to: Vertex, rng: &mut R) -> Option<Vec<Vertex>> {
    let mut visited = vec![false; graph.vertex_count()];
    visited[from] = true;
    let shuffled = |v: Vertex, rng: &mut R| {
        let mut nb = graph.neighbors(v).to_vec();
        nb.shuffle(rng);
        nb
    };
    let mut stack = vec![(from, shuffled(from, rng), 0usize)];
    loop {
        let (v, nb, idx) = stack.last_mut()?;
        if *v == to {
            return Some(stack.iter().map(|f| f.0).collect());
        }
        if *idx == nb.len() {
            stack.pop();
            continue;
        }
        let w = nb[*idx];
        *idx += 1;
        if !visited[w] {
            visited[w] = true;
            let next = shuffled(w, rng);
            stack.push((w, next, 0));
        }
    }
}

/// Setting-1 instance whose path runs from `source` to `target`.
///
/// Out-slots of `V - {target}` are matched to in-slots of `V - {source}` along
/// edges of the graph. Any perfect matching is a path from `source` to `target`
/// plus directed cycles; cycles of length two are then repaired away by
/// re-augmenting with the offending arc forbidden.
pub fn gen_setting1(graph: &Graph, source: Vertex, target: Vertex, seed: u64) -> Result<Instance> {
    graph.check_vertex(source)?;
    graph.check_vertex(target)?;
    let n = graph.vertex_count();
    if n == 1 {
        return Instance::from_successors(Setting::S1, source, vec![None]);
    }
    let mut rng = rng_for(seed);
    for _attempt in 0..8 {
        let mut m = CoverMatching::new(graph, source, target, &mut rng);
        if !m.fill() {
            break;
        }
        if m.repair_two_cycles() {
            let inst = Instance::from_successors(Setting::S1, source, m.out.clone())?;
            debug_assert_eq!(validate_instance(graph, &inst), Ok(()));
            return Ok(inst);
        }
    }
    if n <= ENUMERATION_CAP {
        return enumerate_instances(graph, source, Setting::S1)?
            .into_iter()
            .find(|i| i.endpoint() == target)
            .ok_or_else(|| no_cover(source, target));
    }
    Err(no_cover(source, target))
}

fn no_cover(source: Vertex, target: Vertex) -> Error {
    Error::NoInstance(format!("no path-and-cycle cover from {source} to {target}"))
}

/// Random Setting-1 instance with a random endpoint; endpoints without a cover are skipped.
pub fn random_setting1(graph: &Graph, source: Vertex, seed: u64) -> Result<Instance> {
    let mut rng = rng_for(seed ^ 0x5eed_0001);
    let n = graph.vertex_count();
    for _ in 0..32 {
        let t = rng.gen_range(0..n);
        if t == source && n > 1 {
            continue;
        }
        match gen_setting1(graph, source, t, rng.gen()) {
            Ok(inst) => return Ok(inst),
            Err(Error::NoInstance(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoInstance(format!("no Setting-1 cover found from {source}")))
}

struct CoverMatching<'g> {
    graph: &'g Graph,
    source: Vertex,
    target: Vertex,
    order: Vec<Vertex>,
    nbrs: Vec<Vec<Vertex>>,
    out: Vec<Option<Vertex>>,
    inn: Vec<Option<Vertex>>,
    forbidden: HashSet<(Vertex, Vertex)>,
    stamp: Vec<u32>,
    round: u32,
}

impl<'g> CoverMatching<'g> {
    fn new<R: Rng>(graph: &'g Graph, source: Vertex, target: Vertex, rng: &mut R) -> Self {
        let n = graph.vertex_count();
        let mut order: Vec<Vertex> = (0..n).filter(|&u| u != target).collect();
        order.shuffle(rng);
        let nbrs = (0..n)
            .map(|u| {
                let mut nb: Vec<_> = graph.neighbors(u).iter().copied().filter(|&v| v != source).collect();
                nb.shuffle(rng);
                nb
            })
            .collect();
        CoverMatching {
            graph,
            source,
            target,
            order,
            nbrs,
            out: vec![None; n],
            inn: vec![None; n],
            forbidden: HashSet::new(),
            stamp: vec![0; n],
            round: 0,
        }
    }

    fn fill(&mut self) -> bool {
        let order = self.order.clone();
        order.into_iter().all(|u| self.augment_from(u))
    }

    fn augment_from(&mut self, u: Vertex) -> bool {
        self.round += 1;
        self.try_kuhn(u)
    }

    fn try_kuhn(&mut self, u: Vertex) -> bool {
        for i in 0..self.nbrs[u].len() {
            let v = self.nbrs[u][i];
            if self.stamp[v] == self.round || self.forbidden.contains(&(u, v)) {
                continue;
            }
            self.stamp[v] = self.round;
            let free = match self.inn[v] {
                None => true,
                Some(w) => self.try_kuhn(w),
            };
            if free {
                self.out[u] = Some(v);
                self.inn[v] = Some(u);
                return true;
            }
        }
        false
    }

    fn find_two_cycle(&self) -> Option<(Vertex, Vertex)> {
        (0..self.graph.vertex_count()).find_map(|u| {
            let v = self.out[u]?;
            (u < v && self.out[v] == Some(u)).then_some((u, v))
        })
    }

    fn repair_two_cycles(&mut self) -> bool {
        let budget = 4 * self.graph.vertex_count() + 16;
        for _ in 0..budget {
            let Some((u, v)) = self.find_two_cycle() else {
                return true;
            };
            if !self.reroute(u, v) && !self.reroute(v, u) {
                return false;
            }
        }
        self.find_two_cycle().is_none()
    }

    /// Drops arc `u -> v`, forbids it, and re-augments from `u`.
    fn reroute(&mut self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(u != self.target && v != self.source);
        let saved_out = self.out.clone();
        let saved_in = self.inn.clone();
        self.out[u] = None;
        self.inn[v] = None;
        self.forbidden.insert((u, v));
        if self.augment_from(u) {
            return true;
        }
        self.forbidden.remove(&(u, v));
        self.out = saved_out;
        self.inn = saved_in;
        false
    }
}

/// Every valid instance on `graph` from `source`, deduplicated, in a fixed order.
pub fn enumerate_instances(graph: &Graph, source: Vertex, setting: Setting) -> Result<Vec<Instance>> {
    enumerate_instances_capped(graph, source, setting, ENUMERATION_CAP)
}

pub fn enumerate_instances_capped(graph: &Graph, source: Vertex, setting: Setting, cap: usize) -> Result<Vec<Instance>> {
    graph.check_vertex(source)?;
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::SizeCap { size: n, cap });
    }
    let mut out = Vec::new();
    match setting {
        Setting::S2 => {
            let mut path = vec![source];
            let mut on = vec![false; n];
            on[source] = true;
            enumerate_paths(graph, &mut path, &mut on, &mut out);
        }
        Setting::S1 => {
            let mut succ = vec![None; n];
            let mut has_pred = vec![false; n];
            enumerate_covers(graph, source, 0, &mut succ, &mut has_pred, false, &mut out);
        }
    }
    Ok(out)
}

fn enumerate_paths(graph: &Graph, path: &mut Vec<Vertex>, on: &mut [bool], out: &mut Vec<Instance>) {
    out.push(Instance::from_path(graph.vertex_count(), path).expect("path vertices are in range"));
    let last = *path.last().expect("nonempty");
    for &w in graph.neighbors(last) {
        if !on[w] {
            on[w] = true;
            path.push(w);
            enumerate_paths(graph, path, on, out);
            path.pop();
            on[w] = false;
        }
    }
}

fn enumerate_covers(
    graph: &Graph,
    source: Vertex,
    v: Vertex,
    succ: &mut Vec<Option<Vertex>>,
    has_pred: &mut [bool],
    endpoint_used: bool,
    out: &mut Vec<Instance>,
) {
    let n = graph.vertex_count();
    if v > 0 {
        let prev = v - 1;
        let starved = |w: Vertex| w != source && !has_pred[w] && graph.neighbors(w).iter().all(|&u| u < v);
        if starved(prev) || graph.neighbors(prev).iter().any(|&w| starved(w)) {
            return;
        }
    }
    if v == n {
        if endpoint_used {
            out.push(Instance::from_successors(Setting::S1, source, succ.clone()).expect("in range"));
        }
        return;
    }
    if !endpoint_used {
        succ[v] = None;
        enumerate_covers(graph, source, v + 1, succ, has_pred, true, out);
    }
    for &w in graph.neighbors(v) {
        if w == source || has_pred[w] || (w < v && succ[w] == Some(v)) {
            continue;
        }
        has_pred[w] = true;
        succ[v] = Some(w);
        enumerate_covers(graph, source, v + 1, succ, has_pred, endpoint_used, out);
        has_pred[w] = false;
    }
    succ[v] = None;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn target_path_on_path_graph() {
        let g = Graph::path(8);
        let inst = gen_setting2(&g, 0, PathControl::Target(3)).unwrap();
        assert_eq!(inst.arcs(), vec![(0, 1), (1, 2), (2, 3)]);
        let zero = gen_setting2(&g, 0, PathControl::Target(0)).unwrap();
        assert!(zero.arcs().is_empty());
        assert_eq!(zero.endpoint(), 0);
    }

    #[test]
    fn unreachable_target_is_no_instance() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            gen_setting2(&g, 0, PathControl::Target(2)),
            Err(Error::NoInstance(_))
        ));
    }

    #[test]
    fn seeded_setting2_validates() {
        let g = GridSpec::cube(2, 3).unwrap().build();
        for seed in 0..50 {
            let inst = gen_setting2(&g, 0, PathControl::Seed(seed)).unwrap();
            assert_eq!(validate_instance(&g, &inst), Ok(()));
        }
    }

    #[test]
    fn setting1_on_small_grid_is_hamiltonian() {
        let spec = GridSpec::new(vec![2, 2]).unwrap();
        let g = spec.build();
        let t = spec.index(&[1, 0]);
        for seed in 0..10 {
            let inst = gen_setting1(&g, 0, t, seed).unwrap();
            assert_eq!(validate_instance(&g, &inst), Ok(()));
            assert_eq!(inst.path().len(), 4);
        }
    }

    #[test]
    fn setting1_on_path_graph() {
        let g = Graph::path(3);
        let inst = gen_setting1(&g, 0, 2, 0).unwrap();
        assert_eq!(inst.arcs(), vec![(0, 1), (1, 2)]);
        assert!(matches!(gen_setting1(&g, 0, 1, 0), Err(Error::NoInstance(_))));
    }

    #[test]
    fn setting1_on_3x3() {
        let spec = GridSpec::cube(2, 3).unwrap();
        let g = spec.build();
        // 5 vs 4 color classes: a cover must end on the majority color.
        let odd = spec.index(&[0, 1]);
        let all = enumerate_instances(&g, 0, Setting::S1).unwrap();
        assert!(all.iter().all(|i| i.endpoint() != odd));
        assert!(matches!(gen_setting1(&g, 0, odd, 4), Err(Error::NoInstance(_))));
        let even = spec.index(&[0, 2]);
        let inst = gen_setting1(&g, 0, even, 4).unwrap();
        assert_eq!(validate_instance(&g, &inst), Ok(()));
        assert_eq!(inst.endpoint(), even);
    }

    #[test]
    fn setting1_scales_to_large_grids() {
        let g = GridSpec::cube(2, 32).unwrap().build();
        for seed in 0..3 {
            let inst = random_setting1(&g, 0, seed).unwrap();
            assert_eq!(validate_instance(&g, &inst), Ok(()));
        }
    }

    #[test]
    fn enumeration_examples() {
        let p = Graph::path(4);
        let all = enumerate_instances(&p, 0, Setting::S2).unwrap();
        assert_eq!(all.len(), 4);
        let tri = Graph::complete(3);
        assert_eq!(enumerate_instances(&tri, 0, Setting::S2).unwrap().len(), 5);
        let single = Graph::path(1);
        let s1 = enumerate_instances(&single, 0, Setting::S1).unwrap();
        assert_eq!(s1.len(), 1);
        assert!(s1[0].arcs().is_empty());
        assert!(matches!(
            enumerate_instances(&Graph::path(13), 0, Setting::S2),
            Err(Error::SizeCap { .. })
        ));
    }
}
