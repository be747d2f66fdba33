//! Minimum α-separators by iterative deepening over the cut size.

use num_rational::Rational64;
use rayon::prelude::*;

use super::SeparatorResult;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Default vertex cap for the exact solver.
pub const EXACT_CAP: usize = 20;
/// Cap used for grid hosts, whose separators are small.
pub const EXACT_GRID_CAP: usize = 25;

/// `G - cut` has at least two components and each has at most `alpha * |V|` vertices.
pub fn is_alpha_separator(graph: &Graph, cut: &[Vertex], alpha: Rational64) -> bool {
    let mut removed = vec![false; graph.vertex_count()];
    for &v in cut {
        removed[v] = true;
    }
    separates(graph, &removed, alpha)
}

fn separates(graph: &Graph, removed: &[bool], alpha: Rational64) -> bool {
    let comps = graph.components(removed);
    let n = graph.vertex_count() as i64;
    comps.len() >= 2 && comps.members.iter().all(|m| Rational64::from_integer(m.len() as i64) <= alpha * n)
}

fn check_alpha(alpha: Rational64) -> Result<()> {
    if alpha <= Rational64::from_integer(0) || alpha > Rational64::from_integer(1) {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

pub fn min_alpha_separator_exact(graph: &Graph, alpha: Rational64) -> Result<SeparatorResult> {
    min_alpha_separator_exact_capped(graph, alpha, EXACT_CAP)
}

/// Smallest α-separator; among those of minimum size, the lexicographically
/// smallest. Without any separator, returns the sentinel cut `{1, .., n-1}`.
pub fn min_alpha_separator_exact_capped(graph: &Graph, alpha: Rational64, cap: usize) -> Result<SeparatorResult> {
    check_alpha(alpha)?;
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::SizeCap { size: n, cap });
    }
    for k in 0..n.saturating_sub(1) {
        if let Some(cut) = first_separator_of_size(graph, alpha, k) {
            return Ok(SeparatorResult::of_graph(graph, &cut));
        }
    }
    let cut: Vec<Vertex> = (1..n).collect();
    let mut r = SeparatorResult::of_graph(graph, &cut);
    r.sentinel = true;
    Ok(r)
}

fn first_separator_of_size(graph: &Graph, alpha: Rational64, k: usize) -> Option<Vec<Vertex>> {
    let n = graph.vertex_count();
    if k == 0 {
        return separates(graph, &vec![false; n], alpha).then(Vec::new);
    }
    (0..=n - k).into_par_iter().find_map_first(|first| {
        let mut cut = vec![first];
        let mut removed = vec![false; n];
        removed[first] = true;
        extend(graph, alpha, k, &mut cut, &mut removed).then_some(cut)
    })
}

/// Lexicographic depth-first completion of `cut` to size `k`.
fn extend(graph: &Graph, alpha: Rational64, k: usize, cut: &mut Vec<Vertex>, removed: &mut [bool]) -> bool {
    let n = graph.vertex_count();
    if cut.len() == k {
        return separates(graph, removed, alpha);
    }
    let start = cut.last().map_or(0, |&v| v + 1);
    let remaining = k - cut.len();
    for v in start..=n - remaining {
        cut.push(v);
        removed[v] = true;
        if extend(graph, alpha, k, cut, removed) {
            return true;
        }
        removed[v] = false;
        cut.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn half() -> Rational64 {
        Rational64::new(1, 2)
    }

    #[test]
    fn examples() {
        for n in 3..10 {
            let r = min_alpha_separator_exact(&Graph::path(n), half()).unwrap();
            assert_eq!(r.cut.len(), 1);
        }
        let k4 = min_alpha_separator_exact(&Graph::complete(4), half()).unwrap();
        assert!(k4.sentinel);
        assert_eq!(k4.cut.len(), 3);
        let g = GridSpec::cube(2, 3).unwrap().build();
        let r = min_alpha_separator_exact(&g, half()).unwrap();
        assert_eq!(r.cut.len(), 3);
        assert!(is_alpha_separator(&g, &r.cut, half()));
        assert!(matches!(
            min_alpha_separator_exact(&Graph::path(21), half()),
            Err(Error::SizeCap { .. })
        ));
        assert!(min_alpha_separator_exact(&Graph::path(3), Rational64::new(3, 2)).is_err());
    }

    fn brute_force(graph: &Graph, alpha: Rational64) -> usize {
        let n = graph.vertex_count();
        let mut best = n.saturating_sub(1);
        for mask in 0u32..(1 << n) {
            let cut: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if cut.len() < best && is_alpha_separator(graph, &cut, alpha) {
                best = cut.len();
            }
        }
        best
    }

    #[test]
    fn agrees_with_subset_enumeration() {
        let graphs = vec![
            Graph::path(9),
            Graph::cycle(10),
            Graph::star(6),
            Graph::complete(5),
            Graph::binary_tree(12),
            GridSpec::new(vec![3, 4]).unwrap().build(),
            GridSpec::new(vec![2, 2, 3]).unwrap().build(),
            Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4)]).unwrap(),
        ];
        for g in &graphs {
            for alpha in [half(), Rational64::new(2, 3)] {
                let r = min_alpha_separator_exact(g, alpha).unwrap();
                assert_eq!(r.cut.len(), brute_force(g, alpha), "{g:?} {alpha}");
            }
        }
    }
}
