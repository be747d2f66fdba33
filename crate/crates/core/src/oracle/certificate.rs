//! End-of-game check that the asked set is a 1/2-separator.

use serde::{Deserialize, Serialize};

use super::adversary::CutRow;
use super::lemma::greedy_exact_subset;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub vertex_count: usize,
    pub asked: usize,
    pub is_half_separator: bool,
    /// `|C| >= |V| - 1`.
    pub near_complete: bool,
    /// Sizes of the components of `G - C`, descending.
    pub component_sizes: Vec<usize>,
    /// Two sides of size at most `|V|/2` each, when the components can be grouped so.
    pub sides: Option<(usize, usize)>,
    /// Whether the recorded rows satisfy the lemma and its greedy grouping hits `ceil(N/2)`.
    pub lemma_grouping: bool,
}

/// Verifies that `asked` is a 1/2-separator of `graph` (or has size at least `|V| - 1`)
/// and that `endpoint` is isolated from every other unasked vertex.
pub fn separator_certificate(graph: &Graph, asked: &[Vertex], endpoint: Vertex, rows: &[CutRow]) -> Result<Certificate> {
    let n = graph.vertex_count();
    let mut removed = vec![false; n];
    for &v in asked {
        graph.check_vertex(v)?;
        removed[v] = true;
    }
    let count = removed.iter().filter(|&&b| b).count();
    let comps = graph.components(&removed);
    if let Some(c) = comps.label[endpoint] {
        if comps.members[c].len() > 1 {
            return Err(Error::Certificate(format!(
                "endpoint {endpoint} shares a component of size {} with unasked vertices",
                comps.members[c].len()
            )));
        }
    }
    let mut sizes: Vec<usize> = comps.members.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let is_half = sizes.iter().all(|&s| 2 * s <= n);
    let near_complete = count + 1 >= n;
    if !is_half && !near_complete {
        return Err(Error::Certificate(format!(
            "{count} asked vertices leave a component of size {} out of {n}",
            sizes[0]
        )));
    }
    let sides = first_fit_sides(&sizes, n);
    let row_values: Vec<Vec<u64>> = rows.iter().map(CutRow::row).collect();
    let total: u64 = rows
        .iter()
        .map(|r| r.pieces.iter().sum::<usize>() as u64)
        .sum::<u64>()
        + 1;
    let lemma_grouping = !rows.is_empty() && greedy_exact_subset(&row_values, total.div_ceil(2)).is_ok();
    Ok(Certificate {
        vertex_count: n,
        asked: count,
        is_half_separator: is_half,
        near_complete,
        component_sizes: sizes,
        sides,
        lemma_grouping,
    })
}

/// Greedy split of component sizes into two sides of at most `n/2` each.
fn first_fit_sides(sizes: &[usize], n: usize) -> Option<(usize, usize)> {
    let (mut a, mut b) = (0, 0);
    for &s in sizes {
        if 2 * (a + s) <= n {
            a += s;
        } else if 2 * (b + s) <= n {
            b += s;
        } else {
            return None;
        }
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_middle_cut() {
        let g = Graph::path(8);
        let c = separator_certificate(&g, &[3, 4], 3, &[]).unwrap();
        assert!(c.is_half_separator);
        assert_eq!(c.component_sizes, vec![3, 3]);
        assert_eq!(c.sides, Some((3, 3)));
    }

    #[test]
    fn complete_graph_fallback() {
        let g = Graph::complete(4);
        let c = separator_certificate(&g, &[1, 2, 3], 0, &[]).unwrap();
        assert!(c.near_complete);
    }

    #[test]
    fn failures() {
        let g = Graph::path(8);
        assert!(separator_certificate(&g, &[0], 0, &[]).is_err());
        // endpoint not isolated
        assert!(separator_certificate(&g, &[4], 1, &[]).is_err());
    }
}
