//! Greedy exact-subset selection over cut-size rows.

use crate::error::{Error, Result};

/// Checks the rows and returns `N`, the sum of all row prefixes plus the final 1.
///
/// Rows must have at least two entries, be sorted, positive, and end with a
/// last row whose last entry is 1. Every non-final entry of row `i` is bounded
/// by the sum of the prefixes of later rows plus 1.
pub fn lemma_hypotheses(rows: &[Vec<u64>]) -> Result<u64> {
    let last = rows.last().ok_or_else(|| Error::Hypothesis("no rows".into()))?;
    if last.last() != Some(&1) {
        return Err(Error::Hypothesis("last entry of the last row must be 1".into()));
    }
    let mut suffix = 1u64;
    for (i, row) in rows.iter().enumerate().rev() {
        if row.len() < 2 {
            return Err(Error::Hypothesis(format!("row {i} has fewer than two entries")));
        }
        if row.contains(&0) {
            return Err(Error::Hypothesis(format!("row {i} has a zero entry")));
        }
        if row.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Hypothesis(format!("row {i} is not sorted")));
        }
        let head = &row[..row.len() - 1];
        if let Some(x) = head.iter().find(|&&x| x > suffix) {
            return Err(Error::Hypothesis(format!("row {i} entry {x} exceeds later total {suffix}")));
        }
        suffix += head.iter().sum::<u64>();
    }
    Ok(suffix)
}

/// Indices `(row, column)` of a subset summing to exactly `z`.
///
/// Entries are taken greedily in row order, skipping each row's last entry,
/// with the final 1 as the last candidate.
pub fn greedy_exact_subset(rows: &[Vec<u64>], z: u64) -> Result<Vec<(usize, usize)>> {
    let n = lemma_hypotheses(rows)?;
    if z > n {
        return Err(Error::Hypothesis(format!("z = {z} exceeds N = {n}")));
    }
    let l = rows.len() - 1;
    let candidates = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| (0..row.len() - 1).map(move |j| (i, j)))
        .chain(std::iter::once((l, rows[l].len() - 1)));
    let mut sum = 0;
    let mut chosen = Vec::new();
    for (i, j) in candidates {
        if sum + rows[i][j] <= z {
            sum += rows[i][j];
            chosen.push((i, j));
        }
    }
    if sum != z {
        return Err(Error::Certificate(format!("greedy reached {sum}, not {z}")));
    }
    Ok(chosen)
}

/// Every input satisfying the hypotheses with `N <= max_n`, up to the last
/// entry of each non-final row, which the greedy never reads. That entry is
/// set to its smallest legal value; see [`with_largest_tails`].
pub fn hypothesis_inputs(max_n: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for k in 1..max_n {
        extend_inputs(vec![vec![1; k as usize + 1]], 1 + k, max_n, &mut out);
    }
    out
}

/// `rows` is stored last-row-first.
fn extend_inputs(rows: Vec<Vec<u64>>, suffix: u64, max_n: u64, out: &mut Vec<Vec<Vec<u64>>>) {
    out.push(rows.iter().rev().cloned().collect());
    let mut head = Vec::new();
    heads(&mut head, 1, suffix, max_n - suffix, &mut |h: &[u64]| {
        let mut row = h.to_vec();
        row.push(*h.last().expect("nonempty head"));
        let mut next = rows.clone();
        next.push(row);
        extend_inputs(next, suffix + h.iter().sum::<u64>(), max_n, out);
    });
}

/// Nonempty nondecreasing sequences with entries in `[lo, hi]` and sum at most `budget`.
fn heads(cur: &mut Vec<u64>, lo: u64, hi: u64, budget: u64, f: &mut dyn FnMut(&[u64])) {
    for x in lo..=hi.min(budget) {
        cur.push(x);
        f(cur);
        heads(cur, x, hi, budget - x, f);
        cur.pop();
    }
}

/// Raises the last entry of every non-final row to the total of later rows.
pub fn with_largest_tails(rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out = rows.to_vec();
    let Some(last) = out.last() else { return out };
    let mut suffix = 1 + last[..last.len().saturating_sub(1)].iter().sum::<u64>();
    for row in out.iter_mut().rev().skip(1) {
        let m = row.len();
        row[m - 1] = row[m - 1].max(suffix);
        suffix += row[..m - 1].iter().sum::<u64>();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(rows: &[Vec<u64>], z: &[(usize, usize)]) -> u64 {
        z.iter().map(|&(i, j)| rows[i][j]).sum()
    }

    #[test]
    fn examples() {
        let rows = vec![vec![1, 1]];
        assert_eq!(greedy_exact_subset(&rows, 0).unwrap(), vec![]);
        assert_eq!(greedy_exact_subset(&rows, 1).unwrap(), vec![(0, 0)]);
        let rows = vec![vec![1, 2, 3], vec![1, 1]];
        assert_eq!(lemma_hypotheses(&rows).unwrap(), 5);
        let z = greedy_exact_subset(&rows, 3).unwrap();
        assert_eq!(z, vec![(0, 0), (0, 1)]);
        assert_eq!(sum(&rows, &z), 3);
    }

    #[test]
    fn generated_inputs_satisfy_hypotheses() {
        let mut seen = std::collections::HashSet::new();
        let base = hypothesis_inputs(7);
        assert!(base.iter().all(|r| seen.insert(r.clone())));
        let inputs: Vec<_> = base.into_iter().flat_map(|r| [with_largest_tails(&r), r]).collect();
        for rows in &inputs {
            let n = lemma_hypotheses(rows).unwrap();
            assert!(n <= 7);
            for z in 0..=n {
                assert_eq!(sum(rows, &greedy_exact_subset(rows, z).unwrap()), z);
            }
        }
        assert!(inputs.contains(&vec![vec![1, 1]]));
        assert!(inputs.contains(&vec![vec![2, 2, 2], vec![1, 1, 1]]));
        assert!(inputs.contains(&vec![vec![2, 2, 3], vec![1, 1, 1]]));
        assert_eq!(hypothesis_inputs(14).len(), 133_866);
    }

    #[test]
    fn hypothesis_violations() {
        assert!(lemma_hypotheses(&[]).is_err());
        assert!(lemma_hypotheses(&[vec![1]]).is_err());
        assert!(lemma_hypotheses(&[vec![1, 2]]).is_err());
        assert!(lemma_hypotheses(&[vec![3, 1], vec![1, 1]]).is_err());
        assert!(lemma_hypotheses(&[vec![3, 3], vec![1, 1]]).is_err());
        assert!(greedy_exact_subset(&[vec![1, 1]], 3).is_err());
    }
}
