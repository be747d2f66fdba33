//! Closed-form bounds on query counts and separator sizes.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn pow(n: u64, e: u32) -> i64 {
    n.checked_pow(e).expect("bound parameters overflow") as i64
}

fn check_alpha(alpha: Rational64) -> Result<()> {
    if alpha < Rational64::new(1, 2) || alpha > Rational64::from_integer(1) {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

/// `(1 - alpha) n^(d-1) / d`: minimum α-separator size in `G_d(n)` for `alpha >= 1/2`.
pub fn grid_separator_lower_bound(d: u32, n: u64, alpha: Rational64) -> Result<Rational64> {
    check_alpha(alpha)?;
    Ok((Rational64::from_integer(1) - alpha) * pow(n, d - 1) / d as i64)
}

/// `(1 - alpha) n^(d-1) / (16 d)` for the `n/4 x n/4 x n x .. x n` grid.
pub fn anisotropic_grid_bound(d: u32, n: u64, alpha: Rational64) -> Result<Rational64> {
    check_alpha(alpha)?;
    if n % 4 != 0 || d < 2 {
        return Err(Error::InvalidSpec(format!("need 4 | n and d >= 2, got n = {n}, d = {d}")));
    }
    Ok((Rational64::from_integer(1) - alpha) * pow(n, d - 1) / (16 * d as i64))
}

/// Dims of the anisotropic grid `n/4, n/4, n, .., n`.
pub fn anisotropic_dims(d: usize, n: usize) -> Vec<usize> {
    (0..d).map(|i| if i < 2 { n / 4 } else { n }).collect()
}

/// `(2 + 1/(2^d - 1)) n^(d-1)`: the published hyperplane-bisection bound.
pub fn bisection_upper_bound(d: u32, n: u64) -> Rational64 {
    (Rational64::from_integer(2) + Rational64::new(1, pow(2, d) - 1)) * pow(n, d - 1)
}

/// `(2 + 1/(2^(d-1) - 1)) n^(d-1)`: what the cut-size sum of cyclic bisection actually gives.
pub fn bisection_upper_bound_corrected(d: u32, n: u64) -> Option<Rational64> {
    (d >= 2).then(|| (Rational64::from_integer(2) + Rational64::new(1, pow(2, d - 1) - 1)) * pow(n, d - 1))
}

/// `n^(d-1) / (3d)`: the corollary's lower bound on Setting-2 / Query-B.
pub fn grid_query_lower_bound(d: u32, n: u64) -> Rational64 {
    Rational64::new(pow(n, d - 1), 3 * d as i64)
}

/// `n^(d-1) / (48d)`: the corollary's lower bound on Setting-1 / Query-B.
pub fn grid_query_lower_bound_s1(d: u32, n: u64) -> Rational64 {
    Rational64::new(pow(n, d - 1), 48 * d as i64)
}

/// `ceil(log2 size)`.
pub fn log2_bound(size: usize) -> u64 {
    if size <= 1 {
        0
    } else {
        (usize::BITS - (size - 1).leading_zeros()) as u64
    }
}

/// `f_value / (1 - alpha)`, the separator-search bound without any check on `f`.
pub fn separator_search_bound(f_value: f64, alpha: Rational64) -> f64 {
    let one_minus = Rational64::from_integer(1) - alpha;
    f_value * *one_minus.denom() as f64 / *one_minus.numer() as f64
}

/// `f(size) / (1 - alpha)` after checking `f(y) <= (y/x) f(x)` for all integers `1 <= y < x <= size`.
pub fn subhom_query_bound(f: impl Fn(f64) -> f64, size: u64, alpha: Rational64) -> Result<f64> {
    if alpha <= Rational64::from_integer(0) || alpha >= Rational64::from_integer(1) {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    for x in 1..=size {
        let fx = f(x as f64);
        for y in 1..x {
            if f(y as f64) > (y as f64 / x as f64) * fx * (1.0 + 1e-12) {
                return Err(Error::NotSubhomogeneous { small: y, large: x });
            }
        }
    }
    Ok(separator_search_bound(f(size as f64), alpha))
}

/// One bound value with its parameters, for CSV output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: String,
    pub d: u32,
    pub n: u64,
    pub alpha: String,
    pub value: String,
    pub value_f64: f64,
}

impl BoundReport {
    pub fn new(bound: &str, d: u32, n: u64, alpha: Option<Rational64>, value: Rational64) -> Self {
        BoundReport {
            bound: bound.into(),
            d,
            n,
            alpha: alpha.map(|a| a.to_string()).unwrap_or_default(),
            value: value.to_string(),
            value_f64: *value.numer() as f64 / *value.denom() as f64,
        }
    }

    /// Recomputes the value from the stored parameters.
    pub fn recompute(&self) -> Result<Rational64> {
        let alpha = || -> Result<Rational64> { self.alpha.parse().map_err(|_| Error::Parse(self.alpha.clone())) };
        match self.bound.as_str() {
            "grid_separator_lower" => grid_separator_lower_bound(self.d, self.n, alpha()?),
            "anisotropic_separator_lower" => anisotropic_grid_bound(self.d, self.n, alpha()?),
            "bisection_upper" => Ok(bisection_upper_bound(self.d, self.n)),
            "query_lower_s2b" => Ok(grid_query_lower_bound(self.d, self.n)),
            "query_lower_s1b" => Ok(grid_query_lower_bound_s1(self.d, self.n)),
            other => Err(Error::Parse(format!("unknown bound {other:?}"))),
        }
    }
}

/// The standard bound table for the given grid sizes.
pub fn bound_table(cases: &[(u32, u64)]) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &(d, n) in cases {
        out.push(BoundReport::new("bisection_upper", d, n, None, bisection_upper_bound(d, n)));
        out.push(BoundReport::new("query_lower_s2b", d, n, None, grid_query_lower_bound(d, n)));
        out.push(BoundReport::new("query_lower_s1b", d, n, None, grid_query_lower_bound_s1(d, n)));
        for alpha in [Rational64::new(1, 2), Rational64::new(2, 3)] {
            out.push(BoundReport::new(
                "grid_separator_lower",
                d,
                n,
                Some(alpha),
                grid_separator_lower_bound(d, n, alpha)?,
            ));
            if n % 4 == 0 && d >= 2 {
                out.push(BoundReport::new(
                    "anisotropic_separator_lower",
                    d,
                    n,
                    Some(alpha),
                    anisotropic_grid_bound(d, n, alpha)?,
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn separator_bound_examples() {
        assert_eq!(grid_separator_lower_bound(2, 4, r(1, 2)).unwrap(), r(1, 1));
        assert_eq!(grid_separator_lower_bound(3, 4, r(1, 2)).unwrap(), r(8, 3));
        assert_eq!(grid_separator_lower_bound(2, 4, r(1, 1)).unwrap(), r(0, 1));
        assert!(matches!(
            grid_separator_lower_bound(2, 4, r(1, 3)),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn anisotropic_examples() {
        assert_eq!(anisotropic_grid_bound(2, 8, r(1, 2)).unwrap(), r(1, 8));
        assert_eq!(anisotropic_grid_bound(2, 4, r(1, 2)).unwrap(), r(1, 16));
        assert_eq!(anisotropic_grid_bound(3, 4, r(3, 4)).unwrap(), r(1, 12));
        assert!(anisotropic_grid_bound(2, 6, r(1, 2)).is_err());
        assert_eq!(anisotropic_dims(3, 8), vec![2, 2, 8]);
    }

    #[test]
    fn corrected_bisection_bound() {
        assert_eq!(bisection_upper_bound_corrected(1, 8), None);
        assert_eq!(bisection_upper_bound_corrected(2, 8), Some(r(24, 1)));
        assert_eq!(bisection_upper_bound_corrected(3, 8), Some(r(448, 3)));
    }

    #[test]
    fn query_bounds() {
        assert_eq!(bisection_upper_bound(2, 8), r(56, 3));
        assert_eq!(bisection_upper_bound(3, 4), r(240, 7));
        assert_eq!(grid_query_lower_bound(2, 12), r(2, 1));
        assert_eq!(log2_bound(1), 0);
        assert_eq!(log2_bound(2), 1);
        assert_eq!(log2_bound(8), 3);
        assert_eq!(log2_bound(9), 4);
        assert_eq!(log2_bound(64), 6);
    }

    #[test]
    fn subhomogeneous_bound() {
        assert_eq!(subhom_query_bound(|x| x, 10, r(1, 2)).unwrap(), 20.0);
        assert_eq!(subhom_query_bound(|x| x * x, 10, r(1, 2)).unwrap(), 200.0);
        // sqrt grows slower than linear, so f(a x) <= a f(x) fails
        assert!(matches!(
            subhom_query_bound(f64::sqrt, 64, r(2, 3)),
            Err(Error::NotSubhomogeneous { .. })
        ));
        assert!((separator_search_bound(64f64.sqrt(), r(2, 3)) - 24.0).abs() < 1e-12);
        assert!((separator_search_bound(2.0 * 8.0, r(1, 2)) - 32.0).abs() < 1e-12);
    }

    #[test]
    fn table_recomputes() {
        for row in bound_table(&[(2, 4), (2, 8), (3, 4)]).unwrap() {
            assert_eq!(row.recompute().unwrap().to_string(), row.value);
        }
    }
}
