//! Exact linear solves.
//!
//! Rows of the augmented system are cleared of denominators, reduced with
//! fraction-free (Bareiss) elimination and partial pivoting on magnitude, and
//! the triangular system is back-substituted in rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Solves `a · x = b` for every column of `b`.
///
/// Returns `None` when `a` is singular. `a` must be square and `b` must have
/// as many rows as `a`.
pub fn solve(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side has wrong row count");
    let rhs_cols = b.first().map_or(0, Vec::len);
    let width = n + rhs_cols;

    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(arow, brow)| {
            assert_eq!(arow.len(), n, "matrix is not square");
            let row: Vec<&Rational> = arow.iter().chain(brow.iter()).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| m[i][k].abs().cmp(&m[j][k].abs()).then(j.cmp(&i)))?;
        if m[pivot][k].is_zero() {
            return None;
        }
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![vec![Rational::zero(); rhs_cols]; n];
    for c in 0..rhs_cols {
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(m[i][n + c].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(m[i][j].clone()) * &x[j][c];
            }
            x[i][c] = Rational::new(acc.numer().clone(), acc.denom() * &m[i][i])
                .expect("pivot is nonzero");
        }
    }
    Some(x)
}

/// Solves `a · x = b` for a single right-hand side.
pub fn solve_vec(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = b.iter().map(|v| vec![v.clone()]).collect();
    solve(a, &cols).map(|x| x.into_iter().map(|mut row| row.remove(0)).collect())
}

/// Solves `a · x = b` where row `i` of `a` holds only its nonzero entries.
///
/// Elimination works in rationals, touches only stored entries and picks
/// pivots by the Markowitz count to limit fill-in, so systems with a few
/// nonzeros per row stay cheap. Returns `None` when `a` is singular.
pub fn solve_sparse(a: &[BTreeMap<usize, Rational>], b: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side has wrong row count");
    let rhs_cols = b.first().map_or(0, Vec::len);
    let mut rows: Vec<BTreeMap<usize, Rational>> =
        a.iter().map(|r| r.iter().filter(|(_, v)| !v.is_zero()).map(|(&c, v)| (c, v.clone())).collect()).collect();
    let mut rhs = b.to_vec();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            assert!(c < n, "column {c} out of range");
            col_rows[c].insert(i);
        }
    }
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    while !remaining.is_empty() {
        // Pivot rows leave every column set, so col_rows only lists live rows.
        let mut best: Option<(usize, usize, usize)> = None;
        for &c in &remaining {
            let count = col_rows[c].len();
            if count == 0 {
                return None;
            }
            for &r in &col_rows[c] {
                let cost = (count - 1) * (rows[r].len() - 1);
                if best.is_none_or(|(b, _, _)| cost < b) {
                    best = Some((cost, c, r));
                }
            }
            if best.is_some_and(|(b, _, _)| b == 0) {
                break;
            }
        }
        let (_, k, p) = best?;
        remaining.remove(&k);
        let pivot_row = rows[p].clone();
        for &c in pivot_row.keys() {
            col_rows[c].remove(&p);
        }
        let others: Vec<usize> = col_rows[k].iter().copied().collect();
        let pivot_rhs = rhs[p].clone();
        let inv = pivot_row[&k].recip().expect("stored entries are nonzero");
        for r in others {
            let factor = &rows[r][&k] * &inv;
            for (&c, v) in &pivot_row {
                let entry = rows[r].entry(c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
            for (dst, src) in rhs[r].iter_mut().zip(&pivot_rhs) {
                *dst -= &factor * src;
            }
        }
        pivots.push((k, p));
    }
    // Each pivot row mentions only its own column and columns pivoted later.
    let mut x = vec![vec![Rational::zero(); rhs_cols]; n];
    for &(k, p) in pivots.iter().rev() {
        let inv = rows[p][&k].recip().expect("stored entries are nonzero");
        for j in 0..rhs_cols {
            let mut acc = rhs[p][j].clone();
            for (&c, v) in &rows[p] {
                if c != k {
                    acc -= v * &x[c][j];
                }
            }
            x[k][j] = acc * &inv;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn solves_small_system() {
        // 2x + y = 3, x - y = 0
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]];
        let x = solve_vec(&a, &[q(3, 1), q(0, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn needs_pivoting() {
        let a = vec![vec![q(0, 1), q(1, 2)], vec![q(1, 3), q(0, 1)]];
        let x = solve_vec(&a, &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(x, vec![q(3, 1), q(2, 1)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(1, 2), q(1, 1)]];
        assert!(solve_vec(&a, &[q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn sparse_matches_dense_with_pivoting() {
        let a = vec![vec![q(0, 1), q(1, 2)], vec![q(1, 3), q(0, 1)]];
        let sparse: Vec<BTreeMap<usize, Rational>> =
            a.iter().map(|r| r.iter().cloned().enumerate().collect()).collect();
        let b = vec![vec![q(1, 1)], vec![q(1, 1)]];
        assert_eq!(solve_sparse(&sparse, &b), solve(&a, &b));
        let singular = vec![BTreeMap::from([(0, q(1, 1))]), BTreeMap::from([(0, q(2, 1))])];
        assert!(solve_sparse(&singular, &b).is_none());
    }

    proptest! {
        #[test]
        fn sparse_agrees_with_dense(
            entries in proptest::collection::vec((-3i64..4, 1i64..5), 25),
            rhs in proptest::collection::vec((-9i64..9, 1i64..5), 5),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(5)
                .map(|row| row.iter().map(|&(n, d)| q(n, d)).collect())
                .collect();
            let sparse: Vec<BTreeMap<usize, Rational>> = a.iter()
                .map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect())
                .collect();
            let b: Vec<Vec<Rational>> = rhs.iter().map(|&(n, d)| vec![q(n, d)]).collect();
            prop_assert_eq!(solve_sparse(&sparse, &b), solve(&a, &b));
        }

        #[test]
        fn residual_is_exactly_zero(
            entries in proptest::collection::vec((-20i64..20, 1i64..7), 16),
            rhs in proptest::collection::vec((-20i64..20, 1i64..7), 4),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(4)
                .map(|row| row.iter().map(|&(n, d)| q(n, d)).collect())
                .collect();
            let b: Vec<Rational> = rhs.iter().map(|&(n, d)| q(n, d)).collect();
            if let Some(x) = solve_vec(&a, &b) {
                for (row, bi) in a.iter().zip(&b) {
                    let lhs: Rational = row.iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
                    prop_assert_eq!(&lhs, bi);
                }
            }
        }
    }
}
