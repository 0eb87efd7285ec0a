//! Exact Gauss–Jordan elimination over the rationals.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// Reduces `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot column of each remaining row.
///
/// Elimination runs on integer rows kept primitive (content divided out), which
/// avoids a gcd per rational operation; the result is rescaled at the end.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(&r[..ncols])).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let g = row[col].gcd(&pivot_row[col]);
            let a = &pivot_row[col] / &g;
            let b = &row[col] / &g;
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v = &*v * &a - pv * &b;
            }
            make_primitive(row);
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    *rows = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let d = row[p].clone();
            row.into_iter().map(|v| Rational::new(v, d.clone())).collect()
        })
        .collect();
    pivots
}

/// Clears denominators of `row` and divides out the common factor.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// All solutions of `A v = b` as one particular solution (free variables set
/// to zero) plus a basis of `{v : A v = 0}`, or `None` if the system is
/// inconsistent.
pub(crate) fn affine_solutions(
    a: &[Vec<Rational>],
    b: &[Rational],
    ncols: usize,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = alloc::vec![Rational::zero(); ncols];
    for (row, &p) in rows.iter().zip(&pivots) {
        particular[p] = row[ncols].clone();
    }
    let basis = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = alloc::vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    Some((particular, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn apply(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let mut r = a.clone();
        assert_eq!(rref(&mut r, 3), vec![0, 1]);
        let (v, ns) = affine_solutions(&a, &[q(0), q(0), q(0)], 3).unwrap();
        assert!(v.iter().all(|x| x.is_zero()));
        assert_eq!(ns.len(), 1);
        assert!(apply(&a, &ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        let (v, ns) = affine_solutions(&a, &[q(2), q(0)], 2).unwrap();
        assert_eq!(v, vec![q(1), q(1)]);
        assert!(ns.is_empty());
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(affine_solutions(&a, &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn rref_matches_textbook_form() {
        let mut r = vec![
            vec![Rational::new(1.into(), 2.into()), q(1), q(0)],
            vec![q(3), q(-1), Rational::new(2.into(), 3.into())],
        ];
        assert_eq!(rref(&mut r, 3), vec![0, 1]);
        assert_eq!(r[0], vec![q(1), q(0), Rational::new(4.into(), 21.into())]);
        assert_eq!(r[1], vec![q(0), q(1), Rational::new((-2).into(), 21.into())]);
    }
}
