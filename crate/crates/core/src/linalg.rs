//! Internal exact linear algebra: fraction-free determinants over polynomial
//! entries, dense GF(p) elimination, and integer matrix rank.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{if_parallel, PAR_ROW_THRESHOLD};
#[cfg(feature = "parallel")]
use crate::par::*;
use crate::poly::{MultiPoly, PolyRing};

/// Determinant by Bareiss one-step fraction-free elimination. Works over any
/// integral-domain entries (integers, rationals, polynomials). Row pivoting
/// picks the candidate with the fewest terms.
pub(crate) fn bareiss_det(ring: &PolyRing, mut m: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
    }
    if n == 0 {
        return Ok(MultiPoly::one(ring));
    }
    let mut sign_negative = false;
    let mut prev_pivot = MultiPoly::one(ring);
    for k in 0..n {
        // Pivot: nonzero entry in column k at or below row k, fewest terms.
        let pivot_row = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by_key(|&i| m[i][k].term_count());
        let Some(pivot_row) = pivot_row else {
            return Ok(MultiPoly::zero(ring));
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            sign_negative = !sign_negative;
        }
        if k == n - 1 {
            break;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row_ref = &top[k];
        let pivot = pivot_row_ref[k].clone();
        let update_row = |row: &mut Vec<MultiPoly>| -> Result<()> {
            let factor = row[k].clone();
            for j in (k + 1)..n {
                let t = pivot.mul(&row[j])?.sub(&factor.mul(&pivot_row_ref[j])?)?;
                row[j] = t.div_exact(&prev_pivot)?;
            }
            row[k] = MultiPoly::zero(ring);
            Ok(())
        };
        if_parallel!(
            if rest.len() >= PAR_ROW_THRESHOLD {
                rest.par_iter_mut().try_for_each(|row| update_row(row))?;
            } else {
                for row in rest.iter_mut() {
                    update_row(row)?;
                }
            },
            for row in rest.iter_mut() {
                update_row(row)?;
            }
        );
        prev_pivot = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign_negative { det.neg() } else { det })
}

/// Determinant of a dense matrix over GF(p) by Gaussian elimination.
pub(crate) fn fp_det(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut det = 1u64;
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&i| m[i][k] % p != 0) else {
            return 0;
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = (p - det) % p;
        }
        let pivot = m[k][k] % p;
        det = det * pivot % p;
        let inv = fp_inv(pivot, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row_vals = &top[k];
        let eliminate = |row: &mut Vec<u64>| {
            let factor = row[k] % p * inv % p;
            if factor == 0 {
                return;
            }
            for j in k..row.len() {
                let sub = factor * (pivot_row_vals[j] % p) % p;
                row[j] = (row[j] % p + p - sub) % p;
            }
        };
        if_parallel!(
            if rest.len() >= PAR_ROW_THRESHOLD * 4 {
                rest.par_iter_mut().for_each(eliminate);
            } else {
                rest.iter_mut().for_each(eliminate);
            },
            rest.iter_mut().for_each(eliminate)
        );
    }
    det % p
}

pub(crate) fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (s0.rem_euclid(p as i128)) as u64
}

/// Reduced row echelon form over GF(p); returns pivot column indices.
pub(crate) fn fp_rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fp_inv(m[r][c] % p, p);
        for j in c..cols {
            m[r][j] = m[r][j] % p * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = m[i][c] % p;
                for j in c..cols {
                    let sub = f * m[r][j] % p;
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// A deterministic "random" solution of `m · x = 0` over GF(p): free
/// variables take PRNG values, pivots are back-substituted.
pub(crate) fn fp_kernel_sample(
    m: &[Vec<u64>],
    p: u64,
    rng: &mut crate::multidim::SplitMix64,
) -> Vec<u64> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut work: Vec<Vec<u64>> = m.to_vec();
    let pivots = fp_rref(&mut work, p);
    let mut x = vec![0u64; cols];
    for c in 0..cols {
        if !pivots.contains(&c) {
            x[c] = rng.next() % p;
        }
    }
    for (r, &c) in pivots.iter().enumerate() {
        let mut s = 0u64;
        for j in (c + 1)..cols {
            s = (s + work[r][j] * x[j]) % p;
        }
        x[c] = (p - s) % p;
    }
    x
}

/// Rank of an integer matrix over the rationals (fraction-free elimination).
pub(crate) fn int_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for c in 0..cols {
        let Some(pr) = (row..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        for i in (row + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let a = m[row][c].clone();
            let b = m[i][c].clone();
            for j in c..cols {
                m[i][j] = &m[i][j] * &a - &m[row][j] * &b;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Invariant factors of the Smith normal form of an integer matrix, computed
/// by elementary row/column operations with smallest-pivot selection.
pub(crate) fn smith_invariant_factors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut k = 0;
    'stage: while k < rows.min(cols) {
        // Smallest nonzero entry (by absolute value) in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) if m[i][j].abs() < m[bi][bj].abs() => Some((i, j)),
                    keep => keep,
                };
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        // Clear column k with row operations; truncated division leaves
        // remainders strictly smaller than the pivot, so swapping the
        // smallest survivor up and repeating terminates.
        loop {
            for i in (k + 1)..rows {
                if m[i][k].is_zero() {
                    continue;
                }
                let q = &m[i][k] / &m[k][k];
                if !q.is_zero() {
                    for j in k..cols {
                        let sub = &q * &m[k][j];
                        m[i][j] = &m[i][j] - sub;
                    }
                }
            }
            if let Some(i) = (k + 1..rows)
                .filter(|&i| !m[i][k].is_zero())
                .min_by_key(|&i| m[i][k].abs())
            {
                m.swap(k, i);
                continue;
            }
            for j in (k + 1)..cols {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = &m[k][j] / &m[k][k];
                if !q.is_zero() {
                    for row in m.iter_mut().take(rows).skip(k) {
                        let sub = &q * &row[k];
                        row[j] = &row[j] - sub;
                    }
                }
            }
            if let Some(j) = (k + 1..cols)
                .filter(|&j| !m[k][j].is_zero())
                .min_by_key(|&j| m[k][j].abs())
            {
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
                continue;
            }
            break;
        }
        // Divisibility: the pivot must divide the whole trailing block.
        for i in (k + 1)..rows {
            for j in (k + 1)..cols {
                if (&m[i][j] % &m[k][k]).is_zero() {
                    continue;
                }
                // Fold the offending row into row k and redo this stage.
                for col in k..cols {
                    let add = m[i][col].clone();
                    m[k][col] = &m[k][col] + add;
                }
                continue 'stage;
            }
        }
        if m[k][k].is_negative() {
            for j in k..cols {
                m[k][j] = -m[k][j].clone();
            }
        }
        factors.push(m[k][k].clone());
        k += 1;
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{CoeffDomain, MultiPoly};
    use crate::textio::parse_polynomial;

    #[test]
    fn bareiss_matches_cofactor_on_integers() {
        let ring = PolyRing::scalar(CoeffDomain::Integers);
        let m: Vec<Vec<MultiPoly>> = [[2i64, 0, 1], [1, 3, 5], [0, 1, 4]]
            .iter()
            .map(|row| row.iter().map(|&v| MultiPoly::from_i64(&ring, v)).collect())
            .collect();
        let det = bareiss_det(&ring, m).unwrap();
        // 2*(12-5) - 0 + 1*(1-0) = 15
        assert_eq!(det, MultiPoly::from_i64(&ring, 15));
    }

    #[test]
    fn bareiss_symbolic_two_by_two() {
        let ring = PolyRing::new(["a", "b", "c", "d"], CoeffDomain::Integers).unwrap();
        let e = |s: &str| parse_polynomial(s, &ring).unwrap();
        let det = bareiss_det(&ring, vec![vec![e("a"), e("b")], vec![e("c"), e("d")]]).unwrap();
        assert_eq!(det, e("a*d - b*c"));
    }

    #[test]
    fn fp_det_and_inverse() {
        let p = 33331u64;
        assert_eq!(fp_inv(7, p) * 7 % p, 1);
        let det = fp_det(vec![vec![1, 2], vec![3, 4]], p);
        assert_eq!(det, p - 2);
        assert_eq!(fp_det(vec![vec![1, 2], vec![2, 4]], p), 0);
    }

    #[test]
    fn kernel_samples_solve_the_system() {
        let p = 101u64;
        let m = vec![vec![1u64, 2, 3], vec![4, 5, 6]];
        let mut rng = crate::multidim::SplitMix64::new(9);
        for _ in 0..10 {
            let x = fp_kernel_sample(&m, p, &mut rng);
            for row in &m {
                let s: u64 = row.iter().zip(&x).map(|(a, b)| a * b % p).sum::<u64>() % p;
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn smith_normal_form_reference() {
        let m: Vec<Vec<BigInt>> = [[2i64, 4, 4], [-6, 6, 12], [10, 4, 16]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let f = smith_invariant_factors(m);
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]);
    }

    #[test]
    fn integer_rank() {
        let m: Vec<Vec<BigInt>> = [[1i64, 2], [2, 4], [3, 6]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(int_rank(m), 1);
    }
}
