//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here works on `i128` entries (rationals are `Ratio<i128>`),
//! which is plenty for the ranks and coordinate sizes that occur for
//! desk-scale graphs.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Q = Ratio<i128>;

pub fn gcd_slice(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Divides by the gcd of the entries. The zero vector is returned unchanged.
pub fn make_primitive(v: &mut [i128]) {
    let g = gcd_slice(v);
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_i128(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub fn to_i64(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("lattice coordinate overflows i64"))
        .collect()
}

/// Reduced row echelon form over the rationals. Returns the reduced rows
/// (only the nonzero ones) and the pivot column of each.
pub fn rref(rows: &[Vec<i128>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..ncols {
                    let delta = f * m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vec<i128>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Integer basis (primitive vectors) of `{x : row . x = 0 for all rows}`.
pub fn nullspace(rows: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::from_integer(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f];
            }
            clear_denominators(&v)
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn clear_denominators(v: &[Q]) -> Vec<i128> {
    let l = v.iter().fold(1i128, |l, x| l.lcm(x.denom()));
    let mut out: Vec<i128> = v
        .iter()
        .map(|x| (x * Q::from_integer(l)).to_integer())
        .collect();
    make_primitive(&mut out);
    out
}

/// Solves `sum_i coeffs[i] * gens[i] = target` for linearly independent `gens`.
/// Returns `None` when `target` is not in their span.
pub fn solve_in_span(gens: &[Vec<i128>], target: &[i128]) -> Option<Vec<Q>> {
    let k = gens.len();
    let n = target.len();
    // augmented system: columns are generators, last column the target
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut r: Vec<i128> = gens.iter().map(|g| g[i]).collect();
            r.push(target[i]);
            r
        })
        .collect();
    let (m, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    rows.clear();
    let mut sol = vec![Q::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        sol[p] = m[r][k];
    }
    Some(sol)
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero
/// elementary divisors only, each positive, in divisibility order).
pub fn smith_diagonal(m: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = Integer::div_floor(&a[i][t], &a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&a[t][j], &a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility: the pivot must divide every remaining entry
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j];
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

pub fn is_nonnegative(v: &[Q]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det(&m), 0);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det(&m), -1);
        let m = vec![vec![1, 0], vec![1, 2]];
        assert_eq!(det(&m), 2);
    }

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_diagonal(&[vec![1, 0], vec![1, 2]]), vec![1, 2]);
        assert_eq!(smith_diagonal(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(&[vec![1, 1, 0], vec![0, 1, 1]]), vec![1, 1]);
        assert_eq!(smith_diagonal(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![vec![1, 1, 1]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(dot(&v, &rows[0]), 0);
        }
    }

    #[test]
    fn span_solution() {
        let gens = vec![vec![1, 0], vec![1, 1]];
        let sol = solve_in_span(&gens, &[3, 2]).unwrap();
        assert_eq!(sol, vec![Q::from_integer(1), Q::from_integer(2)]);
        assert!(solve_in_span(&[vec![1, 1]], &[1, 0]).is_none());
    }
}
