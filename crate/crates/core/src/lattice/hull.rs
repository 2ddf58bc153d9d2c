//! Double description: facet normals of a finitely generated cone.

use super::linalg::{dot, make_primitive, nullspace, rank, rref, solve_in_span};

/// H-representation of `pos(gens)`.
///
/// `equations` span the orthogonal complement of the linear span.
/// Each facet normal `a` satisfies `a . g >= 0` for all generators and is
/// only meaningful modulo `equations` when the cone is not full-dimensional
/// (normals are lifted from a coordinate projection with zeros elsewhere).
#[derive(Clone, Debug)]
pub(crate) struct HRep {
    pub equations: Vec<Vec<i128>>,
    pub facets: Vec<Vec<i128>>,
    pub dim: usize,
}

pub(crate) fn cone_hrep(gens: &[Vec<i128>], ambient: usize) -> HRep {
    let equations = nullspace(gens, ambient);
    let (_, pivots) = rref(gens, ambient);
    let k = pivots.len();
    if k == 0 {
        return HRep {
            equations,
            facets: Vec::new(),
            dim: 0,
        };
    }
    let projected: Vec<Vec<i128>> = gens
        .iter()
        .filter(|g| g.iter().any(|&x| x != 0))
        .map(|g| pivots.iter().map(|&p| g[p]).collect())
        .collect();
    let mut facets: Vec<Vec<i128>> = dual_extreme_rays(&projected, k)
        .into_iter()
        .map(|a| {
            let mut full = vec![0i128; ambient];
            for (i, &p) in pivots.iter().enumerate() {
                full[p] = a[i];
            }
            full
        })
        .collect();
    facets.sort();
    facets.dedup();
    HRep {
        equations,
        facets,
        dim: k,
    }
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset_of(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

/// Extreme rays of `{x in R^k : row . x >= 0 for all rows}`, where the rows
/// have full column rank `k` (so the cone is pointed).
pub(crate) fn dual_extreme_rays(rows: &[Vec<i128>], k: usize) -> Vec<Vec<i128>> {
    let m = rows.len();
    let words = m.div_ceil(64).max(1);

    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<i128>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        chosen.push(r.clone());
        if rank(&chosen, k) > basis.len() {
            basis.push(i);
            if basis.len() == k {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    assert_eq!(basis.len(), k, "constraint rows must have full column rank");

    // columns of the inverse of the basis block
    let cols: Vec<Vec<i128>> = (0..k)
        .map(|j| basis.iter().map(|&i| rows[i][j]).collect())
        .collect();
    let mut rays: Vec<(Vec<i128>, Vec<u64>)> = (0..k)
        .map(|j| {
            let mut e = vec![0i128; k];
            e[j] = 1;
            // B x = e_j, i.e. x combines the columns of B into e_j
            let sol = solve_in_span(&cols, &e).expect("basis rows are independent");
            let x = super::linalg::clear_denominators(&sol);
            let mut zeros = vec![0u64; words];
            for (t, &i) in basis.iter().enumerate() {
                if t != j {
                    bit_set(&mut zeros, i);
                }
            }
            (x, zeros)
        })
        .collect();

    for (idx, a) in rows.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i] == 0 {
                    bit_set(z, idx);
                }
            }
            continue;
        }
        let mut fresh: Vec<(Vec<i128>, Vec<u64>)> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p]
                    .1
                    .iter()
                    .zip(&rays[n].1)
                    .map(|(x, y)| x & y)
                    .collect();
                if popcount(&common) + 2 < k {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, (_, z))| r == p || r == n || !subset_of(&common, z));
                if !adjacent {
                    continue;
                }
                let mut v: Vec<i128> = rays[n]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(&xn, &xp)| vals[p] * xn - vals[n] * xp)
                    .collect();
                make_primitive(&mut v);
                let mut z = common;
                bit_set(&mut z, idx);
                fresh.push((v, z));
            }
        }
        let mut next: Vec<(Vec<i128>, Vec<u64>)> = Vec::with_capacity(pos.len() + fresh.len());
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[i] > 0 {
                next.push((r, z));
            } else if vals[i] == 0 {
                bit_set(&mut z, idx);
                next.push((r, z));
            }
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_cone() {
        // cone over the unit square at height 1
        let gens = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]];
        let h = cone_hrep(&gens, 3);
        assert_eq!(h.dim, 3);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            assert!(gens.iter().all(|g| dot(f, g) >= 0));
            assert_eq!(gens.iter().filter(|g| dot(f, g) == 0).count(), 2);
        }
    }

    #[test]
    fn lower_dimensional_cone() {
        let gens = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let h = cone_hrep(&gens, 3);
        assert_eq!(h.dim, 2);
        assert_eq!(h.equations.len(), 1);
        assert_eq!(h.facets.len(), 2);
    }

    #[test]
    fn half_space_has_one_facet() {
        let gens = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
        let h = cone_hrep(&gens, 2);
        assert_eq!(h.facets, vec![vec![0, 1]]);
    }
}
