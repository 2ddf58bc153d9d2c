//! Chart for `N_E = Z^E / Z(1,...,1)` and its dual hyperplane lattice.
//!
//! Classes `[u]` are represented by `u_i - u_n` for `i < n`; points of a
//! level set `sum m = d` by their first `n - 1` coordinates. Pairings in the
//! chart differ from the original ones by the constant `u_n * d`, so faces
//! and argmins agree.

use super::cone::LatticeVector;

pub fn chart_point(m: &[i64]) -> LatticeVector {
    m[..m.len() - 1].to_vec()
}

pub fn lift_point(p: &[i64], level: i64) -> LatticeVector {
    let mut m = p.to_vec();
    m.push(level - p.iter().sum::<i64>());
    m
}

pub fn chart_vector(u: &[i64]) -> LatticeVector {
    let last = u[u.len() - 1];
    u[..u.len() - 1].iter().map(|x| x - last).collect()
}

/// Representative with last coordinate zero.
pub fn lift_vector(v: &[i64]) -> LatticeVector {
    let mut u = v.to_vec();
    u.push(0);
    u
}

/// Chart image of `[e^I]` for a subset given as a bitmask over `n` elements.
pub fn subset_ray(mask: u64, n: usize) -> LatticeVector {
    let bit = |i: usize| ((mask >> i) & 1) as i64;
    let last = bit(n - 1);
    (0..n - 1).map(|i| bit(i) - last).collect()
}

/// Inverse of [`subset_ray`] for vectors of that form.
pub fn ray_subset(v: &[i64]) -> Option<u64> {
    let n = v.len() + 1;
    if v.iter().all(|&x| x == 0 || x == 1) {
        let mask = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        (mask != 0).then_some(mask)
    } else if v.iter().all(|&x| x == 0 || x == -1) {
        let mask = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 0)
            .fold(1u64 << (n - 1), |m, (i, _)| m | 1 << i);
        Some(mask)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rays_of_two_element_ground_set() {
        assert_eq!(subset_ray(0b01, 2), vec![1]);
        assert_eq!(subset_ray(0b10, 2), vec![-1]);
        assert_eq!(ray_subset(&[-1]), Some(0b10));
        assert_eq!(ray_subset(&[1]), Some(0b01));
    }

    #[test]
    fn subset_round_trip() {
        for mask in 1u64..7 {
            assert_eq!(ray_subset(&subset_ray(mask, 3)), Some(mask));
        }
    }

    #[test]
    fn pairing_shifts_by_constant() {
        let m = [2, 1, 4];
        let u = [3, -1, 2];
        let lhs: i64 = m.iter().zip(&u).map(|(a, b)| a * b).sum();
        let chart: i64 = chart_point(&m)
            .iter()
            .zip(chart_vector(&u))
            .map(|(a, b)| a * b)
            .sum();
        assert_eq!(lhs, chart + u[2] * 7);
        assert_eq!(lift_point(&chart_point(&m), 7), m.to_vec());
    }
}
