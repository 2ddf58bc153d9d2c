//! Subsets of small ground sets as bitmasks.

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

pub fn count(a: u64) -> usize {
    a.count_ones() as usize
}

pub fn elements(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| (mask >> i) & 1 == 1)
}

/// All submasks of `mask`, including 0 and `mask`, in increasing order.
pub fn submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << count(mask));
    let mut s = 0u64;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = (s.wrapping_sub(mask)) & mask;
    }
    out
}

/// Packs the bits of `mask` selected by `within` into the low positions.
pub fn compress(mask: u64, within: u64) -> u64 {
    elements(within)
        .enumerate()
        .filter(|&(_, e)| (mask >> e) & 1 == 1)
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

/// Inverse of [`compress`].
pub fn expand(packed: u64, within: u64) -> u64 {
    elements(within)
        .enumerate()
        .filter(|&(k, _)| (packed >> k) & 1 == 1)
        .fold(0, |acc, (_, e)| acc | 1 << e)
}

/// Canonical order on subsets: by size, then lexicographically by element list.
pub fn canonical_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    count(a).cmp(&count(b)).then_with(|| {
        elements(a)
            .collect::<Vec<_>>()
            .cmp(&elements(b).collect::<Vec<_>>())
    })
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| p[j] > p[i])
            .expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_expand_round_trip() {
        let within = 0b101101;
        for s in submasks(within) {
            assert_eq!(expand(compress(s, within), within), s);
        }
        assert_eq!(compress(0b100100, within), 0b1010);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(submasks(0b110), vec![0, 0b010, 0b100, 0b110]);
    }
}
