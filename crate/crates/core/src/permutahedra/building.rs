use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, full, is_subset, permutations};
use crate::error::{Error, Result};
use crate::lattice::projective::subset_ray;
use crate::lattice::{Cone, Fan, LatticeVector};

/// Family of nonempty subsets of `E = {0, ..., n-1}` stored as bitmasks in
/// canonical order. The ground set itself may or may not be a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingSet {
    n: usize,
    members: Vec<u64>,
}

impl BuildingSet {
    /// Validates the building-set axiom: all singletons are present, and
    /// overlapping members have their union in the family (or equal to `E`).
    pub fn new(n: usize, members: Vec<u64>) -> Result<Self> {
        let g = Self::new_unchecked(n, members);
        g.validate()?;
        Ok(g)
    }

    pub(crate) fn new_unchecked(n: usize, members: Vec<u64>) -> Self {
        let mut members: Vec<u64> = members
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        members.sort_by(|a, b| bits::canonical_cmp(*a, *b));
        BuildingSet { n, members }
    }

    /// `B` together with all singletons.
    pub fn with_singletons(n: usize, b: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut m: Vec<u64> = b.into_iter().collect();
        m.extend((0..n).map(|i| 1u64 << i));
        Self::new(n, m)
    }

    fn validate(&self) -> Result<()> {
        let e = full(self.n);
        for &m in &self.members {
            if m == 0 || !is_subset(m, e) {
                return Err(Error::NotBuildingSet(format!(
                    "member {m:#b} is not a nonempty subset of the ground set"
                )));
            }
        }
        for i in 0..self.n {
            if !self.contains(1 << i) {
                return Err(Error::NotBuildingSet(format!(
                    "singleton {{{}}} missing",
                    i + 1
                )));
            }
        }
        for (k, &a) in self.members.iter().enumerate() {
            for &b in &self.members[k + 1..] {
                let u = a | b;
                if a & b != 0 && u != e && !self.contains(u) {
                    return Err(Error::NotBuildingSet(format!(
                        "union of {a:#b} and {b:#b} missing"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }

    /// Members other than the ground set.
    pub fn reduced(&self) -> Vec<u64> {
        let e = full(self.n);
        self.members.iter().copied().filter(|&m| m != e).collect()
    }

    /// Maximal members contained in `mask` (the ground set excluded).
    pub fn maximal_below(&self, mask: u64) -> Vec<u64> {
        let below: Vec<u64> = self
            .reduced()
            .into_iter()
            .filter(|&m| is_subset(m, mask))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&m| !below.iter().any(|&o| o != m && is_subset(m, o)))
            .collect()
    }

    /// Nestedness in the reduced family: members pairwise nested or disjoint,
    /// and no union of two or more disjoint members in the family or equal to `E`.
    pub fn is_nested(&self, set: &[u64]) -> bool {
        let e = full(self.n);
        for (k, &a) in set.iter().enumerate() {
            if a == e || !self.contains(a) {
                return false;
            }
            for &b in &set[k + 1..] {
                if a & b != 0 && !is_subset(a, b) && !is_subset(b, a) {
                    return false;
                }
            }
        }
        // unions of antichains of pairwise disjoint members
        let k = set.len();
        if k > 20 {
            return false;
        }
        for pick in 1u64..1 << k {
            if pick.count_ones() < 2 {
                continue;
            }
            let chosen: Vec<u64> = bits::elements(pick).map(|i| set[i]).collect();
            let disjoint = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| a & b == 0));
            if !disjoint {
                continue;
            }
            let u = chosen.iter().fold(0, |acc, m| acc | m);
            if u == e || self.contains(u) {
                return false;
            }
        }
        true
    }

    /// Maximal nested sets, one per total order of `E` (duplicates merged):
    /// the union of `max G^{within J_k}` for the initial segments `J_k`, `k < n`.
    pub fn maximal_nested_sets(&self) -> Vec<Vec<u64>> {
        let mut out: BTreeSet<Vec<u64>> = BTreeSet::new();
        for order in permutations(self.n) {
            let mut nested: BTreeSet<u64> = BTreeSet::new();
            let mut j = 0u64;
            for &i in order.iter().take(self.n.saturating_sub(1)) {
                j |= 1 << i;
                nested.extend(self.maximal_below(j));
            }
            let mut v: Vec<u64> = nested.into_iter().collect();
            v.sort_by(|a, b| bits::canonical_cmp(*a, *b));
            out.insert(v);
        }
        out.into_iter().collect()
    }
}

/// Fan of the wonderful model: cones `pos([e^I] : I in N)` over the maximal
/// nested sets `N`, in the chart of `N_E`.
pub fn nested_set_fan(g: &BuildingSet) -> Result<Fan> {
    let g = BuildingSet::new(g.n(), g.members().to_vec())?;
    let n = g.n();
    if n == 0 {
        return Err(Error::NotBuildingSet("empty ground set".into()));
    }
    let cones = g
        .maximal_nested_sets()
        .into_iter()
        .map(|nested| {
            let gens: Vec<LatticeVector> = nested.iter().map(|&m| subset_ray(m, n)).collect();
            Cone::new(gens, n - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    Fan::new(cones, n - 1, "nested")
}

/// Hepp fan: nested-set fan of all proper nonempty subsets, one cone per flag.
pub fn hepp_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::NotBuildingSet("empty ground set".into()));
    }
    let all: Vec<u64> = (1..full(n)).collect();
    Ok(nested_set_fan(&BuildingSet::new(n, all)?)?.relabel("hepp"))
}

/// Hepp sector for a total order `i_1, ..., i_n`: row `e` holds the
/// exponents of `x_1, ..., x_{n-1}` in `alpha_e`, so that `alpha_{i_n} = 1`
/// and `alpha_{i_k} = x_k x_{k+1} ... x_{n-1}`.
pub fn hepp_sector_map(order: &[usize]) -> Vec<Vec<i64>> {
    let n = order.len();
    let mut rows = vec![vec![0i64; n.saturating_sub(1)]; n];
    for (pos, &e) in order.iter().enumerate() {
        for k in pos..n.saturating_sub(1) {
            rows[e][k] = 1;
        }
    }
    rows
}
