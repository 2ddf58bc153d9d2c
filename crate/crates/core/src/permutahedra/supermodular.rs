use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::building::BuildingSet;
use crate::bits::{self, expand, full, is_subset, permutations, submasks};
use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, LatticeVector};
use crate::limits::max_edges;

const EXHAUSTIVE_LIMIT: usize = 12;
const SAMPLED_PAIRS: usize = 10_000;

/// Integer set function on `2^E` with `z(empty) = 0`, satisfying
/// `z(I) + z(J) <= z(I & J) + z(I | J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupermodularFunction {
    labels: Vec<String>,
    values: Vec<i64>,
}

impl SupermodularFunction {
    pub fn new(labels: Vec<String>, values: Vec<i64>) -> Result<Self> {
        let n = labels.len();
        let limit = max_edges();
        if n > limit {
            return Err(Error::TooLarge {
                what: "ground set",
                size: n,
                limit,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::RankMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if values[0] != 0 {
            return Err(Error::NonzeroOnEmpty);
        }
        let z = SupermodularFunction { labels, values };
        z.verify()?;
        Ok(z)
    }

    pub fn from_fn<F: Fn(u64) -> i64>(labels: Vec<String>, f: F) -> Result<Self> {
        let n = labels.len();
        let limit = max_edges();
        if n > limit {
            return Err(Error::TooLarge {
                what: "ground set",
                size: n,
                limit,
            });
        }
        let values = (0..1u64 << n).map(f).collect();
        Self::new(labels, values)
    }

    /// Ground set `{1, ..., n}`.
    pub fn numbered<F: Fn(u64) -> i64>(n: usize, f: F) -> Result<Self> {
        Self::from_fn((1..=n).map(|i| i.to_string()).collect(), f)
    }

    fn verify(&self) -> Result<()> {
        let n = self.n();
        if n <= EXHAUSTIVE_LIMIT {
            // local exchange form: z(S+i) + z(S+j) <= z(S) + z(S+i+j)
            for s in 0..1u64 << n {
                for i in 0..n {
                    if (s >> i) & 1 == 1 {
                        continue;
                    }
                    for j in i + 1..n {
                        if (s >> j) & 1 == 1 {
                            continue;
                        }
                        let (a, b) = (s | 1 << i, s | 1 << j);
                        if self.value(a) + self.value(b) > self.value(s) + self.value(a | b) {
                            return Err(Error::NotSupermodular { i: a, j: b });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let top = full(n);
            for _ in 0..SAMPLED_PAIRS {
                let a = rng.gen::<u64>() & top;
                let b = rng.gen::<u64>() & top;
                if self.value(a) + self.value(b) > self.value(a & b) + self.value(a | b) {
                    return Err(Error::NotSupermodular { i: a, j: b });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ground(&self) -> u64 {
        full(self.n())
    }

    pub fn value(&self, mask: u64) -> i64 {
        self.values[mask as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    fn check_subset(&self, mask: u64) -> Result<()> {
        if is_subset(mask, self.ground()) {
            Ok(())
        } else {
            Err(Error::NotASubset(mask))
        }
    }

    fn labels_of(&self, mask: u64) -> Vec<String> {
        bits::elements(mask)
            .map(|i| self.labels[i].clone())
            .collect()
    }

    /// `z|_I(J) = z(J)` on subsets of `I`.
    pub fn restrict(&self, mask: u64) -> Result<Self> {
        self.check_subset(mask)?;
        let k = bits::count(mask);
        let values = (0..1u64 << k)
            .map(|j| self.value(expand(j, mask)))
            .collect();
        Ok(SupermodularFunction {
            labels: self.labels_of(mask),
            values,
        })
    }

    /// `z/_I(J) = z(J | I) - z(I)` on subsets of `E \ I`.
    pub fn contract(&self, mask: u64) -> Result<Self> {
        self.check_subset(mask)?;
        let rest = self.ground() & !mask;
        let k = bits::count(rest);
        let base = self.value(mask);
        let values = (0..1u64 << k)
            .map(|j| self.value(expand(j, rest) | mask) - base)
            .collect();
        Ok(SupermodularFunction {
            labels: self.labels_of(rest),
            values,
        })
    }

    /// Vertex of the base polytope for the flag given by a total order.
    pub fn flag_vertex(&self, order: &[usize]) -> LatticeVector {
        let mut m = vec![0i64; self.n()];
        let mut prev = 0u64;
        for &e in order {
            let next = prev | 1 << e;
            m[e] = self.value(next) - self.value(prev);
            prev = next;
        }
        m
    }

    /// `P(z) = {sum m = z(E), <m, e^I> >= z(I)}`, from its flag vertices.
    pub fn base_polytope(&self) -> LatticePolytope {
        let verts: BTreeSet<LatticeVector> = permutations(self.n())
            .iter()
            .map(|o| self.flag_vertex(o))
            .collect();
        let verts: Vec<LatticeVector> = verts.into_iter().collect();
        LatticePolytope::from_points(&verts, self.n()).expect("flag vertices are nonempty")
    }

    /// Finest partition `E = I_1 + ... + I_k` with `z = sum z|_{I_k}`.
    pub fn irreducible_decomposition(&self) -> Vec<u64> {
        let e = self.ground();
        let total = self.value(e);
        let splitting: Vec<u64> = submasks(e)
            .into_iter()
            .filter(|&a| self.value(a) + self.value(e & !a) == total)
            .collect();
        let mut blocks: Vec<u64> = Vec::new();
        let mut covered = 0u64;
        for i in 0..self.n() {
            if (covered >> i) & 1 == 1 {
                continue;
            }
            let block = splitting
                .iter()
                .filter(|&&a| (a >> i) & 1 == 1)
                .fold(e, |acc, &a| acc & a);
            covered |= block;
            blocks.push(block);
        }
        blocks
    }

    pub fn is_irreducible(&self) -> bool {
        self.n() > 0 && self.irreducible_decomposition().len() == 1
    }

    /// Subsets `I` with `z|_I` and `z/_I` irreducible, i.e. the facet normals `e^I`.
    pub fn facet_subsets(&self) -> Result<Vec<u64>> {
        if !self.is_irreducible() {
            return Err(Error::Reducible);
        }
        let e = self.ground();
        let mut out: Vec<u64> = (1..e)
            .filter(|&i| {
                self.restrict(i)
                    .map(|z| z.is_irreducible())
                    .unwrap_or(false)
                    && self
                        .contract(i)
                        .map(|z| z.is_irreducible())
                        .unwrap_or(false)
            })
            .collect();
        out.sort_by(|a, b| bits::canonical_cmp(*a, *b));
        Ok(out)
    }

    /// `{I : z|_I irreducible}`, including `E` when `z` is irreducible.
    pub fn building_set(&self) -> BuildingSet {
        let members: Vec<u64> = (1..=self.ground())
            .filter(|&i| {
                self.restrict(i)
                    .map(|z| z.is_irreducible())
                    .unwrap_or(false)
            })
            .collect();
        BuildingSet::new_unchecked(self.n(), members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bubble() -> SupermodularFunction {
        SupermodularFunction::numbered(2, |m| [0, 1, 1, 3][m as usize]).unwrap()
    }

    #[test]
    fn bubble_base_polytope() {
        let p = bubble().base_polytope();
        assert_eq!(p.vertices(), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(p.ambient_hyperplane().unwrap().level, 3);
    }

    #[test]
    fn zero_function_is_a_point() {
        let z = SupermodularFunction::numbered(3, |_| 0).unwrap();
        assert_eq!(z.base_polytope().vertices(), &[vec![0, 0, 0]]);
        assert_eq!(z.irreducible_decomposition(), vec![1, 2, 4]);
    }

    #[test]
    fn restriction_and_contraction() {
        let z = bubble();
        assert_eq!(z.restrict(0b01).unwrap().values(), &[0, 1]);
        assert_eq!(z.contract(0).unwrap(), z);
        let c = z.contract(0b01).unwrap();
        assert_eq!(c.values(), &[0, 2]);
        assert_eq!(c.labels(), &["2".to_string()]);
        assert_eq!(z.restrict(0b100), Err(Error::NotASubset(0b100)));
    }

    #[test]
    fn decompositions() {
        let additive = SupermodularFunction::numbered(2, |m| [0, 1, 1, 2][m as usize]).unwrap();
        assert_eq!(additive.irreducible_decomposition(), vec![0b01, 0b10]);
        assert_eq!(bubble().irreducible_decomposition(), vec![0b11]);
        assert_eq!(additive.facet_subsets(), Err(Error::Reducible));
    }

    #[test]
    fn facets_and_building_set() {
        assert_eq!(bubble().facet_subsets().unwrap(), vec![0b01, 0b10]);
        assert_eq!(bubble().building_set().members(), &[0b01, 0b10, 0b11]);
        let single = SupermodularFunction::numbered(1, |m| 3 * m as i64).unwrap();
        assert!(single.facet_subsets().unwrap().is_empty());
    }

    #[test]
    fn rejects_submodular_input() {
        let bad = SupermodularFunction::numbered(2, |m| [0, 2, 2, 3][m as usize]);
        assert!(matches!(bad, Err(Error::NotSupermodular { .. })));
        assert_eq!(
            SupermodularFunction::numbered(1, |_| 1),
            Err(Error::NonzeroOnEmpty)
        );
    }

    #[test]
    fn counting_function_gives_six_vertices() {
        // number of nonempty subsets of I
        let z = SupermodularFunction::numbered(3, |m| (1i64 << m.count_ones()) - 1).unwrap();
        assert_eq!(z.base_polytope().vertices().len(), 6);
    }
}
