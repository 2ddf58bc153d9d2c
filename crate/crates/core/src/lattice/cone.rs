use serde::{Deserialize, Serialize};

use super::hull::{cone_hrep, HRep};
use super::linalg::{dot, gcd_slice, rank, smith_diagonal, to_i128, to_i64};
use crate::error::{Error, Result};

/// Integer vector in `N` or `M`.
pub type LatticeVector = Vec<i64>;

/// Primitive representative of the ray through `v`.
pub fn primitive(v: &[i64]) -> LatticeVector {
    let g = gcd_slice(&to_i128(v)) as i64;
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_slice(&to_i128(v)) == 1
}

pub fn pairing(m: &[i64], u: &[i64]) -> i64 {
    m.iter().zip(u).map(|(a, b)| a * b).sum()
}

/// Rational polyhedral cone `pos(u_1, ..., u_s)` with primitive, sorted,
/// irredundant generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cone {
    generators: Vec<LatticeVector>,
    rank: usize,
    generalized: bool,
}

impl Cone {
    /// Builds a strongly convex cone; redundant generators are dropped.
    pub fn new(generators: Vec<LatticeVector>, rank: usize) -> Result<Cone> {
        let cone = Self::build(generators, rank, false)?;
        if !cone.is_strongly_convex() {
            return Err(Error::NotStronglyConvex);
        }
        Ok(cone)
    }

    /// Cone that may contain lines.
    pub fn generalized(generators: Vec<LatticeVector>, rank: usize) -> Result<Cone> {
        Self::build(generators, rank, true)
    }

    fn build(generators: Vec<LatticeVector>, rank: usize, generalized: bool) -> Result<Cone> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: g.len(),
                });
            }
            if g.iter().any(|&x| x != 0) {
                gens.push(primitive(&g));
            }
        }
        gens.sort();
        gens.dedup();
        let mut cone = Cone {
            generators: gens,
            rank,
            generalized,
        };
        if !generalized {
            cone.drop_redundant();
        }
        Ok(cone)
    }

    fn drop_redundant(&mut self) {
        let h = self.hrep();
        if h.dim <= 1 || !self.pointed(&h) {
            return;
        }
        let eq_rank = h.equations.len();
        self.generators.retain(|g| {
            let g = to_i128(g);
            let mut tight: Vec<Vec<i128>> = h.equations.clone();
            tight.extend(h.facets.iter().filter(|f| dot(f, &g) == 0).cloned());
            rank(&tight, g.len()) == eq_rank + h.dim - 1
        });
    }

    pub(crate) fn hrep(&self) -> HRep {
        let gens: Vec<Vec<i128>> = self.generators.iter().map(|g| to_i128(g)).collect();
        cone_hrep(&gens, self.rank)
    }

    fn pointed(&self, h: &HRep) -> bool {
        let mut rows = h.equations.clone();
        rows.extend(h.facets.iter().cloned());
        rank(&rows, self.rank) == self.rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        let gens: Vec<Vec<i128>> = self.generators.iter().map(|g| to_i128(g)).collect();
        rank(&gens, self.rank)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.rank
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.pointed(&self.hrep())
    }

    /// Generators linearly independent.
    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Generators extend to a basis of the lattice.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        let gens: Vec<Vec<i128>> = self.generators.iter().map(|g| to_i128(g)).collect();
        smith_diagonal(&gens).iter().all(|&d| d == 1)
    }

    /// Absolute determinant of the generator matrix of a full-dimensional simplicial cone.
    pub fn multiplicity(&self) -> Option<u64> {
        if !(self.is_simplicial() && self.is_full_dimensional()) {
            return None;
        }
        let gens: Vec<Vec<i128>> = self.generators.iter().map(|g| to_i128(g)).collect();
        Some(super::linalg::det(&gens).unsigned_abs() as u64)
    }

    /// Inward facet normals (primitive; lifted with zeros when lower-dimensional).
    pub fn facet_normals(&self) -> Vec<LatticeVector> {
        self.hrep().facets.iter().map(|f| to_i64(f)).collect()
    }

    /// Facets as generator subsets.
    pub fn facets(&self) -> Vec<Cone> {
        let h = self.hrep();
        h.facets
            .iter()
            .map(|f| Cone {
                generators: self
                    .generators
                    .iter()
                    .filter(|g| dot(f, &to_i128(g)) == 0)
                    .cloned()
                    .collect(),
                rank: self.rank,
                generalized: self.generalized,
            })
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let h = self.hrep();
        let v = to_i128(v);
        h.equations.iter().all(|e| dot(e, &v) == 0) && h.facets.iter().all(|f| dot(f, &v) >= 0)
    }

    /// Relative interior membership.
    pub fn contains_relative_interior(&self, v: &[i64]) -> bool {
        let h = self.hrep();
        let v = to_i128(v);
        h.equations.iter().all(|e| dot(e, &v) == 0) && h.facets.iter().all(|f| dot(f, &v) > 0)
    }

    /// Smallest face containing `v`, or `None` if `v` is outside.
    pub fn face_containing(&self, v: &[i64]) -> Option<Cone> {
        let h = self.hrep();
        let v = to_i128(v);
        if !h.equations.iter().all(|e| dot(e, &v) == 0) {
            return None;
        }
        let mut gens = self.generators.clone();
        for f in &h.facets {
            let p = dot(f, &v);
            if p < 0 {
                return None;
            }
            if p == 0 {
                gens.retain(|g| dot(f, &to_i128(g)) == 0);
            }
        }
        Some(Cone {
            generators: gens,
            rank: self.rank,
            generalized: self.generalized,
        })
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if !self.generators.iter().all(|g| other.generators.contains(g)) {
            return false;
        }
        if self.generators.len() == other.generators.len() {
            return true;
        }
        let h = other.hrep();
        let own: Vec<Vec<i128>> = self.generators.iter().map(|g| to_i128(g)).collect();
        // a face is cut out by the facets that vanish on it
        let tight: Vec<&Vec<i128>> = h
            .facets
            .iter()
            .filter(|f| own.iter().all(|g| dot(f, g) == 0))
            .collect();
        let cut: Vec<&LatticeVector> = other
            .generators
            .iter()
            .filter(|g| tight.iter().all(|f| dot(f, &to_i128(g)) == 0))
            .collect();
        cut.len() == self.generators.len()
    }

    /// `(1,0),(0,1)` style line.
    pub fn dump(&self) -> String {
        self.generators
            .iter()
            .map(|g| {
                format!(
                    "({})",
                    g.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn is_smooth_cone(cone: &Cone) -> bool {
    cone.is_smooth()
}

pub fn is_simplicial_cone(cone: &Cone) -> bool {
    cone.is_simplicial()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothness() {
        let c = Cone::new(vec![vec![1, 0], vec![1, 1]], 2).unwrap();
        assert!(c.is_smooth());
        let c = Cone::new(vec![vec![1, 0], vec![1, 2]], 2).unwrap();
        assert!(c.is_simplicial());
        assert!(!c.is_smooth());
        assert_eq!(c.multiplicity(), Some(2));
    }

    #[test]
    fn cone_over_square_is_not_simplicial() {
        let c = Cone::new(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            3,
        )
        .unwrap();
        assert_eq!(c.generators().len(), 4);
        assert_eq!(c.dim(), 3);
        assert!(!c.is_simplicial());
        assert_eq!(c.facets().len(), 4);
    }

    #[test]
    fn line_is_rejected() {
        assert_eq!(
            Cone::new(vec![vec![1, 0], vec![-1, 0]], 2),
            Err(Error::NotStronglyConvex)
        );
        assert!(Cone::generalized(vec![vec![1, 0], vec![-1, 0]], 2).is_ok());
    }

    #[test]
    fn redundant_generators_dropped() {
        let c = Cone::new(vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![2, 2]], 2).unwrap();
        assert_eq!(c.generators(), &[vec![0, 1], vec![1, 0]]);
        assert!(c.contains(&[3, 1]));
        assert!(!c.contains(&[-1, 1]));
    }

    #[test]
    fn faces() {
        let c = Cone::new(vec![vec![1, 0], vec![0, 1]], 2).unwrap();
        let f = c.face_containing(&[2, 0]).unwrap();
        assert_eq!(f.generators(), &[vec![1, 0]]);
        assert!(f.is_face_of(&c));
        assert_eq!(c.face_containing(&[1, 1]).unwrap(), c);
    }
}
