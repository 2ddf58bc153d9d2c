use serde::{Deserialize, Serialize};

use super::cone::{pairing, LatticeVector};
use super::hull::cone_hrep;
use super::linalg::{self, dot, gcd_slice, to_i128, to_i64};
use crate::error::{Error, Result};

/// Facet inequality `<m, normal> >= -offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: i64,
}

impl Facet {
    pub fn bound(&self) -> i64 {
        -self.offset
    }
}

/// Equation `<m, normal> = level` satisfied by the whole polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Equation {
    pub normal: LatticeVector,
    pub level: i64,
}

/// Lattice polytope with vertices and an irredundant facet presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    rank: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
    equations: Vec<Equation>,
}

/// Minimum of `<m, u>` over `support` together with the minimizers.
pub fn min_pairing_face(support: &[LatticeVector], u: &[i64]) -> Result<(i64, Vec<LatticeVector>)> {
    let min = support
        .iter()
        .map(|m| pairing(m, u))
        .min()
        .ok_or(Error::EmptyPolytope)?;
    let face = support
        .iter()
        .filter(|m| pairing(m, u) == min)
        .cloned()
        .collect();
    Ok((min, face))
}

/// `d_u = min <m, u>` over `support`.
pub fn min_pairing(support: &[LatticeVector], u: &[i64]) -> Result<i64> {
    min_pairing_face(support, u).map(|(d, _)| d)
}

impl LatticePolytope {
    /// Convex hull of a finite point set.
    pub fn from_points(points: &[LatticeVector], rank: usize) -> Result<LatticePolytope> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        for p in points {
            if p.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: p.len(),
                });
            }
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let homog: Vec<Vec<i128>> = pts
            .iter()
            .map(|p| {
                let mut v = to_i128(p);
                v.push(1);
                v
            })
            .collect();
        let h = cone_hrep(&homog, rank + 1);

        let mut facets: Vec<Facet> = Vec::new();
        for f in &h.facets {
            if !homog.iter().any(|v| dot(f, v) == 0) {
                continue;
            }
            let mut normal = f[..rank].to_vec();
            let g = gcd_slice(&normal);
            if g == 0 {
                continue;
            }
            for x in normal.iter_mut() {
                *x /= g;
            }
            facets.push(Facet {
                normal: to_i64(&normal),
                offset: (f[rank] / g) as i64,
            });
        }
        facets.sort();
        facets.dedup();

        let mut equations: Vec<Equation> = h
            .equations
            .iter()
            .map(|e| {
                let mut normal = e[..rank].to_vec();
                let mut level = -e[rank];
                if normal.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    normal.iter_mut().for_each(|x| *x = -*x);
                    level = -level;
                }
                Equation {
                    normal: to_i64(&normal),
                    level: level as i64,
                }
            })
            .collect();
        equations.sort();

        let eq_rows: Vec<Vec<i128>> = equations.iter().map(|e| to_i128(&e.normal)).collect();
        let vertices: Vec<LatticeVector> = pts
            .into_iter()
            .filter(|p| {
                let mut tight = eq_rows.clone();
                tight.extend(
                    facets
                        .iter()
                        .filter(|f| pairing(p, &f.normal) == -f.offset)
                        .map(|f| to_i128(&f.normal)),
                );
                linalg::rank(&tight, rank) == rank
            })
            .collect();
        Ok(LatticePolytope {
            rank,
            vertices,
            facets,
            equations,
        })
    }

    pub fn point(m: LatticeVector) -> LatticePolytope {
        let rank = m.len();
        Self::from_points(&[m], rank).expect("a single point is a polytope")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// The single hyperplane containing a codimension one polytope.
    pub fn ambient_hyperplane(&self) -> Option<&Equation> {
        match self.equations.as_slice() {
            [e] => Some(e),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.equations
            .iter()
            .all(|e| pairing(m, &e.normal) == e.level)
            && self
                .facets
                .iter()
                .all(|f| pairing(m, &f.normal) >= -f.offset)
    }

    pub fn min_pairing(&self, u: &[i64]) -> i64 {
        min_pairing(&self.vertices, u).expect("polytopes are nonempty")
    }

    /// Vertices of the face `F_u`.
    pub fn face(&self, u: &[i64]) -> Vec<LatticeVector> {
        min_pairing_face(&self.vertices, u)
            .expect("polytopes are nonempty")
            .1
    }

    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_points(&pts, self.rank)
    }

    /// Image in the chart `M_E = {sum m = d}` obtained by dropping the last
    /// coordinate. Fails unless all vertices lie on a common level of the
    /// all-ones functional.
    pub fn projective(&self) -> Result<LatticePolytope> {
        let levels: Vec<i64> = self.vertices.iter().map(|m| m.iter().sum()).collect();
        if levels.iter().any(|&l| l != levels[0]) || self.rank == 0 {
            return Err(Error::Unsupported("polytope is not homogeneous".into()));
        }
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|m| super::projective::chart_point(m))
            .collect();
        Self::from_points(&pts, self.rank - 1)
    }

    /// Level `d` of the all-ones functional if the polytope is homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let d: i64 = self.vertices.first()?.iter().sum();
        self.vertices
            .iter()
            .all(|m| m.iter().sum::<i64>() == d)
            .then_some(d)
    }

    /// One line per vertex (`v (..)`), equation (`e (..) = l`) and facet (`f (..) >= b`).
    pub fn dump(&self) -> String {
        let tuple = |v: &[i64]| {
            format!(
                "({})",
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        };
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("v {}\n", tuple(v)));
        }
        for e in &self.equations {
            out.push_str(&format!("e {} = {}\n", tuple(&e.normal), e.level));
        }
        for f in &self.facets {
            out.push_str(&format!("f {} >= {}\n", tuple(&f.normal), -f.offset));
        }
        out
    }
}
