use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cone::{is_primitive, pairing, Cone, LatticeVector};
use super::linalg::{dot, to_i128};
use super::polytope::LatticePolytope;
use crate::error::{Error, Result};

/// Fan given by its maximal cones. Generalized fans record a lineality
/// space; their cones are stored modulo it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    maximal_cones: Vec<Cone>,
    rank: usize,
    label: String,
    lineality: Vec<LatticeVector>,
}

/// Outcome of a refinement check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub holds: bool,
    /// A maximal cone of the finer candidate that fails, if any.
    pub witness: Option<Cone>,
}

pub enum RefinementTarget<'a> {
    Fan(&'a Fan),
    Polytope(&'a LatticePolytope),
}

impl Fan {
    pub fn new(cones: Vec<Cone>, rank: usize, label: impl Into<String>) -> Result<Fan> {
        Self::with_lineality(cones, Vec::new(), rank, label)
    }

    pub fn with_lineality(
        mut cones: Vec<Cone>,
        lineality: Vec<LatticeVector>,
        rank: usize,
        label: impl Into<String>,
    ) -> Result<Fan> {
        for c in &cones {
            if c.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: c.rank(),
                });
            }
        }
        cones.sort();
        cones.dedup();
        Ok(Fan {
            maximal_cones: cones,
            rank,
            label: label.into(),
            lineality,
        })
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Fan {
        self.label = label.into();
        self
    }

    /// Ray generators in canonical order.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let mut rays: Vec<LatticeVector> = self
            .maximal_cones
            .iter()
            .flat_map(|c| c.generators().iter().cloned())
            .collect();
        rays.sort();
        rays.dedup();
        rays
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal_cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.maximal_cones.iter().all(Cone::is_smooth)
    }

    /// Cone together with both signs of the lineality generators.
    fn with_lines(&self, c: &Cone) -> Cone {
        if self.lineality.is_empty() {
            return c.clone();
        }
        let mut gens = c.generators().to_vec();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        Cone::generalized(gens, self.rank).expect("ranks agree")
    }

    /// Every maximal cone is full-dimensional and every wall is shared by
    /// exactly two of them.
    pub fn is_complete(&self) -> bool {
        if self.maximal_cones.is_empty() {
            return false;
        }
        let mut walls: BTreeMap<Vec<LatticeVector>, usize> = BTreeMap::new();
        for c in &self.maximal_cones {
            let full = self.with_lines(c);
            if !full.is_full_dimensional() {
                return false;
            }
            for f in full.facets() {
                *walls.entry(f.generators().to_vec()).or_default() += 1;
            }
        }
        walls.values().all(|&n| n == 2)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.maximal_cones
            .iter()
            .any(|c| self.with_lines(c).contains(v))
    }

    /// First maximal cone (in canonical order) containing `v`.
    pub fn cone_containing(&self, v: &[i64]) -> Option<&Cone> {
        self.maximal_cones
            .iter()
            .find(|c| self.with_lines(c).contains(v))
    }

    /// Star subdivision `Sigma*(nu)`.
    pub fn star_subdivision(&self, nu: &[i64]) -> Result<Fan> {
        if nu.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: nu.len(),
            });
        }
        if !self.lineality.is_empty() {
            return Err(Error::Unsupported(
                "star subdivision of a generalized fan".into(),
            ));
        }
        if !is_primitive(nu) {
            return Err(Error::NotPrimitive(nu.to_vec()));
        }
        if !self.contains(nu) {
            return Err(Error::NotInSupport(nu.to_vec()));
        }
        let nu128 = to_i128(nu);
        let mut cones = Vec::new();
        for sigma in &self.maximal_cones {
            if !sigma.contains(nu)
                || (sigma.is_simplicial() && sigma.generators().iter().any(|g| g == nu))
            {
                cones.push(sigma.clone());
                continue;
            }
            let h = sigma.hrep();
            for f in &h.facets {
                if dot(f, &nu128) == 0 {
                    continue;
                }
                let mut gens: Vec<LatticeVector> = sigma
                    .generators()
                    .iter()
                    .filter(|g| dot(f, &to_i128(g)) == 0)
                    .cloned()
                    .collect();
                gens.push(nu.to_vec());
                cones.push(Cone::new(gens, self.rank)?);
            }
        }
        Fan::new(cones, self.rank, self.label.clone())
    }

    /// Simplicial refinement with the same rays, by star subdivision at every
    /// ray in canonical order.
    pub fn simplicial_refine(&self) -> Fan {
        if !self.lineality.is_empty() || self.is_simplicial() {
            return self.clone();
        }
        let mut fan = self.clone();
        for r in self.rays() {
            fan = fan.star_subdivision(&r).expect("rays lie in the support");
        }
        fan
    }

    /// `(a,b),(c,d)` per maximal cone, one cone per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.maximal_cones {
            out.push_str(&c.dump());
            out.push('\n');
        }
        out
    }
}

/// Maximal cones `sigma_v = pos(u_F : v in F)`, one per vertex, in vertex order.
pub fn normal_fan(p: &LatticePolytope) -> Fan {
    let cones: Vec<Cone> = p
        .vertices()
        .iter()
        .map(|v| {
            let gens: Vec<LatticeVector> = p
                .facets()
                .iter()
                .filter(|f| pairing(v, &f.normal) == -f.offset)
                .map(|f| f.normal.clone())
                .collect();
            Cone::new(gens, p.rank()).expect("normal cones are strongly convex")
        })
        .collect();
    let lineality = p.equations().iter().map(|e| e.normal.clone()).collect();
    Fan::with_lineality(cones, lineality, p.rank(), "normal").expect("ranks agree")
}

/// Normal fan of a homogeneous polytope in the projective chart of `N_E`.
pub fn normal_fan_projective(p: &LatticePolytope) -> Result<Fan> {
    Ok(normal_fan(&p.projective()?))
}

fn common_minimizer(p: &LatticePolytope, gens: &[LatticeVector]) -> Option<LatticeVector> {
    let mut candidates: Vec<&LatticeVector> = p.vertices().iter().collect();
    for u in gens {
        let d = p.min_pairing(u);
        candidates.retain(|m| pairing(m, u) == d);
    }
    match candidates.as_slice() {
        [m] => Some((*m).clone()),
        _ => None,
    }
}

/// The unique vertex minimizing every generator of a full-dimensional cone,
/// if there is one.
pub fn vertex_for_cone(p: &LatticePolytope, sigma: &Cone) -> Result<Option<LatticeVector>> {
    if sigma.rank() != p.rank() {
        return Err(Error::RankMismatch {
            expected: p.rank(),
            found: sigma.rank(),
        });
    }
    if sigma.is_generalized() && !sigma.is_strongly_convex() {
        return Err(Error::NotStronglyConvex);
    }
    if !sigma.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(common_minimizer(p, sigma.generators()))
}

pub fn refines(fan: &Fan, target: RefinementTarget<'_>) -> Result<Refinement> {
    match target {
        RefinementTarget::Fan(coarse) => refines_fan(fan, coarse),
        RefinementTarget::Polytope(p) => refines_polytope(fan, p),
    }
}

pub fn refines_polytope(fan: &Fan, p: &LatticePolytope) -> Result<Refinement> {
    if fan.rank() != p.rank() {
        return Err(Error::RankMismatch {
            expected: p.rank(),
            found: fan.rank(),
        });
    }
    if !fan.is_complete() {
        return Ok(Refinement {
            holds: false,
            witness: None,
        });
    }
    for c in fan.maximal_cones() {
        let mut gens = c.generators().to_vec();
        for l in fan.lineality() {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        if common_minimizer(p, &gens).is_none() {
            return Ok(Refinement {
                holds: false,
                witness: Some(c.clone()),
            });
        }
    }
    Ok(Refinement {
        holds: true,
        witness: None,
    })
}

pub fn refines_fan(fine: &Fan, coarse: &Fan) -> Result<Refinement> {
    if fine.rank() != coarse.rank() {
        return Err(Error::RankMismatch {
            expected: coarse.rank(),
            found: fine.rank(),
        });
    }
    if coarse.is_complete() && !fine.is_complete() {
        return Ok(Refinement {
            holds: false,
            witness: None,
        });
    }
    let coarse_cones: Vec<Cone> = coarse
        .maximal_cones()
        .iter()
        .map(|c| coarse.with_lines(c))
        .collect();
    for c in fine.maximal_cones() {
        let inside = coarse_cones.iter().any(|big| {
            c.generators().iter().all(|g| big.contains(g))
                && fine.lineality().iter().all(|l| {
                    big.contains(l) && big.contains(&l.iter().map(|x| -x).collect::<Vec<_>>())
                })
        });
        if !inside {
            return Ok(Refinement {
                holds: false,
                witness: Some(c.clone()),
            });
        }
    }
    Ok(Refinement {
        holds: true,
        witness: None,
    })
}

/// Sum of `|det|` over full-dimensional simplicial maximal cones.
pub fn total_multiplicity(fan: &Fan) -> Option<u64> {
    fan.maximal_cones().iter().map(Cone::multiplicity).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(g: &[&[i64]]) -> Cone {
        let r = g[0].len();
        Cone::new(g.iter().map(|v| v.to_vec()).collect(), r).unwrap()
    }

    fn p2() -> Fan {
        Fan::new(
            vec![
                cone(&[&[1, 0], &[0, 1]]),
                cone(&[&[0, 1], &[-1, -1]]),
                cone(&[&[-1, -1], &[1, 0]]),
            ],
            2,
            "P2",
        )
        .unwrap()
    }

    #[test]
    fn segment_normal_fan() {
        let p = LatticePolytope::from_points(&[vec![0], vec![2]], 1).unwrap();
        let f = normal_fan(&p);
        assert_eq!(f.rays(), vec![vec![-1], vec![1]]);
        assert!(f.is_complete());
    }

    #[test]
    fn square_normal_fan_has_four_quadrants() {
        let p = LatticePolytope::from_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], 2)
            .unwrap();
        let f = normal_fan(&p);
        assert_eq!(f.maximal_cones().len(), 4);
        assert!(f.is_smooth());
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(vertex_for_cone(&p, &q).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn projective_segment() {
        let p = LatticePolytope::from_points(&[vec![2, 1], vec![1, 2]], 2).unwrap();
        let f = normal_fan_projective(&p).unwrap();
        assert_eq!(f.rays(), vec![vec![-1], vec![1]]);
        let chart = p.projective().unwrap();
        let sigma = Cone::new(vec![vec![1]], 1).unwrap();
        assert_eq!(vertex_for_cone(&chart, &sigma).unwrap(), Some(vec![1]));
    }

    #[test]
    fn degenerate_cone_is_rejected() {
        let p = LatticePolytope::from_points(&[vec![0, 0], vec![1, 0]], 2).unwrap();
        let sigma = Cone::generalized(vec![vec![1, 0], vec![-1, 0]], 2).unwrap();
        assert_eq!(vertex_for_cone(&p, &sigma), Err(Error::NotStronglyConvex));
    }

    #[test]
    fn blow_up_of_a_point() {
        let f = p2().star_subdivision(&[1, 1]).unwrap();
        assert_eq!(f.maximal_cones().len(), 4);
        assert!(f.is_complete());
        assert!(f.is_smooth());
        assert!(refines_fan(&f, &p2()).unwrap().holds);
        assert_eq!(p2().star_subdivision(&[1, 0]).unwrap(), p2());
        assert_eq!(
            p2().star_subdivision(&[2, 0]),
            Err(Error::NotPrimitive(vec![2, 0]))
        );
    }

    #[test]
    fn cone_over_square() {
        let sq = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let f = Fan::new(vec![sq.clone()], 3, "sq").unwrap();
        let star = f.star_subdivision(&[1, 1, 1]).unwrap();
        assert_eq!(star.maximal_cones().len(), 4);
        assert!(star.is_simplicial());
        let tri = f.simplicial_refine();
        assert_eq!(tri.maximal_cones().len(), 2);
        assert_eq!(tri.rays(), f.rays());
        assert!(refines_fan(&tri, &f).unwrap().holds);
        assert_eq!(
            f.star_subdivision(&[-1, 0, 0]),
            Err(Error::NotInSupport(vec![-1, 0, 0]))
        );
    }

    #[test]
    fn incomplete_fan_fails_polytope_refinement() {
        let p = LatticePolytope::from_points(&[vec![1], vec![2]], 1).unwrap();
        let f = Fan::new(vec![Cone::new(vec![vec![1]], 1).unwrap()], 1, "half").unwrap();
        assert!(!refines_polytope(&f, &p).unwrap().holds);
        assert!(refines_polytope(&normal_fan(&p), &p).unwrap().holds);
    }

    #[test]
    fn cube_is_already_smooth() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]);
        }
        let f = normal_fan(&LatticePolytope::from_points(&pts, 3).unwrap());
        assert!(f.is_smooth());
        assert_eq!(f.simplicial_refine(), f);
    }

    #[test]
    fn dump_lists_one_cone_per_line() {
        assert_eq!(p2().dump().lines().count(), 3);
        assert!(p2().dump().contains("(0,1),(1,0)"));
    }
}
