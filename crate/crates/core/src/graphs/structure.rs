use serde::{Deserialize, Serialize};

use super::symanzik::mass_term;
use super::FeynmanGraph;
use crate::bits::{self, full};
use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::permutahedra::{BuildingSet, SupermodularFunction};
use crate::poly::SymbolicPolynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphClass {
    pub h1: i64,
    pub momentum_spanning: bool,
    pub mass_momentum_spanning: bool,
    pub motic: bool,
    pub s_irreducible: bool,
    /// Irreducibility of the restriction of `s_G`.
    pub irreducible: bool,
    pub one_vi_components: Vec<u64>,
}

/// Brown's splitting `X_G = X_{G|gamma} + R^X_{G|gamma}` of the Symanzik
/// polynomials, all in the edge variables of `G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrownSplit {
    pub psi: SymbolicPolynomial,
    pub r_psi: SymbolicPolynomial,
    pub phi: SymbolicPolynomial,
    pub r_phi: SymbolicPolynomial,
    pub big_phi: SymbolicPolynomial,
    pub r_big_phi: SymbolicPolynomial,
}

/// Facets of the Feynman polytope, split by whether the subgraph is m.m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetSplit {
    pub mass_momentum: Vec<u64>,
    pub scaleless: Vec<u64>,
}

impl FeynmanGraph {
    pub fn classify_subgraph(&self, mask: u64) -> Result<SubgraphClass> {
        if !bits::is_subset(mask, self.all_edges()) {
            return Err(Error::NotASubset(mask));
        }
        let s = self.s_value(mask);
        let motic = bits::elements(mask).all(|i| self.s_value(mask & !(1 << i)) < s);
        let irreducible = mask != 0
            && SupermodularFunction::from_fn(
                bits::elements(mask)
                    .map(|i| self.edges()[i].id.clone())
                    .collect(),
                |m| self.s_value(bits::expand(m, mask)),
            )?
            .is_irreducible();
        Ok(SubgraphClass {
            h1: self.h1(mask),
            momentum_spanning: self.is_momentum_spanning(mask),
            mass_momentum_spanning: self.is_mass_momentum_spanning(mask),
            motic,
            s_irreducible: self.subgraph_with_kinematics(mask)?.is_s_irreducible(),
            irreducible,
            one_vi_components: self.one_vi_components(mask),
        })
    }

    /// `s_G(gamma) = 2 h^1(gamma) + delta^mm(gamma)` over all edge subsets.
    pub fn s_function(&self) -> Result<SupermodularFunction> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        SupermodularFunction::from_fn(self.edge_ids(), |m| self.s_value(m))
    }

    /// Base polytope of `s_G`, the Newton polytope of `psi_G Phi_G`.
    pub fn feynman_polytope(&self) -> Result<LatticePolytope> {
        Ok(self.s_function()?.base_polytope())
    }

    pub fn facet_split(&self) -> Result<FacetSplit> {
        let facets = self.s_function()?.facet_subsets()?;
        let (mass_momentum, scaleless) = facets
            .into_iter()
            .partition(|&m| self.is_mass_momentum_spanning(m));
        Ok(FacetSplit {
            mass_momentum,
            scaleless,
        })
    }

    /// Subsets on which `s_G` restricts to an irreducible function; the
    /// Smirnov-Speer sectors.
    pub fn smirnov_building_set(&self) -> Result<BuildingSet> {
        Ok(self.s_function()?.building_set())
    }

    /// Nonempty motic subgraphs together with all single edges.
    pub fn motic_building_set(&self) -> Result<BuildingSet> {
        let n = self.num_edges();
        let e = full(n);
        let mut members: Vec<u64> = (1..=e)
            .filter(|&m| bits::elements(m).all(|i| self.s_value(m & !(1 << i)) < self.s_value(m)))
            .collect();
        members.extend((0..n).map(|i| 1u64 << i));
        BuildingSet::new(n, members)
    }

    /// Every proper nonempty subset: the Hepp sectors.
    pub fn hepp_building_set(&self) -> Result<BuildingSet> {
        BuildingSet::new(self.num_edges(), (1..full(self.num_edges())).collect())
    }

    pub fn brown_split(&self, mask: u64) -> Result<BrownSplit> {
        let n = self.num_edges();
        let inside: Vec<usize> = bits::elements(mask).collect();
        let outside: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 0).collect();
        let gamma = self.subgraph_with_kinematics(mask)?.symanzik()?;
        let quot = self.quotient(mask)?.symanzik()?;
        let lift_in = |p: &SymbolicPolynomial| p.embed(n, &inside);
        let lift_out = |p: &SymbolicPolynomial| p.embed(n, &outside);
        let full_sym = self.symanzik()?;

        let psi = lift_in(&gamma.psi).mul(&lift_out(&quot.psi));
        let phi = if self.is_momentum_spanning(mask) {
            let routed = self.edge_subgraph(mask, true, false)?.phi()?;
            lift_in(&routed).mul(&lift_out(&quot.psi))
        } else {
            lift_in(&gamma.psi).mul(&lift_out(&quot.phi))
        };
        let r_psi = full_sym.psi.sub(&psi);
        let r_phi = full_sym.phi.sub(&phi);
        let all_masses = mass_term(self, self.all_edges());
        let mut r_big_phi = r_phi.add(&r_psi.mul(&all_masses));
        if !self.is_mass_momentum_spanning(mask) {
            r_big_phi = r_big_phi.add(&psi.mul(&mass_term(self, mask)));
        }
        let big_phi = full_sym.big_phi.sub(&r_big_phi);
        Ok(BrownSplit {
            psi,
            r_psi,
            phi,
            r_phi,
            big_phi,
            r_big_phi,
        })
    }
}
