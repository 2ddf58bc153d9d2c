use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::FeynmanGraph;
use crate::bits;
use crate::error::{Error, Result};
use crate::limits::max_edges;
use crate::poly::{KinSymbol, LaurentPolynomial, SymbolicCoeff, SymbolicPolynomial};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symanzik {
    pub psi: SymbolicPolynomial,
    pub phi: SymbolicPolynomial,
    /// `phi + (sum_e m_e^2 alpha_e) psi`
    pub big_phi: SymbolicPolynomial,
}

fn complement_monomial(n: usize, forest: u64) -> Vec<i64> {
    (0..n).map(|i| i64::from((forest >> i) & 1 == 0)).collect()
}

/// `sum_e m_e^2 alpha_e` over the massive edges in `mask`.
pub fn mass_term(g: &FeynmanGraph, mask: u64) -> SymbolicPolynomial {
    let n = g.num_edges();
    let mut p = SymbolicPolynomial::zero(n);
    for i in bits::elements(mask & g.massive_edges()) {
        let mut e = vec![0; n];
        e[i] = 1;
        p.add_term(
            e,
            SymbolicCoeff::symbol(KinSymbol::M2(g.edges()[i].id.clone())),
        );
    }
    p
}

impl FeynmanGraph {
    fn guard(&self) -> Result<()> {
        let limit = max_edges();
        if self.num_edges() > limit {
            return Err(Error::TooLarge {
                what: "edges",
                size: self.num_edges(),
                limit,
            });
        }
        Ok(())
    }

    pub fn psi(&self) -> Result<SymbolicPolynomial> {
        self.guard()?;
        let n = self.num_edges();
        Ok(SymbolicPolynomial::from_terms(
            n,
            self.spanning_forests()
                .into_iter()
                .map(|f| (complement_monomial(n, f), SymbolicCoeff::one())),
        ))
    }

    pub fn phi(&self) -> Result<SymbolicPolynomial> {
        self.guard()?;
        let n = self.num_edges();
        let mut p = SymbolicPolynomial::zero(n);
        for (f, t1) in self.spanning_2forests() {
            if let Some(sym) = self.sq_symbol(&self.labels_on(t1))? {
                p.add_term(complement_monomial(n, f), SymbolicCoeff::symbol(sym));
            }
        }
        Ok(p)
    }

    /// First and second Symanzik polynomials. Disconnected graphs use forests
    /// and 2-forests, which gives the product formulas over components.
    pub fn symanzik(&self) -> Result<Symanzik> {
        let psi = self.psi()?;
        let phi = self.phi()?;
        let big_phi = phi.add(&psi.mul(&mass_term(self, self.all_edges())));
        Ok(Symanzik { psi, phi, big_phi })
    }

    /// `psi` from the weighted matrix-tree theorem: the reduced Laplacian with
    /// edge weights `1/alpha_e`, times `prod_e alpha_e`.
    pub fn kirchhoff_psi(&self) -> Result<SymbolicPolynomial> {
        self.guard()?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.num_edges();
        let k = self.num_vertices().saturating_sub(1);
        type P = LaurentPolynomial<Rational64>;
        let inv = |i: usize| {
            let mut e = vec![0; n];
            e[i] = -1;
            P::monomial(e, Rational64::one())
        };
        let mut lap = vec![vec![P::zero(n); k]; k];
        for (i, e) in self.edges().iter().enumerate() {
            let (a, b) = e.ends;
            if a == b {
                continue;
            }
            let w = inv(i);
            for v in [a, b] {
                if v > 0 {
                    lap[v - 1][v - 1] = lap[v - 1][v - 1].add(&w);
                }
            }
            if a > 0 && b > 0 {
                lap[a - 1][b - 1] = lap[a - 1][b - 1].sub(&w);
                lap[b - 1][a - 1] = lap[b - 1][a - 1].sub(&w);
            }
        }
        // Laplace expansion row by row, memoized on the set of used columns.
        let mut layer: HashMap<u64, P> = HashMap::from([(0, P::one(n))]);
        for row in lap.iter() {
            let mut next: HashMap<u64, P> = HashMap::new();
            for (used, acc) in &layer {
                for (j, entry) in row.iter().enumerate() {
                    if (used >> j) & 1 == 1 || entry.is_zero() {
                        continue;
                    }
                    let above = bits::count(used >> (j + 1));
                    let mut term = acc.mul(entry);
                    if above % 2 == 1 {
                        term = term.scale(&-Rational64::one());
                    }
                    let slot = next.entry(used | 1 << j).or_insert_with(|| P::zero(n));
                    *slot = slot.add(&term);
                }
            }
            layer = next;
        }
        let det = layer.remove(&bits::full(k)).unwrap_or_else(|| P::zero(n));
        let det = det.mul_monomial(&vec![1; n]);
        Ok(det.map_coeffs(|c| {
            if c.is_zero() {
                SymbolicCoeff::zero()
            } else {
                SymbolicCoeff::rational(*c)
            }
        }))
    }
}
