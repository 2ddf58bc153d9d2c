//! Mellin transforms `M(f, g, s, c) = int t^s prod f_i^{-c_i} g dt/t` of
//! Laurent polynomials over the positive torus.

mod ibp;
mod kernel;

pub use ibp::{
    continue_to, ibp_derivative, ContinuationSum, ContinuationTerm, IntScale, Prefactor,
    DEFAULT_MAX_STEPS, MAX_TERMS,
};
pub(crate) use kernel::power_for;
pub use kernel::{branch_log, LogKernel};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::linalg::{det, to_i128};
use crate::lattice::{normal_fan, pairing, refines_polytope, Fan, LatticePolytope, LatticeVector};
use crate::numeric::{Affine, CubatureOptions};
use crate::poly::{newton_polytope, ComplexPolynomial};

/// `min_{m in supp h} <m, u>`, `None` for the zero polynomial.
pub fn order_along(h: &ComplexPolynomial, u: &[i64]) -> Option<i64> {
    h.terms().keys().map(|m| pairing(m, u)).min()
}

/// Direction bisecting the arguments of the coefficients, if they lie in an
/// open half-plane.
pub fn half_plane_direction(f: &ComplexPolynomial) -> Option<f64> {
    use std::f64::consts::TAU;
    let mut args: Vec<f64> = f
        .terms()
        .values()
        .filter(|c| !c.is_zero())
        .map(|c| c.arg().rem_euclid(TAU))
        .collect();
    if args.is_empty() {
        return None;
    }
    args.sort_by(f64::total_cmp);
    let k = args.len();
    let (mut best_gap, mut best_idx) = (-1.0, 0);
    for i in 0..k {
        let next = if i + 1 < k {
            args[i + 1]
        } else {
            args[0] + TAU
        };
        let gap = next - args[i];
        if gap > best_gap {
            best_gap = gap;
            best_idx = i;
        }
    }
    if best_gap <= std::f64::consts::PI + 1e-12 {
        return None;
    }
    let start = if best_idx + 1 < k {
        args[best_idx + 1]
    } else {
        args[0]
    };
    Some(start + (TAU - best_gap) / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub polynomial: ComplexPolynomial,
    pub exponent: Affine,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinProblem {
    n: usize,
    factors: Vec<Factor>,
    numerator: ComplexPolynomial,
    s: Vec<Affine>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub converges: bool,
    pub violated: Vec<LatticeVector>,
    /// Ray and `<s,u> - d_u(c) + d_u(g)` at the requested point.
    pub slacks: Vec<(LatticeVector, f64)>,
}

/// One maximal cone of a simplicial refinement together with the
/// dehomogenized integrand `|det U| prod x^{a_j - 1} prod f_sigma^{-c} g_sigma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub generators: Vec<LatticeVector>,
    pub jacobian: i64,
    /// `d_{u_j}(f_i)` indexed `[i][j]`.
    pub leading_orders: Vec<Vec<i64>>,
    pub exponents: Vec<Affine>,
    pub factors: Vec<ComplexPolynomial>,
    pub numerator: ComplexPolynomial,
}

impl Sector {
    /// Smallest modulus of the dehomogenized factors over `samples` seeded
    /// uniform points of the unit cube, together with the corners.
    pub fn min_modulus(&self, samples: usize, seed: u64) -> f64 {
        let d = self.exponents.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<Vec<f64>> = (0..(1usize << d.min(10)))
            .map(|m| {
                (0..d)
                    .map(|j| {
                        if j < 10 && (m >> j) & 1 == 1 {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        points.extend((0..samples).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect::<Vec<f64>>()));
        points
            .iter()
            .flat_map(|x| self.factors.iter().map(move |f| f.eval_real(x).norm()))
            .fold(f64::INFINITY, f64::min)
    }
}

impl MellinProblem {
    pub fn new(
        factors: Vec<(ComplexPolynomial, Affine)>,
        numerator: ComplexPolynomial,
        s: Vec<Affine>,
    ) -> Result<Self> {
        let n = s.len();
        let mut out = Vec::new();
        for (i, (f, c)) in factors.into_iter().enumerate() {
            if f.nvars() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: f.nvars(),
                });
            }
            let theta = half_plane_direction(&f).ok_or(Error::NotHalfPlane(i))?;
            out.push(Factor {
                polynomial: f,
                exponent: c,
                theta,
            });
        }
        if numerator.nvars() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: numerator.nvars(),
            });
        }
        Ok(MellinProblem {
            n,
            factors: out,
            numerator,
            s,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn numerator(&self) -> &ComplexPolynomial {
        &self.numerator
    }

    pub fn s(&self) -> &[Affine] {
        &self.s
    }

    pub fn exponents(&self) -> Vec<Affine> {
        self.factors.iter().map(|f| f.exponent).collect()
    }

    /// Same factors with a new numerator and shifted exponents `c + shift`.
    pub fn with_term(&self, numerator: ComplexPolynomial, shift: &[i64]) -> MellinProblem {
        let mut p = self.clone();
        p.numerator = numerator;
        for (f, k) in p.factors.iter_mut().zip(shift) {
            f.exponent = f.exponent + Affine::integer(*k);
        }
        p
    }

    /// `P(f_1 ... f_k)` as a Minkowski sum.
    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        let mut acc: Option<LatticePolytope> = None;
        for f in &self.factors {
            let p = newton_polytope(&f.polynomial)?;
            acc = Some(match acc {
                None => p,
                Some(a) => a.minkowski_sum(&p)?,
            });
        }
        acc.ok_or(Error::Degenerate)
    }

    fn full_dimensional_polytope(&self) -> Result<LatticePolytope> {
        let p = self.newton_polytope()?;
        if !p.is_full_dimensional() {
            return Err(Error::Degenerate);
        }
        Ok(p)
    }

    /// `<s,u> - sum c_i d_u(f_i) + d_u(g)`; `None` if `g = 0`.
    pub fn slack(&self, u: &[i64]) -> Option<Affine> {
        let dg = order_along(&self.numerator, u)?;
        let mut a = Affine::integer(dg);
        for (sj, uj) in self.s.iter().zip(u) {
            a = a + sj.scale((*uj).into());
        }
        for f in &self.factors {
            let d = order_along(&f.polynomial, u).expect("factors are nonzero");
            a = a - f.exponent.scale(d.into());
        }
        Some(a)
    }

    /// Rays of the normal fan of the Newton polytope.
    pub fn rays(&self) -> Result<Vec<LatticeVector>> {
        if self.n == 0 {
            return Ok(Vec::new());
        }
        Ok(normal_fan(&self.full_dimensional_polytope()?).rays())
    }

    pub fn convergence_check(&self, eps: f64) -> Result<Convergence> {
        let rays = self.rays()?;
        let mut violated = Vec::new();
        let mut slacks = Vec::new();
        for u in rays {
            let v = self.slack(&u).map_or(f64::INFINITY, |a| a.at(eps));
            if v <= 0.0 {
                violated.push(u.clone());
            }
            slacks.push((u, v));
        }
        Ok(Convergence {
            converges: violated.is_empty(),
            violated,
            slacks,
        })
    }

    /// A simplicial refinement of the normal fan with the same rays.
    pub fn default_fan(&self) -> Result<Fan> {
        Ok(normal_fan(&self.full_dimensional_polytope()?).simplicial_refine())
    }

    pub fn sector_decompose(&self, fan: &Fan) -> Result<Vec<Sector>> {
        if self.n == 0 {
            return Ok(vec![self.point_sector()]);
        }
        let p = self.full_dimensional_polytope()?;
        let check = refines_polytope(fan, &p)?;
        if !check.holds {
            let witness = check
                .witness
                .map(|c| c.generators().to_vec())
                .unwrap_or_default();
            return Err(Error::NotRefinement { witness });
        }
        if !fan.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        fan.maximal_cones()
            .iter()
            .map(|cone| self.sector_for(cone.generators()))
            .collect()
    }

    fn point_sector(&self) -> Sector {
        Sector {
            generators: Vec::new(),
            jacobian: 1,
            leading_orders: vec![Vec::new(); self.factors.len()],
            exponents: Vec::new(),
            factors: self.factors.iter().map(|f| f.polynomial.clone()).collect(),
            numerator: self.numerator.clone(),
        }
    }

    fn sector_for(&self, gens: &[LatticeVector]) -> Result<Sector> {
        let d = gens.len();
        let jacobian = det(&gens.iter().map(|g| to_i128(g)).collect::<Vec<_>>()).abs() as i64;
        let dehomogenize = |h: &ComplexPolynomial| -> (ComplexPolynomial, Vec<i64>) {
            let orders: Vec<i64> = gens
                .iter()
                .map(|u| order_along(h, u).unwrap_or(0))
                .collect();
            let shift: Vec<i64> = orders.iter().map(|x| -x).collect();
            (h.substitute_monomial(gens).mul_monomial(&shift), orders)
        };
        let mut factors = Vec::new();
        let mut leading_orders = Vec::new();
        for f in &self.factors {
            let (fs, orders) = dehomogenize(&f.polynomial);
            if fs.coefficient(&vec![0; d]).is_zero() {
                return Err(Error::NotRefinement {
                    witness: gens.to_vec(),
                });
            }
            factors.push(fs);
            leading_orders.push(orders);
        }
        let (numerator, _) = dehomogenize(&self.numerator);
        let exponents = gens
            .iter()
            .map(|u| self.slack(u).unwrap_or(Affine::integer(1)))
            .collect();
        Ok(Sector {
            generators: gens.to_vec(),
            jacobian,
            leading_orders,
            exponents,
            factors,
            numerator,
        })
    }

    /// Kernel integrating `prod x^{a-1} F0 Lambda^k / k!` where `F0` is the
    /// sector integrand at `eps0` and `Lambda` its `eps`-derivative of the logarithm.
    pub fn log_kernel(&self, sector: &Sector, eps0: f64, order: usize) -> LogKernel {
        LogKernel {
            a0: sector.exponents.iter().map(|a| a.at(eps0)).collect(),
            a1: sector
                .exponents
                .iter()
                .map(|a| a.at(1.0) - a.at(0.0))
                .collect(),
            c0: self.factors.iter().map(|f| f.exponent.at(eps0)).collect(),
            c1: self
                .factors
                .iter()
                .map(|f| f.exponent.at(1.0) - f.exponent.at(0.0))
                .collect(),
            thetas: self.factors.iter().map(|f| f.theta).collect(),
            factors: sector.factors.clone(),
            numerator: sector.numerator.clone(),
            weight: sector.jacobian as f64,
            order,
        }
    }

    /// Numeric value at `eps` by adaptive cubature over the sectors of the
    /// default fan.
    pub fn evaluate_numeric(&self, eps: f64, opts: &CubatureOptions) -> Result<(Complex64, f64)> {
        self.evaluate_with_fan(None, eps, opts)
    }

    /// Sectors of `fan`, or of the default fan when `None`.
    pub fn sectors(&self, fan: Option<&Fan>) -> Result<Vec<Sector>> {
        if self.n == 0 {
            return Ok(vec![self.point_sector()]);
        }
        match fan {
            Some(f) => self.sector_decompose(f),
            None => self.sector_decompose(&self.default_fan()?),
        }
    }

    pub fn evaluate_with_fan(
        &self,
        fan: Option<&Fan>,
        eps: f64,
        opts: &CubatureOptions,
    ) -> Result<(Complex64, f64)> {
        let conv = self.convergence_check(eps)?;
        if !conv.converges {
            return Err(Error::NotConvergent {
                violated: conv.violated,
            });
        }
        let sectors = self.sectors(fan)?;
        let parts: Vec<(Vec<Complex64>, Vec<f64>, usize)> = sectors
            .par_iter()
            .map(|s| self.log_kernel(s, eps, 0).integrate(opts))
            .collect::<Result<_>>()?;
        let values: Vec<Complex64> = parts.iter().map(|p| p.0[0]).collect();
        let err: f64 = parts.iter().map(|p| p.1[0]).sum();
        Ok((pairwise_sum(&values), err))
    }
}

/// Pairwise summation in the given order.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::zero(),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}
