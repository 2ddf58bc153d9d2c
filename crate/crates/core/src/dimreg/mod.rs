//! Dimensionally and analytically regularized Feynman integrals in the
//! projective parametric representation.
//!
//! With `D = D0 - 2 eps` and edge weights `lambda_e`, the integral is
//! `Gamma(omega) / prod Gamma(lambda_e) * int prod alpha^lambda psi^{-D/2} (psi/Phi)^omega Omega`
//! where `omega = sum lambda - (D/2) h^1`. It is evaluated in the chart where
//! the last Schwinger parameter equals one.

mod ibp;
mod sector;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::graphs::{FeynmanGraph, KinematicAssignment};
use crate::lattice::{pairing, Fan};
use crate::mellin::MellinProblem;
use crate::numeric::gamma::gamma_real;
use crate::numeric::{gamma_series, Affine, CubatureOptions, QSeries, Series};
use crate::permutahedra::{hepp_fan, nested_set_fan};

pub use ibp::eps_expand_ibp;
pub use sector::eps_expand_sector;

/// Laurent series in `eps` with per-coefficient error estimates.
pub type EpsilonSeries = Series;

/// Base point `(lambda^0, D0)` of the regularization; the integral is
/// expanded in `eps` with `D = D0 - 2 eps` and `lambda = lambda^0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegulatorPoint {
    pub lambda0: Vec<Rational64>,
    pub d0: Rational64,
}

impl RegulatorPoint {
    pub fn new(lambda0: Vec<Rational64>, d0: Rational64) -> Result<Self> {
        if let Some(l) = lambda0.iter().find(|l| **l <= Rational64::zero()) {
            return Err(Error::Unsupported(format!(
                "edge weight {l} must be positive"
            )));
        }
        Ok(RegulatorPoint { lambda0, d0 })
    }

    /// Unit weights on `g` in dimension `d0`.
    pub fn unit(g: &FeynmanGraph, d0: i64) -> Self {
        RegulatorPoint {
            lambda0: vec![Rational64::from_integer(1); g.num_edges()],
            d0: Rational64::from_integer(d0),
        }
    }

    /// `D/2 = D0/2 - eps`.
    pub fn half_dimension(&self) -> Affine {
        Affine::new(self.d0 / 2, Rational64::from_integer(-1))
    }

    fn check(&self, g: &FeynmanGraph) -> Result<()> {
        if self.lambda0.len() != g.num_edges() {
            return Err(Error::RankMismatch {
                expected: g.num_edges(),
                found: self.lambda0.len(),
            });
        }
        Ok(())
    }
}

/// Superficial degrees of convergence of all edge subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaData {
    /// `omega_gamma = lambda(gamma) - (D/2) h^1(gamma)`, indexed by edge mask.
    pub omega: Vec<Affine>,
    /// `omega_{G/gamma}`, computed on the quotient graph.
    pub omega_quotient: Vec<Affine>,
    /// `-omega_{G/gamma}` for mass-momentum spanning `gamma`, else `omega_gamma`.
    pub omega_tilde: Vec<Affine>,
}

impl OmegaData {
    pub fn new(g: &FeynmanGraph, reg: &RegulatorPoint) -> Result<Self> {
        reg.check(g)?;
        let n = g.num_edges();
        let half = reg.half_dimension();
        let e = bits::full(n);
        let weight = |mask: u64| {
            bits::elements(mask)
                .map(|i| reg.lambda0[i])
                .sum::<Rational64>()
        };
        let omega_of = |mask: u64, h1: i64| {
            Affine::constant(weight(mask)) - half.scale(Rational64::from_integer(h1))
        };
        let mut omega = Vec::with_capacity(1 << n);
        let mut omega_quotient = Vec::with_capacity(1 << n);
        let mut omega_tilde = Vec::with_capacity(1 << n);
        for mask in 0..=e {
            let w = omega_of(mask, g.h1(mask));
            let q = omega_of(e & !mask, g.quotient(mask)?.loops());
            omega.push(w);
            omega_quotient.push(q);
            omega_tilde.push(if g.is_mass_momentum_spanning(mask) {
                -q
            } else {
                w
            });
        }
        Ok(OmegaData {
            omega,
            omega_quotient,
            omega_tilde,
        })
    }

    pub fn total(&self) -> Affine {
        *self.omega.last().expect("nonempty")
    }
}

/// Region of `(lambda, D)` where the parametric integral converges:
/// `omega_gamma > 0` on the hard facets and `omega_{G/gamma} < 0` on the
/// soft ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceDomain {
    pub hard: Vec<u64>,
    pub soft: Vec<u64>,
    pub nonempty: bool,
}

pub fn feynman_convergence_domain(g: &FeynmanGraph) -> Result<ConvergenceDomain> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !g.is_s_irreducible() {
        return Ok(ConvergenceDomain {
            hard: Vec::new(),
            soft: Vec::new(),
            nonempty: false,
        });
    }
    if g.num_edges() == 1 {
        return Ok(ConvergenceDomain {
            hard: Vec::new(),
            soft: Vec::new(),
            nonempty: true,
        });
    }
    let split = g.facet_split()?;
    Ok(ConvergenceDomain {
        hard: split.scaleless,
        soft: split.mass_momentum,
        nonempty: true,
    })
}

impl ConvergenceDomain {
    /// Whether `(lambda, D)` lies in the open domain.
    pub fn contains(&self, g: &FeynmanGraph, lambda: &[Rational64], d: Rational64) -> bool {
        if !self.nonempty || lambda.len() != g.num_edges() {
            return false;
        }
        let e = bits::full(g.num_edges());
        let omega = |mask: u64| {
            bits::elements(mask).map(|i| lambda[i]).sum::<Rational64>()
                - d / 2 * Rational64::from_integer(g.h1(mask))
        };
        let total = omega(e);
        self.hard.iter().all(|&m| omega(m) > Rational64::zero())
            && self
                .soft
                .iter()
                .all(|&m| total - omega(m) < Rational64::zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Hepp,
    Smirnov,
    Motic,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hepp" => Ok(Strategy::Hepp),
            "smirnov" => Ok(Strategy::Smirnov),
            "motic" => Ok(Strategy::Motic),
            other => Err(Error::Parse(format!("unknown strategy {other}"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Hepp => "hepp",
            Strategy::Smirnov => "smirnov",
            Strategy::Motic => "motic",
        })
    }
}

/// Sector fan of a strategy; `None` for a single edge, where no sectors are
/// needed.
pub fn strategy_fan(g: &FeynmanGraph, strategy: Strategy) -> Result<Option<Fan>> {
    let n = g.num_edges();
    if n <= 1 {
        return Ok(None);
    }
    let fan = match strategy {
        Strategy::Hepp => hepp_fan(n)?,
        Strategy::Smirnov => nested_set_fan(&g.smirnov_building_set()?)?,
        Strategy::Motic => {
            if !g.is_s_irreducible() {
                return Err(Error::Reducible);
            }
            nested_set_fan(&g.motic_building_set()?)?
        }
    };
    Ok(Some(fan))
}

/// Chart integrand as a Mellin problem with `s = lambda_{1..n-1}` and
/// factors `psi^{-(D/2 - omega)}` and `Phi^{-omega}`.
pub fn feynman_problem(
    g: &FeynmanGraph,
    kin: &KinematicAssignment,
    lambda: &[Affine],
    half_dimension: Affine,
) -> Result<MellinProblem> {
    let n = g.num_edges();
    if lambda.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let sym = g.symanzik()?;
    kin.check_generic(&sym.big_phi)?;
    let psi = kin.evaluate(&sym.psi)?.dehomogenize();
    let phi = kin.evaluate(&sym.big_phi)?.dehomogenize();
    if phi.is_zero() {
        return Err(Error::Degenerate);
    }
    let h = Rational64::from_integer(g.loops());
    let omega = lambda.iter().fold(Affine::integer(0), |a, b| a + *b) - half_dimension.scale(h);
    MellinProblem::new(
        vec![(psi, half_dimension - omega), (phi, omega)],
        crate::poly::ComplexPolynomial::one(n - 1),
        lambda[..n - 1].to_vec(),
    )
}

/// Sector of the chart integrand with symbolic kinematics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicSector {
    pub generators: Vec<Vec<i64>>,
    pub jacobian: i64,
    /// `x_j` as a monomial in the chart coordinates: `alpha_i = prod_j x_j^{u_j[i]}`.
    pub substitution: Vec<String>,
    /// Exponents `a_j` of the leading monomial `prod x_j^{a_j - 1}`.
    pub exponents: Vec<Affine>,
    pub psi: String,
    pub phi: String,
}

/// Sector data for every maximal cone of `fan`; the refinement property is
/// not checked, so graphs that are not s-irreducible are accepted.
pub fn symbolic_sectors(
    g: &FeynmanGraph,
    fan: Option<&Fan>,
    reg: &RegulatorPoint,
) -> Result<Vec<SymbolicSector>> {
    reg.check(g)?;
    let n = g.num_edges();
    let sym = g.symanzik()?;
    let psi = sym.psi.dehomogenize();
    let phi = sym.big_phi.dehomogenize();
    let half = reg.half_dimension();
    let omega = Affine::constant(reg.lambda0.iter().sum::<Rational64>())
        - half.scale(Rational64::from_integer(g.loops()));
    let (c_psi, c_phi) = (half - omega, omega);
    let cones: Vec<Vec<Vec<i64>>> = match fan {
        Some(f) => f
            .maximal_cones()
            .iter()
            .map(|c| c.generators().to_vec())
            .collect(),
        None => vec![Vec::new()],
    };
    let order = |h: &crate::poly::SymbolicPolynomial, u: &[i64]| {
        h.terms().keys().map(|m| pairing(m, u)).min().unwrap_or(0)
    };
    let mut out = Vec::new();
    for gens in cones {
        let d = gens.len();
        let mut exponents = Vec::new();
        for u in &gens {
            let s = (0..n - 1).fold(Affine::integer(0), |a, i| {
                a + Affine::constant(reg.lambda0[i]).scale(Rational64::from_integer(u[i]))
            });
            let a = s
                - c_psi.scale(Rational64::from_integer(order(&psi, u)))
                - c_phi.scale(Rational64::from_integer(order(&phi, u)));
            exponents.push(a);
        }
        let reduce = |h: &crate::poly::SymbolicPolynomial| {
            let shift: Vec<i64> = gens.iter().map(|u| -order(h, u)).collect();
            h.substitute_monomial(&gens)
                .mul_monomial(&shift)
                .to_string()
        };
        let substitution = (0..n - 1)
            .map(|i| {
                let factors: Vec<String> = (0..d)
                    .filter(|&j| gens[j][i] != 0)
                    .map(|j| {
                        if gens[j][i] == 1 {
                            format!("x{}", j + 1)
                        } else {
                            format!("x{}^{}", j + 1, gens[j][i])
                        }
                    })
                    .collect();
                let rhs = if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                };
                format!("{} = {rhs}", g.edges()[i].id)
            })
            .collect();
        let jacobian = if d == 0 {
            1
        } else {
            crate::lattice::linalg::det(
                &gens
                    .iter()
                    .map(|u| crate::lattice::linalg::to_i128(u))
                    .collect::<Vec<_>>(),
            )
            .abs() as i64
        };
        out.push(SymbolicSector {
            jacobian,
            substitution,
            exponents,
            psi: if d == 0 {
                psi.to_string()
            } else {
                reduce(&psi)
            },
            phi: if d == 0 {
                phi.to_string()
            } else {
                reduce(&phi)
            },
            generators: gens,
        });
    }
    Ok(out)
}

/// Value of the integral at a point of the convergence domain by cubature
/// over the sectors of `fan` (the default fan when `None`).
pub fn parametric_amplitude(
    g: &FeynmanGraph,
    fan: Option<&Fan>,
    lambda: &[Rational64],
    d: Rational64,
    kin: &KinematicAssignment,
    opts: &CubatureOptions,
) -> Result<(Complex64, f64)> {
    let domain = feynman_convergence_domain(g)?;
    if !domain.contains(g, lambda, d) {
        return Err(Error::OutsideDomain);
    }
    let la: Vec<Affine> = lambda.iter().map(|l| Affine::constant(*l)).collect();
    let problem = feynman_problem(g, kin, &la, Affine::constant(d / 2))?;
    let omega = lambda.iter().sum::<Rational64>() - d / 2 * Rational64::from_integer(g.loops());
    let mut pre = gamma_real(to_f64(omega));
    for l in lambda {
        pre /= gamma_real(to_f64(*l));
    }
    let (v, e) = problem.evaluate_with_fan(fan, 0.0, opts)?;
    Ok((v * pre, e * pre.abs()))
}

fn to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Result of an `eps`-expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub series: EpsilonSeries,
    pub sectors: usize,
    pub evaluations: usize,
    /// Kinematics-free 1VI block certifying that the integral vanishes.
    pub vanishing_subgraph: Option<u64>,
}

impl EpsilonSeries {
    /// Order of the leading pole, zero if there is none.
    pub fn pole_order(&self) -> i32 {
        (-self.start()).max(0)
    }
}

/// For graphs that are not s-irreducible: a block without kinematics. Its
/// degree `w` enters the integral both as `1/w` and `-1/w`, so the sum is
/// the exact zero series.
fn vanishing_block(
    g: &FeynmanGraph,
    reg: &RegulatorPoint,
    order: i32,
) -> Result<Option<Expansion>> {
    if g.is_s_irreducible() {
        return Ok(None);
    }
    let block = g
        .one_vi_components(g.all_edges())
        .into_iter()
        .find(|&b| {
            g.subgraph_with_kinematics(b)
                .map(|s| !s.is_s_irreducible())
                .unwrap_or(false)
        })
        .unwrap_or(g.all_edges());
    let omega = OmegaData::new(g, reg)?;
    let w = omega.omega_tilde[block as usize];
    let r = QSeries::reciprocal(w, order)?;
    let zero = r.sub(&r);
    debug_assert!(zero.is_zero());
    Ok(Some(Expansion {
        series: zero.to_series(),
        sectors: 0,
        evaluations: 0,
        vanishing_subgraph: Some(block),
    }))
}

/// `Gamma(omega_0 + h eps) / prod Gamma(lambda_e)` through `eps^order`.
fn gamma_prefactor(g: &FeynmanGraph, reg: &RegulatorPoint, order: i32) -> Result<Series> {
    let h = g.loops();
    let omega0 = reg.lambda0.iter().sum::<Rational64>() - reg.d0 / 2 * Rational64::from_integer(h);
    let mut denom = 1.0;
    for l in &reg.lambda0 {
        denom *= gamma_real(to_f64(*l));
    }
    let s = if h == 0 {
        let v = gamma_real(to_f64(omega0));
        if !v.is_finite() {
            return Err(Error::UnregularizedPole(format!(
                "Gamma({omega0}) without a regulator"
            )));
        }
        Series::constant(Complex64::new(v, 0.0), order)
    } else {
        let base = gamma_series(to_f64(omega0), order)?;
        let hk = h as f64;
        let coeffs = (base.start()..=order)
            .map(|k| base.coefficient(k) * hk.powi(k))
            .collect();
        let errs = (base.start()..=order)
            .map(|k| base.error(k) * hk.abs().powi(k))
            .collect();
        Series::new(base.start(), order, coeffs, errs)
    };
    Ok(s.scale(Complex64::new(1.0 / denom, 0.0)))
}

fn validate(g: &FeynmanGraph, reg: &RegulatorPoint, order: i32) -> Result<()> {
    reg.check(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !(0..=8).contains(&order) {
        return Err(Error::OrderTooHigh(order.max(0) as usize));
    }
    Ok(())
}
