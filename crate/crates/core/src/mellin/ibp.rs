//! Analytic continuation by partial integration along rays of the normal fan.

use std::collections::VecDeque;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::MellinProblem;
use crate::error::{Error, Result};
use crate::lattice::{pairing, LatticeVector};
use crate::numeric::gamma::gamma_real;
use crate::numeric::series::q_from;
use crate::numeric::{Affine, CubatureOptions, QSeries};
use crate::poly::{Coeff, LaurentPolynomial, SymbolicCoeff};

pub const MAX_TERMS: usize = 100_000;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Multiplication of a coefficient by an integer.
pub trait IntScale {
    fn scale_int(&self, k: i64) -> Self;
}

impl IntScale for Complex64 {
    fn scale_int(&self, k: i64) -> Self {
        self * k as f64
    }
}

impl IntScale for Rational64 {
    fn scale_int(&self, k: i64) -> Self {
        self * Rational64::from_integer(k)
    }
}

impl IntScale for SymbolicCoeff {
    fn scale_int(&self, k: i64) -> Self {
        self.scale(Rational64::from_integer(k))
    }
}

/// `h_rho = sum_m h_m (<m,u> - d_u(h)) t^m`.
pub fn ibp_derivative<C: Coeff + IntScale>(
    h: &LaurentPolynomial<C>,
    u: &[i64],
) -> LaurentPolynomial<C> {
    let Some(d) = h.terms().keys().map(|m| pairing(m, u)).min() else {
        return h.clone();
    };
    LaurentPolynomial::from_terms(
        h.nvars(),
        h.terms()
            .iter()
            .map(|(m, c)| (m.clone(), c.scale_int(pairing(m, u) - d))),
    )
}

/// `coefficient * prod numerators / prod denominators`, rational in `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prefactor {
    pub coefficient: Rational64,
    pub numerators: Vec<Affine>,
    pub denominators: Vec<Affine>,
}

impl Prefactor {
    pub fn one() -> Self {
        Prefactor {
            coefficient: Rational64::one(),
            numerators: Vec::new(),
            denominators: Vec::new(),
        }
    }

    pub fn at(&self, eps: f64) -> f64 {
        let num: f64 = self.numerators.iter().map(|a| a.at(eps)).product();
        let den: f64 = self.denominators.iter().map(|a| a.at(eps)).product();
        self.coefficient.to_f64().unwrap_or(f64::NAN) * num / den
    }

    /// Number of denominators vanishing at `eps = 0`.
    pub fn pole_order(&self) -> usize {
        self.denominators
            .iter()
            .filter(|a| a.constant.is_zero())
            .count()
    }

    /// Exact Laurent expansion through `eps^order`.
    pub fn series(&self, order: i32) -> Result<QSeries> {
        let inner = order + self.pole_order() as i32;
        let mut s = QSeries::constant(q_from(self.coefficient), inner);
        for a in &self.numerators {
            s = s.mul(&QSeries::affine(*a, inner));
        }
        for a in &self.denominators {
            s = s.mul(&QSeries::reciprocal(*a, inner)?);
        }
        Ok(QSeries::new(
            s.start(),
            order,
            (s.start()..=order).map(|k| s.coefficient(k)).collect(),
        ))
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for a in &self.numerators {
            write!(f, " * ({a})")?;
        }
        for a in &self.denominators {
            write!(f, " / ({a})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationTerm {
    pub prefactor: Prefactor,
    pub numerator: crate::poly::ComplexPolynomial,
    pub shift: Vec<i64>,
    /// Ray index behind each denominator of the prefactor.
    pub pole_rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationSum {
    pub problem: MellinProblem,
    pub rays: Vec<LatticeVector>,
    pub terms: Vec<ContinuationTerm>,
    pub steps: usize,
}

impl ContinuationSum {
    pub fn term_problem(&self, i: usize) -> MellinProblem {
        let t = &self.terms[i];
        self.problem.with_term(t.numerator.clone(), &t.shift)
    }

    /// Distinct denominators with a flag for those vanishing at `eps = 0`.
    pub fn poles(&self) -> Vec<(Affine, bool)> {
        let mut out: Vec<Affine> = self
            .terms
            .iter()
            .flat_map(|t| t.prefactor.denominators.iter().copied())
            .collect();
        out.sort();
        out.dedup();
        out.into_iter().map(|a| (a, a.constant.is_zero())).collect()
    }

    pub fn evaluate(&self, eps: f64, opts: &CubatureOptions) -> Result<(Complex64, f64)> {
        let mut value = Complex64::zero();
        let mut err = 0.0;
        for i in 0..self.terms.len() {
            let l = self.terms[i].prefactor.at(eps);
            let (v, e) = self.term_problem(i).evaluate_numeric(eps, opts)?;
            value += v * l;
            err += e * l.abs();
        }
        Ok((value, err))
    }

    /// `Gamma(slack_rho)` over the rays of the original problem at `eps`.
    pub fn gamma_normalizer(&self, eps: f64) -> f64 {
        self.rays
            .iter()
            .filter_map(|u| self.problem.slack(u))
            .map(|a| gamma_real(a.at(eps)))
            .product()
    }

    /// The continued value divided by the product of Gamma functions of the
    /// ray slacks.
    pub fn gamma_normalized(&self, eps: f64, opts: &CubatureOptions) -> Result<(Complex64, f64)> {
        let g = self.gamma_normalizer(eps);
        let (v, e) = self.evaluate(eps, opts)?;
        Ok((v / g, e / g.abs()))
    }
}

/// Partial integrations until every term converges near `eps = 0`; the ray
/// with the most negative slack goes first, ties broken by ray order.
pub fn continue_to(problem: &MellinProblem, max_steps: usize) -> Result<ContinuationSum> {
    let mut rays = problem.rays()?;
    rays.sort();
    let k = problem.factors().len();
    let mut queue = VecDeque::from([ContinuationTerm {
        prefactor: Prefactor::one(),
        numerator: problem.numerator().clone(),
        shift: vec![0; k],
        pole_rays: Vec::new(),
    }]);
    let mut done = Vec::new();
    let mut steps = 0;
    while let Some(t) = queue.pop_front() {
        if t.numerator.is_zero() {
            continue;
        }
        let p = problem.with_term(t.numerator.clone(), &t.shift);
        let mut pick: Option<(usize, Affine)> = None;
        for (j, u) in rays.iter().enumerate() {
            let a = p.slack(u).expect("numerator is nonzero");
            if a.constant <= Rational64::zero() && pick.is_none_or(|(_, b)| a.constant < b.constant)
            {
                pick = Some((j, a));
            }
        }
        let Some((j, sigma)) = pick else {
            done.push(t);
            continue;
        };
        steps += 1;
        if steps > max_steps || done.len() + queue.len() > MAX_TERMS {
            return Err(Error::StepBudget(steps));
        }
        if sigma.is_zero() {
            return Err(Error::UnregularizedPole(format!(
                "slack along ray {:?} vanishes identically",
                rays[j]
            )));
        }
        if t.prefactor
            .denominators
            .iter()
            .zip(&t.pole_rays)
            .any(|(d, r)| *d == sigma && *r == j)
        {
            return Err(Error::PoleCollision(format!(
                "repeated factor 1/({sigma}) along ray {:?}",
                rays[j]
            )));
        }
        let u = &rays[j];
        let mut pole_rays = t.pole_rays.clone();
        pole_rays.push(j);
        let derived = ibp_derivative(&t.numerator, u);
        if !derived.is_zero() {
            let mut pre = t.prefactor.clone();
            pre.coefficient = -pre.coefficient;
            pre.denominators.push(sigma);
            queue.push_back(ContinuationTerm {
                prefactor: pre,
                numerator: derived,
                shift: t.shift.clone(),
                pole_rays: pole_rays.clone(),
            });
        }
        for (i, f) in problem.factors().iter().enumerate() {
            let c = f.exponent + Affine::integer(t.shift[i]);
            if c.is_zero() {
                continue;
            }
            let g = t.numerator.mul(&ibp_derivative(&f.polynomial, u));
            if g.is_zero() {
                continue;
            }
            let mut pre = t.prefactor.clone();
            pre.numerators.push(c);
            pre.denominators.push(sigma);
            let mut shift = t.shift.clone();
            shift[i] += 1;
            queue.push_back(ContinuationTerm {
                prefactor: pre,
                numerator: g,
                shift,
                pole_rays: pole_rays.clone(),
            });
        }
    }
    Ok(ContinuationSum {
        problem: problem.clone(),
        rays,
        terms: done,
        steps,
    })
}
