//! Sparse Laurent polynomials with exponent vectors as keys.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, LatticeVector};

pub type Exponent = Vec<i64>;

/// Anything usable as a coefficient ring.
pub trait Coeff:
    Clone + fmt::Debug + PartialEq + Zero + One + Neg<Output = Self> + Send + Sync
{
}

impl<T> Coeff for T where
    T: Clone + fmt::Debug + PartialEq + Zero + One + Neg<Output = T> + Send + Sync
{
}

/// Kinematic invariant: `q_I^2` for a canonical set of external labels, or `m_e^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KinSymbol {
    Sq(Vec<String>),
    M2(String),
}

impl fmt::Display for KinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinSymbol::Sq(labels) => write!(f, "sq:{}", labels.join(",")),
            KinSymbol::M2(e) => write!(f, "m2:{e}"),
        }
    }
}

/// Exact rational combination of monomials in kinematic symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SymbolicCoeff(BTreeMap<Vec<KinSymbol>, Rational64>);

impl SymbolicCoeff {
    pub fn rational(q: Rational64) -> Self {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(Vec::new(), q);
        }
        SymbolicCoeff(m)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational64::from_integer(n))
    }

    pub fn symbol(s: KinSymbol) -> Self {
        let mut m = BTreeMap::new();
        m.insert(vec![s], Rational64::one());
        SymbolicCoeff(m)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<KinSymbol>, Rational64> {
        &self.0
    }

    pub fn scale(&self, q: Rational64) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        SymbolicCoeff(self.0.iter().map(|(k, v)| (k.clone(), v * q)).collect())
    }

    /// The constant part if there are no symbols.
    pub fn as_rational(&self) -> Option<Rational64> {
        match self.0.len() {
            0 => Some(Rational64::zero()),
            1 => self.0.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn evaluate<F>(&self, value: &F) -> Result<Complex64>
    where
        F: Fn(&KinSymbol) -> Result<Complex64>,
    {
        let mut total = Complex64::zero();
        for (mono, q) in &self.0 {
            let mut t = Complex64::new(*q.numer() as f64 / *q.denom() as f64, 0.0);
            for s in mono {
                t *= value(s)?;
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for SymbolicCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(mono, q)| {
                if mono.is_empty() {
                    return q.to_string();
                }
                let syms = mono
                    .iter()
                    .map(|s| format!("[{s}]"))
                    .collect::<Vec<_>>()
                    .join("*");
                if q.is_one() {
                    syms
                } else {
                    format!("{q}*{syms}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for SymbolicCoeff {
    type Output = SymbolicCoeff;
    fn add(mut self, rhs: SymbolicCoeff) -> SymbolicCoeff {
        for (k, v) in rhs.0 {
            let e = self.0.entry(k.clone()).or_insert_with(Rational64::zero);
            *e += v;
            if e.is_zero() {
                self.0.remove(&k);
            }
        }
        self
    }
}

impl Sub for SymbolicCoeff {
    type Output = SymbolicCoeff;
    fn sub(self, rhs: SymbolicCoeff) -> SymbolicCoeff {
        self + (-rhs)
    }
}

impl Neg for SymbolicCoeff {
    type Output = SymbolicCoeff;
    fn neg(self) -> SymbolicCoeff {
        SymbolicCoeff(self.0.into_iter().map(|(k, v)| (k, -v)).collect())
    }
}

impl Mul for SymbolicCoeff {
    type Output = SymbolicCoeff;
    fn mul(self, rhs: SymbolicCoeff) -> SymbolicCoeff {
        let mut out = SymbolicCoeff::zero();
        for (a, x) in &self.0 {
            for (b, y) in &rhs.0 {
                let mut mono = a.clone();
                mono.extend(b.iter().cloned());
                mono.sort();
                let mut m = BTreeMap::new();
                m.insert(mono, x * y);
                out = out + SymbolicCoeff(m);
            }
        }
        out
    }
}

impl Zero for SymbolicCoeff {
    fn zero() -> Self {
        SymbolicCoeff(BTreeMap::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for SymbolicCoeff {
    fn one() -> Self {
        Self::integer(1)
    }
}

/// Laurent polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentPolynomial<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type SymbolicPolynomial = LaurentPolynomial<SymbolicCoeff>;
pub type ComplexPolynomial = LaurentPolynomial<Complex64>;

impl<C: Coeff> LaurentPolynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(exponent: Exponent, c: C) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c.clone())),
        )
    }

    pub fn mul_monomial(&self, shift: &[i64]) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, x)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), x.clone())),
        )
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> LaurentPolynomial<D> {
        LaurentPolynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    pub fn try_map_coeffs<D: Coeff, F: Fn(&C) -> Result<D>>(
        &self,
        f: F,
    ) -> Result<LaurentPolynomial<D>> {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Common total degree of all terms.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<i64>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Lowest degree in the variables of `mask` (None for the zero polynomial).
    pub fn min_degree_in(&self, mask: u64) -> Option<i64> {
        self.terms.keys().map(|e| partial_degree(e, mask)).min()
    }

    pub fn max_degree_in(&self, mask: u64) -> Option<i64> {
        self.terms.keys().map(|e| partial_degree(e, mask)).max()
    }

    /// Terms of exact degree `d` in the variables of `mask`.
    pub fn part_of_degree(&self, mask: u64, d: i64) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .filter(|(e, _)| partial_degree(e, mask) == d)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Sets the variables in `mask` to zero.
    pub fn vanish(&self, mask: u64) -> Self {
        self.part_of_degree(mask, 0)
    }

    /// Monomial substitution `t_j = prod_i x_i^{u_i[j]}`: the exponent `m`
    /// becomes `(<m, u_1>, ..., <m, u_k>)`.
    pub fn substitute_monomial(&self, rays: &[LatticeVector]) -> Self {
        Self::from_terms(
            rays.len(),
            self.terms.iter().map(|(e, c)| {
                (
                    rays.iter()
                        .map(|u| e.iter().zip(u).map(|(a, b)| a * b).sum())
                        .collect(),
                    c.clone(),
                )
            }),
        )
    }

    /// Sets the last variable to one.
    pub fn dehomogenize(&self) -> Self {
        Self::from_terms(
            self.nvars - 1,
            self.terms
                .iter()
                .map(|(e, c)| (e[..self.nvars - 1].to_vec(), c.clone())),
        )
    }

    /// Embeds into a larger variable set: variable `i` goes to `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Self {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; nvars];
                for (i, &p) in positions.iter().enumerate() {
                    f[p] = e[i];
                }
                (f, c.clone())
            }),
        )
    }
}

pub fn partial_degree(e: &[i64], mask: u64) -> i64 {
    e.iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, x)| x)
        .sum()
}

impl LaurentPolynomial<SymbolicCoeff> {
    pub fn evaluate_coefficients<F>(&self, value: F) -> Result<ComplexPolynomial>
    where
        F: Fn(&KinSymbol) -> Result<Complex64>,
    {
        self.try_map_coeffs(|c| c.evaluate(&value))
    }

    /// Coefficients that are plain rationals.
    pub fn to_rational(&self) -> Option<LaurentPolynomial<Rational64>> {
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.as_rational()?);
        }
        Some(out)
    }
}

impl LaurentPolynomial<Complex64> {
    pub fn eval(&self, t: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(t)
                    .fold(*c, |acc, (&k, x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    pub fn eval_real(&self, t: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(t)
                    .map(|(&k, x)| x.powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, k)
                        }
                    })
                    .collect();
                let c = c.to_string();
                match (vars.is_empty(), c.as_str()) {
                    (true, _) => c,
                    (false, "1") => vars.join("*"),
                    _ => format!("({c})*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Convex hull of the support.
pub fn newton_polytope<C: Coeff>(f: &LaurentPolynomial<C>) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LatticePolytope::from_points(&f.support(), f.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> SymbolicCoeff {
        SymbolicCoeff::symbol(KinSymbol::Sq(vec![s.to_string()]))
    }

    #[test]
    fn bubble_product_support() {
        let psi = SymbolicPolynomial::variable(2, 0).add(&SymbolicPolynomial::variable(2, 1));
        let phi = SymbolicPolynomial::monomial(vec![1, 1], sym("q"));
        let prod = psi.mul(&phi);
        assert_eq!(prod.support(), vec![vec![1, 2], vec![2, 1]]);
        let p = newton_polytope(&prod).unwrap();
        assert_eq!(p.vertices(), &[vec![1, 2], vec![2, 1]]);
        let mink = newton_polytope(&psi)
            .unwrap()
            .minkowski_sum(&newton_polytope(&phi).unwrap())
            .unwrap();
        assert_eq!(mink, p);
    }

    #[test]
    fn one_plus_t() {
        let f = LaurentPolynomial::<Rational64>::from_terms(
            1,
            [(vec![0], 1.into()), (vec![1], 1.into())],
        );
        assert_eq!(newton_polytope(&f).unwrap().vertices(), &[vec![0], vec![1]]);
        assert_eq!(
            newton_polytope(&LaurentPolynomial::<Rational64>::zero(1)),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn symbolic_cancellation() {
        let a = sym("q") + SymbolicCoeff::integer(2);
        let b = a.clone() - sym("q");
        assert_eq!(b.as_rational(), Some(2.into()));
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn substitution_and_degrees() {
        let f = LaurentPolynomial::<Rational64>::from_terms(
            2,
            [(vec![1, 0], 1.into()), (vec![0, 1], 1.into())],
        );
        let g = f.substitute_monomial(&[vec![1, 0]]);
        assert_eq!(g.support(), vec![vec![0], vec![1]]);
        assert_eq!(f.homogeneous_degree(), Some(1));
        assert_eq!(f.min_degree_in(0b01), Some(0));
        assert_eq!(f.vanish(0b01).support(), vec![vec![0, 1]]);
        assert_eq!(f.dehomogenize().support(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn evaluation() {
        let f = ComplexPolynomial::from_terms(
            2,
            [
                (vec![1, 0], Complex64::new(2.0, 0.0)),
                (vec![0, -1], Complex64::new(1.0, 0.0)),
            ],
        );
        let v = f.eval_real(&[3.0, 0.5]);
        assert!((v.re - 8.0).abs() < 1e-14);
    }
}
