use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::{Ratio, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q_from(r: Rational64) -> Q {
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// `constant + slope * eps` with exact rational parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Affine {
    pub constant: Rational64,
    pub slope: Rational64,
}

impl Affine {
    pub fn new(constant: Rational64, slope: Rational64) -> Self {
        Affine { constant, slope }
    }

    pub fn constant(c: Rational64) -> Self {
        Affine {
            constant: c,
            slope: Rational64::zero(),
        }
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Rational64::from_integer(c))
    }

    pub fn eps() -> Self {
        Affine {
            constant: Rational64::zero(),
            slope: Rational64::one(),
        }
    }

    pub fn at(&self, eps: f64) -> f64 {
        self.constant.to_f64().unwrap_or(f64::NAN) + self.slope.to_f64().unwrap_or(f64::NAN) * eps
    }

    pub fn at_rational(&self, eps: Rational64) -> Rational64 {
        self.constant + self.slope * eps
    }

    pub fn scale(&self, k: Rational64) -> Self {
        Affine {
            constant: self.constant * k,
            slope: self.slope * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine {
            constant: self.constant + o.constant,
            slope: self.slope + o.slope,
        }
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        Affine {
            constant: self.constant - o.constant,
            slope: self.slope - o.slope,
        }
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        Affine {
            constant: -self.constant,
            slope: -self.slope,
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant.is_zero(), self.slope.is_zero()) {
            (_, true) => write!(f, "{}", self.constant),
            (true, false) => write!(f, "{}*eps", self.slope),
            (false, false) => write!(f, "{} + {}*eps", self.constant, self.slope),
        }
    }
}

/// Exact truncated Laurent series in `eps` with terms from `start` to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    start: i32,
    order: i32,
    coeffs: Vec<Q>,
}

impl QSeries {
    pub fn new(start: i32, order: i32, mut coeffs: Vec<Q>) -> Self {
        coeffs.resize((order - start + 1).max(0) as usize, Q::zero());
        QSeries {
            start,
            order,
            coeffs,
        }
    }

    pub fn constant(c: Q, order: i32) -> Self {
        Self::new(0, order, vec![c])
    }

    pub fn zero(order: i32) -> Self {
        Self::new(0, order, Vec::new())
    }

    /// Expansion of `1 / (a + b eps)`; a simple pole if `a = 0`.
    pub fn reciprocal(x: Affine, order: i32) -> Result<Self> {
        let (a, b) = (q_from(x.constant), q_from(x.slope));
        if a.is_zero() {
            if b.is_zero() {
                return Err(Error::UnregularizedPole(format!(
                    "1/({x}) with vanishing regulator"
                )));
            }
            return Ok(Self::new(-1, order, vec![b.recip()]));
        }
        let mut coeffs = Vec::new();
        let mut term = a.recip();
        for _ in 0..=order.max(-1) {
            coeffs.push(term);
            term = -term * b / a;
        }
        Ok(Self::new(0, order, coeffs))
    }

    pub fn affine(x: Affine, order: i32) -> Self {
        Self::new(0, order, vec![q_from(x.constant), q_from(x.slope)])
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coefficient(&self, k: i32) -> Q {
        if k < self.start || k > self.order {
            Q::zero()
        } else {
            self.coeffs[(k - self.start) as usize]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let start = self.start + o.start;
        let order = (self.order + o.start).min(o.order + self.start);
        let mut out = vec![Q::zero(); (order - start + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j < out.len() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::new(start, order, out)
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let start = self.start.min(o.start);
        let order = self.order.min(o.order);
        let coeffs = (start..=order)
            .map(|k| self.coefficient(k) + o.coefficient(k))
            .collect();
        QSeries::new(start, order, coeffs)
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.add(&o.scale(-Q::one()))
    }

    pub fn scale(&self, c: Q) -> QSeries {
        QSeries::new(
            self.start,
            self.order,
            self.coeffs.iter().map(|x| x * c).collect(),
        )
    }

    pub fn to_series(&self) -> Series {
        Series::new(
            self.start,
            self.order,
            self.coeffs
                .iter()
                .map(|q| Complex64::new(q_to_f64(q), 0.0))
                .collect(),
            Vec::new(),
        )
    }
}

/// Truncated Laurent series in `eps` with complex coefficients and absolute
/// error bounds, terms from `start` to `order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    start: i32,
    order: i32,
    coeffs: Vec<Complex64>,
    errors: Vec<f64>,
}

impl Series {
    pub fn new(start: i32, order: i32, mut coeffs: Vec<Complex64>, mut errors: Vec<f64>) -> Self {
        let n = (order - start + 1).max(0) as usize;
        coeffs.resize(n, Complex64::zero());
        errors.resize(n, 0.0);
        Series {
            start,
            order,
            coeffs,
            errors,
        }
    }

    pub fn zero(order: i32) -> Self {
        Self::new(0, order, Vec::new(), Vec::new())
    }

    pub fn constant(c: Complex64, order: i32) -> Self {
        Self::new(0, order, vec![c], Vec::new())
    }

    /// `exp(b eps)`.
    pub fn exp_linear(b: Complex64, order: i32) -> Self {
        let mut coeffs = Vec::new();
        let mut term = Complex64::one();
        for k in 0..=order.max(-1) {
            coeffs.push(term);
            term = term * b / (k + 1) as f64;
        }
        Self::new(0, order, coeffs, Vec::new())
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coefficient(&self, k: i32) -> Complex64 {
        if k < self.start || k > self.order {
            Complex64::zero()
        } else {
            self.coeffs[(k - self.start) as usize]
        }
    }

    pub fn error(&self, k: i32) -> f64 {
        if k < self.start || k > self.order {
            0.0
        } else {
            self.errors[(k - self.start) as usize]
        }
    }

    /// Lowest power with a nonzero coefficient or error.
    pub fn leading_power(&self) -> Option<i32> {
        (self.start..=self.order)
            .find(|&k| self.coefficient(k) != Complex64::zero() || self.error(k) > 0.0)
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.leading_power().is_none()
    }

    pub fn truncate(&self, order: i32) -> Series {
        let order = order.min(self.order);
        let coeffs = (self.start..=order).map(|k| self.coefficient(k)).collect();
        let errors = (self.start..=order).map(|k| self.error(k)).collect();
        Series::new(self.start, order, coeffs, errors)
    }

    pub fn add(&self, o: &Series) -> Series {
        let start = self.start.min(o.start);
        let order = self.order.min(o.order);
        Series::new(
            start,
            order,
            (start..=order)
                .map(|k| self.coefficient(k) + o.coefficient(k))
                .collect(),
            (start..=order)
                .map(|k| self.error(k) + o.error(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Series {
        Series::new(
            self.start,
            self.order,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.errors.iter().map(|e| e * c.norm()).collect(),
        )
    }

    pub fn mul(&self, o: &Series) -> Series {
        let start = self.start + o.start;
        let order = (self.order + o.start).min(o.order + self.start);
        let n = (order - start + 1).max(0) as usize;
        let mut coeffs = vec![Complex64::zero(); n];
        let mut errors = vec![0.0; n];
        for i in 0..self.coeffs.len() {
            for j in 0..o.coeffs.len() {
                if i + j < n {
                    coeffs[i + j] += self.coeffs[i] * o.coeffs[j];
                    errors[i + j] += self.coeffs[i].norm() * o.errors[j]
                        + self.errors[i] * o.coeffs[j].norm()
                        + self.errors[i] * o.errors[j];
                }
            }
        }
        Series::new(start, order, coeffs, errors)
    }

    /// Coefficients from the leading power upward, with errors.
    pub fn terms(&self) -> Vec<(i32, Complex64, f64)> {
        (self.start..=self.order)
            .map(|k| (k, self.coefficient(k), self.error(k)))
            .collect()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c, e) in self.terms() {
            if c == Complex64::zero() && e == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.12e}{:+.12e}i ± {:.1e}) eps^{k}", c.re, c.im, e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(eps^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_of_affine() {
        let s = QSeries::reciprocal(
            Affine::new(Rational64::from_integer(2), Rational64::from_integer(1)),
            3,
        )
        .unwrap();
        let one = s.mul(&QSeries::affine(
            Affine::new(Rational64::from_integer(2), Rational64::from_integer(1)),
            3,
        ));
        assert_eq!(one, QSeries::constant(Q::one(), 3));
        let pole = QSeries::reciprocal(Affine::eps(), 2).unwrap();
        assert_eq!(pole.start(), -1);
        assert!(QSeries::reciprocal(Affine::integer(0), 2).is_err());
        assert!(pole.sub(&pole).is_zero());
    }

    #[test]
    fn products_track_errors() {
        let a = Series::new(
            -1,
            1,
            vec![1.0.into(), 2.0.into(), 3.0.into()],
            vec![0.0, 0.1, 0.0],
        );
        let b = Series::exp_linear(1.0.into(), 2);
        let c = a.mul(&b);
        assert_eq!(c.start(), -1);
        assert_eq!(c.order(), 1);
        assert_eq!(c.coefficient(0), Complex64::new(3.0, 0.0));
        assert!((c.error(1) - 0.1).abs() < 1e-15);
    }
}
