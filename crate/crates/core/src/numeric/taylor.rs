//! Truncated multivariate Taylor series with complex coefficients.
//!
//! A series in `k` variables keeps every monomial whose exponent of variable
//! `v` is at most `orders[v]` (box truncation). Products of box-truncated
//! series are exact within the box, so derivatives of compositions can be read
//! off the coefficients.

use num_complex::Complex64;
use num_traits::Zero;

use crate::poly::ComplexPolynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct Taylor {
    orders: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl Taylor {
    fn len_for(orders: &[usize]) -> usize {
        orders.iter().map(|o| o + 1).product()
    }

    pub fn constant(orders: &[usize], c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::zero(); Self::len_for(orders)];
        coeffs[0] = c;
        Taylor {
            orders: orders.to_vec(),
            coeffs,
        }
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Flat index of a multi-index; `None` outside the box.
    pub fn index(&self, beta: &[usize]) -> Option<usize> {
        let mut idx = 0;
        let mut stride = 1;
        for (b, o) in beta.iter().zip(&self.orders) {
            if b > o {
                return None;
            }
            idx += b * stride;
            stride *= o + 1;
        }
        Some(idx)
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        self.orders
            .iter()
            .map(|o| {
                let b = idx % (o + 1);
                idx /= o + 1;
                b
            })
            .collect()
    }

    pub fn coefficient(&self, beta: &[usize]) -> Complex64 {
        self.index(beta)
            .map_or(Complex64::zero(), |i| self.coeffs[i])
    }

    fn total_order(&self) -> usize {
        self.orders.iter().sum()
    }

    /// Polynomial in the variables `x`; entries of `series_vars` are expanded
    /// around zero in the series variables of the same position, the others
    /// are evaluated at `x`.
    pub fn from_polynomial(
        p: &ComplexPolynomial,
        x: &[f64],
        series_vars: &[usize],
        orders: &[usize],
    ) -> Self {
        let mut out = Taylor::constant(orders, Complex64::zero());
        'terms: for (e, c) in p.terms() {
            let mut beta = vec![0usize; series_vars.len()];
            for (k, &v) in series_vars.iter().enumerate() {
                if e[v] < 0 || e[v] as usize > orders[k] {
                    continue 'terms;
                }
                beta[k] = e[v] as usize;
            }
            let mut w = *c;
            for (v, &ev) in e.iter().enumerate() {
                if ev != 0 && !series_vars.contains(&v) {
                    w *= x[v].powi(ev as i32);
                }
            }
            let i = out.index(&beta).expect("inside box");
            out.coeffs[i] += w;
        }
        out
    }

    pub fn add(&self, o: &Taylor) -> Taylor {
        Taylor {
            orders: self.orders.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Taylor {
        Taylor {
            orders: self.orders.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &Taylor) -> Taylor {
        if self.coeffs.len() == 1 {
            return Taylor {
                orders: self.orders.clone(),
                coeffs: vec![self.coeffs[0] * o.coeffs[0]],
            };
        }
        let mut out = Taylor::constant(&self.orders, Complex64::zero());
        let digits: Vec<Vec<usize>> = (0..self.coeffs.len())
            .map(|i| self.multi_index(i))
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let sum: Vec<usize> = digits[i]
                    .iter()
                    .zip(&digits[j])
                    .map(|(x, y)| x + y)
                    .collect();
                if let Some(k) = out.index(&sum) {
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    fn without_constant(&self) -> Taylor {
        let mut h = self.clone();
        h.coeffs[0] = Complex64::zero();
        h
    }

    /// `sum_k w_k h^k` for a nilpotent `h`.
    fn nilpotent_sum(h: &Taylor, weights: impl Fn(usize) -> Complex64) -> Taylor {
        let mut out = Taylor::constant(&h.orders, weights(0));
        let mut power = Taylor::constant(&h.orders, Complex64::new(1.0, 0.0));
        for k in 1..=h.total_order() {
            power = power.mul(h);
            out = out.add(&power.scale(weights(k)));
        }
        out
    }

    /// Logarithm, with the logarithm of the constant term supplied by the
    /// caller so that the branch can be chosen.
    pub fn log_with(&self, log_c0: Complex64) -> Taylor {
        let c0 = self.coeffs[0];
        let h = self.without_constant().scale(c0.inv());
        Self::nilpotent_sum(&h, |k| {
            if k == 0 {
                log_c0
            } else {
                let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                Complex64::new(s / k as f64, 0.0)
            }
        })
    }

    pub fn exp(&self) -> Taylor {
        let e0 = self.coeffs[0].exp();
        let h = self.without_constant();
        let mut fact = 1.0;
        let mut weights = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=h.total_order() {
            fact *= k as f64;
            weights.push(Complex64::new(1.0 / fact, 0.0));
        }
        Self::nilpotent_sum(&h, |k| weights[k]).scale(e0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn log_of_one_plus_x_plus_y() {
        // f = 2 + x + y at (x,y) = (0,0)
        let p = ComplexPolynomial::from_terms(
            2,
            [
                (vec![0, 0], c(2.0)),
                (vec![1, 0], c(1.0)),
                (vec![0, 1], c(1.0)),
            ],
        );
        let s = Taylor::from_polynomial(&p, &[0.0, 0.0], &[0, 1], &[2, 1]);
        let l = s.log_with(c(2.0f64.ln()));
        assert!((l.coefficient(&[1, 0]) - c(0.5)).norm() < 1e-15);
        assert!((l.coefficient(&[2, 0]) - c(-0.125)).norm() < 1e-15);
        assert!((l.coefficient(&[1, 1]) - c(-0.25)).norm() < 1e-15);
        let back = l.exp();
        for (a, b) in back.coeffs().iter().zip(s.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn mixed_series_and_point_variables() {
        // f = 1 + x*y, series in y around 0 with x = 3
        let p = ComplexPolynomial::from_terms(2, [(vec![0, 0], c(1.0)), (vec![1, 1], c(1.0))]);
        let s = Taylor::from_polynomial(&p, &[3.0, 0.5], &[1], &[2]);
        assert_eq!(s.coeffs(), &[c(1.0), c(3.0), c(0.0)]);
    }
}
