use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{integrate, CubatureOptions};
use crate::poly::ComplexPolynomial;

/// `log z` on the branch whose cut is opposite to the direction `theta`.
pub fn branch_log(z: Complex64, theta: f64) -> Complex64 {
    (z * Complex64::from_polar(1.0, -theta)).ln() + Complex64::new(0.0, theta)
}

/// Exponent `p` of the substitution `x = y^p` that makes `x^{a-1} dx`
/// bounded with a bounded derivative.
pub(crate) fn power_for(a: f64) -> f64 {
    if a >= 2.0 || (a >= 1.0 && a.fract() == 0.0) {
        1.0
    } else {
        (2.0 / a).ceil()
    }
}

/// Integrand `|det| prod x^{a0-1} prod f^{-c0} g * Lambda^k / k!` on the unit
/// cube, with `Lambda = sum a1 log x - sum c1 log f`, for `k = 0..=order`.
#[derive(Clone, Debug)]
pub struct LogKernel {
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    pub thetas: Vec<f64>,
    pub factors: Vec<ComplexPolynomial>,
    pub numerator: ComplexPolynomial,
    pub weight: f64,
    pub order: usize,
}

impl LogKernel {
    pub fn integrate(&self, opts: &CubatureOptions) -> Result<(Vec<Complex64>, Vec<f64>, usize)> {
        if self.a0.iter().any(|a| *a <= 0.0) {
            return Err(Error::NotConvergent {
                violated: Vec::new(),
            });
        }
        if self.numerator.is_zero() {
            return Ok((
                vec![Complex64::zero(); self.order + 1],
                vec![0.0; self.order + 1],
                0,
            ));
        }
        let powers: Vec<f64> = self.a0.iter().map(|&a| power_for(a)).collect();
        let d = self.a0.len();
        let f = |y: &[f64], out: &mut [Complex64]| {
            let mut x = vec![0.0; d];
            let mut w = self.weight;
            let mut lambda = Complex64::zero();
            for j in 0..d {
                let p = powers[j];
                x[j] = y[j].powf(p);
                w *= p * y[j].powf(p * self.a0[j] - 1.0);
                if self.a1[j] != 0.0 {
                    lambda += self.a1[j] * p * y[j].ln();
                }
            }
            let mut log_f0 = Complex64::zero();
            for (i, poly) in self.factors.iter().enumerate() {
                let l = branch_log(poly.eval_real(&x), self.thetas[i]);
                log_f0 -= self.c0[i] * l;
                lambda -= self.c1[i] * l;
            }
            let mut term = log_f0.exp() * self.numerator.eval_real(&x) * w;
            for (k, o) in out.iter_mut().enumerate() {
                *o = term;
                term = term * lambda / (k + 1) as f64;
            }
        };
        let r = integrate(&f, d, self.order + 1, opts)?;
        Ok((r.values, r.errors, r.evaluations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_agrees_with_principal_log_near_positive_axis() {
        let z = Complex64::new(2.0, 0.5);
        assert!((branch_log(z, 0.1) - z.ln()).norm() < 1e-15);
        // a cut along the positive axis when theta = pi
        let w = Complex64::new(-1.0, -1e-9);
        assert!(
            (branch_log(w, std::f64::consts::PI).im - (std::f64::consts::PI + 1e-9)).abs() < 1e-12
        );
    }
}
