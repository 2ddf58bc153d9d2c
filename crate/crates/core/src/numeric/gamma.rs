//! Gamma function series for real base points.

use num_complex::Complex64;

use super::series::Series;
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const MAX_GAMMA_ORDER: i32 = 12;

/// `B_2, B_4, ..., B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const ASYMPTOTIC_FROM: f64 = 30.0;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn ln_gamma_asymptotic(x: f64) -> f64 {
    let mut s = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln();
    for (j, b) in BERNOULLI.iter().enumerate() {
        let k = 2 * (j + 1);
        s += b / ((k * (k - 1)) as f64 * x.powi(k as i32 - 1));
    }
    s
}

/// `ln |Gamma(x)|` for real `x` away from the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin().abs();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < ASYMPTOTIC_FROM {
        shift += y.ln();
        y += 1.0;
    }
    ln_gamma_asymptotic(y) - shift
}

/// `psi^(k)(x)`, the `k`-th derivative of the digamma function, for real `x`
/// that is not a nonpositive integer.
pub fn polygamma(k: u32, x: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
    let kf = factorial(k);
    let mut acc = 0.0;
    let mut y = x;
    while y < ASYMPTOTIC_FROM {
        acc += sign * kf / y.powi(k as i32 + 1);
        y += 1.0;
    }
    let tail = if k == 0 {
        let mut s = y.ln() - 0.5 / y;
        for (j, b) in BERNOULLI.iter().enumerate() {
            let m = 2 * (j + 1);
            s -= b / (m as f64 * y.powi(m as i32));
        }
        s
    } else {
        let mut s = factorial(k - 1) / y.powi(k as i32) + kf / (2.0 * y.powi(k as i32 + 1));
        for (j, b) in BERNOULLI.iter().enumerate() {
            let m = 2 * (j as u32 + 1);
            s += b * factorial(m + k - 1) / (factorial(m) * y.powi((m + k) as i32));
        }
        sign * s
    };
    acc + tail
}

/// `Gamma(x)` for real `x`; infinite at the poles.
pub fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma_real(1.0 - x));
    }
    ln_gamma(x).exp()
}

pub fn digamma(x: f64) -> f64 {
    polygamma(0, x)
}

/// `exp` of a power series without constant term.
fn exp_series(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut b = vec![0.0; n];
    if n == 0 {
        return b;
    }
    b[0] = 1.0;
    for m in 1..n {
        let s: f64 = (1..=m).map(|k| k as f64 * a[k] * b[m - k]).sum();
        b[m] = s / m as f64;
    }
    b
}

/// Laurent series of `Gamma(z0 + eps)` through `eps^order`.
pub fn gamma_series(z0: f64, order: i32) -> Result<Series> {
    if order > MAX_GAMMA_ORDER {
        return Err(Error::OrderTooHigh(order as usize));
    }
    if z0 > 160.0 || !z0.is_finite() {
        return Err(Error::Unsupported(format!("Gamma series at {z0}")));
    }
    let shifts = if z0 >= ASYMPTOTIC_FROM {
        0
    } else {
        (ASYMPTOTIC_FROM - z0).ceil() as usize
    };
    let x = z0 + shifts as f64;
    // one extra order for each possible pole among the shifts
    let inner = order + 1;
    let mut log_coeffs = vec![0.0; inner as usize + 1];
    for (k, c) in log_coeffs.iter_mut().enumerate().skip(1) {
        *c = polygamma(k as u32 - 1, x) / factorial(k as u32);
    }
    let g = ln_gamma_asymptotic(x).exp();
    let mut s = Series::new(
        0,
        inner,
        exp_series(&log_coeffs)
            .into_iter()
            .map(|c| Complex64::new(g * c, 0.0))
            .collect(),
        Vec::new(),
    );
    for j in 0..shifts {
        let a = z0 + j as f64;
        let factor = if a.abs() < 1e-12 {
            Series::new(-1, inner, vec![Complex64::new(1.0, 0.0)], Vec::new())
        } else {
            let coeffs = (0..=inner + 1)
                .map(|k| Complex64::new((-1.0f64).powi(k) / a.powi(k + 1), 0.0))
                .collect();
            Series::new(0, inner + 1, coeffs, Vec::new())
        };
        s = s.mul(&factor);
    }
    Ok(s.truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digamma_at_one() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(2.0) - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((polygamma(1, 1.0) - zeta2).abs() < 1e-13);
    }

    #[test]
    fn gamma_near_one_and_zero() {
        let s = gamma_series(1.0, 3).unwrap();
        assert!((s.coefficient(0).re - 1.0).abs() < 1e-13);
        assert!((s.coefficient(1).re + EULER_GAMMA).abs() < 1e-13);
        let p = gamma_series(0.0, 2).unwrap();
        assert_eq!(p.leading_power(), Some(-1));
        assert!((p.coefficient(-1).re - 1.0).abs() < 1e-13);
        assert!((p.coefficient(0).re + EULER_GAMMA).abs() < 1e-13);
        let two = gamma_series(2.0, 1).unwrap();
        assert!((two.coefficient(1).re - (1.0 - EULER_GAMMA)).abs() < 1e-13);
        assert!(gamma_series(1.0, 13).is_err());
    }

    #[test]
    fn double_pole_free_at_negative_integers() {
        // Gamma(-1 + eps) = -1/eps + (gamma - 1) + ...
        let s = gamma_series(-1.0, 1).unwrap();
        assert!((s.coefficient(-1).re + 1.0).abs() < 1e-12);
        assert!((s.coefficient(0).re - (EULER_GAMMA - 1.0)).abs() < 1e-12);
    }
}
