//! `eps`-expansion by sector decomposition with Taylor subtraction.
//!
//! In a sector with exponents `a_j = a0_j + a1_j eps`, the coordinates with
//! `a0_j <= 0` are split off by subtracting Taylor polynomials of order
//! `alpha_j - 1 = floor(-a0_j)`. The subtracted monomials integrate to
//! `1/(a_j + beta_j)` in closed form; the remainders are integrable at
//! `eps = 0` and are expanded under the integral sign.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{
    feynman_problem, gamma_prefactor, validate, vanishing_block, Expansion, RegulatorPoint,
};
use crate::bits;
use crate::error::{Error, Result};
use crate::graphs::{FeynmanGraph, KinematicAssignment};
use crate::lattice::Fan;
use crate::mellin::{branch_log, power_for, MellinProblem, Sector};
use crate::numeric::{integrate, Affine, CubatureOptions, QSeries, Series, Taylor, Q};

pub fn eps_expand_sector(
    g: &FeynmanGraph,
    fan: Option<&Fan>,
    reg: &RegulatorPoint,
    kin: &KinematicAssignment,
    order: i32,
    opts: &CubatureOptions,
) -> Result<Expansion> {
    validate(g, reg, order)?;
    if let Some(zero) = vanishing_block(g, reg, order)? {
        return Ok(zero);
    }
    if let Some(f) = fan {
        if !f.is_smooth() {
            return Err(Error::Unsupported(
                "sector expansion needs a smooth fan".into(),
            ));
        }
    }
    let lambda: Vec<Affine> = reg.lambda0.iter().map(|l| Affine::constant(*l)).collect();
    let problem = feynman_problem(g, kin, &lambda, reg.half_dimension())?;
    let gamma_poles = gamma_prefactor(g, reg, 0)?.start().min(0).unsigned_abs() as i32;
    let inner = order + gamma_poles;
    let sectors = problem.sectors(fan)?;
    let parts: Vec<(Series, usize)> = sectors
        .par_iter()
        .map(|s| expand_sector(&problem, s, inner, opts))
        .collect::<Result<_>>()?;
    let mut total = Series::zero(inner);
    let mut evaluations = 0;
    for (s, e) in &parts {
        total = total.add(s);
        evaluations += e;
    }
    let gamma = gamma_prefactor(g, reg, order - total.start().min(0))?;
    Ok(Expansion {
        series: total.mul(&gamma).truncate(order),
        sectors: sectors.len(),
        evaluations,
        vanishing_subgraph: None,
    })
}

/// Multi-indices `beta` with `beta_i < bounds_i`.
fn boxes(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| (0..b).map(move |k| [v.clone(), vec![k]].concat()))
            .collect();
    }
    out
}

/// Laurent series of one sector through `eps^order`.
pub(crate) fn expand_sector(
    problem: &MellinProblem,
    sector: &Sector,
    order: i32,
    opts: &CubatureOptions,
) -> Result<(Series, usize)> {
    let d = sector.exponents.len();
    let a0: Vec<Rational64> = sector.exponents.iter().map(|a| a.constant).collect();
    let a1: Vec<f64> = sector
        .exponents
        .iter()
        .map(|a| a.slope.to_f64().unwrap_or(0.0))
        .collect();
    let divergent: Vec<usize> = (0..d).filter(|&j| a0[j] <= Rational64::zero()).collect();
    let mut alpha = vec![0usize; d];
    for &j in &divergent {
        alpha[j] = ((-a0[j]).floor().to_integer() + 1) as usize;
    }
    let n_int = (order + divergent.len() as i32).max(0) as usize;
    let kernel = problem.log_kernel(sector, 0.0, n_int);
    let mut total = Series::zero(order);
    let mut evaluations = 0;
    for smask in 0..(1u64 << divergent.len()) {
        let s_vars: Vec<usize> = bits::elements(smask).map(|i| divergent[i]).collect();
        let t_vars: Vec<usize> = divergent
            .iter()
            .copied()
            .filter(|j| !s_vars.contains(j))
            .collect();
        let r_vars: Vec<usize> = (0..d).filter(|j| !s_vars.contains(j)).collect();
        let betas = boxes(&s_vars.iter().map(|&j| alpha[j]).collect::<Vec<_>>());
        let mut prefactors = Vec::with_capacity(betas.len());
        for beta in &betas {
            let mut q = QSeries::constant(Q::from_integer(1), order + s_vars.len() as i32);
            for (&j, &b) in s_vars.iter().zip(beta) {
                let shifted = sector.exponents[j] + Affine::integer(b as i64);
                q = q.mul(&QSeries::reciprocal(shifted, order + s_vars.len() as i32)?);
            }
            prefactors.push(q.to_series());
        }
        let powers: Vec<f64> = r_vars
            .iter()
            .map(|&j| {
                let e = a0[j] + Rational64::from_integer(alpha[j] as i64);
                power_for(e.to_f64().unwrap_or(1.0))
            })
            .collect();
        let a0f: Vec<f64> = a0.iter().map(|a| a.to_f64().unwrap_or(0.0)).collect();
        let ncomp = betas.len() * (n_int + 1);
        let f = |y: &[f64], out: &mut [Complex64]| {
            let mut x = vec![0.0; d];
            let mut w = kernel.weight;
            let mut lambda_x = 0.0;
            for (k, &j) in r_vars.iter().enumerate() {
                let p = powers[k];
                x[j] = y[k].powf(p);
                w *= p * y[k].powf(p * a0f[j] - 1.0);
                if a1[j] != 0.0 {
                    lambda_x += a1[j] * p * y[k].ln();
                }
            }
            let mut vals = vec![Complex64::zero(); ncomp];
            for umask in 0..(1u64 << t_vars.len()) {
                let u_vars: Vec<usize> = bits::elements(umask).map(|i| t_vars[i]).collect();
                let sign = if u_vars.len().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                let mut v_vars: Vec<usize> = s_vars.iter().chain(&u_vars).copied().collect();
                v_vars.sort_unstable();
                let orders: Vec<usize> = v_vars.iter().map(|&j| alpha[j] - 1).collect();
                let fk = log_powers(&kernel, &x, &v_vars, &orders);
                let u_box = boxes(&u_vars.iter().map(|&j| alpha[j]).collect::<Vec<_>>());
                for (b, beta) in betas.iter().enumerate() {
                    for gamma in &u_box {
                        let mut mono = sign;
                        let mut idx = vec![0usize; v_vars.len()];
                        for (pos, &j) in v_vars.iter().enumerate() {
                            if let Some(i) = s_vars.iter().position(|&s| s == j) {
                                idx[pos] = beta[i];
                            } else {
                                let i = u_vars.iter().position(|&u| u == j).expect("variable in U");
                                idx[pos] = gamma[i];
                                mono *= x[j].powi(gamma[i] as i32);
                            }
                        }
                        for (k, t) in fk.iter().enumerate() {
                            vals[b * (n_int + 1) + k] += t.coefficient(&idx) * mono;
                        }
                    }
                }
            }
            for b in 0..betas.len() {
                for k in 0..=n_int {
                    let mut acc = Complex64::zero();
                    let mut lpow = 1.0;
                    for k1 in 0..=k {
                        acc += vals[b * (n_int + 1) + k - k1] * lpow;
                        lpow *= lambda_x / (k1 + 1) as f64;
                    }
                    out[b * (n_int + 1) + k] = acc * w;
                }
            }
        };
        let r = integrate(&f, r_vars.len(), ncomp, opts)?;
        evaluations += r.evaluations;
        for (b, pre) in prefactors.iter().enumerate() {
            let range = b * (n_int + 1)..(b + 1) * (n_int + 1);
            let num = Series::new(
                0,
                n_int as i32,
                r.values[range.clone()].to_vec(),
                r.errors[range].to_vec(),
            );
            total = total.add(&pre.mul(&num).truncate(order));
        }
    }
    Ok((total, evaluations))
}

/// Taylor series of `F0 L^k / k!`, `k = 0..=order`, where `F0 = prod f^{-c0} g`
/// and `L = -sum c1 log f`, expanded in `vars` around zero.
fn log_powers(
    kernel: &crate::mellin::LogKernel,
    x: &[f64],
    vars: &[usize],
    orders: &[usize],
) -> Vec<Taylor> {
    let mut log_f0 = Taylor::constant(orders, Complex64::zero());
    let mut lambda = Taylor::constant(orders, Complex64::zero());
    for (i, poly) in kernel.factors.iter().enumerate() {
        let t = Taylor::from_polynomial(poly, x, vars, orders);
        let l = t.log_with(branch_log(t.constant_term(), kernel.thetas[i]));
        log_f0 = log_f0.add(&l.scale(Complex64::new(-kernel.c0[i], 0.0)));
        lambda = lambda.add(&l.scale(Complex64::new(-kernel.c1[i], 0.0)));
    }
    let mut term = log_f0
        .exp()
        .mul(&Taylor::from_polynomial(&kernel.numerator, x, vars, orders));
    let mut out = Vec::with_capacity(kernel.order + 1);
    for k in 0..=kernel.order {
        out.push(term.clone());
        term = term
            .mul(&lambda)
            .scale(Complex64::new(1.0 / (k + 1) as f64, 0.0));
    }
    out
}
