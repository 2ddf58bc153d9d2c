//! Deterministic adaptive cubature of vector-valued complex integrands over
//! the unit cube: Gauss-Kronrod (7, 15) in one dimension and the Genz-Malik
//! degree 7/5 embedded rule in two or more.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubatureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        CubatureOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_evals: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubatureResult {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Region {
    lo: Vec<f64>,
    hi: Vec<f64>,
    values: Vec<Complex64>,
    errors: Vec<f64>,
    axis: usize,
    priority: f64,
}

impl PartialEq for Region {
    fn eq(&self, o: &Self) -> bool {
        self.priority.total_cmp(&o.priority) == Ordering::Equal
    }
}

impl Eq for Region {}

impl PartialOrd for Region {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Region {
    fn cmp(&self, o: &Self) -> Ordering {
        self.priority.total_cmp(&o.priority)
    }
}

/// Vector integrand writing `ncomp` values for a point of the cube.
pub trait Integrand: Sync {
    fn eval(&self, x: &[f64], out: &mut [Complex64]);
}

impl<F: Fn(&[f64], &mut [Complex64]) + Sync> Integrand for F {
    fn eval(&self, x: &[f64], out: &mut [Complex64]) {
        self(x, out)
    }
}

fn rule_gk15<I: Integrand + ?Sized>(
    f: &I,
    lo: f64,
    hi: f64,
    ncomp: usize,
) -> (Vec<Complex64>, Vec<f64>) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut fv = vec![vec![Complex64::zero(); ncomp]; 15];
    for (j, &x) in XGK.iter().enumerate() {
        f.eval(&[c - h * x], &mut fv[j]);
        if j < 7 {
            f.eval(&[c + h * x], &mut fv[8 + j]);
        }
    }
    let node = |j: usize, side: usize| if side == 0 { &fv[j] } else { &fv[8 + j] };
    let mut values = vec![Complex64::zero(); ncomp];
    let mut errors = vec![0.0; ncomp];
    for k in 0..ncomp {
        let mut kron = WGK[7] * fv[7][k];
        let mut gauss = WG[3] * fv[7][k];
        for j in 0..7 {
            let s = node(j, 0)[k] + node(j, 1)[k];
            kron += WGK[j] * s;
            if j % 2 == 1 {
                gauss += WG[j / 2] * s;
            }
        }
        let mean = kron * 0.5;
        let mut asc = WGK[7] * (fv[7][k] - mean).norm();
        for j in 0..7 {
            asc += WGK[j] * ((node(j, 0)[k] - mean).norm() + (node(j, 1)[k] - mean).norm());
        }
        let asc = asc * h;
        let diff = ((kron - gauss) * h).norm();
        let mut err = diff;
        if asc != 0.0 && diff != 0.0 {
            err = asc * (200.0 * diff / asc).powf(1.5).min(1.0);
        }
        values[k] = kron * h;
        errors[k] = err.max(50.0 * f64::EPSILON * values[k].norm());
    }
    (values, errors)
}

const L2: f64 = 0.358_568_582_800_318_1; // sqrt(9/70)
const L4: f64 = 0.948_683_298_050_513_8; // sqrt(9/10)
const L5: f64 = 0.688_247_201_611_685_3; // sqrt(9/19)

/// Genz-Malik rule on a box; returns values, errors and the axis with the
/// largest fourth difference.
fn rule_gm<I: Integrand + ?Sized>(
    f: &I,
    lo: &[f64],
    hi: &[f64],
    ncomp: usize,
) -> (Vec<Complex64>, Vec<f64>, usize) {
    let d = lo.len();
    let df = d as f64;
    let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).collect();
    let vol: f64 = h.iter().map(|x| 2.0 * x).product();

    let w1 = (12824.0 - 9120.0 * df + 400.0 * df * df) / 19683.0;
    let w2 = 980.0 / 6561.0;
    let w3 = (1820.0 - 400.0 * df) / 19683.0;
    let w4 = 200.0 / 19683.0;
    let w5 = 6859.0 / 19683.0 / 2f64.powi(d as i32);
    let v1 = (729.0 - 950.0 * df + 50.0 * df * df) / 729.0;
    let v2 = 245.0 / 486.0;
    let v3 = (265.0 - 100.0 * df) / 1458.0;
    let v4 = 25.0 / 729.0;

    let zero = vec![Complex64::zero(); ncomp];
    let mut buf = zero.clone();
    let mut x = c.clone();
    let mut f0 = zero.clone();
    f.eval(&x, &mut f0);

    let mut s2 = zero.clone();
    let mut s3 = zero.clone();
    let mut s4 = zero.clone();
    let mut s5 = zero.clone();
    let mut best_axis = 0;
    let mut best_diff = -1.0;
    let ratio = (L2 * L2) / (L4 * L4);
    for i in 0..d {
        let mut p2 = zero.clone();
        let mut p3 = zero.clone();
        for sign in [-1.0, 1.0] {
            x[i] = c[i] + sign * L2 * h[i];
            f.eval(&x, &mut buf);
            p2.iter_mut().zip(&buf).for_each(|(a, b)| *a += b);
            x[i] = c[i] + sign * L4 * h[i];
            f.eval(&x, &mut buf);
            p3.iter_mut().zip(&buf).for_each(|(a, b)| *a += b);
        }
        x[i] = c[i];
        let diff: f64 = (0..ncomp)
            .map(|k| (p2[k] - 2.0 * f0[k] - ratio * (p3[k] - 2.0 * f0[k])).norm())
            .sum();
        if diff > best_diff * (1.0 + 1e-12) {
            best_diff = diff;
            best_axis = i;
        }
        s2.iter_mut().zip(&p2).for_each(|(a, b)| *a += b);
        s3.iter_mut().zip(&p3).for_each(|(a, b)| *a += b);
    }
    for i in 0..d {
        for j in i + 1..d {
            for si in [-1.0, 1.0] {
                for sj in [-1.0, 1.0] {
                    x[i] = c[i] + si * L4 * h[i];
                    x[j] = c[j] + sj * L4 * h[j];
                    f.eval(&x, &mut buf);
                    s4.iter_mut().zip(&buf).for_each(|(a, b)| *a += b);
                }
            }
            x[i] = c[i];
            x[j] = c[j];
        }
    }
    for corner in 0..(1usize << d) {
        for i in 0..d {
            let sign = if (corner >> i) & 1 == 1 { 1.0 } else { -1.0 };
            x[i] = c[i] + sign * L5 * h[i];
        }
        f.eval(&x, &mut buf);
        s5.iter_mut().zip(&buf).for_each(|(a, b)| *a += b);
    }
    let mut values = zero.clone();
    let mut errors = vec![0.0; ncomp];
    for k in 0..ncomp {
        let seven = w1 * f0[k] + w2 * s2[k] + w3 * s3[k] + w4 * s4[k] + w5 * s5[k];
        let five = v1 * f0[k] + v2 * s2[k] + v3 * s3[k] + v4 * s4[k];
        values[k] = seven * vol;
        errors[k] = ((seven - five) * vol)
            .norm()
            .max(50.0 * f64::EPSILON * values[k].norm());
    }
    (values, errors, best_axis)
}

pub fn genz_malik_points(d: usize) -> usize {
    1 + 4 * d + 2 * d * d.saturating_sub(1) + (1 << d)
}

fn make_region<I: Integrand + ?Sized>(
    f: &I,
    lo: Vec<f64>,
    hi: Vec<f64>,
    ncomp: usize,
) -> (Region, usize) {
    if lo.len() == 1 {
        let (values, errors) = rule_gk15(f, lo[0], hi[0], ncomp);
        let priority = errors.iter().cloned().fold(0.0, f64::max);
        (
            Region {
                lo,
                hi,
                values,
                errors,
                axis: 0,
                priority,
            },
            15,
        )
    } else {
        let (values, errors, axis) = rule_gm(f, &lo, &hi, ncomp);
        let priority = errors.iter().cloned().fold(0.0, f64::max);
        let n = genz_malik_points(lo.len());
        (
            Region {
                lo,
                hi,
                values,
                errors,
                axis,
                priority,
            },
            n,
        )
    }
}

fn totals(regions: &BinaryHeap<Region>, ncomp: usize) -> (Vec<Complex64>, Vec<f64>) {
    let mut list: Vec<&Region> = regions.iter().collect();
    list.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
    let mut values = vec![Complex64::zero(); ncomp];
    let mut errors = vec![0.0; ncomp];
    for r in list {
        for k in 0..ncomp {
            values[k] += r.values[k];
            errors[k] += r.errors[k];
        }
    }
    (values, errors)
}

fn converged(values: &[Complex64], errors: &[f64], opts: &CubatureOptions) -> bool {
    values
        .iter()
        .zip(errors)
        .all(|(v, e)| *e <= opts.abs_tol.max(opts.rel_tol * v.norm()))
}

/// Integrates `f` over `[0,1]^dim`.
pub fn integrate<I: Integrand + ?Sized>(
    f: &I,
    dim: usize,
    ncomp: usize,
    opts: &CubatureOptions,
) -> Result<CubatureResult> {
    if dim == 0 {
        let mut values = vec![Complex64::zero(); ncomp];
        f.eval(&[], &mut values);
        return Ok(CubatureResult {
            values,
            errors: vec![0.0; ncomp],
            evaluations: 1,
        });
    }
    let mut heap = BinaryHeap::new();
    let (first, mut evals) = make_region(f, vec![0.0; dim], vec![1.0; dim], ncomp);
    let mut values = first.values.clone();
    let mut errors = first.errors.clone();
    heap.push(first);
    let mut since_resum = 0;
    loop {
        if converged(&values, &errors, opts) {
            let (values, errors) = totals(&heap, ncomp);
            if converged(&values, &errors, opts) {
                return Ok(CubatureResult {
                    values,
                    errors,
                    evaluations: evals,
                });
            }
        }
        if evals >= opts.max_evals {
            let (values, errors) = totals(&heap, ncomp);
            let worst = values
                .iter()
                .zip(&errors)
                .map(|(v, e)| e / opts.abs_tol.max(opts.rel_tol * v.norm()))
                .fold(0.0, f64::max);
            let error = errors.iter().cloned().fold(0.0, f64::max);
            if worst <= 1.0 {
                return Ok(CubatureResult {
                    values,
                    errors,
                    evaluations: evals,
                });
            }
            return Err(Error::CubatureBudget {
                error,
                evaluations: evals,
            });
        }
        let r = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (r.lo[r.axis] + r.hi[r.axis]);
        let mut hi_a = r.hi.clone();
        hi_a[r.axis] = mid;
        let mut lo_b = r.lo.clone();
        lo_b[r.axis] = mid;
        let (a, na) = make_region(f, r.lo.clone(), hi_a, ncomp);
        let (b, nb) = make_region(f, lo_b, r.hi.clone(), ncomp);
        evals += na + nb;
        for k in 0..ncomp {
            values[k] += a.values[k] + b.values[k] - r.values[k];
            errors[k] += a.errors[k] + b.errors[k] - r.errors[k];
        }
        heap.push(a);
        heap.push(b);
        since_resum += 1;
        if since_resum >= 256 {
            let t = totals(&heap, ncomp);
            values = t.0;
            errors = t.1;
            since_resum = 0;
        }
    }
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F: Fn(&[f64]) -> Complex64 + Sync>(
    f: F,
    dim: usize,
    opts: &CubatureOptions,
) -> Result<(Complex64, f64)> {
    let g = |x: &[f64], out: &mut [Complex64]| out[0] = f(x);
    let r = integrate(&g, dim, 1, opts)?;
    Ok((r.values[0], r.errors[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CubatureOptions {
        CubatureOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_evals: 2_000_000,
        }
    }

    #[test]
    fn genz_malik_is_exact_on_degree_seven() {
        for d in 2..=5 {
            // one region, no refinement: monomials of degree <= 7 integrate exactly
            let f = |x: &[f64], out: &mut [Complex64]| {
                let p: f64 = x[0].powi(5) * x[1].powi(2) + x.iter().map(|t| t.powi(7)).sum::<f64>();
                out[0] = Complex64::new(p, 0.0);
                out[1] = Complex64::new(x[0] * x[1] * x[d - 1].powi(3), 0.0);
            };
            let (v, _, _) = rule_gm(&f, &vec![0.0; d], &vec![1.0; d], 2);
            let exact0 = 1.0 / 18.0 + d as f64 / 8.0;
            let exact1 = if d == 2 {
                1.0 / 2.0 * 1.0 / 5.0
            } else {
                1.0 / 16.0
            };
            assert!((v[0].re - exact0).abs() < 1e-13, "d={d}");
            assert!((v[1].re - exact1).abs() < 1e-13, "d={d}");
        }
    }

    #[test]
    fn one_dimensional_singular() {
        // int_0^1 x^{-1/2} = 2
        let (v, e) =
            integrate_scalar(|x| Complex64::new(x[0].powf(-0.5), 0.0), 1, &opts()).unwrap();
        assert!((v.re - 2.0).abs() < 1e-9, "{v} {e}");
    }

    #[test]
    fn two_dimensional_smooth() {
        let (v, _) = integrate_scalar(
            |x| Complex64::new(1.0 / (1.0 + x[0] + x[1]), 0.0),
            2,
            &opts(),
        )
        .unwrap();
        let exact = 3.0 * 3f64.ln() - 4.0 * 2f64.ln();
        assert!((v.re - exact).abs() < 1e-10);
    }

    #[test]
    fn budget_is_reported() {
        let tight = CubatureOptions {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_evals: 1000,
        };
        let r = integrate_scalar(
            |x| Complex64::new(x[0].ln().abs().sqrt() * x[1], 0.0),
            2,
            &tight,
        );
        assert!(matches!(r, Err(Error::CubatureBudget { .. })));
    }
}
