//! `eps`-expansion by analytic continuation: partial integrations turn the
//! chart integral into a sum of terms convergent at `eps = 0`, each expanded
//! under the integral sign.

use rayon::prelude::*;

use super::{
    feynman_problem, gamma_prefactor, validate, vanishing_block, Expansion, RegulatorPoint,
};
use crate::error::Result;
use crate::graphs::{FeynmanGraph, KinematicAssignment};
use crate::mellin::{continue_to, DEFAULT_MAX_STEPS};
use crate::numeric::{Affine, CubatureOptions, Series};

pub fn eps_expand_ibp(
    g: &FeynmanGraph,
    reg: &RegulatorPoint,
    kin: &KinematicAssignment,
    order: i32,
    opts: &CubatureOptions,
) -> Result<Expansion> {
    validate(g, reg, order)?;
    if let Some(zero) = vanishing_block(g, reg, order)? {
        return Ok(zero);
    }
    let lambda: Vec<Affine> = reg.lambda0.iter().map(|l| Affine::constant(*l)).collect();
    let problem = feynman_problem(g, kin, &lambda, reg.half_dimension())?;
    let sum = continue_to(&problem, DEFAULT_MAX_STEPS)?;
    let gamma_poles = gamma_prefactor(g, reg, 0)?.start().min(0).unsigned_abs() as i32;
    let inner = order + gamma_poles;

    let mut jobs = Vec::new();
    let mut prefactors = Vec::new();
    for (i, t) in sum.terms.iter().enumerate() {
        let p = sum.term_problem(i);
        let poles = t.prefactor.pole_order() as i32;
        prefactors.push(t.prefactor.series(inner)?.to_series());
        for s in p.sectors(None)? {
            jobs.push((i, p.clone(), s, (inner + poles) as usize));
        }
    }
    let parts: Vec<(usize, Series, usize)> = jobs
        .par_iter()
        .map(|(i, p, s, k)| {
            let (v, e, n) = p.log_kernel(s, 0.0, *k).integrate(opts)?;
            Ok((*i, Series::new(0, *k as i32, v, e), n))
        })
        .collect::<Result<_>>()?;
    let mut integrals: Vec<Series> = prefactors
        .iter()
        .map(|p| Series::zero(inner - p.start()))
        .collect();
    let mut evaluations = 0;
    for (i, s, n) in parts {
        integrals[i] = integrals[i].add(&s);
        evaluations += n;
    }
    let mut total = Series::zero(inner);
    for (pre, int) in prefactors.iter().zip(&integrals) {
        total = total.add(&pre.mul(int).truncate(inner));
    }
    let gamma = gamma_prefactor(g, reg, order - total.start().min(0))?;
    Ok(Expansion {
        series: total.mul(&gamma).truncate(order),
        sectors: jobs.len(),
        evaluations,
        vanishing_subgraph: None,
    })
}
