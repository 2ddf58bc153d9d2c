use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

use feynpoly::bits;
use feynpoly::dimreg::{
    feynman_convergence_domain, feynman_problem, strategy_fan, OmegaData, RegulatorPoint,
    Strategy as FanStrategy,
};
use feynpoly::graphs::catalog::from_lists;
use feynpoly::graphs::{FeynmanGraph, KinematicAssignment};
use feynpoly::io::GraphFile;
use feynpoly::lattice::refines_polytope;
use feynpoly::mellin::{ibp_derivative, order_along, MellinProblem};
use feynpoly::numeric::{Affine, CubatureOptions, QSeries, Q};
use feynpoly::poly::{newton_polytope, ComplexPolynomial, KinSymbol};

#[derive(Clone, Debug)]
struct Spec {
    vertices: usize,
    edges: Vec<(usize, usize, bool)>,
    external: Vec<bool>,
}

fn spec() -> impl Strategy<Value = Spec> {
    (2usize..=4)
        .prop_flat_map(|nv| {
            (
                Just(nv),
                prop::collection::vec((0..nv, 0..nv, any::<bool>()), 1..=5),
                prop::collection::vec(any::<bool>(), nv),
            )
        })
        .prop_map(|(vertices, edges, external)| Spec {
            vertices,
            edges,
            external,
        })
}

fn build(s: &Spec) -> Option<FeynmanGraph> {
    let names: Vec<String> = (1..=s.vertices).map(|i| format!("v{i}")).collect();
    let ids: Vec<String> = (1..=s.edges.len()).map(|i| format!("e{i}")).collect();
    let labels: Vec<String> = (1..=s.vertices).map(|i| format!("p{i}")).collect();
    let edges: Vec<(&str, &str, &str, bool)> = s
        .edges
        .iter()
        .zip(&ids)
        .map(|(&(a, b, m), id)| (id.as_str(), names[a].as_str(), names[b].as_str(), m))
        .collect();
    let external: Vec<(&str, &str)> = (0..s.vertices)
        .filter(|&i| s.external[i])
        .map(|i| (names[i].as_str(), labels[i].as_str()))
        .collect();
    let g = from_lists(&edges, &external).ok()?;
    (g.num_vertices() == s.vertices && g.is_connected()).then_some(g)
}

/// Kinematics with every symbol of `Phi` set to a value in `[0.5, 2)`.
fn random_kinematics(g: &FeynmanGraph, values: &[f64]) -> KinematicAssignment {
    let s = g.symanzik().unwrap();
    let mut syms: Vec<KinSymbol> = s
        .big_phi
        .terms()
        .values()
        .flat_map(|c| c.terms().keys().flatten().cloned().collect::<Vec<_>>())
        .collect();
    syms.sort();
    syms.dedup();
    let mut k = KinematicAssignment::new();
    for (i, sym) in syms.iter().enumerate() {
        let v = Complex64::new(0.5 + 1.5 * values[i % values.len()], 0.0);
        match sym {
            KinSymbol::Sq(l) => k.set_sq(g, l, v).unwrap(),
            KinSymbol::M2(e) => k.set_m2(g, e, v).unwrap(),
        }
    }
    k
}

fn rational() -> impl Strategy<Value = Rational64> {
    (1i64..=40, 1i64..=8).prop_map(|(n, d)| Rational64::new(n, d))
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn newton_polytope_is_the_base_polytope(s in spec()) {
        let Some(g) = build(&s) else { return Ok(()); };
        let sym = g.symanzik().unwrap();
        let oracle = newton_polytope(&sym.psi.mul(&sym.big_phi));
        let p = g.feynman_polytope().unwrap();
        if sym.big_phi.is_zero() {
            prop_assert!(oracle.is_err());
        } else {
            let oracle = oracle.unwrap();
            prop_assert_eq!(p.vertices(), oracle.vertices());
        }
    }

    #[test]
    fn kirchhoff_matches_tree_enumeration(s in spec()) {
        let Some(g) = build(&s) else { return Ok(()); };
        prop_assert_eq!(g.kirchhoff_psi().unwrap(), g.psi().unwrap());
    }

    #[test]
    fn s_function_is_supermodular(s in spec()) {
        let Some(g) = build(&s) else { return Ok(()); };
        let full = bits::full(g.num_edges());
        for i in 0..=full {
            for j in 0..=full {
                prop_assert!(g.s_value(i) + g.s_value(j) <= g.s_value(i & j) + g.s_value(i | j));
            }
        }
    }

    #[test]
    fn s_irreducible_iff_full_dimensional(s in spec()) {
        let Some(g) = build(&s) else { return Ok(()); };
        if g.num_edges() < 2 || g.symanzik().unwrap().big_phi.is_zero() {
            return Ok(());
        }
        let p = g.feynman_polytope().unwrap();
        prop_assert_eq!(g.is_s_irreducible(), p.dim() + 1 == g.num_edges());
        prop_assert_eq!(feynman_convergence_domain(&g).unwrap().nonempty, g.is_s_irreducible());
    }

    #[test]
    fn omega_is_additive(s in spec(), lambda in prop::collection::vec(rational(), 5), d in rational()) {
        let Some(g) = build(&s) else { return Ok(()); };
        let reg = RegulatorPoint::new(lambda[..g.num_edges()].to_vec(), d).unwrap();
        let w = OmegaData::new(&g, &reg).unwrap();
        for mask in 0..w.omega.len() {
            prop_assert_eq!(w.omega[mask] + w.omega_quotient[mask], w.total());
        }
    }

    #[test]
    fn domain_matches_mellin_convergence(
        s in spec(),
        lambda in prop::collection::vec(rational(), 5),
        d in rational(),
        values in prop::collection::vec(0.0f64..1.0, 8),
    ) {
        let Some(g) = build(&s) else { return Ok(()); };
        if g.num_edges() < 2 || !g.is_s_irreducible() {
            return Ok(());
        }
        let lambda = &lambda[..g.num_edges()];
        let k = random_kinematics(&g, &values);
        let la: Vec<Affine> = lambda.iter().map(|l| Affine::constant(*l)).collect();
        let p = feynman_problem(&g, &k, &la, Affine::constant(d / 2)).unwrap();
        let domain = feynman_convergence_domain(&g).unwrap();
        prop_assert_eq!(domain.contains(&g, lambda, d), p.convergence_check(0.0).unwrap().converges);
    }

    #[test]
    fn strategies_refine_and_keep_factors_away_from_zero(
        s in spec(),
        values in prop::collection::vec(0.0f64..1.0, 8),
        seed in any::<u64>(),
    ) {
        let Some(g) = build(&s) else { return Ok(()); };
        if g.num_edges() < 2 || !g.is_s_irreducible() {
            return Ok(());
        }
        let k = random_kinematics(&g, &values);
        let reg = RegulatorPoint::unit(&g, 4);
        let la: Vec<Affine> = reg.lambda0.iter().map(|l| Affine::constant(*l)).collect();
        let p = feynman_problem(&g, &k, &la, reg.half_dimension()).unwrap();
        let polytope = g.feynman_polytope().unwrap().projective().unwrap();
        for strategy in [FanStrategy::Hepp, FanStrategy::Smirnov, FanStrategy::Motic] {
            let fan = strategy_fan(&g, strategy).unwrap().unwrap();
            prop_assert!(fan.is_smooth());
            prop_assert!(refines_polytope(&fan, &polytope).unwrap().holds);
            for sector in p.sector_decompose(&fan).unwrap() {
                prop_assert!(sector.min_modulus(200, seed) > 1e-8);
            }
        }
    }

    #[test]
    fn graph_files_round_trip(s in spec(), values in prop::collection::vec(0.0f64..1.0, 8)) {
        let Some(g) = build(&s) else { return Ok(()); };
        let k = random_kinematics(&g, &values);
        let f = GraphFile::from_graph(&g, &k);
        let again = GraphFile::parse(&f.to_json()).unwrap();
        prop_assert_eq!(&again, &f);
        let g2 = again.graph().unwrap();
        prop_assert_eq!(g2.edges(), g.edges());
        prop_assert_eq!(again.kinematics(&g2).unwrap(), k);
    }

    #[test]
    fn ibp_derivative_raises_the_order(
        terms in prop::collection::vec((prop::collection::vec(-3i64..=3, 2), -5i64..=5), 1..=4),
        u in prop::collection::vec(-3i64..=3, 2),
    ) {
        let h = ComplexPolynomial::from_terms(2, terms.iter().map(|(e, k)| (e.clone(), c(*k as f64))));
        let Some(d) = order_along(&h, &u) else { return Ok(()); };
        let hr = ibp_derivative(&h, &u);
        if let Some(dr) = order_along(&hr, &u) {
            prop_assert!(dr > d);
        }
    }

    #[test]
    fn reciprocal_series_inverts(a in -20i64..=20, b in 1i64..=5, den in 1i64..=4) {
        let x = Affine::new(Rational64::new(a, den), Rational64::from_integer(b));
        let r = QSeries::reciprocal(x, 4).unwrap();
        let p = r.mul(&QSeries::affine(x, 5));
        for k in p.start()..=4 {
            let want = if k == 0 { Q::from_integer(1.into()) } else { Q::from_integer(0.into()) };
            prop_assert_eq!(p.coefficient(k), want);
        }
    }
}

/// One partial integration along `u`, evaluated term by term.
fn one_step(p: &MellinProblem, u: &[i64], opts: &CubatureOptions) -> Complex64 {
    let sigma = p.slack(u).unwrap().at(0.0);
    let mut total = Complex64::new(0.0, 0.0);
    let d = ibp_derivative(p.numerator(), u);
    if !d.is_zero() {
        total -= p.with_term(d, &[0]).evaluate_numeric(0.0, opts).unwrap().0 / sigma;
    }
    for (i, f) in p.factors().iter().enumerate() {
        let g = p.numerator().mul(&ibp_derivative(&f.polynomial, u));
        if g.is_zero() {
            continue;
        }
        let mut shift = vec![0; p.factors().len()];
        shift[i] = 1;
        total += p
            .with_term(g, &shift)
            .evaluate_numeric(0.0, opts)
            .unwrap()
            .0
            * f.exponent.at(0.0)
            / sigma;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_step_identity_holds(
        coeffs in prop::collection::vec(0.2f64..2.0, 3),
        top in 1i64..=2,
        c_num in 4i64..=8,
        s_frac in 0.15f64..0.85,
    ) {
        let f = ComplexPolynomial::from_terms(
            1,
            [(vec![0], c(coeffs[0])), (vec![1], c(coeffs[1])), (vec![top + 1], c(coeffs[2]))],
        );
        let cc = Rational64::new(c_num, 2);
        let upper = cc * Rational64::from_integer(top + 1);
        let s = Rational64::new((s_frac * 100.0).round() as i64, 100) * upper;
        let p = MellinProblem::new(vec![(f, Affine::constant(cc))], ComplexPolynomial::one(1), vec![Affine::constant(s)])
            .unwrap();
        prop_assume!(p.convergence_check(0.0).unwrap().converges);
        let opts = CubatureOptions { abs_tol: 1e-12, rel_tol: 1e-11, max_evals: 1_000_000 };
        let (direct, _) = p.evaluate_numeric(0.0, &opts).unwrap();
        for u in [[1], [-1]] {
            let w = one_step(&p, &u, &opts);
            prop_assert!((w - direct).norm() <= 1e-8 * direct.norm(), "{} vs {}", w, direct);
        }
    }
}
