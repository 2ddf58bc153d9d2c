use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use feynpoly::bits;
use feynpoly::dimreg::{
    eps_expand_ibp, eps_expand_sector, feynman_convergence_domain, strategy_fan, symbolic_sectors,
    Expansion, RegulatorPoint, Strategy,
};
use feynpoly::error::Error;
use feynpoly::graphs::{FeynmanGraph, KinematicAssignment};
use feynpoly::io::{parse_rational, GraphFile, MellinFile};
use feynpoly::mellin::{continue_to, DEFAULT_MAX_STEPS};
use feynpoly::numeric::CubatureOptions;

#[derive(Parser)]
#[command(
    name = "feynpoly",
    version,
    about = "Feynman polytopes, sector decompositions and epsilon expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Hepp,
    Smirnov,
    Motic,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Hepp => Strategy::Hepp,
            StrategyArg::Smirnov => Strategy::Smirnov,
            StrategyArg::Motic => Strategy::Motic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Sector,
    Ibp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Action {
    Check,
    Value,
    Continue,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices and facets of the Feynman polytope.
    Polytope { file: PathBuf },
    /// Sector decomposition of the parametric integrand.
    Sectors {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "smirnov")]
        strategy: StrategyArg,
        #[arg(long, default_value = "4")]
        dim: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convergence domain and membership of a point `(lambda, D)`.
    Converge {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<String>>,
        #[arg(long, default_value = "4")]
        dim: String,
    },
    /// Laurent expansion in `eps` with `D = dim0 - 2 eps`.
    Expand(ExpandArgs),
    /// Mellin transform of a product of Laurent polynomials.
    Mellin {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "check")]
        action: Action,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, clap::Args)]
struct ExpandArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "sector")]
    method: Method,
    #[arg(long, default_value = "4")]
    dim0: String,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(i32).range(0..=8))]
    order: i32,
    #[arg(long, value_enum, default_value = "smirnov")]
    strategy: StrategyArg,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::CubatureBudget { .. } | Error::StepBudget(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Polytope { file } => cmd_polytope(&file),
        Command::Sectors {
            file,
            strategy,
            dim,
            seed,
        } => cmd_sectors(&file, strategy.into(), &dim, seed),
        Command::Converge { file, lambda, dim } => cmd_converge(&file, lambda, &dim),
        Command::Expand(args) => {
            if let Some(n) = args.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Failure {
                        code: 3,
                        message: e.to_string(),
                    })?;
            }
            cmd_expand(&args)
        }
        Command::Mellin {
            file,
            action,
            eps,
            tol,
        } => cmd_mellin(&file, action, eps, tol),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> std::result::Result<(FeynmanGraph, KinematicAssignment), Failure> {
    let file = GraphFile::parse(&read(path)?)
        .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    let g = file.graph()?;
    let k = file.kinematics(&g)?;
    Ok((g, k))
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match output {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Failure {
            code: 3,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn edge_names(g: &FeynmanGraph, mask: u64) -> Vec<String> {
    bits::elements(mask)
        .map(|i| g.edges()[i].id.clone())
        .collect()
}

fn options(tol: Option<f64>) -> CubatureOptions {
    let mut o = CubatureOptions::default();
    if let Some(t) = tol {
        o.rel_tol = t;
        o.abs_tol = t * 1e-2;
    }
    o
}

#[derive(Serialize, Deserialize)]
struct FacetReport {
    subgraph: Vec<String>,
    bound: i64,
    kind: String,
}

#[derive(Serialize, Deserialize)]
struct PolytopeReport {
    edges: Vec<String>,
    dimension: usize,
    vertices: Vec<Vec<i64>>,
    s_irreducible: bool,
    facets: Vec<FacetReport>,
}

fn cmd_polytope(path: &Path) -> Outcome {
    let (g, _) = load_graph(path)?;
    let p = g.feynman_polytope()?;
    let s_irreducible = g.is_s_irreducible();
    let mut facets = Vec::new();
    if s_irreducible && g.num_edges() > 1 {
        let split = g.facet_split()?;
        for (masks, kind) in [(&split.scaleless, "hard"), (&split.mass_momentum, "soft")] {
            for &m in masks {
                facets.push(FacetReport {
                    subgraph: edge_names(&g, m),
                    bound: g.s_value(m),
                    kind: kind.into(),
                });
            }
        }
    }
    let mut vertices = p.vertices().to_vec();
    vertices.sort();
    emit(
        &PolytopeReport {
            edges: g.edge_ids(),
            dimension: p.dim(),
            vertices,
            s_irreducible,
            facets,
        },
        None,
    )
}

#[derive(Serialize, Deserialize)]
struct SectorOut {
    generators: Vec<Vec<i64>>,
    jacobian: i64,
    substitution: Vec<String>,
    /// `a_j - 1` of the leading monomial `prod x_j^{a_j - 1}`.
    leading_exponents: Vec<String>,
    psi: String,
    phi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_modulus: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct SectorsReport {
    strategy: String,
    count: usize,
    sectors: Vec<SectorOut>,
}

fn fan_with_fallback(
    g: &FeynmanGraph,
    strategy: Strategy,
) -> std::result::Result<(Strategy, Option<feynpoly::lattice::Fan>), Failure> {
    if strategy != Strategy::Hepp && !g.is_s_irreducible() {
        eprintln!("warning: {strategy} sectors need an s-irreducible graph; using hepp");
        return Ok((Strategy::Hepp, strategy_fan(g, Strategy::Hepp)?));
    }
    match strategy_fan(g, strategy) {
        Ok(f) => Ok((strategy, f)),
        Err(e) => {
            eprintln!("warning: {strategy} fan unavailable ({e}); using hepp");
            Ok((Strategy::Hepp, strategy_fan(g, Strategy::Hepp)?))
        }
    }
}

fn cmd_sectors(path: &Path, strategy: Strategy, dim: &str, seed: u64) -> Outcome {
    let (g, kin) = load_graph(path)?;
    let d = parse_rational(dim, "--dim")?;
    let reg = RegulatorPoint::new(g.lambdas(), d)?;
    let (used, fan) = fan_with_fallback(&g, strategy)?;
    let sectors = symbolic_sectors(&g, fan.as_ref(), &reg)?;
    let moduli: Option<Vec<f64>> = if g.is_s_irreducible() && !kin.values().is_empty() {
        let lambda: Vec<_> = reg
            .lambda0
            .iter()
            .map(|l| feynpoly::numeric::Affine::constant(*l))
            .collect();
        feynpoly::dimreg::feynman_problem(&g, &kin, &lambda, reg.half_dimension())
            .and_then(|p| p.sectors(fan.as_ref()))
            .map(|ss| ss.iter().map(|s| s.min_modulus(1000, seed)).collect())
            .ok()
    } else {
        None
    };
    let out = sectors
        .into_iter()
        .enumerate()
        .map(|(i, s)| SectorOut {
            generators: s.generators,
            jacobian: s.jacobian,
            substitution: s.substitution,
            leading_exponents: s
                .exponents
                .iter()
                .map(|a| (*a - feynpoly::numeric::Affine::integer(1)).to_string())
                .collect(),
            psi: s.psi,
            phi: s.phi,
            min_modulus: moduli.as_ref().map(|m| m[i]),
        })
        .collect::<Vec<_>>();
    emit(
        &SectorsReport {
            strategy: used.to_string(),
            count: out.len(),
            sectors: out,
        },
        None,
    )
}

#[derive(Serialize, Deserialize)]
struct Inequality {
    subgraph: Vec<String>,
    kind: String,
    inequality: String,
}

#[derive(Serialize, Deserialize)]
struct ConvergeReport {
    nonempty: bool,
    inequalities: Vec<Inequality>,
    lambda: Vec<String>,
    dim: String,
    contains: bool,
}

fn cmd_converge(path: &Path, lambda: Option<Vec<String>>, dim: &str) -> Outcome {
    let (g, _) = load_graph(path)?;
    let lambda: Vec<Rational64> = match lambda {
        Some(ls) => ls
            .iter()
            .enumerate()
            .map(|(i, l)| parse_rational(l, &format!("--lambda[{i}]")))
            .collect::<Result<_, _>>()?,
        None => g.lambdas(),
    };
    if lambda.len() != g.num_edges() {
        return Err(parse_failure(format!(
            "--lambda has {} entries for {} edges",
            lambda.len(),
            g.num_edges()
        )));
    }
    let d = parse_rational(dim, "--dim")?;
    let domain = feynman_convergence_domain(&g)?;
    let h = g.loops();
    let describe = |mask: u64, loops: i64, rel: &str| {
        let ids = edge_names(&g, mask).join("+");
        format!("lambda({ids}) - {loops}*D/2 {rel} 0")
    };
    let mut inequalities = Vec::new();
    for &m in &domain.hard {
        inequalities.push(Inequality {
            subgraph: edge_names(&g, m),
            kind: "hard".into(),
            inequality: describe(m, g.h1(m), ">"),
        });
    }
    for &m in &domain.soft {
        let rest = g.all_edges() & !m;
        inequalities.push(Inequality {
            subgraph: edge_names(&g, m),
            kind: "soft".into(),
            inequality: describe(rest, h - g.h1(m), "<"),
        });
    }
    let contains = domain.contains(&g, &lambda, d);
    emit(
        &ConvergeReport {
            nonempty: domain.nonempty,
            inequalities,
            lambda: lambda.iter().map(|l| l.to_string()).collect(),
            dim: d.to_string(),
            contains,
        },
        None,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub power: i32,
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpandReport {
    pub method: String,
    pub strategy: Option<String>,
    pub dim0: String,
    pub lambda: Vec<String>,
    pub order: i32,
    pub pole_order: i32,
    pub coefficients: Vec<Coefficient>,
    pub sectors: usize,
    pub evaluations: usize,
    pub wall_time_s: f64,
    pub vanishing_subgraph: Option<Vec<String>>,
    pub warnings: Vec<String>,
}

fn cmd_expand(args: &ExpandArgs) -> Outcome {
    let ExpandArgs {
        method,
        order,
        tol,
        seed,
        ..
    } = *args;
    let strategy: Strategy = args.strategy.into();
    let (g, kin) = load_graph(&args.file)?;
    let d0 = parse_rational(&args.dim0, "--dim0")?;
    let reg = RegulatorPoint::new(g.lambdas(), d0)?;
    let opts = options(tol);
    let mut warnings = Vec::new();
    let start = Instant::now();
    let (x, used): (Expansion, Option<Strategy>) = match method {
        Method::Sector => {
            let (used, fan) = if g.is_s_irreducible() {
                fan_with_fallback(&g, strategy)?
            } else {
                (strategy, None)
            };
            if g.is_s_irreducible() {
                let lambda: Vec<_> = reg
                    .lambda0
                    .iter()
                    .map(|l| feynpoly::numeric::Affine::constant(*l))
                    .collect();
                let problem =
                    feynpoly::dimreg::feynman_problem(&g, &kin, &lambda, reg.half_dimension())?;
                let worst = problem
                    .sectors(fan.as_ref())?
                    .iter()
                    .map(|s| s.min_modulus(1000, seed))
                    .fold(f64::INFINITY, f64::min);
                if worst < 1e-8 {
                    let w = format!(
                        "sector polynomials come within {worst:.1e} of zero on the unit cube"
                    );
                    eprintln!("warning: {w}");
                    warnings.push(w);
                }
            }
            (
                eps_expand_sector(&g, fan.as_ref(), &reg, &kin, order, &opts)?,
                Some(used),
            )
        }
        Method::Ibp => (eps_expand_ibp(&g, &reg, &kin, order, &opts)?, None),
    };
    if let Some(m) = x.vanishing_subgraph {
        let w = format!(
            "block {{{}}} carries no kinematics; the integral vanishes",
            edge_names(&g, m).join(",")
        );
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    let coefficients = x
        .series
        .terms()
        .into_iter()
        .map(|(power, c, error)| Coefficient {
            power,
            re: c.re,
            im: c.im,
            error,
        })
        .collect();
    let report = ExpandReport {
        method: format!("{method:?}").to_lowercase(),
        strategy: used
            .filter(|_| x.vanishing_subgraph.is_none())
            .map(|s| s.to_string()),
        dim0: d0.to_string(),
        lambda: reg.lambda0.iter().map(|l| l.to_string()).collect(),
        order,
        pole_order: x.series.pole_order(),
        coefficients,
        sectors: x.sectors,
        evaluations: x.evaluations,
        wall_time_s: start.elapsed().as_secs_f64(),
        vanishing_subgraph: x.vanishing_subgraph.map(|m| edge_names(&g, m)),
        warnings,
    };
    emit(&report, args.output.as_deref())
}

fn cmd_mellin(path: &Path, action: Action, eps: f64, tol: Option<f64>) -> Outcome {
    let file = MellinFile::parse(&read(path)?)?;
    let problem = file.problem()?;
    let opts = options(tol);
    let report = match action {
        Action::Check => match problem.convergence_check(eps) {
            Ok(c) => serde_json::json!({
                "converges": c.converges,
                "violated": c.violated,
                "slacks": c.slacks,
            }),
            Err(Error::Degenerate) => serde_json::json!({
                "converges": false,
                "degenerate": "degenerate: never converges",
            }),
            Err(e) => return Err(e.into()),
        },
        Action::Value => {
            let (v, e) = problem.evaluate_numeric(eps, &opts)?;
            serde_json::json!({ "eps": eps, "re": v.re, "im": v.im, "error": e })
        }
        Action::Continue => {
            let sum = continue_to(&problem, DEFAULT_MAX_STEPS)?;
            let terms: Vec<_> = sum
                .terms
                .iter()
                .map(|t| {
                    serde_json::json!({
                        "prefactor": t.prefactor.to_string(),
                        "numerator": t.numerator.to_string(),
                        "shift": t.shift,
                    })
                })
                .collect();
            let poles: Vec<_> = sum
                .poles()
                .into_iter()
                .map(|(a, at_zero)| serde_json::json!({ "hyperplane": format!("{a} = 0"), "at_eps_zero": at_zero }))
                .collect();
            let mut normalized = Vec::new();
            for k in 1..=4 {
                let e = 10f64.powi(-k);
                if let Ok((v, err)) = sum.gamma_normalized(e, &opts) {
                    normalized.push(
                        serde_json::json!({ "eps": e, "re": v.re, "im": v.im, "error": err }),
                    );
                }
            }
            serde_json::json!({ "steps": sum.steps, "terms": terms, "poles": poles, "gamma_normalized": normalized })
        }
    };
    emit(&report, None)
}
