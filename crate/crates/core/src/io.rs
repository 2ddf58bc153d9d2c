//! JSON file formats.
//!
//! Graph file:
//!
//! ```json
//! {
//!   "vertices": ["v1", "v2"],
//!   "edges": [
//!     {"id": "e1", "ends": ["v1", "v2"], "mass": true, "lambda": "3/2"},
//!     {"id": "e2", "ends": ["v1", "v2"]}
//!   ],
//!   "external": {"v1": "p1", "v2": "p2"},
//!   "kinematics": {"sq:p1": 1.0, "m2:e1": 0.5}
//! }
//! ```
//!
//! `mass` defaults to `false`, `lambda` to `"1"`. An external entry may list
//! several labels. Kinematic values are numbers or `[re, im]` pairs.
//!
//! Mellin problem file:
//!
//! ```json
//! {
//!   "rank": 1,
//!   "factors": [{"terms": [[[0], 1.0], [[1], 1.0]], "c": "3"}],
//!   "numerator": [[[0], 1.0]],
//!   "s": ["1"]
//! }
//! ```
//!
//! Exponents `c` and `s` are rationals or `{"constant": "-1/2", "slope": "1"}`
//! for `constant + slope * eps`. The numerator defaults to `1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{FeynmanGraph, KinematicAssignment};
use crate::mellin::MellinProblem;
use crate::numeric::Affine;
use crate::poly::ComplexPolynomial;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
    #[serde(default)]
    pub mass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Labels {
    One(String),
    Many(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Real(f64),
    Complex([f64; 2]),
}

impl Number {
    pub fn value(&self) -> Complex64 {
        match *self {
            Number::Real(x) => Complex64::new(x, 0.0),
            Number::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub external: BTreeMap<String, Labels>,
    #[serde(default)]
    pub kinematics: BTreeMap<String, Number>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

pub fn parse_rational(s: &str, field: &str) -> Result<Rational64> {
    s.trim()
        .parse::<Rational64>()
        .map_err(|e| Error::Parse(format!("{field}: invalid rational {s:?} ({e})")))
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files serialize")
    }

    pub fn graph(&self) -> Result<FeynmanGraph> {
        let mut g = FeynmanGraph::new(self.vertices.iter().cloned())?;
        for (i, e) in self.edges.iter().enumerate() {
            let lambda = match &e.lambda {
                Some(l) => parse_rational(l, &format!("edges[{i}].lambda"))?,
                None => Rational64::from_integer(1),
            };
            g.add_edge_with_lambda(&e.id, &e.ends[0], &e.ends[1], e.mass, lambda)
                .map_err(|err| Error::Parse(format!("edges[{i}]: {err}")))?;
        }
        for (v, labels) in &self.external {
            let list = match labels {
                Labels::One(l) => vec![l.clone()],
                Labels::Many(ls) => ls.clone(),
            };
            for l in list {
                g.add_external(v, &l)
                    .map_err(|err| Error::Parse(format!("external.{v}: {err}")))?;
            }
        }
        Ok(g)
    }

    pub fn kinematics(&self, g: &FeynmanGraph) -> Result<KinematicAssignment> {
        KinematicAssignment::from_entries(
            g,
            self.kinematics.iter().map(|(k, v)| (k.as_str(), v.value())),
        )
    }

    pub fn from_graph(g: &FeynmanGraph, kin: &KinematicAssignment) -> Self {
        let vertices = g.vertices().to_vec();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeSpec {
                id: e.id.clone(),
                ends: [vertices[e.ends.0].clone(), vertices[e.ends.1].clone()],
                mass: e.massive,
                lambda: Some(e.lambda.to_string()),
            })
            .collect();
        let mut external = BTreeMap::new();
        for (v, labels) in vertices.iter().zip(g.external()) {
            if !labels.is_empty() {
                external.insert(v.clone(), Labels::Many(labels.clone()));
            }
        }
        let kinematics = kin
            .values()
            .iter()
            .map(|(k, v)| {
                (
                    k.to_string(),
                    if v.im == 0.0 {
                        Number::Real(v.re)
                    } else {
                        Number::Complex([v.re, v.im])
                    },
                )
            })
            .collect();
        GraphFile {
            vertices,
            edges,
            external,
            kinematics,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AffineSpec {
    Constant(String),
    Affine { constant: String, slope: String },
}

impl AffineSpec {
    pub fn value(&self, field: &str) -> Result<Affine> {
        match self {
            AffineSpec::Constant(c) => Ok(Affine::constant(parse_rational(c, field)?)),
            AffineSpec::Affine { constant, slope } => Ok(Affine::new(
                parse_rational(constant, field)?,
                parse_rational(slope, field)?,
            )),
        }
    }
}

pub type TermsSpec = Vec<(Vec<i64>, Number)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub terms: TermsSpec,
    pub c: AffineSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MellinFile {
    pub rank: usize,
    pub factors: Vec<FactorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<TermsSpec>,
    pub s: Vec<AffineSpec>,
}

fn polynomial(rank: usize, terms: &TermsSpec, field: &str) -> Result<ComplexPolynomial> {
    for (i, (e, _)) in terms.iter().enumerate() {
        if e.len() != rank {
            return Err(Error::Parse(format!(
                "{field}[{i}]: exponent of length {} in rank {rank}",
                e.len()
            )));
        }
    }
    Ok(ComplexPolynomial::from_terms(
        rank,
        terms.iter().map(|(e, c)| (e.clone(), c.value())),
    ))
}

impl MellinFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn problem(&self) -> Result<MellinProblem> {
        if self.s.len() != self.rank {
            return Err(Error::Parse(format!(
                "s: {} entries for rank {}",
                self.s.len(),
                self.rank
            )));
        }
        let mut factors = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let p = polynomial(self.rank, &f.terms, &format!("factors[{i}].terms"))?;
            factors.push((p, f.c.value(&format!("factors[{i}].c"))?));
        }
        let numerator = match &self.numerator {
            Some(t) => polynomial(self.rank, t, "numerator")?,
            None => ComplexPolynomial::one(self.rank),
        };
        let s = self
            .s
            .iter()
            .enumerate()
            .map(|(i, a)| a.value(&format!("s[{i}]")))
            .collect::<Result<_>>()?;
        MellinProblem::new(factors, numerator, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::catalog;

    const BUBBLE: &str = r#"{
        "vertices": ["v1", "v2"],
        "edges": [
            {"id": "e1", "ends": ["v1", "v2"], "mass": true, "lambda": "3/2"},
            {"id": "e2", "ends": ["v1", "v2"]}
        ],
        "external": {"v1": "p1", "v2": "p2"},
        "kinematics": {"sq:p1": 1.5, "m2:e1": [0.5, 0.0]}
    }"#;

    #[test]
    fn graph_file_round_trip() {
        let f = GraphFile::parse(BUBBLE).unwrap();
        let g = f.graph().unwrap();
        assert_eq!(
            g.lambdas(),
            vec![Rational64::new(3, 2), Rational64::from_integer(1)]
        );
        let k = f.kinematics(&g).unwrap();
        let again = GraphFile::from_graph(&g, &k);
        let g2 = GraphFile::parse(&again.to_json()).unwrap().graph().unwrap();
        assert_eq!(g2.edges(), g.edges());
        assert_eq!(again.kinematics(&g2).unwrap(), k);
    }

    #[test]
    fn parse_errors_carry_context() {
        let bad = BUBBLE.replace("\"3/2\"", "\"3/x\"");
        let err = GraphFile::parse(&bad)
            .unwrap()
            .graph()
            .unwrap_err()
            .to_string();
        assert!(err.contains("edges[0].lambda"), "{err}");
        let err = GraphFile::parse("{\"vertices\": [\"a\"],\n \"edges\": 3}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn catalog_graph_serializes() {
        let g = catalog::triangle([true, false, false]);
        let f = GraphFile::from_graph(&g, &KinematicAssignment::new());
        assert_eq!(GraphFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn mellin_file() {
        let text = r#"{"rank": 1, "factors": [{"terms": [[[0], 1.0], [[1], 1.0]], "c": "3"}],
                       "s": [{"constant": "0", "slope": "1"}]}"#;
        let p = MellinFile::parse(text).unwrap().problem().unwrap();
        assert_eq!(p.s(), &[Affine::eps()]);
        assert_eq!(p.exponents(), vec![Affine::integer(3)]);
    }
}
