use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FeynmanGraph;
use crate::error::{Error, Result};
use crate::poly::{ComplexPolynomial, KinSymbol, SymbolicPolynomial};

/// Numerical values of the kinematic invariants of one graph, keyed by
/// canonical symbols.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KinematicAssignment {
    values: BTreeMap<KinSymbol, Complex64>,
}

impl KinematicAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    fn insert(&mut self, key: KinSymbol, value: Complex64, raw: &str) -> Result<()> {
        match self.values.get(&key) {
            Some(old) if *old != value => {
                Err(Error::InvalidGraph(format!("conflicting values for {raw}")))
            }
            _ => {
                self.values.insert(key, value);
                Ok(())
            }
        }
    }

    /// Sets `q_I^2`; `I` and its complement are identified.
    pub fn set_sq(&mut self, g: &FeynmanGraph, labels: &[String], value: Complex64) -> Result<()> {
        let raw = format!("sq:{}", labels.join(","));
        match g.sq_symbol(labels)? {
            Some(sym) => self.insert(sym, value, &raw),
            None if value == Complex64::new(0.0, 0.0) => Ok(()),
            None => Err(Error::InvalidGraph(format!(
                "{raw} must vanish by momentum conservation"
            ))),
        }
    }

    pub fn set_m2(&mut self, g: &FeynmanGraph, edge: &str, value: Complex64) -> Result<()> {
        let i = g.edge_index(edge)?;
        if !g.edges()[i].massive {
            return Err(Error::InvalidGraph(format!("edge {edge} is massless")));
        }
        self.insert(
            KinSymbol::M2(edge.to_string()),
            value,
            &format!("m2:{edge}"),
        )
    }

    /// Parses keys of the form `sq:<labels separated by commas>` and `m2:<edge id>`.
    pub fn from_entries<'a>(
        g: &FeynmanGraph,
        entries: impl IntoIterator<Item = (&'a str, Complex64)>,
    ) -> Result<Self> {
        let mut k = Self::new();
        for (key, v) in entries {
            if let Some(rest) = key.strip_prefix("sq:") {
                let labels: Vec<String> = rest
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                k.set_sq(g, &labels, v)?;
            } else if let Some(e) = key.strip_prefix("m2:") {
                k.set_m2(g, e.trim(), v)?;
            } else {
                return Err(Error::Parse(format!("unknown kinematic key {key}")));
            }
        }
        Ok(k)
    }

    pub fn values(&self) -> &BTreeMap<KinSymbol, Complex64> {
        &self.values
    }

    pub fn value(&self, s: &KinSymbol) -> Result<Complex64> {
        self.values
            .get(s)
            .copied()
            .ok_or_else(|| Error::MissingKinematics(s.to_string()))
    }

    pub fn evaluate(&self, p: &SymbolicPolynomial) -> Result<ComplexPolynomial> {
        p.evaluate_coefficients(|s| self.value(s))
    }

    /// Generic euclidean check over the invariants occurring in `phi`:
    /// `Re q_I^2 > 0` and `Re q_I^2 + Re m_e^2 > 0`; without momentum
    /// invariants the masses alone must have positive real part.
    pub fn check_generic(&self, phi: &SymbolicPolynomial) -> Result<()> {
        let mut sq = Vec::new();
        let mut m2 = Vec::new();
        for c in phi.terms().values() {
            for mono in c.terms().keys() {
                for s in mono {
                    let v = self.value(s)?;
                    match s {
                        KinSymbol::Sq(_) => sq.push((s.clone(), v)),
                        KinSymbol::M2(_) => m2.push((s.clone(), v)),
                    }
                }
            }
        }
        for (s, v) in &sq {
            if v.re <= 0.0 {
                return Err(Error::NonGenericKinematics(format!(
                    "Re {s} = {} <= 0",
                    v.re
                )));
            }
        }
        for (m, mv) in &m2 {
            if sq.is_empty() && mv.re <= 0.0 {
                return Err(Error::NonGenericKinematics(format!(
                    "Re {m} = {} <= 0",
                    mv.re
                )));
            }
            for (s, v) in &sq {
                if v.re + mv.re <= 0.0 {
                    return Err(Error::NonGenericKinematics(format!("Re {s} + Re {m} <= 0")));
                }
            }
        }
        Ok(())
    }
}
