//! JSON wire formats.
//!
//! Input (seed or ledger):
//! `{"indices": {"ex": [..], "fr": [..]}, "L" | "Lambda": [[..]], "B": [[..]],
//!   "gram": [[..]], "weights": {"<label>": [..]}}`.
//!
//! A torus element is a list of `{"exp": [..], "coeff": [[v_exp, "int"], ..]}`
//! sorted lexicographically by `exp`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeffs::VPoly;
use crate::error::{Error, Result};
use crate::ledger::{GramLattice, MonoidalLedger, WeightData};
use crate::matrix::IntMatrix;
use crate::mutation::{CompatiblePair, IndexSet};
use crate::seed::QuantumSeed;
use crate::torus::{ExponentVector, QuantumTorus, TorusElement};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub indices: IndexSet,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<IntMatrix>,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<IntMatrix>,
    #[serde(rename = "B")]
    pub b: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, Vec<i64>>>,
}

impl SeedFile {
    /// Parses JSON text; errors carry the line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("{} at line {}, column {}", inner_message(&e), e.line(), e.column()))
        })
    }

    pub fn is_ledger(&self) -> bool {
        self.lambda.is_some()
    }

    /// The quasi-commutation matrix: `L` if given, else `-Λ`.
    pub fn l_matrix(&self) -> Result<IntMatrix> {
        match (&self.l, &self.lambda) {
            (Some(l), Some(lam)) if *l != -lam => Err(Error::Parse(
                "both L and Lambda given, but L != -Lambda".into(),
            )),
            (Some(l), _) => Ok(l.clone()),
            (None, Some(lam)) => Ok(-lam),
            (None, None) => Err(Error::Parse("one of L or Lambda is required".into())),
        }
    }

    pub fn pair(&self) -> Result<CompatiblePair> {
        CompatiblePair::new(self.indices.clone(), self.l_matrix()?, self.b.clone())
    }

    /// A ledger, when the file carries `Lambda` or weight data. Without
    /// weights, a ledger gets zero weights in the rank-1 lattice `G = [2]`.
    pub fn ledger(&self) -> Result<Option<MonoidalLedger>> {
        if self.lambda.is_none() && self.weights.is_none() && self.gram.is_none() {
            return Ok(None);
        }
        let lambda = -&self.l_matrix()?;
        let gram = match &self.gram {
            Some(g) => g.clone(),
            None if self.weights.is_some() => {
                return Err(Error::Parse("weights given without gram".into()))
            }
            None => IntMatrix::from_rows(&[[2]])?,
        };
        let lattice = GramLattice::new(gram)?;
        let weights = match &self.weights {
            None => WeightData::zero(self.indices.len(), lattice),
            Some(map) => {
                let mut d = Vec::with_capacity(self.indices.len());
                for label in self.indices.labels() {
                    let w = map.get(&label.to_string()).ok_or_else(|| {
                        Error::Parse(format!("missing weight for index {label}"))
                    })?;
                    d.push(w.clone());
                }
                if let Some(extra) = map.keys().find(|k| {
                    k.parse::<usize>().map_or(true, |l| !self.indices.contains(l))
                }) {
                    return Err(Error::Parse(format!("weight for unknown index {extra:?}")));
                }
                WeightData::new(d, lattice)?
            }
        };
        Ok(Some(MonoidalLedger::new(
            self.indices.clone(),
            lambda,
            self.b.clone(),
            weights,
        )?))
    }

    pub fn from_ledger(ledger: &MonoidalLedger) -> Self {
        let weights = ledger
            .indices()
            .labels()
            .iter()
            .zip(ledger.weights().weights())
            .map(|(l, w)| (l.to_string(), w.clone()))
            .collect();
        Self {
            indices: ledger.indices().clone(),
            l: None,
            lambda: Some(ledger.lambda().clone()),
            b: ledger.b().clone(),
            gram: Some(ledger.weights().lattice().matrix().clone()),
            weights: Some(weights),
        }
    }

    pub fn from_pair(pair: &CompatiblePair) -> Self {
        Self {
            indices: pair.indices().clone(),
            l: Some(pair.l().clone()),
            lambda: None,
            b: pair.b().clone(),
            gram: None,
            weights: None,
        }
    }
}

fn inner_message(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermWire {
    pub exp: Vec<i64>,
    pub coeff: VPoly,
}

pub fn element_to_wire(x: &TorusElement) -> Vec<TermWire> {
    x.terms()
        .map(|(a, c)| TermWire {
            exp: a.entries().to_vec(),
            coeff: c.clone(),
        })
        .collect()
}

pub fn element_from_wire(torus: &QuantumTorus, terms: &[TermWire]) -> Result<TorusElement> {
    torus.element(
        terms
            .iter()
            .map(|t| (ExponentVector::new(t.exp.clone()), t.coeff.clone())),
    )
}

/// A seed as sent over the wire: current matrices, variables in ambient
/// index order, and the mutation history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedState {
    pub indices: IndexSet,
    #[serde(rename = "L")]
    pub l: IntMatrix,
    #[serde(rename = "B")]
    pub b: IntMatrix,
    pub d: i64,
    pub vars: Vec<Vec<TermWire>>,
    pub history: Vec<usize>,
}

impl SeedState {
    pub fn of(seed: &QuantumSeed) -> Self {
        Self {
            indices: seed.indices().clone(),
            l: seed.l().clone(),
            b: seed.b().clone(),
            d: seed.pair().d(),
            vars: seed.vars().iter().map(element_to_wire).collect(),
            history: seed.history().to_vec(),
        }
    }
}

/// Canonical content key of a seed: `(L, B̃, vars)` serialized.
pub fn content_key(seed: &QuantumSeed) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        l: &'a IntMatrix,
        b: &'a IntMatrix,
        vars: Vec<Vec<TermWire>>,
    }
    serde_json::to_string(&Key {
        l: seed.l(),
        b: seed.b(),
        vars: seed.vars().iter().map(element_to_wire).collect(),
    })
    .expect("seed key serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const A2: &str = r#"{"indices": {"ex": [1, 2], "fr": []}, "L": [[0, -2], [2, 0]], "B": [[0, 1], [-1, 0]]}"#;
    const F3: &str = r#"{
        "indices": {"ex": [1], "fr": [2, 3]},
        "Lambda": [[0, -4, -2], [4, 0, 0], [2, 0, 0]],
        "B": [[0], [1], [-1]],
        "gram": [[2]],
        "weights": {"1": [-1], "2": [-2], "3": [-2]}
    }"#;

    #[test]
    fn parse_seed_file() {
        let f = SeedFile::parse(A2).unwrap();
        assert!(!f.is_ledger());
        assert_eq!(f.pair().unwrap(), fixtures::a2_pair());
        assert!(f.ledger().unwrap().is_none());
    }

    #[test]
    fn parse_ledger_file() {
        let f = SeedFile::parse(F3).unwrap();
        assert!(f.is_ledger());
        assert_eq!(f.ledger().unwrap().unwrap(), fixtures::f3_ledger());
        assert_eq!(f.pair().unwrap(), fixtures::f3_pair());
        let back = SeedFile::parse(&serde_json::to_string(&SeedFile::from_ledger(&fixtures::f3_ledger())).unwrap()).unwrap();
        assert_eq!(back.ledger().unwrap().unwrap(), fixtures::f3_ledger());
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = SeedFile::parse("{\n  \"indices\": {\"ex\": [1]},\n  \"L\": [[0]], \"B\": [[0]] \n  oops }").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 4"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let err = SeedFile::parse(r#"{"indices": {"ex": [1, 1]}, "L": [[0]], "B": [[0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn missing_weight_rejected() {
        let text = F3.replace(r#", "3": [-2]"#, "");
        let f = SeedFile::parse(&text).unwrap();
        assert!(matches!(f.ledger(), Err(Error::Parse(_))));
    }

    #[test]
    fn element_wire_round_trip() {
        let s = QuantumSeed::initial(fixtures::a2_pair()).mutate(1).unwrap();
        let x = &s.vars()[0];
        let wire = element_to_wire(x);
        let json = serde_json::to_string(&wire).unwrap();
        assert_eq!(
            json,
            r#"[{"exp":[-1,0],"coeff":[[0,"1"]]},{"exp":[-1,1],"coeff":[[0,"1"]]}]"#
        );
        let back: Vec<TermWire> = serde_json::from_str(&json).unwrap();
        assert_eq!(&element_from_wire(s.torus(), &back).unwrap(), x);
    }

    #[test]
    fn state_serializes_matrices_row_major() {
        let s = QuantumSeed::initial(fixtures::a2_pair());
        let v = serde_json::to_value(SeedState::of(&s)).unwrap();
        assert_eq!(v["L"], serde_json::json!([[0, -2], [2, 0]]));
        assert_eq!(v["indices"], serde_json::json!({"ex": [1, 2], "fr": []}));
        assert_eq!(v["history"], serde_json::json!([]));
    }
}
