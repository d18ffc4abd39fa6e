use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::markov::MarkovState;
use super::{Atom, IidLaw, MarkovLaw, MatrixLaw};
use crate::error::{Error, Result};
use crate::tropical::TropicalMatrix;

/// JSON model document.
///
/// ```json
/// { "dimension": 3,
///   "law": { "type": "iid",
///            "atoms": [ { "name": "B", "prob": 0.5, "matrix": [[0, "-inf", "-inf"], …] }, … ] } }
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    /// Free-form note carried along for humans; ignored by validation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    pub law: LawDocument,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawDocument {
    Deterministic {
        matrix: TropicalMatrix,
    },
    Iid {
        atoms: Vec<AtomDocument>,
    },
    Markov {
        states: Vec<String>,
        transition: Vec<Vec<f64>>,
        emissions: BTreeMap<String, TropicalMatrix>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDocument {
    /// Optional label used in reports; defaults to the atom's position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub prob: f64,
    pub matrix: TropicalMatrix,
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn into_law(self) -> Result<MatrixLaw> {
        let d = self.dimension;
        if d == 0 {
            return Err(Error::Schema("dimension must be positive".into()));
        }
        let check = |m: &TropicalMatrix, what: &str| super::check_square(m, d, what);
        match self.law {
            LawDocument::Deterministic { matrix } => {
                check(&matrix, "matrix")?;
                Ok(MatrixLaw::Deterministic(matrix))
            }
            LawDocument::Iid { atoms } => {
                let atoms = atoms
                    .into_iter()
                    .enumerate()
                    .map(|(k, a)| {
                        let label = a.name.unwrap_or_else(|| k.to_string());
                        check(&a.matrix, &format!("atom {label}"))?;
                        Ok(Atom {
                            label,
                            matrix: a.matrix,
                            prob: a.prob,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MatrixLaw::FiniteIid(IidLaw::new(atoms)?))
            }
            LawDocument::Markov {
                states,
                transition,
                mut emissions,
            } => {
                let states = states
                    .into_iter()
                    .map(|label| {
                        let matrix = emissions.remove(&label).ok_or_else(|| {
                            Error::Schema(format!("no emission for state {label:?}"))
                        })?;
                        check(&matrix, &format!("emission {label}"))?;
                        Ok(MarkovState { label, matrix })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(extra) = emissions.keys().next() {
                    return Err(Error::Schema(format!(
                        "emission for unknown state {extra:?}"
                    )));
                }
                Ok(MatrixLaw::Markov(MarkovLaw::new(states, transition)?))
            }
        }
    }

    pub fn from_law(law: &MatrixLaw) -> Self {
        let law_doc = match law {
            MatrixLaw::Deterministic(m) => LawDocument::Deterministic { matrix: m.clone() },
            MatrixLaw::FiniteIid(l) => LawDocument::Iid {
                atoms: l
                    .atoms()
                    .iter()
                    .map(|a| AtomDocument {
                        name: Some(a.label.clone()),
                        prob: a.prob,
                        matrix: a.matrix.clone(),
                    })
                    .collect(),
            },
            MatrixLaw::Markov(l) => LawDocument::Markov {
                states: l.states().iter().map(|s| s.label.clone()).collect(),
                transition: l.transition().to_vec(),
                emissions: l
                    .states()
                    .iter()
                    .map(|s| (s.label.clone(), s.matrix.clone()))
                    .collect(),
            },
        };
        Self {
            description: None,
            dimension: law.dim(),
            law: law_doc,
        }
    }
}

/// Parses and validates a model document.
pub fn load_law(text: &str) -> Result<MatrixLaw> {
    ModelDocument::parse(text)?.into_law()
}
