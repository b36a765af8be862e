//! JSON state documents shared with the CLI.
//!
//! Four kinds are accepted: `pure` (amplitudes), `ensemble` (weighted
//! amplitude lists), `dense` (a density matrix, small n only) and `family`
//! (a named constructor with parameters). Complex numbers are `[re, im]`
//! pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{self, FamilyName, FamilySpec};
use crate::linalg::ComplexMatrix;
use crate::states::{self, DenseDensity, PureState, StateEnsemble};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Parameters of a `family` document; which fields are required depends on
/// the family name.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(default, alias = "n", skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<[f64; 5]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateDocument {
    Pure {
        n_qubits: usize,
        amplitudes: Vec<[f64; 2]>,
    },
    Ensemble {
        n_qubits: usize,
        terms: Vec<EnsembleTerm>,
    },
    Dense {
        n_qubits: usize,
        matrix: Vec<Vec<[f64; 2]>>,
    },
    Family {
        name: String,
        #[serde(default)]
        params: FamilyParams,
    },
}

/// A document resolved into a concrete state representation.
#[derive(Debug, Clone)]
pub enum ResolvedState {
    Pure(PureState),
    Ensemble(StateEnsemble),
    Dense(DenseDensity),
}

impl ResolvedState {
    pub fn n_qubits(&self) -> usize {
        match self {
            Self::Pure(s) => s.n_qubits(),
            Self::Ensemble(e) => e.n_qubits(),
            Self::Dense(d) => d.n_qubits(),
        }
    }
}

pub fn parse_json(text: &str) -> Result<StateDocument> {
    serde_json::from_str(text).map_err(|e| Error::InvalidField {
        field: "document".into(),
        message: e.to_string(),
    })
}

pub fn to_json(doc: &StateDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn amplitudes_from(field: &str, n_qubits: usize, pairs: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    let dim = 1usize
        .checked_shl(n_qubits as u32)
        .filter(|_| n_qubits <= states::MAX_QUBITS)
        .ok_or(Error::QubitCountOutOfRange {
            n: n_qubits,
            min: states::MIN_QUBITS,
            max: states::MAX_QUBITS,
        })?;
    if pairs.len() != dim {
        return Err(Error::InvalidField {
            field: field.into(),
            message: format!("expected {dim} entries for {n_qubits} qubits, got {}", pairs.len()),
        });
    }
    Ok(pairs.iter().copied().map(complex).collect())
}

fn require<T: Copy>(field: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| Error::InvalidField {
        field: field.into(),
        message: "missing required parameter".into(),
    })
}

/// Resolve a family document into a state.
fn resolve_family(name: &str, params: &FamilyParams) -> Result<ResolvedState> {
    match name {
        "w" => {
            let n = require("params.n_qubits", params.n_qubits)?;
            Ok(ResolvedState::Pure(states::make_w_state(n)?))
        }
        "ghz" => {
            let n = require("params.n_qubits", params.n_qubits)?;
            Ok(ResolvedState::Pure(states::make_ghz_state(n)?))
        }
        "acin" => {
            let lambdas = require("params.lambdas", params.lambdas)?;
            let theta = params.theta.unwrap_or(0.0);
            Ok(ResolvedState::Pure(states::make_acin_state(lambdas, theta)?))
        }
        "symmetric_product" => {
            let n = require("params.n_qubits", params.n_qubits)?;
            let a = complex(require("params.a", params.a)?);
            let b = complex(require("params.b", params.b)?);
            Ok(ResolvedState::Pure(states::make_symmetric_product(a, b, n)?))
        }
        "w_ghz_mix" | "w_white_noise" => {
            let spec = family_spec(name, params)?;
            Ok(ResolvedState::Ensemble(families::realize(&spec)?))
        }
        other => Err(Error::UnknownFamily {
            name: other.to_string(),
        }),
    }
}

/// Build a [`FamilySpec`] from the parametric-family parameters.
pub fn family_spec(name: &str, params: &FamilyParams) -> Result<FamilySpec> {
    let family = FamilyName::parse(name)?;
    let n = require("params.n_qubits", params.n_qubits)?;
    let p = require("params.p", params.p)?;
    FamilySpec::new(family, n, p)
}

/// Resolve any document into a concrete state.
pub fn resolve(doc: &StateDocument) -> Result<ResolvedState> {
    match doc {
        StateDocument::Pure {
            n_qubits,
            amplitudes,
        } => {
            let amps = amplitudes_from("amplitudes", *n_qubits, amplitudes)?;
            Ok(ResolvedState::Pure(PureState::new(*n_qubits, amps)?))
        }
        StateDocument::Ensemble { n_qubits, terms } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for (i, term) in terms.iter().enumerate() {
                let amps = amplitudes_from(
                    &format!("terms[{i}].amplitudes"),
                    *n_qubits,
                    &term.amplitudes,
                )?;
                let state = PureState::new(*n_qubits, amps).map_err(|e| Error::InvalidField {
                    field: format!("terms[{i}].amplitudes"),
                    message: e.to_string(),
                })?;
                parsed.push((term.weight, state));
            }
            Ok(ResolvedState::Ensemble(StateEnsemble::new(parsed)?))
        }
        StateDocument::Dense { n_qubits, matrix } => {
            if *n_qubits > states::MAX_DENSE_QUBITS {
                return Err(Error::QubitCountOutOfRange {
                    n: *n_qubits,
                    min: states::MIN_QUBITS,
                    max: states::MAX_DENSE_QUBITS,
                });
            }
            let dim = 1usize << *n_qubits;
            if matrix.len() != dim {
                return Err(Error::InvalidField {
                    field: "matrix".into(),
                    message: format!("expected {dim} rows, got {}", matrix.len()),
                });
            }
            let mut entries = Vec::with_capacity(dim * dim);
            for (r, row) in matrix.iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::InvalidField {
                        field: format!("matrix[{r}]"),
                        message: format!("expected {dim} columns, got {}", row.len()),
                    });
                }
                entries.extend(row.iter().copied().map(complex));
            }
            let m = ComplexMatrix::new(dim, dim, entries)?;
            Ok(ResolvedState::Dense(DenseDensity::new(*n_qubits, m)?))
        }
        StateDocument::Family { name, params } => resolve_family(name, params),
    }
}
