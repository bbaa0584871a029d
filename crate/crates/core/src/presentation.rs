//! The presentation file format: a JSON description of a graded Lie algebra
//! by layers, named basis elements, and nontrivial brackets.
//!
//! Identifiers must be unique; unlisted brackets are zero and the
//! antisymmetric closure is implied. All rationals are strings (`"p/q"` or
//! `"p"`). Files round-trip: parsing, re-serializing, and re-parsing yields
//! an identical algebra.

use crate::lie::{GradedLieAlgebra, LieError, SparseVec};
use crate::rat::{format_rat, parse_rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported schema version {0}")]
    BadSchema(u32),
    #[error("bracket entry {index}: unknown identifier `{name}`")]
    UnknownIdentifier { index: usize, name: String },
    #[error("bracket entry {index}: bad rational for `{name}`: {source}")]
    BadRational {
        index: usize,
        name: String,
        source: crate::rat::RatParseError,
    },
    #[error("bracket entry {index}: [v,v] with nonzero result")]
    SelfBracket { index: usize },
    #[error("duplicate bracket entry for ({0},{1})")]
    DuplicatePair(String, String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn default_schema() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    /// Identifier → rational-string coefficient of `[left, right]`.
    pub result: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub name: String,
    pub layers: Vec<usize>,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

impl PresentationFile {
    pub fn from_json(s: &str) -> Result<Self, PresentationError> {
        let p: PresentationFile = serde_json::from_str(s)?;
        if p.schema != 1 {
            return Err(PresentationError::BadSchema(p.schema));
        }
        Ok(p)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, PresentationError> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    /// Validates the table and produces the algebra.
    pub fn to_algebra(&self) -> Result<GradedLieAlgebra, PresentationError> {
        let index: BTreeMap<&str, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (entry_idx, e) in self.brackets.iter().enumerate() {
            let li = *index.get(e.left.as_str()).ok_or_else(|| {
                PresentationError::UnknownIdentifier {
                    index: entry_idx,
                    name: e.left.clone(),
                }
            })?;
            let ri = *index.get(e.right.as_str()).ok_or_else(|| {
                PresentationError::UnknownIdentifier {
                    index: entry_idx,
                    name: e.right.clone(),
                }
            })?;
            let mut sparse: SparseVec = Vec::new();
            for (name, val) in &e.result {
                let k = *index.get(name.as_str()).ok_or_else(|| {
                    PresentationError::UnknownIdentifier {
                        index: entry_idx,
                        name: name.clone(),
                    }
                })?;
                let c = parse_rat(val).map_err(|source| PresentationError::BadRational {
                    index: entry_idx,
                    name: name.clone(),
                    source,
                })?;
                if !num_traits::Zero::is_zero(&c) {
                    sparse.push((k, c));
                }
            }
            if li == ri {
                if !sparse.is_empty() {
                    return Err(PresentationError::SelfBracket { index: entry_idx });
                }
                continue;
            }
            let (key, entry) = if li < ri {
                ((li, ri), sparse)
            } else {
                ((ri, li), sparse.into_iter().map(|(k, c)| (k, -c)).collect())
            };
            if table.insert(key, entry).is_some() {
                return Err(PresentationError::DuplicatePair(
                    e.left.clone(),
                    e.right.clone(),
                ));
            }
        }
        Ok(GradedLieAlgebra::new(
            self.layers.clone(),
            self.basis.clone(),
            table,
        )?)
    }

    /// Emits the presentation of a validated algebra (round-trippable).
    pub fn from_algebra(name: &str, g: &GradedLieAlgebra) -> Self {
        let names = g.basis_names();
        let mut brackets = Vec::new();
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let v = g.basis_bracket(i, j);
                let result: BTreeMap<String, String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                    .map(|(k, c)| (names[k].clone(), format_rat(c)))
                    .collect();
                if !result.is_empty() {
                    brackets.push(BracketEntry {
                        left: names[i].clone(),
                        right: names[j].clone(),
                        result,
                    });
                }
            }
        }
        PresentationFile {
            schema: 1,
            name: name.to_string(),
            layers: g.layer_dims().to_vec(),
            basis: names.to_vec(),
            brackets,
        }
    }
}
