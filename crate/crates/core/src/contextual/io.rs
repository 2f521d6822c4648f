//! Hypergraph files `{"vertices": [...], "edges": [[...], ...]}` and weight
//! files `{"<vertex>": "p/q", ...}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ContextualError, Hypergraph, ProbabilityWeight};
use crate::numerics::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum ContextualFileError {
    #[error("malformed file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("weight file: vertex `{0}` missing")]
    MissingVertex(String),
    #[error("weight file: bad value for `{vertex}`: {reason}")]
    Value { vertex: String, reason: String },
    #[error(transparent)]
    Contextual(#[from] ContextualError),
}

#[derive(Serialize, Deserialize)]
struct HypergraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
}

impl Hypergraph {
    pub fn from_json(text: &str) -> Result<Hypergraph, ContextualFileError> {
        let file: HypergraphFile = serde_json::from_str(text)?;
        Ok(Hypergraph::from_labels(file.vertices, &file.edges)?)
    }

    pub fn to_json(&self) -> String {
        let file = HypergraphFile {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|e| e.iter().map(|&v| self.vertices[v].clone()).collect()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("hypergraph serializes")
    }
}

impl ProbabilityWeight {
    pub fn from_json(h: &Hypergraph, text: &str) -> Result<ProbabilityWeight, ContextualFileError> {
        let map: BTreeMap<String, String> = serde_json::from_str(text)?;
        if let Some(unknown) = map.keys().find(|k| !h.vertices.contains(k)) {
            return Err(ContextualError::UnknownVertex(unknown.clone()).into());
        }
        let w = h
            .vertices
            .iter()
            .map(|v| {
                let token = map.get(v).ok_or_else(|| ContextualFileError::MissingVertex(v.clone()))?;
                Scalar::parse_token(token)
                    .map_err(|e| ContextualFileError::Value { vertex: v.clone(), reason: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProbabilityWeight::new(h.clone(), w)?)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<&str, String> =
            self.hypergraph.vertices.iter().map(String::as_str).zip(self.w.iter().map(Scalar::to_token)).collect();
        serde_json::to_string_pretty(&map).expect("weight serializes")
    }
}
