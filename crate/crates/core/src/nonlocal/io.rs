//! JSON behavior files:
//! `{"parties": 2, "inputs": [2,2], "outputs": [2,2],
//!   "table": {"0,1": {"1,0": "1/2", ...}, ...}}`.
//! Missing entries are zero.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{count, encode, Behavior, NonlocalError};
use crate::numerics::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum BehaviorFileError {
    #[error("malformed behavior file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("declared {declared} parties but {field} lists {found}")]
    Parties { declared: usize, field: &'static str, found: usize },
    #[error("bad key `{key}`: {reason}")]
    Key { key: String, reason: String },
    #[error("bad probability at `{x}` / `{y}`: {reason}")]
    Value { x: String, y: String, reason: String },
    #[error(transparent)]
    Behavior(#[from] NonlocalError),
}

#[derive(Serialize, Deserialize)]
struct BehaviorFile {
    parties: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    table: BTreeMap<String, BTreeMap<String, String>>,
}

fn parse_key(key: &str, sizes: &[usize]) -> Result<Vec<usize>, BehaviorFileError> {
    let bad = |reason: String| BehaviorFileError::Key { key: key.to_string(), reason };
    let digits: Vec<usize> = key
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad(format!("`{t}` is not an index"))))
        .collect::<Result<_, _>>()?;
    if digits.len() != sizes.len() {
        return Err(bad(format!("expected {} components", sizes.len())));
    }
    if let Some((d, s)) = digits.iter().zip(sizes).find(|(d, s)| d >= s) {
        return Err(bad(format!("{d} outside alphabet of size {s}")));
    }
    Ok(digits)
}

impl Behavior {
    pub fn from_json(text: &str) -> Result<Behavior, BehaviorFileError> {
        let file: BehaviorFile = serde_json::from_str(text)?;
        for (field, found) in [("inputs", file.inputs.len()), ("outputs", file.outputs.len())] {
            if found != file.parties {
                return Err(BehaviorFileError::Parties { declared: file.parties, field, found });
            }
        }
        if file.inputs.contains(&0) || file.outputs.contains(&0) || file.parties == 0 {
            return Err(NonlocalError::Scenario { inputs: file.inputs, outputs: file.outputs }.into());
        }
        let ny = count(&file.outputs);
        let mut table = vec![Scalar::zero(); count(&file.inputs) * ny];
        for (xk, row) in &file.table {
            let x = parse_key(xk, &file.inputs)?;
            for (yk, value) in row {
                let y = parse_key(yk, &file.outputs)?;
                let p = Scalar::parse_token(value).map_err(|e| BehaviorFileError::Value {
                    x: xk.clone(),
                    y: yk.clone(),
                    reason: e.to_string(),
                })?;
                table[encode(&x, &file.inputs) * ny + encode(&y, &file.outputs)] = p;
            }
        }
        Ok(Behavior::new(file.inputs, file.outputs, table)?)
    }

    /// Writes every nonzero entry; round-trips through [`Behavior::from_json`].
    pub fn to_json(&self) -> String {
        let mut table = BTreeMap::new();
        for x in self.input_strings() {
            let mut row = BTreeMap::new();
            for y in self.output_strings() {
                let p = self.prob(&x, &y);
                if !p.is_zero() || p.as_rational().is_none() {
                    row.insert(y.iter().join(","), p.to_token());
                }
            }
            table.insert(x.iter().join(","), row);
        }
        let file =
            BehaviorFile { parties: self.parties(), inputs: self.inputs.clone(), outputs: self.outputs.clone(), table };
        serde_json::to_string_pretty(&file).expect("behavior serializes")
    }
}
