//! JSON form of a [`GptSystem`].
//!
//! Exact scalars are written as `{"a": "p/q", "b": "r/s"}` meaning
//! `a + b·√k` with `k` the file's `field_k`; balls as
//! `{"mid": "…", "rad": "…", "bits": n}`; floats as `{"float": x}`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Effect, GptError, GptSystem, State};
use crate::numerics::{is_square_free, parse_rational, Ball, Quad, Rational, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum SystemFileError {
    #[error("malformed system file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad scalar at {path}: {reason}")]
    Scalar { path: String, reason: String },
    #[error("declared dim {declared} but {path} has length {found}")]
    Dimension { declared: usize, found: usize, path: String },
    #[error(transparent)]
    System(#[from] GptError),
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    name: String,
    dim: usize,
    field_k: u32,
    pure_states: Vec<Vec<Value>>,
    effect_generators: Vec<Vec<Value>>,
    unit: Vec<Value>,
}

/// JSON encoding of one scalar in a field `Q(√k)`.
pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(q) => serde_json::json!({ "a": q.a().to_string(), "b": q.b().to_string() }),
        Scalar::Approx(b) => serde_json::json!({
            "mid": b.mid().to_string(),
            "rad": b.rad().to_string(),
            "bits": b.bits(),
        }),
        Scalar::Float(v) => serde_json::json!({ "float": v }),
    }
}

pub fn scalar_from_json(v: &Value, field_k: u32) -> Result<Scalar, String> {
    let obj = v.as_object().ok_or("expected an object")?;
    let text = |key: &str| -> Result<&str, String> {
        obj.get(key).and_then(Value::as_str).ok_or_else(|| format!("missing string field `{key}`"))
    };
    if obj.contains_key("a") {
        let a = parse_rational(text("a")?).ok_or("bad rational in `a`")?;
        let b = match obj.get("b") {
            None => Rational::from_integer(0.into()),
            Some(_) => parse_rational(text("b")?).ok_or("bad rational in `b`")?,
        };
        if field_k == 1 && b != Rational::from_integer(0.into()) {
            return Err("irrational part in a rational system".into());
        }
        return Ok(Scalar::Exact(Quad::new(a, b, field_k)));
    }
    if obj.contains_key("mid") {
        let mid: BigInt = text("mid")?.parse().map_err(|_| "bad integer in `mid`")?;
        let rad: BigInt = text("rad")?.parse().map_err(|_| "bad integer in `rad`")?;
        if rad < BigInt::from(0) {
            return Err("negative radius".into());
        }
        let bits = obj
            .get("bits")
            .and_then(Value::as_u64)
            .and_then(|b| u32::try_from(b).ok())
            .ok_or("missing integer field `bits`")?;
        return Ok(Scalar::Approx(Ball::from_parts(mid, rad, bits)));
    }
    if let Some(f) = obj.get("float") {
        return f.as_f64().map(Scalar::Float).ok_or_else(|| "bad float".into());
    }
    Err("expected keys a/b, mid/rad/bits or float".into())
}

fn vector_from_json(values: &[Value], dim: usize, field_k: u32, path: String) -> Result<Vec<Scalar>, SystemFileError> {
    if values.len() != dim {
        return Err(SystemFileError::Dimension { declared: dim, found: values.len(), path });
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            scalar_from_json(v, field_k)
                .map_err(|reason| SystemFileError::Scalar { path: format!("{path}[{i}]"), reason })
        })
        .collect()
}

impl GptSystem {
    pub fn to_json(&self) -> String {
        let vecs = |v: &[Scalar]| v.iter().map(scalar_to_json).collect::<Vec<_>>();
        let file = SystemFile {
            name: self.name.clone(),
            dim: self.dim,
            field_k: self.field_k,
            pure_states: self.pure_states.iter().map(|s| vecs(&s.0)).collect(),
            effect_generators: self.effect_generators.iter().map(|e| vecs(&e.0)).collect(),
            unit: vecs(&self.unit.0),
        };
        serde_json::to_string_pretty(&file).expect("system serializes")
    }

    pub fn from_json(text: &str) -> Result<GptSystem, SystemFileError> {
        let file: SystemFile = serde_json::from_str(text)?;
        if !is_square_free(file.field_k) {
            return Err(SystemFileError::Scalar {
                path: "field_k".into(),
                reason: format!("{} is not square-free", file.field_k),
            });
        }
        let (dim, k) = (file.dim, file.field_k);
        let pure_states = file
            .pure_states
            .iter()
            .enumerate()
            .map(|(i, v)| vector_from_json(v, dim, k, format!("pure_states[{i}]")).map(State))
            .collect::<Result<Vec<_>, _>>()?;
        let effect_generators = file
            .effect_generators
            .iter()
            .enumerate()
            .map(|(i, v)| vector_from_json(v, dim, k, format!("effect_generators[{i}]")).map(Effect))
            .collect::<Result<Vec<_>, _>>()?;
        let unit = Effect(vector_from_json(&file.unit, dim, k, "unit".into())?);
        let mut system = GptSystem::new(file.name, pure_states, effect_generators, unit)?;
        system.field_k = k;
        Ok(system)
    }

    /// Structural equality of every stored coordinate.
    pub fn identical(&self, other: &GptSystem) -> bool {
        let same = |a: &[Scalar], b: &[Scalar]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y));
        self.name == other.name
            && self.dim == other.dim
            && self.field_k == other.field_k
            && self.pure_states.len() == other.pure_states.len()
            && self.effect_generators.len() == other.effect_generators.len()
            && self.pure_states.iter().zip(&other.pure_states).all(|(a, b)| same(&a.0, &b.0))
            && self.effect_generators.iter().zip(&other.effect_generators).all(|(a, b)| same(&a.0, &b.0))
            && same(&self.unit.0, &other.unit.0)
    }
}
