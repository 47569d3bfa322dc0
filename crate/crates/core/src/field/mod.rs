//! Vector-potential expressions: parsing, evaluation and parity analysis.

mod eval;
mod expr;
pub mod parity;
mod parser;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::EvalError;
pub use expr::{Axis, BinOp, Expr, Func};
pub use parity::{
    parity_of_component, parity_signature, predict_supercharges, ParityError, ParityOutcome,
    ParitySignature, Prediction, Sampler, Verdict, DEFAULT_PARITY_TOL,
};
pub use parser::{parse, parse_with_params, ParseError};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("component A_{axis}: {source}")]
    Parse {
        axis: Axis,
        #[source]
        source: ParseError,
    },
    #[error("parameter name `{0}` is reserved")]
    ReservedParameter(String),
    #[error("parameter `{name}` must be finite (got {value})")]
    NonFiniteParameter { name: String, value: f64 },
    #[error("malformed field file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read field file: {0}")]
    Io(#[from] std::io::Error),
}

/// On-disk field definition: `{"name": .., "params": {..}, "A": [Ax, Ay, Az]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "A")]
    pub a: [String; 3],
}

/// The three components of a vector potential with their parameter bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPotentialSpec {
    pub name: String,
    pub components: [Expr; 3],
    pub params: BTreeMap<String, f64>,
}

fn check_param_names(params: &BTreeMap<String, f64>) -> Result<(), FieldError> {
    for (name, &value) in params {
        if matches!(name.as_str(), "x" | "y" | "z") || Func::from_name(name).is_some() {
            return Err(FieldError::ReservedParameter(name.clone()));
        }
        if !value.is_finite() {
            return Err(FieldError::NonFiniteParameter { name: name.clone(), value });
        }
    }
    Ok(())
}

impl VectorPotentialSpec {
    /// Parses the three DSL strings; identifiers other than `x, y, z` must be
    /// keys of `params`.
    pub fn parse(name: &str, a: [&str; 3], params: BTreeMap<String, f64>) -> Result<Self, FieldError> {
        check_param_names(&params)?;
        let names: Vec<String> = params.keys().cloned().collect();
        let mut parsed = Vec::with_capacity(3);
        for (axis, text) in Axis::ALL.into_iter().zip(a) {
            parsed.push(parse_with_params(text, &names).map_err(|source| FieldError::Parse { axis, source })?);
        }
        let components: [Expr; 3] = parsed.try_into().expect("three components");
        Ok(VectorPotentialSpec {
            name: name.to_string(),
            components,
            params,
        })
    }

    pub fn zero(name: &str) -> Self {
        VectorPotentialSpec {
            name: name.to_string(),
            components: [Expr::Const(0.0), Expr::Const(0.0), Expr::Const(0.0)],
            params: BTreeMap::new(),
        }
    }

    pub fn from_file(file: &FieldFile) -> Result<Self, FieldError> {
        let [ax, ay, az] = &file.a;
        Self::parse(&file.name, [ax, ay, az], file.params.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let file: FieldFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self, FieldError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> FieldFile {
        FieldFile {
            name: self.name.clone(),
            params: self.params.clone(),
            a: self.components.clone().map(|e| e.to_string()),
        }
    }

    pub fn component(&self, axis: Axis) -> &Expr {
        &self.components[axis.index()]
    }

    /// Value of `(A_x, A_y, A_z)` at a point.
    pub fn eval(&self, point: [f64; 3]) -> Result<[f64; 3], EvalError> {
        Ok([
            self.components[0].eval(point, &self.params)?,
            self.components[1].eval(point, &self.params)?,
            self.components[2].eval(point, &self.params)?,
        ])
    }

    /// Components with every parameter replaced by its numeric value.
    pub fn substituted(&self) -> [Expr; 3] {
        self.components.clone().map(|e| e.substitute(&self.params))
    }
}
