//! Built-in field configurations.
//!
//! The closed forms are concrete choices that realise the verbal
//! descriptions: a z-symmetric solenoid, a straight current along z, and a
//! square of alternating z-directed dipoles. Default amplitudes and sizes
//! are arbitrary (all 1, softening δ = 0.1).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, VectorPotentialSpec};

pub const NAMES: [&str; 4] = ["free", "solenoid", "wire", "octopole"];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown builtin field `{0}` (expected one of free, solenoid, wire, octopole)")]
    UnknownName(String),
    #[error("field `{field}` has no parameter `{param}`")]
    UnknownParameter { field: String, param: String },
    #[error("parameter `{param}` of `{field}` must be {requirement} (got {value})")]
    InvalidParameter {
        field: String,
        param: String,
        requirement: &'static str,
        value: f64,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A catalog field with the number of supercharges it is expected to carry.
#[derive(Debug, Clone)]
pub struct NamedField {
    pub spec: VectorPotentialSpec,
    pub expected_n: usize,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "expected_N")]
    pub expected_n: usize,
    #[serde(rename = "A")]
    pub a: [String; 3],
    pub provenance: &'static str,
}

impl NamedField {
    pub fn entry(&self) -> CatalogEntry {
        let file = self.spec.to_file();
        CatalogEntry {
            name: file.name,
            params: file.params,
            expected_n: self.expected_n,
            a: file.a,
            provenance: self.provenance,
        }
    }
}

enum Range {
    Positive,
    Real,
}

struct Template {
    a: [&'static str; 3],
    defaults: &'static [(&'static str, f64, Range)],
    expected_n: usize,
    provenance: &'static str,
}

// (x_j, y_j, s_j) for the octopole sources, going around the square.
const OCTOPOLE_SOURCES: [(&str, &str, &str); 4] = [("a", "a", "+"), ("-a", "a", "-"), ("-a", "-a", "+"), ("a", "-a", "-")];

fn octopole_components() -> [String; 2] {
    let shift = |c: &str, s: &str| match s.strip_prefix('-') {
        Some(v) => format!("({c}+{v})"),
        None => format!("({c}-{s})"),
    };
    let mut ax = String::new();
    let mut ay = String::new();
    for (i, (xj, yj, sign)) in OCTOPOLE_SOURCES.iter().enumerate() {
        let denom = format!(
            "({}^2+{}^2+z^2+delta^2)^1.5",
            shift("x", xj),
            shift("y", yj)
        );
        let op = if i == 0 { if *sign == "-" { "-" } else { "" } } else { sign };
        ax.push_str(&format!("{op}{}/{denom}", shift("y", yj)));
        ay.push_str(&format!("{op}{}/{denom}", shift("x", xj)));
    }
    [format!("-mu*({ax})"), format!("mu*({ay})")]
}

fn template(name: &str) -> Option<Template> {
    Some(match name {
        "free" => Template {
            a: ["0", "0", "0"],
            defaults: &[],
            expected_n: 4,
            provenance: "free electron, A = 0",
        },
        "solenoid" => Template {
            a: ["-y*b*exp(-(x^2+y^2)/w^2-z^2/l^2)", "x*b*exp(-(x^2+y^2)/w^2-z^2/l^2)", "0"],
            defaults: &[("b", 1.0, Range::Real), ("l", 1.0, Range::Positive), ("w", 1.0, Range::Positive)],
            expected_n: 2,
            provenance: "solenoid along z, symmetric under z -> -z; Gaussian-profile azimuthal potential",
        },
        "wire" => Template {
            a: ["0", "0", "-c1*ln(x^2+y^2+delta^2)"],
            defaults: &[("c1", 1.0, Range::Real), ("delta", 0.1, Range::Positive)],
            expected_n: 3,
            provenance: "straight current along z; logarithmic potential softened on the axis by delta",
        },
        "octopole" => Template {
            a: ["", "", "0"],
            defaults: &[("a", 1.0, Range::Positive), ("delta", 0.1, Range::Positive), ("mu", 1.0, Range::Real)],
            expected_n: 4,
            provenance: "four z-directed dipoles at (+-a, +-a, 0), neighbours opposite; softened by delta",
        },
        _ => return None,
    })
}

/// Builds a catalog field, overriding default parameters with `params`.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<NamedField, CatalogError> {
    let t = template(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    for key in params.keys() {
        if !t.defaults.iter().any(|(n, _, _)| n == key) {
            return Err(CatalogError::UnknownParameter {
                field: name.to_string(),
                param: key.clone(),
            });
        }
    }
    let mut bound = BTreeMap::new();
    for (pname, default, range) in t.defaults {
        let value = params.get(*pname).copied().unwrap_or(*default);
        let ok = match range {
            Range::Positive => value > 0.0 && value.is_finite(),
            Range::Real => value.is_finite(),
        };
        if !ok {
            return Err(CatalogError::InvalidParameter {
                field: name.to_string(),
                param: pname.to_string(),
                requirement: match range {
                    Range::Positive => "positive",
                    Range::Real => "finite",
                },
                value,
            });
        }
        bound.insert(pname.to_string(), value);
    }
    let spec = if name == "octopole" {
        let [ax, ay] = octopole_components();
        VectorPotentialSpec::parse(name, [&ax, &ay, t.a[2]], bound)?
    } else {
        VectorPotentialSpec::parse(name, t.a, bound)?
    };
    Ok(NamedField {
        spec,
        expected_n: t.expected_n,
        provenance: t.provenance,
    })
}

/// Every catalog field with default parameters.
pub fn all() -> Vec<NamedField> {
    NAMES
        .iter()
        .map(|n| builtin(n, &BTreeMap::new()).expect("catalog defaults are valid"))
        .collect()
}
