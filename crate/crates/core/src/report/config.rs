use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::RunError;
use crate::catalog;
use crate::field::{Sampler, VectorPotentialSpec, DEFAULT_PARITY_TOL};
use crate::lattice::{Boundary, Grid};
use crate::spectral::{DEFAULT_CLUSTER_REL_TOL, DEFAULT_ZERO_TOL};
use crate::susy::{DEFAULT_ADMISSIBILITY_TOL, DEFAULT_ALGEBRA_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSource {
    Builtin(String),
    File(PathBuf),
}

impl Default for FieldSource {
    fn default() -> Self {
        FieldSource::Builtin("free".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub points: [usize; 3],
    pub spacing: [f64; 3],
    pub bc: Boundary,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: [7, 7, 7],
            spacing: [0.5; 3],
            bc: Boundary::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub admissibility: f64,
    pub algebra: f64,
    pub cluster_rel: f64,
    pub zero: f64,
    pub parity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            admissibility: DEFAULT_ADMISSIBILITY_TOL,
            algebra: DEFAULT_ALGEBRA_TOL,
            cluster_rel: DEFAULT_CLUSTER_REL_TOL,
            zero: DEFAULT_ZERO_TOL,
            parity: DEFAULT_PARITY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Analyze,
    Verify,
    Spectrum,
}

/// Everything a run depends on. Loaded from a JSON file of the same shape,
/// then overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldSource,
    /// Overrides for builtin field parameters.
    pub params: BTreeMap<String, f64>,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub sampler: Sampler,
    pub format: OutputFormat,
    pub stages: Vec<Stage>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldSource::default(),
            params: BTreeMap::new(),
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            sampler: Sampler::default(),
            format: OutputFormat::Json,
            stages: vec![Stage::Analyze, Stage::Verify, Stage::Spectrum],
        }
    }
}

/// The resolved field: its spec plus the catalog's expected `N`, if builtin.
#[derive(Debug, Clone)]
pub struct ResolvedField {
    pub spec: VectorPotentialSpec,
    pub expected_n: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Usage(format!("invalid config: {e}")))
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.grid()?;
        let t = &self.tolerances;
        for (name, v) in [
            ("admissibility", t.admissibility),
            ("algebra", t.algebra),
            ("cluster_rel", t.cluster_rel),
            ("zero", t.zero),
            ("parity", t.parity),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RunError::Usage(format!("tolerance `{name}` must be positive (got {v})")));
            }
        }
        if self.sampler.count < 16 {
            return Err(RunError::Usage(format!(
                "sampler count must be at least 16 (got {})",
                self.sampler.count
            )));
        }
        if !(self.sampler.half_width > 0.0 && self.sampler.half_width.is_finite()) {
            return Err(RunError::Usage("sampler box half-width must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, RunError> {
        Grid::new(self.grid.points, self.grid.spacing, self.grid.bc).map_err(|e| RunError::Usage(e.to_string()))
    }

    pub fn resolve_field(&self) -> Result<ResolvedField, RunError> {
        match &self.field {
            FieldSource::Builtin(name) => {
                let f = catalog::builtin(name, &self.params).map_err(|e| RunError::Construction(e.to_string()))?;
                Ok(ResolvedField {
                    spec: f.spec,
                    expected_n: Some(f.expected_n),
                })
            }
            FieldSource::File(path) => {
                if !self.params.is_empty() {
                    return Err(RunError::Usage("--param only applies to builtin fields".into()));
                }
                let spec = VectorPotentialSpec::load(path)
                    .map_err(|e| RunError::Construction(format!("{}: {e}", path.display())))?;
                Ok(ResolvedField { spec, expected_n: None })
            }
        }
    }
}
