//! Command drivers behind the CLI: `analyze`, `verify`, `spectrum`, `run`,
//! `catalog list` and `dump`.
//!
//! Each driver returns the JSON report (the source of truth) together with a
//! short text rendering and the exit code: 0 pass, 1 certified-check failure.
//! Usage and construction problems surface as [`RunError`] (exit code 2).

mod config;
mod json;

use serde::Serialize;
use thiserror::Error;

use crate::catalog;
use crate::field::{predict_supercharges, Axis, Prediction};
use crate::lattice::{Boundary, Grid};
use crate::spectral::{
    check_degeneracy_law, cluster_degeneracies, eigen_spectrum, Cluster, MAX_DENSE_DIM,
};
use crate::susy::{certify, AlgebraReport, Certification};

pub use config::{FieldSource, GridConfig, OutputFormat, ResolvedField, RunConfig, Stage, Tolerances};
pub use json::{to_compact, to_pretty};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Construction(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub json: String,
    pub text: String,
    pub exit_code: i32,
}

impl CommandOutput {
    fn new<T: Serialize>(report: &T, text: String, passed: bool) -> CommandOutput {
        let mut json = to_pretty(report);
        json.push('\n');
        CommandOutput {
            json,
            text,
            exit_code: if passed { 0 } else { 1 },
        }
    }

    pub fn render(&self, format: OutputFormat) -> &str {
        match format {
            OutputFormat::Json => &self.json,
            OutputFormat::Text => &self.text,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct GridSummary {
    points: [usize; 3],
    spacing: [f64; 3],
    bc: Boundary,
    dim: usize,
}

impl From<&Grid> for GridSummary {
    fn from(g: &Grid) -> Self {
        GridSummary {
            points: g.points(),
            spacing: g.spacing(),
            bc: g.boundary(),
            dim: g.dim(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SignatureEntry {
    component: Axis,
    axis: Axis,
    verdict: &'static str,
    deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    field: String,
    params: std::collections::BTreeMap<String, f64>,
    signature: Vec<SignatureEntry>,
    max_deviation: f64,
    /// Axes `k` (1-based) with `σ_k ⊗ I_k` predicted admissible.
    axes: Vec<usize>,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "expected_N", skip_serializing_if = "Option::is_none")]
    expected_n: Option<usize>,
    tol: f64,
    sampler: crate::field::Sampler,
}

fn axes_1based(axes: &[Axis]) -> Vec<usize> {
    axes.iter().map(|a| a.index() + 1).collect()
}

fn predict(cfg: &RunConfig, field: &ResolvedField) -> Result<Prediction, RunError> {
    predict_supercharges(&field.spec, &cfg.sampler, cfg.tolerances.parity).map_err(|e| RunError::Construction(e.to_string()))
}

fn parity_report(cfg: &RunConfig, field: &ResolvedField, pred: &Prediction) -> ParityReport {
    let mut signature = Vec::with_capacity(9);
    for j in Axis::ALL {
        for k in Axis::ALL {
            let o = pred.signature.entries[j.index()][k.index()];
            signature.push(SignatureEntry {
                component: j,
                axis: k,
                verdict: o.verdict.name(),
                deviation: o.deviation,
            });
        }
    }
    ParityReport {
        field: field.spec.name.clone(),
        params: field.spec.params.clone(),
        signature,
        max_deviation: pred.signature.max_deviation,
        axes: axes_1based(&pred.axes),
        n: pred.n,
        expected_n: field.expected_n,
        tol: cfg.tolerances.parity,
        sampler: cfg.sampler,
    }
}

fn parity_text(r: &ParityReport) -> String {
    let mut out = format!("field {}: predicted N = {} (axes {:?})\n", r.field, r.n, r.axes);
    for e in &r.signature {
        out.push_str(&format!("  A_{} under {} -> {}\n", e.component, e.axis, e.verdict));
    }
    out
}

/// Parity signature and predicted supercharge count.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    cfg.validate()?;
    let field = cfg.resolve_field()?;
    let pred = predict(cfg, &field)?;
    let report = parity_report(cfg, &field, &pred);
    let text = parity_text(&report);
    Ok(CommandOutput::new(&report, text, true))
}

#[derive(Debug, Clone, Serialize)]
struct CandidateSummary {
    spin: usize,
    orbital: String,
    residual_q0: f64,
    admissible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    field: String,
    grid: GridSummary,
    #[serde(flatten)]
    algebra: AlgebraReport,
    tol_adm: f64,
    candidates: Vec<CandidateSummary>,
    #[serde(rename = "predicted_N")]
    predicted_n: usize,
    predicted_axes: Vec<usize>,
    /// Lattice verdicts on `σ_k ⊗ I_k` agree with the parity prediction.
    prediction_agrees: bool,
    #[serde(rename = "expected_N", skip_serializing_if = "Option::is_none")]
    expected_n: Option<usize>,
}

fn run_certify(cfg: &RunConfig, field: &ResolvedField, g: &Grid) -> Result<Certification, RunError> {
    certify(g, &field.spec, cfg.tolerances.admissibility, cfg.tolerances.algebra)
        .map_err(|e| RunError::Construction(e.to_string()))
}

fn verify_report(cfg: &RunConfig, field: &ResolvedField, g: &Grid, cert: &Certification, pred: &Prediction) -> VerifyReport {
    let candidates = cert
        .candidates
        .iter()
        .map(|c| CandidateSummary {
            spin: c.spin.index() + 1,
            orbital: c.orbital.name(),
            residual_q0: c.q0_residual.unwrap_or(f64::NAN),
            admissible: cert.is_admissible(c),
        })
        .collect();
    let lattice_axes: Vec<Axis> = cert
        .candidates
        .iter()
        .filter(|c| c.orbital == crate::lattice::OrbitalSymmetry::Reflection(c.spin) && cert.is_admissible(c))
        .map(|c| c.spin)
        .collect();
    VerifyReport {
        field: field.spec.name.clone(),
        grid: GridSummary::from(g),
        algebra: cert.report.clone(),
        tol_adm: cfg.tolerances.admissibility,
        candidates,
        predicted_n: pred.n,
        predicted_axes: axes_1based(&pred.axes),
        prediction_agrees: lattice_axes == pred.axes,
        expected_n: field.expected_n,
    }
}

fn verify_text(r: &VerifyReport) -> String {
    let a = &r.algebra;
    let mut out = format!(
        "field {}: certified N = {} ({}), max residual {:.3e}, tol {:.1e}\n",
        r.field,
        a.n,
        if a.pass { "pass" } else { "FAIL" },
        a.max_residual(),
        a.tol
    );
    for t in &a.ts {
        out.push_str(&format!("  T = sigma_{} (x) {}: |{{T,Q0}}| = {:.3e}\n", t.spin, t.orbital, t.residual_q0));
    }
    out.push_str(&format!(
        "  parity prediction N = {} ({})\n",
        r.predicted_n,
        if r.prediction_agrees { "agrees" } else { "disagrees" }
    ));
    out
}

/// Lattice certification of the extended superalgebra.
pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    cfg.validate()?;
    let g = cfg.grid()?;
    let field = cfg.resolve_field()?;
    let pred = predict(cfg, &field)?;
    let cert = run_certify(cfg, &field, &g)?;
    let report = verify_report(cfg, &field, &g, &cert, &pred);
    let text = verify_text(&report);
    let pass = report.algebra.pass;
    Ok(CommandOutput::new(&report, text, pass))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumJson {
    field: String,
    grid: GridSummary,
    #[serde(rename = "N")]
    n: usize,
    divisor: usize,
    zero_modes: usize,
    clusters: Vec<ClusterJson>,
    pass: bool,
    cluster_rel_tol: f64,
    zero_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
struct ClusterJson {
    energy: f64,
    mult: usize,
    divisible: bool,
    /// Multiplicity equals `2^[N/2]` exactly (informational).
    equal: bool,
}

fn spectrum_report(cfg: &RunConfig, field: &ResolvedField, g: &Grid, cert: &Certification) -> Result<SpectrumJson, RunError> {
    let eigs = eigen_spectrum(&cert.set.hamiltonian).map_err(|e| RunError::Construction(e.to_string()))?;
    let mut r = cluster_degeneracies(&eigs, cfg.tolerances.cluster_rel, cfg.tolerances.zero);
    let n = cert.set.n();
    let pass = check_degeneracy_law(&mut r, n);
    let divisor = r.divisor().expect("law checked");
    let clusters = r
        .clusters
        .iter()
        .map(|c: &Cluster| ClusterJson {
            energy: c.energy,
            mult: c.mult,
            divisible: c.divisible == Some(true),
            equal: c.mult == divisor,
        })
        .collect();
    Ok(SpectrumJson {
        field: field.spec.name.clone(),
        grid: GridSummary::from(g),
        n,
        divisor,
        zero_modes: r.zero_modes,
        clusters,
        pass,
        cluster_rel_tol: cfg.tolerances.cluster_rel,
        zero_tol: cfg.tolerances.zero,
    })
}

fn spectrum_text(r: &SpectrumJson) -> String {
    let bad = r.clusters.iter().filter(|c| !c.divisible).count();
    let mut out = format!(
        "field {}: N = {}, {} levels, {} zero modes; multiplicities divisible by {}: {}\n",
        r.field,
        r.n,
        r.clusters.len(),
        r.zero_modes,
        r.divisor,
        if r.pass { "yes".to_string() } else { format!("no ({bad} levels fail)") }
    );
    for c in r.clusters.iter().take(8) {
        out.push_str(&format!("  E = {:.10} x{}\n", c.energy, c.mult));
    }
    if r.clusters.len() > 8 {
        out.push_str(&format!("  ... {} more levels\n", r.clusters.len() - 8));
    }
    out
}

fn check_dense_size(g: &Grid) -> Result<(), RunError> {
    if g.dim() > MAX_DENSE_DIM {
        return Err(RunError::Usage(format!(
            "grid dimension {} exceeds the dense eigensolver limit of {MAX_DENSE_DIM}",
            g.dim()
        )));
    }
    Ok(())
}

/// Dense spectrum of `H` and the degeneracy law for the certified `N`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    cfg.validate()?;
    let g = cfg.grid()?;
    check_dense_size(&g)?;
    let field = cfg.resolve_field()?;
    let cert = run_certify(cfg, &field, &g)?;
    let report = spectrum_report(cfg, &field, &g, &cert)?;
    let text = spectrum_text(&report);
    let pass = report.pass;
    Ok(CommandOutput::new(&report, text, pass))
}

#[derive(Debug, Clone, Serialize)]
struct RunReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    analyze: Option<ParityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<SpectrumJson>,
    pass: bool,
}

/// Runs the configured stages in order and combines their reports.
pub fn cmd_run(cfg: &RunConfig) -> Result<CommandOutput, RunError> {
    cfg.validate()?;
    let g = cfg.grid()?;
    let wants = |s: Stage| cfg.stages.contains(&s);
    if wants(Stage::Spectrum) {
        check_dense_size(&g)?;
    }
    let field = cfg.resolve_field()?;
    let pred = predict(cfg, &field)?;
    let mut report = RunReport {
        analyze: None,
        verify: None,
        spectrum: None,
        pass: true,
    };
    let mut text = String::new();
    if wants(Stage::Analyze) {
        let r = parity_report(cfg, &field, &pred);
        text.push_str(&parity_text(&r));
        report.analyze = Some(r);
    }
    if wants(Stage::Verify) || wants(Stage::Spectrum) {
        let cert = run_certify(cfg, &field, &g)?;
        if wants(Stage::Verify) {
            let r = verify_report(cfg, &field, &g, &cert, &pred);
            report.pass &= r.algebra.pass;
            text.push_str(&verify_text(&r));
            report.verify = Some(r);
        }
        if wants(Stage::Spectrum) {
            let r = spectrum_report(cfg, &field, &g, &cert)?;
            report.pass &= r.pass;
            text.push_str(&spectrum_text(&r));
            report.spectrum = Some(r);
        }
    }
    let pass = report.pass;
    Ok(CommandOutput::new(&report, text, pass))
}

/// One JSON object per catalog field, one per line.
pub fn catalog_list() -> String {
    catalog::all()
        .iter()
        .map(|f| to_compact(&f.entry()) + "\n")
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpTarget {
    Q0,
    Hamiltonian,
}

/// Sparse-triplet dump of `Q₀` or `H` for the configured field and grid.
pub fn dump_operator(cfg: &RunConfig, target: DumpTarget) -> Result<String, RunError> {
    cfg.validate()?;
    let g = cfg.grid()?;
    let field = cfg.resolve_field()?;
    let q0 = crate::susy::build_q0(&g, &field.spec).map_err(|e| RunError::Construction(e.to_string()))?;
    let op = match target {
        DumpTarget::Q0 => q0,
        DumpTarget::Hamiltonian => crate::susy::build_hamiltonian(&q0),
    };
    let mut buf = Vec::new();
    op.write_triplets(&mut buf).map_err(|e| RunError::Construction(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("dump is ASCII"))
}
