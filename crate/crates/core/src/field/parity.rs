//! Parity classification of potential components under coordinate reflections.
//!
//! A reflection `I_k` maps `x_k ↦ −x_k`. The involution `σ_k ⊗ I_k`
//! anticommutes with `Q₀ = σ·(p − A)` exactly when `A` transforms under
//! `I_k` like the momentum does: `A_k` odd and every other component even.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::eval::EvalError;
use super::expr::{Axis, Expr};
use super::VectorPotentialSpec;

/// Redraws allowed per sample when the expression is undefined at the drawn point.
const RETRIES_PER_SAMPLE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Even,
    Odd,
    Zero,
    None,
}

impl Verdict {
    pub fn is_even(self) -> bool {
        matches!(self, Verdict::Even | Verdict::Zero)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Verdict::Odd | Verdict::Zero)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Even => "even",
            Verdict::Odd => "odd",
            Verdict::Zero => "zero",
            Verdict::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampler {
    pub count: usize,
    pub half_width: f64,
    pub seed: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            count: 128,
            half_width: 2.0,
            seed: 0xC1F0,
        }
    }
}

pub const DEFAULT_PARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParityError {
    #[error("sampler needs at least 16 points (got {0})")]
    TooFewSamples(usize),
    #[error("invalid sampler or tolerance: {0}")]
    InvalidSettings(&'static str),
    #[error("no admissible sample point after {retries} draws: {source}")]
    Domain {
        retries: usize,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Eval(EvalError),
}

/// Verdict for one component under one reflection, with the largest sampled
/// deviation (relative to the sample scale) of the claimed relation. For
/// [`Verdict::None`] this is the smaller of the even and odd deviations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityOutcome {
    pub verdict: Verdict,
    pub deviation: f64,
}

/// Classifies `e` (parameters already bound) under `x_axis ↦ −x_axis`.
pub fn parity_of_component(
    e: &Expr,
    params: &std::collections::BTreeMap<String, f64>,
    axis: Axis,
    sampler: &Sampler,
    tol: f64,
) -> Result<ParityOutcome, ParityError> {
    if sampler.count < 16 {
        return Err(ParityError::TooFewSamples(sampler.count));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(ParityError::InvalidSettings("tolerance must be positive"));
    }
    if !(sampler.half_width > 0.0 && sampler.half_width.is_finite()) {
        return Err(ParityError::InvalidSettings("box half-width must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let mut pairs = Vec::with_capacity(sampler.count);
    for _ in 0..sampler.count {
        let mut last_err = None;
        let mut found = None;
        for _ in 0..RETRIES_PER_SAMPLE {
            let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-sampler.half_width..=sampler.half_width));
            let mut q = p;
            q[axis.index()] = -q[axis.index()];
            match (e.eval(p, params), e.eval(q, params)) {
                (Ok(a), Ok(b)) => {
                    found = Some((a, b));
                    break;
                }
                (Err(err @ EvalError::UnboundParameter(_)), _)
                | (_, Err(err @ EvalError::UnboundParameter(_))) => return Err(ParityError::Eval(err)),
                (Err(err), _) | (_, Err(err)) => last_err = Some(err),
            }
        }
        match found {
            Some(pair) => pairs.push(pair),
            None => {
                return Err(ParityError::Domain {
                    retries: RETRIES_PER_SAMPLE,
                    source: last_err.expect("a failed draw records its error"),
                })
            }
        }
    }
    let scale = pairs
        .iter()
        .fold(1.0_f64, |m, (a, b)| m.max(a.abs()).max(b.abs()));
    let max_of = |f: &dyn Fn(f64, f64) -> f64| pairs.iter().fold(0.0_f64, |m, &(a, b)| m.max(f(a, b))) / scale;
    let zero_dev = max_of(&|a, b| a.abs().max(b.abs()));
    let even_dev = max_of(&|a, b| (b - a).abs());
    let odd_dev = max_of(&|a, b| (b + a).abs());
    let outcome = if zero_dev <= tol {
        ParityOutcome { verdict: Verdict::Zero, deviation: zero_dev }
    } else if even_dev <= tol {
        ParityOutcome { verdict: Verdict::Even, deviation: even_dev }
    } else if odd_dev <= tol {
        ParityOutcome { verdict: Verdict::Odd, deviation: odd_dev }
    } else {
        ParityOutcome { verdict: Verdict::None, deviation: even_dev.min(odd_dev) }
    };
    Ok(outcome)
}

/// Parity of every component `A_j` under every reflection `I_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParitySignature {
    /// `entries[j][k]`: component `j` under reflection of axis `k`.
    pub entries: [[ParityOutcome; 3]; 3],
    pub max_deviation: f64,
}

impl ParitySignature {
    pub fn verdict(&self, component: Axis, axis: Axis) -> Verdict {
        self.entries[component.index()][axis.index()].verdict
    }

    /// `A_axis` odd and all other components even under `x_axis ↦ −x_axis`.
    pub fn reflection_admissible(&self, axis: Axis) -> bool {
        Axis::ALL.into_iter().all(|j| {
            let v = self.verdict(j, axis);
            if j == axis {
                v.is_odd()
            } else {
                v.is_even()
            }
        })
    }
}

pub fn parity_signature(
    spec: &VectorPotentialSpec,
    sampler: &Sampler,
    tol: f64,
) -> Result<ParitySignature, ParityError> {
    let mut entries = [[ParityOutcome { verdict: Verdict::Zero, deviation: 0.0 }; 3]; 3];
    let mut max_deviation = 0.0_f64;
    for j in Axis::ALL {
        for k in Axis::ALL {
            let o = parity_of_component(spec.component(j), &spec.params, k, sampler, tol)?;
            max_deviation = max_deviation.max(o.deviation);
            entries[j.index()][k.index()] = o;
        }
    }
    Ok(ParitySignature { entries, max_deviation })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub signature: ParitySignature,
    /// Axes `k` for which `σ_k ⊗ I_k` is predicted to anticommute with `Q₀`.
    pub axes: Vec<Axis>,
    /// Number of supercharges, `Q₀` included.
    pub n: usize,
}

pub fn predict_supercharges(
    spec: &VectorPotentialSpec,
    sampler: &Sampler,
    tol: f64,
) -> Result<Prediction, ParityError> {
    let signature = parity_signature(spec, sampler, tol)?;
    let axes: Vec<Axis> = Axis::ALL
        .into_iter()
        .filter(|&k| signature.reflection_admissible(k))
        .collect();
    let n = axes.len() + 1;
    Ok(Prediction { signature, axes, n })
}
