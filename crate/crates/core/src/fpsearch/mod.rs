//! Binary max-SINR signature search.
//!
//! Maximizing `sᵀ Q s` over `{±1}^L` is rewritten as minimizing `sᵀ W s`
//! with `W = αI - Q` positive definite. With `W = Bᵀ B`, every candidate
//! inside the ellipsoid `‖B s‖² ≤ C` is enumerated depth-first. The radius
//! `C` is the metric of a feasible initializer (by default the sign-quantized
//! dominant eigenvector), so the sphere is never empty and always contains
//! the exhaustive optimum. The radius is never updated during the search.

mod enumerate;
mod exhaustive;

pub use exhaustive::{exhaustive_real, EXHAUSTIVE_BINARY_MAX_LEN};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_upper, max_eigenpair, RealMatrix};
use crate::model::SinrForm;
pub use crate::signature::BinarySignature;

pub const DEFAULT_ALPHA_BETA: f64 = 1.01;
pub const DEFAULT_RADIUS_INFLATION: f64 = 1e-9;
const DEFAULT_DELTA_RELATIVE: f64 = 1e-6;

/// Where the fixed radius comes from.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum RadiusInit {
    /// Sign of the dominant eigenvector of `Q_R`.
    #[default]
    Rank1Quantized,
    /// Any feasible binary vector, e.g. from a higher-rank construction.
    Provided(BinarySignature),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpConfig {
    /// `β` in `α = β·λ_max + δ`.
    pub alpha_beta: f64,
    /// Absolute `δ`; `None` uses `1e-6 · max(1, λ_max)`.
    pub alpha_delta: Option<f64>,
    pub radius_init: RadiusInit,
    /// `ε` in `C = (1 + ε) · s_initᵀ W s_init`.
    pub radius_inflation: f64,
}

impl Default for FpConfig {
    fn default() -> Self {
        Self {
            alpha_beta: DEFAULT_ALPHA_BETA,
            alpha_delta: None,
            radius_init: RadiusInit::Rank1Quantized,
            radius_inflation: DEFAULT_RADIUS_INFLATION,
        }
    }
}

impl FpConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha_beta.is_finite() || self.alpha_beta < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha beta {} must be >= 1",
                self.alpha_beta
            )));
        }
        if let Some(d) = self.alpha_delta {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidConfig(format!("alpha delta {d} must be >= 0")));
            }
        }
        if !self.radius_inflation.is_finite() || self.radius_inflation < 0.0 {
            return Err(Error::InvalidConfig("radius inflation must be >= 0".into()));
        }
        Ok(())
    }

    fn delta(&self, lambda_max: f64) -> f64 {
        self.alpha_delta
            .unwrap_or(DEFAULT_DELTA_RELATIVE * lambda_max.abs().max(1.0))
    }

    /// `β·λ + δ`, with the multiplier applied to `|λ|` so a negative
    /// spectrum still lands above `λ`.
    fn alpha(&self, lambda_max: f64, delta: f64) -> f64 {
        lambda_max + (self.alpha_beta - 1.0) * lambda_max.abs() + delta
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchStats {
    /// Complete vectors that satisfied every level's bounds.
    pub candidates_found: u64,
    /// Accepted partial assignments, complete vectors included.
    pub nodes_visited: u64,
    /// `s_optᵀ W s_opt`
    pub best_metric: f64,
    /// Squared radius `C` actually used.
    pub radius: f64,
    pub alpha: f64,
}

/// Hooks into the enumeration, for instrumentation and tests.
pub trait SearchObserver {
    /// Level `level` was entered with residual radius `residual`; the
    /// residual at `level + 1` was `parent_residual`.
    fn on_descend(&mut self, _level: usize, _residual: f64, _parent_residual: f64) {}

    /// A complete vector passed every bound.
    fn on_candidate(&mut self, _s: &[i32], _metric: f64, _radius: f64) {}
}

impl SearchObserver for () {}

/// `sᵀ Q s`; the single evaluator every binary search reports through.
pub fn objective_real(q: &RealMatrix, s: &BinarySignature) -> f64 {
    q.quad_form(&s.to_f64())
}

pub fn binary_objective(form: &SinrForm, s: &BinarySignature) -> f64 {
    objective_real(&form.q_real, s)
}

fn quantize_real(q: &RealMatrix) -> Result<(f64, BinarySignature)> {
    let (lambda, v) = max_eigenpair(q)?;
    Ok((lambda, BinarySignature::from_signs(&v)))
}

/// Sign of the canonical dominant eigenvector of `Q_R`.
pub fn quantize_rank1(form: &SinrForm) -> Result<BinarySignature> {
    Ok(quantize_real(&form.q_real)?.1)
}

/// `W = αI - Q` together with its Cholesky factor. A failed factorization
/// escalates `δ` once.
fn build_w_factored(q: &RealMatrix, lambda_max: f64, cfg: &FpConfig) -> Result<(RealMatrix, f64, RealMatrix)> {
    cfg.validate()?;
    let n = q.rows();
    let mut delta = cfg.delta(lambda_max);
    let mut last_err = None;
    for _ in 0..2 {
        let alpha = cfg.alpha(lambda_max, delta);
        if alpha - lambda_max > 0.0 {
            let w = RealMatrix::identity(n).scaled(alpha).sub(q);
            match cholesky_upper(&w) {
                Ok(b) => return Ok((w, alpha, b)),
                Err(e) => last_err = Some(e),
            }
        }
        delta += DEFAULT_DELTA_RELATIVE * lambda_max.abs().max(1.0);
    }
    Err(last_err.unwrap_or(Error::NotPositiveDefinite { index: 0, pivot: 0.0 }))
}

/// `W = αI - Q_R` and the `α` used.
pub fn build_w(form: &SinrForm, cfg: &FpConfig) -> Result<(RealMatrix, f64)> {
    let (lambda, _) = max_eigenpair(&form.q_real)?;
    let (w, alpha, _) = build_w_factored(&form.q_real, lambda, cfg)?;
    Ok((w, alpha))
}

/// `C = (1 + ε) · s_initᵀ W s_init`.
pub fn initial_radius(w: &RealMatrix, init: &BinarySignature, inflation: f64) -> f64 {
    (1.0 + inflation) * w.quad_form(&init.to_f64())
}

/// Minimizes `sᵀ (αI - Q) s` over `{±1}^n` for a real symmetric `Q`.
pub fn fp_search_real_observed<O: SearchObserver>(
    q: &RealMatrix,
    cfg: &FpConfig,
    observer: &mut O,
) -> Result<(BinarySignature, SearchStats)> {
    let n = q.rows();
    if !q.is_square() || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} objective matrix",
            q.rows(),
            q.cols()
        )));
    }
    let (lambda, quantized) = quantize_real(q)?;
    let init = match &cfg.radius_init {
        RadiusInit::Rank1Quantized => quantized,
        RadiusInit::Provided(s) if s.len() == n => s.clone(),
        RadiusInit::Provided(s) => {
            return Err(Error::DimensionMismatch(format!(
                "initializer of length {} for a length-{n} search",
                s.len()
            )))
        }
    };
    let (w, alpha, factor) = build_w_factored(q, lambda, cfg)?;
    let radius = initial_radius(&w, &init, cfg.radius_inflation);
    let (s, mut stats) = enumerate::enumerate(&w, &factor, radius, &init, observer)?;
    stats.alpha = alpha;
    Ok((s, stats))
}

pub fn fp_search_real(q: &RealMatrix, cfg: &FpConfig) -> Result<(BinarySignature, SearchStats)> {
    fp_search_real_observed(q, cfg, &mut ())
}

/// SINR-optimal binary signature for `form`, canonicalized to a leading `+1`.
pub fn fp_search_binary(form: &SinrForm, cfg: &FpConfig) -> Result<(BinarySignature, SearchStats)> {
    fp_search_real(&form.q_real, cfg)
}

/// Brute-force optimum of `sᵀ Q_R s` and its value.
pub fn exhaustive_binary(form: &SinrForm) -> Result<(BinarySignature, f64)> {
    exhaustive_real(&form.q_real)
}
