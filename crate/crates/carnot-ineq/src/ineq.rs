//! Rayleigh-quotient evaluators and pass/fail verifiers for the weighted
//! Hardy, Rellich, uncertainty-principle, Caffarelli–Kohn–Nirenberg,
//! Rellich–Sobolev, remainder-term and interpolation inequalities, plus
//! sharpness sweeps along the near-extremal families.
//!
//! Verdict policy: a lower-bound check `holds` when the quotient is at least
//! the reference constant minus 3 combined σ, and is `violated` only when it
//! falls below by more than 3σ with a gap exceeding 5σ; anything else is
//! `inconclusive`. Existential constants are never asserted sharp; their
//! reports track strict positivity at 3σ and battery minima.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{eval_jet, Frame};
use crate::fields::{
    make_gaussian_in_norm, make_hardy_extremizer, make_rellich_extremizer, ScalarField,
    TestFunctionSpec,
};
use crate::group::{GroupSpec, Point};
use crate::quadrature::{integrate, IntegralEstimate, IntegrationConfig, QuadratureError};

/// Sharpness-sweep outer cutoffs grow as exp(X/(2ε)) with this X: the
/// truncated tail fraction of the extremizer is then e^{-X}-small uniformly
/// in ε, and the truncation bias enters the quotient analytically in ε, so
/// the linear extrapolation absorbs it. Polynomial-in-1/ε cutoff schedules
/// leave a 1/log(1/ε) bias that does not extrapolate away.
pub const SWEEP_TAIL_LOG: f64 = 4.0;

/// Fixed mollification width for the Rellich sweep family. The profile has a
/// derivative jump at N = 1; a C² blend of width δ contributes ~(slope)²/δ to
/// ∫|Δφ|², so δ must stay bounded away from 0 (an ε-proportional width would
/// contribute at the same order as the diverging tail and shift the limit).
pub const RELLICH_SWEEP_DELTA: f64 = 0.4;

/// Default ε ladder for Rellich sweeps.
pub const RELLICH_SWEEP_EPS: [f64; 4] = [0.1, 0.06, 0.04, 0.02];

const SALT_LHS: u64 = 0x11;
const SALT_RHS: u64 = 0x22;
const SALT_A: u64 = 0x33;
const SALT_B: u64 = 0x44;
const SALT_C: u64 = 0x55;
const SALT_NUM: u64 = 0x66;
const SALT_DEN: u64 = 0x77;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("right-hand side estimate consistent with zero; quotient undefined")]
    RhsConsistentWithZero,
    #[error("quadrature: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("field: {0}")]
    Field(#[from] crate::fields::FieldError),
    #[error("sweep quotient increased beyond 3σ at ε = {eps}; mollification schedule failure")]
    NonMonotoneSweep { eps: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    /// Lower-bound semantics against a reference constant.
    pub fn lower_bound(quotient: f64, bound: f64, sigma: f64) -> Verdict {
        if quotient >= bound - 3.0 * sigma {
            Verdict::Holds
        } else if bound - quotient > 5.0 * sigma {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Equality semantics: |quotient − target| within 3σ holds, beyond 5σ
    /// violated.
    pub fn equality(quotient: f64, target: f64, sigma: f64) -> Verdict {
        let dev = (quotient - target).abs();
        if dev <= 3.0 * sigma {
            Verdict::Holds
        } else if dev > 5.0 * sigma {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Strict positivity at 3σ (existential constants).
    pub fn positive(value: f64, sigma: f64) -> Verdict {
        if value > 3.0 * sigma {
            Verdict::Holds
        } else if value < -3.0 * sigma {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Echo of the scalar parameters a report was run with.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ParamSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

/// Full record of one quotient check.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub inequality: String,
    pub group: String,
    pub params: ParamSet,
    pub lhs: IntegralEstimate,
    pub rhs: IntegralEstimate,
    /// Raw integrals behind compound (product/power) forms.
    pub components: Vec<(String, IntegralEstimate)>,
    pub quotient: f64,
    /// Sharp constant when the paper provides one; None for existential
    /// constants, which are only tracked as battery minima.
    pub sharp_constant: Option<f64>,
    /// Combined 1σ uncertainty of the quotient.
    pub sigma: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_spec: Option<TestFunctionSpec>,
    pub config: IntegrationConfig,
}

/// Record of a remainder-term (gap) check.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub inequality: String,
    pub group: String,
    pub params: ParamSet,
    pub numerator: IntegralEstimate,
    pub denominator: IntegralEstimate,
    /// The normalized gap (λ̂ or Ĉ).
    pub gap: f64,
    pub sigma: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_spec: Option<TestFunctionSpec>,
    pub config: IntegrationConfig,
}

/// N^a · (|∇N|²)^b at x; the norm-gradient factor uses the closed form.
fn weight(g: &GroupSpec, x: &Point, n_pow: f64, w_pow: f64) -> f64 {
    let n = g.norm(x);
    let mut out = 1.0;
    if n_pow != 0.0 {
        out *= n.powf(n_pow);
    }
    if w_pow != 0.0 {
        let v2 = x.horizontal_len().powi(2);
        let w = if matches!(g.kind(), crate::group::GroupKind::Abelian { .. }) {
            1.0
        } else {
            v2 / (n * n)
        };
        out *= w.powf(w_pow);
    }
    out
}

fn ratio(l: &IntegralEstimate, r: &IntegralEstimate) -> Result<(f64, f64), ReportError> {
    if !(r.value > 0.0) || r.value <= 3.0 * r.std_error {
        return Err(ReportError::RhsConsistentWithZero);
    }
    let q = l.value / r.value;
    let sigma = q.abs()
        * ((l.std_error / l.value.abs().max(1e-300)).powi(2)
            + (r.std_error / r.value).powi(2))
        .sqrt();
    Ok((q, sigma))
}

/// ∫ N^a w^b φ² (value-only fast path).
fn value_integral(
    g: &GroupSpec,
    field: &dyn ScalarField,
    n_pow: f64,
    w_pow: f64,
    cfg: &IntegrationConfig,
    salt: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    let f = |x: &Point| {
        let v = field.value(x);
        if v == 0.0 {
            return 0.0;
        }
        weight(g, x, n_pow, w_pow) * v * v
    };
    integrate(g, &f, field.support(), cfg, salt)
}

/// ∫ N^a w^b |φ|^p.
fn value_pow_integral(
    g: &GroupSpec,
    field: &dyn ScalarField,
    n_pow: f64,
    w_pow: f64,
    p: f64,
    cfg: &IntegrationConfig,
    salt: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    let f = |x: &Point| {
        let v = field.value(x);
        if v == 0.0 {
            return 0.0;
        }
        weight(g, x, n_pow, w_pow) * v.abs().powf(p)
    };
    integrate(g, &f, field.support(), cfg, salt)
}

/// ∫ N^a w^b |∇_G φ|^p.
fn grad_pow_integral(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    n_pow: f64,
    w_pow: f64,
    p: f64,
    cfg: &IntegrationConfig,
    salt: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    let f = |x: &Point| {
        let jet = match eval_jet(g, frame, field, x) {
            Ok(j) => j,
            Err(_) => return f64::NAN,
        };
        let g2 = jet.gradient_norm_sq();
        if g2 == 0.0 {
            return 0.0;
        }
        let gp = if p == 2.0 { g2 } else { g2.powf(0.5 * p) };
        weight(g, x, n_pow, w_pow) * gp
    };
    integrate(g, &f, field.support(), cfg, salt)
}

/// ∫ N^a w^b |Δ_G φ|².
fn lap_sq_integral(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    n_pow: f64,
    w_pow: f64,
    cfg: &IntegrationConfig,
    salt: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    let f = |x: &Point| {
        let jet = match eval_jet(g, frame, field, x) {
            Ok(j) => j,
            Err(_) => return f64::NAN,
        };
        let lap = jet.laplacian();
        weight(g, x, n_pow, w_pow) * lap * lap
    };
    integrate(g, &f, field.support(), cfg, salt)
}

/// Synthetic estimate for a product of two independent estimates.
fn product_estimate(a: &IntegralEstimate, b: &IntegralEstimate) -> IntegralEstimate {
    let value = a.value * b.value;
    let rel = (a.rel_error().powi(2) + b.rel_error().powi(2)).sqrt();
    IntegralEstimate {
        value,
        std_error: value.abs() * rel,
        samples: a.samples + b.samples,
        shells: Vec::new(),
    }
}

/// Synthetic estimate for est^k.
fn power_estimate(a: &IntegralEstimate, k: f64) -> IntegralEstimate {
    let value = a.value.powf(k);
    IntegralEstimate {
        value,
        std_error: value.abs() * k.abs() * a.rel_error(),
        samples: a.samples,
        shells: Vec::new(),
    }
}

/// Weighted Hardy inequality: ∫N^α|∇N|^γ|∇φ|² ≥ C ∫N^{α−2}|∇N|^{γ+2}φ²
/// with C = ((Q+α−2)/2)².
pub fn hardy_report(
    g: &GroupSpec,
    alpha: f64,
    gamma: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q + alpha - 2.0 <= 0.0 {
        return Err(ReportError::Hypothesis(format!(
            "need Q + α − 2 > 0 (Q = {q}, α = {alpha})"
        )));
    }
    if gamma != 0.0 && gamma <= -1.0 {
        return Err(ReportError::Hypothesis(format!(
            "weighted form needs γ > −1, got {gamma}"
        )));
    }
    let frame = Frame::new(g);
    let lhs = grad_pow_integral(g, &frame, field, alpha, 0.5 * gamma, 2.0, cfg, SALT_LHS)?;
    let rhs = value_integral(g, field, alpha - 2.0, 0.5 * (gamma + 2.0), cfg, SALT_RHS)?;
    let (quotient, sigma) = ratio(&lhs, &rhs)?;
    let sharp = (0.5 * (q + alpha - 2.0)).powi(2);
    Ok(QuotientReport {
        inequality: "hardy".into(),
        group: g.label(),
        params: ParamSet {
            alpha: Some(alpha),
            gamma: Some(gamma),
            ..Default::default()
        },
        lhs,
        rhs,
        components: Vec::new(),
        quotient,
        sharp_constant: Some(sharp),
        sigma,
        verdict: Verdict::lower_bound(quotient, sharp, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Weighted Rellich inequality: ∫N^α|Δφ|²/|∇N|² ≥ C ∫N^{α−4}|∇N|²φ²
/// with C = (Q+α−4)²(Q−α)²/16.
pub fn rellich_report(
    g: &GroupSpec,
    alpha: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q + alpha - 4.0 <= 0.0 {
        return Err(ReportError::Hypothesis(format!(
            "need Q + α − 4 > 0 (Q = {q}, α = {alpha})"
        )));
    }
    let frame = Frame::new(g);
    let lhs = lap_sq_integral(g, &frame, field, alpha, -1.0, cfg, SALT_LHS)?;
    let rhs = value_integral(g, field, alpha - 4.0, 1.0, cfg, SALT_RHS)?;
    let (quotient, sigma) = ratio(&lhs, &rhs)?;
    let sharp = (q + alpha - 4.0).powi(2) * (q - alpha).powi(2) / 16.0;
    Ok(QuotientReport {
        inequality: "rellich".into(),
        group: g.label(),
        params: ParamSet {
            alpha: Some(alpha),
            ..Default::default()
        },
        lhs,
        rhs,
        components: Vec::new(),
        quotient,
        sharp_constant: Some(sharp),
        sigma,
        verdict: Verdict::lower_bound(quotient, sharp, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// The four product-form uncertainty inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UncertaintyVariant {
    /// (∫N²/|∇N|²·φ²)(∫|∇φ|²) ≥ ((Q−2)/2)²(∫φ²)².
    GradWeighted,
    /// (∫N²|∇N|²φ²)(∫|∇φ|²) ≥ ((Q−2)/2)²(∫|∇N|²φ²)².
    NormWeighted,
    /// (∫N^{4−α}/|∇N|²·φ²)(∫N^α|Δφ|²/|∇N|²) ≥ C(∫φ²)².
    RellichFourMinusAlpha,
    /// (∫N^{4−α}|∇N|²φ²)(∫N^α|Δφ|²/|∇N|²) ≥ C(∫|∇N|²φ²)².
    RellichNorm,
}

impl UncertaintyVariant {
    pub fn label(&self) -> &'static str {
        match self {
            UncertaintyVariant::GradWeighted => "grad-weighted",
            UncertaintyVariant::NormWeighted => "norm-weighted",
            UncertaintyVariant::RellichFourMinusAlpha => "rellich-4-minus-alpha",
            UncertaintyVariant::RellichNorm => "rellich-norm",
        }
    }

    /// Sharp constant of the product form.
    pub fn sharp_constant(&self, q: f64, alpha: f64) -> f64 {
        match self {
            UncertaintyVariant::GradWeighted | UncertaintyVariant::NormWeighted => {
                (0.5 * (q - 2.0)).powi(2)
            }
            _ => (q + alpha - 4.0).powi(2) * (q - alpha).powi(2) / 16.0,
        }
    }
}

/// Uncertainty-principle report: quotient = (left product)/(right square).
pub fn uncertainty_report(
    g: &GroupSpec,
    variant: UncertaintyVariant,
    alpha: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q < 3.0 {
        return Err(ReportError::Hypothesis(format!("need Q ≥ 3, got {q}")));
    }
    use UncertaintyVariant::*;
    if matches!(variant, RellichFourMinusAlpha | RellichNorm) && q + alpha - 4.0 <= 0.0 {
        return Err(ReportError::Hypothesis(format!(
            "need Q + α − 4 > 0 (Q = {q}, α = {alpha})"
        )));
    }
    let frame = Frame::new(g);
    let (a, b, c) = match variant {
        GradWeighted => (
            value_integral(g, field, 2.0, -1.0, cfg, SALT_A)?,
            grad_pow_integral(g, &frame, field, 0.0, 0.0, 2.0, cfg, SALT_B)?,
            value_integral(g, field, 0.0, 0.0, cfg, SALT_C)?,
        ),
        NormWeighted => (
            value_integral(g, field, 2.0, 1.0, cfg, SALT_A)?,
            grad_pow_integral(g, &frame, field, 0.0, 0.0, 2.0, cfg, SALT_B)?,
            value_integral(g, field, 0.0, 1.0, cfg, SALT_C)?,
        ),
        RellichFourMinusAlpha => (
            value_integral(g, field, 4.0 - alpha, -1.0, cfg, SALT_A)?,
            lap_sq_integral(g, &frame, field, alpha, -1.0, cfg, SALT_B)?,
            value_integral(g, field, 0.0, 0.0, cfg, SALT_C)?,
        ),
        RellichNorm => (
            value_integral(g, field, 4.0 - alpha, 1.0, cfg, SALT_A)?,
            lap_sq_integral(g, &frame, field, alpha, -1.0, cfg, SALT_B)?,
            value_integral(g, field, 0.0, 1.0, cfg, SALT_C)?,
        ),
    };
    let lhs = product_estimate(&a, &b);
    let rhs = power_estimate(&c, 2.0);
    let (quotient, sigma) = ratio(&lhs, &rhs)?;
    let sharp = variant.sharp_constant(q, alpha);
    Ok(QuotientReport {
        inequality: "uncertainty".into(),
        group: g.label(),
        params: ParamSet {
            alpha: matches!(variant, RellichFourMinusAlpha | RellichNorm).then_some(alpha),
            variant: Some(variant.label().into()),
            ..Default::default()
        },
        lhs,
        rhs,
        components: vec![
            ("left-weighted".into(), a),
            ("left-derivative".into(), b),
            ("right".into(), c),
        ],
        quotient,
        sharp_constant: Some(sharp),
        sigma,
        verdict: Verdict::lower_bound(quotient, sharp, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Equality case of the norm-weighted uncertainty inequality with the
/// constant raised to (Q/2)²: attained exactly by φ = e^{−βN²}.
pub fn gaussian_equality_report(
    g: &GroupSpec,
    beta: f64,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    let field = make_gaussian_in_norm(g, beta)?;
    let mut report = uncertainty_report(g, UncertaintyVariant::NormWeighted, 0.0, &field, cfg)?;
    let target = (0.5 * q).powi(2);
    report.inequality = "uncertainty-gaussian-equality".into();
    report.params.beta = Some(beta);
    report.sharp_constant = Some(target);
    report.verdict = Verdict::equality(report.quotient, target, report.sigma);
    report.field_spec = Some(field.spec().clone());
    Ok(report)
}

/// Caffarelli–Kohn–Nirenberg quotient
/// ∫N^α|∇φ|² / (∫N^{α−s}|∇N|^s|φ|^{2(Q−s)/(Q−2)})^{(Q−2)/(Q−s)}.
/// Existential constant: no sharp value, battery-minimum tracking only.
pub fn ckn_report(
    g: &GroupSpec,
    s: f64,
    alpha: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q < 3.0 {
        return Err(ReportError::Hypothesis(format!("need Q ≥ 3, got {q}")));
    }
    if !(0.0..=2.0).contains(&s) {
        return Err(ReportError::Hypothesis(format!("need 0 ≤ s ≤ 2, got {s}")));
    }
    if alpha != 0.0 && !(2.0 - q < alpha && alpha < q) {
        return Err(ReportError::Hypothesis(format!(
            "weighted form needs 2 − Q < α < Q, got α = {alpha}"
        )));
    }
    let frame = Frame::new(g);
    let lhs = grad_pow_integral(g, &frame, field, alpha, 0.0, 2.0, cfg, SALT_LHS)?;
    let expo = 2.0 * (q - s) / (q - 2.0);
    let den = value_pow_integral(g, field, alpha - s, 0.5 * s, expo, cfg, SALT_RHS)?;
    let rhs = power_estimate(&den, (q - 2.0) / (q - s));
    let (quotient, sigma) = ratio(&lhs, &rhs)?;
    Ok(QuotientReport {
        inequality: "ckn".into(),
        group: g.label(),
        params: ParamSet {
            alpha: Some(alpha),
            s: Some(s),
            ..Default::default()
        },
        lhs,
        rhs,
        components: vec![("right-integral".into(), den)],
        quotient,
        sharp_constant: None,
        sigma,
        verdict: Verdict::positive(quotient, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Rellich–Sobolev quotient
/// ∫|Δφ|²/|∇N|² / (∫(|∇N|^{2s−2}/N^{2s})|φ|^{2(Q−2s)/(Q−4)})^{(Q−4)/(Q−2s)}.
pub fn rellich_sobolev_report(
    g: &GroupSpec,
    s: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q <= 4.0 {
        return Err(ReportError::Hypothesis(format!("need Q > 4, got {q}")));
    }
    if !(0.0..=2.0).contains(&s) {
        return Err(ReportError::Hypothesis(format!("need 0 ≤ s ≤ 2, got {s}")));
    }
    let frame = Frame::new(g);
    let lhs = lap_sq_integral(g, &frame, field, 0.0, -1.0, cfg, SALT_LHS)?;
    let expo = 2.0 * (q - 2.0 * s) / (q - 4.0);
    let den = value_pow_integral(g, field, -2.0 * s, s - 1.0, expo, cfg, SALT_RHS)?;
    let rhs = power_estimate(&den, (q - 4.0) / (q - 2.0 * s));
    let (quotient, sigma) = ratio(&lhs, &rhs)?;
    Ok(QuotientReport {
        inequality: "rellich-sobolev".into(),
        group: g.label(),
        params: ParamSet {
            s: Some(s),
            ..Default::default()
        },
        lhs,
        rhs,
        components: vec![("right-integral".into(), den)],
        quotient,
        sharp_constant: None,
        sigma,
        verdict: Verdict::positive(quotient, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Improved-Hardy remainder: λ̂(φ) =
/// [∫N^α|∇φ|² − ((Q+α−2)/2)²∫N^{α−2}|∇N|²φ²] / ∫_B φ², for φ supported in
/// the norm ball of radius `ball_radius`.
pub fn improved_hardy_report(
    g: &GroupSpec,
    alpha: f64,
    ball_radius: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<GapReport, ReportError> {
    let q = g.homogeneous_dim();
    if !(2.0 - q < alpha && alpha < 2.0) {
        return Err(ReportError::Hypothesis(format!(
            "need 2 − Q < α < 2, got α = {alpha}"
        )));
    }
    let sup = field.support();
    if sup.outer > ball_radius {
        return Err(ReportError::Hypothesis(format!(
            "field support reaches N = {}, outside the ball of radius {ball_radius}",
            sup.outer
        )));
    }
    if sup.inner <= 0.0 {
        return Err(ReportError::Hypothesis(
            "field must vanish near the origin".into(),
        ));
    }
    let sharp = (0.5 * (q + alpha - 2.0)).powi(2);
    let frame = Frame::new(g);
    let num_f = |x: &Point| {
        let jet = match eval_jet(g, &frame, field, x) {
            Ok(j) => j,
            Err(_) => return f64::NAN,
        };
        weight(g, x, alpha, 0.0) * jet.gradient_norm_sq()
            - sharp * weight(g, x, alpha - 2.0, 1.0) * jet.value * jet.value
    };
    let numerator = integrate(g, &num_f, sup, cfg, SALT_NUM)?;
    let denominator = value_integral(g, field, 0.0, 0.0, cfg, SALT_DEN)?;
    let (gap, sigma) = ratio(&numerator, &denominator)?;
    Ok(GapReport {
        inequality: "improved-hardy".into(),
        group: g.label(),
        params: ParamSet {
            alpha: Some(alpha),
            radius: Some(ball_radius),
            ..Default::default()
        },
        numerator,
        denominator,
        gap,
        sigma,
        verdict: Verdict::positive(gap, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Gradient remainder: Ĉ(φ) =
/// [∫|∇φ|² − ((Q−2)/2)²∫(|∇N|²/N²)φ²] / (∫|∇φ|^q)^{2/q}, 1 < q < 2.
pub fn gradient_remainder_report(
    g: &GroupSpec,
    qexp: f64,
    domain_radius: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<GapReport, ReportError> {
    let q = g.homogeneous_dim();
    if q < 3.0 {
        return Err(ReportError::Hypothesis(format!("need Q ≥ 3, got {q}")));
    }
    if !(1.0 < qexp && qexp < 2.0) {
        return Err(ReportError::Hypothesis(format!(
            "need 1 < q < 2, got {qexp}"
        )));
    }
    let sup = field.support();
    if sup.outer > domain_radius {
        return Err(ReportError::Hypothesis(format!(
            "field support reaches N = {}, outside the domain of radius {domain_radius}",
            sup.outer
        )));
    }
    let sharp = (0.5 * (q - 2.0)).powi(2);
    let frame = Frame::new(g);
    let num_f = |x: &Point| {
        let jet = match eval_jet(g, &frame, field, x) {
            Ok(j) => j,
            Err(_) => return f64::NAN,
        };
        jet.gradient_norm_sq() - sharp * weight(g, x, -2.0, 1.0) * jet.value * jet.value
    };
    let numerator = integrate(g, &num_f, sup, cfg, SALT_NUM)?;
    let den_raw = grad_pow_integral(g, &frame, field, 0.0, 0.0, qexp, cfg, SALT_DEN)?;
    let denominator = power_estimate(&den_raw, 2.0 / qexp);
    let (gap, sigma) = ratio(&numerator, &denominator)?;
    Ok(GapReport {
        inequality: "gradient-remainder".into(),
        group: g.label(),
        params: ParamSet {
            q: Some(qexp),
            radius: Some(domain_radius),
            ..Default::default()
        },
        numerator,
        denominator,
        gap,
        sigma,
        verdict: Verdict::positive(gap, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Interpolation quotient (polarizable groups):
/// [Hardy gap]^{1/2}·(∫N^p|∇N|^pφ^p)^{1/p} / ∫|∇N|²φ², p = q/(q−1).
pub fn interpolation_report(
    g: &GroupSpec,
    qexp: f64,
    field: &dyn ScalarField,
    cfg: &IntegrationConfig,
) -> Result<QuotientReport, ReportError> {
    let q = g.homogeneous_dim();
    if q < 3.0 {
        return Err(ReportError::Hypothesis(format!("need Q ≥ 3, got {q}")));
    }
    if !(1.0 < qexp && qexp < 2.0) {
        return Err(ReportError::Hypothesis(format!(
            "need 1 < q < 2, got {qexp}"
        )));
    }
    let p = qexp / (qexp - 1.0);
    let sharp = (0.5 * (q - 2.0)).powi(2);
    let frame = Frame::new(g);
    let gap_f = |x: &Point| {
        let jet = match eval_jet(g, &frame, field, x) {
            Ok(j) => j,
            Err(_) => return f64::NAN,
        };
        jet.gradient_norm_sq() - sharp * weight(g, x, -2.0, 1.0) * jet.value * jet.value
    };
    let gap = integrate(g, &gap_f, field.support(), cfg, SALT_A)?;
    if !(gap.value > 0.0) || gap.value <= 3.0 * gap.std_error {
        return Err(ReportError::RhsConsistentWithZero);
    }
    let weighted = value_pow_integral(g, field, p, 0.5 * p, p, cfg, SALT_B)?;
    let right = value_integral(g, field, 0.0, 1.0, cfg, SALT_C)?;
    if !(right.value > 0.0) || right.value <= 3.0 * right.std_error {
        return Err(ReportError::RhsConsistentWithZero);
    }
    let quotient = gap.value.sqrt() * weighted.value.powf(1.0 / p) / right.value;
    let sigma = quotient
        * ((0.5 * gap.rel_error()).powi(2)
            + (weighted.rel_error() / p).powi(2)
            + right.rel_error().powi(2))
        .sqrt();
    let lhs = product_estimate(&power_estimate(&gap, 0.5), &power_estimate(&weighted, 1.0 / p));
    Ok(QuotientReport {
        inequality: "interpolation".into(),
        group: g.label(),
        params: ParamSet {
            q: Some(qexp),
            ..Default::default()
        },
        lhs,
        rhs: right.clone(),
        components: vec![
            ("hardy-gap".into(), gap),
            ("weighted-power".into(), weighted),
            ("right".into(), right),
        ],
        quotient,
        sharp_constant: None,
        sigma,
        verdict: Verdict::positive(quotient, sigma),
        field_spec: None,
        config: cfg.clone(),
    })
}

/// Which inequality a sharpness sweep targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "inequality", rename_all = "lowercase")]
pub enum SweepInequality {
    Hardy { alpha: f64, gamma: f64 },
    Rellich { alpha: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub quotient: f64,
    pub sigma: f64,
}

/// Result of extrapolating extremizer quotients to ε = 0.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub inequality: String,
    pub group: String,
    pub params: ParamSet,
    pub points: Vec<SweepPoint>,
    /// Intercept c₀ of the weighted linear fit quotient = c₀ + c₁ε.
    pub limit: f64,
    pub limit_sigma: f64,
    /// Largest absolute fit residual.
    pub residual: f64,
    pub sharp_constant: f64,
}

/// Outer cutoff radius for the sweep family at a given ε.
pub fn sweep_cutoff_radius(eps: f64) -> f64 {
    (SWEEP_TAIL_LOG / (2.0 * eps)).exp().max(2.5)
}

/// Shell count adapted to the dynamic range of the sweep support.
fn sweep_shells(base: u32, inner: f64, outer: f64) -> u32 {
    let span = (outer / inner).ln();
    base.max((span / 0.35).ceil() as u32)
}

/// Sharpness sweep: build the mollified extremizer for each ε, evaluate the
/// quotient, and extrapolate linearly to ε = 0.
pub fn sharpness_sweep(
    g: &GroupSpec,
    ineq: SweepInequality,
    eps_list: &[f64],
    cfg: &IntegrationConfig,
) -> Result<SweepResult, ReportError> {
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(ReportError::Hypothesis(
            "ε list must be non-empty and positive".into(),
        ));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ReportError::Hypothesis(
            "ε list must be strictly decreasing".into(),
        ));
    }
    let q = g.homogeneous_dim();
    let mut points = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let r_cut = sweep_cutoff_radius(eps);
        let (quotient, sigma) = match ineq {
            SweepInequality::Hardy { alpha, gamma } => {
                let delta = (0.5 * eps).min(0.49);
                let field = make_hardy_extremizer(g, alpha, eps, delta, r_cut)?;
                let mut local = cfg.clone();
                local.shells =
                    sweep_shells(cfg.shells, field.support().inner, field.support().outer);
                let rep = hardy_report(g, alpha, gamma, &field, &local)?;
                (rep.quotient, rep.sigma)
            }
            SweepInequality::Rellich { alpha } => {
                let field = make_rellich_extremizer(g, alpha, eps, RELLICH_SWEEP_DELTA, r_cut)?;
                let mut local = cfg.clone();
                local.shells =
                    sweep_shells(cfg.shells, field.support().inner, field.support().outer);
                let rep = rellich_report(g, alpha, &field, &local)?;
                (rep.quotient, rep.sigma)
            }
        };
        points.push(SweepPoint {
            eps,
            quotient,
            sigma,
        });
    }
    // Quotients must decrease (within noise) toward the sharp constant.
    for w in points.windows(2) {
        let tol = 3.0 * (w[0].sigma.powi(2) + w[1].sigma.powi(2)).sqrt();
        if w[1].quotient > w[0].quotient + tol {
            return Err(ReportError::NonMonotoneSweep { eps: w[1].eps });
        }
    }
    // Weighted least squares, quotient = c0 + c1·ε.
    let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for pt in &points {
        let wgt = 1.0 / pt.sigma.max(1e-12).powi(2);
        s += wgt;
        sx += wgt * pt.eps;
        sxx += wgt * pt.eps * pt.eps;
        sy += wgt * pt.quotient;
        sxy += wgt * pt.eps * pt.quotient;
    }
    let det = s * sxx - sx * sx;
    let c0 = (sxx * sy - sx * sxy) / det;
    let c1 = (s * sxy - sx * sy) / det;
    let limit_sigma = (sxx / det).sqrt();
    let residual = points
        .iter()
        .map(|pt| (pt.quotient - c0 - c1 * pt.eps).abs())
        .fold(0.0f64, f64::max);
    let (name, params, sharp) = match ineq {
        SweepInequality::Hardy { alpha, gamma } => (
            "hardy",
            ParamSet {
                alpha: Some(alpha),
                gamma: Some(gamma),
                ..Default::default()
            },
            (0.5 * (q + alpha - 2.0)).powi(2),
        ),
        SweepInequality::Rellich { alpha } => (
            "rellich",
            ParamSet {
                alpha: Some(alpha),
                ..Default::default()
            },
            (q + alpha - 4.0).powi(2) * (q - alpha).powi(2) / 16.0,
        ),
    };
    Ok(SweepResult {
        inequality: name.into(),
        group: g.label(),
        params,
        points,
        limit: c0,
        limit_sigma,
        residual,
        sharp_constant: sharp,
    })
}
