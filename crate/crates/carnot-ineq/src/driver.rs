//! Batch driver: load a group spec and a run manifest, execute a
//! verification suite, and emit deterministic CSV and JSON reports.
//!
//! Output contract: `report.csv` has one row per check with the fixed column
//! order documented in the README; `report.json` carries the full provenance
//! (manifest echo, per-check rows, raw reports). Files are written to a
//! temporary name and renamed, so a failed run leaves no partial outputs.
//! Identical manifests produce byte-identical CSV.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::fields::{bump_battery, Dilated, TestFunctionSpec};
use crate::group::{GroupKind, GroupSpec};
use crate::identities::{identity_suite, IdentityCheck};
use crate::ineq::{
    ckn_report, gaussian_equality_report, gradient_remainder_report, hardy_report,
    improved_hardy_report, interpolation_report, rellich_report, rellich_sobolev_report,
    sharpness_sweep, uncertainty_report, GapReport, QuotientReport, ReportError, SweepInequality,
    SweepResult, UncertaintyVariant, Verdict, RELLICH_SWEEP_EPS,
};
use crate::quadrature::IntegrationConfig;

/// 17 significant digits; round-trips f64 exactly and keeps CSV bytes stable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Report(#[from] ReportError),
    #[error("{0}")]
    Field(#[from] crate::fields::FieldError),
}

/// The verification suites the driver can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Hardy,
    Rellich,
    Uncertainty,
    Ckn,
    Remainder,
    Sharpness,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Hardy => "hardy",
            Suite::Rellich => "rellich",
            Suite::Uncertainty => "uncertainty",
            Suite::Ckn => "ckn",
            Suite::Remainder => "remainder",
            Suite::Sharpness => "sharpness",
            Suite::All => "all",
        }
    }
}

/// Group reference: a path to a JSON group file, or the spec inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    Path(PathBuf),
    Inline(GroupKind),
}

fn default_alpha() -> Vec<f64> {
    vec![0.0]
}
fn default_gamma() -> Vec<f64> {
    vec![0.0]
}
fn default_s() -> Vec<f64> {
    vec![1.0]
}
fn default_q() -> Vec<f64> {
    vec![1.5]
}
fn default_eps() -> Vec<f64> {
    vec![0.5, 0.2, 0.1, 0.05]
}
fn default_out() -> PathBuf {
    PathBuf::from("reports")
}

/// Everything a batch run needs; serializable for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub group: GroupSource,
    pub suite: Suite,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: Vec<f64>,
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    #[serde(default = "default_q")]
    pub q: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub shells: Option<u32>,
    /// Battery size for random-bump checks (default 20).
    #[serde(default)]
    pub battery: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

impl RunManifest {
    fn validate(&self) -> Result<(), DriverError> {
        for (name, grid) in [
            ("alpha", &self.alpha),
            ("gamma", &self.gamma),
            ("s", &self.s),
            ("q", &self.q),
            ("eps", &self.eps),
        ] {
            if grid.is_empty() {
                return Err(DriverError::InvalidManifest(format!(
                    "parameter grid `{name}` is empty"
                )));
            }
            if grid.iter().any(|x| !x.is_finite()) {
                return Err(DriverError::InvalidManifest(format!(
                    "parameter grid `{name}` contains non-finite values"
                )));
            }
        }
        if let Some(b) = self.battery {
            if b == 0 {
                return Err(DriverError::InvalidManifest("battery size is zero".into()));
            }
        }
        Ok(())
    }

    fn load_group(&self) -> Result<GroupSpec, DriverError> {
        match &self.group {
            GroupSource::Path(path) => {
                let text = fs::read_to_string(path).map_err(|source| DriverError::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    DriverError::InvalidManifest(format!(
                        "group file {}: {e}",
                        path.display()
                    ))
                })
            }
            GroupSource::Inline(kind) => GroupSpec::new(kind.clone())
                .map_err(|e| DriverError::InvalidManifest(format!("inline group: {e}"))),
        }
    }
}

/// One CSV row. Column order is fixed:
/// suite,check,group,alpha,gamma,s,q,eps,extra,value,sigma,reference,verdict,samples,seed
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub group: String,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub s: Option<f64>,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub extra: String,
    pub value: f64,
    pub sigma: f64,
    pub reference: Option<f64>,
    pub verdict: Verdict,
    pub samples: u64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "suite,check,group,alpha,gamma,s,q,eps,extra,value,sigma,reference,verdict,samples,seed";

impl CheckRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.suite,
            self.check,
            self.group,
            fmt_opt(self.alpha),
            fmt_opt(self.gamma),
            fmt_opt(self.s),
            fmt_opt(self.q),
            fmt_opt(self.eps),
            self.extra,
            fmt_f64(self.value),
            fmt_f64(self.sigma),
            fmt_opt(self.reference),
            self.verdict.as_str(),
            self.samples,
            self.seed
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub group: String,
    pub suite: Suite,
    pub checks: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
}

/// Outcome of a run: summary plus the emitted artifact paths.
#[derive(Debug)]
pub struct RunOutput {
    pub summary: SuiteSummary,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub rows: Vec<CheckRow>,
}

struct Runner<'a> {
    g: GroupSpec,
    m: &'a RunManifest,
    rows: Vec<CheckRow>,
    reports: Vec<Value>,
}

impl<'a> Runner<'a> {
    fn cfg(&self, member: u64) -> IntegrationConfig {
        let mut cfg = IntegrationConfig::default_for(&self.g, self.m.seed);
        if let Some(samples) = self.m.samples {
            cfg.method = crate::quadrature::Method::StratifiedMc {
                samples_per_shell: samples,
            };
        }
        if let Some(shells) = self.m.shells {
            cfg.shells = shells;
        }
        cfg.seed = self.m.seed.wrapping_add(member.wrapping_mul(0x9e37_79b9));
        cfg
    }

    fn battery(&self) -> Vec<TestFunctionSpec> {
        bump_battery(&self.g, self.m.battery.unwrap_or(20), self.m.seed)
    }

    fn push_quotient(&mut self, suite: Suite, check: &str, mut rep: QuotientReport, spec: Option<&TestFunctionSpec>) {
        rep.field_spec = spec.cloned();
        self.rows.push(CheckRow {
            suite: suite.as_str().into(),
            check: check.into(),
            group: rep.group.clone(),
            alpha: rep.params.alpha,
            gamma: rep.params.gamma,
            s: rep.params.s,
            q: rep.params.q,
            eps: rep.params.eps,
            extra: rep
                .params
                .variant
                .clone()
                .map(|v| format!("variant={v}"))
                .into_iter()
                .chain(rep.params.beta.map(|b| format!("beta={}", fmt_f64(b))))
                .collect::<Vec<_>>()
                .join(";"),
            value: rep.quotient,
            sigma: rep.sigma,
            reference: rep.sharp_constant,
            verdict: rep.verdict,
            samples: rep.lhs.samples + rep.rhs.samples,
            seed: rep.config.seed,
        });
        self.reports.push(serde_json::to_value(&rep).unwrap());
    }

    fn push_gap(&mut self, suite: Suite, check: &str, mut rep: GapReport, spec: Option<&TestFunctionSpec>) {
        rep.field_spec = spec.cloned();
        self.rows.push(CheckRow {
            suite: suite.as_str().into(),
            check: check.into(),
            group: rep.group.clone(),
            alpha: rep.params.alpha,
            gamma: rep.params.gamma,
            s: rep.params.s,
            q: rep.params.q,
            eps: rep.params.eps,
            extra: rep
                .params
                .radius
                .map(|r| format!("radius={}", fmt_f64(r)))
                .unwrap_or_default(),
            value: rep.gap,
            sigma: rep.sigma,
            reference: Some(0.0),
            verdict: rep.verdict,
            samples: rep.numerator.samples + rep.denominator.samples,
            seed: rep.config.seed,
        });
        self.reports.push(serde_json::to_value(&rep).unwrap());
    }

    fn push_sweep(&mut self, suite: Suite, rep: SweepResult, seed: u64) {
        // The extrapolated limit carries fit noise plus a small schedule bias
        // budget; holds when within 3σ of the sharp constant under that.
        let eff_sigma = rep.limit_sigma + 0.02 * rep.sharp_constant;
        let verdict = Verdict::equality(rep.limit, rep.sharp_constant, eff_sigma);
        self.rows.push(CheckRow {
            suite: suite.as_str().into(),
            check: format!("sharpness-{}", rep.inequality),
            group: rep.group.clone(),
            alpha: rep.params.alpha,
            gamma: rep.params.gamma,
            s: None,
            q: None,
            eps: rep.points.last().map(|p| p.eps),
            extra: format!("residual={}", fmt_f64(rep.residual)),
            value: rep.limit,
            sigma: rep.limit_sigma,
            reference: Some(rep.sharp_constant),
            verdict,
            samples: 0,
            seed,
        });
        self.reports.push(serde_json::to_value(&rep).unwrap());
    }

    fn push_identity(&mut self, check: IdentityCheck) {
        self.rows.push(CheckRow {
            suite: Suite::Identities.as_str().into(),
            check: check.name.clone(),
            group: check.group.clone(),
            alpha: None,
            gamma: None,
            s: None,
            q: None,
            eps: None,
            extra: String::new(),
            value: check.max_rel_dev,
            sigma: 0.0,
            reference: Some(check.tolerance),
            verdict: if check.pass {
                Verdict::Holds
            } else {
                Verdict::Violated
            },
            samples: check.points as u64,
            seed: self.m.seed,
        });
        self.reports.push(serde_json::to_value(&check).unwrap());
    }

    fn q(&self) -> f64 {
        self.g.homogeneous_dim()
    }

    /// Variants whose left integrand carries |∇N|^{-2} are only finite for
    /// generic test fields when the horizontal dimension is ≥ 3 (the axis
    /// singularity |v|^{-2} is otherwise non-integrable).
    fn inverse_weight_ok(&self) -> bool {
        self.g.horizontal_dim() >= 3
            || matches!(self.g.kind(), GroupKind::Abelian { .. })
    }

    fn run_identities(&mut self) {
        for check in identity_suite(&self.g, self.m.seed) {
            self.push_identity(check);
        }
    }

    fn run_hardy(&mut self) -> Result<(), DriverError> {
        let battery = self.battery();
        let mut member = 0u64;
        for &alpha in &self.m.alpha {
            if self.q() + alpha - 2.0 <= 0.0 {
                continue;
            }
            for &gamma in &self.m.gamma {
                if gamma != 0.0 && gamma <= -1.0 {
                    continue;
                }
                for spec in &battery {
                    let field = spec.build(&self.g)?;
                    let cfg = self.cfg(member);
                    member += 1;
                    let rep = hardy_report(&self.g, alpha, gamma, &field, &cfg)?;
                    self.push_quotient(Suite::Hardy, "hardy-battery", rep, Some(spec));
                }
            }
        }
        Ok(())
    }

    fn run_rellich(&mut self) -> Result<(), DriverError> {
        let battery = self.battery();
        let mut member = 0u64;
        for &alpha in &self.m.alpha {
            if self.q() + alpha - 4.0 <= 0.0 {
                continue;
            }
            for spec in &battery {
                let field = spec.build(&self.g)?;
                let cfg = self.cfg(member);
                member += 1;
                let rep = rellich_report(&self.g, alpha, &field, &cfg)?;
                self.push_quotient(Suite::Rellich, "rellich-battery", rep, Some(spec));
            }
        }
        Ok(())
    }

    fn run_uncertainty(&mut self) -> Result<(), DriverError> {
        let battery = self.battery();
        let mut member = 0u64;
        let mut variants: Vec<(UncertaintyVariant, f64)> = Vec::new();
        if self.inverse_weight_ok() {
            variants.push((UncertaintyVariant::GradWeighted, 0.0));
        }
        variants.push((UncertaintyVariant::NormWeighted, 0.0));
        for &alpha in &self.m.alpha {
            if self.q() + alpha - 4.0 > 0.0 && self.inverse_weight_ok() {
                variants.push((UncertaintyVariant::RellichFourMinusAlpha, alpha));
                variants.push((UncertaintyVariant::RellichNorm, alpha));
            }
        }
        for (variant, alpha) in variants {
            for spec in &battery {
                let field = spec.build(&self.g)?;
                let cfg = self.cfg(member);
                member += 1;
                let rep = uncertainty_report(&self.g, variant, alpha, &field, &cfg)?;
                self.push_quotient(
                    Suite::Uncertainty,
                    &format!("uncertainty-{}", variant.label()),
                    rep,
                    Some(spec),
                );
            }
        }
        for (i, beta) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let cfg = self.cfg(member + i as u64);
            let rep = gaussian_equality_report(&self.g, beta, &cfg)?;
            self.push_quotient(Suite::Uncertainty, "gaussian-equality", rep, None);
        }
        Ok(())
    }

    fn run_ckn(&mut self) -> Result<(), DriverError> {
        let battery = self.battery();
        let mut member = 0u64;
        for &s in &self.m.s {
            if !(0.0..=2.0).contains(&s) {
                continue;
            }
            for &alpha in &self.m.alpha {
                if alpha != 0.0 && !(2.0 - self.q() < alpha && alpha < self.q()) {
                    continue;
                }
                for spec in &battery {
                    let field = spec.build(&self.g)?;
                    let cfg = self.cfg(member);
                    member += 1;
                    let rep = ckn_report(&self.g, s, alpha, &field, &cfg)?;
                    self.push_quotient(Suite::Ckn, "ckn-battery", rep, Some(spec));
                }
            }
            if self.q() > 4.0 && self.inverse_weight_ok() {
                for spec in &battery {
                    let field = spec.build(&self.g)?;
                    let cfg = self.cfg(member);
                    member += 1;
                    let rep = rellich_sobolev_report(&self.g, s, &field, &cfg)?;
                    self.push_quotient(Suite::Ckn, "rellich-sobolev-battery", rep, Some(spec));
                }
            }
        }
        Ok(())
    }

    fn run_remainder(&mut self) -> Result<(), DriverError> {
        let battery = self.battery();
        let ball_radius = 4.0;
        let mut member = 0u64;
        for &alpha in &self.m.alpha {
            if !(2.0 - self.q() < alpha && alpha < 2.0) {
                continue;
            }
            for spec in &battery {
                let field = spec.build(&self.g)?;
                let cfg = self.cfg(member);
                member += 1;
                let rep = improved_hardy_report(&self.g, alpha, ball_radius, &field, &cfg)?;
                self.push_gap(Suite::Remainder, "improved-hardy-battery", rep, Some(spec));
            }
            // Dilation-scaling cross-check on the first member (α = 0 only:
            // the gap scales by exactly λ² there).
            if alpha == 0.0 {
                if let Some(spec) = battery.first() {
                    let lambda = 2.0;
                    let base_field = spec.build(&self.g)?;
                    let cfg = self.cfg(member);
                    member += 1;
                    let base =
                        improved_hardy_report(&self.g, 0.0, ball_radius, &base_field, &cfg)?;
                    let dilated = Dilated::new(&self.g, spec.build(&self.g)?, lambda)?;
                    let drep = improved_hardy_report(
                        &self.g,
                        0.0,
                        ball_radius / lambda,
                        &dilated,
                        &cfg,
                    )?;
                    let ratio = drep.gap / (lambda * lambda * base.gap);
                    let sigma = ratio
                        * ((drep.sigma / drep.gap).powi(2) + (base.sigma / base.gap).powi(2))
                            .sqrt();
                    let verdict = Verdict::equality(ratio, 1.0, sigma);
                    self.rows.push(CheckRow {
                        suite: Suite::Remainder.as_str().into(),
                        check: "improved-hardy-dilation-scaling".into(),
                        group: self.g.label(),
                        alpha: Some(0.0),
                        gamma: None,
                        s: None,
                        q: None,
                        eps: None,
                        extra: format!("lambda={}", fmt_f64(lambda)),
                        value: ratio,
                        sigma,
                        reference: Some(1.0),
                        verdict,
                        samples: 0,
                        seed: cfg.seed,
                    });
                }
            }
        }
        for &qexp in &self.m.q {
            if !(1.0 < qexp && qexp < 2.0) {
                continue;
            }
            for spec in &battery {
                let field = spec.build(&self.g)?;
                let cfg = self.cfg(member);
                member += 1;
                let rep =
                    gradient_remainder_report(&self.g, qexp, ball_radius, &field, &cfg)?;
                self.push_gap(Suite::Remainder, "gradient-remainder-battery", rep, Some(spec));
            }
            for spec in &battery {
                let field = spec.build(&self.g)?;
                let cfg = self.cfg(member);
                member += 1;
                let rep = interpolation_report(&self.g, qexp, &field, &cfg)?;
                self.push_quotient(Suite::Remainder, "interpolation-battery", rep, Some(spec));
            }
        }
        Ok(())
    }

    fn run_sharpness(&mut self) -> Result<(), DriverError> {
        let mut member = 0u64;
        for &alpha in &self.m.alpha {
            if self.q() + alpha - 2.0 > 0.0 {
                for &gamma in &self.m.gamma {
                    if gamma != 0.0 && gamma <= -1.0 {
                        continue;
                    }
                    let cfg = self.cfg(member);
                    member += 1;
                    let rep = sharpness_sweep(
                        &self.g,
                        SweepInequality::Hardy { alpha, gamma },
                        &self.m.eps,
                        &cfg,
                    )?;
                    self.push_sweep(Suite::Sharpness, rep, cfg.seed);
                }
            }
            if self.q() + alpha - 4.0 > 0.0 && self.g.horizontal_dim() >= 3 {
                let cfg = self.cfg(member);
                member += 1;
                let rep = sharpness_sweep(
                    &self.g,
                    SweepInequality::Rellich { alpha },
                    &RELLICH_SWEEP_EPS,
                    &cfg,
                )?;
                self.push_sweep(Suite::Sharpness, rep, cfg.seed);
            }
        }
        Ok(())
    }

    fn run(&mut self, suite: Suite) -> Result<(), DriverError> {
        match suite {
            Suite::Identities => {
                self.run_identities();
                Ok(())
            }
            Suite::Hardy => self.run_hardy(),
            Suite::Rellich => self.run_rellich(),
            Suite::Uncertainty => self.run_uncertainty(),
            Suite::Ckn => self.run_ckn(),
            Suite::Remainder => self.run_remainder(),
            Suite::Sharpness => self.run_sharpness(),
            Suite::All => {
                self.run_identities();
                self.run_hardy()?;
                self.run_rellich()?;
                self.run_uncertainty()?;
                self.run_ckn()?;
                self.run_remainder()?;
                self.run_sharpness()
            }
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DriverError> {
    let tmp = path.with_extension("tmp");
    let io = |source| DriverError::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

/// Execute a manifest: run the suite, then atomically write `report.csv` and
/// `report.json` into the output directory.
pub fn run_suite(manifest: &RunManifest) -> Result<RunOutput, DriverError> {
    manifest.validate()?;
    let g = manifest.load_group()?;
    fs::create_dir_all(&manifest.out).map_err(|source| DriverError::Io {
        path: manifest.out.clone(),
        source,
    })?;
    let mut runner = Runner {
        g,
        m: manifest,
        rows: Vec::new(),
        reports: Vec::new(),
    };
    runner.run(manifest.suite)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &runner.rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }

    let summary = SuiteSummary {
        group: runner.g.label(),
        suite: manifest.suite,
        checks: runner.rows.len(),
        holds: runner
            .rows
            .iter()
            .filter(|r| r.verdict == Verdict::Holds)
            .count(),
        violated: runner
            .rows
            .iter()
            .filter(|r| r.verdict == Verdict::Violated)
            .count(),
        inconclusive: runner
            .rows
            .iter()
            .filter(|r| r.verdict == Verdict::Inconclusive)
            .count(),
    };

    let json = serde_json::json!({
        "manifest": manifest,
        "summary": summary,
        "checks": runner.rows,
        "reports": runner.reports,
    });

    let csv_path = manifest.out.join("report.csv");
    let json_path = manifest.out.join("report.json");
    write_atomic(&csv_path, csv.as_bytes())?;
    write_atomic(
        &json_path,
        serde_json::to_string_pretty(&json).unwrap().as_bytes(),
    )?;

    Ok(RunOutput {
        summary,
        csv_path,
        json_path,
        rows: runner.rows,
    })
}
