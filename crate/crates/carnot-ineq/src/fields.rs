//! Library of admissible test fields φ ∈ C²(G∖{0}) with compact support in
//! the homogeneous norm, plus mollified versions of the near-extremal
//! families used in sharpness sweeps.
//!
//! Every field reports a support annulus {inner ≤ N ≤ outer}; evaluation
//! outside returns the exact zero jet. Fields are descriptor-built so a
//! battery is reproducible from its serialized [`TestFunctionSpec`]s.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::norm_jet;
use crate::dual::Dual2;
use crate::group::{GroupSpec, Point};
use crate::profile::Profile1D;

/// Inner radius of the smooth cut that keeps extremizer integrands bounded;
/// the induced quotient error vanishes as this goes to 0.
pub const EXTREMIZER_INNER_RADIUS: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("group error: {0}")]
    Group(#[from] crate::group::GroupError),
}

/// Support annulus {inner ≤ N ≤ outer} in the homogeneous norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub inner: f64,
    pub outer: f64,
}

impl Support {
    pub fn annulus(inner: f64, outer: f64) -> Self {
        Support { inner, outer }
    }

    pub fn unbounded() -> Self {
        Support {
            inner: 0.0,
            outer: f64::INFINITY,
        }
    }

    pub fn contains(&self, n: f64) -> bool {
        n >= self.inner && n <= self.outer
    }
}

/// An evaluable scalar field returning second-order coordinate jets.
pub trait ScalarField: Sync {
    fn support(&self) -> Support;

    /// Full coordinate 2-jet at x (value, ∂φ, ∂²φ).
    fn coord_jet(&self, x: &Point) -> Dual2;

    /// Plain value; fields override this with a derivative-free fast path.
    fn value(&self, x: &Point) -> f64 {
        self.coord_jet(x).value()
    }
}

/// Wrap a closure as a field (test oracles, ad-hoc battery members).
pub struct FnField<F> {
    support: Support,
    f: F,
}

impl<F: Fn(&Point) -> Dual2 + Sync> FnField<F> {
    pub fn new(support: Support, f: F) -> Self {
        FnField { support, f }
    }
}

impl<F: Fn(&Point) -> Dual2 + Sync> ScalarField for FnField<F> {
    fn support(&self) -> Support {
        self.support
    }

    fn coord_jet(&self, x: &Point) -> Dual2 {
        (self.f)(x)
    }
}

/// Serializable descriptor of a test field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunctionSpec {
    AnnularBump {
        r_inner: f64,
        r_outer: f64,
        #[serde(default)]
        angular_v: Vec<f64>,
        #[serde(default)]
        angular_z: Vec<f64>,
    },
    GaussianInNorm {
        beta: f64,
    },
    HardyExtremizer {
        alpha: f64,
        eps: f64,
        delta: f64,
        r_cut: f64,
    },
    RellichExtremizer {
        alpha: f64,
        eps: f64,
        delta: f64,
        r_cut: f64,
    },
    /// A radial base modulated by (1 + Σᵢ cᵢ vᵢ/N + Σₐ dₐ zₐ/N²).
    ProductModulated {
        base: Box<TestFunctionSpec>,
        angular_v: Vec<f64>,
        angular_z: Vec<f64>,
    },
}

impl TestFunctionSpec {
    pub fn build(&self, g: &GroupSpec) -> Result<RadialField, FieldError> {
        let q = g.homogeneous_dim();
        match self {
            TestFunctionSpec::AnnularBump {
                r_inner,
                r_outer,
                angular_v,
                angular_z,
            } => {
                if !(*r_inner > 0.0 && r_inner < r_outer) {
                    return Err(FieldError::InvalidParameter(format!(
                        "annular bump needs 0 < r_inner < r_outer, got [{r_inner}, {r_outer}]"
                    )));
                }
                RadialField::new(
                    g,
                    Profile1D::bump(*r_inner, *r_outer),
                    angular_v.clone(),
                    angular_z.clone(),
                    self.clone(),
                )
            }
            TestFunctionSpec::GaussianInNorm { beta } => {
                if !(*beta > 0.0) {
                    return Err(FieldError::InvalidParameter(format!(
                        "gaussian rate must be positive, got {beta}"
                    )));
                }
                RadialField::new(g, Profile1D::gaussian(*beta), vec![], vec![], self.clone())
            }
            TestFunctionSpec::HardyExtremizer {
                alpha,
                eps,
                delta,
                r_cut,
            } => {
                if q + alpha - 2.0 <= 0.0 {
                    return Err(FieldError::Hypothesis(format!(
                        "need Q + α − 2 > 0, got Q = {q}, α = {alpha}"
                    )));
                }
                check_extremizer_params(*eps, *delta, *r_cut)?;
                let expo = 0.5 * (q + alpha - 2.0) + eps;
                RadialField::new(
                    g,
                    Profile1D::hardy_extremizer(expo, EXTREMIZER_INNER_RADIUS, *delta, *r_cut),
                    vec![],
                    vec![],
                    self.clone(),
                )
            }
            TestFunctionSpec::RellichExtremizer {
                alpha,
                eps,
                delta,
                r_cut,
            } => {
                if q + alpha - 4.0 <= 0.0 {
                    return Err(FieldError::Hypothesis(format!(
                        "need Q + α − 4 > 0, got Q = {q}, α = {alpha}"
                    )));
                }
                check_extremizer_params(*eps, *delta, *r_cut)?;
                let expo = 0.5 * (q + alpha - 4.0) + eps;
                RadialField::new(
                    g,
                    Profile1D::rellich_extremizer(expo, EXTREMIZER_INNER_RADIUS, *delta, *r_cut),
                    vec![],
                    vec![],
                    self.clone(),
                )
            }
            TestFunctionSpec::ProductModulated {
                base,
                angular_v,
                angular_z,
            } => {
                let inner = base.build(g)?;
                RadialField::new(
                    g,
                    inner.profile,
                    angular_v.clone(),
                    angular_z.clone(),
                    self.clone(),
                )
            }
        }
    }
}

fn check_extremizer_params(eps: f64, delta: f64, r_cut: f64) -> Result<(), FieldError> {
    if !(eps > 0.0) {
        return Err(FieldError::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(FieldError::InvalidParameter(format!(
            "delta must lie in (0, 1/2), got {delta}"
        )));
    }
    if !(r_cut > 2.0) {
        return Err(FieldError::InvalidParameter(format!(
            "outer cutoff radius must exceed 2, got {r_cut}"
        )));
    }
    Ok(())
}

/// φ(x) = f(N(x)) · (1 + Σᵢ cᵢ vᵢ/N + Σₐ dₐ zₐ/N²), with f a piecewise C²
/// profile. The angular factor is 0-homogeneous and smooth away from 0.
pub struct RadialField {
    group: GroupSpec,
    profile: Profile1D,
    angular_v: Vec<f64>,
    angular_z: Vec<f64>,
    support: Support,
    spec: TestFunctionSpec,
}

impl RadialField {
    fn new(
        g: &GroupSpec,
        profile: Profile1D,
        angular_v: Vec<f64>,
        angular_z: Vec<f64>,
        spec: TestFunctionSpec,
    ) -> Result<Self, FieldError> {
        if angular_v.len() > g.horizontal_dim() || angular_z.len() > g.vertical_dim() {
            return Err(FieldError::InvalidParameter(
                "more angular coefficients than coordinates".into(),
            ));
        }
        let total: f64 = angular_v.iter().chain(angular_z.iter()).map(|c| c.abs()).sum();
        if total >= 0.95 {
            return Err(FieldError::InvalidParameter(format!(
                "angular modulation too large (Σ|c| = {total} ≥ 0.95); field could change sign"
            )));
        }
        let support = Support::annulus(profile.inner(), profile.outer());
        Ok(RadialField {
            group: g.clone(),
            profile,
            angular_v,
            angular_z,
            support,
            spec,
        })
    }

    pub fn spec(&self) -> &TestFunctionSpec {
        &self.spec
    }

    pub fn profile(&self) -> &Profile1D {
        &self.profile
    }

    fn has_angular(&self) -> bool {
        !self.angular_v.is_empty() || !self.angular_z.is_empty()
    }

    fn angular_value(&self, x: &Point, n: f64) -> f64 {
        let mut a = 1.0;
        for (i, c) in self.angular_v.iter().enumerate() {
            a += c * x.coord(i) / n;
        }
        let m = self.group.horizontal_dim();
        let n2 = n * n;
        for (i, c) in self.angular_z.iter().enumerate() {
            a += c * x.coord(m + i) / n2;
        }
        a
    }
}

impl ScalarField for RadialField {
    fn support(&self) -> Support {
        self.support
    }

    fn coord_jet(&self, x: &Point) -> Dual2 {
        let nvars = self.group.dim();
        let n_plain = self.group.norm(x);
        if !self.support.contains(n_plain) {
            return Dual2::constant(0.0, nvars);
        }
        if n_plain == 0.0 {
            // Only norm-Gaussians reach the origin; value 1, and the jet of
            // N² is not defined there (the norm is merely continuous at 0).
            return Dual2::constant(self.profile.value(0.0), nvars);
        }
        let n_jet = norm_jet(&self.group, x);
        let (f, f1, f2) = self.profile.eval2(n_plain);
        let base = n_jet.chain(f, f1, f2);
        if !self.has_angular() {
            return base;
        }
        let inv_n = n_jet.recip();
        let mut ang = Dual2::constant(1.0, nvars);
        for (i, c) in self.angular_v.iter().enumerate() {
            if *c != 0.0 {
                ang = ang + Dual2::variable(x.coord(i), i, nvars) * inv_n * *c;
            }
        }
        let m = self.group.horizontal_dim();
        if !self.angular_z.is_empty() {
            let inv_n2 = inv_n * inv_n;
            for (i, c) in self.angular_z.iter().enumerate() {
                if *c != 0.0 {
                    ang = ang + Dual2::variable(x.coord(m + i), m + i, nvars) * inv_n2 * *c;
                }
            }
        }
        base * ang
    }

    fn value(&self, x: &Point) -> f64 {
        let n = self.group.norm(x);
        if !self.support.contains(n) {
            return 0.0;
        }
        if n == 0.0 {
            return self.profile.value(0.0);
        }
        let f = self.profile.value(n);
        if self.has_angular() {
            f * self.angular_value(x, n)
        } else {
            f
        }
    }
}

/// φ ∘ δ_λ: the inner field precomposed with a dilation. Support shrinks by
/// 1/λ; jets pull back with weight λ on horizontal and λ² on vertical slots.
pub struct Dilated<F> {
    inner: F,
    lambda: f64,
    weights: Vec<f64>,
}

impl<F: ScalarField> Dilated<F> {
    pub fn new(g: &GroupSpec, inner: F, lambda: f64) -> Result<Self, FieldError> {
        if !(lambda > 0.0) {
            return Err(FieldError::InvalidParameter(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let mut weights = vec![lambda; g.dim()];
        for w in weights.iter_mut().skip(g.horizontal_dim()) {
            *w = lambda * lambda;
        }
        Ok(Dilated {
            inner,
            lambda,
            weights,
        })
    }

    fn push(&self, x: &Point) -> Point {
        x.dilated(self.lambda)
    }
}

impl<F: ScalarField> ScalarField for Dilated<F> {
    fn support(&self) -> Support {
        let s = self.inner.support();
        Support::annulus(s.inner / self.lambda, s.outer / self.lambda)
    }

    fn coord_jet(&self, x: &Point) -> Dual2 {
        let y = self.push(x);
        self.inner.coord_jet(&y).scale_coords(&self.weights)
    }

    fn value(&self, x: &Point) -> f64 {
        self.inner.value(&self.push(x))
    }
}

/// Deterministic battery of product-modulated annular bumps.
pub fn bump_battery(g: &GroupSpec, count: usize, seed: u64) -> Vec<TestFunctionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    (0..count)
        .map(|_| {
            let r_inner = rng.gen_range(0.05..0.3);
            let r_outer = rng.gen_range(1.2..3.0);
            let angular_v: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.1..0.1)).collect();
            let angular_z: Vec<f64> = (0..k).map(|_| rng.gen_range(-0.1..0.1)).collect();
            TestFunctionSpec::AnnularBump {
                r_inner,
                r_outer,
                angular_v,
                angular_z,
            }
        })
        .collect()
}

/// Convenience constructors mirroring the descriptor variants.
pub fn make_annular_bump(
    g: &GroupSpec,
    r_inner: f64,
    r_outer: f64,
    angular_v: Vec<f64>,
    angular_z: Vec<f64>,
) -> Result<RadialField, FieldError> {
    TestFunctionSpec::AnnularBump {
        r_inner,
        r_outer,
        angular_v,
        angular_z,
    }
    .build(g)
}

pub fn make_hardy_extremizer(
    g: &GroupSpec,
    alpha: f64,
    eps: f64,
    delta: f64,
    r_cut: f64,
) -> Result<RadialField, FieldError> {
    TestFunctionSpec::HardyExtremizer {
        alpha,
        eps,
        delta,
        r_cut,
    }
    .build(g)
}

pub fn make_rellich_extremizer(
    g: &GroupSpec,
    alpha: f64,
    eps: f64,
    delta: f64,
    r_cut: f64,
) -> Result<RadialField, FieldError> {
    TestFunctionSpec::RellichExtremizer {
        alpha,
        eps,
        delta,
        r_cut,
    }
    .build(g)
}

pub fn make_gaussian_in_norm(g: &GroupSpec, beta: f64) -> Result<RadialField, FieldError> {
    TestFunctionSpec::GaussianInNorm { beta }.build(g)
}
