//! Weighted integration over Haar measure (Lebesgue measure in exponential
//! coordinates) with norm-shell stratification.
//!
//! The integration domain is a norm annulus {r₀ ≤ N ≤ R}, split into
//! log-spaced shells. Each shell is sampled by rejection from the enclosing
//! anisotropic coordinate box {|v|∞ ≤ s, |z|∞ ≤ s²}; the per-shell estimate
//! is the box mean of f·1_shell times the box volume, which is unbiased
//! without knowing shell volumes. Per-shell random streams derive from
//! (seed, salt, shell index), so results are bit-identical for a fixed
//! configuration regardless of evaluation order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::Support;
use crate::group::{GroupSpec, Point};

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("invalid integration config: {0}")]
    InvalidConfig(String),
    #[error("invalid support annulus [{inner}, {outer}]")]
    InvalidSupport { inner: f64, outer: f64 },
    #[error("integrand returned a non-finite value at N = {norm}")]
    NonFinite { norm: f64 },
    #[error("no accepted samples in shell {index} = [{lo}, {hi}]; degenerate shell geometry or too few samples")]
    EmptyShell { index: usize, lo: f64, hi: f64 },
    #[error("tensor grid supports dimension ≤ 3, group has dimension {0}")]
    GridDimension(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    StratifiedMc { samples_per_shell: u64 },
    TensorGrid { points_per_axis: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    #[serde(flatten)]
    pub method: Method,
    /// Number of log-spaced norm shells covering the support annulus.
    pub shells: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_rel_error: Option<f64>,
}

impl IntegrationConfig {
    pub fn mc(samples_per_shell: u64, shells: u32, seed: u64) -> Self {
        IntegrationConfig {
            method: Method::StratifiedMc { samples_per_shell },
            shells,
            seed,
            target_rel_error: None,
        }
    }

    pub fn grid(points_per_axis: u32, shells: u32) -> Self {
        IntegrationConfig {
            method: Method::TensorGrid { points_per_axis },
            shells,
            seed: 0,
            target_rel_error: None,
        }
    }

    /// Spec defaults: 32 shells; 2×10⁵ samples per shell up to dimension 5,
    /// 10⁶ above.
    pub fn default_for(g: &GroupSpec, seed: u64) -> Self {
        let samples = if g.dim() <= 5 { 200_000 } else { 1_000_000 };
        Self::mc(samples, 32, seed)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.shells == 0 {
            return Err(QuadratureError::InvalidConfig("need at least one shell".into()));
        }
        match self.method {
            Method::StratifiedMc { samples_per_shell } => {
                if samples_per_shell < 100 {
                    return Err(QuadratureError::InvalidConfig(format!(
                        "need at least 100 samples per shell, got {samples_per_shell}"
                    )));
                }
            }
            Method::TensorGrid { points_per_axis } => {
                if points_per_axis < 2 {
                    return Err(QuadratureError::InvalidConfig(format!(
                        "need at least 2 grid points per axis, got {points_per_axis}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-shell bookkeeping: estimate, variance and rejection-sampling odds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShellStat {
    pub lo: f64,
    pub hi: f64,
    pub box_volume: f64,
    pub samples: u64,
    pub accepted: u64,
    pub estimate: f64,
    pub variance: f64,
}

/// A quadrature result with standard-error and sample-count metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub shells: Vec<ShellStat>,
}

impl IntegralEstimate {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.std_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.std_error / self.value).abs()
        }
    }

    /// `value,std_error,samples` with full float precision.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            crate::driver::fmt_f64(self.value),
            crate::driver::fmt_f64(self.std_error),
            self.samples
        )
    }

    /// True when both estimates agree within `k` combined standard errors.
    pub fn agrees_with(&self, other: &IntegralEstimate, k: f64) -> bool {
        let tol = k * (self.std_error.powi(2) + other.std_error.powi(2)).sqrt();
        (self.value - other.value).abs() <= tol.max(1e-300)
    }
}

/// splitmix64; used to derive per-shell ChaCha keys.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn shell_rng(seed: u64, salt: u64, shell: u64) -> ChaCha8Rng {
    let a = mix(seed ^ 0x6a09_e667_f3bc_c908);
    let b = mix(a ^ salt);
    let c = mix(b ^ shell);
    let d = mix(c);
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&a.to_le_bytes());
    key[8..16].copy_from_slice(&b.to_le_bytes());
    key[16..24].copy_from_slice(&c.to_le_bytes());
    key[24..32].copy_from_slice(&d.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Log-spaced shell edges over the annulus. When the annulus reaches 0 the
/// innermost shell is the ball [0, 10⁻³·R]; its volume fraction is ≤ 10⁻³Q.
pub fn shell_edges(support: &Support, shells: u32) -> Result<Vec<f64>, QuadratureError> {
    let (inner, outer) = (support.inner, support.outer);
    if !(outer.is_finite() && outer > inner && inner >= 0.0) {
        return Err(QuadratureError::InvalidSupport { inner, outer });
    }
    let l = shells as usize;
    let mut edges = Vec::with_capacity(l + 1);
    if inner > 0.0 {
        let ratio = outer / inner;
        for i in 0..=l {
            edges.push(inner * ratio.powf(i as f64 / l as f64));
        }
    } else if l == 1 {
        edges.push(0.0);
        edges.push(outer);
    } else {
        edges.push(0.0);
        let lo = outer * 1e-3;
        for j in 0..l {
            edges.push(lo * 1e3f64.powf(j as f64 / (l - 1) as f64));
        }
    }
    // Exact endpoints.
    edges[0] = inner;
    edges[l] = outer;
    Ok(edges)
}

struct ShellBox {
    half_v: f64,
    half_z: f64,
    volume: f64,
}

fn shell_box(g: &GroupSpec, hi: f64) -> ShellBox {
    let m = g.horizontal_dim() as i32;
    let k = g.vertical_dim() as i32;
    let half_v = hi;
    let half_z = hi * hi;
    let volume = (2.0 * half_v).powi(m) * (2.0 * half_z).powi(k);
    ShellBox {
        half_v,
        half_z,
        volume,
    }
}

/// Stratified integral of `f` over the annulus {inner ≤ N ≤ outer}.
///
/// `salt` decorrelates the random streams of different integrals evaluated
/// under the same seed (e.g. the two sides of a quotient).
pub fn integrate(
    g: &GroupSpec,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    support: Support,
    cfg: &IntegrationConfig,
    salt: u64,
) -> Result<IntegralEstimate, QuadratureError> {
    cfg.validate()?;
    let edges = shell_edges(&support, cfg.shells)?;
    let mut stats = Vec::with_capacity(cfg.shells as usize);
    for i in 0..cfg.shells as usize {
        let (lo, hi) = (edges[i], edges[i + 1]);
        let stat = match cfg.method {
            Method::StratifiedMc { samples_per_shell } => {
                mc_shell(g, f, lo, hi, samples_per_shell, cfg.seed, salt, i)?
            }
            Method::TensorGrid { points_per_axis } => {
                grid_shell(g, f, lo, hi, points_per_axis)?
            }
        };
        stats.push(stat);
    }
    let value = stats.iter().map(|s| s.estimate).sum();
    let std_error = stats.iter().map(|s| s.variance).sum::<f64>().sqrt();
    let samples = stats.iter().map(|s| s.samples).sum();
    Ok(IntegralEstimate {
        value,
        std_error,
        samples,
        shells: stats,
    })
}

fn mc_shell(
    g: &GroupSpec,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    lo: f64,
    hi: f64,
    samples: u64,
    seed: u64,
    salt: u64,
    index: usize,
) -> Result<ShellStat, QuadratureError> {
    let sbox = shell_box(g, hi);
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    let mut rng = shell_rng(seed, salt, index as u64);
    let mut coords = [0.0f64; crate::group::MAX_DIM];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut accepted = 0u64;
    for _ in 0..samples {
        for c in coords[..m].iter_mut() {
            *c = sbox.half_v * (2.0 * rng.gen::<f64>() - 1.0);
        }
        for c in coords[m..m + k].iter_mut() {
            *c = sbox.half_z * (2.0 * rng.gen::<f64>() - 1.0);
        }
        let p = g.point_from_coords(&coords[..m + k]);
        let n = g.norm(&p);
        let val = if n >= lo && n < hi {
            accepted += 1;
            let fv = f(&p);
            if !fv.is_finite() {
                return Err(QuadratureError::NonFinite { norm: n });
            }
            fv
        } else {
            0.0
        };
        sum += val;
        sum_sq += val * val;
    }
    if accepted == 0 {
        return Err(QuadratureError::EmptyShell { index, lo, hi });
    }
    let msamp = samples as f64;
    let mean = sum / msamp;
    let var_sample = ((sum_sq / msamp - mean * mean) * msamp / (msamp - 1.0)).max(0.0);
    Ok(ShellStat {
        lo,
        hi,
        box_volume: sbox.volume,
        samples,
        accepted,
        estimate: sbox.volume * mean,
        variance: sbox.volume * sbox.volume * var_sample / msamp,
    })
}

/// Fraction of the cell centred at `coords` inside the shell, estimated on a
/// sub-grid of norm evaluations (boundary cells only).
fn cell_shell_fraction(
    g: &GroupSpec,
    coords: &[f64],
    half_cell: &[f64],
    lo: f64,
    hi: f64,
) -> f64 {
    const SUB: usize = 4;
    let n_dims = coords.len();
    let mut sub = [0.0f64; crate::group::MAX_DIM];
    let mut idx = [0usize; crate::group::MAX_DIM];
    let mut inside = 0u32;
    let total = (SUB as u32).pow(n_dims as u32);
    loop {
        for d in 0..n_dims {
            let h = 2.0 * half_cell[d] / SUB as f64;
            sub[d] = coords[d] - half_cell[d] + (idx[d] as f64 + 0.5) * h;
        }
        let p = g.point_from_coords(&sub[..n_dims]);
        let n = g.norm(&p);
        if n >= lo && n < hi {
            inside += 1;
        }
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < SUB {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n_dims {
                return f64::from(inside) / f64::from(total);
            }
        }
    }
}

fn grid_pass(
    g: &GroupSpec,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    lo: f64,
    hi: f64,
    res: u32,
) -> Result<(f64, u64), QuadratureError> {
    let sbox = shell_box(g, hi);
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    let n_dims = m + k;
    let res = res as usize;
    let total = (res as u64).pow(n_dims as u32);
    let cell = sbox.volume / total as f64;
    let mut half_cell = [0.0f64; crate::group::MAX_DIM];
    for (d, hc) in half_cell[..n_dims].iter_mut().enumerate() {
        let half = if d < m { sbox.half_v } else { sbox.half_z };
        *hc = half / res as f64;
    }
    // |∂N/∂v| ≤ 1 and |∂N/∂z| ≤ 2/N on these groups, giving a conservative
    // bound on the norm variation across one cell.
    let dv: f64 = half_cell[..m].iter().sum();
    let dz: f64 = half_cell[m..n_dims].iter().sum();
    let mut coords = [0.0f64; crate::group::MAX_DIM];
    let mut idx = [0usize; crate::group::MAX_DIM];
    let mut acc = 0.0;
    loop {
        for d in 0..n_dims {
            let half = if d < m { sbox.half_v } else { sbox.half_z };
            coords[d] = -half + (2.0 * idx[d] as f64 + 1.0) * half_cell[d];
        }
        let p = g.point_from_coords(&coords[..n_dims]);
        let n = g.norm(&p);
        let margin = if k == 0 {
            dv
        } else {
            let n_low = n - dv;
            if n_low <= 0.0 {
                f64::INFINITY
            } else {
                dv + 2.0 * dz / n_low
            }
        };
        let weight = if n - margin >= lo && n + margin < hi {
            1.0
        } else if n + margin < lo || n - margin >= hi {
            0.0
        } else {
            cell_shell_fraction(g, &coords[..n_dims], &half_cell[..n_dims], lo, hi)
        };
        if weight > 0.0 {
            let fv = f(&p);
            if !fv.is_finite() {
                return Err(QuadratureError::NonFinite { norm: n });
            }
            acc += weight * fv;
        }
        // Odometer increment.
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < res {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n_dims {
                return Ok((acc * cell, total));
            }
        }
    }
}

fn grid_shell(
    g: &GroupSpec,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    lo: f64,
    hi: f64,
    res: u32,
) -> Result<ShellStat, QuadratureError> {
    if g.dim() > 3 {
        return Err(QuadratureError::GridDimension(g.dim()));
    }
    // Even resolutions keep cell centres off the group origin.
    let res = res + res % 2;
    let sbox = shell_box(g, hi);
    let (fine, n_fine) = grid_pass(g, f, lo, hi, res)?;
    let (coarse, _) = grid_pass(g, f, lo, hi, (res / 2).max(2))?;
    Ok(ShellStat {
        lo,
        hi,
        box_volume: sbox.volume,
        samples: n_fine,
        accepted: n_fine,
        estimate: fine,
        variance: (fine - coarse) * (fine - coarse),
    })
}

/// Monte Carlo estimate of the Haar volume of the norm ball {N < r}.
pub fn ball_volume(
    g: &GroupSpec,
    r: f64,
    cfg: &IntegrationConfig,
) -> Result<IntegralEstimate, QuadratureError> {
    integrate(
        g,
        &|_: &Point| 1.0,
        Support::annulus(0.0, r),
        cfg,
        0x8BA1_7A2E,
    )
}

/// Configuration for the Muckenhoupt A₂ scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct A2Config {
    pub balls_per_radius: u32,
    pub samples_per_ball: u32,
    pub seed: u64,
}

impl Default for A2Config {
    fn default() -> Self {
        A2Config {
            balls_per_radius: 24,
            samples_per_ball: 4000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct A2Ball {
    pub center_norm: f64,
    pub radius: f64,
    pub product: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct A2Estimate {
    /// max over sampled balls of (avg of N^α)·(avg of N^{−α}).
    pub max_product: f64,
    /// Whether α lies in the admissible window (2−Q, Q); outside it the
    /// estimate grows without bound as more balls and samples are drawn.
    pub admissible: bool,
    pub balls: Vec<A2Ball>,
}

/// Estimate the A₂ characteristic of the weight N^α over sampled norm balls.
///
/// Balls are left translates x₀·{N < r}; Haar invariance makes uniform
/// sampling of u ∈ {N < r} push forward to uniform sampling of the ball.
/// Centers include the origin (the worst case) and points with N(x₀) up to
/// a few radii.
pub fn muckenhoupt_a2_estimate(
    g: &GroupSpec,
    alpha: f64,
    radii: &[f64],
    cfg: &A2Config,
) -> Result<A2Estimate, QuadratureError> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(QuadratureError::InvalidConfig(
            "need a non-empty list of positive ball radii".into(),
        ));
    }
    if cfg.balls_per_radius == 0 || cfg.samples_per_ball == 0 {
        return Err(QuadratureError::InvalidConfig(
            "need at least one ball and one sample per ball".into(),
        ));
    }
    let q = g.homogeneous_dim();
    let mut balls = Vec::new();
    let mut max_product: f64 = 0.0;
    for (ri, &r) in radii.iter().enumerate() {
        for bi in 0..cfg.balls_per_radius {
            let mut rng = shell_rng(cfg.seed, 0xA2_5CAB ^ (ri as u64) << 32, bi as u64);
            let center = if bi == 0 {
                g.identity()
            } else {
                // Random direction at norm ~1, then dilate to a random
                // multiple of the radius (0 ⇒ near-origin centers included).
                let u = sample_in_ball(g, 1.0, &mut rng);
                let scale = rng.gen::<f64>() * 3.0 * r;
                let nu = g.norm(&u).max(1e-12);
                u.dilated(scale / nu)
            };
            let mut sum_pos = 0.0;
            let mut sum_neg = 0.0;
            for _ in 0..cfg.samples_per_ball {
                let u = sample_in_ball(g, r, &mut rng);
                let y = g
                    .multiply(&center, &u)
                    .expect("center and sample share the group layout");
                let n = g.norm(&y);
                sum_pos += n.powf(alpha);
                sum_neg += n.powf(-alpha);
            }
            let msamp = cfg.samples_per_ball as f64;
            let product = (sum_pos / msamp) * (sum_neg / msamp);
            if !product.is_finite() {
                return Err(QuadratureError::NonFinite { norm: r });
            }
            max_product = max_product.max(product);
            balls.push(A2Ball {
                center_norm: g.norm(&center),
                radius: r,
                product,
            });
        }
    }
    Ok(A2Estimate {
        max_product,
        admissible: alpha > 2.0 - q && alpha < q,
        balls,
    })
}

/// Rejection-sample a uniform point of the ball {N < r}.
fn sample_in_ball(g: &GroupSpec, r: f64, rng: &mut ChaCha8Rng) -> Point {
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    let mut coords = [0.0f64; crate::group::MAX_DIM];
    loop {
        for c in coords[..m].iter_mut() {
            *c = r * (2.0 * rng.gen::<f64>() - 1.0);
        }
        for c in coords[m..m + k].iter_mut() {
            *c = r * r * (2.0 * rng.gen::<f64>() - 1.0);
        }
        let p = g.point_from_coords(&coords[..m + k]);
        if g.norm(&p) < r {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_integrand_gives_zero_with_zero_error() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = IntegrationConfig::mc(500, 4, 7);
        let est = integrate(&g, &|_: &Point| 0.0, Support::annulus(0.0, 1.0), &cfg, 1).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn estimates_are_bit_deterministic() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = IntegrationConfig::mc(2000, 8, 42);
        let f = |p: &Point| p.horizontal()[0].powi(2) + 0.5;
        let a = integrate(&g, &f, Support::annulus(0.2, 2.0), &cfg, 9).unwrap();
        let b = integrate(&g, &f, Support::annulus(0.2, 2.0), &cfg, 9).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        // A different salt gives a different stream.
        let c = integrate(&g, &f, Support::annulus(0.2, 2.0), &cfg, 10).unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn abelian_ball_volume_matches_closed_form() {
        // vol{|x| < 1} in ℝ³ = 4π/3.
        let g = GroupSpec::abelian(3).unwrap();
        let cfg = IntegrationConfig::mc(40_000, 8, 3);
        let est = ball_volume(&g, 1.0, &cfg).unwrap();
        let exact = 4.0 * std::f64::consts::PI / 3.0;
        assert!(
            (est.value - exact).abs() < 4.0 * est.std_error,
            "got {} ± {}, want {}",
            est.value,
            est.std_error,
            exact
        );
    }

    #[test]
    fn grid_matches_mc_on_abelian_ball() {
        let g = GroupSpec::abelian(2).unwrap();
        let mc = ball_volume(&g, 1.0, &IntegrationConfig::mc(20_000, 6, 5)).unwrap();
        let grid = ball_volume(&g, 1.0, &IntegrationConfig::grid(128, 6)).unwrap();
        assert!((grid.value - std::f64::consts::PI).abs() < 2e-3);
        assert!(mc.agrees_with(&grid, 4.0));
    }

    #[test]
    fn grid_rejects_high_dimensions() {
        let g = GroupSpec::heisenberg(2).unwrap();
        let cfg = IntegrationConfig::grid(16, 2);
        assert!(matches!(
            ball_volume(&g, 1.0, &cfg),
            Err(QuadratureError::GridDimension(5))
        ));
    }

    #[test]
    fn config_validation() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = IntegrationConfig::mc(50, 4, 0);
        assert!(matches!(
            ball_volume(&g, 1.0, &cfg),
            Err(QuadratureError::InvalidConfig(_))
        ));
        let cfg = IntegrationConfig::mc(500, 0, 0);
        assert!(matches!(
            ball_volume(&g, 1.0, &cfg),
            Err(QuadratureError::InvalidConfig(_))
        ));
    }

    #[test]
    fn invalid_support_rejected() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = IntegrationConfig::mc(500, 4, 0);
        for sup in [
            Support::annulus(1.0, 0.5),
            Support::annulus(0.0, f64::INFINITY),
        ] {
            assert!(matches!(
                integrate(&g, &|_: &Point| 1.0, sup, &cfg, 0),
                Err(QuadratureError::InvalidSupport { .. })
            ));
        }
    }

    #[test]
    fn non_finite_integrand_detected() {
        let g = GroupSpec::abelian(2).unwrap();
        let cfg = IntegrationConfig::mc(500, 2, 1);
        let f = |p: &Point| 1.0 / (p.horizontal()[0] - p.horizontal()[0]); // NaN
        assert!(matches!(
            integrate(&g, &f, Support::annulus(0.1, 1.0), &cfg, 0),
            Err(QuadratureError::NonFinite { .. })
        ));
    }

    #[test]
    fn a2_constant_weight_is_exactly_one() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = A2Config {
            balls_per_radius: 4,
            samples_per_ball: 200,
            seed: 11,
        };
        let est = muckenhoupt_a2_estimate(&g, 0.0, &[0.5, 1.0], &cfg).unwrap();
        assert_eq!(est.max_product, 1.0);
        assert!(est.admissible);
    }

    #[test]
    fn a2_alpha_at_q_flagged_inadmissible() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let cfg = A2Config {
            balls_per_radius: 4,
            samples_per_ball: 200,
            seed: 11,
        };
        let est = muckenhoupt_a2_estimate(&g, 4.0, &[1.0], &cfg).unwrap();
        assert!(!est.admissible);
    }

    #[test]
    fn shell_edges_cover_annulus() {
        let s = Support::annulus(1e-3, 40.0);
        let e = shell_edges(&s, 32).unwrap();
        assert_eq!(e.len(), 33);
        assert_eq!(e[0], 1e-3);
        assert_eq!(e[32], 40.0);
        assert!(e.windows(2).all(|w| w[0] < w[1]));

        let s0 = Support::annulus(0.0, 2.0);
        let e0 = shell_edges(&s0, 8).unwrap();
        assert_eq!(e0[0], 0.0);
        assert_eq!(e0[8], 2.0);
    }
}
