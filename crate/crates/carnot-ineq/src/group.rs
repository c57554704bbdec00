//! Concrete Carnot groups of step ≤ 2 in exponential coordinates.
//!
//! Three families are instantiable, all with explicit homogeneous norms:
//!
//! * abelian ℝⁿ with the Euclidean norm,
//! * the Heisenberg groups ℍⁿ with ρ = (|v|⁴ + t²)^{1/4},
//! * Heisenberg-type groups given by a family of skew maps J_a with
//!   the Kaplan norm K = (|v|⁴ + 16|z|²)^{1/4}.
//!
//! Points are stored in graded coordinates (v, z): `v` spans the horizontal
//! layer (dilation weight 1), `z` the vertical layer (weight 2). Haar measure
//! is Lebesgue measure on ℝ^{m+k}.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on m + k. Keeps points and jets in fixed-size stack arrays.
pub const MAX_DIM: usize = 8;
/// Cap on the vertical dimension k.
pub const MAX_VERTICAL: usize = 4;

/// Tolerance for the Clifford relations when constructing an H-type group.
const HTYPE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("dimension mismatch: point has (m, k) = ({got_m}, {got_k}), group expects ({want_m}, {want_k})")]
    DimensionMismatch {
        got_m: usize,
        got_k: usize,
        want_m: usize,
        want_k: usize,
    },
    #[error("total dimension m + k = {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("vertical dimension k = {0} exceeds the supported maximum {MAX_VERTICAL}")]
    VerticalTooLarge(usize),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("J-map {index} has {len} entries, expected {m}×{m} = {expected} (row-major)")]
    BadJShape {
        index: usize,
        len: usize,
        m: usize,
        expected: usize,
    },
    #[error("expected {k} J-maps, got {got}")]
    BadJCount { k: usize, got: usize },
    #[error("J-maps do not satisfy the H-type relations: {0}")]
    NotHType(String),
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("point has non-finite coordinates")]
    NonFinitePoint,
}

/// Serializable description of a group, as accepted in JSON inputs.
///
/// H-type J matrices are flat row-major arrays of length m².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupKind {
    Abelian {
        n: usize,
    },
    Heisenberg {
        n: usize,
    },
    HType {
        m: usize,
        k: usize,
        #[serde(rename = "J")]
        j: Vec<Vec<f64>>,
    },
}

/// A point in graded coordinates. The arrays are fixed-size; only the
/// leading `m` (resp. `k`) entries are meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    v: [f64; MAX_DIM],
    z: [f64; MAX_VERTICAL],
    m: u8,
    k: u8,
}

impl Point {
    pub fn horizontal(&self) -> &[f64] {
        &self.v[..self.m as usize]
    }

    pub fn vertical(&self) -> &[f64] {
        &self.z[..self.k as usize]
    }

    pub fn horizontal_dim(&self) -> usize {
        self.m as usize
    }

    pub fn vertical_dim(&self) -> usize {
        self.k as usize
    }

    /// Euclidean length of the horizontal part.
    pub fn horizontal_len(&self) -> f64 {
        self.horizontal().iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Coordinate lookup over the concatenated (v, z) coordinates.
    pub fn coord(&self, idx: usize) -> f64 {
        if idx < self.m as usize {
            self.v[idx]
        } else {
            self.z[idx - self.m as usize]
        }
    }

    /// The image of this point under δ_λ (no positivity check).
    pub fn dilated(&self, lambda: f64) -> Point {
        let mut out = *self;
        for a in out.v[..self.m as usize].iter_mut() {
            *a *= lambda;
        }
        let l2 = lambda * lambda;
        for a in out.z[..self.k as usize].iter_mut() {
            *a *= l2;
        }
        out
    }
}

/// A validated Carnot group instance of step ≤ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    kind: GroupKind,
    m: usize,
    k: usize,
    q: u32,
    /// Row-major J matrices (empty unless H-type).
    jmaps: Vec<Vec<f64>>,
}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Result<Self, GroupError> {
        match kind {
            GroupKind::Abelian { n } => {
                if n == 0 {
                    return Err(GroupError::ZeroDimension);
                }
                if n > MAX_DIM {
                    return Err(GroupError::DimensionTooLarge(n));
                }
                Ok(GroupSpec {
                    kind: GroupKind::Abelian { n },
                    m: n,
                    k: 0,
                    q: n as u32,
                    jmaps: Vec::new(),
                })
            }
            GroupKind::Heisenberg { n } => {
                if n == 0 {
                    return Err(GroupError::ZeroDimension);
                }
                let m = 2 * n;
                if m + 1 > MAX_DIM {
                    return Err(GroupError::DimensionTooLarge(m + 1));
                }
                Ok(GroupSpec {
                    kind: GroupKind::Heisenberg { n },
                    m,
                    k: 1,
                    q: (2 * n + 2) as u32,
                    jmaps: Vec::new(),
                })
            }
            GroupKind::HType { m, k, j } => {
                if m == 0 || k == 0 {
                    return Err(GroupError::ZeroDimension);
                }
                if m + k > MAX_DIM {
                    return Err(GroupError::DimensionTooLarge(m + k));
                }
                if k > MAX_VERTICAL {
                    return Err(GroupError::VerticalTooLarge(k));
                }
                let report = validate_htype(m, &j)?;
                if !report.pass {
                    return Err(GroupError::NotHType(format!(
                        "max violation {:.3e} ({})",
                        report.max_violation, report.worst
                    )));
                }
                Ok(GroupSpec {
                    kind: GroupKind::HType { m, k, j: j.clone() },
                    m,
                    k,
                    q: (m + 2 * k) as u32,
                    jmaps: j,
                })
            }
        }
    }

    pub fn abelian(n: usize) -> Result<Self, GroupError> {
        Self::new(GroupKind::Abelian { n })
    }

    pub fn heisenberg(n: usize) -> Result<Self, GroupError> {
        Self::new(GroupKind::Heisenberg { n })
    }

    pub fn htype(m: usize, k: usize, j: Vec<Vec<f64>>) -> Result<Self, GroupError> {
        Self::new(GroupKind::HType { m, k, j })
    }

    /// The quaternionic H-type group with m = 4, k = 3: J-maps are left
    /// multiplication by i, j, k on ℍ ≅ ℝ⁴ with basis (1, i, j, k).
    pub fn quaternionic() -> Self {
        let ji = vec![
            0., -1., 0., 0., //
            1., 0., 0., 0., //
            0., 0., 0., -1., //
            0., 0., 1., 0.,
        ];
        let jj = vec![
            0., 0., -1., 0., //
            0., 0., 0., 1., //
            1., 0., 0., 0., //
            0., -1., 0., 0.,
        ];
        let jk = vec![
            0., 0., 0., -1., //
            0., 0., -1., 0., //
            0., 1., 0., 0., //
            1., 0., 0., 0.,
        ];
        Self::htype(4, 3, vec![ji, jj, jk]).expect("quaternionic triple is H-type")
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Horizontal dimension m = dim V₁.
    pub fn horizontal_dim(&self) -> usize {
        self.m
    }

    /// Vertical dimension k = dim V₂ (0 for abelian groups).
    pub fn vertical_dim(&self) -> usize {
        self.k
    }

    /// Topological dimension m + k.
    pub fn dim(&self) -> usize {
        self.m + self.k
    }

    /// Homogeneous dimension Q = m + 2k (= n for abelian groups).
    pub fn homogeneous_dim(&self) -> f64 {
        self.q as f64
    }

    pub fn jmaps(&self) -> &[Vec<f64>] {
        &self.jmaps
    }

    /// Short label for reports, e.g. `heisenberg(1)` or `htype(4,3)`.
    pub fn label(&self) -> String {
        match &self.kind {
            GroupKind::Abelian { n } => format!("abelian({n})"),
            GroupKind::Heisenberg { n } => format!("heisenberg({n})"),
            GroupKind::HType { m, k, .. } => format!("htype({m},{k})"),
        }
    }

    /// Dilation weight of coordinate `idx` (1 horizontal, 2 vertical).
    pub fn weight(&self, idx: usize) -> u32 {
        if idx < self.m {
            1
        } else {
            2
        }
    }

    pub fn identity(&self) -> Point {
        Point {
            v: [0.0; MAX_DIM],
            z: [0.0; MAX_VERTICAL],
            m: self.m as u8,
            k: self.k as u8,
        }
    }

    /// Build a point from coordinate slices, checking dimensions.
    pub fn point(&self, v: &[f64], z: &[f64]) -> Result<Point, GroupError> {
        if v.len() != self.m || z.len() != self.k {
            return Err(GroupError::DimensionMismatch {
                got_m: v.len(),
                got_k: z.len(),
                want_m: self.m,
                want_k: self.k,
            });
        }
        if !v.iter().chain(z.iter()).all(|a| a.is_finite()) {
            return Err(GroupError::NonFinitePoint);
        }
        let mut p = self.identity();
        p.v[..self.m].copy_from_slice(v);
        p.z[..self.k].copy_from_slice(z);
        Ok(p)
    }

    /// Build a point from the concatenated (v, z) coordinates without
    /// finite-ness checks. Used in sampling loops.
    pub(crate) fn point_from_coords(&self, coords: &[f64]) -> Point {
        debug_assert_eq!(coords.len(), self.dim());
        let mut p = self.identity();
        p.v[..self.m].copy_from_slice(&coords[..self.m]);
        p.z[..self.k].copy_from_slice(&coords[self.m..]);
        p
    }

    fn check_compat(&self, x: &Point) -> Result<(), GroupError> {
        if x.m as usize != self.m || x.k as usize != self.k {
            return Err(GroupError::DimensionMismatch {
                got_m: x.m as usize,
                got_k: x.k as usize,
                want_m: self.m,
                want_k: self.k,
            });
        }
        Ok(())
    }

    /// Group multiplication x · y = x + y + P(x, y).
    ///
    /// Abelian: x + y. Heisenberg (v = (x₁..xₙ, y₁..yₙ)):
    /// t'' = t + t' + 2Σⱼ(yⱼx'ⱼ − xⱼy'ⱼ). H-type: z''_a = z_a + z'_a + ½⟨J_a v, v'⟩.
    pub fn multiply(&self, x: &Point, y: &Point) -> Result<Point, GroupError> {
        self.check_compat(x)?;
        self.check_compat(y)?;
        let mut out = self.identity();
        for i in 0..self.m {
            out.v[i] = x.v[i] + y.v[i];
        }
        match &self.kind {
            GroupKind::Abelian { .. } => {}
            GroupKind::Heisenberg { n } => {
                let n = *n;
                let mut twist = 0.0;
                for j in 0..n {
                    twist += x.v[n + j] * y.v[j] - x.v[j] * y.v[n + j];
                }
                out.z[0] = x.z[0] + y.z[0] + 2.0 * twist;
            }
            GroupKind::HType { .. } => {
                for a in 0..self.k {
                    let ja = &self.jmaps[a];
                    let mut bilin = 0.0;
                    for i in 0..self.m {
                        let mut jv_i = 0.0;
                        for l in 0..self.m {
                            jv_i += ja[i * self.m + l] * x.v[l];
                        }
                        bilin += jv_i * y.v[i];
                    }
                    out.z[a] = x.z[a] + y.z[a] + 0.5 * bilin;
                }
            }
        }
        Ok(out)
    }

    /// Group inverse x⁻¹ = −x.
    pub fn inverse(&self, x: &Point) -> Point {
        let mut out = *x;
        for a in out.v.iter_mut() {
            *a = -*a;
        }
        for a in out.z.iter_mut() {
            *a = -*a;
        }
        out
    }

    /// Anisotropic dilation δ_λ(v, z) = (λv, λ²z), a group automorphism.
    pub fn dilate(&self, lambda: f64, x: &Point) -> Result<Point, GroupError> {
        if !(lambda > 0.0) {
            return Err(GroupError::NonPositiveDilation(lambda));
        }
        self.check_compat(x)?;
        Ok(x.dilated(lambda))
    }

    /// Homogeneous norm associated with the fundamental solution of the
    /// sub-Laplacian: |x| (abelian), (|v|⁴ + t²)^{1/4} (Heisenberg),
    /// (|v|⁴ + 16|z|²)^{1/4} (H-type).
    pub fn norm(&self, x: &Point) -> f64 {
        let v2: f64 = x.v[..self.m].iter().map(|a| a * a).sum();
        match &self.kind {
            GroupKind::Abelian { .. } => v2.sqrt(),
            GroupKind::Heisenberg { .. } => {
                let t = x.z[0];
                (v2 * v2 + t * t).sqrt().sqrt()
            }
            GroupKind::HType { .. } => {
                let z2: f64 = x.z[..self.k].iter().map(|a| a * a).sum();
                (v2 * v2 + 16.0 * z2).sqrt().sqrt()
            }
        }
    }

    /// Closed form of |∇_G N|² at x: 1 on abelian groups, |v|²/N² otherwise.
    /// Undefined at the origin.
    pub fn norm_gradient_sq(&self, x: &Point) -> Result<f64, GroupError> {
        match &self.kind {
            GroupKind::Abelian { .. } => {
                if x.horizontal().iter().all(|&a| a == 0.0) {
                    return Err(GroupError::NonFinitePoint);
                }
                Ok(1.0)
            }
            _ => {
                let n = self.norm(x);
                if n == 0.0 {
                    return Err(GroupError::NonFinitePoint);
                }
                let v2: f64 = x.v[..self.m].iter().map(|a| a * a).sum();
                Ok(v2 / (n * n))
            }
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.kind.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let kind = GroupKind::deserialize(de)?;
        GroupSpec::new(kind).map_err(serde::de::Error::custom)
    }
}

/// Result of checking a J-map family against the H-type relations.
#[derive(Debug, Clone)]
pub struct HTypeReport {
    pub pass: bool,
    /// Largest absolute violation across all checked entries.
    pub max_violation: f64,
    /// Which relation produced the worst violation.
    pub worst: String,
}

/// Check skew-symmetry, J_a² = −I and J_aJ_b + J_bJ_a = 0 for a ≠ b.
///
/// These are the Clifford relations; for unit z they imply the defining
/// H-type condition J_z² = −|z|² Id.
pub fn validate_htype(m: usize, jmaps: &[Vec<f64>]) -> Result<HTypeReport, GroupError> {
    if jmaps.is_empty() {
        return Err(GroupError::BadJCount {
            k: 1,
            got: 0,
        });
    }
    for (index, j) in jmaps.iter().enumerate() {
        if j.len() != m * m {
            return Err(GroupError::BadJShape {
                index,
                len: j.len(),
                m,
                expected: m * m,
            });
        }
    }
    let mut max_violation: f64 = 0.0;
    let mut worst = String::from("none");
    let mut record = |v: f64, what: String| {
        if v > max_violation {
            max_violation = v;
            worst = what;
        }
    };
    let at = |j: &Vec<f64>, r: usize, c: usize| j[r * m + c];
    for (a, ja) in jmaps.iter().enumerate() {
        for r in 0..m {
            for c in 0..m {
                let skew = (at(ja, r, c) + at(ja, c, r)).abs();
                record(skew, format!("skew-symmetry of J_{a}"));
                let mut sq = 0.0;
                for l in 0..m {
                    sq += at(ja, r, l) * at(ja, l, c);
                }
                let target = if r == c { -1.0 } else { 0.0 };
                record((sq - target).abs(), format!("J_{a}² = -I"));
            }
        }
        for (b, jb) in jmaps.iter().enumerate().skip(a + 1) {
            for r in 0..m {
                for c in 0..m {
                    let mut anti = 0.0;
                    for l in 0..m {
                        anti += at(ja, r, l) * at(jb, l, c) + at(jb, r, l) * at(ja, l, c);
                    }
                    record(anti.abs(), format!("anticommutation of J_{a}, J_{b}"));
                }
            }
        }
    }
    Ok(HTypeReport {
        pass: max_violation <= HTYPE_TOL,
        max_violation,
        worst,
    })
}
