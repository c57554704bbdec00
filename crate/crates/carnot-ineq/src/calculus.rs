//! Left-invariant horizontal frame and the associated differential operators.
//!
//! The frame X_1, …, X_m has polynomial coefficients: X_j = ∂_{v_j} on
//! abelian groups, X_j = ∂_{x_j} + 2y_j∂_t and Y_j = ∂_{y_j} − 2x_j∂_t on
//! Heisenberg groups, and X_i = ∂_{v_i} + ½Σ_a (J_a v)_i ∂_{z_a} on H-type
//! groups. All operators here are evaluated exactly: the field supplies a
//! coordinate 2-jet ([`Dual2`]) and the frame transform produces the full
//! horizontal matrix X_iX_jφ, from which the sub-Laplacian (trace), the
//! ∞-sub-Laplacian (contraction against ∇φ⊗∇φ) and the p-sub-Laplacian in
//! divergence form all follow without finite differences.

use thiserror::Error;

use crate::dual::Dual2;
use crate::fields::ScalarField;
use crate::group::{GroupKind, GroupSpec, Point, MAX_DIM, MAX_VERTICAL};

#[derive(Debug, Error)]
pub enum CalculusError {
    #[error("field evaluation produced a non-finite jet at a point with norm {norm}")]
    NonFinite { norm: f64 },
    #[error("horizontal gradient vanishes at the evaluation point; |∇φ|^{{p-2}} is singular for p = {p}")]
    DegenerateGradient { p: f64 },
    #[error("operation undefined at the group origin")]
    AtOrigin,
    #[error("group error: {0}")]
    Group(#[from] crate::group::GroupError),
}

/// Exact second-order horizontal jet of a scalar field at a point:
/// value, (X_1φ, …, X_mφ) and the full matrix X_iX_jφ.
///
/// The matrix is not symmetric; horizontal fields do not commute.
#[derive(Debug, Clone, Copy)]
pub struct HorizontalJet {
    m: u8,
    pub value: f64,
    grad: [f64; MAX_DIM],
    hess: [[f64; MAX_DIM]; MAX_DIM],
}

impl HorizontalJet {
    pub fn zero(m: usize) -> Self {
        HorizontalJet {
            m: m as u8,
            value: 0.0,
            grad: [0.0; MAX_DIM],
            hess: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.m as usize]
    }

    /// X_i X_j φ.
    pub fn second(&self, i: usize, j: usize) -> f64 {
        self.hess[i][j]
    }

    /// |∇_G φ|².
    pub fn gradient_norm_sq(&self) -> f64 {
        self.gradient().iter().map(|g| g * g).sum()
    }

    /// Δ_G φ = Σ_j X_j²φ.
    pub fn laplacian(&self) -> f64 {
        (0..self.m as usize).map(|j| self.hess[j][j]).sum()
    }

    /// Δ_{G,∞} φ = ½⟨∇_G(|∇_Gφ|²), ∇_Gφ⟩ = Σ_{ij} X_iφ X_jφ X_iX_jφ.
    pub fn infinity_laplacian(&self) -> f64 {
        let m = self.m as usize;
        let mut acc = 0.0;
        for i in 0..m {
            if self.grad[i] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..m {
                row += self.grad[j] * self.hess[i][j];
            }
            acc += self.grad[i] * row;
        }
        acc
    }

    /// X_i(|∇_Gφ|²) = 2 Σ_j X_jφ · X_iX_jφ, for i = 0..m.
    pub fn gradient_of_gradient_norm_sq(&self) -> [f64; MAX_DIM] {
        let m = self.m as usize;
        let mut out = [0.0; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(m) {
            let mut acc = 0.0;
            for j in 0..m {
                acc += self.grad[j] * self.hess[i][j];
            }
            *o = 2.0 * acc;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        let m = self.m as usize;
        self.value.is_finite()
            && self.grad[..m].iter().all(|g| g.is_finite())
            && self.hess[..m].iter().all(|r| r[..m].iter().all(|h| h.is_finite()))
    }
}

/// Frame coefficient table. The vertical coefficient of X_j is linear in v:
/// coeff of ∂_{z_a} in X_j equals Σ_l cmat[a][j][l]·v_l, so `cmat` doubles as
/// the table of coefficient derivatives.
#[derive(Debug, Clone)]
pub struct Frame {
    m: usize,
    k: usize,
    cmat: Vec<[[f64; MAX_DIM]; MAX_DIM]>,
}

impl Frame {
    pub fn new(g: &GroupSpec) -> Self {
        let m = g.horizontal_dim();
        let k = g.vertical_dim();
        let mut cmat = vec![[[0.0; MAX_DIM]; MAX_DIM]; k.max(1)];
        match g.kind() {
            GroupKind::Abelian { .. } => {}
            GroupKind::Heisenberg { n } => {
                let n = *n;
                for j in 0..n {
                    cmat[0][j][n + j] = 2.0;
                    cmat[0][n + j][j] = -2.0;
                }
            }
            GroupKind::HType { .. } => {
                for (a, ja) in g.jmaps().iter().enumerate() {
                    for i in 0..m {
                        for l in 0..m {
                            cmat[a][i][l] = 0.5 * ja[i * m + l];
                        }
                    }
                }
            }
        }
        Frame { m, k, cmat }
    }

    /// Vertical coefficients c[a][j] at the point x.
    fn coefficients(&self, x: &Point) -> [[f64; MAX_DIM]; MAX_VERTICAL] {
        let mut c = [[0.0; MAX_DIM]; MAX_VERTICAL];
        let v = x.horizontal();
        for a in 0..self.k {
            for j in 0..self.m {
                let row = &self.cmat[a][j];
                let mut acc = 0.0;
                for (l, vl) in v.iter().enumerate() {
                    acc += row[l] * vl;
                }
                c[a][j] = acc;
            }
        }
        c
    }

    /// Transform a coordinate 2-jet into the horizontal 2-jet at x.
    pub fn horizontal_jet(&self, jet: &Dual2, x: &Point) -> HorizontalJet {
        debug_assert_eq!(jet.nvars(), self.m + self.k);
        let m = self.m;
        let k = self.k;
        let c = self.coefficients(x);
        let mut out = HorizontalJet::zero(m);
        out.value = jet.value();

        let grad = jet.gradient();
        for j in 0..m {
            let mut acc = grad[j];
            for a in 0..k {
                acc += c[a][j] * grad[m + a];
            }
            out.grad[j] = acc;
        }

        for i in 0..m {
            for j in 0..m {
                // ∂_i(X_jφ) + Σ_b c[b][i]·∂_{z_b}(X_jφ); coefficients depend
                // only on v, so ∂_{z_b} of them vanishes.
                let mut acc = jet.hess(i, j);
                for a in 0..k {
                    acc += self.cmat[a][j][i] * grad[m + a] + c[a][j] * jet.hess(i, m + a);
                }
                for b in 0..k {
                    let mut inner = jet.hess(m + b, j);
                    for a in 0..k {
                        inner += c[a][j] * jet.hess(m + b, m + a);
                    }
                    acc += c[b][i] * inner;
                }
                out.hess[i][j] = acc;
            }
        }
        out
    }
}

/// Coordinate 2-jet of the homogeneous norm N at x (smooth away from 0).
pub fn norm_jet(g: &GroupSpec, x: &Point) -> Dual2 {
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    let n = m + k;
    let mut v2 = Dual2::constant(0.0, n);
    for i in 0..m {
        let vi = Dual2::variable(x.coord(i), i, n);
        v2 = v2 + vi * vi;
    }
    match g.kind() {
        GroupKind::Abelian { .. } => v2.sqrt(),
        GroupKind::Heisenberg { .. } => {
            let t = Dual2::variable(x.coord(m), m, n);
            (v2 * v2 + t * t).sqrt().sqrt()
        }
        GroupKind::HType { .. } => {
            let mut z2 = Dual2::constant(0.0, n);
            for a in 0..k {
                let za = Dual2::variable(x.coord(m + a), m + a, n);
                z2 = z2 + za * za;
            }
            (v2 * v2 + z2 * 16.0).sqrt().sqrt()
        }
    }
}

/// Evaluate the full horizontal 2-jet of a field at x.
pub fn eval_jet(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    x: &Point,
) -> Result<HorizontalJet, CalculusError> {
    let jet = field.coord_jet(x);
    if !jet.is_finite() {
        return Err(CalculusError::NonFinite { norm: g.norm(x) });
    }
    Ok(frame.horizontal_jet(&jet, x))
}

/// ∇_G φ(x) = (X_1φ, …, X_mφ).
pub fn horizontal_gradient(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    x: &Point,
) -> Result<Vec<f64>, CalculusError> {
    Ok(eval_jet(g, frame, field, x)?.gradient().to_vec())
}

/// Δ_G φ(x) = Σ_j X_j²φ(x).
pub fn sub_laplacian(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    x: &Point,
) -> Result<f64, CalculusError> {
    Ok(eval_jet(g, frame, field, x)?.laplacian())
}

/// Δ_{G,∞} φ(x) = ½⟨∇_G(|∇_Gφ|²), ∇_Gφ⟩(x).
pub fn infinity_sub_laplacian(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    x: &Point,
) -> Result<f64, CalculusError> {
    Ok(eval_jet(g, frame, field, x)?.infinity_laplacian())
}

/// Δ_{G,p} φ = Σ_i X_i(|∇_Gφ|^{p−2} X_iφ), expanded exactly as
/// |∇φ|^{p−2}·Δφ + (p−2)|∇φ|^{p−4}·Δ_∞φ wherever ∇φ ≠ 0.
pub fn p_sub_laplacian(
    g: &GroupSpec,
    frame: &Frame,
    field: &dyn ScalarField,
    x: &Point,
    p: f64,
) -> Result<f64, CalculusError> {
    let jet = eval_jet(g, frame, field, x)?;
    let g2 = jet.gradient_norm_sq();
    if g2 == 0.0 {
        if p < 2.0 {
            return Err(CalculusError::DegenerateGradient { p });
        }
        return Ok(if p == 2.0 { jet.laplacian() } else { 0.0 });
    }
    let lap = jet.laplacian();
    let inf = jet.infinity_laplacian();
    Ok(g2.powf(0.5 * (p - 2.0)) * (lap + (p - 2.0) * inf / g2))
}

/// A twice-differentiable 1-D profile: returns (f, f′, f″) at r.
pub trait Curve: Sync {
    fn eval2(&self, r: f64) -> (f64, f64, f64);
}

impl<F: Fn(f64) -> (f64, f64, f64) + Sync> Curve for F {
    fn eval2(&self, r: f64) -> (f64, f64, f64) {
        self(r)
    }
}

/// Radial form of the sub-Laplacian: for u = f(N),
/// Δ_G u = |∇_G N|²·[f″(N) + (Q−1) f′(N)/N] away from the origin.
pub fn radial_laplacian(g: &GroupSpec, f: &dyn Curve, x: &Point) -> Result<f64, CalculusError> {
    let n = g.norm(x);
    if n == 0.0 {
        return Err(CalculusError::AtOrigin);
    }
    let w = g.norm_gradient_sq(x)?;
    let (_, f1, f2) = f.eval2(n);
    let q = g.homogeneous_dim();
    Ok(w * (f2 + (q - 1.0) * f1 / n))
}

/// Closed form |∇_G N|²(x): 1 on abelian groups, |v|²/N² otherwise.
pub fn norm_gradient_sq(g: &GroupSpec, x: &Point) -> Result<f64, CalculusError> {
    Ok(g.norm_gradient_sq(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FnField, Support};
    use approx::assert_relative_eq;

    fn coord_field(g: &GroupSpec, idx: usize) -> FnField<impl Fn(&Point) -> Dual2 + Sync> {
        let n = g.dim();
        FnField::new(Support::unbounded(), move |x: &Point| {
            Dual2::variable(x.coord(idx), idx, n)
        })
    }

    #[test]
    fn heisenberg_gradient_of_vertical_coordinate() {
        // φ(z, t) = t at (x, y, t) = (1, 2, 0): (Xφ, Yφ) = (2y, −2x) = (4, −2).
        let g = GroupSpec::heisenberg(1).unwrap();
        let frame = Frame::new(&g);
        let phi = coord_field(&g, 2);
        let x = g.point(&[1.0, 2.0], &[0.0]).unwrap();
        let grad = horizontal_gradient(&g, &frame, &phi, &x).unwrap();
        assert_relative_eq!(grad[0], 4.0);
        assert_relative_eq!(grad[1], -2.0);
    }

    #[test]
    fn constant_field_has_zero_jet() {
        let g = GroupSpec::quaternionic();
        let frame = Frame::new(&g);
        let n = g.dim();
        let one = FnField::new(Support::unbounded(), move |_: &Point| {
            Dual2::constant(1.0, n)
        });
        let x = g.point(&[0.4, -0.2, 0.8, 0.1], &[0.3, 0.2, -0.5]).unwrap();
        let jet = eval_jet(&g, &frame, &one, &x).unwrap();
        assert_eq!(jet.value, 1.0);
        assert!(jet.gradient().iter().all(|&gv| gv == 0.0));
        assert_eq!(jet.laplacian(), 0.0);
    }

    #[test]
    fn abelian_affine_is_harmonic() {
        let g = GroupSpec::abelian(3).unwrap();
        let frame = Frame::new(&g);
        let n = g.dim();
        let phi = FnField::new(Support::unbounded(), move |x: &Point| {
            Dual2::variable(x.coord(0), 0, n) * 2.0 + Dual2::variable(x.coord(2), 2, n) + 5.0
        });
        let x = g.point(&[0.3, -1.0, 2.0], &[]).unwrap();
        assert_relative_eq!(sub_laplacian(&g, &frame, &phi, &x).unwrap(), 0.0);
        let grad = horizontal_gradient(&g, &frame, &phi, &x).unwrap();
        assert_eq!(grad, vec![2.0, 0.0, 1.0]);
    }

    #[test]
    fn heisenberg_commutator_shows_in_hessian() {
        // For φ = t: X(Yφ) = X(−2x) = −2, Y(Xφ) = Y(2y) = 2, so the
        // horizontal Hessian is skew here and [X, Y]φ = −4 = (−4T)φ.
        let g = GroupSpec::heisenberg(1).unwrap();
        let frame = Frame::new(&g);
        let phi = coord_field(&g, 2);
        let x = g.point(&[0.7, -0.4], &[0.2]).unwrap();
        let jet = eval_jet(&g, &frame, &phi, &x).unwrap();
        assert_relative_eq!(jet.second(0, 1), -2.0);
        assert_relative_eq!(jet.second(1, 0), 2.0);
        assert_relative_eq!(jet.laplacian(), 0.0);
    }

    #[test]
    fn norm_jet_matches_plain_norm() {
        for g in [
            GroupSpec::abelian(3).unwrap(),
            GroupSpec::heisenberg(2).unwrap(),
            GroupSpec::quaternionic(),
        ] {
            let mut v = vec![0.0; g.horizontal_dim()];
            for (i, a) in v.iter_mut().enumerate() {
                *a = 0.2 + 0.3 * i as f64;
            }
            let z = vec![0.4; g.vertical_dim()];
            let x = g.point(&v, &z).unwrap();
            assert_relative_eq!(
                norm_jet(&g, &x).value(),
                g.norm(&x),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn norm_gradient_closed_form_vs_jet() {
        for g in [
            GroupSpec::heisenberg(1).unwrap(),
            GroupSpec::heisenberg(2).unwrap(),
            GroupSpec::quaternionic(),
            GroupSpec::abelian(4).unwrap(),
        ] {
            let frame = Frame::new(&g);
            let mut v = vec![0.0; g.horizontal_dim()];
            for (i, a) in v.iter_mut().enumerate() {
                *a = 0.5 - 0.25 * i as f64 + 0.1;
            }
            let z = vec![-0.3; g.vertical_dim()];
            let x = g.point(&v, &z).unwrap();
            let jet = norm_jet(&g, &x);
            let h = frame.horizontal_jet(&jet, &x);
            assert_relative_eq!(
                h.gradient_norm_sq(),
                g.norm_gradient_sq(&x).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn vertical_direction_has_zero_norm_gradient() {
        // On ℍ¹ at (z, t) = (0, 1): |∇ρ|² = |z|²/ρ² = 0.
        let g = GroupSpec::heisenberg(1).unwrap();
        let x = g.point(&[0.0, 0.0], &[1.0]).unwrap();
        assert_eq!(g.norm_gradient_sq(&x).unwrap(), 0.0);
    }

    #[test]
    fn norm_gradient_dilation_invariant() {
        let g = GroupSpec::quaternionic();
        let x = g.point(&[0.3, 0.1, -0.2, 0.5], &[0.2, 0.0, -0.1]).unwrap();
        let y = g.dilate(3.7, &x).unwrap();
        assert_relative_eq!(
            g.norm_gradient_sq(&x).unwrap(),
            g.norm_gradient_sq(&y).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn p_equals_two_reduces_to_sub_laplacian() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let frame = Frame::new(&g);
        let n = g.dim();
        let phi = FnField::new(Support::unbounded(), move |x: &Point| {
            let a = Dual2::variable(x.coord(0), 0, n);
            let b = Dual2::variable(x.coord(1), 1, n);
            let t = Dual2::variable(x.coord(2), 2, n);
            (a * a * b + t * a).exp()
        });
        let x = g.point(&[0.3, 0.6], &[-0.2]).unwrap();
        let direct = sub_laplacian(&g, &frame, &phi, &x).unwrap();
        let via_p = p_sub_laplacian(&g, &frame, &phi, &x, 2.0).unwrap();
        assert_relative_eq!(direct, via_p, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_gradient_signalled_for_small_p() {
        let g = GroupSpec::abelian(2).unwrap();
        let frame = Frame::new(&g);
        let n = g.dim();
        // φ = |v|²: critical at the origin.
        let phi = FnField::new(Support::unbounded(), move |x: &Point| {
            let a = Dual2::variable(x.coord(0), 0, n);
            let b = Dual2::variable(x.coord(1), 1, n);
            a * a + b * b
        });
        let x = g.identity();
        assert!(matches!(
            p_sub_laplacian(&g, &frame, &phi, &x, 1.5),
            Err(CalculusError::DegenerateGradient { .. })
        ));
        // p = 2 still works and p > 2 vanishes at the critical point.
        assert_relative_eq!(p_sub_laplacian(&g, &frame, &phi, &x, 2.0).unwrap(), 4.0);
        assert_eq!(p_sub_laplacian(&g, &frame, &phi, &x, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn radial_laplacian_requires_nonzero_norm() {
        let g = GroupSpec::heisenberg(1).unwrap();
        let f = |r: f64| (r * r, 2.0 * r, 2.0);
        assert!(matches!(
            radial_laplacian(&g, &f, &g.identity()),
            Err(CalculusError::AtOrigin)
        ));
    }
}
