//! Pointwise identity checks for the horizontal calculus: closed-form
//! Laplacians of radial powers, harmonicity of the fundamental solution,
//! ∞-harmonicity of the norm, eikonal orthogonality, p-harmonic solutions
//! and the Leibniz expansion of |∇(N^β ψ)|².
//!
//! Every check samples seeded random points in a norm annulus, bounded away
//! from the vertical axis {v = 0} where the relative scales degenerate, and
//! reports the worst relative deviation against its tolerance.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{eval_jet, norm_jet, radial_laplacian, Curve, Frame};
use crate::fields::{make_annular_bump, FnField, ScalarField, Support};
use crate::group::{GroupSpec, Point};
use crate::profile::Profile1D;

/// Result of one pointwise identity battery.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub group: String,
    pub max_rel_dev: f64,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, g: &GroupSpec, max_rel_dev: f64, tolerance: f64, points: usize) -> Self {
        IdentityCheck {
            name: name.into(),
            group: g.label(),
            max_rel_dev,
            tolerance,
            points,
            pass: max_rel_dev <= tolerance,
        }
    }
}

/// Seeded points with lo ≤ N ≤ hi and |v|/N ≥ `axis_guard` (the identities
/// are exact for all v ≠ 0, but the relative scale vanishes on the axis).
pub fn sample_annulus_points(
    g: &GroupSpec,
    count: usize,
    lo: f64,
    hi: f64,
    seed: u64,
    axis_guard: f64,
) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1D3A_F00D);
    let m = g.horizontal_dim();
    let k = g.vertical_dim();
    let mut out = Vec::with_capacity(count);
    let mut coords = [0.0f64; crate::group::MAX_DIM];
    while out.len() < count {
        for c in coords[..m + k].iter_mut() {
            *c = 2.0 * rng.gen::<f64>() - 1.0;
        }
        let u = g.point_from_coords(&coords[..m + k]);
        let n = g.norm(&u);
        if n < 0.3 {
            continue;
        }
        if u.horizontal_len() / n < axis_guard {
            continue;
        }
        let r = (rng.gen::<f64>() * (hi / lo).ln()).exp() * lo;
        out.push(u.dilated(r / n));
    }
    out
}

/// Field f(N) with f given in closed form as (f, f′, f″).
fn radial_fn_field<F>(g: &GroupSpec, f: F) -> FnField<impl Fn(&Point) -> crate::dual::Dual2 + Sync>
where
    F: Fn(f64) -> (f64, f64, f64) + Sync,
{
    let g = g.clone();
    FnField::new(Support::unbounded(), move |x: &Point| {
        let nj = norm_jet(&g, x);
        let (f0, f1, f2) = f(nj.value());
        nj.chain(f0, f1, f2)
    })
}

fn power_curve(p: f64) -> impl Fn(f64) -> (f64, f64, f64) + Sync {
    move |r: f64| {
        let f = r.powf(p);
        (f, p * f / r, p * (p - 1.0) * f / (r * r))
    }
}

fn rel(num: f64, scale: f64) -> f64 {
    num.abs() / scale.max(1e-300)
}

/// |Δ_G N^{2−Q}| relative to N^{−Q}|∇N|² at random points: the Folland /
/// Kaplan solution is harmonic away from the pole.
pub fn harmonic_fundamental_solution(g: &GroupSpec, points: usize, seed: u64) -> IdentityCheck {
    let q = g.homogeneous_dim();
    let frame = Frame::new(g);
    let field = radial_fn_field(g, power_curve(2.0 - q));
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for x in &pts {
        let jet = eval_jet(g, &frame, &field, x).unwrap();
        let n = g.norm(x);
        let w = g.norm_gradient_sq(x).unwrap();
        worst = worst.max(rel(jet.laplacian(), n.powf(-q) * w));
    }
    IdentityCheck::new("harmonic-fundamental-solution", g, worst, 1e-6, pts.len())
}

/// Jet-computed |∇_G N|² against the closed form (|v|²/N², or 1 abelian).
pub fn norm_gradient_closed_form(g: &GroupSpec, points: usize, seed: u64) -> IdentityCheck {
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for x in &pts {
        let jet = frame.horizontal_jet(&norm_jet(g, x), x);
        let closed = g.norm_gradient_sq(x).unwrap();
        worst = worst.max(rel(jet.gradient_norm_sq() - closed, closed.max(1e-12)));
    }
    IdentityCheck::new("norm-gradient-closed-form", g, worst, 1e-10, pts.len())
}

/// Δ_G ρ^s = s(s+Q−2)|v|²ρ^{s−4} on Heisenberg groups, s over `exponents`.
pub fn radial_power_laplacian(
    g: &GroupSpec,
    exponents: &[f64],
    points: usize,
    seed: u64,
) -> IdentityCheck {
    let q = g.homogeneous_dim();
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for (i, s) in exponents.iter().enumerate() {
        let field = radial_fn_field(g, power_curve(*s));
        for x in &pts {
            let jet = eval_jet(g, &frame, &field, x).unwrap();
            let n = g.norm(x);
            let v2 = x.horizontal_len().powi(2);
            let closed = s * (s + q - 2.0) * v2 * n.powf(s - 4.0);
            let scale = (s.abs() * (s.abs() + q) + 1.0) * v2 * n.powf(s - 4.0);
            worst = worst.max(rel(jet.laplacian() - closed, scale));
        }
        let _ = i;
    }
    IdentityCheck::new(
        "radial-power-laplacian",
        g,
        worst,
        1e-8,
        pts.len() * exponents.len(),
    )
}

/// Δ_G N^{α−2} = (Q+α−4)(α−2) N^{α−4}|∇N|² away from the origin.
pub fn norm_power_laplacian(
    g: &GroupSpec,
    alphas: &[f64],
    points: usize,
    seed: u64,
) -> IdentityCheck {
    let q = g.homogeneous_dim();
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for alpha in alphas {
        let field = radial_fn_field(g, power_curve(alpha - 2.0));
        for x in &pts {
            let jet = eval_jet(g, &frame, &field, x).unwrap();
            let n = g.norm(x);
            let w = g.norm_gradient_sq(x).unwrap();
            let closed = (q + alpha - 4.0) * (alpha - 2.0) * n.powf(alpha - 4.0) * w;
            let scale = ((q + alpha - 4.0).abs() * (alpha - 2.0).abs() + q) * n.powf(alpha - 4.0) * w;
            worst = worst.max(rel(jet.laplacian() - closed, scale));
        }
    }
    IdentityCheck::new(
        "norm-power-laplacian",
        g,
        worst,
        1e-8,
        pts.len() * alphas.len(),
    )
}

/// Δ_{G,∞} N = 0: the homogeneous norm is ∞-harmonic (polarizability).
pub fn infinity_harmonic_norm(g: &GroupSpec, points: usize, seed: u64) -> IdentityCheck {
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for x in &pts {
        let jet = frame.horizontal_jet(&norm_jet(g, x), x);
        let val = jet.infinity_laplacian();
        // Scale: the same contraction with all terms in absolute value.
        let m = jet.gradient().len();
        let mut scale = 0.0;
        for i in 0..m {
            for j in 0..m {
                scale += (jet.gradient()[i] * jet.gradient()[j] * jet.second(i, j)).abs();
            }
        }
        worst = worst.max(rel(val, scale.max(1e-12)));
    }
    IdentityCheck::new("infinity-harmonic-norm", g, worst, 1e-8, pts.len())
}

/// ⟨∇_G N, ∇_G(|∇_G N|^γ)⟩ = 0 for the given γ exponents.
pub fn norm_eikonal_orthogonality(
    g: &GroupSpec,
    gammas: &[f64],
    points: usize,
    seed: u64,
) -> IdentityCheck {
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for gamma in gammas {
        for x in &pts {
            let jet = frame.horizontal_jet(&norm_jet(g, x), x);
            let g2 = jet.gradient_norm_sq();
            if g2 == 0.0 {
                continue;
            }
            let dg2 = jet.gradient_of_gradient_norm_sq();
            // ∇(g2^{γ/2}) = (γ/2) g2^{γ/2−1} ∇g2.
            let coef = 0.5 * gamma * g2.powf(0.5 * gamma - 1.0);
            let mut dot = 0.0;
            let mut scale = 0.0;
            for (i, gi) in jet.gradient().iter().enumerate() {
                dot += gi * coef * dg2[i];
                scale += (gi * coef * dg2[i]).abs();
            }
            worst = worst.max(rel(dot, scale.max(1e-12)));
        }
    }
    IdentityCheck::new(
        "norm-eikonal-orthogonality",
        g,
        worst,
        1e-8,
        pts.len() * gammas.len(),
    )
}

/// Radial closed form |∇N|²[f″ + (Q−1)f′/N] against the jet sub-Laplacian of
/// f∘N, for power and bump profiles.
pub fn radial_laplacian_consistency(g: &GroupSpec, points: usize, seed: u64) -> IdentityCheck {
    let q = g.homogeneous_dim();
    let frame = Frame::new(g);
    let pts = sample_annulus_points(g, points, 0.2, 5.0, seed, 1e-3);
    let bump = Profile1D::bump(0.1, 6.0);
    let sq = power_curve(2.0);
    let fund = power_curve(2.0 - q);
    let curves: [&dyn Curve; 3] = [&bump, &sq, &fund];
    let mut worst: f64 = 0.0;
    let mut total = 0usize;
    for (ci, curve) in curves.iter().enumerate() {
        let field = radial_fn_field(g, |r| curve.eval2(r));
        for x in &pts {
            let direct = eval_jet(g, &frame, &field, x).unwrap().laplacian();
            let radial = radial_laplacian(g, *curve, x).unwrap();
            let n = g.norm(x);
            let w = g.norm_gradient_sq(x).unwrap();
            let (_, f1, f2) = curve.eval2(n);
            let scale = w * (f2.abs() + (q - 1.0) * f1.abs() / n) + 1e-12;
            worst = worst.max(rel(direct - radial, scale));
            total += 1;
        }
        let _ = ci;
    }
    IdentityCheck::new("radial-laplacian-consistency", g, worst, 1e-8, total)
}

/// Δ_{G,p} N^{(p−Q)/(p−1)} = 0: the p-fundamental solution profile is
/// p-harmonic away from the pole. For a radial profile the operator reduces
/// to |f′|^{p−2}|∇N|^p[(p−1)f″ + (Q−1)f′/N]; the bracket is the cancelling
/// pair, so its absolute sum is the honest relative scale (the naive
/// two-term split degenerates at p = 2 where one term is identically zero).
pub fn p_fundamental_solution(g: &GroupSpec, p: f64, points: usize, seed: u64) -> IdentityCheck {
    let q = g.homogeneous_dim();
    let frame = Frame::new(g);
    let expo = (p - q) / (p - 1.0);
    let field = radial_fn_field(g, power_curve(expo));
    let pts = sample_annulus_points(g, points, 0.1, 10.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for x in &pts {
        let val = crate::calculus::p_sub_laplacian(g, &frame, &field, x, p).unwrap();
        let n = g.norm(x);
        let w = g.norm_gradient_sq(x).unwrap();
        let (_, f1, f2) = power_curve(expo)(n);
        let scale = f1.abs().powf(p - 2.0)
            * w.powf(0.5 * p)
            * ((p - 1.0) * f2.abs() + (q - 1.0) * f1.abs() / n);
        worst = worst.max(rel(val, scale));
    }
    IdentityCheck::new(
        format!("p-laplacian-fundamental-solution(p={p})"),
        g,
        worst,
        1e-6,
        pts.len(),
    )
}

/// Leibniz expansion |∇(N^β ψ)|² = β²N^{2β−2}|∇N|²ψ² + 2βN^{2β−1}ψ⟨∇N,∇ψ⟩
/// + N^{2β}|∇ψ|², with ψ an angular-modulated bump.
pub fn gradient_product_expansion(g: &GroupSpec, points: usize, seed: u64) -> IdentityCheck {
    let beta = -1.3;
    let frame = Frame::new(g);
    let mut ang_v = vec![0.0; g.horizontal_dim()];
    ang_v[0] = 0.08;
    let psi = make_annular_bump(g, 0.15, 5.0, ang_v, vec![]).unwrap();
    let g2 = g.clone();
    let product = FnField::new(Support::annulus(0.15, 5.0), move |x: &Point| {
        let nj = norm_jet(&g2, x);
        let n = nj.value();
        let p = beta;
        let f = n.powf(p);
        nj.chain(f, p * f / n, p * (p - 1.0) * f / (n * n)) * psi.coord_jet(x)
    });
    let mut ang_v = vec![0.0; g.horizontal_dim()];
    ang_v[0] = 0.08;
    let psi = make_annular_bump(g, 0.15, 5.0, ang_v, vec![]).unwrap();
    let pts = sample_annulus_points(g, points, 0.25, 4.0, seed, 1e-3);
    let mut worst: f64 = 0.0;
    for x in &pts {
        let jp = eval_jet(g, &frame, &product, x).unwrap();
        let jn = frame.horizontal_jet(&norm_jet(g, x), x);
        let jpsi = eval_jet(g, &frame, &psi, x).unwrap();
        let n = g.norm(x);
        let w = jn.gradient_norm_sq();
        let dot: f64 = jn
            .gradient()
            .iter()
            .zip(jpsi.gradient())
            .map(|(a, b)| a * b)
            .sum();
        let t1 = beta * beta * n.powf(2.0 * beta - 2.0) * w * jpsi.value * jpsi.value;
        let t2 = 2.0 * beta * n.powf(2.0 * beta - 1.0) * jpsi.value * dot;
        let t3 = n.powf(2.0 * beta) * jpsi.gradient_norm_sq();
        let direct = jp.gradient_norm_sq();
        let scale = t1.abs() + t2.abs() + t3.abs() + 1e-12;
        worst = worst.max(rel(direct - (t1 + t2 + t3), scale));
    }
    IdentityCheck::new("gradient-product-expansion", g, worst, 1e-10, pts.len())
}

/// The full identity battery for one group, as run by the `identities` suite.
pub fn identity_suite(g: &GroupSpec, seed: u64) -> Vec<IdentityCheck> {
    let mut checks = vec![
        harmonic_fundamental_solution(g, 1000, seed),
        norm_gradient_closed_form(g, 300, seed.wrapping_add(1)),
        norm_power_laplacian(g, &[1.0, 3.0, 5.5], 200, seed.wrapping_add(2)),
        infinity_harmonic_norm(g, 1000, seed.wrapping_add(3)),
        norm_eikonal_orthogonality(g, &[1.0, 2.0], 300, seed.wrapping_add(4)),
        radial_laplacian_consistency(g, 200, seed.wrapping_add(5)),
        p_fundamental_solution(g, 1.5, 500, seed.wrapping_add(6)),
        p_fundamental_solution(g, 3.0, 500, seed.wrapping_add(7)),
        gradient_product_expansion(g, 200, seed.wrapping_add(8)),
    ];
    if matches!(g.kind(), crate::group::GroupKind::Heisenberg { .. }) {
        checks.insert(
            2,
            radial_power_laplacian(g, &[-1.0, 0.5, 3.0], 300, seed.wrapping_add(9)),
        );
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::calculus::sub_laplacian;

    #[test]
    fn heisenberg_power_laplacian_closed_form() {
        // Δρ³ = 3·(3+Q−2)|z|²ρ^{−1} = 15|z|²/ρ on ℍ¹ (Q = 4).
        let g = GroupSpec::heisenberg(1).unwrap();
        let frame = Frame::new(&g);
        let field = radial_fn_field(&g, power_curve(3.0));
        let x = g.point(&[0.8, -0.5], &[0.6]).unwrap();
        let lap = sub_laplacian(&g, &frame, &field, &x).unwrap();
        let n = g.norm(&x);
        let v2 = 0.8f64 * 0.8 + 0.5 * 0.5;
        assert_relative_eq!(lap, 15.0 * v2 / n, max_relative = 1e-11);
    }

    #[test]
    fn radial_laplacian_square_profile() {
        // f(r) = r² on ℍ¹: |∇ρ|²(2 + 2(Q−1)) = 8|z|²/ρ².
        let g = GroupSpec::heisenberg(1).unwrap();
        let f = |r: f64| (r * r, 2.0 * r, 2.0);
        let x = g.point(&[0.4, 0.9], &[-0.3]).unwrap();
        let got = radial_laplacian(&g, &f, &x).unwrap();
        let w = g.norm_gradient_sq(&x).unwrap();
        assert_relative_eq!(got, 8.0 * w, max_relative = 1e-12);
        // Constant profiles are annihilated.
        let c = |_: f64| (5.0, 0.0, 0.0);
        assert_eq!(radial_laplacian(&g, &c, &x).unwrap(), 0.0);
    }

    #[test]
    fn identity_batteries_pass_on_all_groups() {
        for g in [
            GroupSpec::abelian(3).unwrap(),
            GroupSpec::heisenberg(1).unwrap(),
            GroupSpec::quaternionic(),
        ] {
            for check in [
                harmonic_fundamental_solution(&g, 100, 7),
                norm_gradient_closed_form(&g, 100, 8),
                infinity_harmonic_norm(&g, 100, 9),
                norm_power_laplacian(&g, &[1.0, 3.0], 50, 10),
                radial_laplacian_consistency(&g, 50, 11),
                gradient_product_expansion(&g, 50, 12),
            ] {
                assert!(
                    check.pass,
                    "{} failed on {}: {:.3e} > {:.3e}",
                    check.name, check.group, check.max_rel_dev, check.tolerance
                );
            }
        }
    }

    #[test]
    fn newtonian_potential_is_p2_harmonic_on_r3() {
        // |x|^{−1} in ℝ³ is the Newtonian potential: Δ|x|^{−1} = 0.
        let g = GroupSpec::abelian(3).unwrap();
        let check = p_fundamental_solution(&g, 2.0, 200, 3);
        assert!(check.pass, "dev {:.3e}", check.max_rel_dev);
    }

    #[test]
    fn sampler_respects_annulus() {
        let g = GroupSpec::quaternionic();
        for x in sample_annulus_points(&g, 200, 0.1, 10.0, 5, 1e-3) {
            let n = g.norm(&x);
            assert!((0.1..=10.0 * 1.0000001).contains(&n));
            assert!(x.horizontal_len() / n >= 1e-3);
        }
    }
}
