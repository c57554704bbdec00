//! Shared test oracles, independent of the library's evaluation paths.
//!
//! * A 1-D radial oracle: for radial fields φ = f(N), every integrand in the
//!   Hardy/Rellich quotients factors as h(N)·(0-homogeneous weight), so polar
//!   coordinates reduce both sides to ∫h(r)r^{Q−1}dr times a shared surface
//!   constant that cancels in the quotient. Composite Simpson in log-radius
//!   per profile segment gives quotients to ~1e-8 without Monte Carlo or
//!   jets.
//! * A finite-difference oracle for the horizontal calculus: coordinate
//!   partials by Richardson-extrapolated central differences, assembled
//!   through the frame coefficient formulas written out per group kind.

#![allow(dead_code)]

use carnot_ineq::group::{GroupKind, GroupSpec, Point};
use carnot_ineq::profile::Profile1D;

/// ∫ term(r, f, f′, f″) · r^{Q−1} dr over the profile support, per segment in
/// log-radius.
pub fn radial_integral(
    p: &Profile1D,
    q_hom: f64,
    term: &dyn Fn(f64, f64, f64, f64) -> f64,
) -> f64 {
    let breaks = p.breaks();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0].max(1e-12), w[1]);
        if b <= a {
            continue;
        }
        let (ua, ub) = (a.ln(), b.ln());
        let nseg = 8192usize;
        let du = (ub - ua) / nseg as f64;
        let mut acc = 0.0;
        for i in 0..=nseg {
            let r = (ua + du * i as f64).exp();
            let (f, f1, f2) = p.eval2(r);
            let val = term(r, f, f1, f2) * r.powf(q_hom);
            let wgt = if i == 0 || i == nseg {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += wgt * val;
        }
        total += acc * du / 3.0;
    }
    total
}

/// Oracle Hardy quotient for a radial profile (γ-independent: the angular
/// surface factor cancels).
pub fn hardy_quotient_oracle(q_hom: f64, alpha: f64, p: &Profile1D) -> f64 {
    let lhs = radial_integral(p, q_hom, &|r, _, f1, _| r.powf(alpha) * f1 * f1);
    let rhs = radial_integral(p, q_hom, &|r, f, _, _| r.powf(alpha - 2.0) * f * f);
    lhs / rhs
}

/// Oracle Rellich quotient for a radial profile.
pub fn rellich_quotient_oracle(q_hom: f64, alpha: f64, p: &Profile1D) -> f64 {
    let lhs = radial_integral(p, q_hom, &|r, _, f1, f2| {
        let lap = f2 + (q_hom - 1.0) * f1 / r;
        r.powf(alpha) * lap * lap
    });
    let rhs = radial_integral(p, q_hom, &|r, f, _, _| r.powf(alpha - 4.0) * f * f);
    lhs / rhs
}

/// Weighted linear least-squares fit y = c0 + c1·x; returns (c0, c1).
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        s += 1.0;
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
    }
    let det = s * sxx - sx * sx;
    ((sxx * sy - sx * sxy) / det, (s * sxy - sx * sy) / det)
}

fn coords_of(x: &Point) -> Vec<f64> {
    let mut c = x.horizontal().to_vec();
    c.extend_from_slice(x.vertical());
    c
}

fn point_from(g: &GroupSpec, coords: &[f64]) -> Point {
    let m = g.horizontal_dim();
    g.point(&coords[..m], &coords[m..]).unwrap()
}

/// Richardson-extrapolated central first partial ∂F/∂coords[i], combining
/// steps h and 2h (the wider pair keeps f64 roundoff amplification low).
fn fd_partial(g: &GroupSpec, f: &dyn Fn(&Point) -> f64, x: &Point, i: usize, h: f64) -> f64 {
    let d = |step: f64| {
        let mut cp = coords_of(x);
        cp[i] += step;
        let mut cm = coords_of(x);
        cm[i] -= step;
        (f(&point_from(g, &cp)) - f(&point_from(g, &cm))) / (2.0 * step)
    };
    (4.0 * d(h) - d(2.0 * h)) / 3.0
}

/// Richardson-extrapolated second partial ∂²F/∂i∂j.
fn fd_second(
    g: &GroupSpec,
    f: &dyn Fn(&Point) -> f64,
    x: &Point,
    i: usize,
    j: usize,
    h: f64,
) -> f64 {
    let s = |step: f64| {
        if i == j {
            let mut cp = coords_of(x);
            cp[i] += step;
            let mut cm = coords_of(x);
            cm[i] -= step;
            (f(&point_from(g, &cp)) - 2.0 * f(x) + f(&point_from(g, &cm))) / (step * step)
        } else {
            let mut cpp = coords_of(x);
            cpp[i] += step;
            cpp[j] += step;
            let mut cpm = coords_of(x);
            cpm[i] += step;
            cpm[j] -= step;
            let mut cmp = coords_of(x);
            cmp[i] -= step;
            cmp[j] += step;
            let mut cmm = coords_of(x);
            cmm[i] -= step;
            cmm[j] -= step;
            (f(&point_from(g, &cpp)) - f(&point_from(g, &cpm)) - f(&point_from(g, &cmp))
                + f(&point_from(g, &cmm)))
                / (4.0 * step * step)
        }
    };
    (4.0 * s(h) - s(2.0 * h)) / 3.0
}

/// Frame coefficient of ∂_{coord s} in X_j at x, written out per group kind
/// (independent of the library's frame tables).
fn frame_coeff(g: &GroupSpec, x: &Point, s: usize, j: usize) -> f64 {
    let m = g.horizontal_dim();
    if s < m {
        return if s == j { 1.0 } else { 0.0 };
    }
    match g.kind() {
        GroupKind::Abelian { .. } => 0.0,
        GroupKind::Heisenberg { n } => {
            let n = *n;
            if j < n {
                2.0 * x.coord(n + j)
            } else {
                -2.0 * x.coord(j - n)
            }
        }
        GroupKind::HType { .. } => {
            let a = s - m;
            let ja = &g.jmaps()[a];
            let mut acc = 0.0;
            for l in 0..m {
                acc += ja[j * m + l] * x.coord(l);
            }
            0.5 * acc
        }
    }
}

/// X_jφ(x) by finite differences.
pub fn fd_horizontal_derivative(
    g: &GroupSpec,
    f: &dyn Fn(&Point) -> f64,
    x: &Point,
    j: usize,
    h: f64,
) -> f64 {
    let n = g.dim();
    let mut acc = 0.0;
    for s in 0..n {
        let c = frame_coeff(g, x, s, j);
        if c != 0.0 {
            acc += c * fd_partial(g, f, x, s, h);
        }
    }
    acc
}

/// ∇_Gφ(x) by finite differences.
pub fn fd_horizontal_gradient(
    g: &GroupSpec,
    f: &dyn Fn(&Point) -> f64,
    x: &Point,
    h: f64,
) -> Vec<f64> {
    (0..g.horizontal_dim())
        .map(|j| fd_horizontal_derivative(g, f, x, j, h))
        .collect()
}

/// Δ_Gφ(x) = Σ_j X_j(X_jφ)(x) by nested finite differences: the inner X_jφ
/// is expanded through the product rule so only coordinate partials of φ and
/// the (polynomial, hand-differentiated) coefficients appear.
pub fn fd_sub_laplacian(g: &GroupSpec, f: &dyn Fn(&Point) -> f64, x: &Point, h: f64) -> f64 {
    let n = g.dim();
    let m = g.horizontal_dim();
    // Precompute first and second coordinate partials of φ.
    let mut grad = vec![0.0; n];
    for (s, gs) in grad.iter_mut().enumerate() {
        *gs = fd_partial(g, f, x, s, h);
    }
    let mut hess = vec![vec![0.0; n]; n];
    for s in 0..n {
        for t in s..n {
            let v = fd_second(g, f, x, s, t, h);
            hess[s][t] = v;
            hess[t][s] = v;
        }
    }
    // Coefficient derivatives ∂_l a_{sj}: constant in x; obtain them by
    // differencing the coefficient functions exactly (they are linear).
    let dcoeff = |l: usize, s: usize, j: usize| {
        let mut cp = coords_of(x);
        cp[l] += 1.0;
        let xp = point_from(g, &cp);
        frame_coeff(g, &xp, s, j) - frame_coeff(g, x, s, j)
    };
    let mut lap = 0.0;
    for j in 0..m {
        // X_j(X_jφ) = Σ_l a_{lj} ∂_l (Σ_s a_{sj} ∂_sφ)
        for l in 0..n {
            let alj = frame_coeff(g, x, l, j);
            if alj == 0.0 {
                continue;
            }
            for s in 0..n {
                let asj = frame_coeff(g, x, s, j);
                let da = if l < m { dcoeff(l, s, j) } else { 0.0 };
                lap += alj * (da * grad[s] + asj * hess[l][s]);
            }
        }
    }
    lap
}
