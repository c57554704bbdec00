//! Piecewise 1-D profiles with exact first and second derivatives.
//!
//! Test fields are built as f(N)·(angular factor); this module supplies the
//! radial part f as a piecewise curve: constants, power laws, affine ramps,
//! Gaussians in r², and quintic Hermite blends that match value, first and
//! second derivative at both seam ends (the minimal degree giving C² seams).

use crate::calculus::Curve;

#[derive(Debug, Clone)]
enum Seg {
    Const(f64),
    /// coef · r^expo
    Power { coef: f64, expo: f64 },
    /// a + b·r
    Affine { a: f64, b: f64 },
    /// Σ cᵢ tⁱ with t = (r − r0)/h
    PolyT { r0: f64, h: f64, c: Vec<f64> },
    /// amp · e^{−β r²}
    ExpSq { amp: f64, beta: f64 },
}

impl Seg {
    fn eval2(&self, r: f64) -> (f64, f64, f64) {
        match self {
            Seg::Const(c) => (*c, 0.0, 0.0),
            Seg::Power { coef, expo } => {
                let f = coef * r.powf(*expo);
                (f, f * expo / r, f * expo * (expo - 1.0) / (r * r))
            }
            Seg::Affine { a, b } => (a + b * r, *b, 0.0),
            Seg::PolyT { r0, h, c } => {
                let t = (r - r0) / h;
                let mut p = 0.0;
                let mut dp = 0.0;
                let mut ddp = 0.0;
                for (i, ci) in c.iter().enumerate().rev() {
                    let k = i as f64;
                    if i >= 2 {
                        ddp = ddp * t + k * (k - 1.0) * ci;
                    }
                    if i >= 1 {
                        dp = dp * t + k * ci;
                    }
                    p = p * t + ci;
                }
                (p, dp / h, ddp / (h * h))
            }
            Seg::ExpSq { amp, beta } => {
                let f = amp * (-beta * r * r).exp();
                let d1 = -2.0 * beta * r * f;
                let d2 = (4.0 * beta * beta * r * r - 2.0 * beta) * f;
                (f, d1, d2)
            }
        }
    }
}

/// End state (f, f′, f″) of a curve at a seam.
#[derive(Debug, Clone, Copy)]
pub struct EndState(pub f64, pub f64, pub f64);

/// Quintic Hermite coefficients (in t = (r−r0)/h) matching the two end states.
fn quintic_blend(r0: f64, r1: f64, left: EndState, right: EndState) -> Seg {
    let h = r1 - r0;
    let (f0, d0h, s0h) = (left.0, h * left.1, h * h * left.2);
    let (f1, d1h, s1h) = (right.0, h * right.1, h * h * right.2);
    let c = vec![
        f0,
        d0h,
        0.5 * s0h,
        -10.0 * f0 - 6.0 * d0h - 1.5 * s0h + 10.0 * f1 - 4.0 * d1h + 0.5 * s1h,
        15.0 * f0 + 8.0 * d0h + 1.5 * s0h - 15.0 * f1 + 7.0 * d1h - s1h,
        -6.0 * f0 - 3.0 * d0h - 0.5 * s0h + 6.0 * f1 - 3.0 * d1h + 0.5 * s1h,
    ];
    Seg::PolyT { r0, h, c }
}

fn power_state(c: f64, expo: f64, r: f64) -> EndState {
    let f = c * r.powf(expo);
    EndState(f, f * expo / r, f * expo * (expo - 1.0) / (r * r))
}

/// A piecewise curve, identically zero outside `[breaks[0], breaks[last]]`.
#[derive(Debug, Clone)]
pub struct Profile1D {
    breaks: Vec<f64>,
    segs: Vec<Seg>,
}

impl Profile1D {
    fn new(breaks: Vec<f64>, segs: Vec<Seg>) -> Self {
        debug_assert_eq!(breaks.len(), segs.len() + 1);
        debug_assert!(breaks.windows(2).all(|w| w[0] < w[1]));
        Profile1D { breaks, segs }
    }

    /// Radius below which the profile vanishes identically.
    pub fn inner(&self) -> f64 {
        self.breaks[0]
    }

    /// Radius above which the profile vanishes identically.
    pub fn outer(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    /// Seam radii, including the two support endpoints.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// (f, f′, f″) at radius r; exact zeros outside the support.
    pub fn eval2(&self, r: f64) -> (f64, f64, f64) {
        if r < self.breaks[0] || r > *self.breaks.last().unwrap() {
            return (0.0, 0.0, 0.0);
        }
        let idx = match self
            .breaks
            .binary_search_by(|b| b.partial_cmp(&r).unwrap())
        {
            Ok(i) => i.min(self.segs.len() - 1),
            Err(i) => i - 1,
        };
        self.segs[idx].eval2(r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval2(r).0
    }

    /// Smooth bump supported on [r0, r_outer]: 64·t³(1−t)³ in the normalized
    /// variable, vanishing to second order at both ends, peak 1 at the
    /// midpoint radius.
    pub fn bump(r0: f64, r_outer: f64) -> Self {
        let h = r_outer - r0;
        // 64(t³ − 3t⁴ + 3t⁵ − t⁶)
        let c = vec![0.0, 0.0, 0.0, 64.0, -192.0, 192.0, -64.0];
        Profile1D::new(
            vec![r0, r_outer],
            vec![Seg::PolyT { r0, h, c }],
        )
    }

    /// Near-extremal Hardy profile: C² ramp 0→1 over [r0/2, r0], constant 1
    /// on [r0, 1], C² blend over [1, 1+δ] onto the power tail r^{−expo},
    /// C² decay to 0 over [r_cut, 2·r_cut].
    pub fn hardy_extremizer(expo: f64, r0: f64, delta: f64, r_cut: f64) -> Self {
        let breaks = vec![0.5 * r0, r0, 1.0, 1.0 + delta, r_cut, 2.0 * r_cut];
        let segs = vec![
            quintic_blend(
                0.5 * r0,
                r0,
                EndState(0.0, 0.0, 0.0),
                EndState(1.0, 0.0, 0.0),
            ),
            Seg::Const(1.0),
            quintic_blend(
                1.0,
                1.0 + delta,
                EndState(1.0, 0.0, 0.0),
                power_state(1.0, -expo, 1.0 + delta),
            ),
            Seg::Power { coef: 1.0, expo: -expo },
            quintic_blend(
                r_cut,
                2.0 * r_cut,
                power_state(1.0, -expo, r_cut),
                EndState(0.0, 0.0, 0.0),
            ),
        ];
        Profile1D::new(breaks, segs)
    }

    /// Near-extremal Rellich profile: linear ramp of slope `expo` through
    /// (1, 1), clipped smoothly to 0 where it would cross zero (or cut in at
    /// r0 when it stays positive), C² blend of width δ at the kink r = 1 onto
    /// the power tail, C² decay over [r_cut, 2·r_cut].
    pub fn rellich_extremizer(expo: f64, r0: f64, delta: f64, r_cut: f64) -> Self {
        let c = expo;
        let ramp_left = 1.0 - 0.5 * delta;
        let mut breaks = Vec::new();
        let mut segs = Vec::new();
        if c > 1.0 {
            // Ramp crosses zero at r* = 1 − 1/c: clip there.
            let rstar = 1.0 - 1.0 / c;
            let w = (0.5 * delta).min(0.5 * (ramp_left - rstar));
            breaks.push(rstar);
            breaks.push(rstar + w);
            segs.push(quintic_blend(
                rstar,
                rstar + w,
                EndState(0.0, 0.0, 0.0),
                EndState(c * w, c, 0.0),
            ));
        } else {
            // Ramp positive down to the origin: cut in over [r0/2, r0].
            let f_r0 = c * (r0 - 1.0) + 1.0;
            breaks.push(0.5 * r0);
            breaks.push(r0);
            segs.push(quintic_blend(
                0.5 * r0,
                r0,
                EndState(0.0, 0.0, 0.0),
                EndState(f_r0, c, 0.0),
            ));
        }
        breaks.push(ramp_left);
        segs.push(Seg::Affine { a: 1.0 - c, b: c });
        breaks.push(1.0 + 0.5 * delta);
        segs.push(quintic_blend(
            ramp_left,
            1.0 + 0.5 * delta,
            EndState(1.0 - 0.5 * c * delta, c, 0.0),
            power_state(1.0, -c, 1.0 + 0.5 * delta),
        ));
        breaks.push(r_cut);
        segs.push(Seg::Power { coef: 1.0, expo: -c });
        breaks.push(2.0 * r_cut);
        segs.push(quintic_blend(
            r_cut,
            2.0 * r_cut,
            power_state(1.0, -c, r_cut),
            EndState(0.0, 0.0, 0.0),
        ));
        Profile1D::new(breaks, segs)
    }

    /// e^{−β r²}, truncated where it falls below 1e−16.
    pub fn gaussian(beta: f64) -> Self {
        let r_trunc = (16.0 * std::f64::consts::LN_10 / beta).sqrt();
        Profile1D::new(
            vec![0.0, r_trunc],
            vec![Seg::ExpSq { amp: 1.0, beta }],
        )
    }

    /// r^expo on [lo, hi] with no cutoffs (used in identity checks).
    pub fn pure_power(expo: f64, lo: f64, hi: f64) -> Self {
        Profile1D::new(vec![lo, hi], vec![Seg::Power { coef: 1.0, expo }])
    }
}

impl Curve for Profile1D {
    fn eval2(&self, r: f64) -> (f64, f64, f64) {
        Profile1D::eval2(self, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Check that f, f′, f″ are continuous across every seam, probing with a
    /// step far below the adjacent segment widths and normalizing against
    /// local magnitude scales (steep narrow blends have large but continuous
    /// second derivatives).
    fn assert_c2_at_seams(p: &Profile1D) {
        let breaks = p.breaks();
        for (i, &b) in breaks.iter().enumerate() {
            let wl = if i > 0 { b - breaks[i - 1] } else { breaks[1] - b };
            let wr = if i + 1 < breaks.len() {
                breaks[i + 1] - b
            } else {
                b - breaks[i - 1]
            };
            let w = wl.min(wr);
            let h = 1e-6 * w;
            let mut sf: f64 = 1e-12;
            let mut sd: f64 = 1e-12;
            let mut ss: f64 = 1e-12;
            for t in [b - 0.5 * wl, b - 0.25 * wl, b + 0.25 * wr, b + 0.5 * wr] {
                let (f, d, s) = p.eval2(t);
                sf = sf.max(f.abs());
                sd = sd.max(d.abs());
                ss = ss.max(s.abs());
            }
            let (fl, dl, sl) = p.eval2(b - h);
            let (fr, dr, sr) = p.eval2(b + h);
            assert!(
                (fl - fr).abs() <= 1e-4 * sf + 3.0 * h * sd,
                "value jump {:.3e} at seam {b}",
                (fl - fr).abs()
            );
            assert!(
                (dl - dr).abs() <= 1e-4 * sd + 3.0 * h * ss,
                "derivative jump {:.3e} at seam {b}",
                (dl - dr).abs()
            );
            assert!(
                (sl - sr).abs() <= 2e-4 * ss.max(sd / w),
                "second-derivative jump {:.3e} at seam {b}",
                (sl - sr).abs()
            );
        }
    }

    #[test]
    fn bump_boundary_and_peak() {
        let p = Profile1D::bump(0.5, 2.0);
        let (f, d, s) = p.eval2(0.5);
        assert_eq!((f, d, s), (0.0, 0.0, 0.0));
        let (f, d, s) = p.eval2(2.0);
        assert_eq!((f, d, s), (0.0, 0.0, 0.0));
        let (f, d, _) = p.eval2(1.25);
        assert_relative_eq!(f, 1.0);
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
        assert_eq!(p.value(0.2), 0.0);
        assert_eq!(p.value(3.0), 0.0);
        assert_c2_at_seams(&p);
    }

    #[test]
    fn hardy_extremizer_values() {
        // expo = (Q+α−2)/2 + ε = 1.1 on ℍ¹ with α = 0, ε = 0.1.
        let p = Profile1D::hardy_extremizer(1.1, 1e-3, 0.05, 8.0);
        assert_relative_eq!(p.value(1.0), 1.0);
        assert_relative_eq!(p.value(0.5), 1.0);
        // Outside the blend, the pure power law: 2^{−1.1}.
        assert_relative_eq!(p.value(2.0), 2f64.powf(-1.1), max_relative = 1e-15);
        // Vanishes identically below r0/2 and above 2R.
        assert_eq!(p.eval2(4e-4), (0.0, 0.0, 0.0));
        assert_eq!(p.eval2(17.0), (0.0, 0.0, 0.0));
        assert_c2_at_seams(&p);
    }

    #[test]
    fn rellich_extremizer_ramp() {
        // Q = 6, α = 0: slope (Q+α−4)/2 + ε = 1 + ε.
        let eps = 0.2;
        let c = 1.0 + eps;
        let delta = 0.1;
        let p = Profile1D::rellich_extremizer(c, 1e-3, delta, 10.0);
        // Slope just below the blend window equals the ramp coefficient.
        let (_, d, _) = p.eval2(1.0 - delta);
        assert_relative_eq!(d, c, max_relative = 1e-12);
        // The kink at 1 is a corner maximum; a width-δ mollification sits
        // below it by (3/16)cδ + O(δ²), vanishing with δ.
        assert_abs_diff_eq!(p.value(1.0), 1.0, epsilon = 0.25 * c * delta);
        let fine = Profile1D::rellich_extremizer(c, 1e-3, delta / 16.0, 10.0);
        assert_abs_diff_eq!(fine.value(1.0), 1.0, epsilon = 0.25 * c * delta / 16.0);
        // Clipped to zero at the ramp root r* = 1 − 1/c.
        let rstar = 1.0 - 1.0 / c;
        assert_eq!(p.eval2(0.9 * rstar), (0.0, 0.0, 0.0));
        assert_c2_at_seams(&p);
    }

    #[test]
    fn rellich_extremizer_small_slope_cuts_at_r0() {
        // Slope < 1: ramp stays positive, so the inner cut sits at r0.
        let p = Profile1D::rellich_extremizer(0.7, 1e-2, 0.1, 10.0);
        assert_eq!(p.value(4e-3), 0.0);
        let (_, d, _) = p.eval2(0.5);
        assert_relative_eq!(d, 0.7, max_relative = 1e-12);
        assert_c2_at_seams(&p);
    }

    #[test]
    fn gaussian_truncation() {
        let p = Profile1D::gaussian(1.0);
        assert_relative_eq!(p.value(0.0), 1.0);
        assert_relative_eq!(p.value(1.0), (-1.0f64).exp());
        let r = p.outer();
        assert!(p.value(r - 1e-9) <= 1.001e-16);
        assert_eq!(p.value(r + 0.1), 0.0);
        let (f, d1, d2) = p.eval2(0.7);
        let e = (-0.49f64).exp();
        assert_relative_eq!(f, e, max_relative = 1e-14);
        assert_relative_eq!(d1, -1.4 * e, max_relative = 1e-14);
        assert_relative_eq!(d2, (4.0 * 0.49 - 2.0) * e, max_relative = 1e-14);
    }

    #[test]
    fn quintic_blend_matches_end_jets() {
        let seg = quintic_blend(2.0, 3.0, EndState(1.0, -0.5, 0.25), EndState(0.2, 0.1, -0.3));
        let (f, d, s) = seg.eval2(2.0);
        assert_relative_eq!(f, 1.0);
        assert_relative_eq!(d, -0.5);
        assert_relative_eq!(s, 0.25, max_relative = 1e-12);
        let (f, d, s) = seg.eval2(3.0);
        assert_relative_eq!(f, 0.2, max_relative = 1e-12);
        assert_relative_eq!(d, 0.1, max_relative = 1e-10);
        assert_relative_eq!(s, -0.3, max_relative = 1e-10);
    }

    #[test]
    fn wide_tail_blend_is_sane() {
        // The sweep families cut off at very large radii; the blend must not
        // lose conditioning there.
        let r_cut = 1e8;
        let p = Profile1D::hardy_extremizer(1.05, 1e-3, 0.25, r_cut);
        let (f, _, _) = p.eval2(1.5 * r_cut);
        assert!(f.is_finite() && f > 0.0 && f < r_cut.powf(-1.0));
        assert_eq!(p.value(2.1 * r_cut), 0.0);
    }
}
