//! Second-order multivariate forward-mode jets.
//!
//! A [`Dual2`] carries a value, a gradient and a symmetric Hessian with
//! respect to up to [`MAX_DIM`] coordinate variables. All arithmetic
//! propagates exact first and second derivatives through the chain rule,
//! which is what lets the calculus layer evaluate horizontal gradients and
//! sub-Laplacians without finite differences.
//!
//! Storage is fixed-size so jets are `Copy` and evaluation loops allocate
//! nothing; the active variable count `n` is carried at runtime.

use crate::group::MAX_DIM;

const HESS_LEN: usize = MAX_DIM * (MAX_DIM + 1) / 2;

/// Packed index into the upper triangle (i ≤ j).
#[inline]
fn ut(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    a * MAX_DIM + b - a * (a + 1) / 2
}

/// Value + gradient + symmetric Hessian over `n ≤ MAX_DIM` variables.
#[derive(Debug, Clone, Copy)]
pub struct Dual2 {
    n: u8,
    val: f64,
    grad: [f64; MAX_DIM],
    hess: [f64; HESS_LEN],
}

impl Dual2 {
    pub fn constant(val: f64, n: usize) -> Self {
        debug_assert!(n <= MAX_DIM);
        Dual2 {
            n: n as u8,
            val,
            grad: [0.0; MAX_DIM],
            hess: [0.0; HESS_LEN],
        }
    }

    /// The `i`-th coordinate variable seeded with unit derivative.
    pub fn variable(val: f64, i: usize, n: usize) -> Self {
        let mut d = Self::constant(val, n);
        d.grad[i] = 1.0;
        d
    }

    pub fn value(&self) -> f64 {
        self.val
    }

    pub fn nvars(&self) -> usize {
        self.n as usize
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.n as usize]
    }

    /// Second partial ∂²/∂xᵢ∂xⱼ.
    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[ut(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        let n = self.n as usize;
        self.val.is_finite()
            && self.grad[..n].iter().all(|g| g.is_finite())
            && (0..n).all(|i| (i..n).all(|j| self.hess[ut(i, j)].is_finite()))
    }

    /// Apply a scalar function given its value and first two derivatives at
    /// `self.val`: (f∘u)' = f'·u', (f∘u)'' = f'·u'' + f''·u'⊗u'.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.n as usize;
        let mut out = Self::constant(f0, n);
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let idx = ut(i, j);
                out.hess[idx] = f1 * self.hess[idx] + f2 * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn powf(&self, p: f64) -> Self {
        let v = self.val;
        self.chain(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }

    pub fn powi(&self, p: i32) -> Self {
        let v = self.val;
        self.chain(
            v.powi(p),
            f64::from(p) * v.powi(p - 1),
            f64::from(p) * f64::from(p - 1) * v.powi(p - 2),
        )
    }

    pub fn sqrt(&self) -> Self {
        let s = self.val.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn exp(&self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Self {
        let v = self.val;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn recip(&self) -> Self {
        let v = self.val;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn scale(&self, c: f64) -> Self {
        let n = self.n as usize;
        let mut out = *self;
        out.val *= c;
        for g in out.grad[..n].iter_mut() {
            *g *= c;
        }
        for h in out.hess.iter_mut() {
            *h *= c;
        }
        out
    }

    /// Rescale each variable: if this is the jet of φ(y) at y = T(x) with
    /// T diagonal (yᵢ = wᵢxᵢ), this returns the jet of φ∘T at x.
    pub fn scale_coords(&self, weights: &[f64]) -> Self {
        let n = self.n as usize;
        debug_assert_eq!(weights.len(), n);
        let mut out = *self;
        for i in 0..n {
            out.grad[i] *= weights[i];
        }
        for i in 0..n {
            for j in i..n {
                out.hess[ut(i, j)] *= weights[i] * weights[j];
            }
        }
        out
    }
}

impl std::ops::Add for Dual2 {
    type Output = Dual2;
    fn add(self, rhs: Dual2) -> Dual2 {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self;
        out.val += rhs.val;
        for i in 0..self.n as usize {
            out.grad[i] += rhs.grad[i];
        }
        for (h, r) in out.hess.iter_mut().zip(rhs.hess.iter()) {
            *h += r;
        }
        out
    }
}

impl std::ops::Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, rhs: Dual2) -> Dual2 {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self;
        out.val -= rhs.val;
        for i in 0..self.n as usize {
            out.grad[i] -= rhs.grad[i];
        }
        for (h, r) in out.hess.iter_mut().zip(rhs.hess.iter()) {
            *h -= r;
        }
        out
    }
}

impl std::ops::Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, rhs: Dual2) -> Dual2 {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n as usize;
        let mut out = Self::constant(self.val * rhs.val, n);
        for i in 0..n {
            out.grad[i] = self.grad[i] * rhs.val + self.val * rhs.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let idx = ut(i, j);
                out.hess[idx] = self.hess[idx] * rhs.val
                    + self.val * rhs.hess[idx]
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
            }
        }
        out
    }
}

impl std::ops::Div for Dual2 {
    type Output = Dual2;
    fn div(self, rhs: Dual2) -> Dual2 {
        self * rhs.recip()
    }
}

impl std::ops::Add<f64> for Dual2 {
    type Output = Dual2;
    fn add(self, rhs: f64) -> Dual2 {
        let mut out = self;
        out.val += rhs;
        out
    }
}

impl std::ops::Mul<f64> for Dual2 {
    type Output = Dual2;
    fn mul(self, rhs: f64) -> Dual2 {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// f(x, y) = x²y + 3y at (2, 5).
    #[test]
    fn polynomial_derivatives() {
        let x = Dual2::variable(2.0, 0, 2);
        let y = Dual2::variable(5.0, 1, 2);
        let f = x * x * y + y * 3.0;
        assert_relative_eq!(f.value(), 35.0);
        assert_relative_eq!(f.gradient()[0], 20.0); // 2xy
        assert_relative_eq!(f.gradient()[1], 7.0); // x² + 3
        assert_relative_eq!(f.hess(0, 0), 10.0); // 2y
        assert_relative_eq!(f.hess(0, 1), 4.0); // 2x
        assert_relative_eq!(f.hess(1, 1), 0.0);
    }

    /// f(x, y) = exp(−(x² + y²)) at (0.7, −0.3); hand-derived Hessian.
    #[test]
    fn gaussian_derivatives() {
        let (a, b) = (0.7, -0.3);
        let x = Dual2::variable(a, 0, 2);
        let y = Dual2::variable(b, 1, 2);
        let f = (-(x * x + y * y)).exp();
        let e = (-(a * a + b * b) as f64).exp();
        assert_relative_eq!(f.value(), e, max_relative = 1e-15);
        assert_relative_eq!(f.gradient()[0], -2.0 * a * e, max_relative = 1e-14);
        assert_relative_eq!(f.hess(0, 0), (4.0 * a * a - 2.0) * e, max_relative = 1e-14);
        assert_relative_eq!(f.hess(0, 1), 4.0 * a * b * e, max_relative = 1e-14);
    }

    /// d²/dx² x^{5/2} = (15/4) x^{1/2}; also via sqrt and division routes.
    #[test]
    fn fractional_power_routes_agree() {
        let v = 1.7;
        let x = Dual2::variable(v, 0, 1);
        let p = x.powf(2.5);
        let q = x * x * x.sqrt();
        let r = x * x * x / x.sqrt();
        for d in [p, q, r] {
            assert_relative_eq!(d.value(), v.powf(2.5), max_relative = 1e-14);
            assert_relative_eq!(d.gradient()[0], 2.5 * v.powf(1.5), max_relative = 1e-14);
            assert_relative_eq!(d.hess(0, 0), 3.75 * v.sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn ln_recip_consistency() {
        let v = 0.41;
        let x = Dual2::variable(v, 0, 1);
        let a = x.recip();
        let b = (-x.ln()).exp();
        assert_relative_eq!(a.value(), b.value(), max_relative = 1e-14);
        assert_relative_eq!(a.gradient()[0], b.gradient()[0], max_relative = 1e-13);
        assert_relative_eq!(a.hess(0, 0), b.hess(0, 0), max_relative = 1e-13);
    }

    #[test]
    fn constants_have_zero_jets() {
        let c = Dual2::constant(4.2, 3);
        assert_eq!(c.gradient(), &[0.0; 3]);
        assert_eq!(c.hess(2, 2), 0.0);
    }
}
