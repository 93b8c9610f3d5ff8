//! Truncated Taylor arithmetic of order 7.
//!
//! A [`Jet`] holds the scaled Taylor coefficients `f(x), f'(x), f''(x)/2!,
//! ..., f^(7)(x)/7!` of a function at a point. Sums, products, quotients and
//! `exp` of jets implement the corresponding differentiation rules exactly,
//! so the smooth test functions obtain closed-form derivatives through order
//! 7 with no finite differencing.

use crate::scalar::{real, Real};

/// Highest derivative order carried by a jet.
pub const JET_ORDER: usize = 7;
const LEN: usize = JET_ORDER + 1;

const FACTORIALS: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

/// Taylor coefficients of a function at a point, through order 7.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<R: Real> {
    coeff: [R; LEN],
}

impl<R: Real> Jet<R> {
    /// Jet of the constant function `c`.
    pub fn constant(c: R) -> Self {
        let mut coeff = [R::zero(); LEN];
        coeff[0] = c;
        Jet { coeff }
    }

    /// Jet of the identity `t -> t` at the point `x`.
    pub fn variable(x: R) -> Self {
        Self::affine(x, R::one())
    }

    /// Jet of an affine inner function `u(t) = value + slope * (t - t0)`,
    /// evaluated at `t0`.
    pub fn affine(value: R, slope: R) -> Self {
        let mut coeff = [R::zero(); LEN];
        coeff[0] = value;
        coeff[1] = slope;
        Jet { coeff }
    }

    /// Jet assembled from raw derivative values `f(x), f'(x), ..., f^(7)(x)`.
    pub fn from_derivatives(derivs: [R; LEN]) -> Self {
        let mut coeff = derivs;
        for (k, c) in coeff.iter_mut().enumerate() {
            *c = *c / real(FACTORIALS[k]);
        }
        Jet { coeff }
    }

    pub fn value(&self) -> R {
        self.coeff[0]
    }

    /// `k`-th derivative value, `k <= 7`.
    pub fn derivative(&self, k: usize) -> R {
        assert!(k <= JET_ORDER, "jet carries derivatives up to order 7");
        self.coeff[k] * real(FACTORIALS[k])
    }

    /// All derivative values `f(x), f'(x), ..., f^(7)(x)`.
    pub fn derivatives(&self) -> [R; LEN] {
        let mut out = [R::zero(); LEN];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff[k] * real(FACTORIALS[k]);
        }
        out
    }

    pub fn scale(mut self, k: R) -> Self {
        for c in &mut self.coeff {
            *c = *c * k;
        }
        self
    }

    pub fn neg(self) -> Self {
        self.scale(-R::one())
    }

    pub fn add(self, rhs: Self) -> Self {
        let mut coeff = self.coeff;
        for (c, r) in coeff.iter_mut().zip(rhs.coeff.iter()) {
            *c = *c + *r;
        }
        Jet { coeff }
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.add(rhs.neg())
    }

    /// Cauchy product (Leibniz rule).
    pub fn mul(self, rhs: Self) -> Self {
        let mut coeff = [R::zero(); LEN];
        for k in 0..LEN {
            let mut acc = R::zero();
            for i in 0..=k {
                acc = acc + self.coeff[i] * rhs.coeff[k - i];
            }
            coeff[k] = acc;
        }
        Jet { coeff }
    }

    /// Jet of `1 / self`; the leading coefficient must be nonzero.
    pub fn recip(self) -> Self {
        let a0 = self.coeff[0];
        let mut coeff = [R::zero(); LEN];
        coeff[0] = a0.recip();
        for k in 1..LEN {
            let mut acc = R::zero();
            for i in 1..=k {
                acc = acc + self.coeff[i] * coeff[k - i];
            }
            coeff[k] = -acc / a0;
        }
        Jet { coeff }
    }

    pub fn div(self, rhs: Self) -> Self {
        self.mul(rhs.recip())
    }

    /// Jet of `exp(self)`: `e_k = (1/k) * sum_{i=1..k} i * a_i * e_{k-i}`.
    pub fn exp(self) -> Self {
        let mut coeff = [R::zero(); LEN];
        coeff[0] = self.coeff[0].exp();
        for k in 1..LEN {
            let mut acc = R::zero();
            for i in 1..=k {
                acc = acc + real::<R>(i as f64) * self.coeff[i] * coeff[k - i];
            }
            coeff[k] = acc / real(k as f64);
        }
        Jet { coeff }
    }
}
