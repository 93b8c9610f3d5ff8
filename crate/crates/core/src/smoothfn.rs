//! `C^7` test-function toolkit: the smooth step `psi`, window functions
//! sandwiching an indicator, bumps, polynomials and resolvent parts — all
//! with derivatives through order 7 evaluated by jet arithmetic — plus the
//! degree-6 almost-analytic extension, its `dbar` derivative in closed form,
//! and the Helffer–Sjostrand reconstruction integral.

use std::cell::Cell;
use std::sync::OnceLock;

use num_complex::Complex;
use thiserror::Error;

use crate::jet::{Jet, JET_ORDER};
use crate::quadrature::{integrate_with_breakpoints, QuadratureError, QuadratureSpec};
use crate::scalar::{real, Real};

#[derive(Debug, Error)]
pub enum SmoothFnError {
    #[error("bump requires a < b, got a={0}, b={1}")]
    BadBumpInterval(f64, f64),
    #[error("window requires alpha > omega > 0, got alpha={0}, omega={1}")]
    BadWindowWidths(f64, f64),
    #[error("resolvent test function requires Im z != 0")]
    RealResolventPole,
    #[error("polynomial presets carry at most degree 7, got degree {0}")]
    PolyDegreeTooHigh(usize),
    #[error("unknown function preset '{0}' (expected bump:a,b | window-:c,alpha,omega | window+:c,alpha,omega)")]
    UnknownPreset(String),
    #[error("preset '{0}': {1}")]
    BadPresetArgs(String, String),
    #[error("Helffer-Sjostrand reconstruction requires a compactly supported function")]
    NeedsCompactSupport,
    #[error("chi margin must be positive, got {0}")]
    BadChiMargin(f64),
    #[error("2-d quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
}

/// Where a function (and all its derivatives) is allowed to be nonzero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support<R: Real> {
    Compact { lo: R, hi: R },
    Unbounded,
}

#[derive(Clone, Debug)]
enum Kind<R: Real> {
    Psi,
    Bump { a: R, b: R },
    Window { center: R, alpha: R, omega: R, outer: bool },
    Poly { coeffs: Vec<R> },
    ResolventRe { zx: R, zy: R },
    ResolventIm { zx: R, zy: R },
    Sum(Box<SmoothFunction<R>>, Box<SmoothFunction<R>>),
    Scaled { k: R, inner: Box<SmoothFunction<R>> },
}

/// A smooth test function carrying its value, derivatives 1..=7, support and
/// a certified bound on the sup-norm of the seventh derivative.
#[derive(Clone, Debug)]
pub struct SmoothFunction<R: Real> {
    kind: Kind<R>,
    support: Support<R>,
    d7_sup: R,
}

/// Smallest inner-variable distance from a cutoff's flat edge at which the
/// `exp(-1/t)` jets are still evaluated; closer than this the coefficients
/// would overflow while the true values are far below underflow.
fn cutoff_edge<R: Real>() -> R {
    let overflow_floor = (real::<R>(1e8) / R::max_value()).powf(real(0.125));
    overflow_floor.max(real(1e-12))
}

/// Jet of the decreasing smooth step: 1 on `(-inf, 0]`, 0 on `[1, inf)`.
/// The input jet must be affine (an inner variable of the form `u0 + s*t`).
fn psi_jet<R: Real>(input: Jet<R>) -> Jet<R> {
    let edge = cutoff_edge::<R>();
    let t = input.value();
    if t <= edge {
        return Jet::constant(R::one());
    }
    if t >= R::one() - edge {
        return Jet::constant(R::zero());
    }
    let g_lo = input.recip().neg().exp(); // exp(-1/t)
    let g_hi = Jet::constant(R::one()).sub(input).recip().neg().exp(); // exp(-1/(1-t))
    g_hi.div(g_lo.add(g_hi))
}

/// Jet of the unit bump on `(a, b)`: positive inside, 1 at the midpoint.
fn bump_jet<R: Real>(a: R, b: R, t: R) -> Jet<R> {
    if t <= a || t >= b {
        return Jet::constant(R::zero());
    }
    let half_width = (b - a) * real(0.5);
    let mid = (a + b) * real(0.5);
    let u = Jet::affine((t - mid) / half_width, half_width.recip());
    let w = Jet::constant(R::one()).sub(u.mul(u));
    if w.value() <= cutoff_edge::<R>() {
        return Jet::constant(R::zero());
    }
    // exp(1 - 1/(1 - u^2)), normalized to peak exactly at 1.
    Jet::constant(R::one()).sub(w.recip()).exp()
}

/// Certified sup-norm bounds of `|psi^(k)|` for k = 0..=7 (margin included).
fn psi_deriv_bounds() -> &'static [f64; 8] {
    static BOUNDS: OnceLock<[f64; 8]> = OnceLock::new();
    BOUNDS.get_or_init(|| {
        let mut bounds = [0.0f64; 8];
        bounds[0] = 1.0;
        let n = 16384;
        for k in 1..n {
            let t = k as f64 / n as f64;
            let jet = psi_jet(Jet::<f64>::variable(t));
            for (order, slot) in bounds.iter_mut().enumerate().skip(1) {
                *slot = slot.max(jet.derivative(order).abs());
            }
        }
        for slot in bounds.iter_mut().skip(1) {
            *slot *= 1.10;
        }
        bounds
    })
}

const BINOM7: [f64; 8] = [1.0, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0, 1.0];

fn window_d7_sup<R: Real>(omega: R) -> R {
    let b = psi_deriv_bounds();
    let mut acc = 0.0f64;
    for k in 0..=7 {
        acc += BINOM7[k] * b[k] * b[7 - k];
    }
    real::<R>(acc) / omega.powi(JET_ORDER as i32)
}

fn bump_d7_sup<R: Real>(a: R, b: R) -> R {
    let n = 16384usize;
    let step = (b - a) / real(n as f64);
    let mut max = R::zero();
    for k in 1..n {
        let t = a + step * real(k as f64);
        max = max.max(bump_jet(a, b, t).derivative(7).abs());
    }
    max * real(1.05)
}

impl<R: Real> SmoothFunction<R> {
    /// The decreasing smooth step: 1 on `(-inf, 0]`, 0 on `[1, inf)`,
    /// strictly decreasing in between, `C^infinity`.
    pub fn psi() -> Self {
        SmoothFunction {
            kind: Kind::Psi,
            support: Support::Unbounded,
            d7_sup: real(psi_deriv_bounds()[7]),
        }
    }

    /// `C^infinity` bump, positive exactly on `(a, b)` with peak value 1.
    pub fn bump(a: R, b: R) -> Result<Self, SmoothFnError> {
        if !(a < b) {
            return Err(SmoothFnError::BadBumpInterval(
                a.to_f64().unwrap_or(f64::NAN),
                b.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(SmoothFunction {
            kind: Kind::Bump { a, b },
            support: Support::Compact { lo: a, hi: b },
            d7_sup: bump_d7_sup(a, b),
        })
    }

    /// Lower window: 0 outside `[c-alpha, c+alpha]`, 1 on
    /// `[c-alpha+omega, c+alpha-omega]`; sits below the indicator of
    /// `[c-alpha, c+alpha]`.
    pub fn window_minus(center: R, alpha: R, omega: R) -> Result<Self, SmoothFnError> {
        Self::window(center, alpha, omega, false)
    }

    /// Upper window: 1 on `[c-alpha, c+alpha]`, 0 outside
    /// `[c-alpha-omega, c+alpha+omega]`; sits above the same indicator.
    pub fn window_plus(center: R, alpha: R, omega: R) -> Result<Self, SmoothFnError> {
        Self::window(center, alpha, omega, true)
    }

    fn window(center: R, alpha: R, omega: R, outer: bool) -> Result<Self, SmoothFnError> {
        if !(alpha > omega && omega > R::zero()) {
            return Err(SmoothFnError::BadWindowWidths(
                alpha.to_f64().unwrap_or(f64::NAN),
                omega.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let pad = if outer { omega } else { R::zero() };
        Ok(SmoothFunction {
            kind: Kind::Window { center, alpha, omega, outer },
            support: Support::Compact {
                lo: center - alpha - pad,
                hi: center + alpha + pad,
            },
            d7_sup: window_d7_sup(omega),
        })
    }

    /// Polynomial `c0 + c1 t + ...` of degree at most 7.
    pub fn poly(coeffs: &[R]) -> Result<Self, SmoothFnError> {
        if coeffs.len() > JET_ORDER + 1 {
            return Err(SmoothFnError::PolyDegreeTooHigh(coeffs.len() - 1));
        }
        let c7 = coeffs.get(7).copied().unwrap_or_else(R::zero);
        Ok(SmoothFunction {
            kind: Kind::Poly { coeffs: coeffs.to_vec() },
            support: Support::Unbounded,
            d7_sup: c7.abs() * real(5040.0),
        })
    }

    /// The affine function `c0 + c1 t`.
    pub fn affine(c0: R, c1: R) -> Self {
        Self::poly(&[c0, c1]).expect("degree 1")
    }

    /// `(t - s)^2`, the quadratic centered at `s`.
    pub fn centered_square(s: R) -> Self {
        Self::poly(&[s * s, -(s + s), R::one()]).expect("degree 2")
    }

    /// Real part of `t -> 1/(z - t)`; requires `Im z != 0`.
    pub fn resolvent_re(z: Complex<R>) -> Result<Self, SmoothFnError> {
        if z.im == R::zero() {
            return Err(SmoothFnError::RealResolventPole);
        }
        Ok(SmoothFunction {
            kind: Kind::ResolventRe { zx: z.re, zy: z.im },
            support: Support::Unbounded,
            d7_sup: real::<R>(5040.0) / z.im.abs().powi(8),
        })
    }

    /// Imaginary part of `t -> 1/(z - t)`; requires `Im z != 0`.
    pub fn resolvent_im(z: Complex<R>) -> Result<Self, SmoothFnError> {
        if z.im == R::zero() {
            return Err(SmoothFnError::RealResolventPole);
        }
        Ok(SmoothFunction {
            kind: Kind::ResolventIm { zx: z.re, zy: z.im },
            support: Support::Unbounded,
            d7_sup: real::<R>(5040.0) / z.im.abs().powi(8),
        })
    }

    /// Pointwise sum.
    pub fn sum(f: Self, g: Self) -> Self {
        let support = match (f.support, g.support) {
            (Support::Compact { lo: a, hi: b }, Support::Compact { lo: c, hi: d }) => {
                Support::Compact { lo: a.min(c), hi: b.max(d) }
            }
            _ => Support::Unbounded,
        };
        let d7_sup = f.d7_sup + g.d7_sup;
        SmoothFunction {
            kind: Kind::Sum(Box::new(f), Box::new(g)),
            support,
            d7_sup,
        }
    }

    /// Pointwise scaling by `k`.
    pub fn scaled(k: R, inner: Self) -> Self {
        let support = inner.support;
        let d7_sup = inner.d7_sup * k.abs();
        SmoothFunction {
            kind: Kind::Scaled { k, inner: Box::new(inner) },
            support,
            d7_sup,
        }
    }

    /// Parse a named preset: `bump:a,b`, `window-:c,alpha,omega`,
    /// `window+:c,alpha,omega`.
    pub fn parse_preset(text: &str) -> Result<Self, SmoothFnError> {
        let (name, args) = match text.split_once(':') {
            Some(pair) => pair,
            None => return Err(SmoothFnError::UnknownPreset(text.to_string())),
        };
        let values: Result<Vec<R>, _> = args
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map(|v| real::<R>(v))
                    .map_err(|e| SmoothFnError::BadPresetArgs(text.to_string(), e.to_string()))
            })
            .collect();
        let values = values?;
        let want = |k: usize| -> Result<(), SmoothFnError> {
            if values.len() == k {
                Ok(())
            } else {
                Err(SmoothFnError::BadPresetArgs(
                    text.to_string(),
                    format!("expected {k} numeric arguments, got {}", values.len()),
                ))
            }
        };
        match name {
            "bump" => {
                want(2)?;
                Self::bump(values[0], values[1])
            }
            "window-" => {
                want(3)?;
                Self::window_minus(values[0], values[1], values[2])
            }
            "window+" => {
                want(3)?;
                Self::window_plus(values[0], values[1], values[2])
            }
            _ => Err(SmoothFnError::UnknownPreset(text.to_string())),
        }
    }

    pub fn support(&self) -> Support<R> {
        self.support
    }

    /// Certified bound on `sup |f^(7)|`.
    pub fn d7_sup(&self) -> R {
        self.d7_sup
    }

    /// Value and derivatives 0..=7 at `t`.
    pub fn jet(&self, t: R) -> Jet<R> {
        match &self.kind {
            Kind::Psi => psi_jet(Jet::variable(t)),
            Kind::Bump { a, b } => bump_jet(*a, *b, t),
            Kind::Window { center, alpha, omega, outer } => {
                if let Support::Compact { lo, hi } = self.support {
                    if t <= lo || t >= hi {
                        return Jet::constant(R::zero());
                    }
                }
                let inv = omega.recip();
                let up = t - *center - *alpha;
                let dn = t - *center + *alpha;
                let (lhs, rhs) = if *outer {
                    // psi((t-c-alpha)/omega) * psi(-(t-c+alpha)/omega)
                    (Jet::affine(up * inv, inv), Jet::affine(-(dn * inv), -inv))
                } else {
                    // psi(1+(t-c-alpha)/omega) * psi(1-(t-c+alpha)/omega)
                    (
                        Jet::affine(R::one() + up * inv, inv),
                        Jet::affine(R::one() - dn * inv, -inv),
                    )
                };
                psi_jet(lhs).mul(psi_jet(rhs))
            }
            Kind::Poly { coeffs } => {
                let mut acc = Jet::constant(R::zero());
                let var = Jet::variable(t);
                for &c in coeffs.iter().rev() {
                    acc = acc.mul(var).add(Jet::constant(c));
                }
                acc
            }
            Kind::ResolventRe { zx, zy } | Kind::ResolventIm { zx, zy } => {
                // d^k/dt^k 1/(z-t) = k! (z-t)^{-(k+1)}
                let w = Complex::new(*zx - t, *zy).inv();
                let take_re = matches!(self.kind, Kind::ResolventRe { .. });
                let mut power = w;
                let mut fact = R::one();
                let mut derivs = [R::zero(); 8];
                for (k, slot) in derivs.iter_mut().enumerate() {
                    if k > 0 {
                        fact = fact * real(k as f64);
                        power = power * w;
                    }
                    *slot = fact * if take_re { power.re } else { power.im };
                }
                Jet::from_derivatives(derivs)
            }
            Kind::Sum(f, g) => f.jet(t).add(g.jet(t)),
            Kind::Scaled { k, inner } => inner.jet(t).scale(*k),
        }
    }

    pub fn eval(&self, t: R) -> R {
        self.jet(t).value()
    }

    /// `k`-th derivative at `t`, `k <= 7`.
    pub fn deriv(&self, k: usize, t: R) -> R {
        self.jet(t).derivative(k)
    }
}

/// Almost-analytic extension of degree 6:
/// `phi6(x + iy) = sum_{k=0..6} (iy)^k phi^(k)(x) / k!`.
pub fn almost_analytic_ext<R: Real>(phi: &SmoothFunction<R>, z: Complex<R>) -> Complex<R> {
    let derivs = phi.jet(z.re).derivatives();
    let iy = Complex::new(R::zero(), z.im);
    let mut power = Complex::new(R::one(), R::zero());
    let mut fact = R::one();
    let mut acc = Complex::new(R::zero(), R::zero());
    for (k, &d) in derivs.iter().enumerate().take(7) {
        if k > 0 {
            fact = fact * real(k as f64);
            power = power * iy;
        }
        acc = acc + power * (d / fact);
    }
    acc
}

/// Closed form of `dbar phi6` at `z = x + iy`:
/// `(1/(2*6!)) (iy)^6 phi^(7)(x)`, which is the real value
/// `-y^6 phi^(7)(x) / 1440`.
pub fn dbar_extension<R: Real>(phi: &SmoothFunction<R>, z: Complex<R>) -> Complex<R> {
    let d7 = phi.jet(z.re).derivative(7);
    let y6 = z.im.powi(6);
    Complex::new(-y6 * d7 / real(1440.0), R::zero())
}

/// Helffer–Sjostrand reconstruction of `phi(x0)` from its almost-analytic
/// extension: evaluates `-(1/pi) int dbar(phi6 * chi)(z) / (z - x0) d^2 z`
/// with a smooth plane cutoff `chi` equal to 1 on the support of `phi`
/// inflated by `chi_margin` and vanishing outside twice that margin.
///
/// The integrand is conjugate-symmetric in `y`, so only the upper half plane
/// is integrated; the strip `|y| < 1e-6`, where the integrand is `O(y^5)`,
/// is excluded.
pub fn hs_reconstruct<R: Real>(
    phi: &SmoothFunction<R>,
    x0: R,
    chi_margin: R,
    q2d: &QuadratureSpec<R>,
) -> Result<R, SmoothFnError> {
    let (lo, hi) = match phi.support() {
        Support::Compact { lo, hi } => (lo, hi),
        Support::Unbounded => return Err(SmoothFnError::NeedsCompactSupport),
    };
    if !(chi_margin > R::zero()) {
        return Err(SmoothFnError::BadChiMargin(
            chi_margin.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let m = chi_margin;
    let inv_m = m.recip();

    // chi(x, y) = chi_x(x) * chi_y(y); on the x-support of phi6 the factor
    // chi_x is identically 1 and d/dx chi_x is 0, so only the y-factor
    // enters: dbar(phi6 chi) = chi_y * dbar(phi6) + (i/2) phi6 * chi_y'.
    let chi_y = move |y: R| -> Jet<R> {
        let up = psi_jet(Jet::affine((y - m) * inv_m, inv_m));
        let dn = psi_jet(Jet::affine((-y - m) * inv_m, -inv_m));
        up.mul(dn)
    };

    let y_cut: R = real(1e-6);
    let half_i = Complex::new(R::zero(), real::<R>(0.5));
    let inner_spec = q2d.tightened(real(0.1));
    let inner_error: Cell<Option<QuadratureError>> = Cell::new(None);

    let x_breaks = [x0];
    let outer = integrate_with_breakpoints(
        |y: R| -> Complex<R> {
            let chi = chi_y(y);
            let chi_val = chi.value();
            let chi_slope = chi.derivative(1);
            let inner = integrate_with_breakpoints(
                |x: R| -> Complex<R> {
                    let z = Complex::new(x, y);
                    let mut num = dbar_extension(phi, z).scale(chi_val);
                    if chi_slope != R::zero() {
                        num = num + half_i * almost_analytic_ext(phi, z) * chi_slope;
                    }
                    num * Complex::new(x - x0, y).inv()
                },
                lo,
                hi,
                &x_breaks,
                &inner_spec,
            );
            match inner {
                Ok(v) => v,
                Err(e) => {
                    if inner_error.take().is_none() {
                        inner_error.set(Some(e));
                    }
                    Complex::new(R::zero(), R::zero())
                }
            }
        },
        y_cut,
        m + m,
        &[m],
        q2d,
    )?;
    if let Some(e) = inner_error.take() {
        return Err(SmoothFnError::Quadrature(e));
    }
    // Lower half plane contributes the conjugate.
    let two_pi_inv = real::<R>(-2.0) / real::<R>(std::f64::consts::PI);
    Ok(outer.re * two_pi_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    type F64Fun = SmoothFunction<f64>;

    #[test]
    fn psi_plateau_values() {
        let psi = F64Fun::psi();
        assert_eq!(psi.eval(-1.0), 1.0);
        assert_eq!(psi.eval(0.0), 1.0);
        assert_eq!(psi.eval(2.0), 0.0);
        assert_eq!(psi.eval(1.0), 0.0);
        let a = psi.eval(0.3);
        let b = psi.eval(0.7);
        assert!(a > b, "psi must decrease: psi(0.3)={a}, psi(0.7)={b}");
        assert!(a > 0.0 && a < 1.0);
        assert!(b > 0.0 && b < 1.0);
    }

    #[test]
    fn psi_derivatives_vanish_off_transition() {
        let psi = F64Fun::psi();
        for &t in &[-0.5, -1e-9, 1.0 + 1e-9, 3.0] {
            for k in 1..=7 {
                assert_eq!(psi.deriv(k, t), 0.0, "order {k} at {t}");
            }
        }
    }

    #[test]
    fn bump_peak_and_support() {
        let b = F64Fun::bump(0.7, 0.9).unwrap();
        assert_relative_eq!(b.eval(0.8), 1.0, epsilon = 1e-14);
        assert_eq!(b.eval(0.65), 0.0);
        assert_eq!(b.eval(0.95), 0.0);
        assert_eq!(b.eval(0.7), 0.0);
        assert!(b.eval(0.75) > 0.0);
        assert!(matches!(b.support(), Support::Compact { lo, hi } if lo == 0.7 && hi == 0.9));
    }

    #[test]
    fn bump_rejects_empty_interval() {
        assert!(F64Fun::bump(0.9, 0.7).is_err());
        assert!(F64Fun::bump(0.5, 0.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences_low_orders() {
        // Orders 1..3 against central differences at step 1e-4.
        let h = 1e-4f64;
        let funcs: Vec<F64Fun> = vec![
            F64Fun::psi(),
            F64Fun::bump(0.7, 0.9).unwrap(),
            F64Fun::window_minus(0.5, 0.1, 0.02).unwrap(),
            F64Fun::window_plus(0.5, 0.1, 0.02).unwrap(),
        ];
        let grids: Vec<Vec<f64>> = vec![
            (1..100).map(|k| k as f64 / 100.0).collect(),
            (1..100).map(|k| 0.7 + 0.2 * k as f64 / 100.0).collect(),
            (1..100).map(|k| 0.38 + 0.24 * k as f64 / 100.0).collect(),
            (1..100).map(|k| 0.37 + 0.26 * k as f64 / 100.0).collect(),
        ];
        for (f, grid) in funcs.iter().zip(grids.iter()) {
            for &t in grid {
                let v = |x: f64| f.eval(x);
                let fd = [
                    (v(t + h) - v(t - h)) / (2.0 * h),
                    (v(t + h) - 2.0 * v(t) + v(t - h)) / (h * h),
                    (v(t + 2.0 * h) - 2.0 * v(t + h) + 2.0 * v(t - h) - v(t - 2.0 * h))
                        / (2.0 * h * h * h),
                ];
                for k in 1..=3 {
                    let d = f.deriv(k, t);
                    let tol = 1e-5 * (1.0 + d.abs());
                    assert!(
                        (d - fd[k - 1]).abs() <= tol.max(2e-4 * (1.0 + fd[k - 1].abs())),
                        "order {k} at t={t}: jet {d} vs fd {}",
                        fd[k - 1]
                    );
                }
            }
        }
    }

    #[test]
    fn window_sandwich_pointwise() {
        let (c, alpha, omega) = (0.5, 0.1, 0.02);
        let minus = F64Fun::window_minus(c, alpha, omega).unwrap();
        let plus = F64Fun::window_plus(c, alpha, omega).unwrap();
        assert_eq!(minus.eval(0.5), 1.0);
        assert_eq!(plus.eval(0.5), 1.0);
        assert_eq!(minus.eval(0.7), 0.0);
        assert_eq!(plus.eval(0.7), 0.0);
        for k in 0..=1000 {
            let t = 0.3 + 0.4 * k as f64 / 1000.0;
            let indicator = if (t - c).abs() <= alpha { 1.0 } else { 0.0 };
            let lo = minus.eval(t);
            let hi = plus.eval(t);
            assert!(lo <= indicator + 1e-15, "minus above indicator at {t}");
            assert!(indicator <= hi + 1e-15, "plus below indicator at {t}");
            assert!(lo >= 0.0 && hi <= 1.0 + 1e-15);
        }
        // Flat regions.
        assert_eq!(minus.eval(c - alpha + omega), 1.0);
        assert_eq!(plus.eval(c + alpha), 1.0);
        assert_eq!(plus.eval(c + alpha + omega), 0.0);
    }

    #[test]
    fn window_rejects_bad_widths() {
        assert!(F64Fun::window_minus(0.5, 0.02, 0.1).is_err());
        assert!(F64Fun::window_plus(0.5, 0.1, 0.1).is_err());
        assert!(F64Fun::window_plus(0.5, 0.1, 0.0).is_err());
    }

    #[test]
    fn d7_sup_certifies_sampled_seventh_derivative() {
        let funcs: Vec<(F64Fun, f64, f64)> = vec![
            (F64Fun::psi(), 0.0, 1.0),
            (F64Fun::bump(0.3, 0.7).unwrap(), 0.3, 0.7),
            (F64Fun::window_minus(0.5, 0.1, 0.03).unwrap(), 0.4, 0.6),
            (F64Fun::window_plus(0.5, 0.1, 0.03).unwrap(), 0.37, 0.63),
        ];
        for (f, lo, hi) in funcs {
            let bound = f.d7_sup();
            let mut max = 0.0f64;
            for k in 0..10_000 {
                let t = lo + (hi - lo) * (k as f64 + 0.5) / 10_000.0;
                max = max.max(f.deriv(7, t).abs());
            }
            assert!(
                max <= bound,
                "sampled |f^(7)| = {max:.4e} exceeds certified {bound:.4e}"
            );
            assert!(max > 0.0);
        }
    }

    #[test]
    fn window_d7_scales_like_omega_to_minus_seven() {
        let w1 = F64Fun::window_minus(0.5, 0.1, 0.02).unwrap();
        let w2 = F64Fun::window_minus(0.5, 0.1, 0.01).unwrap();
        assert_relative_eq!(w2.d7_sup() / w1.d7_sup(), 128.0, max_relative = 1e-12);
    }

    #[test]
    fn poly_and_resolvent_jets() {
        let p = F64Fun::poly(&[1.0, -2.0, 3.0]).unwrap(); // 1 - 2t + 3t^2
        assert_relative_eq!(p.eval(2.0), 9.0);
        assert_relative_eq!(p.deriv(1, 2.0), 10.0);
        assert_relative_eq!(p.deriv(2, 2.0), 6.0);
        assert_eq!(p.deriv(3, 2.0), 0.0);

        let z = Complex64::new(0.6, 0.5);
        let re = F64Fun::resolvent_re(z).unwrap();
        let im = F64Fun::resolvent_im(z).unwrap();
        for &t in &[0.0, 0.3, 0.9] {
            let w = (z - Complex64::new(t, 0.0)).inv();
            assert_relative_eq!(re.eval(t), w.re, max_relative = 1e-14);
            assert_relative_eq!(im.eval(t), w.im, max_relative = 1e-14);
            // first derivative: (z-t)^{-2}
            let w2 = w * w;
            assert_relative_eq!(re.deriv(1, t), w2.re, max_relative = 1e-13);
            assert_relative_eq!(im.deriv(1, t), w2.im, max_relative = 1e-13);
        }
        assert!(F64Fun::resolvent_re(Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn preset_parsing() {
        let b = F64Fun::parse_preset("bump:0.7,0.9").unwrap();
        assert!(matches!(b.support(), Support::Compact { lo, hi } if lo == 0.7 && hi == 0.9));
        assert!(F64Fun::parse_preset("window-:0.5,0.1,0.02").is_ok());
        assert!(F64Fun::parse_preset("window+:0.5,0.1,0.02").is_ok());
        assert!(F64Fun::parse_preset("gauss:0,1").is_err());
        assert!(F64Fun::parse_preset("bump:0.9,0.7").is_err());
        assert!(F64Fun::parse_preset("bump:a,b").is_err());
    }

    #[test]
    fn almost_analytic_on_real_axis_is_the_function() {
        let b = F64Fun::bump(0.2, 0.8).unwrap();
        for &x in &[0.3, 0.5, 0.77] {
            let v = almost_analytic_ext(&b, Complex64::new(x, 0.0));
            assert_relative_eq!(v.re, b.eval(x), max_relative = 1e-14);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn almost_analytic_quadratic_closed_form() {
        // t^2 at z = 1 + i: 1 + 2i + (i)^2 * 2/2 = 2i.
        let sq = F64Fun::poly(&[0.0, 0.0, 1.0]).unwrap();
        let v = almost_analytic_ext(&sq, Complex64::new(1.0, 1.0));
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(v.im, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn dbar_vanishes_for_low_degree_polynomials_and_on_axis() {
        let p = F64Fun::poly(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap(); // degree 6
        for &z in &[Complex64::new(0.3, 0.4), Complex64::new(-1.0, 2.0)] {
            assert_eq!(dbar_extension(&p, z), Complex64::new(0.0, 0.0));
        }
        let b = F64Fun::bump(0.0, 1.0).unwrap();
        assert_eq!(dbar_extension(&b, Complex64::new(0.5, 0.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dbar_closed_form_matches_finite_difference() {
        let b = F64Fun::bump(0.0, 1.0).unwrap();
        let h = 1e-5;
        for &(x, y) in &[(0.5, 0.3), (0.31, -0.22), (0.72, 0.11)] {
            let z = Complex64::new(x, y);
            let ext = |x: f64, y: f64| almost_analytic_ext(&b, Complex64::new(x, y));
            let ddx = (ext(x + h, y) - ext(x - h, y)) / (2.0 * h);
            let ddy = (ext(x, y + h) - ext(x, y - h)) / (2.0 * h);
            let fd = (ddx + Complex64::i() * ddy) * 0.5;
            let cf = dbar_extension(&b, z);
            assert!(
                (fd - cf).norm() <= 1e-6,
                "dbar mismatch at ({x},{y}): fd {fd}, closed {cf}"
            );
        }
    }

    #[test]
    fn hs_reconstruction_smoke() {
        let b = F64Fun::bump(0.3, 0.7).unwrap();
        let spec = QuadratureSpec::<f64> {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            ..Default::default()
        };
        let at_peak = hs_reconstruct(&b, 0.5, 0.5, &spec).unwrap();
        assert!(
            (at_peak - 1.0).abs() <= 1e-4,
            "reconstruction at peak: {at_peak}"
        );
        let outside = hs_reconstruct(&b, 0.9, 0.5, &spec).unwrap();
        assert!(outside.abs() <= 1e-4, "reconstruction outside: {outside}");
    }

    #[test]
    fn hs_requires_compact_support_and_positive_margin() {
        let spec = QuadratureSpec::<f64>::default();
        let aff = F64Fun::affine(1.0, 2.0);
        assert!(matches!(
            hs_reconstruct(&aff, 0.0, 0.5, &spec),
            Err(SmoothFnError::NeedsCompactSupport)
        ));
        let b = F64Fun::bump(0.0, 1.0).unwrap();
        assert!(hs_reconstruct(&b, 0.5, 0.0, &spec).is_err());
    }

    #[test]
    fn f32_instantiation_evaluates() {
        let b = SmoothFunction::<f32>::bump(0.2, 0.8).unwrap();
        assert!((b.eval(0.5) - 1.0).abs() < 1e-6);
        let psi = SmoothFunction::<f32>::psi();
        assert_eq!(psi.eval(-1.0), 1.0);
        assert_eq!(psi.eval(1.5), 0.0);
        assert!(psi.eval(0.4) > psi.eval(0.6));
    }
}
