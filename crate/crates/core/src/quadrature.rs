//! One-dimensional quadrature: adaptive bisection on Gauss–Kronrod 7/15
//! panels, plus a fixed composite variant, for real- or complex-valued
//! integrands.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{real, Real};

/// 15-point Kronrod abscissae (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded 7-point Gauss weights (for `XGK[1], XGK[3], XGK[5], XGK[7]`).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// 16-point Gauss–Legendre rule on [-1, 1] (positive abscissae and weights);
/// used as the fixed rule inside removable-singularity zones.
pub(crate) const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];

pub(crate) const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadMethod {
    /// Bisection refinement driven by the Kronrod error estimate.
    Adaptive,
    /// Fixed uniform composite rule with `max_subdivisions` panels.
    Composite,
}

/// Tolerances and budgets for the quadrature routines.
///
/// `singularity_delta` is the half-width of the Taylor-switch zone around
/// the removable singularity of the first-order integrand; see
/// [`crate::theory::xi_direct`].
#[derive(Clone, Debug)]
pub struct QuadratureSpec<R: Real> {
    pub method: QuadMethod,
    pub abs_tol: R,
    pub rel_tol: R,
    pub max_subdivisions: usize,
    pub singularity_delta: R,
}

impl<R: Real> Default for QuadratureSpec<R> {
    fn default() -> Self {
        QuadratureSpec {
            method: QuadMethod::Adaptive,
            abs_tol: real(1e-10),
            rel_tol: real(1e-9),
            max_subdivisions: 2000,
            singularity_delta: real(1e-3),
        }
    }
}

impl<R: Real> QuadratureSpec<R> {
    /// Default spec with the singularity zone scaled to a support width.
    pub fn for_support_width(width: R) -> Self {
        QuadratureSpec {
            singularity_delta: real::<R>(1e-3) * width,
            ..Self::default()
        }
    }

    /// Same spec with both tolerances multiplied by `factor` (< 1 tightens).
    pub fn tightened(&self, factor: R) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > R::zero()) || !(self.rel_tol > R::zero()) {
            return Err(QuadratureError::InvalidSpec(
                "tolerances must be positive".into(),
            ));
        }
        if !(self.singularity_delta > R::zero()) {
            return Err(QuadratureError::InvalidSpec(
                "singularity_delta must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidSpec(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not converge within {max_subdivisions} subdivisions \
         (error estimate {error_estimate:.3e}, tolerance {tolerance:.3e})"
    )]
    NonConvergence {
        max_subdivisions: usize,
        error_estimate: f64,
        tolerance: f64,
    },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("integration bounds must be finite, got [{0}, {1}]")]
    BadBounds(f64, f64),
}

/// Values an integrand may take: the scalar itself or a complex pair.
pub trait QuadValue<R: Real>: Copy + Send {
    fn zero() -> Self;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn scale(self, k: R) -> Self;
    fn norm(self) -> R;
}

impl<R: Real> QuadValue<R> for R {
    fn zero() -> Self {
        R::zero()
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn scale(self, k: R) -> Self {
        self * k
    }
    fn norm(self) -> R {
        self.abs()
    }
}

impl<R: Real> QuadValue<R> for Complex<R> {
    fn zero() -> Self {
        Complex::new(R::zero(), R::zero())
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn scale(self, k: R) -> Self {
        Complex::new(self.re * k, self.im * k)
    }
    fn norm(self) -> R {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

struct PanelResult<R: Real, V> {
    value: V,
    error: R,
}

/// One Gauss–Kronrod 7/15 panel with the QUADPACK error rescaling.
fn gk15_panel<R: Real, V: QuadValue<R>, F: Fn(R) -> V>(f: &F, a: R, b: R) -> PanelResult<R, V> {
    let half = real::<R>(0.5);
    let center = (a + b) * half;
    let half_len = (b - a) * half;

    let f_center = f(center);
    let mut kronrod = f_center.scale(real(WGK[7]));
    let mut gauss = f_center.scale(real(WG[3]));
    let mut res_abs = f_center.norm() * real(WGK[7]);

    let mut samples = [V::zero(); 15];
    samples[7] = f_center;
    for (i, &x) in XGK.iter().take(7).enumerate() {
        let dx = half_len * real(x);
        let lo = f(center - dx);
        let hi = f(center + dx);
        samples[i] = lo;
        samples[14 - i] = hi;
        let pair = lo.add(hi);
        kronrod = kronrod.add(pair.scale(real(WGK[i])));
        res_abs = res_abs + (lo.norm() + hi.norm()) * real(WGK[i]);
        if i % 2 == 1 {
            gauss = gauss.add(pair.scale(real(WG[i / 2])));
        }
    }

    // res_asc: deviation from the panel mean, for the QUADPACK error model.
    let mean = kronrod.scale(half);
    let mut res_asc = samples[7].sub(mean).norm() * real(WGK[7]);
    for i in 0..7 {
        res_asc = res_asc
            + (samples[i].sub(mean).norm() + samples[14 - i].sub(mean).norm()) * real(WGK[i]);
    }

    let width = half_len.abs();
    let value = kronrod.scale(half_len);
    let res_abs = res_abs * width;
    let res_asc = res_asc * width;

    let mut err = kronrod.sub(gauss).scale(half_len).norm();
    if res_asc != R::zero() && err != R::zero() {
        let scale = (real::<R>(200.0) * err / res_asc).powf(real(1.5));
        err = if scale < R::one() { res_asc * scale } else { res_asc };
    }
    let tiny = R::min_positive_value() / (real::<R>(50.0) * R::epsilon());
    if res_abs > tiny {
        err = err.max(real::<R>(50.0) * R::epsilon() * res_abs);
    }

    PanelResult { value, error: err }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<R: Real, V: QuadValue<R>, F: Fn(R) -> V>(
    f: F,
    a: R,
    b: R,
    spec: &QuadratureSpec<R>,
) -> Result<V, QuadratureError> {
    integrate_with_breakpoints(f, a, b, &[], spec)
}

/// Integrate `f` over `[a, b]`, forcing panel boundaries at the given
/// breakpoints (kernel jumps, singularity-zone edges, support edges).
pub fn integrate_with_breakpoints<R: Real, V: QuadValue<R>, F: Fn(R) -> V>(
    f: F,
    a: R,
    b: R,
    breakpoints: &[R],
    spec: &QuadratureSpec<R>,
) -> Result<V, QuadratureError> {
    spec.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::BadBounds(
            a.to_f64().unwrap_or(f64::NAN),
            b.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if a == b {
        return Ok(V::zero());
    }
    if b < a {
        let v = integrate_with_breakpoints(f, b, a, breakpoints, spec)?;
        return Ok(V::zero().sub(v));
    }

    let mut cuts: Vec<R> = breakpoints
        .iter()
        .copied()
        .filter(|t| *t > a && *t < b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for c in cuts {
        segments.push((lo, c));
        lo = c;
    }
    segments.push((lo, b));

    match spec.method {
        QuadMethod::Composite => Ok(composite(&f, &segments, spec)),
        QuadMethod::Adaptive => adaptive(&f, &segments, b - a, spec),
    }
}

fn composite<R: Real, V: QuadValue<R>, F: Fn(R) -> V>(
    f: &F,
    segments: &[(R, R)],
    spec: &QuadratureSpec<R>,
) -> V {
    let total: R = segments.iter().map(|&(lo, hi)| hi - lo).sum();
    let mut acc = V::zero();
    for &(lo, hi) in segments {
        let frac = ((hi - lo) / total).to_f64().unwrap_or(0.0);
        let panels = ((spec.max_subdivisions as f64 * frac).ceil() as usize).max(1);
        let step = (hi - lo) / real(panels as f64);
        for k in 0..panels {
            let pa = lo + step * real(k as f64);
            let pb = if k + 1 == panels { hi } else { pa + step };
            acc = acc.add(gk15_panel(f, pa, pb).value);
        }
    }
    acc
}

fn adaptive<R: Real, V: QuadValue<R>, F: Fn(R) -> V>(
    f: &F,
    segments: &[(R, R)],
    total_len: R,
    spec: &QuadratureSpec<R>,
) -> Result<V, QuadratureError> {
    // First pass fixes the magnitude scale for the relative tolerance.
    let mut estimate_norm = R::zero();
    for &(lo, hi) in segments {
        estimate_norm = estimate_norm + gk15_panel(f, lo, hi).value.norm();
    }
    let tol = spec.abs_tol.max(spec.rel_tol * estimate_norm);

    // Panels narrower than this are accepted unconditionally; further
    // bisection would only churn rounding noise.
    let width_floor = total_len * R::epsilon() * real(64.0);

    let mut stack: Vec<(R, R)> = segments.to_vec();
    let mut splits = 0usize;
    let mut acc = V::zero();
    let mut err_acc = R::zero();

    while let Some((lo, hi)) = stack.pop() {
        let panel = gk15_panel(f, lo, hi);
        let len = hi - lo;
        let local_tol = tol * (len / total_len);
        if panel.error <= local_tol || len <= width_floor {
            acc = acc.add(panel.value);
            err_acc = err_acc + panel.error;
            continue;
        }
        if splits >= spec.max_subdivisions {
            // Finish the outstanding panels to report a defensible estimate.
            let mut rem_err = panel.error;
            let mut rem_val = panel.value;
            while let Some((l2, h2)) = stack.pop() {
                let p2 = gk15_panel(f, l2, h2);
                rem_val = rem_val.add(p2.value);
                rem_err = rem_err + p2.error;
            }
            let _ = rem_val;
            return Err(QuadratureError::NonConvergence {
                max_subdivisions: spec.max_subdivisions,
                error_estimate: (err_acc + rem_err).to_f64().unwrap_or(f64::NAN),
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        splits += 1;
        let mid = (lo + hi) * real(0.5);
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    Ok(acc)
}

/// Fixed 16-node Gauss–Legendre rule on `[0, 1]`.
pub(crate) fn gl16_unit<R: Real, F: Fn(R) -> R>(f: F) -> R {
    let half = real::<R>(0.5);
    let mut acc = R::zero();
    for (&x, &w) in GL16_X.iter().zip(GL16_W.iter()) {
        let xr: R = real(x);
        let wr: R = real(w);
        let u_plus = half * (R::one() + xr);
        let u_minus = half * (R::one() - xr);
        acc = acc + wr * half * (f(u_plus) + f(u_minus));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn polynomial_is_exact() {
        let spec = QuadratureSpec::<f64>::default();
        let v = integrate(|t| t * t, 0.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn log_endpoint_singularity() {
        let spec = QuadratureSpec::<f64>::default();
        let v = integrate(|t: f64| t.ln(), 0.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn interior_log_singularity_with_breakpoint() {
        let spec = QuadratureSpec::<f64>::default();
        // int_0^1 ln|t - 0.3| dt = 0.3 ln 0.3 + 0.7 ln 0.7 - 1
        let expected = 0.3 * 0.3f64.ln() + 0.7 * 0.7f64.ln() - 1.0;
        let v =
            integrate_with_breakpoints(|t: f64| (t - 0.3).abs().ln(), 0.0, 1.0, &[0.3], &spec)
                .unwrap();
        assert_relative_eq!(v, expected, epsilon = 1e-9);
    }

    #[test]
    fn complex_resolvent_closed_form() {
        let spec = QuadratureSpec::<f64>::default();
        let z = Complex64::new(0.5, 1.0);
        let v: Complex64 =
            integrate(|t: f64| (z - Complex64::new(t, 0.0)).inv(), 0.0, 1.0, &spec).unwrap();
        let expected = (z / (z - 1.0)).ln();
        assert_relative_eq!(v.re, expected.re, epsilon = 1e-12);
        assert_relative_eq!(v.im, expected.im, epsilon = 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let spec = QuadratureSpec::<f64> {
            max_subdivisions: 3,
            ..Default::default()
        };
        let r = integrate(|t: f64| (t - 0.37).abs().sqrt().recip().min(1e12), 0.0, 1.0, &spec);
        assert!(matches!(r, Err(QuadratureError::NonConvergence { .. })));
    }

    #[test]
    fn composite_matches_adaptive_on_smooth_integrand() {
        let adaptive = QuadratureSpec::<f64>::default();
        let composite = QuadratureSpec::<f64> {
            method: QuadMethod::Composite,
            max_subdivisions: 64,
            ..Default::default()
        };
        let f = |t: f64| (3.0 * t).sin() * (-t).exp();
        let a = integrate(f, 0.0, 2.0, &adaptive).unwrap();
        let c = integrate(f, 0.0, 2.0, &composite).unwrap();
        assert_relative_eq!(a, c, epsilon = 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let spec = QuadratureSpec::<f64>::default();
        let v = integrate(|t: f64| t, 1.0, 0.0, &spec).unwrap();
        assert_relative_eq!(v, -0.5, epsilon = 1e-13);
    }

    #[test]
    fn gl16_integrates_high_degree_polynomials() {
        // Exact for degree <= 31.
        let v = gl16_unit(|u: f64| u.powi(10));
        assert_relative_eq!(v, 1.0 / 11.0, epsilon = 1e-14);
    }

    #[test]
    fn f32_instantiation_works() {
        let spec = QuadratureSpec::<f32> {
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            ..Default::default()
        };
        let v = integrate(|t: f32| t * t, 0.0f32, 1.0f32, &spec).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-5);
    }
}
